/** Synthetic dataset builders for the baseline tests. */

import * as fs from "node:fs";
import { Rng } from "../src/rng.js";
import { ALL_FEATURES, Dataset, FEATURE_HEADER, FeatureName, Sample, SplitName } from "../src/types.js";

function splitFor(i: number, n: number): SplitName {
  if (i < 0.7 * n) return "train";
  if (i < 0.85 * n) return "val";
  return "test";
}

function baseFeatures(rng: Rng): Record<FeatureName, number> {
  const features = {} as Record<FeatureName, number>;
  for (const name of ALL_FEATURES) {
    features[name] = name.startsWith("bot_") ? (rng.next() < 0.3 ? 1 : 0) : rng.gauss();
  }
  return features;
}

/** Labels linearly separable through t_stat; some sentinels sprinkled in. */
export function separableDataset(n: number, seed: number): Dataset {
  const rng = new Rng(seed);
  const samples: Sample[] = [];
  for (let i = 0; i < n; i++) {
    const label = rng.next() < 0.5;
    const features = baseFeatures(rng);
    features.t_stat = (label ? 3.0 : -1.0) + 0.3 * rng.gauss();
    if (rng.next() < 0.15) features.return_6_10 = NaN;
    samples.push({
      wallet: `w${i}`,
      coin: `c${i % 25}`,
      firstTradeTs: 1000 + i,
      split: splitFor(i, n),
      label,
      features,
    });
  }
  return { samples };
}

/** Exactly one informative feature (return_all); everything else is noise. */
export function plantedDataset(n: number, seed: number): Dataset {
  const rng = new Rng(seed);
  const samples: Sample[] = [];
  for (let i = 0; i < n; i++) {
    const label = rng.next() < 0.5;
    const features = baseFeatures(rng);
    features.return_all = (label ? 0.9 : -0.9) + 0.25 * rng.gauss();
    samples.push({
      wallet: `w${i}`,
      coin: `c${i % 25}`,
      firstTradeTs: 1000 + i,
      split: splitFor(i, n),
      label,
      features,
    });
  }
  return { samples };
}

export function constantDataset(n: number, seed: number): Dataset {
  const rng = new Rng(seed);
  const samples: Sample[] = [];
  for (let i = 0; i < n; i++) {
    const features = {} as Record<FeatureName, number>;
    for (const name of ALL_FEATURES) features[name] = 1.0;
    samples.push({
      wallet: `w${i}`,
      coin: `c${i % 25}`,
      firstTradeTs: 1000 + i,
      split: splitFor(i, n),
      label: rng.next() < 0.5,
      features,
    });
  }
  return { samples };
}

export function writeFeatureCsv(dataset: Dataset, path: string): void {
  const lines = [FEATURE_HEADER.join(",")];
  for (const s of dataset.samples) {
    const cells: string[] = [s.wallet, s.coin, String(s.firstTradeTs), s.split, s.label ? "1" : "0"];
    for (const name of ALL_FEATURES) {
      const v = s.features[name];
      cells.push(Number.isNaN(v) ? "" : String(v));
    }
    lines.push(cells.join(","));
  }
  fs.writeFileSync(path, lines.join("\n") + "\n");
}
