/**
 * Train-fitted preprocessing: median imputation with missing indicators,
 * winsorization at the 2.5/97.5 percentiles, then standardization to zero
 * mean and unit variance. All statistics come from the training split and
 * are applied unchanged to validation and test. Bot dummies and missing
 * indicators skip the continuous transforms.
 */

import { Rng } from "./rng.js";
import {
  ALL_FEATURES,
  DUMMY_FEATURES,
  FeatureName,
  NUMERIC_FEATURES,
  Sample,
} from "./types.js";

const WINSOR_LO = 2.5;
const WINSOR_HI = 97.5;

/** Linear-interpolation percentile over a sorted copy. */
export function percentile(values: number[], q: number): number {
  const sorted = [...values].sort((a, b) => a - b);
  if (sorted.length === 0) throw new Error("percentile of empty array");
  const pos = (q / 100) * (sorted.length - 1);
  const lo = Math.floor(pos);
  const hi = Math.ceil(pos);
  if (lo === hi) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo);
}

function median(values: number[]): number {
  return percentile(values, 50);
}

interface ColumnStats {
  medianValue: number;
  winsorLo: number;
  winsorHi: number;
  mean: number;
  std: number;
  hasMissingInTrain: boolean;
}

export interface DesignMatrix {
  /** Row-major feature matrix, one row per sample (input order preserved). */
  rows: number[][];
  /** One entry per matrix column, naming the base feature it derives from. */
  columnFeatures: string[];
  columnNames: string[];
}

export class Preprocessor {
  private stats = new Map<FeatureName, ColumnStats>();
  private indicatorFeatures: FeatureName[] = [];

  fit(train: Sample[]): this {
    if (train.length === 0) throw new Error("cannot fit a preprocessor on an empty training split");
    for (const name of ALL_FEATURES) {
      const raw = train.map((s) => s.features[name]);
      const present = raw.filter((v) => !Number.isNaN(v));
      const med = present.length ? median(present) : 0;
      const imputed = raw.map((v) => (Number.isNaN(v) ? med : v));
      const isDummy = (DUMMY_FEATURES as readonly string[]).includes(name);
      let winsorLo = -Infinity;
      let winsorHi = Infinity;
      let values = imputed;
      if (!isDummy) {
        winsorLo = percentile(imputed, WINSOR_LO);
        winsorHi = percentile(imputed, WINSOR_HI);
        values = imputed.map((v) => Math.min(Math.max(v, winsorLo), winsorHi));
      }
      const mean = values.reduce((a, b) => a + b, 0) / values.length;
      const variance = values.reduce((a, b) => a + (b - mean) ** 2, 0) / values.length;
      const std = Math.sqrt(variance);
      this.stats.set(name, {
        medianValue: med,
        winsorLo,
        winsorHi,
        mean,
        std,
        hasMissingInTrain: present.length < raw.length,
      });
    }
    this.indicatorFeatures = ALL_FEATURES.filter((n) => this.stats.get(n)!.hasMissingInTrain);
    return this;
  }

  get indicators(): readonly FeatureName[] {
    return this.indicatorFeatures;
  }

  /** Winsorize-only view, used by the idempotence tests. */
  clip(name: FeatureName, value: number): number {
    const s = this.stats.get(name)!;
    const v = Number.isNaN(value) ? s.medianValue : value;
    return Math.min(Math.max(v, s.winsorLo), s.winsorHi);
  }

  transform(samples: Sample[]): DesignMatrix {
    const columnFeatures: string[] = [];
    const columnNames: string[] = [];
    for (const name of NUMERIC_FEATURES) {
      columnFeatures.push(name);
      columnNames.push(name);
    }
    for (const name of DUMMY_FEATURES) {
      columnFeatures.push(name);
      columnNames.push(name);
    }
    for (const name of this.indicatorFeatures) {
      columnFeatures.push(name);
      columnNames.push(`${name}__missing`);
    }

    const rows = samples.map((sample) => {
      const row: number[] = [];
      for (const name of NUMERIC_FEATURES) {
        const s = this.stats.get(name)!;
        const clipped = this.clip(name, sample.features[name]);
        row.push(s.std > 0 ? (clipped - s.mean) / s.std : 0);
      }
      for (const name of DUMMY_FEATURES) {
        const v = sample.features[name];
        row.push(Number.isNaN(v) ? this.stats.get(name)!.medianValue : v);
      }
      for (const name of this.indicatorFeatures) {
        row.push(Number.isNaN(sample.features[name]) ? 1 : 0);
      }
      return row;
    });
    return { rows, columnFeatures, columnNames };
  }
}

/** Permute, per base feature, every derived column together (10 seeded
 * shuffles are averaged by the caller). */
export function permuteFeature(matrix: DesignMatrix, feature: string, rng: Rng): number[][] {
  const columns = matrix.columnFeatures
    .map((f, i) => (f === feature ? i : -1))
    .filter((i) => i >= 0);
  const order = rng.shuffle(Array.from({ length: matrix.rows.length }, (_, i) => i));
  return matrix.rows.map((row, r) => {
    const out = [...row];
    for (const c of columns) out[c] = matrix.rows[order[r]][c];
    return out;
  });
}
