/**
 * Normalized feature importances, one variant per model family:
 * absolute coefficients for the linear model, accumulated split gain for
 * the boosted trees, and permutation importance (mean validation AUC drop
 * over 10 seeded shuffles) for the network. Derived columns (missing
 * indicators) fold back into their base feature; collinear duplicates of
 * a feature therefore split the linear model's mass between themselves.
 */

import { aucRank } from "./auc.js";
import { GbdtModel } from "./gbdt.js";
import { LassoModel } from "./lasso.js";
import { NnModel } from "./nn.js";
import { DesignMatrix, permuteFeature } from "./preprocess.js";
import { Rng } from "./rng.js";
import { predictAny } from "./train.js";
import { ALL_FEATURES, ModelKind } from "./types.js";

const PERMUTATION_ROUNDS = 10;

function normalize(byFeature: Map<string, number>): Map<string, number> {
  let total = 0;
  for (const value of byFeature.values()) total += value;
  const out = new Map<string, number>();
  for (const name of ALL_FEATURES) {
    const v = byFeature.get(name) ?? 0;
    out.set(name, total > 0 ? v / total : 0);
  }
  return out;
}

export function lassoImportance(model: LassoModel, matrix: DesignMatrix): Map<string, number> {
  const byFeature = new Map<string, number>();
  matrix.columnFeatures.forEach((feature, c) => {
    byFeature.set(feature, (byFeature.get(feature) ?? 0) + Math.abs(model.weights[c]));
  });
  return normalize(byFeature);
}

export function gbdtImportance(model: GbdtModel, matrix: DesignMatrix): Map<string, number> {
  const byFeature = new Map<string, number>();
  matrix.columnFeatures.forEach((feature, c) => {
    byFeature.set(feature, (byFeature.get(feature) ?? 0) + model.gainByColumn[c]);
  });
  return normalize(byFeature);
}

export function permutationImportance(
  kind: ModelKind,
  model: LassoModel | GbdtModel | NnModel,
  valMatrix: DesignMatrix,
  valLabels: boolean[],
  seed: number
): Map<string, number> {
  const baseAuc = aucRank(predictAny(kind, model, valMatrix.rows), valLabels);
  const byFeature = new Map<string, number>();
  const features = [...new Set(valMatrix.columnFeatures)];
  for (const feature of features) {
    let dropSum = 0;
    for (let round = 0; round < PERMUTATION_ROUNDS; round++) {
      const rng = new Rng(seed * 1000 + round);
      const permuted = permuteFeature(valMatrix, feature, rng);
      dropSum += baseAuc - aucRank(predictAny(kind, model, permuted), valLabels);
    }
    // importances are defined non-negative; chance fluctuations clip at 0
    byFeature.set(feature, Math.max(dropSum / PERMUTATION_ROUNDS, 0));
  }
  return normalize(byFeature);
}
