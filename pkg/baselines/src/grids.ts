/**
 * Hyperparameter search spaces. `full` is the documented reference grid
 * per model; `fast` is a small subset for quick runs and the test suite.
 * Combinations enumerate in a fixed lexicographic order so ties in
 * validation AUC resolve to the smallest combination deterministically.
 */

import { GbdtParams } from "./gbdt.js";
import { LassoParams } from "./lasso.js";
import { NnParams } from "./nn.js";
import { ModelKind } from "./types.js";

export interface GridSpec {
  lasso: LassoParams[];
  gbdt: GbdtParams[];
  nn: NnParams[];
}

function cartesianGbdt(
  nEstimators: number[],
  maxDepth: number[],
  learningRate: number[],
  subsample: number[],
  colsample: number[],
  minChildWeight: number[],
  l2: number[]
): GbdtParams[] {
  const out: GbdtParams[] = [];
  for (const n of nEstimators)
    for (const d of maxDepth)
      for (const lr of learningRate)
        for (const sub of subsample)
          for (const col of colsample)
            for (const mcw of minChildWeight)
              for (const lambda of l2)
                out.push({
                  nEstimators: n,
                  maxDepth: d,
                  learningRate: lr,
                  subsample: sub,
                  colsample: col,
                  minChildWeight: mcw,
                  l2: lambda,
                });
  return out;
}

function cartesianNn(hidden: number[][], alpha: number[], lr: number[]): NnParams[] {
  const out: NnParams[] = [];
  for (const h of hidden)
    for (const a of alpha)
      for (const eta of lr) out.push({ hiddenLayers: h, alpha: a, learningRate: eta });
  return out;
}

export const FULL_GRID: GridSpec = {
  lasso: [{ C: 10 }, { C: 100 }, { C: 1000 }, { C: 10000 }],
  nn: cartesianNn(
    [[32], [32, 16], [32, 16, 8], [32, 16, 8, 4], [32, 16, 8, 4, 2]],
    [1e-5, 1e-4, 1e-3],
    [1e-4, 5e-4, 1e-3, 1e-2]
  ),
  gbdt: cartesianGbdt(
    [300, 600],
    [2, 3, 4, 6],
    [0.01, 0.05, 0.1],
    [0.7, 0.9, 1.0],
    [0.7, 0.9, 1.0],
    [1, 5, 10],
    [1, 5, 10]
  ),
};

export const FAST_GRID: GridSpec = {
  lasso: [{ C: 10 }, { C: 1000 }],
  nn: cartesianNn([[32], [32, 16]], [1e-4], [1e-3, 1e-2]).map((p) => ({
    ...p,
    maxEpochs: 60,
    patience: 6,
  })),
  gbdt: cartesianGbdt([60], [3], [0.1], [0.9], [0.9], [1], [1]),
};

export function gridFor(kind: ModelKind, name: "full" | "fast"): LassoParams[] | GbdtParams[] | NnParams[] {
  const spec = name === "full" ? FULL_GRID : FAST_GRID;
  return spec[kind];
}

export function describeParams(kind: ModelKind, params: object): string {
  return `${kind}(${JSON.stringify(params)})`;
}
