import { describe, expect, it } from "vitest";

import { FAST_GRID } from "../src/grids.js";
import { gbdtImportance, lassoImportance, permutationImportance } from "../src/importance.js";
import { GbdtModel } from "../src/gbdt.js";
import { LassoModel } from "../src/lasso.js";
import { NnModel } from "../src/nn.js";
import { trainAndScore } from "../src/train.js";
import { plantedDataset } from "./synth.js";

const data = plantedDataset(400, 21);

function top(importances: Map<string, number>): string {
  let bestName = "";
  let bestValue = -1;
  for (const [name, value] of importances) {
    if (value > bestValue) {
      bestName = name;
      bestValue = value;
    }
  }
  return bestName;
}

function sum(importances: Map<string, number>): number {
  let total = 0;
  for (const v of importances.values()) total += v;
  return total;
}

describe("feature importance", () => {
  it("the planted feature tops all three variants and tables normalize to 1", () => {
    const lasso = trainAndScore(data, "lasso", FAST_GRID.lasso, 42);
    const lassoTable = lassoImportance(lasso.model as LassoModel, lasso.valMatrix);
    expect(top(lassoTable)).toBe("return_all");
    expect(Math.abs(sum(lassoTable) - 1)).toBeLessThanOrEqual(1e-9);

    const gbdt = trainAndScore(data, "gbdt", FAST_GRID.gbdt, 42);
    const gbdtTable = gbdtImportance(gbdt.model as GbdtModel, gbdt.valMatrix);
    expect(top(gbdtTable)).toBe("return_all");
    expect(Math.abs(sum(gbdtTable) - 1)).toBeLessThanOrEqual(1e-9);

    const nn = trainAndScore(data, "nn", FAST_GRID.nn, 42);
    const nnTable = permutationImportance("nn", nn.model as NnModel, nn.valMatrix, nn.valLabels, 42);
    expect(top(nnTable)).toBe("return_all");
    expect(Math.abs(sum(nnTable) - 1)).toBeLessThanOrEqual(1e-9);
  });

  it("permutation importance is non-negative everywhere", () => {
    const nn = trainAndScore(data, "nn", FAST_GRID.nn, 42);
    const table = permutationImportance("nn", nn.model as NnModel, nn.valMatrix, nn.valLabels, 42);
    for (const value of table.values()) expect(value).toBeGreaterThanOrEqual(0);
  });

  it("duplicated signal splits linear mass between the duplicates", () => {
    // Copy the informative column into a second feature: collinear inputs.
    const doubled = {
      samples: data.samples.map((s) => ({
        ...s,
        features: { ...s.features, return_1st: s.features.return_all },
      })),
    };
    const lasso = trainAndScore(doubled, "lasso", FAST_GRID.lasso, 42);
    const table = lassoImportance(lasso.model as LassoModel, lasso.valMatrix);
    const combined = (table.get("return_all") ?? 0) + (table.get("return_1st") ?? 0);
    expect(combined).toBeGreaterThan(0.5); // mass lives on the duplicated signal
  });
});
