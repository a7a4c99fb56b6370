/**
 * Grid selection on validation AUC, then scores for every split in the
 * verdict-compatible shape. Everything is deterministic for a fixed seed:
 * grids enumerate lexicographically and the first best combination wins.
 */

import { aucRank } from "./auc.js";
import { ScoreRow } from "./csv.js";
import { GbdtModel, GbdtParams, predictGbdt, trainGbdt } from "./gbdt.js";
import { LassoModel, LassoParams, predictLasso, trainLasso } from "./lasso.js";
import { NnModel, NnParams, predictNn, trainNn } from "./nn.js";
import { DesignMatrix, Preprocessor } from "./preprocess.js";
import { Dataset, ModelKind, Sample, SingleClass } from "./types.js";

export interface TrainResult {
  kind: ModelKind;
  chosenParams: object;
  valAuc: number;
  scores: ScoreRow[];
  model: LassoModel | GbdtModel | NnModel;
  preprocessor: Preprocessor;
  valMatrix: DesignMatrix;
  valLabels: boolean[];
}

function bySplit(dataset: Dataset, split: string): Sample[] {
  return dataset.samples.filter((s) => s.split === split);
}

function assertBothClasses(samples: Sample[], name: string): void {
  const pos = samples.filter((s) => s.label).length;
  if (pos === 0 || pos === samples.length) {
    throw new SingleClass(`${name} split needs both classes (got ${pos}/${samples.length} positive)`);
  }
}

export function predictAny(
  kind: ModelKind,
  model: LassoModel | GbdtModel | NnModel,
  rows: number[][]
): number[] {
  if (kind === "lasso") return predictLasso(model as LassoModel, rows);
  if (kind === "gbdt") return predictGbdt(model as GbdtModel, rows);
  return predictNn(model as NnModel, rows);
}

export function trainAndScore(
  dataset: Dataset,
  kind: ModelKind,
  grid: object[],
  seed: number,
  log: (line: string) => void = () => {}
): TrainResult {
  const train = bySplit(dataset, "train");
  const val = bySplit(dataset, "val");
  if (train.length === 0 || val.length === 0) {
    throw new SingleClass("train and val splits must be non-empty");
  }
  assertBothClasses(train, "train");
  assertBothClasses(val, "val");

  const pre = new Preprocessor().fit(train);
  const trainMatrix = pre.transform(train);
  const valMatrix = pre.transform(val);
  const trainLabels = train.map((s) => s.label);
  const valLabels = val.map((s) => s.label);

  let best: { auc: number; params: object; model: LassoModel | GbdtModel | NnModel } | null = null;
  for (const params of grid) {
    let model: LassoModel | GbdtModel | NnModel;
    if (kind === "lasso") {
      model = trainLasso(trainMatrix.rows, trainLabels, params as LassoParams);
    } else if (kind === "gbdt") {
      model = trainGbdt(trainMatrix.rows, trainLabels, params as GbdtParams, seed);
    } else {
      model = trainNn(trainMatrix.rows, trainLabels, valMatrix.rows, valLabels, params as NnParams, seed);
    }
    const auc = aucRank(predictAny(kind, model, valMatrix.rows), valLabels);
    log(`${kind} ${JSON.stringify(params)} -> val AUC ${auc.toFixed(4)}`);
    if (best === null || auc > best.auc) {
      best = { auc, params, model };
    }
  }
  if (best === null) throw new Error("empty hyperparameter grid");

  const scores: ScoreRow[] = [];
  for (const split of ["train", "val", "test"] as const) {
    const samples = bySplit(dataset, split);
    if (samples.length === 0) continue;
    const preds = predictAny(kind, best.model, pre.transform(samples).rows);
    samples.forEach((s, i) => {
      scores.push({
        wallet: s.wallet,
        coin: s.coin,
        agent: kind,
        decision: preds[i] >= 0.5,
        confidence: preds[i],
      });
    });
  }
  return {
    kind,
    chosenParams: best.params,
    valAuc: best.auc,
    scores,
    model: best.model,
    preprocessor: pre,
    valMatrix,
    valLabels,
  };
}
