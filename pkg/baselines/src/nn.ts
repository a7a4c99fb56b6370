/**
 * Small feed-forward network: ReLU hidden layers, sigmoid output,
 * log-loss with L2 penalty, Adam updates, seeded init, and early stopping
 * on validation loss. Training is fully deterministic for a fixed seed.
 */

import { Rng } from "./rng.js";

export interface NnParams {
  hiddenLayers: number[];
  alpha: number; // L2 penalty
  learningRate: number;
  maxEpochs?: number;
  batchSize?: number;
  patience?: number;
}

interface Layer {
  w: number[][]; // [out][in]
  b: number[];
  mW: number[][];
  vW: number[][];
  mB: number[];
  vB: number[];
}

export interface NnModel {
  layers: Layer[];
  params: NnParams;
  epochsTrained: number;
}

function sigmoid(z: number): number {
  return z >= 0 ? 1 / (1 + Math.exp(-z)) : Math.exp(z) / (1 + Math.exp(z));
}

function makeLayer(fanIn: number, fanOut: number, rng: Rng): Layer {
  const scale = Math.sqrt(2 / fanIn);
  const w = Array.from({ length: fanOut }, () =>
    Array.from({ length: fanIn }, () => rng.gauss() * scale)
  );
  const zeros = () => Array.from({ length: fanOut }, () => 0);
  const zerosW = () => Array.from({ length: fanOut }, () => new Array<number>(fanIn).fill(0));
  return { w, b: zeros(), mW: zerosW(), vW: zerosW(), mB: zeros(), vB: zeros() };
}

function forward(layers: Layer[], row: number[]): { activations: number[][]; out: number } {
  const activations: number[][] = [row];
  let cur = row;
  for (let l = 0; l < layers.length; l++) {
    const layer = layers[l];
    const next = new Array<number>(layer.w.length);
    for (let o = 0; o < layer.w.length; o++) {
      let z = layer.b[o];
      const weights = layer.w[o];
      for (let i = 0; i < cur.length; i++) z += weights[i] * cur[i];
      next[o] = l === layers.length - 1 ? z : Math.max(0, z); // ReLU hidden, linear head
    }
    activations.push(next);
    cur = next;
  }
  return { activations, out: sigmoid(cur[0]) };
}

export function predictNn(model: NnModel, rows: number[][]): number[] {
  return rows.map((row) => forward(model.layers, row).out);
}

function logLoss(model: NnModel, rows: number[][], labels: boolean[]): number {
  let loss = 0;
  const preds = predictNn(model, rows);
  for (let i = 0; i < rows.length; i++) {
    const p = Math.min(Math.max(preds[i], 1e-12), 1 - 1e-12);
    loss += labels[i] ? -Math.log(p) : -Math.log(1 - p);
  }
  return loss / rows.length;
}

export function trainNn(
  trainRows: number[][],
  trainLabels: boolean[],
  valRows: number[][],
  valLabels: boolean[],
  params: NnParams,
  seed: number
): NnModel {
  const d = trainRows[0]?.length ?? 0;
  const rng = new Rng(seed);
  const sizes = [d, ...params.hiddenLayers, 1];
  const layers: Layer[] = [];
  for (let l = 0; l < sizes.length - 1; l++) layers.push(makeLayer(sizes[l], sizes[l + 1], rng));
  const model: NnModel = { layers, params, epochsTrained: 0 };

  const maxEpochs = params.maxEpochs ?? 200;
  const batchSize = params.batchSize ?? 32;
  const patience = params.patience ?? 10;
  const beta1 = 0.9;
  const beta2 = 0.999;
  const eps = 1e-8;
  let adamStep = 0;
  let bestValLoss = Infinity;
  let bestSnapshot: number[][][] | null = null;
  let bestBias: number[][] | null = null;
  let sinceBest = 0;

  const indices = Array.from({ length: trainRows.length }, (_, i) => i);
  for (let epoch = 0; epoch < maxEpochs; epoch++) {
    rng.shuffle(indices);
    for (let start = 0; start < indices.length; start += batchSize) {
      const batch = indices.slice(start, start + batchSize);
      const gradW = layers.map((l) => l.w.map((row) => new Array<number>(row.length).fill(0)));
      const gradB = layers.map((l) => new Array<number>(l.b.length).fill(0));
      for (const i of batch) {
        const { activations, out } = forward(layers, trainRows[i]);
        // delta at the sigmoid head
        let delta = [out - (trainLabels[i] ? 1 : 0)];
        for (let l = layers.length - 1; l >= 0; l--) {
          const input = activations[l];
          const layer = layers[l];
          for (let o = 0; o < layer.w.length; o++) {
            gradB[l][o] += delta[o];
            for (let j = 0; j < input.length; j++) gradW[l][o][j] += delta[o] * input[j];
          }
          if (l > 0) {
            // ReLU derivative gates on this layer's input activation
            const prev = new Array<number>(input.length).fill(0);
            for (let j = 0; j < input.length; j++) {
              let acc = 0;
              for (let o = 0; o < layer.w.length; o++) acc += layer.w[o][j] * delta[o];
              prev[j] = input[j] > 0 ? acc : 0;
            }
            delta = prev;
          }
        }
      }
      adamStep += 1;
      const scale = 1 / batch.length;
      for (let l = 0; l < layers.length; l++) {
        const layer = layers[l];
        for (let o = 0; o < layer.w.length; o++) {
          for (let j = 0; j < layer.w[o].length; j++) {
            const g = gradW[l][o][j] * scale + params.alpha * layer.w[o][j];
            layer.mW[o][j] = beta1 * layer.mW[o][j] + (1 - beta1) * g;
            layer.vW[o][j] = beta2 * layer.vW[o][j] + (1 - beta2) * g * g;
            const mHat = layer.mW[o][j] / (1 - beta1 ** adamStep);
            const vHat = layer.vW[o][j] / (1 - beta2 ** adamStep);
            layer.w[o][j] -= (params.learningRate * mHat) / (Math.sqrt(vHat) + eps);
          }
          const gB = gradB[l][o] * scale;
          layer.mB[o] = beta1 * layer.mB[o] + (1 - beta1) * gB;
          layer.vB[o] = beta2 * layer.vB[o] + (1 - beta2) * gB * gB;
          const mHatB = layer.mB[o] / (1 - beta1 ** adamStep);
          const vHatB = layer.vB[o] / (1 - beta2 ** adamStep);
          layer.b[o] -= (params.learningRate * mHatB) / (Math.sqrt(vHatB) + eps);
        }
      }
    }
    model.epochsTrained = epoch + 1;
    const valLoss = valRows.length ? logLoss(model, valRows, valLabels) : logLoss(model, trainRows, trainLabels);
    if (valLoss < bestValLoss - 1e-6) {
      bestValLoss = valLoss;
      bestSnapshot = layers.map((l) => l.w.map((row) => [...row]));
      bestBias = layers.map((l) => [...l.b]);
      sinceBest = 0;
    } else {
      sinceBest += 1;
      if (sinceBest >= patience) break;
    }
  }
  if (bestSnapshot && bestBias) {
    for (let l = 0; l < layers.length; l++) {
      layers[l].w = bestSnapshot[l];
      layers[l].b = bestBias[l];
    }
  }
  return model;
}
