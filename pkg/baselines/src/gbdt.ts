/**
 * Gradient-boosted trees on the logistic loss with second-order split
 * gain: gain = 1/2 [GL^2/(HL+l2) + GR^2/(HR+l2) - (GL+GR)^2/(HL+HR+l2)],
 * leaf weight -G/(H+l2). Row subsampling and per-tree column sampling are
 * seeded; accumulated split gain per feature column provides the
 * importance signal.
 */

import { Rng } from "./rng.js";

export interface GbdtParams {
  nEstimators: number;
  maxDepth: number;
  learningRate: number;
  subsample: number;
  colsample: number;
  minChildWeight: number;
  l2: number;
}

interface TreeNode {
  feature?: number;
  threshold?: number;
  left?: TreeNode;
  right?: TreeNode;
  value?: number;
}

export interface GbdtModel {
  baseScore: number;
  trees: TreeNode[];
  params: GbdtParams;
  gainByColumn: number[];
}

function sigmoid(z: number): number {
  return z >= 0 ? 1 / (1 + Math.exp(-z)) : Math.exp(z) / (1 + Math.exp(z));
}

function buildTree(
  rows: number[][],
  grad: number[],
  hess: number[],
  indices: number[],
  columns: number[],
  depth: number,
  params: GbdtParams,
  gainByColumn: number[]
): TreeNode {
  let G = 0;
  let H = 0;
  for (const i of indices) {
    G += grad[i];
    H += hess[i];
  }
  const leaf = (): TreeNode => ({ value: -G / (H + params.l2) });
  if (depth >= params.maxDepth || indices.length < 2) return leaf();

  let best: { gain: number; feature: number; threshold: number } | null = null;
  const parentScore = (G * G) / (H + params.l2);
  for (const c of columns) {
    const sorted = [...indices].sort((a, b) => rows[a][c] - rows[b][c]);
    let GL = 0;
    let HL = 0;
    for (let k = 0; k < sorted.length - 1; k++) {
      const i = sorted[k];
      GL += grad[i];
      HL += hess[i];
      const here = rows[i][c];
      const next = rows[sorted[k + 1]][c];
      if (here === next) continue;
      const HR = H - HL;
      if (HL < params.minChildWeight || HR < params.minChildWeight) continue;
      const GR = G - GL;
      const gain =
        0.5 * ((GL * GL) / (HL + params.l2) + (GR * GR) / (HR + params.l2) - parentScore);
      if (gain > 0 && (best === null || gain > best.gain)) {
        best = { gain, feature: c, threshold: (here + next) / 2 };
      }
    }
  }
  if (best === null) return leaf();
  gainByColumn[best.feature] += best.gain;
  const leftIdx = indices.filter((i) => rows[i][best!.feature] <= best!.threshold);
  const rightIdx = indices.filter((i) => rows[i][best!.feature] > best!.threshold);
  return {
    feature: best.feature,
    threshold: best.threshold,
    left: buildTree(rows, grad, hess, leftIdx, columns, depth + 1, params, gainByColumn),
    right: buildTree(rows, grad, hess, rightIdx, columns, depth + 1, params, gainByColumn),
  };
}

function treeScore(node: TreeNode, row: number[]): number {
  let cur = node;
  while (cur.value === undefined) {
    cur = row[cur.feature!] <= cur.threshold! ? cur.left! : cur.right!;
  }
  return cur.value;
}

export function trainGbdt(
  rows: number[][],
  labels: boolean[],
  params: GbdtParams,
  seed: number
): GbdtModel {
  const n = rows.length;
  const d = rows[0]?.length ?? 0;
  const rng = new Rng(seed);
  const pBase = Math.min(Math.max(labels.filter(Boolean).length / n, 1e-6), 1 - 1e-6);
  const baseScore = Math.log(pBase / (1 - pBase));
  const scores = new Array<number>(n).fill(baseScore);
  const trees: TreeNode[] = [];
  const gainByColumn = new Array<number>(d).fill(0);

  for (let round = 0; round < params.nEstimators; round++) {
    const grad = new Array<number>(n);
    const hess = new Array<number>(n);
    for (let i = 0; i < n; i++) {
      const p = sigmoid(scores[i]);
      grad[i] = p - (labels[i] ? 1 : 0);
      hess[i] = Math.max(p * (1 - p), 1e-12);
    }
    let indices = Array.from({ length: n }, (_, i) => i);
    if (params.subsample < 1) {
      indices = indices.filter(() => rng.next() < params.subsample);
      if (indices.length === 0) indices = [rng.int(n)];
    }
    let columns = Array.from({ length: d }, (_, i) => i);
    if (params.colsample < 1) {
      const keep = Math.max(1, Math.round(d * params.colsample));
      columns = rng.shuffle(columns).slice(0, keep).sort((a, b) => a - b);
    }
    const tree = buildTree(rows, grad, hess, indices, columns, 0, params, gainByColumn);
    trees.push(tree);
    for (let i = 0; i < n; i++) scores[i] += params.learningRate * treeScore(tree, rows[i]);
  }
  return { baseScore, trees, params, gainByColumn };
}

export function predictGbdt(model: GbdtModel, rows: number[][]): number[] {
  return rows.map((row) => {
    let score = model.baseScore;
    for (const tree of model.trees) score += model.params.learningRate * treeScore(tree, row);
    return sigmoid(score);
  });
}
