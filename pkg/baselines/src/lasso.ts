/**
 * L1-regularized logistic regression trained with FISTA (proximal
 * gradient with momentum). Objective, in liblinear's parameterization:
 *
 *     min_w ||w||_1 + C * sum_i s_i * log(1 + exp(-y_i (w.x_i + b)))
 *
 * with balanced class weights s_i = n / (2 * n_class(i)) and an
 * unpenalized intercept.
 */

export interface LassoParams {
  C: number;
  maxIter?: number;
  tol?: number;
}

export interface LassoModel {
  weights: number[];
  bias: number;
  params: LassoParams;
}

function sigmoid(z: number): number {
  return z >= 0 ? 1 / (1 + Math.exp(-z)) : Math.exp(z) / (1 + Math.exp(z));
}

export function trainLasso(rows: number[][], labels: boolean[], params: LassoParams): LassoModel {
  const n = rows.length;
  const d = rows[0]?.length ?? 0;
  const maxIter = params.maxIter ?? 600;
  const tol = params.tol ?? 1e-7;

  const nPos = labels.filter(Boolean).length;
  const nNeg = n - nPos;
  const wPos = nPos > 0 ? n / (2 * nPos) : 0;
  const wNeg = nNeg > 0 ? n / (2 * nNeg) : 0;
  const sw = labels.map((y) => (y ? wPos : wNeg));
  const y = labels.map((v) => (v ? 1 : -1));

  // Lipschitz bound: C/4 * max sample weight * ||X||_F^2 upper-bounds the
  // spectral term; conservative but dependable.
  let frob = 0;
  for (const row of rows) for (const v of row) frob += v * v;
  const L = Math.max((params.C / 4) * Math.max(wPos, wNeg) * frob, 1e-8);
  const step = 1 / L;

  let w = new Array<number>(d).fill(0);
  let b = 0;
  let wPrev = [...w];
  let bPrev = b;
  let t = 1;

  for (let iter = 0; iter < maxIter; iter++) {
    // momentum extrapolation
    const tNext = (1 + Math.sqrt(1 + 4 * t * t)) / 2;
    const beta = (t - 1) / tNext;
    const wLook = w.map((v, j) => v + beta * (v - wPrev[j]));
    const bLook = b + beta * (b - bPrev);

    const gradW = new Array<number>(d).fill(0);
    let gradB = 0;
    for (let i = 0; i < n; i++) {
      let z = bLook;
      const row = rows[i];
      for (let j = 0; j < d; j++) z += wLook[j] * row[j];
      const coef = -y[i] * sw[i] * sigmoid(-y[i] * z) * params.C;
      for (let j = 0; j < d; j++) gradW[j] += coef * row[j];
      gradB += coef;
    }

    wPrev = w;
    bPrev = b;
    const wNew = new Array<number>(d);
    for (let j = 0; j < d; j++) {
      const u = wLook[j] - step * gradW[j];
      const thr = step; // prox of ||w||_1
      wNew[j] = Math.abs(u) <= thr ? 0 : u - Math.sign(u) * thr;
    }
    w = wNew;
    b = bLook - step * gradB;
    t = tNext;

    let delta = Math.abs(b - bPrev);
    for (let j = 0; j < d; j++) delta = Math.max(delta, Math.abs(w[j] - wPrev[j]));
    if (delta < tol) break;
  }
  return { weights: w, bias: b, params };
}

export function predictLasso(model: LassoModel, rows: number[][]): number[] {
  return rows.map((row) => {
    let z = model.bias;
    for (let j = 0; j < row.length; j++) z += model.weights[j] * row[j];
    return sigmoid(z);
  });
}
