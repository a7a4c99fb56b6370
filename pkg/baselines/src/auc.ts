/** ROC AUC with tie-averaged ranks (Mann-Whitney form). */

export function aucRank(scores: number[], labels: boolean[]): number {
  const n = scores.length;
  const nPos = labels.filter(Boolean).length;
  const nNeg = n - nPos;
  if (nPos === 0 || nNeg === 0) throw new Error("AUC needs both classes");
  const order = Array.from({ length: n }, (_, i) => i).sort((a, b) => scores[a] - scores[b]);
  const ranks = new Array<number>(n);
  let i = 0;
  while (i < n) {
    let j = i;
    while (j < n && scores[order[j]] === scores[order[i]]) j++;
    const avgRank = (i + j + 1) / 2; // 1-based average rank of the tie block
    for (let k = i; k < j; k++) ranks[order[k]] = avgRank;
    i = j;
  }
  let posRankSum = 0;
  for (let k = 0; k < n; k++) if (labels[k]) posRankSum += ranks[k];
  return (posRankSum - (nPos * (nPos + 1)) / 2) / (nPos * nNeg);
}

/** O(n^2) oracle used by the tests. */
export function aucPairwise(scores: number[], labels: boolean[]): number {
  const pos = scores.filter((_, i) => labels[i]);
  const neg = scores.filter((_, i) => !labels[i]);
  if (pos.length === 0 || neg.length === 0) throw new Error("AUC needs both classes");
  let hits = 0;
  for (const p of pos) {
    for (const q of neg) {
      if (p > q) hits += 1;
      else if (p === q) hits += 0.5;
    }
  }
  return hits / (pos.length * neg.length);
}
