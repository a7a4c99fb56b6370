"""Confidence aggregation, AUC-maximizing weight fitting, evaluation, and
the economics of acting on the selected wallets.

The weight fit is an exhaustive simplex grid search (AUC is
piecewise-constant in the weights, so gradients are useless): all
non-negative integer triples summing to 100 plus the exact uniform point.
Ties break toward uniform, then lexicographically, which makes the fit
deterministic under any ordering of equal-AUC candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .chain import CoinLedger, TxKind
from .curve import CurveParams, CurveState, apply_buy, apply_sell, as_fraction
from .economics import ReturnReport, TradeSeq, replay_ledger_with_copier
from .errors import (
    InfeasibleForCopier,
    InfeasibleTrade,
    InvalidTradeSequence,
    NoSelections,
    SingleClassValidation,
)
from .features import Split, TraderSample

AGENT_ORDER = ("wallet", "coin", "timing")


@dataclass(frozen=True)
class WeightVector:
    w_wallet: Fraction
    w_coin: Fraction
    w_timing: Fraction

    def __post_init__(self):
        weights = (self.w_wallet, self.w_coin, self.w_timing)
        if any(w < 0 for w in weights):
            raise ValueError("weights must be non-negative")
        if abs(sum(weights) - 1) > Fraction(1, 10**12):
            raise ValueError("weights must sum to 1")

    @classmethod
    def uniform(cls) -> "WeightVector":
        third = Fraction(1, 3)
        return cls(third, third, third)

    @classmethod
    def of(cls, wallet, coin, timing) -> "WeightVector":
        return cls(as_fraction(wallet), as_fraction(coin), as_fraction(timing))

    def as_dict(self) -> dict[str, float]:
        return {"wallet": float(self.w_wallet), "coin": float(self.w_coin), "timing": float(self.w_timing)}

    def component(self, agent: str) -> Fraction:
        return {"wallet": self.w_wallet, "coin": self.w_coin, "timing": self.w_timing}[agent]


def aggregate(confidences: dict[str, float], weights: WeightVector) -> float:
    """Weighted mean of agent confidences.

    A missing agent's weight mass is renormalized across the present ones.
    Rows carrying only foreign agents (e.g. a statistic-driven baseline's
    score file) pass through as the plain mean of their confidences.
    """
    if not confidences:
        raise ValueError("no agent confidences to aggregate")
    present = [a for a in AGENT_ORDER if a in confidences]
    if not present:
        return float(sum(confidences.values()) / len(confidences))
    total_weight = sum(weights.component(a) for a in present)
    if total_weight == 0:
        # All mass sat on missing agents; fall back to a plain mean.
        return float(sum(confidences[a] for a in present) / len(present))
    score = sum(float(weights.component(a)) * confidences[a] for a in present)
    return score / float(total_weight)


# --- ranking metrics -------------------------------------------------------------


def roc_points(scores, labels) -> list[tuple[float, float]]:
    """(FPR, TPR) pairs from (0,0) to (1,1), one step per distinct score."""
    scores = np.asarray(scores, dtype=float)
    labels = np.asarray(labels, dtype=bool)
    n_pos = int(labels.sum())
    n_neg = int(len(labels) - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise SingleClassValidation("ROC needs both classes")
    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_labels = labels[order]
    points = [(0.0, 0.0)]
    tp = fp = 0
    i = 0
    while i < len(sorted_scores):
        j = i
        while j < len(sorted_scores) and sorted_scores[j] == sorted_scores[i]:
            tp += bool(sorted_labels[j])
            fp += not sorted_labels[j]
            j += 1
        points.append((fp / n_neg, tp / n_pos))
        i = j
    return points


def auc_trapezoid(scores, labels) -> float:
    """Area under the ROC curve; tied scores contribute the trapezoid of
    their whole block, which matches the tie-averaged pairwise count."""
    points = roc_points(scores, labels)
    area = 0.0
    for (fpr0, tpr0), (fpr1, tpr1) in zip(points, points[1:]):
        area += (fpr1 - fpr0) * (tpr1 + tpr0) / 2.0
    return area


@dataclass(frozen=True)
class ThresholdMetrics:
    threshold: float
    precision: float
    recall: float
    f1: float
    undefined: tuple[str, ...] = ()


def confusion_metrics(scores, labels, threshold: float) -> ThresholdMetrics:
    """Precision/recall/F1 at `threshold`; undefined ratios report 0, flagged."""
    undefined = []
    tp = fp = fn = 0
    for s, y in zip(scores, labels):
        predicted = s >= threshold
        if predicted and y:
            tp += 1
        elif predicted and not y:
            fp += 1
        elif not predicted and y:
            fn += 1
    if tp + fp:
        precision = tp / (tp + fp)
    else:
        precision, undefined = 0.0, undefined + ["precision"]
    if tp + fn:
        recall = tp / (tp + fn)
    else:
        recall, undefined = 0.0, undefined + ["recall"]
    if precision + recall:
        f1 = 2 * precision * recall / (precision + recall)
    else:
        f1, undefined = 0.0, undefined + ["f1"]
    return ThresholdMetrics(threshold, precision, recall, f1, tuple(undefined))


def threshold_grid(step: float = 0.01) -> list[float]:
    n = round(1 / step)
    return [round(i * step, 10) for i in range(n + 1)]


@dataclass(frozen=True)
class EvalReport:
    split: str
    weights: WeightVector
    auc: float | None  # None on a single-class split, where ranking is undefined
    roc: tuple[tuple[float, float], ...]
    per_threshold: tuple[ThresholdMetrics, ...]
    n_pos: int
    n_neg: int
    smart_money_gross_return: float | None = None
    copier_gross_return: float | None = None
    economics: dict | None = None

    def to_dict(self) -> dict:
        return {
            "split": self.split,
            "weights": self.weights.as_dict(),
            "auc": self.auc,
            "n_pos": self.n_pos,
            "n_neg": self.n_neg,
            "roc": [list(p) for p in self.roc],
            "per_threshold": [
                {
                    "threshold": m.threshold,
                    "precision": m.precision,
                    "recall": m.recall,
                    "f1": m.f1,
                    "undefined": list(m.undefined),
                }
                for m in self.per_threshold
            ],
            "smart_money_gross_return": self.smart_money_gross_return,
            "copier_gross_return": self.copier_gross_return,
            "economics": self.economics,
        }


# --- weight fitting ---------------------------------------------------------------


def _simplex_grid(resolution: int = 100) -> list[WeightVector]:
    grid = []
    for i in range(resolution + 1):
        for j in range(resolution + 1 - i):
            k = resolution - i - j
            grid.append(
                WeightVector(
                    Fraction(i, resolution), Fraction(j, resolution), Fraction(k, resolution)
                )
            )
    grid.append(WeightVector.uniform())
    return grid


def _pair_grid(present: tuple[str, str], resolution: int = 100) -> list[WeightVector]:
    grid = []
    for i in range(resolution + 1):
        parts = {a: Fraction(0) for a in AGENT_ORDER}
        parts[present[0]] = Fraction(i, resolution)
        parts[present[1]] = Fraction(resolution - i, resolution)
        grid.append(WeightVector(parts["wallet"], parts["coin"], parts["timing"]))
    return grid


def _fit_over(
    grid: list[WeightVector],
    confidences: list[dict[str, float]],
    labels: list[bool],
) -> tuple[WeightVector, float]:
    if len(set(labels)) < 2:
        raise SingleClassValidation("validation split has a single class")
    conf = np.array([[c.get(a, np.nan) for a in AGENT_ORDER] for c in confidences], dtype=float)
    if np.isnan(conf).any():
        scores_for = lambda w: np.array([aggregate(c, w) for c in confidences])
    else:
        weight_matrix = np.array([[float(w.component(a)) for a in AGENT_ORDER] for w in grid])
        all_scores = conf @ weight_matrix.T
        scores_for = None
    y = np.array(labels, dtype=bool)

    best: tuple | None = None
    uniform = WeightVector.uniform()
    for idx, w in enumerate(grid):
        scores = scores_for(w) if scores_for else all_scores[:, idx]
        auc = auc_trapezoid(scores, y)
        dist = sum((w.component(a) - uniform.component(a)) ** 2 for a in AGENT_ORDER)
        key = (-auc, dist, (w.w_wallet, w.w_coin, w.w_timing))
        if best is None or key < best[0]:
            best = (key, w, auc)
    return best[1], best[2]


def fit_weights(
    confidences: list[dict[str, float]],
    labels: list[bool],
    resolution: int = 100,
) -> tuple[WeightVector, float]:
    """Exhaustive grid argmax of validation AUC over the weight simplex."""
    return _fit_over(_simplex_grid(resolution), confidences, labels)


def evaluate(
    confidences: list[dict[str, float]],
    labels: list[bool],
    weights: WeightVector,
    split: str = "test",
    grid_step: float = 0.01,
) -> EvalReport:
    scores = [aggregate(c, weights) for c in confidences]
    labels = list(labels)
    per_threshold = tuple(confusion_metrics(scores, labels, t) for t in threshold_grid(grid_step))
    try:
        auc = auc_trapezoid(scores, labels)
        roc = tuple(roc_points(scores, labels))
    except SingleClassValidation:
        auc, roc = None, ()
    return EvalReport(
        split=split,
        weights=weights,
        auc=auc,
        roc=roc,
        per_threshold=per_threshold,
        n_pos=sum(labels),
        n_neg=len(labels) - sum(labels),
    )


@dataclass(frozen=True)
class AblationResult:
    dropped: str
    weights: WeightVector
    val_auc: float
    report: EvalReport


def ablate(
    dropped: str,
    val_confidences: list[dict[str, float]],
    val_labels: list[bool],
    test_confidences: list[dict[str, float]],
    test_labels: list[bool],
    resolution: int = 100,
) -> AblationResult:
    """Refit over the two remaining agents and evaluate the test split."""
    if dropped not in AGENT_ORDER:
        raise ValueError(f"unknown agent {dropped!r}")
    present = tuple(a for a in AGENT_ORDER if a != dropped)
    strip = lambda rows: [{a: c[a] for a in present if a in c} for c in rows]
    weights, val_auc = _fit_over(_pair_grid(present, resolution), strip(val_confidences), val_labels)
    report = evaluate(strip(test_confidences), test_labels, weights, split="test")
    return AblationResult(dropped=dropped, weights=weights, val_auc=val_auc, report=report)


def best_f1_threshold(report: EvalReport) -> float:
    """Smallest threshold attaining the maximum F1 (the economics default)."""
    best = max(report.per_threshold, key=lambda m: (m.f1, -m.threshold))
    return best.threshold


# --- economics of acting on selections ---------------------------------------------


@dataclass(frozen=True)
class SelectionEconomics:
    smart_money_gross_return: float
    copier_gross_return: float
    n_selected: int
    n_evaluated: int
    skipped: dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "smart_money_gross_return": self.smart_money_gross_return,
            "copier_gross_return": self.copier_gross_return,
            "n_selected": self.n_selected,
            "n_evaluated": self.n_evaluated,
            "skipped": dict(self.skipped),
        }


def leader_sequence(ledger: CoinLedger, wallet: str, curve: CurveParams) -> TradeSeq:
    """The wallet's signed trades in this coin, plus the curve state right
    before its first trade (all earlier market trades replayed in)."""
    state = CurveState.fresh(curve)
    trades: list[Fraction] = []
    entered = False
    for tx in ledger.trades():
        if tx.trader == wallet:
            entered = True
            qty = as_fraction(tx.token_qty)
            trades.append(qty if tx.kind == TxKind.BUY else -qty)
        elif not entered:
            if tx.kind == TxKind.BUY:
                state, _ = apply_buy(state, tx.token_qty)
            else:
                state, _ = apply_sell(state, tx.token_qty)
    return TradeSeq.make(trades, state)


def economics_of_selection(
    selected: list[TraderSample],
    ledgers: dict[str, CoinLedger],
    curve: CurveParams,
) -> tuple[SelectionEconomics, list[ReturnReport]]:
    """Replay every selected (wallet, coin) with a one-to-one copier.

    The wallet's fills execute inside the full ledger, so its gross return
    is the realized one; the copier's mirror fills land one trade behind.
    Selections that cannot be replayed (no sell leg, or replication
    infeasible) are skipped and tallied; averages cover the evaluated ones.
    """
    if not selected:
        raise NoSelections("no samples above the decision threshold")
    reports: list[ReturnReport] = []
    skipped: dict[str, int] = {}
    for sample in selected:
        ledger = ledgers.get(sample.coin)
        if ledger is None:
            skipped["missing_ledger"] = skipped.get("missing_ledger", 0) + 1
            continue
        try:
            reports.append(replay_ledger_with_copier(ledger, sample.wallet, curve))
        except (InvalidTradeSequence, InfeasibleForCopier, InfeasibleTrade) as exc:
            key = type(exc).__name__
            skipped[key] = skipped.get(key, 0) + 1
    if not reports:
        raise NoSelections("every selected sequence was unreplayable")
    smart = sum(float(r.gross_smart) for r in reports) / len(reports)
    copier = sum(float(r.gross_copier) for r in reports) / len(reports)
    economics = SelectionEconomics(
        smart_money_gross_return=smart,
        copier_gross_return=copier,
        n_selected=len(selected),
        n_evaluated=len(reports),
        skipped=skipped,
    )
    return economics, reports


def confidences_from_verdicts(
    verdicts: dict[tuple[str, str], dict[str, float]],
    samples: list[TraderSample],
) -> tuple[list[dict[str, float]], list[bool]]:
    """Align a (wallet, coin) -> {agent: confidence} map with sample order."""
    rows, labels = [], []
    for s in samples:
        row = verdicts.get(s.key)
        if row:
            rows.append(row)
            labels.append(s.label)
    return rows, labels


def split_rows(samples: list[TraderSample], split: Split) -> list[TraderSample]:
    return [s for s in samples if s.split == split]
