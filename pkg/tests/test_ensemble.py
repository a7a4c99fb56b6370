import random
from fractions import Fraction

import pytest

from copyguard.curve import CurveParams
from copyguard.ensemble import (
    AGENT_ORDER,
    WeightVector,
    ablate,
    aggregate,
    auc_trapezoid,
    best_f1_threshold,
    confusion_metrics,
    economics_of_selection,
    evaluate,
    fit_weights,
    leader_sequence,
    roc_points,
    threshold_grid,
)
from copyguard.economics import replay_with_copier
from copyguard.errors import NoSelections, SingleClassValidation
from copyguard.features import FeatureVector, TraderSample
from copyguard.simulate import Role, ScenarioKind, ScenarioSpec, generate

from oracles import auc_pairwise_oracle


def conf(w, c, t):
    return {"wallet": w, "coin": c, "timing": t}


def test_weight_vector_validation():
    WeightVector.of("0.2", "0.3", "0.5")
    with pytest.raises(ValueError):
        WeightVector.of("0.5", "0.6", "0.2")
    with pytest.raises(ValueError):
        WeightVector.of("-0.1", "0.6", "0.5")


def test_aggregate_basics():
    uniform = WeightVector.uniform()
    assert aggregate(conf(1, 1, 1), uniform) == 1.0
    assert aggregate(conf(0.9, 0.6, 0.3), uniform) == pytest.approx(0.6)
    corner = WeightVector.of(1, 0, 0)
    assert aggregate(conf(0.7, 0.1, 0.2), corner) == 0.7


def test_aggregate_renormalizes_missing_agents():
    uniform = WeightVector.uniform()
    assert aggregate({"wallet": 0.8, "coin": 0.4}, uniform) == pytest.approx(0.6)
    corner = WeightVector.of(0, 0, 1)  # all mass on a missing agent
    assert aggregate({"wallet": 0.8, "coin": 0.4}, corner) == pytest.approx(0.6)


def test_aggregate_passes_foreign_scores_through():
    # Baseline score files carry one agent outside wallet/coin/timing.
    assert aggregate({"lasso": 0.73}, WeightVector.uniform()) == pytest.approx(0.73)
    with pytest.raises(ValueError):
        aggregate({}, WeightVector.uniform())


def test_perfect_scores_auc_and_f1():
    labels = [True, False, True, False]
    scores = [1.0, 0.0, 1.0, 0.0]
    assert auc_trapezoid(scores, labels) == 1.0
    for t in (0.01, 0.5, 1.0):
        m = confusion_metrics(scores, labels, t)
        assert m.f1 == 1.0


def test_auc_matches_pairwise_oracle_with_ties():
    rng = random.Random(2024)
    for _ in range(100):
        n = rng.randint(4, 200)
        labels = [rng.random() < 0.5 for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[1] = True, False
        scores = [rng.choice([0.1, 0.25, 0.5, rng.random()]) for _ in range(n)]
        assert abs(auc_trapezoid(scores, labels) - auc_pairwise_oracle(scores, labels)) <= 1e-12


def test_auc_invariant_under_increasing_transforms():
    rng = random.Random(7)
    labels = [rng.random() < 0.4 for _ in range(150)]
    labels[0], labels[1] = True, False
    scores = [rng.random() for _ in range(150)]
    base = auc_trapezoid(scores, labels)
    affine = [3.0 * s + 0.2 for s in scores]
    cubic = [s**3 for s in scores]
    assert abs(auc_trapezoid(affine, labels) - base) <= 1e-12
    assert abs(auc_trapezoid(cubic, labels) - base) <= 1e-12


def test_roc_monotone_and_recall_decreasing():
    rng = random.Random(11)
    labels = [rng.random() < 0.5 for _ in range(80)]
    labels[0], labels[1] = True, False
    scores = [rng.random() for _ in range(80)]
    points = roc_points(scores, labels)
    assert points[0] == (0.0, 0.0) and points[-1] == (1.0, 1.0)
    for (f0, t0), (f1, t1) in zip(points, points[1:]):
        assert f1 >= f0 and t1 >= t0
    recalls = [confusion_metrics(scores, labels, t).recall for t in threshold_grid()]
    for r0, r1 in zip(recalls, recalls[1:]):
        assert r1 <= r0


def test_single_class_split_reports_flagged_zeroes():
    labels = [False, False, False]
    report = evaluate([conf(0.2, 0.2, 0.2)] * 3, labels, WeightVector.uniform())
    assert report.auc is None
    top = report.per_threshold[-1]
    assert top.precision == 0.0 and "precision" in top.undefined


def test_fit_weights_perfect_agent():
    rng = random.Random(3)
    labels = [rng.random() < 0.5 for _ in range(60)]
    labels[0], labels[1] = True, False
    rows = [conf(1.0 if y else 0.0, rng.random(), rng.random()) for y in labels]
    weights, auc = fit_weights(rows, labels)
    assert auc == 1.0


def test_fit_weights_degenerate_ties_back_to_uniform():
    labels = [True, False, True, False]
    rows = [conf(0.5, 0.5, 0.5)] * 4
    weights, auc = fit_weights(rows, labels)
    assert auc == 0.5
    assert weights == WeightVector.uniform()


def test_fit_weights_single_class_rejected():
    with pytest.raises(SingleClassValidation):
        fit_weights([conf(0.1, 0.2, 0.3)] * 5, [True] * 5)


def seeded_rows(seed, n=120):
    rng = random.Random(seed)
    labels = [rng.random() < 0.5 for _ in range(n)]
    labels[0], labels[1] = True, False
    rows = []
    for y in labels:
        base = 0.62 if y else 0.38
        rows.append(
            conf(
                min(1, max(0, rng.gauss(base, 0.18))),
                min(1, max(0, rng.gauss(base, 0.3))),
                min(1, max(0, rng.gauss(0.5, 0.25))),
            )
        )
    return rows, labels


def test_fitted_auc_dominates_single_agents_and_ablations():
    rows, labels = seeded_rows(17)
    weights, fitted = fit_weights(rows, labels)
    for agent in AGENT_ORDER:
        single = auc_trapezoid([r[agent] for r in rows], labels)
        assert fitted >= single - 1e-12
    for agent in AGENT_ORDER:
        result = ablate(agent, rows, labels, rows, labels)
        assert result.val_auc <= fitted + 1e-12


def test_ablating_zero_weight_agent_keeps_auc():
    rng = random.Random(23)
    labels = [rng.random() < 0.5 for _ in range(80)]
    labels[0], labels[1] = True, False
    # timing is pure noise; wallet is strong signal
    rows = [conf(0.8 if y else 0.2, 0.6 if y else 0.4, rng.random()) for y in labels]
    weights, fitted = fit_weights(rows, labels)
    if weights.w_timing == 0:
        result = ablate("timing", rows, labels, rows, labels)
        assert result.val_auc == pytest.approx(fitted, abs=1e-12)


def test_ablating_perfect_agent_hurts():
    rng = random.Random(29)
    labels = [rng.random() < 0.5 for _ in range(60)]
    labels[0], labels[1] = True, False
    rows = [conf(1.0 if y else 0.0, rng.random(), rng.random()) for y in labels]
    _, fitted = fit_weights(rows, labels)
    result = ablate("wallet", rows, labels, rows, labels)
    assert result.val_auc < fitted


def test_best_f1_threshold_picks_argmax():
    labels = [True, True, False, False]
    rows = [conf(s, s, s) for s in (0.9, 0.8, 0.7, 0.1)]
    report = evaluate(rows, labels, WeightVector.uniform())
    t = best_f1_threshold(report)
    m = confusion_metrics([0.9, 0.8, 0.7, 0.1], labels, t)
    assert m.f1 == max(x.f1 for x in report.per_threshold)


def make_sample(wallet, coin, label=True):
    features = FeatureVector(
        return_all=None, return_1st=None, return_1_5=None, return_6_10=None, return_11_15=None,
        n_trades=0, return_std=None, t_stat=None, t_since_last=None, t_since_first=0,
        t_since_launch=None, px=None, amount=0.0, qty=0.0,
        bot_bundle=False, bot_sniper=False, bot_bump=False, bot_comment=False,
    )
    return TraderSample(wallet=wallet, coin=coin, first_trade_ts=0, features=features, label=label)


def test_economics_of_selection_on_benign_scenario():
    spec = ScenarioSpec(kind=ScenarioKind.BENIGN, seed=41)
    scenario = generate(spec)
    ledgers = {spec.coin: scenario.ledger}
    kol = next(w for w, r in scenario.role_map.items() if r == Role.KOL)
    selected = [make_sample(kol, spec.coin)]
    economics, reports = economics_of_selection(selected, ledgers, spec.curve)
    assert economics.n_evaluated == 1
    assert economics.copier_gross_return < economics.smart_money_gross_return
    assert economics.smart_money_gross_return > 1.0  # the leader exits at the peak

    # Recomputation oracle: averages must equal an independent pass over reports.
    smart = sum(float(r.x_out_smart / r.x_in_smart) for r in reports) / len(reports)
    assert economics.smart_money_gross_return == pytest.approx(smart, abs=1e-15)


def test_leader_sequence_replays_market_context():
    spec = ScenarioSpec(kind=ScenarioKind.BENIGN, seed=41)
    scenario = generate(spec)
    kol = next(w for w, r in scenario.role_map.items() if r == Role.KOL)
    seq = leader_sequence(scenario.ledger, kol, spec.curve)
    assert any(q > 0 for q in seq.trades) and any(q < 0 for q in seq.trades)
    report = replay_with_copier(seq)
    assert report.r_copier < report.r_smart


def test_economics_requires_selections():
    with pytest.raises(NoSelections):
        economics_of_selection([], {}, CurveParams.make())
    spec = ScenarioSpec(kind=ScenarioKind.BENIGN, seed=41)
    scenario = generate(spec)
    # A hold-only wallet has no sell leg, so nothing is evaluable.
    retail_holder = make_sample("nonexistent-wallet", spec.coin)
    with pytest.raises(NoSelections):
        economics_of_selection([retail_holder], {spec.coin: scenario.ledger}, spec.curve)
