"""Acceptance gate: each test enforces one acceptance criterion at its
stated tolerance and prints a [PASS] line when it holds. Seeds and corpus
shapes are frozen; loosening a tolerance here is never the right fix."""

import json
import random
import time
from fractions import Fraction

import pytest

from copyguard import prompts
from copyguard.agents import (
    AgentKind,
    ChatReply,
    assemble_agent_prompt,
    assemble_comment_prompt,
    run_llm_agent,
)
from copyguard.cli import main
from copyguard.curve import CurveParams, CurveState, apply_buy, apply_sell, marginal_price, tokens_for_deposit
from copyguard.detection import DetectionConfig, detect_all, detect_bump
from copyguard.economics import imitation_penalty, replay_with_copier
from copyguard.ensemble import AGENT_ORDER, ablate, auc_trapezoid, confusion_metrics, fit_weights, threshold_grid
from copyguard.features import FeatureVector, TraderSample
from copyguard.simulate import SLOGAN_POOL, Role, ScenarioKind, generate_dataset

from helpers import random_trade_seq
from oracles import auc_pairwise_oracle, bump_score_oracle
from test_agents import MockClient, positive_wallet_reply, sample_with

DETECTION_CORPUS_SEED = 1337
PIPELINE_SEED = 42
PIPELINE_AUC_FLOOR = 0.65  # frozen after the generator's first calibration run

FULL_MIX = {
    "benign": 0.40,
    "bundle_bot": 0.12,
    "gradual_bundle": 0.12,
    "sniper_bot": 0.12,
    "bump_bot": 0.12,
    "comment_bot": 0.06,
    "mixed": 0.03,
    "naive_bundle": 0.03,
}


def report(line: str):
    print(f"\n[PASS] {line}")


def test_acceptance_curve_math():
    started = time.monotonic()
    rng = random.Random(101)
    checked = 0
    for _ in range(10_000):
        params = CurveParams.make(
            x_virtual=Fraction(rng.randint(1, 500), rng.randint(1, 7)),
            y_virtual=Fraction(rng.randint(10**6, 10**10)),
            fee_rate=Fraction(rng.randint(0, 99), 10_000),
        )
        state = CurveState.fresh(params)
        # One random buy and partial sell leave an arbitrary interior state.
        buy = state.Y * Fraction(rng.randint(1, 800), 1000)
        state, _ = apply_buy(state, buy)
        sell = buy * Fraction(rng.randint(1, 999), 1000)
        state, _ = apply_sell(state, sell)
        assert abs(state.X * state.Y - params.k) / params.k <= Fraction(1, 10**12)

        x1 = state.x_deposited
        dx1 = params.x_virtual * Fraction(rng.randint(1, 100), 100)
        dx2 = params.x_virtual * Fraction(rng.randint(1, 100), 100)
        x2, x3 = x1 + dx1, x1 + dx1 + dx2

        def price(x):
            return (params.x_virtual + x) ** 2 / params.k

        def issued(x):
            return params.y_virtual - params.k / (x + params.x_virtual)

        p1, p2, p3 = price(x1), price(x2), price(x3)
        second = 2 * ((p3 - p2) / (x3 - x2) - (p2 - p1) / (x2 - x1)) / (x3 - x1)
        assert abs(second - 2 / params.k) * params.k / 2 <= Fraction(1, 10**9)

        y1, y2, y3 = issued(x1), issued(x2), issued(x3)
        assert y1 < y2 < y3
        assert ((y3 - y2) / (x3 - x2) - (y2 - y1) / (x2 - x1)) < 0

        if checked % 5 == 0:
            fee_free = CurveParams.make(params.x_virtual, params.y_virtual, 0)
            fresh = CurveState.fresh(fee_free)
            total = fresh.Y * Fraction(rng.randint(1, 500), 1000)
            parts = [total * Fraction(1, 3), total * Fraction(1, 3)]
            parts.append(total - parts[0] - parts[1])
            _, one_shot = apply_buy(fresh, total)
            split_cost, s = Fraction(0), fresh
            for p in parts:
                s, cash = apply_buy(s, p)
                split_cost += cash
            assert abs(split_cost - one_shot) <= one_shot / 10**10
        checked += 1
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"curve acceptance took {elapsed:.2f}s"
    report(f"curve math: 10,000 randomized states, exact invariant and curvature checks in {elapsed:.2f}s")


def test_acceptance_copier_penalty():
    started = time.monotonic()
    assert imitation_penalty(10, 1) == Fraction(10, 8)
    rng = random.Random(202)
    for i in range(1_000):
        seq = random_trade_seq(rng, fee="0.01" if i % 2 else 0, max_steps=8)
        rep = replay_with_copier(seq)
        assert rep.r_copier < rep.r_smart
        assert rep.x_in_copier > rep.x_in_smart
        assert rep.x_out_copier < rep.x_out_smart
        first_buy = next(q for q in seq.trades if q > 0)
        y0 = seq.initial_state.Y
        simulated = rep.penalty_per_buy[0]
        assert abs(simulated - imitation_penalty(y0, first_buy)) <= Fraction(1, 10**9)
    elapsed = time.monotonic() - started
    assert elapsed < 5.0, f"copier acceptance took {elapsed:.2f}s"
    report(f"copier penalty: strict in 1,000/1,000 randomized sequences in {elapsed:.2f}s")


def test_acceptance_detection_oracle_equivalence():
    started = time.monotonic()
    cfg = DetectionConfig()
    bundle = generate_dataset(1_000, FULL_MIX, seed=DETECTION_CORPUS_SEED)
    classifier = lambda text: text in SLOGAN_POOL

    bundle_tp = bundle_fp = bundle_fn = 0
    sniper_tp = sniper_fp = sniper_fn = 0
    planted_bumps = flagged_bumps = 0
    for scenario in bundle.scenarios:
        flags = detect_all(scenario.ledger, cfg, classifier=classifier)
        truth = scenario.truth
        bundle_tp += flags.bundle and truth.bundle
        bundle_fp += flags.bundle and not truth.bundle
        bundle_fn += (not flags.bundle) and truth.bundle
        sniper_tp += flags.sniper and truth.sniper
        sniper_fp += flags.sniper and not truth.sniper
        sniper_fn += (not flags.sniper) and truth.sniper

        _, scores, flips, _ = detect_bump(scenario.ledger, cfg)
        per_wallet_rows: dict[str, list] = {}
        for tx in scenario.ledger.trades():
            per_wallet_rows.setdefault(tx.trader, []).append((tx.kind.value, tx.token_qty))
        for wallet, rows in per_wallet_rows.items():
            oracle_flips, _, oracle_score = bump_score_oracle(rows)
            assert scores[wallet] == oracle_score, f"{scenario.spec.coin}/{wallet}"
            assert flips[wallet] == oracle_flips
            if oracle_flips == 0:
                assert scores[wallet] < cfg.bump_score_threshold  # no-flip wallets never flagged
        if scenario.spec.kind in (ScenarioKind.BUMP_BOT, ScenarioKind.MIXED) and scenario.spec.flip_count >= 50:
            planted_bumps += 1
            bump_wallet = next(w for w, r in scenario.role_map.items() if r == Role.BUMP_BOT)
            flagged_bumps += scores[bump_wallet] >= cfg.bump_score_threshold
            assert flags.bump is True

    assert bundle_fp == 0 and bundle_fn == 0 and bundle_tp > 0
    assert sniper_fp == 0 and sniper_fn == 0 and sniper_tp > 0
    assert planted_bumps > 0 and flagged_bumps == planted_bumps
    elapsed = time.monotonic() - started
    assert elapsed < 30.0, f"detection acceptance took {elapsed:.2f}s"
    report(
        "detection oracle equivalence: 1,000-coin corpus, bundle/sniper precision=recall=1.0, "
        f"bump recall {flagged_bumps}/{planted_bumps}, scores exact vs brute force in {elapsed:.2f}s"
    )


def test_acceptance_metrics_correctness():
    rng = random.Random(303)
    for _ in range(100):
        n = rng.randint(4, 200)
        labels = [rng.random() < 0.5 for _ in range(n)]
        if len(set(labels)) < 2:
            labels[0], labels[1] = True, False
        scores = [rng.choice([round(rng.random(), 2), 0.25, 0.5, 0.75]) for _ in range(n)]
        assert abs(auc_trapezoid(scores, labels) - auc_pairwise_oracle(scores, labels)) <= 1e-12
        recalls = [confusion_metrics(scores, labels, t).recall for t in threshold_grid()]
        assert all(r1 <= r0 for r0, r1 in zip(recalls, recalls[1:]))
    report("metrics: trapezoidal AUC equals pairwise oracle within 1e-12 on 100 sets; recall monotone")


def _seeded_agent_dataset(seed: int):
    rng = random.Random(seed)
    labels = [rng.random() < 0.5 for _ in range(150)]
    labels[0], labels[1] = True, False
    rows = []
    for y in labels:
        rows.append(
            {
                "wallet": min(1, max(0, rng.gauss(0.62 if y else 0.40, 0.2))),
                "coin": min(1, max(0, rng.gauss(0.58 if y else 0.45, 0.3))),
                "timing": min(1, max(0, rng.gauss(0.5, 0.25))),
            }
        )
    return rows, labels


def test_acceptance_ensemble_properties():
    for seed in (1, 2, 3, 4, 5):
        rows, labels = _seeded_agent_dataset(seed)
        _, fitted = fit_weights(rows, labels)
        for agent in AGENT_ORDER:
            single = auc_trapezoid([r[agent] for r in rows], labels)
            assert fitted >= single - 1e-12
        for agent in AGENT_ORDER:
            result = ablate(agent, rows, labels, rows, labels)
            assert result.val_auc <= fitted + 1e-12

        scores = [sum(r.values()) / 3 for r in rows]
        base = auc_trapezoid(scores, labels)
        assert abs(auc_trapezoid([5.0 * s + 1.0 for s in scores], labels) - base) <= 1e-12
        assert abs(auc_trapezoid([s**3 for s in scores], labels) - base) <= 1e-12
    report("ensemble: fitted val AUC dominates single agents and ablations; AUC transform-invariant (5 seeds)")


def _run_rule_pipeline(out_dir):
    assert main(["simulate", "--n", "200", "--seed", str(PIPELINE_SEED), "--out-dir", str(out_dir)]) == 0
    tx, comments = str(out_dir / "transactions.csv"), str(out_dir / "comments.csv")
    assert main(["detect", "--tx", tx, "--comments", comments, "--out", str(out_dir / "flags.jsonl")]) == 0
    assert (
        main(
            ["features", "--tx", tx, "--comments", comments, "--flags", str(out_dir / "flags.jsonl"),
             "--out", str(out_dir / "features.csv")]
        )
        == 0
    )
    assert (
        main(
            ["evaluate", "--features", str(out_dir / "features.csv"), "--tx", tx, "--comments", comments,
             "--out-dir", str(out_dir / "eval")]
        )
        == 0
    )
    return json.loads((out_dir / "eval" / "report.json").read_text())


def test_acceptance_end_to_end_pipeline(tmp_path):
    report_a = _run_rule_pipeline(tmp_path / "a")
    assert report_a["auc"] >= PIPELINE_AUC_FLOOR, f"test AUC {report_a['auc']:.4f} below floor"

    report_b = _run_rule_pipeline(tmp_path / "b")
    for rel in ("eval/report.json", "eval/prec_f1_vs_threshold.csv", "eval/roc.csv", "features.csv", "flags.jsonl"):
        a = (tmp_path / "a" / rel).read_bytes()
        b = (tmp_path / "b" / rel).read_bytes()
        assert a == b, f"{rel} differs between identical runs"
    report(
        f"end-to-end rule-mode pipeline: test AUC {report_a['auc']:.4f} >= {PIPELINE_AUC_FLOOR}; "
        "two identical runs byte-identical"
    )


def test_acceptance_prompt_fidelity(tmp_path):
    import pathlib

    golden_dir = pathlib.Path(__file__).parent / "golden"
    sample = sample_with()
    checks = {
        "wallet_agent.txt": assemble_agent_prompt(AgentKind.WALLET, sample).text,
        "coin_agent.txt": assemble_agent_prompt(AgentKind.COIN, sample).text,
        "timing_agent.txt": assemble_agent_prompt(AgentKind.TIMING, sample).text,
        "comment_classifier.txt": assemble_comment_prompt("any comment"),
    }
    for name, assembled in checks.items():
        golden = (golden_dir / name).read_text()
        assert golden in assembled, f"{name} not byte-contained in assembled prompt"

    reply = ChatReply(text=positive_wallet_reply(), tokens=None)
    verdict = run_llm_agent(assemble_agent_prompt(AgentKind.WALLET, sample), MockClient([reply]))
    assert verdict.decision is True
    report("prompt fidelity: golden templates byte-contained; worked exemplar parses to decision=true")
