import random
from fractions import Fraction

import pytest

from copyguard.curve import CurveParams
from copyguard.detection import (
    BotFlags,
    DetectionConfig,
    MetricsConfig,
    classify_coin_comments,
    coin_metrics,
    detect_all,
    detect_bump,
    detect_bundle,
    detect_sniper,
)
from copyguard.errors import ClassifierUnavailable, CreatorUnknown, EmptyLedger

from helpers import mk_ledger
from oracles import bump_score_oracle, bundle_oracle, sniper_oracle

CFG = DetectionConfig()


def test_bundle_fires_on_launch_block_non_creator_buy():
    ledger = mk_ledger(
        "c",
        [
            (10, 0, "create", "A", 0, 0, 100),
            (10, 1, "buy", "B", 5, 1, 100),
        ],
    )
    assert detect_bundle(ledger) is True


def test_bundle_ignores_creator_self_buy_and_later_blocks():
    ledger = mk_ledger(
        "c",
        [
            (10, 0, "create", "A", 0, 0, 100),
            (10, 1, "buy", "A", 5, 1, 100),
            (11, 0, "buy", "B", 5, 1, 101),
        ],
    )
    assert detect_bundle(ledger) is False


def test_bundle_vacuous_without_buys():
    ledger = mk_ledger("c", [(10, 0, "create", "A", 0, 0, 100)])
    assert detect_bundle(ledger) is False


def test_bundle_requires_known_creator():
    ledger = mk_ledger("c", [(10, 0, "buy", "B", 5, 1, 100)])
    with pytest.raises(CreatorUnknown):
        detect_bundle(ledger)


@pytest.mark.parametrize("offset, expected", [(3, True), (6, False)])
def test_sniper_window_boundaries(offset, expected):
    ledger = mk_ledger(
        "c",
        [
            (10, 0, "create", "A", 0, 0, 100),
            (10 + offset, 0, "buy", "B", 5, 1, 101),
        ],
    )
    assert detect_sniper(ledger, CFG) is expected


def test_sniper_ignores_creator():
    ledger = mk_ledger(
        "c",
        [
            (10, 0, "create", "A", 0, 0, 100),
            (12, 0, "buy", "A", 5, 1, 101),
        ],
    )
    assert detect_sniper(ledger, CFG) is False


def _flip_rows(pairs, qty_cycle=("1000", "2000")):
    """Alternating buy/sell pairs; consecutive pairs use different quantities
    so each pair contributes exactly one flip."""
    rows = []
    block = 20
    for i in range(pairs):
        q = qty_cycle[i % len(qty_cycle)]
        rows.append((block, 0, "buy", "W", q, 1, 100 + i))
        rows.append((block, 1, "sell", "W", q, 1, 100 + i))
        block += 1
    return rows


def test_bump_hundred_flips_zero_net():
    ledger = mk_ledger("c", [(10, 0, "create", "A", 0, 0, 99)] + _flip_rows(100))
    flagged, scores, flips, nets = detect_bump(ledger, CFG)
    assert flips["W"] == 100
    assert nets["W"] == 0
    assert scores["W"] == Fraction(100)
    assert flagged is True


def test_bump_buy_only_wallet_scores_zero():
    ledger = mk_ledger(
        "c",
        [(10, 0, "create", "A", 0, 0, 99)] + [(11 + i, 0, "buy", "W", 5 + i, 1, 100 + i) for i in range(5)],
    )
    flagged, scores, flips, _ = detect_bump(ledger, CFG)
    assert flips["W"] == 0
    assert scores["W"] == 0
    assert flagged is False


def test_bump_matches_brute_force_oracle_on_random_histories():
    rng = random.Random(13)
    qty_pool = ["1", "2.5", "7", "100.000000001"]
    for _ in range(200):
        rows = []
        wallets = [f"w{i}" for i in range(rng.randint(1, 4))]
        per_wallet = {w: [] for w in wallets}
        for i in range(rng.randint(1, 40)):
            w = rng.choice(wallets)
            kind = rng.choice(["buy", "sell"])
            q = rng.choice(qty_pool)
            rows.append((100 + i, 0, kind, w, q, 1, 1000 + i))
            per_wallet[w].append((kind, q))
        ledger = mk_ledger("c", rows)
        _, scores, flips, nets = detect_bump(ledger, CFG)
        for w, hist in per_wallet.items():
            if not hist:
                continue
            of, onet, oscore = bump_score_oracle(hist)
            assert flips[w] == of
            assert Fraction(nets[w]) == onet
            assert scores[w] == oscore


def test_bump_score_monotonicity():
    base = [(20, 0, "buy", "W", "3", 1, 100), (21, 0, "sell", "W", "3", 1, 101), (22, 0, "buy", "W", "10", 1, 102)]
    ledger = mk_ledger("c", base)
    _, scores, _, _ = detect_bump(ledger, CFG)

    # One extra flip with unchanged net position never decreases the score.
    more_flips = base + [(23, 0, "sell", "W", "7", 1, 103), (24, 0, "buy", "W", "7", 1, 104)]
    _, scores_f, _, _ = detect_bump(mk_ledger("c", more_flips), CFG)
    assert scores_f["W"] >= scores["W"]

    # A larger net position with unchanged flips never increases the score.
    more_net = base + [(23, 0, "buy", "W", "50", 1, 103)]
    _, scores_n, flips_n, _ = detect_bump(mk_ledger("c", more_net), CFG)
    assert flips_n["W"] == 1
    assert scores_n["W"] <= scores["W"]


def test_bundle_sniper_agree_with_declarative_oracles_on_random_ledgers():
    rng = random.Random(99)
    for _ in range(300):
        creator = "A"
        launch = rng.randint(5, 20)
        rows = [(launch, 0, "create", creator, 0, 0, 1000)]
        raw = [("create", launch, creator)]
        for i in range(rng.randint(0, 12)):
            trader = rng.choice(["A", "B", "C"])
            kind = rng.choice(["buy", "sell"])
            block = launch + rng.randint(0, 9)
            rows.append((block, i + 1, kind, trader, 1, 1, 1001 + i))
            raw.append((kind, block, trader))
        ledger = mk_ledger("c", rows)
        assert detect_bundle(ledger) == bundle_oracle(raw, creator, launch)
        assert detect_sniper(ledger, CFG) == sniper_oracle(raw, creator, launch, CFG.sniper_window_blocks)


def test_comment_gate_threshold():
    slogans = [("b1", 100, "MOON"), ("b2", 101, "PUMP")]
    classifier = lambda text: text.isupper()
    one = mk_ledger("c", [(10, 0, "create", "A", 0, 0, 99)], comments=slogans[:1])
    both = mk_ledger("c", [(10, 0, "create", "A", 0, 0, 99)], comments=slogans)
    assert classify_coin_comments(one, classifier, CFG)[0] is False
    assert classify_coin_comments(both, classifier, CFG)[0] is True
    with pytest.raises(ClassifierUnavailable):
        classify_coin_comments(both, None, CFG)


def test_detect_all_downgrades_undecidable_flags():
    ledger = mk_ledger("c", [(10, 0, "buy", "B", 5, 1, 100)])
    flags = detect_all(ledger, CFG)
    assert flags.bundle is None and flags.sniper is None
    assert flags.comment is None
    assert isinstance(flags, BotFlags)


def test_metrics_monotone_path_has_no_dump():
    curve = CurveParams.make(x_virtual=1, y_virtual=1000, fee_rate=0)
    rows = [(10, 0, "create", "A", 0, 0, 100)] + [
        (11 + i, 0, "buy", "B", 100, 1, 110 + i * 10) for i in range(4)
    ]
    m = coin_metrics(mk_ledger("c", rows), curve)
    assert m.ln_dump_duration is None
    assert m.ln_max_return > 0
    assert m.peak_ts == 140


def test_metrics_flat_implied_path_has_zero_max_return():
    curve = CurveParams.make()
    rows = [(10, 0, "create", "A", 0, 0, 100), (11, 0, "buy", "B", 100, 1, 110)]
    m = coin_metrics(mk_ledger("c", rows), curve, MetricsConfig(price_mode="implied"))
    assert m.ln_max_return == 0.0


def test_metrics_price_proxy_dump_crossing():
    # Pump far enough that a full unwind crosses 10% of the peak price.
    curve = CurveParams.make(x_virtual=1, y_virtual=1000, fee_rate=0)
    rows = [
        (10, 0, "create", "A", 0, 0, 100),
        (11, 0, "buy", "B", 800, 4, 110),  # Y: 1000 -> 200, price x25
        (12, 0, "sell", "B", 800, 4, 170),  # back to launch price = 0.04 * peak
    ]
    m = coin_metrics(mk_ledger("c", rows), curve, MetricsConfig(liquidity_proxy="price"))
    assert m.dump_duration_s == 60
    assert m.ln_dump_duration == pytest.approx(4.0943445622221, rel=1e-9)
    # The reserve proxy never reaches 10% of its peak here.
    m2 = coin_metrics(mk_ledger("c", rows), curve, MetricsConfig(liquidity_proxy="reserve"))
    assert m2.dump_duration_s is None


def test_metrics_requires_trades():
    with pytest.raises(EmptyLedger):
        coin_metrics(mk_ledger("c", [(10, 0, "create", "A", 0, 0, 100)]), CurveParams.make())
