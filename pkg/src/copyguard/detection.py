"""Rule-based manipulation detectors and per-coin performance metrics.

Bundle and sniper detection need a known creator and launch block; bump
detection works on any ledger. The comment gate is tri-state: a coin's
comment flag is None when no classifier is configured, so the pipeline
never silently degrades.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal
from fractions import Fraction
from typing import Callable

from .chain import CoinLedger, TxKind
from .curve import CurveParams, CurveState, apply_buy, apply_sell, as_fraction, marginal_price
from .errors import ClassifierUnavailable, CreatorUnknown, EmptyLedger

CommentClassifier = Callable[[str], bool]


@dataclass(frozen=True)
class DetectionConfig:
    sniper_window_blocks: int = 5
    bump_score_threshold: Fraction = Fraction(50)
    bump_epsilon: Fraction = Fraction(1)
    comment_bot_min_count: int = 2

    def __post_init__(self):
        if self.sniper_window_blocks <= 0 or self.comment_bot_min_count <= 0:
            raise ValueError("window and comment count must be positive")
        if self.bump_score_threshold <= 0 or self.bump_epsilon <= 0:
            raise ValueError("bump threshold and epsilon must be positive")


@dataclass(frozen=True)
class MetricsConfig:
    """How the price path and the dump-duration liquidity proxy are built.

    price_mode: "replay" re-executes trades through the curve, "implied"
    uses per-trade sol_amount/token_qty. liquidity_proxy: "reserve" tracks
    the effective SOL reserve, "price" tracks price itself. The two proxies
    can disagree on whether a 10% crossing ever happens; the choice is
    logged in every report.
    """

    price_mode: str = "replay"
    liquidity_proxy: str = "reserve"
    dump_fraction: Fraction = Fraction(1, 10)

    def __post_init__(self):
        if self.price_mode not in ("replay", "implied"):
            raise ValueError(f"unknown price_mode {self.price_mode!r}")
        if self.liquidity_proxy not in ("reserve", "price"):
            raise ValueError(f"unknown liquidity_proxy {self.liquidity_proxy!r}")


@dataclass(frozen=True)
class BotFlags:
    """Per-coin detection outcome; None means 'not decidable'."""

    bundle: bool | None
    sniper: bool | None
    bump: bool
    comment: bool | None
    bump_scores: dict[str, Fraction] = field(default_factory=dict)
    flip_counts: dict[str, int] = field(default_factory=dict)
    net_positions: dict[str, Decimal] = field(default_factory=dict)


@dataclass(frozen=True)
class CoinMetrics:
    ln_max_return: float
    ln_dump_duration: float | None
    peak_ts: int
    dump_duration_s: int | None = None


def detect_bundle(ledger: CoinLedger) -> bool:
    """Non-creator buy inside the launch block."""
    if ledger.creator is None or ledger.launch_block is None:
        raise CreatorUnknown(f"coin {ledger.coin!r} has no create record")
    return any(
        tx.kind == TxKind.BUY and tx.block == ledger.launch_block and tx.trader != ledger.creator
        for tx in ledger.txs
    )


def detect_sniper(ledger: CoinLedger, cfg: DetectionConfig) -> bool:
    """Non-creator buy within the first `sniper_window_blocks` after launch."""
    if ledger.creator is None or ledger.launch_block is None:
        raise CreatorUnknown(f"coin {ledger.coin!r} has no create record")
    lo, hi = ledger.launch_block, ledger.launch_block + cfg.sniper_window_blocks
    return any(
        tx.kind == TxKind.BUY and lo < tx.block <= hi and tx.trader != ledger.creator
        for tx in ledger.txs
    )


def detect_bump(ledger: CoinLedger, cfg: DetectionConfig) -> tuple[bool, dict[str, Fraction], dict[str, int], dict[str, Decimal]]:
    """Per-wallet flip scan.

    A flip is an adjacent buy/sell pair with identical token quantity
    (exact decimal equality; overlapping pairs both count). The score is
    flips / (|net position| + epsilon); the coin is flagged when any wallet
    reaches the threshold. Transfers and creates never enter the scan.
    """
    per_wallet: dict[str, list] = {}
    for tx in ledger.trades():
        per_wallet.setdefault(tx.trader, []).append(tx)

    scores: dict[str, Fraction] = {}
    flips: dict[str, int] = {}
    nets: dict[str, Decimal] = {}
    flagged = False
    for wallet, txs in per_wallet.items():
        f = 0
        net = Decimal(0)
        for i, tx in enumerate(txs):
            net += tx.token_qty if tx.kind == TxKind.BUY else -tx.token_qty
            if i + 1 < len(txs):
                nxt = txs[i + 1]
                if tx.kind != nxt.kind and tx.token_qty == nxt.token_qty:
                    f += 1
        net = abs(net)
        score = Fraction(f) / (as_fraction(net) + cfg.bump_epsilon)
        scores[wallet] = score
        flips[wallet] = f
        nets[wallet] = net
        if score >= cfg.bump_score_threshold:
            flagged = True
    return flagged, scores, flips, nets


def classify_coin_comments(
    ledger: CoinLedger,
    classifier: CommentClassifier | None,
    cfg: DetectionConfig,
) -> tuple[bool, list[tuple[str, bool]]]:
    """Label every comment bot/human and gate the coin on the bot count."""
    if classifier is None:
        raise ClassifierUnavailable("no comment classifier configured")
    labels = [(c.text, bool(classifier(c.text))) for c in ledger.comments]
    bot_count = sum(1 for _, is_bot in labels if is_bot)
    return bot_count >= cfg.comment_bot_min_count, labels


def detect_all(
    ledger: CoinLedger,
    cfg: DetectionConfig,
    classifier: CommentClassifier | None = None,
) -> BotFlags:
    """Run every detector, downgrading undecidable flags to None."""
    try:
        bundle = detect_bundle(ledger)
        sniper = detect_sniper(ledger, cfg)
    except CreatorUnknown:
        bundle = sniper = None
    bump, scores, flips, nets = detect_bump(ledger, cfg)
    try:
        comment, _ = classify_coin_comments(ledger, classifier, cfg)
    except ClassifierUnavailable:
        comment = None
    return BotFlags(
        bundle=bundle,
        sniper=sniper,
        bump=bump,
        comment=comment,
        bump_scores=scores,
        flip_counts=flips,
        net_positions=nets,
    )


def _price_path(ledger: CoinLedger, curve: CurveParams, metrics_cfg: MetricsConfig):
    """Yield (timestamp, price, reserve_proxy) per trade, preceded by launch."""
    points: list[tuple[int, Fraction, Fraction]] = []
    if metrics_cfg.price_mode == "replay":
        state = CurveState.fresh(curve)
        launch_ts = ledger.launch_ts if ledger.launch_ts is not None else ledger.txs[0].timestamp
        points.append((launch_ts, marginal_price(state), state.X))
        for tx in ledger.trades():
            if tx.kind == TxKind.BUY:
                state, _ = apply_buy(state, tx.token_qty)
            else:
                state, _ = apply_sell(state, tx.token_qty)
            points.append((tx.timestamp, marginal_price(state), state.X))
    else:
        for tx in ledger.trades():
            if tx.token_qty == 0:
                continue
            price = as_fraction(tx.sol_amount) / as_fraction(tx.token_qty)
            points.append((tx.timestamp, price, price))
    return points


def coin_metrics(
    ledger: CoinLedger,
    curve: CurveParams,
    metrics_cfg: MetricsConfig = MetricsConfig(),
) -> CoinMetrics:
    """Max log return over the path and seconds from peak to the 10% level.

    The dump duration is None (undefined) when the proxy never falls to the
    configured fraction of its peak, or when the crossing lands in the same
    second as the peak.
    """
    points = _price_path(ledger, curve, metrics_cfg)
    if not points or not any(True for _ in ledger.trades()):
        raise EmptyLedger(f"coin {ledger.coin!r} has no priced trades")

    launch_price = points[0][1]
    proxy_index = 2 if metrics_cfg.liquidity_proxy == "reserve" else 1
    peak_i = max(range(len(points)), key=lambda i: (points[i][1], -i))
    peak_ts, peak_price = points[peak_i][0], points[peak_i][1]
    peak_proxy = points[peak_i][proxy_index]
    ln_max_return = float(math.log(peak_price / launch_price))

    dump_s: int | None = None
    level = peak_proxy * metrics_cfg.dump_fraction
    for point in points[peak_i + 1 :]:
        if point[proxy_index] <= level:
            dump_s = point[0] - peak_ts
            break
    ln_dump = float(math.log(dump_s)) if dump_s is not None and dump_s > 0 else None
    if dump_s is not None and dump_s <= 0:
        dump_s = 0
        ln_dump = None
    return CoinMetrics(
        ln_max_return=ln_max_return,
        ln_dump_duration=ln_dump,
        peak_ts=peak_ts,
        dump_duration_s=dump_s,
    )
