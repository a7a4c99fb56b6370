"""Leakage-safe trader feature vectors, labels, splits, and condition gates.

One sample exists per (wallet, coin) first-buy event. Every history
feature is computed from data strictly before that first trade; only the
purchase triple (price, amount, quantity) describes the trade itself, and
the label uses the coin's full history. Missing values are explicit
sentinels (None) and always fail their condition.
"""

from __future__ import annotations

import csv
import math
from bisect import bisect_left
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from pathlib import Path

import numpy as np

from .chain import CoinLedger, TxKind
from .curve import as_fraction
from .detection import BotFlags
from .errors import DegenerateTrainingSet, MalformedRow, MissingInput

FEATURE_HEADER = [
    "wallet", "coin", "first_trade_ts", "split", "label",
    "return_all", "return_1st", "return_1_5", "return_6_10", "return_11_15",
    "n_trades", "return_std", "t_stat",
    "t_since_last", "t_since_first", "t_since_launch",
    "px", "amount", "qty",
    "bot_bundle", "bot_sniper", "bot_bump", "bot_comment",
]

T_STAT_CUT = 1.645
RETURN_STD_CUT = 1.0


class Split(str, Enum):
    TRAIN = "train"
    VAL = "val"
    TEST = "test"


@dataclass(frozen=True)
class FeatureVector:
    return_all: float | None
    return_1st: float | None
    return_1_5: float | None
    return_6_10: float | None
    return_11_15: float | None
    n_trades: int
    return_std: float | None
    t_stat: float | None
    t_since_last: int | None
    t_since_first: int
    t_since_launch: int | None
    px: float | None
    amount: float
    qty: float
    bot_bundle: bool | None
    bot_sniper: bool | None
    bot_bump: bool | None
    bot_comment: bool | None


@dataclass(frozen=True)
class TraderSample:
    wallet: str
    coin: str
    first_trade_ts: int
    features: FeatureVector
    label: bool
    split: Split | None = None

    @property
    def key(self) -> tuple[str, str]:
        return (self.wallet, self.coin)


@dataclass(frozen=True)
class ConditionThresholds:
    """Frozen after fitting on the training split; percentiles exclude sentinels."""

    n_trades_p25: float
    t_since_last_p75: float
    t_since_first_p25: float
    t_since_launch_p25: float
    px_p75: float
    amount_p75: float
    qty_p75: float
    t_stat_cut: float = T_STAT_CUT
    return_std_cut: float = RETURN_STD_CUT


class HistoryIndex:
    """Per-wallet view of all trades, queryable strictly before a cutoff."""

    def __init__(self, ledgers: dict[str, CoinLedger]):
        self._by_wallet: dict[str, list[tuple[int, str, TxKind, Fraction, Fraction]]] = {}
        self._coin_prices: dict[str, tuple[list[int], list[Fraction]]] = {}
        for coin in sorted(ledgers):
            ledger = ledgers[coin]
            ts_list: list[int] = []
            px_list: list[Fraction] = []
            for tx in ledger.trades():
                self._by_wallet.setdefault(tx.trader, []).append(
                    (tx.timestamp, coin, tx.kind, as_fraction(tx.token_qty), as_fraction(tx.sol_amount))
                )
                if tx.token_qty > 0:
                    ts_list.append(tx.timestamp)
                    px_list.append(as_fraction(tx.sol_amount) / as_fraction(tx.token_qty))
            self._coin_prices[coin] = (ts_list, px_list)
        for rows in self._by_wallet.values():
            rows.sort(key=lambda r: (r[0], r[1]))

    def last_price_before(self, coin: str, cutoff_ts: int | None) -> Fraction | None:
        """Last observed per-trade price; cutoff None means end of history."""
        ts_list, px_list = self._coin_prices.get(coin, ([], []))
        hi = len(ts_list) if cutoff_ts is None else bisect_left(ts_list, cutoff_ts)
        return px_list[hi - 1] if hi else None

    def coin_return(
        self, wallet: str, coin: str, cutoff_ts: int | None, terminal_mode: str = "last_price"
    ) -> Fraction | None:
        """Realized return of `wallet` in `coin` using trades before the cutoff.

        Residual holdings are valued at the coin's last observed price before
        the cutoff ("last_price") or written off ("zero").
        """
        sol_in = sol_out = Fraction(0)
        qty_net = Fraction(0)
        for ts, c, kind, qty, sol in self._by_wallet.get(wallet, ()):
            if c != coin or (cutoff_ts is not None and ts >= cutoff_ts):
                continue
            if kind == TxKind.BUY:
                sol_in += sol
                qty_net += qty
            else:
                sol_out += sol
                qty_net -= qty
        if sol_in == 0:
            return None
        terminal = Fraction(0)
        if terminal_mode == "last_price" and qty_net > 0:
            price = self.last_price_before(coin, cutoff_ts)
            if price is not None:
                terminal = qty_net * price
        return (sol_out + terminal) / sol_in - 1

    def previous_coins(self, wallet: str, cutoff_ts: int, exclude: str) -> list[str]:
        """Coins the wallet entered before the cutoff, most recent first."""
        first_seen: dict[str, int] = {}
        for ts, coin, _, _, _ in self._by_wallet.get(wallet, ()):
            if ts < cutoff_ts and coin != exclude and coin not in first_seen:
                first_seen[coin] = ts
        return [c for c, _ in sorted(first_seen.items(), key=lambda it: (-it[1], it[0]))]

    def activity(self, wallet: str, cutoff_ts: int) -> tuple[int, int | None, int | None]:
        """(trade count, last trade ts, first trade ts) strictly before cutoff."""
        n, last, first = 0, None, None
        for ts, _, _, _, _ in self._by_wallet.get(wallet, ()):
            if ts >= cutoff_ts:
                continue
            n += 1
            first = ts if first is None else min(first, ts)
            last = ts if last is None else max(last, ts)
        return n, last, first


def _mean(values: list[float]) -> float:
    return sum(values) / len(values)


def history_features(index: HistoryIndex, wallet: str, coin: str, t0: int, terminal_mode: str):
    """All backward-looking features of one sample, as a plain dict."""
    prev = index.previous_coins(wallet, t0, exclude=coin)
    returns = []
    for c in prev:
        r = index.coin_return(wallet, c, t0, terminal_mode)
        if r is not None:
            returns.append(float(r))
    n = len(returns)
    mean = _mean(returns) if n else None
    std = t_stat = None
    if n >= 2:
        m = _mean(returns)
        std = math.sqrt(sum((r - m) ** 2 for r in returns) / (n - 1))
        if std > 0:
            t_stat = m / (std / math.sqrt(n))
    n_trades, last_ts, first_ts = index.activity(wallet, t0)
    return {
        "return_all": mean,
        "return_1st": returns[0] if n >= 1 else None,
        "return_1_5": _mean(returns[0:5]) if n >= 1 else None,
        "return_6_10": _mean(returns[5:10]) if n >= 6 else None,
        "return_11_15": _mean(returns[10:15]) if n >= 11 else None,
        "n_trades": n_trades,
        "return_std": std,
        "t_stat": t_stat,
        "t_since_last": t0 - last_ts if last_ts is not None else None,
        "t_since_first": t0 - first_ts if first_ts is not None else 0,
    }


def build_samples(
    ledgers: dict[str, CoinLedger],
    flags: dict[str, BotFlags],
    terminal_mode: str = "last_price",
) -> list[TraderSample]:
    if terminal_mode not in ("last_price", "zero"):
        raise ValueError(f"unknown terminal_mode {terminal_mode!r}")
    index = HistoryIndex(ledgers)
    samples: list[TraderSample] = []
    for coin in sorted(ledgers):
        ledger = ledgers[coin]
        coin_flags = flags.get(coin)
        first_buys: dict[str, object] = {}
        for tx in ledger.txs:
            if tx.kind == TxKind.BUY and tx.trader not in first_buys:
                first_buys[tx.trader] = tx
        for wallet in sorted(first_buys):
            tx = first_buys[wallet]
            t0 = tx.timestamp
            hist = history_features(index, wallet, coin, t0, terminal_mode)
            qty = as_fraction(tx.token_qty)
            sol = as_fraction(tx.sol_amount)
            label_return = index.coin_return(wallet, coin, None, terminal_mode)
            features = FeatureVector(
                **hist,
                t_since_launch=(t0 - ledger.launch_ts) if ledger.launch_ts is not None else None,
                px=float(sol / qty) if qty > 0 else None,
                amount=float(sol),
                qty=float(qty),
                bot_bundle=coin_flags.bundle if coin_flags else None,
                bot_sniper=coin_flags.sniper if coin_flags else None,
                bot_bump=coin_flags.bump if coin_flags else None,
                bot_comment=coin_flags.comment if coin_flags else None,
            )
            samples.append(
                TraderSample(
                    wallet=wallet,
                    coin=coin,
                    first_trade_ts=t0,
                    features=features,
                    label=bool(label_return is not None and label_return > 0),
                )
            )
    samples.sort(key=lambda s: (s.first_trade_ts, s.wallet, s.coin))
    return samples


def split_chronological(
    samples: list[TraderSample],
    fractions: tuple[float, float, float] = (0.70, 0.15, 0.15),
) -> list[TraderSample]:
    """First 70% train, next 15% val, last 15% test, by first-trade time.

    Floor allocation with the remainder going to train; ties broken by
    (wallet, coin).
    """
    if not samples:
        raise ValueError("no samples to split")
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("split fractions must sum to 1")
    ordered = sorted(samples, key=lambda s: (s.first_trade_ts, s.wallet, s.coin))
    n = len(ordered)
    n_val = int(n * fractions[1])
    n_test = int(n * fractions[2])
    n_train = n - n_val - n_test
    out = []
    for i, sample in enumerate(ordered):
        if i < n_train:
            split = Split.TRAIN
        elif i < n_train + n_val:
            split = Split.VAL
        else:
            split = Split.TEST
        out.append(replace(sample, split=split))
    return out


def _percentile(samples: list[TraderSample], getter, q: float, name: str) -> float:
    values = [getter(s.features) for s in samples]
    values = [float(v) for v in values if v is not None]
    if not values:
        raise DegenerateTrainingSet(f"no defined {name} values in the training split")
    return float(np.percentile(values, q))


def fit_conditions(train_samples: list[TraderSample]) -> ConditionThresholds:
    if not train_samples:
        raise DegenerateTrainingSet("empty training split")
    return ConditionThresholds(
        n_trades_p25=_percentile(train_samples, lambda f: f.n_trades, 25, "n_trades"),
        t_since_last_p75=_percentile(train_samples, lambda f: f.t_since_last, 75, "t_since_last"),
        t_since_first_p25=_percentile(train_samples, lambda f: f.t_since_first, 25, "t_since_first"),
        t_since_launch_p25=_percentile(train_samples, lambda f: f.t_since_launch, 25, "t_since_launch"),
        px_p75=_percentile(train_samples, lambda f: f.px, 75, "px"),
        amount_p75=_percentile(train_samples, lambda f: f.amount, 75, "amount"),
        qty_p75=_percentile(train_samples, lambda f: f.qty, 75, "qty"),
    )


def _above(value, cut) -> bool:
    return value is not None and value > cut


def _below(value, cut) -> bool:
    return value is not None and value < cut


def evaluate_conditions(sample: TraderSample, thresholds: ConditionThresholds) -> tuple[dict[str, bool], bool]:
    """Per-feature condition checks; sentinels fail their check."""
    f = sample.features
    checks = {
        "return_all_positive": _above(f.return_all, 0.0),
        "n_trades_above_p25": _above(f.n_trades, thresholds.n_trades_p25),
        "return_std_below_1": _below(f.return_std, thresholds.return_std_cut),
        "t_stat_above_cut": _above(f.t_stat, thresholds.t_stat_cut),
        "t_since_last_below_p75": _below(f.t_since_last, thresholds.t_since_last_p75),
        "t_since_first_above_p25": _above(f.t_since_first, thresholds.t_since_first_p25),
        "t_since_launch_above_p25": _above(f.t_since_launch, thresholds.t_since_launch_p25),
        "px_below_p75": _below(f.px, thresholds.px_p75),
        "amount_below_p75": _below(f.amount, thresholds.amount_p75),
        "qty_below_p75": _below(f.qty, thresholds.qty_p75),
        "bundle_absent": f.bot_bundle is False,
    }
    return checks, all(checks.values())


def _cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "1" if value else "0"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def export_features(samples: list[TraderSample], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(FEATURE_HEADER)
        for s in samples:
            f = s.features
            writer.writerow(
                [
                    s.wallet, s.coin, s.first_trade_ts,
                    s.split.value if s.split else "",
                    _cell(s.label),
                    _cell(f.return_all), _cell(f.return_1st), _cell(f.return_1_5),
                    _cell(f.return_6_10), _cell(f.return_11_15),
                    f.n_trades, _cell(f.return_std), _cell(f.t_stat),
                    _cell(f.t_since_last), f.t_since_first, _cell(f.t_since_launch),
                    _cell(f.px), _cell(f.amount), _cell(f.qty),
                    _cell(f.bot_bundle), _cell(f.bot_sniper), _cell(f.bot_bump), _cell(f.bot_comment),
                ]
            )


def _parse_optional(raw: str, cast):
    return None if raw == "" else cast(raw)


def _parse_bool(raw: str):
    if raw == "":
        return None
    return raw == "1"


def import_features(path: str | Path) -> list[TraderSample]:
    path = Path(path)
    if not path.exists():
        raise MissingInput(str(path), "run the features step first")
    samples = []
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != FEATURE_HEADER:
            raise MalformedRow(1, f"expected feature header {','.join(FEATURE_HEADER)!r}")
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(FEATURE_HEADER):
                raise MalformedRow(row_number, f"expected {len(FEATURE_HEADER)} fields, got {len(row)}")
            r = dict(zip(FEATURE_HEADER, row))
            features = FeatureVector(
                return_all=_parse_optional(r["return_all"], float),
                return_1st=_parse_optional(r["return_1st"], float),
                return_1_5=_parse_optional(r["return_1_5"], float),
                return_6_10=_parse_optional(r["return_6_10"], float),
                return_11_15=_parse_optional(r["return_11_15"], float),
                n_trades=int(r["n_trades"]),
                return_std=_parse_optional(r["return_std"], float),
                t_stat=_parse_optional(r["t_stat"], float),
                t_since_last=_parse_optional(r["t_since_last"], int),
                t_since_first=int(r["t_since_first"]),
                t_since_launch=_parse_optional(r["t_since_launch"], int),
                px=_parse_optional(r["px"], float),
                amount=float(r["amount"]),
                qty=float(r["qty"]),
                bot_bundle=_parse_bool(r["bot_bundle"]),
                bot_sniper=_parse_bool(r["bot_sniper"]),
                bot_bump=_parse_bool(r["bot_bump"]),
                bot_comment=_parse_bool(r["bot_comment"]),
            )
            samples.append(
                TraderSample(
                    wallet=r["wallet"],
                    coin=r["coin"],
                    first_trade_ts=int(r["first_trade_ts"]),
                    features=features,
                    label=r["label"] == "1",
                    split=Split(r["split"]) if r["split"] else None,
                )
            )
    return samples
