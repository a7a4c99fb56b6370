"""Leader vs copier execution economics on the bonding curve.

Replays a smart-money trade sequence and derives the cash flows of a
one-to-one immediate copier. The leader's trajectory is exogenous: the
effective reserve it sees evolves from its own trades only, while the
copier's trade t executes against the reserve left immediately after the
leader's trade t. Buys therefore cost the copier a strict multiple
Y / (Y - 2q) of the leader's outlay, and sells pay it strictly less.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .curve import CurveState, Numeric, as_fraction, sol_flow
from .errors import (
    DomainError,
    InfeasibleForCopier,
    InfeasibleTrade,
    InvalidTradeSequence,
)


@dataclass(frozen=True)
class TradeSeq:
    """Signed token quantities (buy > 0, sell < 0) plus the starting curve state."""

    trades: tuple[Fraction, ...]
    initial_state: CurveState

    @classmethod
    def make(cls, trades: Sequence[Numeric], initial_state: CurveState) -> "TradeSeq":
        qs = tuple(as_fraction(t) for t in trades)
        if any(q == 0 for q in qs):
            raise InvalidTradeSequence("zero-quantity trades are not allowed")
        return cls(trades=qs, initial_state=initial_state)


@dataclass(frozen=True)
class ReturnReport:
    x_in_smart: Fraction
    x_out_smart: Fraction
    x_in_copier: Fraction
    x_out_copier: Fraction
    r_smart: Fraction
    r_copier: Fraction
    penalty_per_buy: tuple[Fraction, ...]
    truncated_sells: tuple[int, ...] = field(default=())

    @property
    def gross_smart(self) -> Fraction:
        return self.r_smart + 1

    @property
    def gross_copier(self) -> Fraction:
        return self.r_copier + 1

    def to_dict(self) -> dict:
        return {
            "x_in_smart": float(self.x_in_smart),
            "x_out_smart": float(self.x_out_smart),
            "x_in_copier": float(self.x_in_copier),
            "x_out_copier": float(self.x_out_copier),
            "r_smart": float(self.r_smart),
            "r_copier": float(self.r_copier),
            "gross_smart": float(self.gross_smart),
            "gross_copier": float(self.gross_copier),
            "penalty_per_buy": [float(p) for p in self.penalty_per_buy],
            "truncated_sells": list(self.truncated_sells),
        }


def imitation_penalty(y_reserve: Numeric, buy_qty: Numeric) -> Fraction:
    """Copier-to-leader cost ratio Y / (Y - 2d) for one replicated buy."""
    y = as_fraction(y_reserve)
    d = as_fraction(buy_qty)
    if d <= 0:
        raise DomainError("buy quantity must be positive")
    if y <= 2 * d:
        raise DomainError(f"replication infeasible: Y={float(y):.6g} <= 2d={float(2 * d):.6g}")
    return y / (y - 2 * d)


def replay_with_copier(
    seq: TradeSeq,
    interleaved_noise: Sequence[Numeric] | None = None,
) -> ReturnReport:
    """Replay a leader sequence with a one-to-one immediate copier.

    `interleaved_noise`, when given, holds one signed retail quantity per
    leader trade, executed between the leader's fill and the copier's
    replication (sensitivity mode only; the baseline model interposes
    nothing).
    """
    if not any(q > 0 for q in seq.trades):
        raise InvalidTradeSequence("sequence has no buys; x_in would be zero")
    if not any(q < 0 for q in seq.trades):
        raise InvalidTradeSequence("sequence has no sells; x_out would be zero")
    noise = [as_fraction(n) for n in interleaved_noise] if interleaved_noise else None
    if noise is not None and len(noise) != len(seq.trades):
        raise InvalidTradeSequence("need one noise entry per leader trade")

    params = seq.initial_state.params
    k, fee = params.k, params.fee_rate
    y = seq.initial_state.y_reserve

    x_in_s = x_out_s = x_in_c = x_out_c = Fraction(0)
    leader_balance = copier_balance = Fraction(0)
    penalties: list[Fraction] = []
    truncated: list[int] = []

    for t, q in enumerate(seq.trades):
        if q > 0:
            if y <= q:
                raise InfeasibleTrade(f"trade {t}: leader buy exceeds reserve")
            x_in_s += sol_flow(k, y, q) * (1 + fee)
            leader_balance += q
        else:
            d = -q
            if leader_balance < d:
                raise InfeasibleTrade(f"trade {t}: leader sells more than held")
            x_out_s += -sol_flow(k, y, q) * (1 - fee)
            leader_balance -= d

        y_after_leader = y - q
        y_copier = y_after_leader - noise[t] if noise is not None else y_after_leader
        if y_copier <= 0:
            raise InfeasibleForCopier(t, "noise exhausted the reserve")

        if q > 0:
            if y_copier <= q:
                raise InfeasibleForCopier(t)
            x_in_c += sol_flow(k, y_copier, q) * (1 + fee)
            copier_balance += q
            if noise is None:
                penalties.append(y / (y - 2 * q))
        else:
            d = min(-q, copier_balance)
            if d < -q:
                truncated.append(t)
            if d > 0:
                x_out_c += -sol_flow(k, y_copier, -d) * (1 - fee)
                copier_balance -= d

        y = y_copier if noise is not None else y_after_leader

    return ReturnReport(
        x_in_smart=x_in_s,
        x_out_smart=x_out_s,
        x_in_copier=x_in_c,
        x_out_copier=x_out_c,
        r_smart=x_out_s / x_in_s - 1,
        r_copier=x_out_c / x_in_c - 1,
        penalty_per_buy=tuple(penalties),
        truncated_sells=tuple(truncated),
    )


def replay_ledger_with_copier(ledger, wallet: str, curve_params) -> ReturnReport:
    """Derive copier cash flows for one wallet's trades inside a full ledger.

    All market trades replay through the curve in ledger order, so each of
    the wallet's fills executes at the reserve it historically faced; the
    copier's mirror fill executes at that reserve shifted by the wallet's
    own quantity. The wallet's return here is its realized one, market
    moves included, and the copier still strictly underperforms it.
    """
    from .chain import TxKind  # local import to avoid a module cycle
    from .curve import CurveState

    k, fee = curve_params.k, curve_params.fee_rate
    state = CurveState.fresh(curve_params)
    x_in_s = x_out_s = x_in_c = x_out_c = Fraction(0)
    copier_balance = Fraction(0)
    penalties: list[Fraction] = []
    truncated: list[int] = []
    n_leader_buys = n_leader_sells = 0
    ordinal = -1

    for tx in ledger.trades():
        qty = as_fraction(tx.token_qty)
        if tx.trader != wallet:
            y = state.y_reserve
            if tx.kind == TxKind.BUY:
                state = CurveState(params=curve_params, y_reserve=y - qty)
            else:
                state = CurveState(params=curve_params, y_reserve=y + qty)
            continue
        ordinal += 1
        y = state.y_reserve
        if tx.kind == TxKind.BUY:
            if y <= qty:
                raise InfeasibleTrade(f"trade {ordinal}: ledger buy exceeds reserve")
            x_in_s += sol_flow(k, y, qty) * (1 + fee)
            y_copier = y - qty
            if y_copier <= qty:
                raise InfeasibleForCopier(ordinal)
            x_in_c += sol_flow(k, y_copier, qty) * (1 + fee)
            penalties.append(y / (y - 2 * qty))
            copier_balance += qty
            n_leader_buys += 1
            state = CurveState(params=curve_params, y_reserve=y - qty)
        else:
            x_out_s += -sol_flow(k, y, -qty) * (1 - fee)
            d = min(qty, copier_balance)
            if d < qty:
                truncated.append(ordinal)
            if d > 0:
                y_copier = y + qty
                x_out_c += -sol_flow(k, y_copier, -d) * (1 - fee)
                copier_balance -= d
            n_leader_sells += 1
            state = CurveState(params=curve_params, y_reserve=y + qty)

    if n_leader_buys == 0 or x_in_c == 0:
        raise InvalidTradeSequence(f"wallet {wallet!r} never bought in coin {ledger.coin!r}")
    if n_leader_sells == 0:
        raise InvalidTradeSequence(f"wallet {wallet!r} never sold in coin {ledger.coin!r}")
    return ReturnReport(
        x_in_smart=x_in_s,
        x_out_smart=x_out_s,
        x_in_copier=x_in_c,
        x_out_copier=x_out_c,
        r_smart=x_out_s / x_in_s - 1,
        r_copier=x_out_c / x_in_c - 1,
        penalty_per_buy=tuple(penalties),
        truncated_sells=tuple(truncated),
    )
