"""Constant-product bonding curve with virtual reserves.

Issuance follows y(x) = y_virtual - k / (x + x_virtual), so the effective
reserves X = x_virtual + x and Y = y_virtual - y satisfy X * Y = k at all
times. All arithmetic is exact rational (`fractions.Fraction`); binary
floating point never touches curve state, so the invariant holds to zero
error and strict-inequality comparisons downstream cannot flip from
rounding.

Fee handling: the curve state evolves on fee-exclusive amounts; the fee
only scales the cash legs (buys pay cost * (1 + fee), sells receive
proceeds * (1 - fee)).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import Union

from .errors import InfeasibleTrade

Numeric = Union[int, str, Decimal, Fraction, float]

#: Plausible launch-pool magnitudes used when no explicit parameters are given.
DEFAULT_X_VIRTUAL = Fraction(30)
DEFAULT_Y_VIRTUAL = Fraction(1_073_000_000)
DEFAULT_FEE_RATE = Fraction(1, 100)


def as_fraction(value: Numeric) -> Fraction:
    """Convert supported numeric types to an exact Fraction.

    Floats are routed through their shortest decimal repr so that config
    values like 0.01 mean 1/100, not the nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        return Fraction(Decimal(value))
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


@dataclass(frozen=True)
class CurveParams:
    """Protocol-fixed virtual reserves and fee of one bonding curve."""

    x_virtual: Fraction
    y_virtual: Fraction
    k: Fraction
    fee_rate: Fraction = DEFAULT_FEE_RATE

    def __post_init__(self):
        if self.x_virtual <= 0 or self.y_virtual <= 0:
            raise ValueError("virtual reserves must be positive")
        if self.k != self.x_virtual * self.y_virtual:
            raise ValueError("k must equal x_virtual * y_virtual exactly")
        if not (0 <= self.fee_rate < 1):
            raise ValueError("fee_rate must lie in [0, 1)")

    @classmethod
    def make(
        cls,
        x_virtual: Numeric = DEFAULT_X_VIRTUAL,
        y_virtual: Numeric = DEFAULT_Y_VIRTUAL,
        fee_rate: Numeric = DEFAULT_FEE_RATE,
    ) -> "CurveParams":
        xv = as_fraction(x_virtual)
        yv = as_fraction(y_virtual)
        return cls(x_virtual=xv, y_virtual=yv, k=xv * yv, fee_rate=as_fraction(fee_rate))


@dataclass(frozen=True)
class CurveState:
    """Immutable curve state; `y_reserve` is the single free variable.

    Storing Y alone and deriving X = k / Y keeps X * Y = k exact by
    construction across arbitrary trade sequences.
    """

    params: CurveParams
    y_reserve: Fraction

    def __post_init__(self):
        if self.y_reserve <= 0:
            raise ValueError("effective token reserve must stay positive")
        if self.y_reserve > self.params.y_virtual:
            raise ValueError("token reserve cannot exceed the virtual reserve")

    @classmethod
    def fresh(cls, params: CurveParams) -> "CurveState":
        return cls(params=params, y_reserve=params.y_virtual)

    @property
    def Y(self) -> Fraction:
        return self.y_reserve

    @property
    def X(self) -> Fraction:
        return self.params.k / self.y_reserve

    @property
    def x_deposited(self) -> Fraction:
        return self.X - self.params.x_virtual

    @property
    def tokens_issued(self) -> Fraction:
        return self.params.y_virtual - self.y_reserve


def sol_flow(k: Fraction, y_reserve: Fraction, qty: Fraction) -> Fraction:
    """SOL moved by a signed token trade of `qty` at reserve `y_reserve`.

    Positive qty (buy) returns SOL spent; negative qty (sell) returns a
    negative amount whose magnitude is SOL received. Requires y_reserve > qty.
    """
    return k * qty / (y_reserve * (y_reserve - qty))


def tokens_for_deposit(state: CurveState, sol_in: Numeric) -> Fraction:
    """Tokens issued for a fee-exclusive SOL deposit of `sol_in`."""
    dx = as_fraction(sol_in)
    if dx <= 0:
        raise InfeasibleTrade("deposit must be positive")
    k = state.params.k
    return k / state.X - k / (state.X + dx)


def marginal_price(state: CurveState) -> Fraction:
    """Instantaneous SOL-per-token price, X^2 / k (== k / Y^2)."""
    x = state.X
    return x * x / state.params.k


def apply_buy(state: CurveState, token_qty: Numeric) -> tuple[CurveState, Fraction]:
    """Buy an exact token quantity; returns (new state, fee-inclusive SOL cost)."""
    q = as_fraction(token_qty)
    if q <= 0:
        raise InfeasibleTrade("buy quantity must be positive")
    if q >= state.y_reserve:
        raise InfeasibleTrade(
            f"buy of {float(q):.6g} tokens not feasible at reserve {float(state.y_reserve):.6g}"
        )
    cost = sol_flow(state.params.k, state.y_reserve, q)
    cash = cost * (1 + state.params.fee_rate)
    return CurveState(params=state.params, y_reserve=state.y_reserve - q), cash


def apply_sell(state: CurveState, token_qty: Numeric) -> tuple[CurveState, Fraction]:
    """Sell an exact token quantity; returns (new state, fee-net SOL proceeds).

    The curve itself only requires that issued supply covers the sale; the
    per-wallet balance check belongs to callers.
    """
    q = as_fraction(token_qty)
    if q <= 0:
        raise InfeasibleTrade("sell quantity must be positive")
    if q > state.tokens_issued:
        raise InfeasibleTrade("sell exceeds total issued supply")
    proceeds = -sol_flow(state.params.k, state.y_reserve, -q)
    cash = proceeds * (1 - state.params.fee_rate)
    return CurveState(params=state.params, y_reserve=state.y_reserve + q), cash
