"""Shared randomized-input builders for the test suite."""

from __future__ import annotations

import random
from decimal import Decimal
from fractions import Fraction

from copyguard.chain import CommentRecord, TxKind, TxRecord, build_ledger
from copyguard.curve import CurveParams, CurveState
from copyguard.economics import TradeSeq


def mk_ledger(coin, rows, comments=()):
    """rows: (block, index, kind, trader, token_qty, sol_amount, timestamp)."""
    txs = [
        TxRecord(
            coin=coin,
            block=b,
            index_in_block=i,
            kind=TxKind(kind),
            trader=trader,
            token_qty=Decimal(str(qty)),
            sol_amount=Decimal(str(sol)),
            timestamp=ts,
        )
        for b, i, kind, trader, qty, sol, ts in rows
    ]
    ledger = build_ledger(coin, txs)
    if comments:
        ledger = ledger.with_comments(
            CommentRecord(coin=coin, wallet=w, timestamp=ts, text=text) for w, ts, text in comments
        )
    return ledger


def random_trade_seq(rng: random.Random, fee="0.01", max_steps=12) -> TradeSeq:
    """A feasible leader sequence: every buy leaves Y > 2q for the copier,
    sells never exceed the leader's running balance, and the sequence holds
    at least one buy and one sell."""
    params = CurveParams.make(
        x_virtual=rng.randint(1, 20),
        y_virtual=rng.randint(50, 2000),
        fee_rate=fee,
    )
    state = CurveState.fresh(params)
    y = state.Y
    balance = Fraction(0)
    trades: list[Fraction] = []
    for step in range(rng.randint(2, max_steps)):
        sell_possible = balance > 0
        if step > 0 and sell_possible and rng.random() < 0.45:
            q = balance * Fraction(rng.randint(1, 1000), 1000)
            trades.append(-q)
            balance -= q
            y += q
        else:
            q = y * Fraction(rng.randint(1, 250), 1000)
            trades.append(q)
            balance += q
            y -= q
    if not any(t < 0 for t in trades):
        q = balance * Fraction(1, 2)
        trades.append(-q)
    return TradeSeq.make(trades, CurveState.fresh(params))
