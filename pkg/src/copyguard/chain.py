"""Canonical in-memory model for coins, transactions, and comments.

Quantities are decimal fixed-point with 9 fractional digits and all
comparisons are exact. Ledgers are immutable after ingestion and safe to
share across threads; transfers are carried but ignored by every detector.
"""

from __future__ import annotations

import csv
import json
import re
from dataclasses import dataclass, field, replace
from decimal import Decimal, InvalidOperation
from enum import Enum
from pathlib import Path
from typing import Iterable, Iterator

from .errors import DuplicateCreate, DuplicateOrderingKey, MalformedRow, MissingInput

QUANTUM = Decimal("0.000000001")

TX_HEADER = ["coin", "block", "index_in_block", "kind", "trader", "token_qty", "sol_amount", "timestamp"]
COMMENT_HEADER = ["coin", "wallet", "timestamp", "text"]

_WALLET_REF = re.compile(r"#\d{6,}")


class TxKind(str, Enum):
    CREATE = "create"
    BUY = "buy"
    SELL = "sell"
    TRANSFER = "transfer"


@dataclass(frozen=True)
class TxRecord:
    """One on-chain action; (block, index_in_block) is unique per coin."""

    coin: str
    block: int
    index_in_block: int
    kind: TxKind
    trader: str
    token_qty: Decimal
    sol_amount: Decimal
    timestamp: int

    @property
    def ordering_key(self) -> tuple[int, int]:
        return (self.block, self.index_in_block)


@dataclass(frozen=True)
class CommentRecord:
    coin: str
    wallet: str
    timestamp: int
    text: str
    references_other_wallet: bool = field(init=False)

    def __post_init__(self):
        if not self.text:
            raise ValueError("comment text must be non-empty")
        object.__setattr__(self, "references_other_wallet", bool(_WALLET_REF.search(self.text)))


@dataclass(frozen=True)
class CoinLedger:
    """All activity of one coin; txs sorted by (block, index_in_block).

    `creator` is None for coins whose trades were observed without a create
    record; such coins are excluded from bundle/sniper detection but stay
    eligible for bump detection and feature extraction.
    """

    coin: str
    creator: str | None
    launch_block: int | None
    launch_ts: int | None
    txs: tuple[TxRecord, ...]
    comments: tuple[CommentRecord, ...] = ()

    def trades(self) -> Iterator[TxRecord]:
        """Buys and sells only; creates and transfers are skipped."""
        return (tx for tx in self.txs if tx.kind in (TxKind.BUY, TxKind.SELL))

    def with_comments(self, comments: Iterable[CommentRecord]) -> "CoinLedger":
        merged = tuple(sorted(comments, key=lambda c: (c.timestamp, c.wallet, c.text)))
        return replace(self, comments=merged)


@dataclass
class IngestResult:
    ledgers: dict[str, CoinLedger]
    diagnostics: list[str] = field(default_factory=list)


def parse_quantity(raw: str, row_number: int, name: str) -> Decimal:
    try:
        value = Decimal(raw)
    except InvalidOperation:
        raise MalformedRow(row_number, f"{name} is not a decimal: {raw!r}") from None
    if not value.is_finite() or value < 0:
        raise MalformedRow(row_number, f"{name} must be a finite non-negative decimal")
    if value != value.quantize(QUANTUM):
        raise MalformedRow(row_number, f"{name} has more than 9 fractional digits: {raw!r}")
    return value


def _parse_tx(fields: dict, row_number: int) -> TxRecord:
    try:
        kind = TxKind(str(fields["kind"]))
    except (KeyError, ValueError):
        raise MalformedRow(row_number, f"unknown kind: {fields.get('kind')!r}") from None
    try:
        block = int(fields["block"])
        index_in_block = int(fields["index_in_block"])
        timestamp = int(fields["timestamp"])
    except (KeyError, TypeError, ValueError):
        raise MalformedRow(row_number, "block, index_in_block, and timestamp must be integers") from None
    if block < 0 or index_in_block < 0:
        raise MalformedRow(row_number, "block and index_in_block must be non-negative")
    coin = str(fields.get("coin", "")).strip()
    trader = str(fields.get("trader", "")).strip()
    if not coin or not trader:
        raise MalformedRow(row_number, "coin and trader must be non-empty")
    token_qty = parse_quantity(str(fields["token_qty"]), row_number, "token_qty")
    sol_amount = parse_quantity(str(fields["sol_amount"]), row_number, "sol_amount")
    if kind == TxKind.CREATE and token_qty != 0:
        raise MalformedRow(row_number, "create rows must carry token_qty = 0")
    if kind in (TxKind.BUY, TxKind.SELL) and token_qty <= 0:
        raise MalformedRow(row_number, f"{kind.value} rows must carry token_qty > 0")
    return TxRecord(coin, block, index_in_block, kind, trader, token_qty, sol_amount, timestamp)


def build_ledger(coin: str, txs: list[TxRecord], diagnostics: list[str] | None = None) -> CoinLedger:
    """Assemble one coin's ledger, extracting creator/launch from its create row."""
    ordered = sorted(txs, key=lambda t: t.ordering_key)
    creates = [t for t in ordered if t.kind == TxKind.CREATE]
    creator = launch_block = launch_ts = None
    if creates:
        creator = creates[0].trader
        launch_block = creates[0].block
        launch_ts = creates[0].timestamp
    elif diagnostics is not None:
        diagnostics.append(f"coin {coin!r}: no create record; creator unknown")
    return CoinLedger(
        coin=coin,
        creator=creator,
        launch_block=launch_block,
        launch_ts=launch_ts,
        txs=tuple(ordered),
    )


def _iter_rows(path: Path, fmt: str) -> Iterator[tuple[int, dict]]:
    if fmt == "csv":
        with path.open(newline="", encoding="utf-8") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                return
            if header != TX_HEADER:
                raise MalformedRow(1, f"expected header {','.join(TX_HEADER)!r}, got {','.join(header)!r}")
            for row_number, row in enumerate(reader, start=2):
                if not row:
                    continue
                if len(row) != len(TX_HEADER):
                    raise MalformedRow(row_number, f"expected {len(TX_HEADER)} fields, got {len(row)}")
                yield row_number, dict(zip(TX_HEADER, row))
    elif fmt == "jsonl":
        with path.open(encoding="utf-8") as fh:
            for row_number, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    obj = json.loads(line, parse_float=Decimal)
                except json.JSONDecodeError as exc:
                    raise MalformedRow(row_number, f"invalid JSON: {exc}") from None
                if not isinstance(obj, dict):
                    raise MalformedRow(row_number, "each line must be a JSON object")
                missing = [k for k in TX_HEADER if k not in obj]
                if missing:
                    raise MalformedRow(row_number, f"missing fields: {missing}")
                yield row_number, obj
    else:
        raise ValueError(f"unknown format: {fmt!r}")


def ingest_transactions(path: str | Path, fmt: str = "csv", strict: bool = True) -> IngestResult:
    """Load transactions into one CoinLedger per coin.

    In strict mode any malformed row or invariant violation raises; with
    strict=False offending rows are skipped and reported in diagnostics.
    Coins without a create record are kept with creator=None.
    """
    path = Path(path)
    if not path.exists():
        raise MissingInput(str(path))
    diagnostics: list[str] = []
    per_coin: dict[str, list[TxRecord]] = {}
    seen_keys: dict[str, set[tuple[int, int]]] = {}
    created: dict[str, int] = {}

    for row_number, fields in _iter_rows(path, fmt):
        try:
            tx = _parse_tx(fields, row_number)
            keys = seen_keys.setdefault(tx.coin, set())
            if tx.ordering_key in keys:
                raise DuplicateOrderingKey(tx.coin, tx.ordering_key, row_number)
            if tx.kind == TxKind.CREATE:
                if tx.coin in created:
                    raise DuplicateCreate(tx.coin, row_number)
                created[tx.coin] = row_number
        except (MalformedRow, DuplicateOrderingKey, DuplicateCreate) as exc:
            if strict:
                raise
            diagnostics.append(str(exc))
            continue
        keys.add(tx.ordering_key)
        per_coin.setdefault(tx.coin, []).append(tx)

    ledgers = {coin: build_ledger(coin, txs, diagnostics) for coin, txs in sorted(per_coin.items())}
    return IngestResult(ledgers=ledgers, diagnostics=diagnostics)


def ingest_comments(path: str | Path, ledgers: dict[str, CoinLedger]) -> tuple[dict[str, CoinLedger], list[str]]:
    """Attach comments to already-ingested ledgers.

    Returns updated ledgers plus warnings for comments on unknown coins
    (never an error).
    """
    path = Path(path)
    if not path.exists():
        raise MissingInput(str(path))
    warnings: list[str] = []
    per_coin: dict[str, list[CommentRecord]] = {coin: [] for coin in ledgers}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            return dict(ledgers), warnings
        if header != COMMENT_HEADER:
            raise MalformedRow(1, f"expected header {','.join(COMMENT_HEADER)!r}, got {','.join(header)!r}")
        for row_number, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(COMMENT_HEADER):
                raise MalformedRow(row_number, f"expected {len(COMMENT_HEADER)} fields, got {len(row)}")
            coin, wallet, raw_ts, text = row
            try:
                ts = int(raw_ts)
            except ValueError:
                raise MalformedRow(row_number, f"timestamp is not an integer: {raw_ts!r}") from None
            if not text:
                raise MalformedRow(row_number, "comment text must be non-empty")
            if coin not in per_coin:
                warnings.append(f"row {row_number}: comment for unknown coin {coin!r}")
                continue
            per_coin[coin].append(CommentRecord(coin=coin, wallet=wallet, timestamp=ts, text=text))
    updated = {coin: ledger.with_comments(per_coin[coin]) for coin, ledger in ledgers.items()}
    return updated, warnings


def format_quantity(value: Decimal) -> str:
    """Canonical plain-decimal rendering (no exponent notation)."""
    return format(value, "f")


def write_transactions_csv(ledgers: Iterable[CoinLedger], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(TX_HEADER)
        for ledger in ledgers:
            for tx in ledger.txs:
                writer.writerow(
                    [
                        tx.coin,
                        tx.block,
                        tx.index_in_block,
                        tx.kind.value,
                        tx.trader,
                        format_quantity(tx.token_qty),
                        format_quantity(tx.sol_amount),
                        tx.timestamp,
                    ]
                )


def write_comments_csv(ledgers: Iterable[CoinLedger], path: str | Path) -> None:
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(COMMENT_HEADER)
        for ledger in ledgers:
            for c in ledger.comments:
                writer.writerow([c.coin, c.wallet, c.timestamp, c.text])
