"""Seeded generators for labeled manipulation scenarios.

Every scenario executes all trades through the exact bonding curve, so
price paths, per-wallet cash flows, and ground-truth metrics are
self-consistent. Ground-truth flags come from what the generator planted,
never from running the detectors, which keeps detector validation honest.

Wallet quantities written to the ledger are quantized to the chain's
9-decimal fixed point; the generator additionally keeps exact rational
flows for conservation and profit ground truth.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import dataclass, field, replace
from decimal import ROUND_HALF_EVEN, Decimal
from enum import Enum
from fractions import Fraction

from .chain import CoinLedger, CommentRecord, TxKind, TxRecord, build_ledger
from .curve import CurveParams, CurveState, apply_buy, apply_sell, as_fraction, marginal_price, tokens_for_deposit
from .detection import BotFlags, CoinMetrics, DetectionConfig, MetricsConfig
from .errors import InfeasibleSpec, InfeasibleTrade

QUANTUM = Decimal("0.000000001")
BLOCK_MS = 400  # Solana-style sub-second blocks


class ScenarioKind(str, Enum):
    BENIGN = "benign"
    NAIVE_BUNDLE = "naive_bundle"
    BUNDLE_BOT = "bundle_bot"
    GRADUAL_BUNDLE = "gradual_bundle"
    SNIPER_BOT = "sniper_bot"
    BUMP_BOT = "bump_bot"
    COMMENT_BOT = "comment_bot"
    MIXED = "mixed"


class Role(str, Enum):
    CREATOR = "creator"
    CONTROLLED = "controlled"
    SNIPER = "sniper"
    BUMP_BOT = "bump_bot"
    COPIER = "copier"
    RETAIL = "retail"
    KOL = "kol"


#: Slogan-style texts reused by planted comment bots. Every entry must be
#: classified bot by the rule classifier (enforced by tests).
SLOGAN_POOL = (
    "TO THE MOON!!! READYY",
    "we'll get there! LFG",
    "Bro moon incoming right now",
    "SENDOOR",
    "PUMP IT!!! 100x SOON",
    "LFG!!! SEND IT",
    "MOON TIME baby!!!",
    "100x gem right here LFG",
    "ready for takeoff!!! moon",
    "stack your sacks, moon soon",
)

#: Organic texts: wallet references or nuanced/longer phrasing; every entry
#: must be classified human by the rule classifier (enforced by tests).
ORGANIC_POOL = (
    "#88857219 show screenshot as proof pls?",
    "Fake web bros, not same ca",
    "#90017744 did you check the dev wallet before buying?",
    "the chart looks heavy here, waiting for a retrace before adding",
    "#77345120 creator wallet moved funds twice already, be careful",
    "idk, volume feels thin compared to yesterday tbh",
)


def child_rng(seed: int, *parts) -> random.Random:
    digest = hashlib.sha256("|".join([str(seed), *map(str, parts)]).encode()).digest()
    return random.Random(int.from_bytes(digest[:8], "big"))


@dataclass(frozen=True)
class ExternalTrader:
    """A population wallet injected into a scenario by the dataset builder."""

    wallet: str
    role: Role
    entry_offset: int  # blocks after the lift phase opens
    sol_budget: str  # decimal literal, kept as text for hashability
    exit: str  # "peak" | "dump" | "hold"


@dataclass(frozen=True)
class ScenarioSpec:
    kind: ScenarioKind
    seed: int
    coin: str = "coin-0000"
    launch_block: int = 1_000_000
    launch_ts: int = 1_700_000_000
    curve: CurveParams = field(default_factory=CurveParams.make)
    n_retail: int = 8
    n_controlled_wallets: int = 3
    flip_count: int = 60
    gradual_span_blocks: int = 12
    sniper_delay_blocks: int = 2
    comment_bot_count: int = 3
    n_copiers: int = 2
    entry_guard_blocks: int = 5  # earliest organic entry; keeps them outside the sniper window
    lift_span_blocks: int = 15
    exit_span_blocks: int = 3
    retail_sol_mu: float = -1.0
    retail_sol_sigma: float = 0.7
    retail_sell_prob: float = 0.75
    controlled_sol: float = 4.0
    creator_self_buy_sol: float = 6.0
    kol_sol: float = 1.5
    copier_sol: float = 1.0
    sniper_sol: float = 1.0
    bump_sol: float = 0.05
    n_organic_comments: int = 2
    full_exit: bool = False
    external_traders: tuple[ExternalTrader, ...] = ()

    def __post_init__(self):
        if not 1 <= self.sniper_delay_blocks <= 5:
            raise InfeasibleSpec("sniper_delay_blocks must lie in [1, 5]")
        if self.sniper_delay_blocks > self.entry_guard_blocks:
            raise InfeasibleSpec("sniper delay must fall inside the guarded window")
        if self.gradual_span_blocks <= 0 or self.lift_span_blocks <= 0 or self.exit_span_blocks <= 0:
            raise InfeasibleSpec("phase spans must be positive")
        if min(self.n_retail, self.n_controlled_wallets, self.flip_count, self.comment_bot_count, self.n_copiers) < 0:
            raise InfeasibleSpec("counts must be non-negative")


@dataclass(frozen=True)
class WalletFlow:
    cash_in: Fraction
    cash_out: Fraction
    tokens: Decimal
    terminal_value: Fraction

    @property
    def profit(self) -> Fraction:
        return self.cash_out + self.terminal_value - self.cash_in


@dataclass(frozen=True)
class Conservation:
    cash_in: Fraction
    cash_out: Fraction
    x_growth: Fraction
    fees: Fraction


@dataclass(frozen=True)
class LabeledScenario:
    spec: ScenarioSpec
    ledger: CoinLedger
    truth: BotFlags
    truth_metrics: CoinMetrics
    role_map: dict[str, Role]
    wallet_flows: dict[str, WalletFlow]
    conservation: Conservation
    planted_bot_comments: int
    comment_truth: tuple[tuple[str, bool], ...]  # (text, is_bot) in ledger order


class _CoinBuilder:
    """Executes a block-ordered trade schedule through the curve.

    Intents are collected first and sorted by (block, insertion order)
    before execution, so the builder's internal price path is exactly what
    a canonical replay of the finished ledger produces.
    """

    def __init__(self, spec: ScenarioSpec):
        self.spec = spec
        self.state = CurveState.fresh(spec.curve)
        self.txs: list[TxRecord] = []
        self.comments: list[CommentRecord] = []
        self._index_in_block: dict[int, int] = {}
        self._schedule: list[tuple[int, int, str, tuple]] = []
        self._qty_cache: dict[str, Decimal] = {}
        self.balances: dict[str, Decimal] = {}
        self.cash_in: dict[str, Fraction] = {}
        self.cash_out: dict[str, Fraction] = {}
        self.total_cost = Fraction(0)  # fee-exclusive SOL into the curve
        self.total_proceeds = Fraction(0)  # fee-exclusive SOL out of the curve
        self.fees = Fraction(0)
        self.points: list[tuple[int, Fraction, Fraction]] = []

    def schedule(self, block: int, op: str, *args):
        self._schedule.append((block, len(self._schedule), op, args))

    def run(self):
        for block, _, op, args in sorted(self._schedule, key=lambda s: (s[0], s[1])):
            if op == "buy_sol":
                wallet, budget = args
                self.buy_sol(wallet, block, budget)
            elif op == "buy_cached_qty":
                # Identical-quantity series: size fixed by the curve state at
                # the first execution, reused verbatim afterwards.
                wallet, cache_key, sol_budget = args
                if cache_key not in self._qty_cache:
                    self._qty_cache[cache_key] = _quantize_qty(
                        tokens_for_deposit(self.state, as_fraction(sol_budget))
                    )
                self.buy_qty(wallet, block, self._qty_cache[cache_key])
            elif op == "sell_cached_qty":
                wallet, cache_key = args
                self.sell_qty(wallet, block, self._qty_cache[cache_key])
            elif op == "sell_all":
                (wallet,) = args
                self.sell_all(wallet, block)
            elif op == "sell_frac":
                wallet, frac = args
                self.sell_fraction(wallet, block, frac)
            else:
                raise AssertionError(f"unknown op {op!r}")

    def _ts(self, block: int) -> int:
        return self.spec.launch_ts + ((block - self.spec.launch_block) * BLOCK_MS) // 1000

    def _next_index(self, block: int) -> int:
        idx = self._index_in_block.get(block, 0)
        self._index_in_block[block] = idx + 1
        return idx

    def _emit(self, block: int, kind: TxKind, wallet: str, qty: Decimal, sol: Decimal):
        self.txs.append(
            TxRecord(
                coin=self.spec.coin,
                block=block,
                index_in_block=self._next_index(block),
                kind=kind,
                trader=wallet,
                token_qty=qty,
                sol_amount=sol,
                timestamp=self._ts(block),
            )
        )

    def create(self, creator: str):
        self._emit(self.spec.launch_block, TxKind.CREATE, creator, Decimal(0), Decimal(0))
        self.points.append((self._ts(self.spec.launch_block), marginal_price(self.state), self.state.X))

    def buy_qty(self, wallet: str, block: int, qty: Decimal):
        if qty <= 0:
            return Decimal(0)
        try:
            new_state, cash = apply_buy(self.state, qty)
        except InfeasibleTrade as exc:
            raise InfeasibleSpec(f"{self.spec.coin}: planned buy infeasible ({exc})") from exc
        cost = new_state.X - self.state.X
        self.state = new_state
        self.total_cost += cost
        self.fees += cash - cost
        self.cash_in[wallet] = self.cash_in.get(wallet, Fraction(0)) + cash
        self.balances[wallet] = self.balances.get(wallet, Decimal(0)) + qty
        self._emit(block, TxKind.BUY, wallet, qty, _quantize_cash(cash))
        self.points.append((self._ts(block), marginal_price(self.state), self.state.X))
        return qty

    def buy_sol(self, wallet: str, block: int, sol_budget) -> Decimal:
        budget = as_fraction(sol_budget)
        if budget <= 0:
            return Decimal(0)
        qty = _quantize_qty(tokens_for_deposit(self.state, budget))
        return self.buy_qty(wallet, block, qty)

    def sell_qty(self, wallet: str, block: int, qty: Decimal):
        balance = self.balances.get(wallet, Decimal(0))
        qty = min(qty, balance)
        if qty <= 0:
            return Decimal(0)
        old_x = self.state.X
        self.state, cash = apply_sell(self.state, qty)
        proceeds = old_x - self.state.X
        self.total_proceeds += proceeds
        self.fees += proceeds - cash
        self.cash_out[wallet] = self.cash_out.get(wallet, Fraction(0)) + cash
        self.balances[wallet] = balance - qty
        self._emit(block, TxKind.SELL, wallet, qty, _quantize_cash(cash))
        self.points.append((self._ts(block), marginal_price(self.state), self.state.X))
        return qty

    def sell_fraction(self, wallet: str, block: int, frac: Fraction):
        balance = self.balances.get(wallet, Decimal(0))
        qty = _quantize_qty(as_fraction(balance) * frac)
        return self.sell_qty(wallet, block, qty)

    def sell_all(self, wallet: str, block: int):
        return self.sell_qty(wallet, block, self.balances.get(wallet, Decimal(0)))

    def comment(self, wallet: str, ts: int, text: str):
        self.comments.append(CommentRecord(coin=self.spec.coin, wallet=wallet, timestamp=ts, text=text))

    def truth_metrics(self, metrics_cfg: MetricsConfig) -> CoinMetrics:
        proxy_index = 2 if metrics_cfg.liquidity_proxy == "reserve" else 1
        peak_i = max(range(len(self.points)), key=lambda i: (self.points[i][1], -i))
        peak_ts, peak_price = self.points[peak_i][0], self.points[peak_i][1]
        level = self.points[peak_i][proxy_index] * metrics_cfg.dump_fraction
        dump_s = None
        for point in self.points[peak_i + 1 :]:
            if point[proxy_index] <= level:
                dump_s = point[0] - peak_ts
                break
        launch_price = self.points[0][1]
        ln_dump = float(math.log(dump_s)) if dump_s is not None and dump_s > 0 else None
        if dump_s is not None and dump_s <= 0:
            dump_s = 0
        return CoinMetrics(
            ln_max_return=float(math.log(peak_price / launch_price)),
            ln_dump_duration=ln_dump,
            peak_ts=peak_ts,
            dump_duration_s=dump_s,
        )

    def finalize(self) -> tuple[CoinLedger, dict[str, WalletFlow], Conservation]:
        ledger = build_ledger(self.spec.coin, self.txs)
        if self.comments:
            ledger = ledger.with_comments(self.comments)
        final_price = marginal_price(self.state)
        flows = {}
        for wallet in sorted(set(self.cash_in) | set(self.cash_out)):
            tokens = self.balances.get(wallet, Decimal(0))
            flows[wallet] = WalletFlow(
                cash_in=self.cash_in.get(wallet, Fraction(0)),
                cash_out=self.cash_out.get(wallet, Fraction(0)),
                tokens=tokens,
                terminal_value=as_fraction(tokens) * final_price,
            )
        fee = self.spec.curve.fee_rate
        conservation = Conservation(
            cash_in=self.total_cost * (1 + fee),
            cash_out=self.total_proceeds * (1 - fee),
            x_growth=self.state.X - self.spec.curve.x_virtual,
            fees=self.fees,
        )
        return ledger, flows, conservation


def _quantize_qty(value: Fraction) -> Decimal:
    whole, rem = divmod(value.numerator * 10**9, value.denominator)
    return Decimal(whole) * QUANTUM


def _quantize_cash(value: Fraction) -> Decimal:
    approx = Decimal(value.numerator) / Decimal(value.denominator)
    return approx.quantize(QUANTUM, rounding=ROUND_HALF_EVEN)


def generate(
    spec: ScenarioSpec,
    detection_cfg: DetectionConfig = DetectionConfig(),
    metrics_cfg: MetricsConfig = MetricsConfig(),
) -> LabeledScenario:
    """Build one labeled scenario; (spec, seed) fully determine the output."""
    rng = child_rng(spec.seed, spec.coin, spec.kind.value)
    b = _CoinBuilder(spec)
    kind = spec.kind
    coin = spec.coin
    B0 = spec.launch_block
    roles: dict[str, Role] = {}

    creator = f"{coin}/creator"
    roles[creator] = Role.CREATOR
    b.create(creator)

    has_bundle = kind in (ScenarioKind.BUNDLE_BOT, ScenarioKind.MIXED)
    has_gradual = kind == ScenarioKind.GRADUAL_BUNDLE
    has_sniper = kind in (ScenarioKind.SNIPER_BOT, ScenarioKind.MIXED)
    has_bump = kind in (ScenarioKind.BUMP_BOT, ScenarioKind.MIXED)
    has_comment_bots = kind in (ScenarioKind.COMMENT_BOT, ScenarioKind.MIXED)
    is_naive = kind == ScenarioKind.NAIVE_BUNDLE
    has_kol = kind in (ScenarioKind.BENIGN, ScenarioKind.BUMP_BOT, ScenarioKind.COMMENT_BOT)
    rug = has_bundle or has_gradual or is_naive

    controlled = [f"{coin}/ctl{i}" for i in range(spec.n_controlled_wallets)]
    if has_bundle:
        for w in controlled:
            roles[w] = Role.CONTROLLED
            b.schedule(B0, "buy_sol", w, spec.controlled_sol * rng.uniform(0.7, 1.3))

    if is_naive:
        b.schedule(B0, "buy_sol", creator, spec.creator_self_buy_sol)

    lift_start = B0 + spec.entry_guard_blocks + 1
    if has_gradual:
        # Mechanically regular accumulation: one identical-quantity buy per block.
        per_step_sol = as_fraction(spec.controlled_sol) * spec.n_controlled_wallets / spec.gradual_span_blocks
        for i in range(spec.gradual_span_blocks):
            w = controlled[i % max(len(controlled), 1)]
            roles[w] = Role.CONTROLLED
            b.schedule(lift_start + i, "buy_cached_qty", w, "gradual", per_step_sol)
        lift_start += spec.gradual_span_blocks

    if has_sniper:
        sniper = f"{coin}/sniper"
        roles[sniper] = Role.SNIPER
        b.schedule(B0 + spec.sniper_delay_blocks, "buy_sol", sniper, spec.sniper_sol)

    lift_end = lift_start + spec.lift_span_blocks

    # Organic entries: KOL leads, copiers trail, retail arrives through the lift.
    if has_kol:
        kol = f"{coin}/kol"
        roles[kol] = Role.KOL
        b.schedule(lift_start, "buy_sol", kol, spec.kol_sol)
    copiers = [f"{coin}/cop{i}" for i in range(spec.n_copiers)]
    for i, w in enumerate(copiers):
        roles[w] = Role.COPIER
        b.schedule(lift_start + 1 + (i % 2), "buy_sol", w, spec.copier_sol * rng.uniform(0.8, 1.2))

    retail_plan = []
    for i in range(spec.n_retail):
        w = f"{coin}/rt{i}"
        roles[w] = Role.RETAIL
        arrival = rng.randint(lift_start, lift_end - 1)
        budget = math.exp(rng.gauss(spec.retail_sol_mu, spec.retail_sol_sigma))
        retail_plan.append((arrival, w, budget))
        b.schedule(arrival, "buy_sol", w, budget)
    for ext in spec.external_traders:
        roles[ext.wallet] = ext.role
        b.schedule(lift_start + ext.entry_offset, "buy_sol", ext.wallet, ext.sol_budget)

    if has_bump:
        bump = f"{coin}/bump"
        roles[bump] = Role.BUMP_BOT
        blocks = max(lift_end - lift_start, 1)
        for i in range(spec.flip_count):
            block = lift_start + (i % blocks)
            b.schedule(block, "buy_cached_qty", bump, "bump", spec.bump_sol)
            b.schedule(block, "sell_cached_qty", bump, "bump")

    # Exits. The peak forms at lift_end right before the first leader sell.
    if has_kol:
        b.schedule(lift_end, "sell_all", f"{coin}/kol")
    for ext in spec.external_traders:
        if ext.exit == "peak":
            b.schedule(lift_end, "sell_all", ext.wallet)
    if is_naive:
        b.schedule(lift_end + 1, "sell_all", creator)
    if has_sniper:
        b.schedule(lift_end + 1, "sell_all", f"{coin}/sniper")
    if has_bundle or has_gradual:
        for i, w in enumerate(controlled):
            b.schedule(lift_end + 1 + (i % spec.exit_span_blocks), "sell_all", w)

    dump_tail = lift_end + spec.exit_span_blocks + 1
    for i, w in enumerate(copiers):
        b.schedule(dump_tail + (i % 2), "sell_all", w)
    for arrival, w, _ in retail_plan:
        if rng.random() < spec.retail_sell_prob:
            if arrival < (lift_start + lift_end) // 2:
                b.schedule(lift_end, "sell_frac", w, Fraction(rng.randint(40, 95), 100))
            else:
                b.schedule(dump_tail + rng.randint(0, 2), "sell_frac", w, Fraction(rng.randint(40, 95), 100))
    for ext in spec.external_traders:
        if ext.exit == "dump":
            b.schedule(dump_tail + rng.randint(0, 2), "sell_all", ext.wallet)

    b.run()

    if spec.full_exit:
        tail = dump_tail + 5
        for w in sorted(b.balances):
            if b.balances[w] > 0:
                b.sell_all(w, tail)
                tail += 1

    # Comments: planted slogans during the lift, organic chatter from retail.
    planted = 0
    comment_truth: list[tuple[int, str, str, bool]] = []
    if has_comment_bots:
        for i in range(spec.comment_bot_count):
            w = f"{coin}/cb{i}"
            roles[w] = Role.CONTROLLED
            ts = b._ts(rng.randint(lift_start, lift_end))
            text = SLOGAN_POOL[rng.randrange(len(SLOGAN_POOL))]
            b.comment(w, ts, text)
            comment_truth.append((ts, w, text, True))
            planted += 1
    for i in range(spec.n_organic_comments):
        w = f"{coin}/rt{i % max(spec.n_retail, 1)}" if spec.n_retail else creator
        ts = b._ts(rng.randint(lift_start, dump_tail))
        text = ORGANIC_POOL[rng.randrange(len(ORGANIC_POOL))]
        b.comment(w, ts, text)
        comment_truth.append((ts, w, text, False))

    ledger, flows, conservation = b.finalize()

    bump_alpha = 2 * spec.flip_count - 1 if has_bump and spec.flip_count > 0 else 0
    truth = BotFlags(
        bundle=has_bundle,
        sniper=has_sniper,
        bump=bump_alpha >= detection_cfg.bump_score_threshold,
        comment=planted >= detection_cfg.comment_bot_min_count,
    )
    # Same ordering the ledger applies when attaching comments.
    ordered_truth = tuple((text, is_bot) for _, _, text, is_bot in sorted(comment_truth))
    return LabeledScenario(
        spec=spec,
        ledger=ledger,
        truth=truth,
        truth_metrics=b.truth_metrics(metrics_cfg),
        role_map=roles,
        wallet_flows=flows,
        conservation=conservation,
        planted_bot_comments=planted,
        comment_truth=ordered_truth,
    )


@dataclass(frozen=True)
class PopulationSpec:
    """Recurring wallet population for multi-coin datasets."""

    n_smart: int = 10
    n_dumb: int = 40
    smart_participation: float = 0.55
    dumb_participation: float = 0.35
    smart_sol: tuple[float, float] = (0.4, 1.6)
    dumb_sol: tuple[float, float] = (0.2, 1.2)
    dumb_sell_prob: float = 0.8


@dataclass
class DatasetBundle:
    scenarios: list[LabeledScenario]
    allocation: list[ScenarioKind]
    labels: dict[tuple[str, str], bool]
    population: PopulationSpec


def _allocate_kinds(n_coins: int, mix: dict, rng: random.Random) -> list[ScenarioKind]:
    """Largest-remainder allocation of coin counts to kinds, then a seeded shuffle."""
    weights = {ScenarioKind(k): float(v) for k, v in mix.items()}
    if any(v < 0 for v in weights.values()) or sum(weights.values()) <= 0:
        raise InfeasibleSpec("mix weights must be non-negative with a positive sum")
    total = sum(weights.values())
    kinds = sorted(weights, key=lambda k: k.value)
    exact = {k: n_coins * weights[k] / total for k in kinds}
    counts = {k: int(exact[k]) for k in kinds}
    leftover = n_coins - sum(counts.values())
    for k in sorted(kinds, key=lambda k: (exact[k] - counts[k]), reverse=True)[:leftover]:
        counts[k] += 1
    allocation = [k for k in kinds for _ in range(counts[k])]
    rng.shuffle(allocation)
    return allocation


def generate_dataset(
    n_coins: int,
    mix: dict,
    seed: int,
    population: PopulationSpec = PopulationSpec(),
    base: ScenarioSpec | None = None,
    detection_cfg: DetectionConfig = DetectionConfig(),
    metrics_cfg: MetricsConfig = MetricsConfig(),
    coin_spacing_s: int = 3600,
) -> DatasetBundle:
    """Reproducible multi-coin corpus with a recurring wallet population.

    Smart wallets enter early in the lift and exit at the peak; dumb ones
    chase the top and sell into the dump, so realized-profit labels
    correlate with history and timing features by construction.
    """
    alloc_rng = child_rng(seed, "allocation")
    allocation = _allocate_kinds(n_coins, mix, alloc_rng)
    base = base or ScenarioSpec(kind=ScenarioKind.BENIGN, seed=seed)
    smart = [f"smart{i:02d}" for i in range(population.n_smart)]
    dumb = [f"dumb{i:02d}" for i in range(population.n_dumb)]

    scenarios: list[LabeledScenario] = []
    labels: dict[tuple[str, str], bool] = {}
    blocks_per_coin = coin_spacing_s * 1000 // BLOCK_MS
    for i, kind in enumerate(allocation):
        rng = child_rng(seed, "population", i)
        externals: list[ExternalTrader] = []
        for w in smart:
            if rng.random() < population.smart_participation:
                externals.append(
                    ExternalTrader(
                        wallet=w,
                        role=Role.KOL,
                        entry_offset=rng.randint(0, 2),
                        sol_budget=f"{rng.uniform(*population.smart_sol):.4f}",
                        exit="peak",
                    )
                )
        for w in dumb:
            if rng.random() < population.dumb_participation:
                externals.append(
                    ExternalTrader(
                        wallet=w,
                        role=Role.RETAIL,
                        entry_offset=rng.randint(base.lift_span_blocks // 2, base.lift_span_blocks - 1),
                        sol_budget=f"{rng.uniform(*population.dumb_sol):.4f}",
                        exit="dump" if rng.random() < population.dumb_sell_prob else "hold",
                    )
                )
        spec = replace(
            base,
            kind=kind,
            seed=seed,
            coin=f"coin-{i:05d}",
            launch_block=base.launch_block + i * blocks_per_coin,
            launch_ts=base.launch_ts + i * coin_spacing_s,
            external_traders=tuple(externals),
        )
        scenario = generate(spec, detection_cfg, metrics_cfg)
        scenarios.append(scenario)
        for wallet, flow in scenario.wallet_flows.items():
            labels[(wallet, spec.coin)] = flow.profit > 0
    return DatasetBundle(scenarios=scenarios, allocation=allocation, labels=labels, population=population)
