"""Agent runtime: candlestick construction, deterministic rule agents, the
chat-completion client contract, and comment classification.

Rule agents mechanize the worked examples' required/auxiliary checks and
are fully deterministic; LLM agents speak to any chat endpoint that
accepts an OpenAI-style JSON body and return token logprobs for the
TRUE/FALSE result token. Both emit the same AgentVerdict shape so the
ensemble does not care which produced a verdict.
"""

from __future__ import annotations

import json
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Protocol, Sequence

import requests

from .chain import CoinLedger, TxKind
from .curve import CurveParams, CurveState, apply_buy, apply_sell, as_fraction, marginal_price
from .errors import EmptyLedger, MalformedReply, TransportError
from .features import ConditionThresholds, TraderSample, evaluate_conditions
from . import prompts


class AgentKind(str, Enum):
    WALLET = "wallet"
    COIN = "coin"
    TIMING = "timing"


@dataclass(frozen=True)
class AgentVerdict:
    agent: AgentKind
    decision: bool
    confidence: float
    reasoning: str
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError("confidence must lie in [0, 1]")

    def to_dict(self) -> dict:
        return {
            "agent": self.agent.value,
            "decision": self.decision,
            "confidence": self.confidence,
            "reasoning": self.reasoning,
            "flags": list(self.flags),
        }


@dataclass(frozen=True)
class PromptBundle:
    agent: AgentKind
    text: str
    image_png: bytes | None = None

    def __post_init__(self):
        leftovers = prompts.unfilled_slots(self.text, self.agent.value)
        if leftovers:
            raise ValueError(f"unfilled prompt slots: {leftovers}")


# --- candlesticks ------------------------------------------------------------


@dataclass(frozen=True)
class Bar:
    start_ts: int
    open: float
    high: float
    low: float
    close: float
    volume: float


@dataclass(frozen=True)
class CandleConfig:
    bucketing: str = "block"  # "block" or "time:<seconds>"
    equal_body_rel_tol: float = 0.15
    mechanical_cut: float = 0.58  # frozen from scripts/calibrate_mechanicality.py
    price_mode: str = "replay"


@dataclass(frozen=True)
class CandlestickSeries:
    bars: tuple[Bar, ...]
    bucketing: str
    mechanicality_score: float

    def to_text_table(self, max_rows: int = 40) -> str:
        """Compact text rendering embedded into prompts when no image is sent."""
        rows = ["start_ts open high low close volume"]
        bars = self.bars[-max_rows:]
        for b in bars:
            rows.append(f"{b.start_ts} {b.open:.3e} {b.high:.3e} {b.low:.3e} {b.close:.3e} {b.volume:.4f}")
        return "\n".join(rows)


def _bucket_key(tx, bucketing: str):
    if bucketing == "block":
        return tx.block
    if bucketing.startswith("time:"):
        return tx.timestamp // int(bucketing.split(":", 1)[1])
    raise ValueError(f"unknown bucketing {bucketing!r}")


def build_candles(ledger: CoinLedger, curve: CurveParams, cfg: CandleConfig = CandleConfig()) -> CandlestickSeries:
    """OHLC bars over replayed (or trade-implied) prices, plus a regularity score."""
    trades = list(ledger.trades())
    if not trades:
        raise EmptyLedger(f"coin {ledger.coin!r} has no trades to chart")

    prices: list[float] = []
    if cfg.price_mode == "replay":
        state = CurveState.fresh(curve)
        prev = float(marginal_price(state))
        for tx in trades:
            if tx.kind == TxKind.BUY:
                state, _ = apply_buy(state, tx.token_qty)
            else:
                state, _ = apply_sell(state, tx.token_qty)
            prices.append(float(marginal_price(state)))
        launch_price = prev
    else:
        prices = [float(as_fraction(tx.sol_amount) / as_fraction(tx.token_qty)) for tx in trades]
        launch_price = prices[0]

    bars: list[Bar] = []
    prev_close = launch_price
    i = 0
    while i < len(trades):
        key = _bucket_key(trades[i], cfg.bucketing)
        j = i
        bucket_prices = []
        volume = 0.0
        while j < len(trades) and _bucket_key(trades[j], cfg.bucketing) == key:
            bucket_prices.append(prices[j])
            volume += float(trades[j].sol_amount)
            j += 1
        bars.append(
            Bar(
                start_ts=trades[i].timestamp,
                open=prev_close,
                high=max([prev_close] + bucket_prices),
                low=min([prev_close] + bucket_prices),
                close=bucket_prices[-1],
                volume=volume,
            )
        )
        prev_close = bucket_prices[-1]
        i = j
    return CandlestickSeries(
        bars=tuple(bars),
        bucketing=cfg.bucketing,
        mechanicality_score=mechanicality_score(bars, cfg),
    )


def mechanicality_score(bars: Sequence[Bar], cfg: CandleConfig = CandleConfig()) -> float:
    """Regularity of an uptrend in [0, 1].

    Mean of three components: the fraction of consecutive up-bar pairs with
    near-equal bodies, the inverted coefficient of variation of up-bar
    bodies, and the longest strictly-rising close run as a share of all
    bars. Bodies are measured in log price: a scripted accumulation of
    identical token quantities moves price by near-constant ratios, so the
    log body of each bar is what stays flat. A single bar scores 0 by
    convention.
    """
    if len(bars) < 2:
        return 0.0
    bodies = [math.log(b.close) - math.log(b.open) for b in bars]

    def equal_up(i: int, j: int) -> bool:
        if bodies[i] <= 0 or bodies[j] <= 0:
            return False
        hi = max(bodies[i], bodies[j])
        return abs(bodies[i] - bodies[j]) <= cfg.equal_body_rel_tol * hi

    # Fraction of consecutive up-bar pairs with near-equal bodies.
    pair_total = pair_equal = 0
    for i in range(len(bars) - 1):
        if bodies[i] > 0 and bodies[i + 1] > 0:
            pair_total += 1
            pair_equal += equal_up(i, i + 1)
    equal_component = pair_equal / pair_total if pair_total else 0.0

    # Longest ascending chain whose every step is an equal-bodied up pair:
    # organic lifts rise too, so a plain monotone run does not separate; a
    # mechanically regular one does. Chains under 4 bars are common by
    # chance in organic trading and score nothing.
    best_start = best_len = 0
    start = 0
    for i in range(1, len(bars) + 1):
        if i == len(bars) or not equal_up(i - 1, i):
            if i - start > best_len:
                best_start, best_len = start, i - start
            start = i
    run_component = best_len / len(bars) if best_len >= 4 else 0.0

    # Size regularity inside that chain.
    if best_len >= 4:
        chain = bodies[best_start : best_start + best_len]
        mean = sum(chain) / len(chain)
        var = sum((b - mean) ** 2 for b in chain) / len(chain)
        size_component = 1.0 / (1.0 + math.sqrt(var) / mean)
    else:
        size_component = 0.0

    return (equal_component + size_component + run_component) / 3.0


# --- rule agents ---------------------------------------------------------------

WALLET_REQUIRED = (
    "t_stat_above_cut",
    "return_all_positive",
    "return_std_below_1",
    "n_trades_above_p25",
    "t_since_last_below_p75",
    "t_since_first_above_p25",
)
TIMING_REQUIRED = ("px_below_p75", "amount_below_p75", "qty_below_p75")


def _verdict(agent: AgentKind, required: dict[str, bool], auxiliary: dict[str, bool], flags=()) -> AgentVerdict:
    req_frac = sum(required.values()) / len(required)
    aux_frac = sum(auxiliary.values()) / len(auxiliary) if auxiliary else 1.0
    decision = all(required.values())
    confidence = 0.5 + 0.5 * aux_frac if decision else 0.5 * req_frac
    fmt = lambda checks: ", ".join(f"{k}={'pass' if v else 'fail'}" for k, v in checks.items())
    reasoning = f"required: {fmt(required)}"
    if auxiliary:
        reasoning += f"; auxiliary: {fmt(auxiliary)}"
    return AgentVerdict(agent=agent, decision=decision, confidence=confidence, reasoning=reasoning, flags=tuple(flags))


def run_rule_agent(
    agent: AgentKind,
    sample: TraderSample,
    thresholds: ConditionThresholds,
    candles: CandlestickSeries | None = None,
    mechanical_cut: float = CandleConfig().mechanical_cut,
) -> AgentVerdict:
    """Deterministic counterpart of one LLM agent.

    decision = all required checks pass; confidence rewards auxiliary
    agreement above 0.5 and scales with the required pass fraction below.
    """
    checks, _ = evaluate_conditions(sample, thresholds)
    f = sample.features
    if agent == AgentKind.WALLET:
        return _verdict(agent, {k: checks[k] for k in WALLET_REQUIRED}, {})
    if agent == AgentKind.TIMING:
        return _verdict(agent, {k: checks[k] for k in TIMING_REQUIRED}, {})
    if agent == AgentKind.COIN:
        flags = []
        if candles is None:
            mechanical_ok = True
            flags.append("no_candles")
        else:
            mechanical_ok = candles.mechanicality_score < mechanical_cut
        required = {"bundle_absent": checks["bundle_absent"], "no_mechanical_uptrend": mechanical_ok}
        auxiliary = {
            "sniper_absent": f.bot_sniper is False,
            "bump_present": f.bot_bump is True,
            "comments_organic": f.bot_comment is False,
        }
        return _verdict(agent, required, auxiliary, flags)
    raise ValueError(f"unknown agent {agent!r}")


def run_all_rule_agents(
    sample: TraderSample,
    thresholds: ConditionThresholds,
    candles: CandlestickSeries | None = None,
    mechanical_cut: float = CandleConfig().mechanical_cut,
) -> dict[AgentKind, AgentVerdict]:
    return {
        kind: run_rule_agent(kind, sample, thresholds, candles, mechanical_cut)
        for kind in AgentKind
    }


# --- comment classification -----------------------------------------------------

HYPE_TERMS = (
    "moon", "lfg", "pump", "send", "100x", "gem", "takeoff", "sacks", "lambo", "rocket", "🚀",
)
_CAPS_RATIO_CUT = 0.6
_SLOGAN_MAX_LEN = 40
_WALLET_REF = re.compile(r"#\d{6,}")


def classify_comment_rule(text: str) -> bool:
    """Bot iff: no wallet reference, short, and sloganeering (hype term or shouting)."""
    if _WALLET_REF.search(text):
        return False
    if len(text) >= _SLOGAN_MAX_LEN:
        return False
    lowered = text.lower()
    hype = any(term in lowered for term in HYPE_TERMS)
    letters = [c for c in text if c.isalpha()]
    caps_ratio = sum(c.isupper() for c in letters) / len(letters) if len(letters) >= 3 else 0.0
    return hype or caps_ratio >= _CAPS_RATIO_CUT


def assemble_comment_prompt(text: str) -> str:
    return prompts.fill_slots(prompts.COMMENT_PROMPT_TEMPLATE, "comment", {"comment": text})


# --- chat client contract --------------------------------------------------------


@dataclass(frozen=True)
class TokenLogprob:
    token: str
    logprob: float
    top: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class ChatReply:
    text: str
    tokens: tuple[TokenLogprob, ...] | None = None


class ChatClient(Protocol):
    def complete(self, messages: list[dict]) -> ChatReply: ...


class HttpChatClient:
    """OpenAI-style chat-completion client.

    POSTs {model, messages, temperature=0, logprobs, top_logprobs} and
    reads the first choice's content and token logprobs. Credentials come
    from an environment variable named in the config, never from files.
    """

    def __init__(
        self,
        endpoint: str,
        model: str,
        api_key: str | None = None,
        timeout_s: float = 60.0,
        max_retries: int = 3,
        backoff_s: float = 0.5,
    ):
        self.endpoint = endpoint
        self.model = model
        self.api_key = api_key
        self.timeout_s = timeout_s
        self.max_retries = max_retries
        self.backoff_s = backoff_s

    def complete(self, messages: list[dict]) -> ChatReply:
        body = {
            "model": self.model,
            "messages": messages,
            "temperature": 0,
            "logprobs": True,
            "top_logprobs": 5,
        }
        headers = {"Content-Type": "application/json"}
        if self.api_key:
            headers["Authorization"] = f"Bearer {self.api_key}"
        last_error: Exception | None = None
        for attempt in range(self.max_retries):
            try:
                resp = requests.post(self.endpoint, json=body, headers=headers, timeout=self.timeout_s)
                resp.raise_for_status()
                payload = resp.json()
                break
            except (requests.RequestException, ValueError) as exc:
                last_error = exc
                time.sleep(self.backoff_s * 2**attempt)
        else:
            raise TransportError(f"chat endpoint unreachable after {self.max_retries} attempts: {last_error}")
        try:
            choice = payload["choices"][0]
            text = choice["message"]["content"]
        except (KeyError, IndexError, TypeError) as exc:
            raise MalformedReply(f"unexpected response shape: {exc}") from None
        tokens = None
        logprobs = (choice.get("logprobs") or {}).get("content")
        if logprobs:
            tokens = tuple(
                TokenLogprob(
                    token=t.get("token", ""),
                    logprob=float(t.get("logprob", 0.0)),
                    top={x["token"]: float(x["logprob"]) for x in t.get("top_logprobs", [])},
                )
                for t in logprobs
            )
        return ChatReply(text=text, tokens=tokens)


_JSON_OBJECT = re.compile(r"\{.*\}", re.DOTALL)


def _parse_reply(text: str) -> dict:
    match = _JSON_OBJECT.search(text)
    if not match:
        raise MalformedReply("no JSON object in reply")
    try:
        obj = json.loads(match.group(0))
    except json.JSONDecodeError as exc:
        raise MalformedReply(f"reply is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or not isinstance(obj.get("result"), bool):
        raise MalformedReply('reply lacks a boolean "result" field')
    return obj


def _true_probability(tokens: Sequence[TokenLogprob] | None, decision: bool) -> tuple[float, tuple[str, ...]]:
    """Probability of the TRUE token from the result token's logprobs.

    When both TRUE and FALSE candidates appear in the top-logprobs the pair
    is renormalized; when logprobs are missing entirely the confidence
    falls back to 0.9/0.1 by decision and the verdict is flagged.
    """
    if not tokens:
        return (0.9 if decision else 0.1), ("logprobs_unavailable",)
    wanted = "true" if decision else "false"
    position = None
    for t in reversed(tokens):
        if t.token.strip().lower() == wanted:
            position = t
            break
    if position is None:
        return (0.9 if decision else 0.1), ("result_token_not_found",)
    p_result = math.exp(position.logprob)
    candidates = {k.strip().lower(): math.exp(v) for k, v in position.top.items()}
    candidates.setdefault(wanted, p_result)
    if "true" in candidates and "false" in candidates:
        p_true = candidates["true"] / (candidates["true"] + candidates["false"])
        return p_true, ("renormalized",)
    return (p_result if decision else 1.0 - p_result), ()


def run_llm_agent(bundle: PromptBundle, client: ChatClient) -> AgentVerdict:
    """Send one prompt, parse the JSON verdict, extract TRUE-token confidence.

    A malformed reply earns exactly one reprompt with a format reminder.
    """
    messages: list[dict] = [{"role": "user", "content": _content_parts(bundle)}]
    reply = client.complete(messages)
    try:
        parsed = _parse_reply(reply.text)
    except MalformedReply:
        messages.append({"role": "assistant", "content": reply.text})
        messages.append({"role": "user", "content": prompts.FORMAT_REMINDER})
        reply = client.complete(messages)
        parsed = _parse_reply(reply.text)
    decision = parsed["result"]
    confidence, flags = _true_probability(reply.tokens, decision)
    reasoning = json.dumps(parsed.get("reasoning", ""), sort_keys=True)
    return AgentVerdict(
        agent=bundle.agent,
        decision=decision,
        confidence=confidence,
        reasoning=reasoning,
        flags=flags,
    )


def _content_parts(bundle: PromptBundle):
    if bundle.image_png is None:
        return bundle.text
    import base64

    b64 = base64.b64encode(bundle.image_png).decode()
    return [
        {"type": "text", "text": bundle.text},
        {"type": "image_url", "image_url": {"url": f"data:image/png;base64,{b64}"}},
    ]


def classify_comment_llm(text: str, client: ChatClient) -> bool:
    messages = [{"role": "user", "content": assemble_comment_prompt(text)}]
    reply = client.complete(messages)
    try:
        return _parse_reply(reply.text)["result"]
    except MalformedReply:
        messages.append({"role": "assistant", "content": reply.text})
        messages.append({"role": "user", "content": prompts.FORMAT_REMINDER})
        return _parse_reply(client.complete(messages).text)["result"]


# --- prompt assembly for the three agents ----------------------------------------


def _fmt(value, nan="N/A") -> str:
    if value is None:
        return nan
    if isinstance(value, bool):
        return "True" if value else "False"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def assemble_agent_prompt(
    agent: AgentKind,
    sample: TraderSample,
    candles: CandlestickSeries | None = None,
    comments: Sequence[str] = (),
    attach_image: bool = False,
) -> PromptBundle:
    f = sample.features
    if agent == AgentKind.WALLET:
        text = prompts.fill_slots(
            prompts.WALLET_PROMPT_TEMPLATE,
            "wallet",
            {
                "t_stat": _fmt(f.t_stat),
                "return_all": _fmt(f.return_all),
                "return_std": _fmt(f.return_std),
                "n_trades": _fmt(f.n_trades),
                "return_1st": _fmt(f.return_1st),
                "return_1_5": _fmt(f.return_1_5),
                "return_6_10": _fmt(f.return_6_10),
                "return_11_15": _fmt(f.return_11_15),
                "t_since_last": _fmt(f.t_since_last),
                "t_since_first": _fmt(f.t_since_first),
            },
        )
        return PromptBundle(agent=agent, text=text)
    if agent == AgentKind.TIMING:
        text = prompts.fill_slots(
            prompts.TIMING_PROMPT_TEMPLATE,
            "timing",
            {"px": _fmt(f.px), "amount": _fmt(f.amount), "qty": _fmt(f.qty)},
        )
        return PromptBundle(agent=agent, text=text)
    if agent == AgentKind.COIN:
        chart = "no chart available"
        image = None
        if candles is not None:
            chart = "[candlestick image attached]" if attach_image else "\n" + candles.to_text_table()
        text = prompts.fill_slots(
            prompts.COIN_PROMPT_TEMPLATE,
            "coin",
            {
                "bundle": _fmt(f.bot_bundle, nan="Unknown"),
                "sniper": _fmt(f.bot_sniper, nan="Unknown"),
                "bump": _fmt(f.bot_bump, nan="Unknown"),
                "comment": _fmt(f.bot_comment, nan="Unknown"),
                "comments": "\n" + "\n".join(comments) if comments else "none",
                "candlestick": chart,
            },
        )
        return PromptBundle(agent=agent, text=text)
    raise ValueError(f"unknown agent {agent!r}")


def run_llm_agents_batch(
    bundles: Sequence[PromptBundle],
    client: ChatClient,
    max_in_flight: int = 4,
) -> list[AgentVerdict]:
    """Bounded-concurrency fan-out; results keep input order."""
    with ThreadPoolExecutor(max_workers=max_in_flight) as pool:
        return list(pool.map(lambda b: run_llm_agent(b, client), bundles))
