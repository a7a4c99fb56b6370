"""Prompt templates for the comment classifier and the three analyst agents.

Each template is role text plus worked few-shot exemplars whose reasoning
is a JSON object ending in a boolean "result". Slots use {name} markers
and are filled by exact string replacement, never str.format, so literal
braces inside exemplar JSON survive assembly. Assembled prompts must
byte-contain these blocks; the golden files under tests/golden mirror
them and guard against drift.
"""

from __future__ import annotations

COMMENT_CLASSIFIER_INSTRUCTIONS = (
    "You are a meme coin comment analyzer. Your task is to classify a given comment as "
    "bot-generated or human-generated. Bot-generated comments are often short, context-less, "
    "and mass-producible slogans that express hype or hostility. In contrast, human-generated "
    "comments tend to be more personalized and nuanced, containing context or opinion with "
    "reasoning. Comments that reference other users (e.g., #89009679) are typically "
    "human-generated, although not all human comments contain such references. Respond with id "
    "and true (if the comment is bot-generated) or false (if it is human-generated). Your "
    "response should follow this format:`{\"result\": <true/false>}'"
)

COMMENT_FEW_SHOTS = (
    ("TO THE MOON!!! READYY", '`{"result": true}\''),
    ("we'll get there! LFG", '`{"result": true}\''),
    ("#88857219 show screenshot as proof pls?", '`{"result": false}\''),
    ("Fake web bros, not same ca", '`{"result": false}\''),
)

COMMENT_PROMPT_TEMPLATE = (
    COMMENT_CLASSIFIER_INSTRUCTIONS
    + "\n\n"
    + "\n\n".join(f"{text}\n{reply}" for text, reply in COMMENT_FEW_SHOTS)
    + "\n\n{comment}"
)

WALLET_AGENT_ROLE = (
    "You are a professional on-chain analyst specializing in meme coin wallet trading "
    "behavior. You will be given features of a wallet's historical meme coin trading "
    "activity. Your task is to assess whether the wallet's next trade will be profitable "
    "so that a user can copy trade from it."
)

COIN_AGENT_ROLE = (
    "You are a professional on-chain analyst specializing in meme coin investment "
    "potential. You will be given various transaction features, candlestick chart, and "
    "comment history related to a meme coin. Your task is to assess whether the meme coin "
    "is a good investment opportunity."
)

# The timing agent shares the wallet agent's role paragraph.
TIMING_AGENT_ROLE = WALLET_AGENT_ROLE

WALLET_COT = """T-statistic of Returns: 24.39

Average Return: 1.25

Return Standard Deviation: 0.84

Number of Trades: 4114

Last Return: 0.12

Five-to-One Return: 0.14

Ten-to-Six Return: 0.79

Fifteen-to-Eleven Return: 0.48

Time Since Last Trade: 371

Time Since First Trade: 19118974

{"reasoning":{"Statistical Significance":"Gate check: require t-statistic > 1.645 (one-tailed 5%). Observed t-statistic = 24.39. Since 24.39 > 1.645, this check passes.","Average Return":"Required check: average return must be positive. Observed = 1.25 > 0, so this check passes.","Return Stability":"Required check: return standard deviation must be below 1. Observed = 0.84 < 1, so this check passes.","Experience":"Required check: number of trades must clear the lower quartile of the training set. Observed = 4114, a deeply experienced wallet, so this check passes.","Recency":"Required check: time since last trade must sit below the upper quartile of the training set. Observed = 371 seconds, an active wallet, so this check passes.","Track Record Age":"Required check: time since first trade must clear the lower quartile of the training set. Observed = 19118974 seconds, a long-lived wallet, so this check passes.","Horizon Returns":"Auxiliary check: last, short-, medium-, and long-horizon returns (0.12, 0.14, 0.79, 0.48) are all positive and consistent with the average.","Summary":"All required checks pass and horizon returns are supportive. Classify the wallet's next trade as profitable."},"result":true}

T-statistic of Returns: 0.45

Average Return: 0.00

Return Standard Deviation: 0.31

Number of Trades: 461

Last Return: 0.02

Five-to-One Return: -0.02

Ten-to-Six Return: 0.11

Fifteen-to-Eleven Return: -0.12

Time Since Last Trade: 10

Time Since First Trade: 15449

{"reasoning":{"Statistical Significance":"Gate check: require t-statistic > 1.645 (one-tailed 5%). Observed t-statistic = 0.45. Since 0.45 <= 1.645, this check fails.","Average Return":"Required check: average return must be positive. Observed = 0.00, not above zero, so this check fails.","Return Stability":"Required check: return standard deviation must be below 1. Observed = 0.31 < 1, so this check passes.","Experience":"Required check: number of trades must clear the lower quartile of the training set. Observed = 461; unexceptional and not decisive on its own.","Recency":"Required check: time since last trade must sit below the upper quartile of the training set. Observed = 10 seconds; hyperactive cadence, consistent with scripted trading.","Track Record Age":"Required check: time since first trade must clear the lower quartile of the training set. Observed = 15449 seconds, a very young wallet, so this check fails.","Horizon Returns":"Auxiliary check: last, short-, medium-, and long-horizon returns (0.02, -0.02, 0.11, -0.12) are mixed and carry no statistical weight.","Summary":"The significance gate and the profitability checks fail. Classify the wallet's next trade as not profitable."},"result":false}"""

COIN_COT = """Transaction Features:

Bundle Bot: False

Sniper Bot: False

Bump Bot: True

Comment Bot: True

Comment History:

2025-01-17 15:06:36 -- 3yxCdw: Makers missing? Upgrade your strategy now!
...

Candlestick Chart: gradual, sustained price discovery across blocks

{"reasoning":{"Bundle Bot":"Required check: Bundle Bot must be False. Observed = False. Since False == False, this check passes.","Candlestick Pattern":"Required check: chart should show gradual, sustained price discovery (no single-candle spike-and-dump). Observed pattern indicates a gradual increase, so this check passes.","Sniper Bot":"Auxiliary check: Sniper Bot ideally False. Observed = False. This reduces early predatory trading risk.","Bump Bot":"Auxiliary check: Bump Bot may be True as a weak visibility/support signal but is not required. Observed = True; treat as weakly supportive.","Comments":"Auxiliary check: discount repetitive spam; prefer evidence of non-boilerplate engagement. Observed Comment Bot = True; treat as caution, but not decisive if other required signals are clean.","Summary":"Required checks pass (no bundle and no pump-like candlestick signature). Auxiliary signals are not contradictory. Classify as a good investment opportunity."},"result":true}

Transaction Features:

Bundle Bot: True

Sniper Bot: True

Bump Bot: False

Comment Bot: False

Comment History:

Candlestick Chart: single-candle spike followed by immediate collapse

{"reasoning":{"Bundle Bot":"Required check: Bundle Bot must be False. Observed = True. Since True != False, this check fails.","Candlestick Pattern":"Required check: chart should show gradual, sustained price discovery. Observed pattern resembles a spike/pump-like move, so this check fails.","Sniper Bot":"Auxiliary check: Sniper Bot ideally False. Observed = True; negative signal indicating elevated predatory early trading risk.","Bump Bot":"Auxiliary check: Bump Bot may be supportive if True. Observed = False; not supportive.","Comments":"Auxiliary check: prefer sustained, organic engagement. Observed Comment Bot = False; absent bot flags alone is not supportive without additional evidence, treat as non-decisive.","Summary":"One or more required checks fail (bundle present and pump-like price action). Auxiliary signals do not offset these failures. Classify as a poor investment opportunity."},"result":false}"""

TIMING_COT = """Trader Purchase Price: 4.95e-06

Trader Purchase Amount: 99.65

Trader Purchase Quantity: 6026170.61

{"reasoning":{"Trader Purchase Price":"Require purchase price < {75th percentile of the training set}. Observed = 4.95e-06, an early-curve entry, so this check passes.","Trader Purchase Amount":"Require purchase amount < {75th percentile of the training set}. Observed = 99.65, a moderately sized position, so this check passes.","Trader Purchase Quantity":"Require purchase quantity < {75th percentile of the training set}. Observed = 6026170.61, within range, so this check passes.","Summary":"All timing checks pass: the entry is early on the curve and modestly sized. Classify the trade timing as favorable."},"result":true}

Trader Purchase Price: 1.19e-05

Trader Purchase Amount: 661.21

Trader Purchase Quantity: 55153573.25

{"reasoning":{"Trader Purchase Price":"Require purchase price < {75th percentile of the training set}. Observed = 1.19e-05, late on the curve, so this check fails.","Trader Purchase Amount":"Require purchase amount < {75th percentile of the training set}. Observed = 661.21, an outsized position, so this check fails.","Trader Purchase Quantity":"Require purchase quantity < {75th percentile of the training set}. Observed = 55153573.25, above range, so this check fails.","Summary":"The timing checks fail: the entry is late and oversized relative to the training distribution. Classify the trade timing as unfavorable."},"result":false}"""

WALLET_PROMPT_TEMPLATE = (
    WALLET_AGENT_ROLE
    + "\n\n"
    + WALLET_COT
    + """

T-statistic of Returns: {t_stat}

Average Return: {return_all}

Return Standard Deviation: {return_std}

Number of Trades: {n_trades}

Last Return: {return_1st}

Five-to-One Return: {return_1_5}

Ten-to-Six Return: {return_6_10}

Fifteen-to-Eleven Return: {return_11_15}

Time Since Last Trade: {t_since_last}

Time Since First Trade: {t_since_first}
"""
)

COIN_PROMPT_TEMPLATE = (
    COIN_AGENT_ROLE
    + "\n\n"
    + COIN_COT
    + """

Transaction Features:

Bundle Bot: {bundle}

Sniper Bot: {sniper}

Bump Bot: {bump}

Comment Bot: {comment}

Comment History: {comments}

Candlestick Chart: {candlestick}
"""
)

TIMING_PROMPT_TEMPLATE = (
    TIMING_AGENT_ROLE
    + "\n\n"
    + TIMING_COT
    + """

Trader Purchase Price: {px}

Trader Purchase Amount: {amount}

Trader Purchase Quantity: {qty}
"""
)

#: Slot markers each template must have filled before a bundle is valid.
TEMPLATE_SLOTS = {
    "wallet": ("t_stat", "return_all", "return_std", "n_trades", "return_1st", "return_1_5",
               "return_6_10", "return_11_15", "t_since_last", "t_since_first"),
    "coin": ("bundle", "sniper", "bump", "comment", "comments", "candlestick"),
    "timing": ("px", "amount", "qty"),
    "comment": ("comment",),
}

FORMAT_REMINDER = (
    "Your previous reply could not be parsed. Respond with a single JSON object of the form "
    '{"reasoning": {...}, "result": true} or {"reasoning": {...}, "result": false}.'
)


def fill_slots(template: str, agent: str, values: dict[str, str]) -> str:
    """Replace {slot} markers by exact string substitution."""
    text = template
    for slot in TEMPLATE_SLOTS[agent]:
        marker = "{" + slot + "}"
        if slot not in values:
            raise ValueError(f"missing value for slot {slot!r}")
        text = text.replace(marker, values[slot])
    return text


def unfilled_slots(text: str, agent: str) -> list[str]:
    return [slot for slot in TEMPLATE_SLOTS[agent] if "{" + slot + "}" in text]
