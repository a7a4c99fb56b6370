"""Run configuration: one human-editable YAML document with exhaustive
defaults, validated on load with unknown keys rejected."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import yaml

from .agents import CandleConfig
from .curve import CurveParams
from .detection import DetectionConfig, MetricsConfig
from .errors import ConfigError


@dataclass(frozen=True)
class AgentConfig:
    mode: str = "rule"  # rule | llm | hybrid
    chat_endpoint: str = ""
    chat_model: str = ""
    api_key_env: str = "COPYGUARD_API_KEY"
    max_in_flight: int = 4
    timeout_s: float = 60.0
    attach_images: bool = False

    def __post_init__(self):
        if self.mode not in ("rule", "llm", "hybrid"):
            raise ConfigError(f"unknown agent mode {self.mode!r}")


@dataclass(frozen=True)
class EnsembleConfig:
    threshold_step: float = 0.01
    weight_resolution: int = 100
    economics_threshold: float | None = None  # None -> validation F1 argmax


@dataclass(frozen=True)
class FeatureConfig:
    terminal_mode: str = "last_price"  # or "zero" for worthless-residue accounting
    split_fractions: tuple[float, float, float] = (0.70, 0.15, 0.15)


@dataclass(frozen=True)
class ScenarioConfig:
    """Default knobs for the scenario generator (per-coin intensities)."""

    n_retail: int = 8
    n_controlled_wallets: int = 3
    flip_count: int = 60
    gradual_span_blocks: int = 12
    sniper_delay_blocks: int = 2
    comment_bot_count: int = 3
    n_copiers: int = 2
    lift_span_blocks: int = 15
    exit_span_blocks: int = 3
    retail_sol_mu: float = -1.0
    retail_sol_sigma: float = 0.7
    retail_sell_prob: float = 0.75
    controlled_sol: float = 4.0
    kol_sol: float = 1.5
    copier_sol: float = 1.0
    sniper_sol: float = 1.0
    bump_sol: float = 0.05
    n_smart_wallets: int = 10
    n_dumb_wallets: int = 40
    smart_participation: float = 0.55
    dumb_participation: float = 0.35


@dataclass(frozen=True)
class RunConfig:
    seed: int = 42
    workers: int = 4
    curve: CurveParams = field(default_factory=CurveParams.make)
    detection: DetectionConfig = field(default_factory=DetectionConfig)
    metrics: MetricsConfig = field(default_factory=MetricsConfig)
    candles: CandleConfig = field(default_factory=CandleConfig)
    features: FeatureConfig = field(default_factory=FeatureConfig)
    agents: AgentConfig = field(default_factory=AgentConfig)
    ensemble: EnsembleConfig = field(default_factory=EnsembleConfig)
    scenario: ScenarioConfig = field(default_factory=ScenarioConfig)

    def canonical_json(self) -> str:
        def encode(value):
            if isinstance(value, dict):
                return {k: encode(v) for k, v in sorted(value.items())}
            if isinstance(value, (list, tuple)):
                return [encode(v) for v in value]
            if hasattr(value, "numerator") and not isinstance(value, (int, bool)):
                return str(value)
            return value

        return json.dumps(encode(asdict(self)), sort_keys=True, separators=(",", ":"))

    def digest(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()


def load_config(path: str | Path | None) -> RunConfig:
    """Load a YAML config; missing file fields fall back to defaults."""
    if path is None:
        return RunConfig()
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    raw = yaml.safe_load(path.read_text()) or {}
    if not isinstance(raw, dict):
        raise ConfigError("config root must be a mapping")

    top_known = {
        "seed", "workers", "curve", "detection", "metrics", "candles",
        "features", "agents", "ensemble", "scenario",
    }
    unknown = set(raw) - top_known
    if unknown:
        raise ConfigError(f"unknown top-level key(s): {sorted(unknown)}")

    try:
        curve_raw = dict(raw.get("curve", {}))
        unknown_curve = set(curve_raw) - {"x_virtual", "y_virtual", "fee_rate"}
        if unknown_curve:
            raise ConfigError(f"unknown key(s) {sorted(unknown_curve)} under curve")
        curve = CurveParams.make(
            x_virtual=str(curve_raw.get("x_virtual", "30")),
            y_virtual=str(curve_raw.get("y_virtual", "1073000000")),
            fee_rate=str(curve_raw.get("fee_rate", "0.01")),
        )
        detection = DetectionConfig(**_section(raw, "detection", DetectionConfig))
        metrics = MetricsConfig(**_section(raw, "metrics", MetricsConfig))
        candles = CandleConfig(**_section(raw, "candles", CandleConfig))
        features_kw = _section(raw, "features", FeatureConfig)
        if "split_fractions" in features_kw:
            features_kw["split_fractions"] = tuple(features_kw["split_fractions"])
        features = FeatureConfig(**features_kw)
        agents = AgentConfig(**_section(raw, "agents", AgentConfig))
        ensemble = EnsembleConfig(**_section(raw, "ensemble", EnsembleConfig))
        scenario = ScenarioConfig(**_section(raw, "scenario", ScenarioConfig))
        return RunConfig(
            seed=int(raw.get("seed", 42)),
            workers=int(raw.get("workers", 4)),
            curve=curve,
            detection=detection,
            metrics=metrics,
            candles=candles,
            features=features,
            agents=agents,
            ensemble=ensemble,
            scenario=scenario,
        )
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config: {exc}") from exc


def _section(raw: dict, name: str, cls) -> dict:
    data = raw.get(name, {})
    if not isinstance(data, dict):
        raise ConfigError(f"section {name!r} must be a mapping")
    known = {f.name for f in fields(cls)}
    unknown = set(data) - known
    if unknown:
        raise ConfigError(f"unknown key(s) {sorted(unknown)} under {name}")
    converted = dict(data)
    if name == "detection":
        for key in ("bump_score_threshold", "bump_epsilon"):
            if key in converted:
                from .curve import as_fraction

                converted[key] = as_fraction(str(converted[key]))
    if name == "metrics" and "dump_fraction" in converted:
        from .curve import as_fraction

        converted["dump_fraction"] = as_fraction(str(converted["dump_fraction"]))
    return converted
