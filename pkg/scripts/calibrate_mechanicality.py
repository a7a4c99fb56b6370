#!/usr/bin/env python3
"""Reproduce the mechanicality-score calibration behind CandleConfig.mechanical_cut.

Prints per-kind score distributions over seeded scenarios and checks that
the frozen cut keeps every gradual-bundle coin flagged while organic coins
stay below it except for rare tail coincidences. Run after any change to
the score definition or the scenario generator defaults.
"""

import argparse

from copyguard.agents import CandleConfig, build_candles
from copyguard.simulate import ScenarioKind, ScenarioSpec, generate


def scores(kind: ScenarioKind, n: int, cfg: CandleConfig, **kw) -> list[float]:
    out = []
    for seed in range(n):
        spec = ScenarioSpec(kind=kind, seed=seed, **kw)
        out.append(build_candles(generate(spec).ledger, spec.curve, cfg).mechanicality_score)
    return sorted(out)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=150, help="seeds per kind")
    args = parser.parse_args()
    cfg = CandleConfig()

    print(f"{'kind':16s} {'min':>7s} {'p50':>7s} {'p95':>7s} {'max':>7s}")
    rows = {}
    for kind in ScenarioKind:
        vals = scores(kind, args.n, cfg)
        rows[kind] = vals
        print(
            f"{kind.value:16s} {vals[0]:7.3f} {vals[len(vals) // 2]:7.3f} "
            f"{vals[int(0.95 * len(vals))]:7.3f} {vals[-1]:7.3f}"
        )

    pure = scores(ScenarioKind.GRADUAL_BUNDLE, 10, cfg, n_retail=0, n_copiers=0, n_organic_comments=0)
    gradual = rows[ScenarioKind.GRADUAL_BUNDLE]
    benign = rows[ScenarioKind.BENIGN]
    cut = cfg.mechanical_cut
    print(f"\nfrozen cut: {cut}")
    print(f"pure gradual series min: {pure[0]:.3f}")
    print(f"gradual flagged: {sum(v >= cut for v in gradual)}/{len(gradual)}")
    print(f"benign false flags: {sum(v >= cut for v in benign)}/{len(benign)}")
    assert gradual[0] >= cut, "a gradual-bundle coin fell below the frozen cut"
    assert benign[int(0.95 * len(benign))] < cut, "benign 95th percentile crossed the cut"
    print("calibration margins hold")


if __name__ == "__main__":
    main()
