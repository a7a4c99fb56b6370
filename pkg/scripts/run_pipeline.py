#!/usr/bin/env python3
"""End-to-end rule-mode experiment: simulate a labeled corpus, detect bots,
build features, evaluate the agent ensemble, run the ablations, and print
the headline numbers. Everything lands under --out-dir and reruns with the
same seed are byte-identical."""

import argparse
import json
from pathlib import Path

from copyguard.cli import main as cli


def run(argv: list[str]):
    code = cli(argv)
    if code != 0:
        raise SystemExit(code)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="runs/demo")
    parser.add_argument("--n", type=int, default=200)
    parser.add_argument("--seed", type=int, default=42)
    parser.add_argument("--config", default=None)
    args = parser.parse_args()

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cfg = ["--config", args.config] if args.config else []

    run(["simulate", "--n", str(args.n), "--seed", str(args.seed), "--out-dir", str(out), *cfg])
    tx, comments = str(out / "transactions.csv"), str(out / "comments.csv")
    run(["detect", "--tx", tx, "--comments", comments, "--out", str(out / "flags.jsonl"), *cfg])
    run(["features", "--tx", tx, "--comments", comments, "--flags", str(out / "flags.jsonl"),
         "--out", str(out / "features.csv"), *cfg])
    run(["agents", "--features", str(out / "features.csv"), "--tx", tx, "--comments", comments,
         "--out", str(out / "verdicts.jsonl"), *cfg])
    run(["evaluate", "--features", str(out / "features.csv"), "--verdicts", str(out / "verdicts.jsonl"),
         "--tx", tx, "--comments", comments, "--out-dir", str(out / "eval"), *cfg])
    run(["ablate", "--features", str(out / "features.csv"), "--verdicts", str(out / "verdicts.jsonl"),
         "--out-dir", str(out / "ablation"), *cfg])

    report = json.loads((out / "eval" / "report.json").read_text())
    ablation = json.loads((out / "ablation" / "ablation.json").read_text())
    print("\n=== summary ===")
    print(f"test AUC          : {report['auc']:.4f}")
    print(f"validation AUC    : {report['validation_auc']:.4f}")
    print(f"fitted weights    : {report['weights']}")
    if report.get("economics"):
        econ = report["economics"]
        print(f"selection economics (threshold {econ['threshold']:.2f}, {econ['n_evaluated']} wallets):")
        print(f"  smart-money gross return: {econ['smart_money_gross_return']:.4f}")
        print(f"  copier gross return     : {econ['copier_gross_return']:.4f}")
    print("ablations (validation AUC):")
    for row in ablation:
        print(f"  {row['ablation']:20s} {row['val_auc']:.4f}")


if __name__ == "__main__":
    main()
