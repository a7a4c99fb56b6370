"""Single entry point wiring ingestion, detection, simulation, features,
agents, evaluation, ablation, and economics into deterministic artifacts.

Every subcommand writes a manifest next to its outputs (config hash, seed,
package version, input/output digests) so identical runs are verifiable as
byte-identical. Exit codes: 0 ok, 2 input error, 3 external-service error,
4 internal invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal
from pathlib import Path

from . import __version__
from .agents import (
    AgentKind,
    CandlestickSeries,
    HttpChatClient,
    assemble_agent_prompt,
    build_candles,
    classify_comment_llm,
    classify_comment_rule,
    run_llm_agent,
    run_llm_agents_batch,
    run_rule_agent,
)
from .chain import (
    CoinLedger,
    build_ledger,
    ingest_comments,
    ingest_transactions,
    write_comments_csv,
    write_transactions_csv,
)
from .config import RunConfig, load_config
from .curve import CurveState
from .detection import coin_metrics, detect_all
from .economics import TradeSeq, replay_with_copier
from .ensemble import (
    AGENT_ORDER,
    WeightVector,
    ablate,
    aggregate,
    best_f1_threshold,
    economics_of_selection,
    evaluate,
    fit_weights,
    split_rows,
)
from .errors import CopyguardError, EmptyLedger, MalformedRow, MissingInput
from .features import (
    Split,
    build_samples,
    export_features,
    fit_conditions,
    import_features,
    split_chronological,
)
from .simulate import PopulationSpec, ScenarioKind, ScenarioSpec, generate_dataset


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")


def _write_manifest(out_dir: Path, command: str, cfg: RunConfig, inputs: list[Path], outputs: list[Path]) -> None:
    manifest = {
        "command": command,
        "config_hash": cfg.digest(),
        "seed": cfg.seed,
        "versions": {"copyguard": __version__, "python": ".".join(map(str, sys.version_info[:3]))},
        "input_digests": {p.name: _sha256(p) for p in inputs if p and p.exists()},
        "output_digests": {p.name: _sha256(p) for p in outputs if p.exists()},
    }
    _write_json(out_dir / "manifest.json", manifest)


def _load_ledgers(cfg: RunConfig, tx: str, comments: str | None, fmt: str = "csv") -> dict[str, CoinLedger]:
    result = ingest_transactions(tx, fmt=fmt)
    ledgers = result.ledgers
    if comments:
        ledgers, _ = ingest_comments(comments, ledgers)
    return ledgers


def _comment_classifier(cfg: RunConfig):
    if cfg.agents.mode == "rule":
        return classify_comment_rule
    client = _chat_client(cfg)
    if cfg.agents.mode == "llm":
        return lambda text: classify_comment_llm(text, client)
    # hybrid: cheap rule filter for comments, LLM reserved for the agents
    return classify_comment_rule


def _chat_client(cfg: RunConfig) -> HttpChatClient:
    return HttpChatClient(
        endpoint=cfg.agents.chat_endpoint,
        model=cfg.agents.chat_model,
        api_key=os.environ.get(cfg.agents.api_key_env),
        timeout_s=cfg.agents.timeout_s,
    )


# --- subcommands -------------------------------------------------------------------


def cmd_ingest(args, cfg: RunConfig) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    result = ingest_transactions(args.tx, fmt=args.format, strict=not args.skip_bad_rows)
    ledgers = result.ledgers
    warnings: list[str] = []
    if args.comments:
        ledgers, warnings = ingest_comments(args.comments, ledgers)
    tx_out = out_dir / "transactions.csv"
    comments_out = out_dir / "comments.csv"
    ordered = [ledgers[c] for c in sorted(ledgers)]
    write_transactions_csv(ordered, tx_out)
    write_comments_csv(ordered, comments_out)
    _write_json(out_dir / "diagnostics.json", {"rows": result.diagnostics, "comment_warnings": warnings})
    inputs = [Path(args.tx)] + ([Path(args.comments)] if args.comments else [])
    _write_manifest(out_dir, "ingest", cfg, inputs, [tx_out, comments_out])
    print(f"ingested {len(ledgers)} coins -> {out_dir}")
    return 0


def cmd_simulate(args, cfg: RunConfig) -> int:
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    mix = {}
    for part in args.mix.split(","):
        kind, _, weight = part.partition("=")
        mix[ScenarioKind(kind.strip())] = float(weight or 1.0)
    seed = args.seed if args.seed is not None else cfg.seed
    sc = cfg.scenario
    base = ScenarioSpec(
        kind=ScenarioKind.BENIGN,
        seed=seed,
        curve=cfg.curve,
        n_retail=sc.n_retail,
        n_controlled_wallets=sc.n_controlled_wallets,
        flip_count=sc.flip_count,
        gradual_span_blocks=sc.gradual_span_blocks,
        sniper_delay_blocks=sc.sniper_delay_blocks,
        comment_bot_count=sc.comment_bot_count,
        n_copiers=sc.n_copiers,
        lift_span_blocks=sc.lift_span_blocks,
        exit_span_blocks=sc.exit_span_blocks,
        retail_sol_mu=sc.retail_sol_mu,
        retail_sol_sigma=sc.retail_sol_sigma,
        retail_sell_prob=sc.retail_sell_prob,
        controlled_sol=sc.controlled_sol,
        kol_sol=sc.kol_sol,
        copier_sol=sc.copier_sol,
        sniper_sol=sc.sniper_sol,
        bump_sol=sc.bump_sol,
    )
    population = PopulationSpec(
        n_smart=sc.n_smart_wallets,
        n_dumb=sc.n_dumb_wallets,
        smart_participation=sc.smart_participation,
        dumb_participation=sc.dumb_participation,
    )
    bundle = generate_dataset(
        args.n, mix, seed=seed, base=base, population=population,
        detection_cfg=cfg.detection, metrics_cfg=cfg.metrics,
    )
    ledgers = [s.ledger for s in bundle.scenarios]
    tx_out = out_dir / "transactions.csv"
    comments_out = out_dir / "comments.csv"
    truth_out = out_dir / "truth.jsonl"
    write_transactions_csv(ledgers, tx_out)
    write_comments_csv(ledgers, comments_out)
    with truth_out.open("w") as fh:
        for s in bundle.scenarios:
            fh.write(
                json.dumps(
                    {
                        "coin": s.spec.coin,
                        "kind": s.spec.kind.value,
                        "bundle": s.truth.bundle,
                        "sniper": s.truth.sniper,
                        "bump": s.truth.bump,
                        "comment": s.truth.comment,
                        "ln_max_return": s.truth_metrics.ln_max_return,
                        "ln_dump_duration": s.truth_metrics.ln_dump_duration,
                        "roles": {w: r.value for w, r in sorted(s.role_map.items())},
                        "labels": {
                            w: bool(f.profit > 0) for w, f in sorted(s.wallet_flows.items())
                        },
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    _write_manifest(out_dir, "simulate", cfg, [], [tx_out, comments_out, truth_out])
    print(f"simulated {args.n} coins ({len(bundle.allocation)} allocated) -> {out_dir}")
    return 0


def cmd_detect(args, cfg: RunConfig) -> int:
    ledgers = _load_ledgers(cfg, args.tx, args.comments)
    classifier = _comment_classifier(cfg)
    coins = sorted(ledgers)

    def run_one(coin: str):
        ledger = ledgers[coin]
        flags = detect_all(ledger, cfg.detection, classifier=classifier)
        try:
            metrics = coin_metrics(ledger, cfg.curve, cfg.metrics)
        except EmptyLedger:
            metrics = None
        return coin, flags, metrics

    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(run_one, coins))

    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        for coin, flags, metrics in results:  # already coin-sorted
            fh.write(
                json.dumps(
                    {
                        "coin": coin,
                        "bundle": flags.bundle,
                        "sniper": flags.sniper,
                        "bump": flags.bump,
                        "comment": flags.comment,
                        "bump_scores": {w: float(s) for w, s in sorted(flags.bump_scores.items())},
                        "ln_max_return": metrics.ln_max_return if metrics else None,
                        "ln_dump_duration": metrics.ln_dump_duration if metrics else None,
                    },
                    sort_keys=True,
                )
                + "\n"
            )
    out_dir = out.parent
    inputs = [Path(args.tx)] + ([Path(args.comments)] if args.comments else [])
    _write_manifest(out_dir, "detect", cfg, inputs, [out])
    print(f"detection report for {len(results)} coins -> {out}")
    return 0


def _flags_from_report(path: Path):
    from .detection import BotFlags

    flags = {}
    with path.open() as fh:
        for line in fh:
            if not line.strip():
                continue
            row = json.loads(line)
            flags[row["coin"]] = BotFlags(
                bundle=row["bundle"],
                sniper=row["sniper"],
                bump=row["bump"],
                comment=row["comment"],
            )
    return flags


def cmd_features(args, cfg: RunConfig) -> int:
    ledgers = _load_ledgers(cfg, args.tx, args.comments)
    flags_path = Path(args.flags)
    if not flags_path.exists():
        raise MissingInput(str(flags_path), "run `copyguard detect` first")
    flags = _flags_from_report(flags_path)
    samples = build_samples(ledgers, flags, terminal_mode=cfg.features.terminal_mode)
    samples = split_chronological(samples, cfg.features.split_fractions)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    export_features(samples, out)
    inputs = [Path(args.tx), flags_path] + ([Path(args.comments)] if args.comments else [])
    _write_manifest(out.parent, "features", cfg, inputs, [out])
    print(f"{len(samples)} samples -> {out}")
    return 0


def _truncated_candles(ledger: CoinLedger, cutoff_ts: int, cfg: RunConfig) -> CandlestickSeries | None:
    kept = [tx for tx in ledger.txs if tx.timestamp < cutoff_ts]
    if not any(tx.kind.value in ("buy", "sell") for tx in kept):
        return None
    truncated = build_ledger(ledger.coin, kept)
    return build_candles(truncated, cfg.curve, cfg.candles)


def _rule_verdicts(samples, thresholds, ledgers, cfg: RunConfig):
    rows = []
    for s in samples:
        candles = None
        if ledgers and s.coin in ledgers:
            candles = _truncated_candles(ledgers[s.coin], s.first_trade_ts, cfg)
        for kind in AgentKind:
            verdict = run_rule_agent(kind, s, thresholds, candles, cfg.candles.mechanical_cut)
            rows.append({"wallet": s.wallet, "coin": s.coin, **verdict.to_dict()})
    return rows


def _llm_verdicts(samples, ledgers, cfg: RunConfig):
    client = _chat_client(cfg)
    keys, bundles = [], []
    for s in samples:
        candles = None
        comments: list[str] = []
        if ledgers and s.coin in ledgers:
            candles = _truncated_candles(ledgers[s.coin], s.first_trade_ts, cfg)
            comments = [
                f"{c.timestamp} -- {c.wallet}: {c.text}"
                for c in ledgers[s.coin].comments
                if c.timestamp < s.first_trade_ts
            ]
        for kind in AgentKind:
            keys.append((s.wallet, s.coin))
            bundles.append(
                assemble_agent_prompt(kind, s, candles, comments, attach_image=cfg.agents.attach_images)
            )
    verdicts = run_llm_agents_batch(bundles, client, max_in_flight=cfg.agents.max_in_flight)
    return [
        {"wallet": wallet, "coin": coin, **verdict.to_dict()}
        for (wallet, coin), verdict in zip(keys, verdicts)
    ]


def cmd_agents(args, cfg: RunConfig) -> int:
    samples = import_features(args.features)
    ledgers = _load_ledgers(cfg, args.tx, args.comments) if args.tx else {}
    train = split_rows(samples, Split.TRAIN)
    thresholds = fit_conditions(train)
    if cfg.agents.mode == "rule":
        rows = _rule_verdicts(samples, thresholds, ledgers, cfg)
    else:
        rows = _llm_verdicts(samples, ledgers, cfg)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w") as fh:
        for row in rows:
            fh.write(json.dumps(row, sort_keys=True) + "\n")
    inputs = [Path(args.features)] + ([Path(args.tx)] if args.tx else [])
    _write_manifest(out.parent, "agents", cfg, inputs, [out])
    print(f"{len(rows)} verdicts -> {out}")
    return 0


def _read_verdicts(path: Path) -> dict[tuple[str, str], dict[str, float]]:
    verdicts: dict[tuple[str, str], dict[str, float]] = {}
    if path.suffix == ".csv":
        with path.open(newline="") as fh:
            reader = csv.DictReader(fh)
            required = {"wallet", "coin", "agent", "confidence"}
            if not required.issubset(reader.fieldnames or ()):
                raise MalformedRow(1, f"verdict csv needs columns {sorted(required)}")
            for row in reader:
                verdicts.setdefault((row["wallet"], row["coin"]), {})[row["agent"]] = float(row["confidence"])
    else:
        with path.open() as fh:
            for line in fh:
                if not line.strip():
                    continue
                row = json.loads(line)
                verdicts.setdefault((row["wallet"], row["coin"]), {})[row["agent"]] = float(row["confidence"])
    return verdicts


def _aligned(samples, verdicts):
    rows, labels, kept = [], [], []
    for s in samples:
        row = verdicts.get((s.wallet, s.coin))
        if row:
            rows.append(row)
            labels.append(s.label)
            kept.append(s)
    return rows, labels, kept


def _write_threshold_csv(report, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "precision", "recall", "f1", "undefined"])
        for m in report.per_threshold:
            writer.writerow([m.threshold, m.precision, m.recall, m.f1, "|".join(m.undefined)])


def _write_roc_csv(report, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in report.roc:
            writer.writerow([fpr, tpr])


def cmd_evaluate(args, cfg: RunConfig) -> int:
    samples = import_features(args.features)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.verdicts:
        verdicts = _read_verdicts(Path(args.verdicts))
    else:
        ledgers = _load_ledgers(cfg, args.tx, args.comments) if args.tx else {}
        thresholds = fit_conditions(split_rows(samples, Split.TRAIN))
        verdicts = {}
        for row in _rule_verdicts(samples, thresholds, ledgers, cfg):
            verdicts.setdefault((row["wallet"], row["coin"]), {})[row["agent"]] = row["confidence"]

    val_rows, val_labels, _ = _aligned(split_rows(samples, Split.VAL), verdicts)
    test_rows, test_labels, test_samples = _aligned(split_rows(samples, Split.TEST), verdicts)
    if not test_rows:
        raise MissingInput(args.verdicts or "verdicts", "no verdicts matched the test split")

    known_agents = set(AGENT_ORDER)
    seen_agents = {a for row in test_rows for a in row}
    if seen_agents & known_agents:
        weights, val_auc = fit_weights(val_rows, val_labels, cfg.ensemble.weight_resolution)
    else:
        # Foreign score file (e.g. a statistic-driven baseline): scores pass
        # through unweighted.
        weights, val_auc = WeightVector.uniform(), None
    report = evaluate(test_rows, test_labels, weights, split="test", grid_step=cfg.ensemble.threshold_step)

    economics_dict = None
    if args.tx:
        ledgers = _load_ledgers(cfg, args.tx, args.comments)
        threshold = cfg.ensemble.economics_threshold
        if threshold is None:
            val_report = evaluate(val_rows, val_labels, weights, split="val", grid_step=cfg.ensemble.threshold_step)
            threshold = best_f1_threshold(val_report)
        selected = [
            s for s, row in zip(test_samples, test_rows) if aggregate(row, weights) >= threshold
        ]
        if selected:
            economics, _ = economics_of_selection(selected, ledgers, cfg.curve)
            economics_dict = {**economics.to_dict(), "threshold": threshold}

    payload = report.to_dict()
    payload["validation_auc"] = val_auc
    if economics_dict:
        payload["economics"] = economics_dict
        payload["smart_money_gross_return"] = economics_dict["smart_money_gross_return"]
        payload["copier_gross_return"] = economics_dict["copier_gross_return"]
    report_path = out_dir / "report.json"
    _write_json(report_path, payload)
    prec_path = out_dir / "prec_f1_vs_threshold.csv"
    roc_path = out_dir / "roc.csv"
    _write_threshold_csv(report, prec_path)
    _write_roc_csv(report, roc_path)
    inputs = [Path(args.features)] + ([Path(args.verdicts)] if args.verdicts else [])
    _write_manifest(out_dir, "evaluate", cfg, inputs, [report_path, prec_path, roc_path])
    auc_text = "n/a" if report.auc is None else f"{report.auc:.4f}"
    print(f"test AUC {auc_text} (weights {weights.as_dict()}) -> {report_path}")
    return 0


def cmd_ablate(args, cfg: RunConfig) -> int:
    samples = import_features(args.features)
    verdicts = _read_verdicts(Path(args.verdicts)) if args.verdicts else None
    if verdicts is None:
        ledgers = _load_ledgers(cfg, args.tx, args.comments) if args.tx else {}
        thresholds = fit_conditions(split_rows(samples, Split.TRAIN))
        verdicts = {}
        for row in _rule_verdicts(samples, thresholds, ledgers, cfg):
            verdicts.setdefault((row["wallet"], row["coin"]), {})[row["agent"]] = row["confidence"]

    val_rows, val_labels, _ = _aligned(split_rows(samples, Split.VAL), verdicts)
    test_rows, test_labels, _ = _aligned(split_rows(samples, Split.TEST), verdicts)
    weights, full_val_auc = fit_weights(val_rows, val_labels, cfg.ensemble.weight_resolution)
    full_report = evaluate(test_rows, test_labels, weights, split="test")

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = [
        {
            "ablation": "full",
            "val_auc": full_val_auc,
            "test_auc": full_report.auc,
            "weights": weights.as_dict(),
        }
    ]
    for agent in AGENT_ORDER:
        result = ablate(agent, val_rows, val_labels, test_rows, test_labels, cfg.ensemble.weight_resolution)
        rows.append(
            {
                "ablation": f"w/o {agent} agent",
                "val_auc": result.val_auc,
                "test_auc": result.report.auc,
                "weights": result.weights.as_dict(),
                "val_auc_delta": result.val_auc - full_val_auc,
            }
        )
    ablation_path = out_dir / "ablation.json"
    _write_json(ablation_path, rows)
    csv_path = out_dir / "ablation.csv"
    with csv_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["ablation", "val_auc", "test_auc"])
        for row in rows:
            writer.writerow([row["ablation"], row["val_auc"], row["test_auc"]])
    _write_manifest(out_dir, "ablate", cfg, [Path(args.features)], [ablation_path, csv_path])
    print(f"ablation table -> {ablation_path}")
    return 0


def cmd_economics(args, cfg: RunConfig) -> int:
    path = Path(args.trades)
    if not path.exists():
        raise MissingInput(str(path))
    trades = []
    with path.open(newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != ["step", "side", "token_qty"]:
            raise MalformedRow(1, "expected header step,side,token_qty")
        for i, row in enumerate(reader, start=2):
            qty = Decimal(row["token_qty"])
            if row["side"] not in ("buy", "sell"):
                raise MalformedRow(i, f"side must be buy or sell, got {row['side']!r}")
            trades.append(qty if row["side"] == "buy" else -qty)
    seq = TradeSeq.make(trades, CurveState.fresh(cfg.curve))
    report = replay_with_copier(seq)
    out = Path(args.out)
    out.parent.mkdir(parents=True, exist_ok=True)
    _write_json(out, report.to_dict())
    _write_manifest(out.parent, "economics", cfg, [path], [out])
    print(
        f"smart gross {float(report.gross_smart):.4f}, copier gross {float(report.gross_copier):.4f} "
        f"over {len(trades)} trades -> {out}"
    )
    return 0


def cmd_report(args, cfg: RunConfig) -> int:
    run_dir = Path(args.run_dir)
    report_path = run_dir / "report.json"
    if not report_path.exists():
        raise MissingInput(str(report_path), "run `copyguard evaluate` first")
    payload = json.loads(report_path.read_text())
    prec_path = run_dir / "prec_f1_vs_threshold.csv"
    roc_path = run_dir / "roc.csv"
    with prec_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["threshold", "precision", "recall", "f1", "undefined"])
        for m in payload["per_threshold"]:
            writer.writerow([m["threshold"], m["precision"], m["recall"], m["f1"], "|".join(m["undefined"])])
    with roc_path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["fpr", "tpr"])
        for fpr, tpr in payload["roc"]:
            writer.writerow([fpr, tpr])
    print(f"plot data refreshed in {run_dir}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="copyguard", description=__doc__)
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML config file (defaults apply when omitted)")
    common.add_argument("--seed", type=int, help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=lambda **kw: argparse.ArgumentParser(parents=[common], **kw))

    p = sub.add_parser("ingest", help="normalize raw transaction/comment files")
    p.add_argument("--tx", required=True)
    p.add_argument("--format", choices=["csv", "jsonl"], default="csv")
    p.add_argument("--comments")
    p.add_argument("--skip-bad-rows", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("simulate", help="generate a labeled synthetic corpus")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mix", default="benign=0.4,bundle_bot=0.12,gradual_bundle=0.12,sniper_bot=0.12,bump_bot=0.12,comment_bot=0.12")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("detect", help="run the bot detectors per coin")
    p.add_argument("--tx", required=True)
    p.add_argument("--comments")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("features", help="build leakage-safe trader samples")
    p.add_argument("--tx", required=True)
    p.add_argument("--comments")
    p.add_argument("--flags", required=True, help="detect subcommand output (jsonl)")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_features)

    p = sub.add_parser("agents", help="emit per-sample agent verdicts")
    p.add_argument("--features", required=True)
    p.add_argument("--tx")
    p.add_argument("--comments")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_agents)

    p = sub.add_parser("evaluate", help="fit weights on val, evaluate test")
    p.add_argument("--features", required=True)
    p.add_argument("--verdicts")
    p.add_argument("--tx")
    p.add_argument("--comments")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("ablate", help="drop each agent, refit, evaluate")
    p.add_argument("--features", required=True)
    p.add_argument("--verdicts")
    p.add_argument("--tx")
    p.add_argument("--comments")
    p.add_argument("--out-dir", required=True)
    p.set_defaults(func=cmd_ablate)

    p = sub.add_parser("economics", help="replay a trade-sequence CSV with a copier")
    p.add_argument("--trades", required=True, help="CSV with header step,side,token_qty")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_economics)

    p = sub.add_parser("report", help="re-emit plot-data CSVs from report.json")
    p.add_argument("--run-dir", required=True)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        if args.seed is not None:
            import dataclasses

            cfg = dataclasses.replace(cfg, seed=args.seed)
        return args.func(args, cfg)
    except CopyguardError as exc:
        error = {"error": type(exc).__name__, "message": str(exc), "exit_code": exc.exit_code}
        print(json.dumps(error), file=sys.stderr)
        return exc.exit_code
    except Exception as exc:  # internal invariant violation
        error = {"error": type(exc).__name__, "message": str(exc), "exit_code": 4}
        print(json.dumps(error), file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
