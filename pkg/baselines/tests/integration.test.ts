/**
 * Interface test against the analytics package: a real feature CSV comes
 * out of its pipeline, scores go back in through `evaluate` unchanged.
 */

import { execFileSync } from "node:child_process";
import * as fs from "node:fs";
import * as os from "node:os";
import * as path from "node:path";
import { describe, expect, it } from "vitest";

import { parseFeatureCsv, writeScoreCsv } from "../src/csv.js";
import { FAST_GRID } from "../src/grids.js";
import { trainAndScore } from "../src/train.js";
import { SchemaMismatch } from "../src/types.js";
import { separableDataset, writeFeatureCsv } from "./synth.js";

function python(args: string[], cwd: string): string {
  return execFileSync("python3", ["-m", "copyguard.cli", ...args], { cwd, encoding: "utf-8" });
}

describe("primary-package interface", () => {
  it("consumes the pipeline's feature CSV and its evaluate consumes our scores", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "baselines-"));
    python(["simulate", "--n", "60", "--seed", "5", "--out-dir", dir], dir);
    python(
      ["detect", "--tx", "transactions.csv", "--comments", "comments.csv", "--out", "flags.jsonl"],
      dir
    );
    python(
      [
        "features",
        "--tx", "transactions.csv",
        "--comments", "comments.csv",
        "--flags", "flags.jsonl",
        "--out", "features.csv",
      ],
      dir
    );

    const dataset = parseFeatureCsv(path.join(dir, "features.csv"));
    expect(dataset.samples.length).toBeGreaterThan(100);
    const result = trainAndScore(dataset, "lasso", FAST_GRID.lasso, 42);
    const scorePath = path.join(dir, "scores.csv");
    writeScoreCsv(result.scores, scorePath);

    const out = python(
      ["evaluate", "--features", "features.csv", "--verdicts", "scores.csv", "--out-dir", "eval"],
      dir
    );
    expect(out).toContain("test AUC");
    const report = JSON.parse(fs.readFileSync(path.join(dir, "eval", "report.json"), "utf-8"));
    expect(report.auc).toBeGreaterThan(0);
    expect(report.auc).toBeLessThanOrEqual(1);
    expect(report.per_threshold.length).toBe(101);
  }, 180_000);

  it("rejects feature files with a foreign schema", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "baselines-"));
    const bad = path.join(dir, "bad.csv");
    fs.writeFileSync(bad, "wallet,coin,label\nw,c,1\n");
    expect(() => parseFeatureCsv(bad)).toThrow(SchemaMismatch);
  });

  it("writes the verdict-compatible score schema", () => {
    const dir = fs.mkdtempSync(path.join(os.tmpdir(), "baselines-"));
    const data = separableDataset(50, 2);
    const csvPath = path.join(dir, "features.csv");
    writeFeatureCsv(data, csvPath);
    const reparsed = parseFeatureCsv(csvPath);
    expect(reparsed.samples.length).toBe(50);

    const result = trainAndScore(reparsed, "lasso", FAST_GRID.lasso, 42);
    const scorePath = path.join(dir, "scores.csv");
    writeScoreCsv(result.scores, scorePath);
    const lines = fs.readFileSync(scorePath, "utf-8").trim().split("\n");
    expect(lines[0]).toBe("wallet,coin,agent,decision,confidence");
    expect(lines.length).toBe(51);
  });
});
