/** Feature CSV reader and verdict-schema score writer. */

import * as fs from "node:fs";
import {
  ALL_FEATURES,
  Dataset,
  FEATURE_HEADER,
  FeatureName,
  Sample,
  SchemaMismatch,
  SplitName,
} from "./types.js";

/** RFC-4180-aware line splitter (the feature file has no quoted fields, but
 * staying strict costs nothing). */
function splitCsvLine(line: string): string[] {
  const out: string[] = [];
  let cur = "";
  let quoted = false;
  for (let i = 0; i < line.length; i++) {
    const ch = line[i];
    if (quoted) {
      if (ch === '"' && line[i + 1] === '"') {
        cur += '"';
        i++;
      } else if (ch === '"') {
        quoted = false;
      } else {
        cur += ch;
      }
    } else if (ch === '"') {
      quoted = true;
    } else if (ch === ",") {
      out.push(cur);
      cur = "";
    } else {
      cur += ch;
    }
  }
  out.push(cur);
  return out;
}

export function parseFeatureCsv(path: string): Dataset {
  const text = fs.readFileSync(path, "utf-8");
  const lines = text.split(/\r?\n/).filter((l) => l.length > 0);
  if (lines.length === 0) throw new SchemaMismatch("empty feature file");
  const header = splitCsvLine(lines[0]);
  if (header.join(",") !== FEATURE_HEADER.join(",")) {
    throw new SchemaMismatch(`unexpected feature header: ${header.join(",")}`);
  }
  const samples: Sample[] = [];
  for (let r = 1; r < lines.length; r++) {
    const cells = splitCsvLine(lines[r]);
    if (cells.length !== FEATURE_HEADER.length) {
      throw new SchemaMismatch(`row ${r + 1}: expected ${FEATURE_HEADER.length} cells, got ${cells.length}`);
    }
    const row: Record<string, string> = {};
    FEATURE_HEADER.forEach((name, i) => (row[name] = cells[i]));
    const split = row.split as SplitName;
    if (!["train", "val", "test"].includes(split)) {
      throw new SchemaMismatch(`row ${r + 1}: sample has no split assignment`);
    }
    const features = {} as Record<FeatureName, number>;
    for (const name of ALL_FEATURES) {
      const cell = row[name];
      features[name] = cell === "" ? NaN : Number(cell);
      if (cell !== "" && Number.isNaN(features[name])) {
        throw new SchemaMismatch(`row ${r + 1}: ${name} is not numeric: ${cell}`);
      }
    }
    samples.push({
      wallet: row.wallet,
      coin: row.coin,
      firstTradeTs: Number(row.first_trade_ts),
      split,
      label: row.label === "1",
      features,
    });
  }
  return { samples };
}

export interface ScoreRow {
  wallet: string;
  coin: string;
  agent: string;
  decision: boolean;
  confidence: number;
}

/** Verdict-compatible score file: the analytics CLI reads it unchanged. */
export function writeScoreCsv(rows: ScoreRow[], path: string): void {
  const lines = ["wallet,coin,agent,decision,confidence"];
  for (const row of rows) {
    lines.push(
      [row.wallet, row.coin, row.agent, row.decision ? "1" : "0", String(row.confidence)].join(",")
    );
  }
  fs.writeFileSync(path, lines.join("\n") + "\n");
}

export function writeImportanceCsv(importances: Map<string, number>, path: string): void {
  const lines = ["feature,importance"];
  for (const [feature, value] of importances) {
    lines.push(`${feature},${value}`);
  }
  fs.writeFileSync(path, lines.join("\n") + "\n");
}
