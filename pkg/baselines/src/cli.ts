/**
 * baselines CLI:
 *   node dist/cli.js train --features F --model {lasso,gbdt,nn} --out scores.csv
 *                          [--grid fast|full] [--seed N] [--importance F]
 */

import { parseFeatureCsv, writeImportanceCsv, writeScoreCsv } from "./csv.js";
import { GbdtModel } from "./gbdt.js";
import { LassoModel } from "./lasso.js";
import { NnModel } from "./nn.js";
import { gbdtImportance, lassoImportance, permutationImportance } from "./importance.js";
import { gridFor } from "./grids.js";
import { trainAndScore } from "./train.js";
import { ModelKind, SchemaMismatch, SingleClass } from "./types.js";

interface Args {
  features: string;
  model: ModelKind;
  out: string;
  grid: "fast" | "full";
  seed: number;
  importance?: string;
}

function parseArgs(argv: string[]): Args {
  if (argv[0] !== "train") {
    throw new Error("usage: cli train --features F --model {lasso,gbdt,nn} --out scores.csv");
  }
  const args: Partial<Args> = { grid: "fast", seed: 42 };
  for (let i = 1; i < argv.length; i += 2) {
    const key = argv[i];
    const value = argv[i + 1];
    if (value === undefined) throw new Error(`missing value for ${key}`);
    switch (key) {
      case "--features":
        args.features = value;
        break;
      case "--model":
        if (!["lasso", "gbdt", "nn"].includes(value)) throw new Error(`unknown model ${value}`);
        args.model = value as ModelKind;
        break;
      case "--out":
        args.out = value;
        break;
      case "--grid":
        if (value !== "fast" && value !== "full") throw new Error("--grid must be fast or full");
        args.grid = value;
        break;
      case "--seed":
        args.seed = Number(value);
        break;
      case "--importance":
        args.importance = value;
        break;
      default:
        throw new Error(`unknown flag ${key}`);
    }
  }
  if (!args.features || !args.model || !args.out) {
    throw new Error("--features, --model, and --out are required");
  }
  return args as Args;
}

export function run(argv: string[]): number {
  const args = parseArgs(argv);
  const dataset = parseFeatureCsv(args.features);
  const grid = gridFor(args.model, args.grid);
  console.log(`training ${args.model} over ${grid.length} grid points (${args.grid} grid, seed ${args.seed})`);
  const result = trainAndScore(dataset, args.model, grid, args.seed, (line) => console.log("  " + line));
  writeScoreCsv(result.scores, args.out);
  console.log(
    `chosen ${JSON.stringify(result.chosenParams)} val AUC ${result.valAuc.toFixed(4)} -> ${args.out}`
  );
  if (args.importance) {
    let table;
    if (args.model === "lasso") {
      table = lassoImportance(result.model as LassoModel, result.valMatrix);
    } else if (args.model === "gbdt") {
      table = gbdtImportance(result.model as GbdtModel, result.valMatrix);
    } else {
      table = permutationImportance(
        args.model,
        result.model as NnModel,
        result.valMatrix,
        result.valLabels,
        args.seed
      );
    }
    writeImportanceCsv(table, args.importance);
    console.log(`importance table -> ${args.importance}`);
  }
  return 0;
}

const invokedDirectly = process.argv[1]?.endsWith("cli.js");
if (invokedDirectly) {
  try {
    process.exit(run(process.argv.slice(2)));
  } catch (err) {
    if (err instanceof SchemaMismatch || err instanceof SingleClass) {
      console.error(JSON.stringify({ error: err.constructor.name, message: err.message }));
      process.exit(2);
    }
    console.error(String(err));
    process.exit(1);
  }
}
