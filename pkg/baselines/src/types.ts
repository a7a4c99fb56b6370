/**
 * Shared data shapes for the baseline models.
 *
 * The feature CSV is the contract with the main analytics package: exact
 * header, empty cells meaning "undefined", splits assigned upstream.
 */

export const FEATURE_HEADER = [
  "wallet", "coin", "first_trade_ts", "split", "label",
  "return_all", "return_1st", "return_1_5", "return_6_10", "return_11_15",
  "n_trades", "return_std", "t_stat",
  "t_since_last", "t_since_first", "t_since_launch",
  "px", "amount", "qty",
  "bot_bundle", "bot_sniper", "bot_bump", "bot_comment",
] as const;

/** Numeric model inputs, in column order. */
export const NUMERIC_FEATURES = [
  "return_all", "return_1st", "return_1_5", "return_6_10", "return_11_15",
  "n_trades", "return_std", "t_stat",
  "t_since_last", "t_since_first", "t_since_launch",
  "px", "amount", "qty",
] as const;

/** 0/1 dummies passed through untouched by the preprocessor. */
export const DUMMY_FEATURES = ["bot_bundle", "bot_sniper", "bot_bump", "bot_comment"] as const;

export const ALL_FEATURES = [...NUMERIC_FEATURES, ...DUMMY_FEATURES] as const;

export type FeatureName = (typeof ALL_FEATURES)[number];
export type SplitName = "train" | "val" | "test";

export interface Sample {
  wallet: string;
  coin: string;
  firstTradeTs: number;
  split: SplitName;
  label: boolean;
  /** NaN encodes an undefined (sentinel) value. */
  features: Record<FeatureName, number>;
}

export interface Dataset {
  samples: Sample[];
}

export type ModelKind = "lasso" | "gbdt" | "nn";

export class SchemaMismatch extends Error {}
export class SingleClass extends Error {}
