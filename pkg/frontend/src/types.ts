// Wire types of the session service (schema "mxassist-report/1").

export const SCHEMA_VERSION = "mxassist-report/1";

export type SymbolKind = "env" | "dec";

export type SymbolStatus =
  | "given_observation"
  | "given_decision"
  | "safe_consequence"
  | "to_verify"
  | "decision_consequence"
  | "relevant_unknown"
  | "irrelevant";

export const ALL_STATUSES: SymbolStatus[] = [
  "given_observation",
  "given_decision",
  "safe_consequence",
  "to_verify",
  "decision_consequence",
  "relevant_unknown",
  "irrelevant",
];

export type FactValue = boolean | number | string;

export type Domain =
  | { type: "bool" }
  | { type: "enum"; values: string[] }
  | { type: "int"; lo: number; hi: number };

export interface SymbolEntry {
  name: string;
  kind: SymbolKind;
  domain: Domain;
  status: SymbolStatus;
  value?: FactValue;
}

export interface Report {
  schema: string;
  satisfiable: boolean;
  mode: string;
  symbols: SymbolEntry[];
  banners: { definite: boolean; contingent: boolean };
  history_length: number;
  message?: string;
}

export type Role = "observation" | "decision";

export interface RetractionFact {
  symbol: string;
  value: FactValue;
}

/** One minimal set of decisions whose retraction unblocks an observation. */
export type RetractionHint = RetractionFact[];

export function formatValue(value: FactValue): string {
  if (typeof value === "boolean") return value ? "true" : "false";
  return String(value);
}
