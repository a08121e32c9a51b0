// Wire types mirroring the cfx HTTP API (see the repository README).

export type FeatureKind = "continuous" | "categorical";

export interface FeatureDecl {
  name: string;
  kind: FeatureKind;
  categories?: string[];
}

export interface ModelMeta {
  id: string;
  type: string;
  created_at: string;
}

export interface ModelArtifact {
  schema: string;
  type: string;
  features: FeatureDecl[];
}

export type InstanceValues = Record<string, number | string>;

/** A staged diversity condition, in request JSON form. */
export interface ConditionRequest {
  feature: string;
  op: "eq" | "ne" | "gt" | "ge" | "lt" | "le" | "interval";
  value?: number | string;
  lo?: number | null;
  hi?: number | null;
  lo_open?: boolean;
  hi_open?: boolean;
}

/** A decoded per-feature region in a result document. */
export interface ResultCondition {
  feature: string;
  op: "unchanged" | "eq" | "gt" | "ge" | "lt" | "le" | "in_interval";
  changed: boolean;
  factual: number | string;
  value?: number | string;
  lo?: number;
  hi?: number;
  lo_open?: boolean;
  hi_open?: boolean;
}

export interface ValidityCheck {
  samples: number;
  passed: boolean;
  seed: number;
}

export interface AlternativeResult {
  objective: number;
  objective_exact: [number, number];
  conditions: ResultCondition[];
  assignment: Record<string, 0 | 1>;
  validity_check: ValidityCheck;
}

export interface PrimeImplicantBlock {
  kept: string[];
  changed: string[];
  verified: boolean;
  verification_skipped: boolean;
  max_changed: number;
}

export interface ExplanationFile {
  schema: string;
  kind: "explain" | "diverse" | "robustness" | "pi";
  request: Record<string, unknown>;
  model_type: string;
  prediction: 0 | 1;
  target_class: 0 | 1;
  objective?: number;
  objective_exact?: [number, number];
  conditions?: ResultCondition[];
  assignment?: Record<string, 0 | 1>;
  alternatives?: AlternativeResult[];
  validity_check?: ValidityCheck;
  robustness?: number;
  prime_implicants?: PrimeImplicantBlock;
  weights?: Record<string, [number, number]>;
  solver_stats?: Record<string, unknown>;
}

export interface ExplainRequestOptions {
  scheme?: "uniform" | "mad" | "std";
  target?: "auto" | 0 | 1;
  k?: number;
  seed?: number;
  dataset_id?: string;
}

/** The slice of a history entry the timeline renderer needs. */
export interface HistoryLike {
  index: number;
  label: string;
}
