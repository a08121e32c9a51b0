// Canned wire documents shaped exactly like the cfx service responses.

import type { ExplanationFile, ModelArtifact } from "../src/types.js";

export const MODEL_ID = "a".repeat(64);

export const ARTIFACT: ModelArtifact = {
  schema: "cfx-model/1",
  type: "decision_tree",
  features: [
    { name: "X1", kind: "continuous" },
    { name: "X2", kind: "continuous" },
  ],
};

export const EXPLAIN_RESPONSE: ExplanationFile = {
  schema: "cfx-explanation/1",
  kind: "explain",
  request: { kind: "explain", instance: { X1: 5, X2: 30 }, conditions: [], k: 1, scheme: "uniform", seed: 0, target: "auto" },
  model_type: "decision_tree",
  prediction: 1,
  target_class: 0,
  objective: 1.0,
  objective_exact: [1, 1],
  conditions: [
    { feature: "X1", op: "unchanged", changed: false, factual: 5, value: 5 },
    { feature: "X2", op: "gt", changed: true, factual: 30, value: 50 },
  ],
  assignment: { "0": 1, "1": 0, "2": 0 },
  alternatives: [],
  validity_check: { samples: 100, passed: true, seed: 0 },
  weights: { "X1<=10": [1, 1], "X2<=20": [1, 1], "X2<=50": [1, 1] },
  solver_stats: { status: "optimal", nodes: 2 },
};

export const STEERED_RESPONSE: ExplanationFile = {
  ...EXPLAIN_RESPONSE,
  request: {
    ...EXPLAIN_RESPONSE.request,
    conditions: [{ feature: "X2", op: "interval", lo: null, hi: 50, lo_open: false, hi_open: false }],
  },
  conditions: [
    { feature: "X1", op: "gt", changed: true, factual: 5, value: 10 },
    { feature: "X2", op: "unchanged", changed: false, factual: 30, value: 30 },
  ],
};

export const PI_RESPONSE: ExplanationFile = {
  schema: "cfx-explanation/1",
  kind: "pi",
  request: { kind: "pi", instance: { X1: 5, X2: 30 }, keep: ["X1"], seed: 0 },
  model_type: "decision_tree",
  prediction: 1,
  target_class: 1,
  objective: 1.0,
  objective_exact: [1, 1],
  assignment: { "0": 1, "1": 1, "2": 1 },
  prime_implicants: {
    kept: ["X1", "X2"],
    changed: [],
    verified: true,
    verification_skipped: false,
    max_changed: 0,
  },
  solver_stats: { status: "optimal", nodes: 4 },
};
