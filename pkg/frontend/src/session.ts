// Session state and the actions behind every explorer control.
//
// All semantics live server-side: each action issues exactly one documented
// API call and appends the (request, response) pair to an append-only
// history, so any entry can later be replayed and compared byte for byte.

import { ApiClient, WireRequest } from "./api.js";
import type {
  ConditionRequest,
  ExplainRequestOptions,
  ExplanationFile,
  FeatureDecl,
  InstanceValues,
  ModelMeta,
} from "./types.js";

export interface HistoryEntry {
  index: number;
  kind: "explain" | "pi" | "robustness";
  label: string;
  request: WireRequest;
  raw: string;
  payload: ExplanationFile;
}

export class Session {
  models: ModelMeta[] = [];
  modelId: string | null = null;
  features: FeatureDecl[] = [];
  factual: InstanceValues = {};
  prediction: 0 | 1 | null = null;
  conditions: ConditionRequest[] = [];
  keep = new Set<string>();
  readonly history: HistoryEntry[] = [];

  constructor(private api: ApiClient) {}

  async loadModels(): Promise<ModelMeta[]> {
    this.models = (await this.api.listModels()).payload.models;
    return this.models;
  }

  async selectModel(modelId: string): Promise<FeatureDecl[]> {
    const artifact = (await this.api.getModel(modelId)).payload;
    this.modelId = modelId;
    this.features = artifact.features;
    this.factual = {};
    for (const f of artifact.features) {
      this.factual[f.name] = f.kind === "continuous" ? 0 : (f.categories?.[0] ?? "");
    }
    this.prediction = null;
    this.conditions = [];
    this.keep.clear();
    return this.features;
  }

  setFactual(feature: string, value: number | string): void {
    this.factual[feature] = value;
    this.prediction = null;
  }

  async predict(): Promise<0 | 1> {
    this.prediction = (await this.api.predict(this.requireModel(), this.factual)).payload.class;
    return this.prediction;
  }

  /** Conditions are staged locally and sent atomically with each explain. */
  stageCondition(condition: ConditionRequest): void {
    this.conditions.push(condition);
  }

  removeCondition(index: number): void {
    this.conditions.splice(index, 1);
  }

  toggleKeep(feature: string): boolean {
    if (this.keep.has(feature)) {
      this.keep.delete(feature);
      return false;
    }
    this.keep.add(feature);
    return true;
  }

  async explain(options: ExplainRequestOptions = {}): Promise<HistoryEntry> {
    const response = await this.api.counterfactual(
      this.requireModel(),
      this.factual,
      [...this.conditions],
      options,
    );
    const label =
      this.conditions.length === 0
        ? "explain"
        : `explain (${this.conditions.length} condition${this.conditions.length > 1 ? "s" : ""})`;
    return this.record("explain", label, response);
  }

  async robustness(): Promise<HistoryEntry> {
    const response = await this.api.robustness(this.requireModel(), this.factual);
    return this.record("robustness", "robustness", response);
  }

  async primeImplicants(): Promise<HistoryEntry> {
    const keep = [...this.keep].sort();
    const response = await this.api.primeImplicants(this.requireModel(), this.factual, keep);
    const label = keep.length ? `prime implicants (keep ${keep.join(", ")})` : "prime implicants";
    return this.record("pi", label, response);
  }

  /** Replay a history entry's stored request; returns whether the raw
   * response bytes matched the stored ones (they must, the service is
   * deterministic). */
  async rerun(index: number): Promise<{ entry: HistoryEntry; identical: boolean }> {
    const source = this.history[index];
    if (!source) {
      throw new Error(`no history entry ${index}`);
    }
    const response = await this.api.replay(source.request);
    const entry = this.record(
      source.kind,
      `re-run of #${index}`,
      response as { payload: ExplanationFile; raw: string; request: WireRequest },
    );
    return { entry, identical: response.raw === source.raw };
  }

  private record(
    kind: HistoryEntry["kind"],
    label: string,
    response: { payload: ExplanationFile; raw: string; request: WireRequest },
  ): HistoryEntry {
    const entry: HistoryEntry = {
      index: this.history.length,
      kind,
      label,
      request: response.request,
      raw: response.raw,
      payload: response.payload,
    };
    this.history.push(entry);
    return entry;
  }

  private requireModel(): string {
    if (!this.modelId) {
      throw new Error("select a model first");
    }
    return this.modelId;
  }
}
