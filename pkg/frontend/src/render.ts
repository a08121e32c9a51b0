// Pure rendering: HTML strings as a function of response documents only.
// The panels never show anything the service did not return.

import type {
  ConditionRequest,
  ExplanationFile,
  FeatureDecl,
  HistoryLike,
  InstanceValues,
  ResultCondition,
} from "./types.js";

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

function fmt(value: number | string | undefined): string {
  if (value === undefined) return "";
  return typeof value === "number" ? `${value}` : value;
}

/** Text of one decoded region, straight from the response fields. */
export function conditionText(cond: ResultCondition): string {
  switch (cond.op) {
    case "unchanged":
      return fmt(cond.factual);
    case "eq":
      return `= ${fmt(cond.value)}`;
    case "gt":
      return `> ${fmt(cond.value)}`;
    case "ge":
      return `>= ${fmt(cond.value)}`;
    case "lt":
      return `< ${fmt(cond.value)}`;
    case "le":
      return `<= ${fmt(cond.value)}`;
    case "in_interval":
      return `in ${cond.lo_open ? "(" : "["}${fmt(cond.lo)}, ${fmt(cond.hi)}${cond.hi_open ? ")" : "]"}`;
  }
}

/** Text of one staged diversity condition (shown in parentheses). */
export function stagedConditionText(cond: ConditionRequest): string {
  switch (cond.op) {
    case "eq":
      return `=${fmt(cond.value)}`;
    case "ne":
      return `≠${fmt(cond.value)}`;
    case "gt":
      return `>${fmt(cond.value)}`;
    case "ge":
      return `>=${fmt(cond.value)}`;
    case "lt":
      return `<${fmt(cond.value)}`;
    case "le":
      return `<=${fmt(cond.value)}`;
    case "interval":
      return `${fmt(cond.lo ?? "")}..${fmt(cond.hi ?? "")}`;
  }
}

/** One table cell: changed features bold, staged conditions parenthesized. */
export function conditionCell(cond: ResultCondition, staged?: ConditionRequest): string {
  const body = escapeHtml(conditionText(cond));
  const core = cond.changed ? `<strong>${body}</strong>` : body;
  if (staged) {
    return `<span class="staged">(<u>${escapeHtml(stagedConditionText(staged))}</u>)</span> ${core}`;
  }
  return core;
}

export function renderPrediction(prediction: 0 | 1 | null): string {
  if (prediction === null) return `<em>not evaluated</em>`;
  return `class <strong>${prediction}</strong>`;
}

function resultRow(
  label: string,
  conditions: ResultCondition[],
  staged: ConditionRequest[],
  outcome: string,
): string {
  const stagedBy = new Map(staged.map((c) => [c.feature, c]));
  const cells = conditions
    .map((c) => `<td>${conditionCell(c, stagedBy.get(c.feature))}</td>`)
    .join("");
  return `<tr><th>${escapeHtml(label)}</th>${cells}<td class="outcome">${escapeHtml(outcome)}</td></tr>`;
}

/** The factual / counterfactual(s) table for explain results. */
export function renderResult(payload: ExplanationFile, staged: ConditionRequest[] = []): string {
  const conditions = payload.conditions ?? [];
  const header = conditions.map((c) => `<th>${escapeHtml(c.feature)}</th>`).join("");
  const factualRow = conditions
    .map((c) => `<td>${escapeHtml(fmt(c.factual))}</td>`)
    .join("");
  const rows: string[] = [
    `<tr><th></th>${header}<th>outcome</th></tr>`,
    `<tr><th>factual</th>${factualRow}<td class="outcome">${payload.prediction}</td></tr>`,
    resultRow(
      `counterfactual (cost ${fmt(payload.objective)})`,
      conditions,
      staged,
      `${payload.target_class}`,
    ),
  ];
  for (const [i, alt] of (payload.alternatives ?? []).entries()) {
    rows.push(
      resultRow(`alternative ${i + 2} (cost ${fmt(alt.objective)})`, alt.conditions, staged, `${payload.target_class}`),
    );
  }
  const validity = payload.validity_check
    ? `<p class="validity">region check: ${payload.validity_check.samples} samples, ` +
      `${payload.validity_check.passed ? "all" : "NOT all"} classified as ${payload.target_class}</p>`
    : "";
  return `<table>${rows.join("")}</table>${validity}`;
}

/** Table-3 style prime implicant row: a check mark per kept feature. */
export function renderPrimeImplicants(payload: ExplanationFile, factual: InstanceValues): string {
  const pi = payload.prime_implicants;
  if (!pi) return "";
  const features = Object.keys(factual);
  const header = features.map((f) => `<th>${escapeHtml(f)}</th>`).join("");
  const factualCells = features.map((f) => `<td>${escapeHtml(fmt(factual[f]))}</td>`).join("");
  const kept = new Set(pi.kept);
  const markCells = features
    .map((f) => `<td class="pi">${kept.has(f) ? "✓" : ""}</td>`)
    .join("");
  const verification = pi.verification_skipped
    ? "verification skipped (too large)"
    : pi.verified
      ? "universally verified"
      : "NOT universal — a counterexample exists";
  return (
    `<table>` +
    `<tr><th></th>${header}<th>outcome</th></tr>` +
    `<tr><th>factual</th>${factualCells}<td class="outcome">${payload.prediction}</td></tr>` +
    `<tr><th>prime implicants</th>${markCells}<td class="outcome">${payload.prediction}</td></tr>` +
    `</table>` +
    `<p class="validity">${pi.kept.length} kept / ${pi.changed.length} changeable — ${verification}</p>`
  );
}

export function renderRobustness(payload: ExplanationFile, staged: ConditionRequest[] = []): string {
  const headline = `<p>robustness: <strong>${fmt(payload.robustness)}</strong> indicator flip(s)</p>`;
  return headline + renderResult(payload, staged);
}

export function renderHistory(entries: HistoryLike[]): string {
  if (!entries.length) return `<em>no requests yet</em>`;
  const items = entries
    .map(
      (e) =>
        `<li>#${e.index} ${escapeHtml(e.label)} ` +
        `<button data-rerun="${e.index}">re-run</button></li>`,
    )
    .join("");
  return `<ol class="history">${items}</ol>`;
}

export function renderModelOptions(models: { id: string; type: string }[]): string {
  return models
    .map((m) => `<option value="${m.id}">${escapeHtml(m.type)} ${m.id.slice(0, 12)}…</option>`)
    .join("");
}

export function renderInstanceEditor(features: FeatureDecl[], factual: InstanceValues): string {
  const rows = features.map((f) => {
    const value = factual[f.name];
    const input =
      f.kind === "continuous"
        ? `<input type="number" step="any" data-feature="${escapeHtml(f.name)}" value="${fmt(value)}">`
        : `<select data-feature="${escapeHtml(f.name)}">` +
          (f.categories ?? [])
            .map(
              (c) =>
                `<option value="${escapeHtml(c)}"${c === value ? " selected" : ""}>${escapeHtml(c)}</option>`,
            )
            .join("") +
          `</select>`;
    return `<label>${escapeHtml(f.name)} ${input}</label>`;
  });
  return rows.join("\n");
}

export function renderStagedConditions(conditions: ConditionRequest[]): string {
  if (!conditions.length) return `<em>none</em>`;
  return conditions
    .map(
      (c, i) =>
        `<span class="chip">${escapeHtml(c.feature)} ${escapeHtml(stagedConditionText(c))}` +
        ` <button data-remove-condition="${i}">×</button></span>`,
    )
    .join(" ");
}
