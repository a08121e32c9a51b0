// DOM wiring for the explorer page.  Everything semantic happens in
// session.ts / render.ts; this file only moves values between the DOM and
// the session and swaps rendered HTML into panels.

import { ApiClient, ApiError } from "./api.js";
import {
  renderHistory,
  renderInstanceEditor,
  renderModelOptions,
  renderPrediction,
  renderPrimeImplicants,
  renderResult,
  renderRobustness,
  renderStagedConditions,
} from "./render.js";
import { Session, type HistoryEntry } from "./session.js";
import type { ConditionRequest } from "./types.js";

const base = (document.querySelector("meta[name=cfx-api]") as HTMLMetaElement)?.content
  ?? "http://127.0.0.1:8321";
const api = new ApiClient(base);
const session = new Session(api);

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing element #${id}`);
  return el as T;
};

function showError(err: unknown): void {
  const box = $("error");
  if (err instanceof ApiError) {
    const hint =
      err.status === 422
        ? " — the staged conditions make the request infeasible; relax one and retry"
        : err.status === 413
          ? " — the model is too large for an exact answer"
          : "";
    box.textContent = `${err.message}${hint}`;
  } else {
    box.textContent = String(err);
  }
  box.hidden = false;
}

function clearError(): void {
  $("error").hidden = true;
}

function refreshEditor(): void {
  $("instance-editor").innerHTML = renderInstanceEditor(session.features, session.factual);
  for (const input of $("instance-editor").querySelectorAll<HTMLElement>("[data-feature]")) {
    input.addEventListener("change", (event: Event) => {
      const el = event.target as HTMLInputElement | HTMLSelectElement;
      const feature = el.dataset.feature!;
      const decl = session.features.find((f) => f.name === feature);
      session.setFactual(feature, decl?.kind === "continuous" ? Number(el.value) : el.value);
      $("prediction").innerHTML = renderPrediction(null);
    });
  }
  const keepBox = $("keep-toggles");
  keepBox.innerHTML = session.features
    .map(
      (f) =>
        `<label><input type="checkbox" data-keep="${f.name}"` +
        `${session.keep.has(f.name) ? " checked" : ""}> keep ${f.name}</label>`,
    )
    .join(" ");
  for (const box of keepBox.querySelectorAll<HTMLInputElement>("[data-keep]")) {
    box.addEventListener("change", () => session.toggleKeep(box.dataset.keep!));
  }
  const conditionFeature = $<HTMLSelectElement>("condition-feature");
  conditionFeature.innerHTML = session.features
    .map((f) => `<option value="${f.name}">${f.name}</option>`)
    .join("");
}

function refreshConditions(): void {
  $("staged-conditions").innerHTML = renderStagedConditions(session.conditions);
  for (const btn of $("staged-conditions").querySelectorAll<HTMLButtonElement>("[data-remove-condition]")) {
    btn.addEventListener("click", () => {
      session.removeCondition(Number(btn.dataset.removeCondition));
      refreshConditions();
    });
  }
}

function refreshHistory(): void {
  $("history").innerHTML = renderHistory(session.history);
  for (const btn of $("history").querySelectorAll<HTMLButtonElement>("[data-rerun]")) {
    btn.addEventListener("click", async () => {
      clearError();
      try {
        const { entry, identical } = await session.rerun(Number(btn.dataset.rerun));
        showEntry(entry, identical ? "re-run reproduced the stored bytes exactly" : "re-run DIFFERED from stored bytes");
      } catch (err) {
        showError(err);
      }
      refreshHistory();
    });
  }
}

function showEntry(entry: HistoryEntry, note = ""): void {
  const staged = (entry.payload.request as { conditions?: ConditionRequest[] }).conditions ?? [];
  let html: string;
  if (entry.kind === "pi") {
    const instance = (entry.payload.request as { instance: Record<string, number | string> }).instance;
    html = renderPrimeImplicants(entry.payload, instance);
  } else if (entry.kind === "robustness") {
    html = renderRobustness(entry.payload, staged);
  } else {
    html = renderResult(entry.payload, staged);
  }
  $("result").innerHTML = html + (note ? `<p class="note">${note}</p>` : "");
}

async function main(): Promise<void> {
  const picker = $<HTMLSelectElement>("model-picker");
  try {
    const models = await session.loadModels();
    picker.innerHTML = renderModelOptions(models);
    if (models.length) {
      await session.selectModel(models[0]!.id);
      refreshEditor();
    }
  } catch (err) {
    showError(err);
  }

  picker.addEventListener("change", async () => {
    clearError();
    await session.selectModel(picker.value);
    refreshEditor();
    refreshConditions();
    $("prediction").innerHTML = renderPrediction(null);
  });

  $("predict").addEventListener("click", async () => {
    clearError();
    try {
      $("prediction").innerHTML = renderPrediction(await session.predict());
    } catch (err) {
      showError(err);
    }
  });

  $("add-condition").addEventListener("click", () => {
    clearError();
    const feature = $<HTMLSelectElement>("condition-feature").value;
    const op = $<HTMLSelectElement>("condition-op").value as ConditionRequest["op"];
    const valueText = $<HTMLInputElement>("condition-value").value;
    const hiText = $<HTMLInputElement>("condition-hi").value;
    const decl = session.features.find((f) => f.name === feature);
    const condition: ConditionRequest = { feature, op };
    if (op === "interval") {
      condition.lo = valueText === "" ? null : Number(valueText);
      condition.hi = hiText === "" ? null : Number(hiText);
    } else if (decl?.kind === "continuous" && op !== "eq" && op !== "ne") {
      condition.value = Number(valueText);
    } else {
      condition.value = decl?.kind === "continuous" ? Number(valueText) : valueText;
    }
    session.stageCondition(condition);
    refreshConditions();
  });

  $("explain").addEventListener("click", async () => {
    clearError();
    const k = Number($<HTMLInputElement>("k").value) || 1;
    const scheme = $<HTMLSelectElement>("scheme").value as "uniform" | "mad" | "std";
    const target = $<HTMLSelectElement>("target").value;
    try {
      const entry = await session.explain({
        k,
        scheme,
        target: target === "auto" ? "auto" : (Number(target) as 0 | 1),
      });
      showEntry(entry);
    } catch (err) {
      showError(err);
    }
    refreshHistory();
  });

  $("robustness").addEventListener("click", async () => {
    clearError();
    try {
      showEntry(await session.robustness());
    } catch (err) {
      showError(err);
    }
    refreshHistory();
  });

  $("pi").addEventListener("click", async () => {
    clearError();
    try {
      showEntry(await session.primeImplicants());
    } catch (err) {
      showError(err);
    }
    refreshHistory();
  });
}

main().catch(showError);
