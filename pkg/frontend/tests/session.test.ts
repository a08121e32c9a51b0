// The scripted session contract: load model -> explain -> add interval
// condition -> re-explain -> prime implicants with a keep toggle.  The
// session must issue exactly the documented endpoint calls, keep history
// append-only, and reproduce stored bytes on re-run.

import assert from "node:assert/strict";
import { test } from "node:test";

import { ApiClient, type FetchLike } from "../src/api.js";
import { Session } from "../src/session.js";
import { ARTIFACT, EXPLAIN_RESPONSE, MODEL_ID, PI_RESPONSE, STEERED_RESPONSE } from "./fixtures.js";

interface RecordedCall {
  method: string;
  path: string;
  body?: string;
}

function fakeService(): { fetch: FetchLike; calls: RecordedCall[] } {
  const calls: RecordedCall[] = [];
  const fetchImpl: FetchLike = async (url, init) => {
    const path = url.replace(/^https?:\/\/[^/]+/, "");
    const method = init?.method ?? "GET";
    const body = typeof init?.body === "string" ? init.body : undefined;
    calls.push(body === undefined ? { method, path } : { method, path, body });

    const respond = (payload: unknown) =>
      new Response(JSON.stringify(payload), { status: 200 });

    if (method === "GET" && path === "/v1/models") {
      return respond({ models: [{ id: MODEL_ID, type: "decision_tree", created_at: "t" }] });
    }
    if (method === "GET" && path === `/v1/models/${MODEL_ID}`) {
      return respond(ARTIFACT);
    }
    if (method === "POST" && path === `/v1/models/${MODEL_ID}/predict`) {
      return respond({ class: 1, model_id: MODEL_ID });
    }
    if (method === "POST" && path === `/v1/models/${MODEL_ID}/counterfactual`) {
      const request = JSON.parse(body ?? "{}") as { conditions?: unknown[] };
      // deterministic: the same body always gets the same bytes
      return respond(request.conditions?.length ? STEERED_RESPONSE : EXPLAIN_RESPONSE);
    }
    if (method === "POST" && path === `/v1/models/${MODEL_ID}/prime-implicants`) {
      return respond(PI_RESPONSE);
    }
    return new Response(JSON.stringify({ error: "no such route" }), { status: 404 });
  };
  return { fetch: fetchImpl, calls };
}

test("scripted session issues exactly the documented endpoint calls", async () => {
  const { fetch: fetchImpl, calls } = fakeService();
  const session = new Session(new ApiClient("http://example.test", fetchImpl));

  await session.loadModels();
  await session.selectModel(MODEL_ID);
  session.setFactual("X1", 5);
  session.setFactual("X2", 30);
  await session.predict();
  await session.explain();
  session.stageCondition({ feature: "X2", op: "interval", lo: null, hi: 50, lo_open: false, hi_open: false });
  await session.explain();
  session.toggleKeep("X1");
  await session.primeImplicants();

  assert.deepEqual(
    calls.map((c) => `${c.method} ${c.path}`),
    [
      `GET /v1/models`,
      `GET /v1/models/${MODEL_ID}`,
      `POST /v1/models/${MODEL_ID}/predict`,
      `POST /v1/models/${MODEL_ID}/counterfactual`,
      `POST /v1/models/${MODEL_ID}/counterfactual`,
      `POST /v1/models/${MODEL_ID}/prime-implicants`,
    ],
  );

  const first = JSON.parse(calls[3]!.body!) as Record<string, unknown>;
  assert.deepEqual(first.conditions, []);
  const second = JSON.parse(calls[4]!.body!) as Record<string, unknown>;
  assert.deepEqual(second.conditions, [
    { feature: "X2", op: "interval", lo: null, hi: 50, lo_open: false, hi_open: false },
  ]);
  const pi = JSON.parse(calls[5]!.body!) as Record<string, unknown>;
  assert.deepEqual(pi.keep, ["X1"]);
});

test("history is append-only and re-runs reproduce stored bytes", async () => {
  const { fetch: fetchImpl } = fakeService();
  const session = new Session(new ApiClient("http://example.test", fetchImpl));
  await session.loadModels();
  await session.selectModel(MODEL_ID);
  session.setFactual("X1", 5);
  session.setFactual("X2", 30);

  const first = await session.explain();
  session.stageCondition({ feature: "X2", op: "le", value: 50 });
  const second = await session.explain();
  assert.equal(session.history.length, 2);
  assert.deepEqual(
    session.history.map((e) => e.index),
    [0, 1],
  );

  const snapshot = JSON.stringify(session.history.slice(0, 2));
  const { entry, identical } = await session.rerun(0);
  assert.equal(identical, true);
  assert.equal(entry.raw, first.raw);
  assert.equal(entry.index, 2);
  // earlier entries untouched by the re-run
  assert.equal(JSON.stringify(session.history.slice(0, 2)), snapshot);
  assert.notEqual(second.raw, first.raw);
});

test("condition edits are staged locally, not sent eagerly", async () => {
  const { fetch: fetchImpl, calls } = fakeService();
  const session = new Session(new ApiClient("http://example.test", fetchImpl));
  await session.loadModels();
  await session.selectModel(MODEL_ID);
  const before = calls.length;
  session.stageCondition({ feature: "X2", op: "gt", value: 25 });
  session.stageCondition({ feature: "X1", op: "le", value: 10 });
  session.removeCondition(1);
  assert.equal(calls.length, before, "staging conditions must not call the service");
  await session.explain();
  const request = JSON.parse(calls.at(-1)!.body!) as { conditions: unknown[] };
  assert.deepEqual(request.conditions, [{ feature: "X2", op: "gt", value: 25 }]);
});
