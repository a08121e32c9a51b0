"""A what-if session against the HTTP service, exactly as the browser
explorer drives it: upload a model, predict, explain, tighten a condition,
re-explain, then ask for conditional prime implicants.
"""

import json
import os
import sys
import tempfile
import threading
import urllib.request

from cfx.interface.service import make_server

HERE = os.path.dirname(os.path.abspath(__file__))
FIXTURES = os.path.join(HERE, "..", "fixtures")


def call(method, url, payload=None, raw=None):
    data = raw if raw is not None else (json.dumps(payload).encode() if payload is not None else None)
    req = urllib.request.Request(url, method=method, data=data)
    if data is not None:
        req.add_header("Content-Type", "application/json")
    with urllib.request.urlopen(req) as resp:
        return json.loads(resp.read())


def main():
    model_path = os.path.join(FIXTURES, "screening_tree.json")
    if not os.path.exists(model_path):
        sys.exit("run demos/00_build_fixtures.py first")

    with tempfile.TemporaryDirectory() as store_dir:
        server = make_server(0, store_dir)
        base = f"http://127.0.0.1:{server.server_address[1]}"
        threading.Thread(target=server.serve_forever, daemon=True).start()
        try:
            print("health:", call("GET", f"{base}/v1/health"))

            with open(model_path, "rb") as fh:
                meta = call("POST", f"{base}/v1/models", raw=fh.read())
            model_id = meta["id"]
            print("uploaded screening tree:", model_id[:12], "...")

            factual = {"sex": "Male", "age": 33, "juvenile_felonies": 0, "prior_crimes": 2}
            pred = call("POST", f"{base}/v1/models/{model_id}/predict", {"instance": factual})
            print("prediction:", pred["class"])

            first = call(
                "POST", f"{base}/v1/models/{model_id}/counterfactual",
                {"instance": factual, "scheme": "uniform"},
            )
            print("\nunconstrained counterfactual (objective", first["objective"], "):")
            for cond in first["conditions"]:
                if cond["changed"]:
                    print("   ", cond["feature"], cond["op"], cond.get("value", ""))

            second = call(
                "POST", f"{base}/v1/models/{model_id}/counterfactual",
                {"instance": factual, "scheme": "uniform",
                 "conditions": [{"feature": "juvenile_felonies", "op": "eq", "value": 0},
                                {"feature": "prior_crimes", "op": "eq", "value": 2}]},
            )
            print("\nwith the record pinned clean (objective", second["objective"], "):")
            for cond in second["conditions"]:
                if cond["changed"]:
                    print("   ", cond["feature"], cond["op"], cond.get("value", ""))

            pi = call(
                "POST", f"{base}/v1/models/{model_id}/prime-implicants",
                {"instance": factual, "keep": ["sex"]},
            )
            print("\nconditional prime implicants (sex kept):", pi["prime_implicants"]["kept"])
            print("verified:", pi["prime_implicants"]["verified"])
        finally:
            server.shutdown()
            server.server_close()


if __name__ == "__main__":
    main()
