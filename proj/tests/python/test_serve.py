"""Starts `topicnet serve` on a free port, exercises the routes and checks
that SIGTERM shuts it down cleanly.

usage: test_serve.py <topicnet> <mini-dir> <schemas-dir>
"""

import json
import re
import signal
import subprocess
import sys
import time
import urllib.error
import urllib.request
from pathlib import Path

SKIP = 77

try:
    import jsonschema
except ImportError as exc:
    print(f"skipping: {exc}")
    sys.exit(SKIP)


def request(base, path, body=None):
    data = None if body is None else json.dumps(body).encode()
    req = urllib.request.Request(base + path, data=data, method="GET" if body is None else "POST",
                                 headers={"Content-Type": "application/json"})
    try:
        with urllib.request.urlopen(req, timeout=30) as resp:
            return resp.status, json.loads(resp.read())
    except urllib.error.HTTPError as err:
        return err.code, json.loads(err.read())


def main():
    cli, mini, schemas = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    payload_schema = json.loads((schemas / "graph_payload.schema.json").read_text())
    proc = subprocess.Popen(
        [cli, "serve", "--corpus", mini / "corpus.jsonl", "--beta", mini / "beta.tsv",
         "--theta", mini / "theta.tsv", "--vocab", mini / "vocab.txt",
         "--stopwords", mini / "stopwords.txt", "--serve-addr", "127.0.0.1:0"],
        stderr=subprocess.PIPE, text=True)
    try:
        port = None
        deadline = time.time() + 60
        while port is None and time.time() < deadline:
            line = proc.stderr.readline()
            if not line:
                break
            match = re.search(r"listening on [^:]+:(\d+)", line)
            if match:
                port = int(match.group(1))
        assert port, "server did not report a port"
        base = f"http://127.0.0.1:{port}"

        status, health = request(base, "/health")
        assert status == 200 and health["status"] == "ok" and health["schema_version"] == 1

        status, graph = request(base, "/graph")
        assert status == 200
        jsonschema.validate(graph, payload_schema)
        assert len(graph["nodes"]) == 20
        assert all(node["label"] for node in graph["nodes"])
        _, again = request(base, "/graph")
        assert again == graph, "GET /graph is not idempotent"

        status, filt = request(base, "/filter", {"facets": {"year": "2001"}})
        assert status == 200 and 0 < filt["doc_count"] < 500
        status, relabel = request(base, "/relabel", {"filter_id": filt["filter_id"]})
        assert status == 200 and set(relabel["labels"]) == {str(t) for t in range(20)}

        _, filtered_graph = request(base, "/graph")
        jsonschema.validate(filtered_graph, payload_schema)
        assert filtered_graph["graph"]["filter_id"] == filt["filter_id"]
        assert filtered_graph["links"] == graph["links"]

        status, docs = request(base, f"/topics/0/documents?filter_id={filt['filter_id']}&page_size=2")
        assert status == 200 and len(docs["documents"]) <= 2

        assert request(base, "/relabel", {"filter_id": "0" * 16})[0] == 404
        assert request(base, "/nowhere")[0] == 404
    finally:
        proc.send_signal(signal.SIGTERM)
        code = proc.wait(timeout=30)
    assert code == 0, f"serve exited with {code}"
    print("serve ok")


if __name__ == "__main__":
    main()
