"""Runs the CLI on the mini corpus and validates every graph export.

GEXF and GraphML are checked against the bundled XSDs and re-read with
networkx; all three formats must describe the same graph. The JSON export
is also checked against its JSON Schema.

usage: test_exports.py <topicnet> <mini-dir> <schemas-dir>
"""

import json
import math
import subprocess
import sys
import tempfile
from pathlib import Path

SKIP = 77

try:
    import jsonschema
    import networkx as nx
    import xmlschema
except ImportError as exc:
    print(f"skipping: {exc}")
    sys.exit(SKIP)


def run_cli(cli, mini, out):
    subprocess.run(
        [cli, "export", "--corpus", mini / "corpus.jsonl", "--beta", mini / "beta.tsv",
         "--theta", mini / "theta.tsv", "--vocab", mini / "vocab.txt",
         "--stopwords", mini / "stopwords.txt", "--target-density", "0.05",
         "--format", "gexf,graphml,json", "--out", out],
        check=True, capture_output=True)


def normalized(graph, id_of):
    nodes = {}
    for node, data in graph.nodes(data=True):
        nodes[id_of(node)] = (data.get("label", ""), int(data["doc_count"]), int(data["community"]))
    edges = {}
    for a, b, data in graph.edges(data=True):
        x, y = sorted((id_of(a), id_of(b)))
        edges[(x, y)] = float(data["weight"])
    return nodes, edges


def main():
    cli, mini, schemas = sys.argv[1], Path(sys.argv[2]), Path(sys.argv[3])
    with tempfile.TemporaryDirectory() as tmp:
        out = Path(tmp) / "out"
        run_cli(cli, mini, out)

        xmlschema.XMLSchema(schemas / "gexf-1.2-subset.xsd").validate(out / "graph.gexf")
        xmlschema.XMLSchema(schemas / "graphml-1.0-subset.xsd").validate(out / "graph.graphml")

        doc = json.loads((out / "graph.json").read_text())
        jsonschema.validate(doc, json.loads((schemas / "graph_export.schema.json").read_text()))

        from_json = nx.node_link_graph(doc, edges="links")
        reference = normalized(from_json, int)
        gexf = normalized(nx.read_gexf(out / "graph.gexf"), int)
        graphml = normalized(nx.read_graphml(out / "graph.graphml"), lambda n: int(n.lstrip("n")))

        for name, got in (("gexf", gexf), ("graphml", graphml)):
            assert got[0] == reference[0], f"{name} nodes differ from json"
            assert got[1].keys() == reference[1].keys(), f"{name} edges differ from json"
            for key, weight in reference[1].items():
                assert weight == got[1][key], f"{name} weight for {key}: {got[1][key]} != {weight}"
        assert len(reference[0]) == 20
        assert reference[1], "expected at least one edge"
        assert all(0.0 <= w <= 1.0 and not math.isnan(w) for w in reference[1].values())

        broken = (out / "graph.gexf").read_text().replace('target="', 'target="99', 1)
        bad = Path(tmp) / "broken.gexf"
        bad.write_text(broken)
        assert not xmlschema.XMLSchema(schemas / "gexf-1.2-subset.xsd").is_valid(bad)
    print("exports valid and consistent")


if __name__ == "__main__":
    main()
