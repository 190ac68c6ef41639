#!/usr/bin/env python3
"""Download the citation and blog networks and convert them to <name>.edges / <name>.labels."""

import argparse
import io
import json
import pathlib
import sys
import tarfile
import urllib.request
import zipfile

import networkx as nx

HERE = pathlib.Path(__file__).resolve().parent
MANIFEST = HERE.parent / "data" / "MANIFEST.json"


def download(url):
    with urllib.request.urlopen(url, timeout=60) as resp:
        return resp.read()


def convert_linqs(name, blob, out):
    # <id> <features...> <label> in .content, "<cited> <citing>" in .cites
    with tarfile.open(fileobj=io.BytesIO(blob)) as tar:
        members = {pathlib.Path(m.name).name: m for m in tar.getmembers()}
        content = tar.extractfile(members[f"{name}.content"]).read().decode()
        cites = tar.extractfile(members[f"{name}.cites"]).read().decode()
    with open(out / f"{name}.labels", "w") as f:
        for line in content.splitlines():
            parts = line.split()
            if parts:
                f.write(f"{parts[0]} {parts[-1]}\n")
    with open(out / f"{name}.edges", "w") as f:
        for line in cites.splitlines():
            parts = line.split()
            if len(parts) == 2:
                f.write(f"{parts[0]} {parts[1]}\n")


def convert_polblogs(blob, out):
    with zipfile.ZipFile(io.BytesIO(blob)) as z:
        text = z.read("polblogs.gml").decode()
    g = nx.parse_gml(text, label="id")
    # keep the largest connected component, as is customary for this graph
    g = nx.Graph(g)
    g.remove_edges_from(nx.selfloop_edges(g))
    g = g.subgraph(max(nx.connected_components(g), key=len))
    with open(out / "polblogs.labels", "w") as f:
        for v, data in g.nodes(data=True):
            f.write(f"{v} {data['value']}\n")
    with open(out / "polblogs.edges", "w") as f:
        for u, v in g.edges():
            f.write(f"{u} {v}\n")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", type=pathlib.Path, default=MANIFEST.parent)
    parser.add_argument("names", nargs="*", help="subset of datasets to fetch")
    args = parser.parse_args()
    manifest = json.loads(MANIFEST.read_text())
    args.out.mkdir(parents=True, exist_ok=True)
    failed = 0
    for entry in manifest["datasets"]:
        name = entry["name"]
        if args.names and name not in args.names:
            continue
        try:
            blob = download(entry["source"])
            if name == "polblogs":
                convert_polblogs(blob, args.out)
            else:
                convert_linqs(name, blob, args.out)
            print(f"{name}: written to {args.out}")
        except Exception as exc:  # report and continue with the others
            failed += 1
            print(f"{name}: {exc}", file=sys.stderr)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
