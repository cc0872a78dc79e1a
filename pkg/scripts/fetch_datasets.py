#!/usr/bin/env python3
"""Fetch the small public benchmark graphs and convert them to edge lists.

Downloads the classic dolphins / political-books / college-football GML
archives, extracts the edges, and writes plain ``i j`` edge lists where the
test suite looks for them (tests/data, or $NMFCOMM_DATA_DIR).

The integrity gate is the node/edge counts (62/159, 105/441, 115/613);
the SHA-256 of each converted file is printed so a known-good conversion
can be pinned for later runs. Needs network access; the library itself
never downloads anything.
"""

import hashlib
import io
import os
import re
import sys
import urllib.request
import zipfile
from pathlib import Path

DATA_DIR = Path(
    os.environ.get(
        "NMFCOMM_DATA_DIR",
        Path(__file__).resolve().parent.parent / "tests" / "data",
    )
)

DATASETS = [
    {
        "name": "dolphins",
        "urls": ["https://websites.umich.edu/~mejn/netdata/dolphins.zip"],
        "gml": "dolphins.gml",
        "nodes": 62,
        "edges": 159,
    },
    {
        "name": "polbooks",
        "urls": ["https://websites.umich.edu/~mejn/netdata/polbooks.zip"],
        "gml": "polbooks.gml",
        "nodes": 105,
        "edges": 441,
    },
    {
        "name": "football",
        "urls": ["https://websites.umich.edu/~mejn/netdata/football.zip"],
        "gml": "football.gml",
        "nodes": 115,
        "edges": 613,
    },
]

EDGE_BLOCK = re.compile(
    r"edge\s*\[\s*source\s+(\d+)\s+target\s+(\d+)(?:\s+value\s+([0-9.eE+-]+))?",
)


def gml_to_edge_list(text: str) -> list[tuple[int, int, float]]:
    edges = []
    for m in EDGE_BLOCK.finditer(text):
        i, j = int(m.group(1)), int(m.group(2))
        w = float(m.group(3)) if m.group(3) else 1.0
        if i == j:
            continue  # the loader rejects self-loops; none expected here
        edges.append((i, j, w))
    return edges


def fetch(urls: list[str]) -> bytes:
    last = None
    for url in urls:
        try:
            print(f"  downloading {url}")
            with urllib.request.urlopen(url, timeout=30) as resp:
                return resp.read()
        except Exception as exc:  # try the next mirror
            last = exc
            print(f"  failed: {exc}")
    raise SystemExit(f"could not download any of {urls}: {last}")


def main() -> int:
    if len(sys.argv) > 1:
        print(__doc__)
        return 0 if sys.argv[1] in ("-h", "--help") else 1
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for ds in DATASETS:
        out_path = DATA_DIR / f"{ds['name']}.edges"
        if out_path.exists():
            print(f"{ds['name']}: {out_path} already present, skipping")
            continue
        print(f"{ds['name']}:")
        blob = fetch(ds["urls"])
        with zipfile.ZipFile(io.BytesIO(blob)) as zf:
            with zf.open(ds["gml"]) as fh:
                text = fh.read().decode("utf-8", errors="replace")
        edges = gml_to_edge_list(text)
        nodes = {i for e in edges for i in e[:2]}
        seen = set()
        unique = []
        for i, j, w in edges:
            key = (min(i, j), max(i, j))
            if key in seen:
                print(f"  note: duplicate edge {key} kept for merge-by-sum load")
            seen.add(key)
            unique.append((i, j, w))
        if len(nodes) != ds["nodes"] or len(seen) != ds["edges"]:
            raise SystemExit(
                f"  UNEXPECTED SHAPE: {len(nodes)} nodes / {len(seen)} unique "
                f"edges, wanted {ds['nodes']} / {ds['edges']}; refusing to write"
            )
        body = "".join(
            f"{i} {j}\n" if w == 1.0 else f"{i} {j} {w}\n" for i, j, w in unique
        )
        out_path.write_text(body, encoding="utf-8")
        digest = hashlib.sha256(body.encode()).hexdigest()
        print(f"  wrote {out_path} ({len(nodes)} nodes, {len(seen)} edges)")
        print(f"  sha256 {digest}")
    print("done; rerun `pytest tests/test_acceptance.py -v -s` to gate criterion 5")
    return 0


if __name__ == "__main__":
    sys.exit(main())
