"""Rendered reports: delimited tables plus matplotlib figures.

``write_report`` drops a small dashboard of the built-in corpus into a
directory: CSV tables (always) and PNG figures next to them.  The CLI
``report`` subcommand is a thin wrapper around it.
"""

from __future__ import annotations

import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .corpus import corpus, run_corpus
from .labels import lattice_json
from .threequbit import indicator_vector

INDICATOR_COLUMNS = ("y", "s1", "s2", "s3", "g1", "g2", "g3", "t", "tau2")


def corpus_rows() -> list[dict]:
    """One summary row per corpus entry."""
    rows = []
    for entry in corpus():
        rows.append({
            "name": entry.name,
            "kind": entry.kind,
            "dims": "x".join(str(d) for d in entry.dims),
            "note": entry.note,
        })
    return rows


def indicator_rows() -> list[dict]:
    """Indicator values of every pure three-qubit corpus entry."""
    rows = []
    for entry in corpus():
        if entry.kind != "pure" or entry.dims != (2, 2, 2):
            continue
        vec = indicator_vector(entry.state).to_dict()
        rows.append({"name": entry.name,
                     **{k: f"{vec[k]:.12g}" for k in INDICATOR_COLUMNS}})
    return rows


def _write_csv(path: Path, rows: list[dict]) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)


def _indicator_figure(path: Path) -> None:
    rows = indicator_rows()
    names = [r["name"] for r in rows]
    x = np.arange(len(names))
    width = 0.8 / len(INDICATOR_COLUMNS)
    fig, ax = plt.subplots(figsize=(11, 4.5))
    for i, col in enumerate(INDICATOR_COLUMNS):
        vals = [float(r[col]) for r in rows]
        ax.bar(x + (i - len(INDICATOR_COLUMNS) / 2 + 0.5) * width, vals,
               width, label=col)
    ax.set_xticks(x)
    ax.set_xticklabels(names, rotation=20, ha="right")
    ax.set_ylabel("indicator value")
    ax.set_title("partial-separability indicators of the pure corpus states")
    ax.legend(ncol=3, fontsize="small")
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _lattice_figure(path: Path, n: int = 3) -> None:
    data = lattice_json(n, pss_extension=True)
    nodes, edges = data["nodes"], data["edges"]
    # layer each node by the longest covering chain from the bottom
    children = {i: [] for i in range(len(nodes))}
    indeg = {i: 0 for i in range(len(nodes))}
    for lo, hi in edges:
        children[lo].append(hi)
        indeg[hi] += 1
    layer = {i: 0 for i in range(len(nodes))}
    order = [i for i in range(len(nodes)) if indeg[i] == 0]
    pending = dict(indeg)
    queue = list(order)
    while queue:
        i = queue.pop(0)
        for j in children[i]:
            layer[j] = max(layer[j], layer[i] + 1)
            pending[j] -= 1
            if pending[j] == 0:
                queue.append(j)
    by_layer = {}
    for i, lv in layer.items():
        by_layer.setdefault(lv, []).append(i)
    pos = {}
    for lv, members in by_layer.items():
        for k, i in enumerate(sorted(members, key=lambda i: nodes[i])):
            pos[i] = (k - (len(members) - 1) / 2, lv)
    fig, ax = plt.subplots(figsize=(7, 5.5))
    for lo, hi in edges:
        (x0, y0), (x1, y1) = pos[lo], pos[hi]
        ax.plot([x0, x1], [y0, y1], color="0.7", lw=1, zorder=1)
    for i, name in enumerate(nodes):
        x, y = pos[i]
        ax.scatter([x], [y], s=700, color="#dce9f5", edgecolor="#4a7aa5", zorder=2)
        ax.annotate(name, (x, y), ha="center", va="center", fontsize=7, zorder=3)
    ax.set_title(f"proper-label poset, n={n} "
                 f"({len(nodes)} labels, {len(data['classes'])} classes)")
    ax.set_axis_off()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def write_report(outdir, run: bool = False, restarts: int = 32, seed: int = 0,
                 jobs: int = 1) -> dict:
    """Write the corpus dashboard; returns {"files": [...], "passed": bool|None}."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    files = []

    _write_csv(outdir / "corpus.csv", corpus_rows())
    files.append("corpus.csv")
    _write_csv(outdir / "indicators.csv", indicator_rows())
    files.append("indicators.csv")
    _indicator_figure(outdir / "indicators.png")
    files.append("indicators.png")
    _lattice_figure(outdir / "label-lattice.png")
    files.append("label-lattice.png")

    passed = None
    if run:
        report = run_corpus(restarts=restarts, seed=seed, jobs=jobs)
        rows = []
        for e in report["entries"]:
            for c in e["checks"]:
                rows.append({"name": e["name"], "check": c["check"],
                             "passed": str(c["passed"]), "detail": c["detail"]})
        _write_csv(outdir / "verification.csv", rows)
        files.append("verification.csv")
        passed = report["passed"]

    return {"files": files, "passed": passed, "outdir": str(outdir)}
