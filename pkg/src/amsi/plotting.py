"""Figure rendering for the bench report path.

Renders the benchmark table to PNG files next to the delimited output:
wall time per pattern length and operation counts per pattern length,
one series per engine.
"""

from __future__ import annotations

from collections import defaultdict
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402


def _series(rows, key):
    by_engine: dict[str, dict[int, list[float]]] = defaultdict(lambda: defaultdict(list))
    for row in rows:
        by_engine[row["engine"]][int(row["m"])].append(float(row[key]))
    out = {}
    for engine, per_m in by_engine.items():
        ms = sorted(per_m)
        out[engine] = (ms, [sum(per_m[m]) / len(per_m[m]) for m in ms])
    return out


def render_bench_figures(rows, outdir) -> list[Path]:
    """Write time-vs-m and operations-vs-m figures; returns the paths."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []

    fig, ax = plt.subplots(figsize=(6, 4))
    for engine, (ms, ys) in sorted(_series(rows, "wall_seconds").items()):
        ax.plot(ms, [y * 1e3 for y in ys], marker="o", label=engine)
    ax.set_xlabel("pattern length m")
    ax.set_ylabel("wall time (ms)")
    ax.set_title("query time by engine")
    ax.legend()
    fig.tight_layout()
    path = outdir / "bench_time_vs_m.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)

    fig, ax = plt.subplots(figsize=(6, 4))
    for key, style in (("partner_calls", "-o"), ("range_queries", "--s"), ("rank_calls", ":^")):
        for engine, (ms, ys) in sorted(_series(rows, key).items()):
            if any(ys):
                ax.plot(ms, ys, style, label=f"{engine}:{key}")
    ax.set_xlabel("pattern length m")
    ax.set_ylabel("operations per query")
    ax.set_title("operation counters by engine")
    ax.legend(fontsize=7)
    fig.tight_layout()
    path = outdir / "bench_ops_vs_m.png"
    fig.savefig(path, dpi=120)
    plt.close(fig)
    written.append(path)
    return written
