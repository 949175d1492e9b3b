"""Command-line interface: build, query, verify, bench."""

from __future__ import annotations

import csv
import json
import math
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import click

from amsi.attractor import SizeCapError, validate_attractor
from amsi.counters import collect_counters
from amsi.index import ALL_ENGINES, MSIndex, build_index, compute_ms
from amsi.serialize import ContainerError, load_index, save_index

RECORD_SEPARATOR = "\x01"  # joins FASTA records; never allowed in patterns


def _read_text(path: str, fmt: str) -> str:
    data = Path(path).read_bytes()
    if fmt == "plain":
        return data.decode("latin-1")
    records: list[str] = []
    current: list[str] = []
    for raw in data.decode("latin-1").splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith(">"):
            if current:
                records.append("".join(current))
                current = []
            continue
        current.append(line)
    if current:
        records.append("".join(current))
    if not records:
        raise click.ClickException("no sequence records found in FASTA input")
    return RECORD_SEPARATOR.join(records)


@click.group()
def main():
    """Matching-statistics index over attractor-parsed texts."""


@main.command()
@click.argument("input_path", type=click.Path(exists=True, dir_okay=False))
@click.option("-o", "--output", "output_path", required=True, type=click.Path(dir_okay=False))
@click.option("--format", "fmt", type=click.Choice(["plain", "fasta"]), default="plain")
@click.option("--parser", type=click.Choice(["lz", "boundaries"]), default="lz")
@click.option("--boundaries-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--epsilon", type=float, default=0.5, show_default=True)
@click.option("--engines", default="basic,lpmem,const", show_default=True,
              help="comma-separated engines to prepare")
def build(input_path, output_path, fmt, parser, boundaries_file, epsilon, engines):
    """Build an index file from a text (plain bytes or FASTA)."""
    text = _read_text(input_path, fmt)
    engine_list = tuple(e.strip() for e in engines.split(",") if e.strip())
    for e in engine_list:
        if e not in ALL_ENGINES:
            raise click.ClickException(f"unknown engine {e!r}")
    boundaries = None
    if parser == "boundaries":
        if not boundaries_file:
            raise click.ClickException("--parser boundaries requires --boundaries-file")
        try:
            boundaries = sorted(int(tok) for tok in Path(boundaries_file).read_text().split())
        except ValueError as exc:
            raise click.ClickException(f"malformed boundary file: {exc}")
        if not boundaries:
            raise click.ClickException("boundary file is empty")
        if boundaries[0] < 1 or boundaries[-1] > len(text):
            raise click.ClickException("boundary positions outside [1, n]")
        try:
            if not validate_attractor(text, boundaries):
                raise click.ClickException("boundary set is not a valid attractor")
        except SizeCapError:
            click.echo("warning: text too long to validate the attractor; trusting it",
                       err=True)
    try:
        index = build_index(text, boundaries, epsilon=epsilon, engines=engine_list)
    except ValueError as exc:
        raise click.ClickException(str(exc))
    sizes = save_index(index, output_path)
    st = index.stats
    parts = " ".join(f"bytes[{k}]={v}" for k, v in sizes.items())
    click.echo(
        f"n={index.parsing.n} z={st.z} gamma_prime={st.gamma_prime} "
        f"delta={float(st.delta):g} {parts} total={sum(sizes.values())}",
        err=True,
    )


def _load_or_fail(index_path: str) -> MSIndex:
    try:
        return load_index(index_path)
    except (ContainerError, OSError) as exc:
        raise click.ClickException(f"cannot load index: {exc}")


def _query_one(index: MSIndex, pattern: str, engine: str):
    if engine == "all":
        results = {}
        agg = {"partner_calls": 0, "range_queries": 0, "chars_extracted": 0}
        for e in index.engines:
            with collect_counters() as c:
                results[e] = compute_ms(pattern, index, e)
            for key in agg:
                agg[key] += getattr(c, key)
        distinct = {tuple(v) for v in results.values()}
        if len(distinct) > 1:
            raise RuntimeError(
                f"engines disagree on pattern {pattern!r}: "
                + "; ".join(f"{e}={v}" for e, v in results.items())
            )
        return next(iter(results.values())), agg
    with collect_counters() as c:
        ms = compute_ms(pattern, index, engine)
    return ms, {k: v for k, v in c.as_dict().items() if k != "rank_calls"}


@main.command()
@click.argument("index_path", type=click.Path(exists=True, dir_okay=False))
@click.argument("pattern", required=False)
@click.option("--patterns-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--stdin", "use_stdin", is_flag=True, help="one pattern per line on stdin")
@click.option("--engine", type=click.Choice(["basic", "lpmem", "const", "all"]),
              default="basic", show_default=True)
@click.option("--output", "out_fmt", type=click.Choice(["tsv", "json"]), default="tsv",
              show_default=True)
@click.option("--workers", type=int, default=1, show_default=True)
def query(index_path, pattern, patterns_file, use_stdin, engine, out_fmt, workers):
    """Matching statistics of one or more patterns against an index."""
    index = _load_or_fail(index_path)
    if engine != "all" and engine not in index.engines:
        raise click.ClickException(f"index was built without the {engine!r} engine")
    patterns: list[str] = []
    if pattern is not None:
        patterns.append(pattern)
    if patterns_file:
        patterns.extend(Path(patterns_file).read_text().splitlines())
    if use_stdin:
        patterns.extend(line.rstrip("\n") for line in sys.stdin)
    if not patterns and pattern is None:
        raise click.ClickException("no patterns given (argument, file, or --stdin)")
    for p in patterns:
        if RECORD_SEPARATOR in p:
            raise click.ClickException("pattern contains the record separator byte 0x01")

    def run(p: str):
        return _query_one(index, p, engine)

    try:
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(run, patterns))
        else:
            outcomes = [run(p) for p in patterns]
    except RuntimeError as exc:  # engine disagreement under --engine all
        raise click.ClickException(str(exc))

    for pid, (p, (ms, counters)) in enumerate(zip(patterns, outcomes)):
        if out_fmt == "json":
            click.echo(json.dumps({
                "pattern": p,
                "ms": ms,
                "engine": engine,
                "counters": counters,
            }))
        else:
            for i, value in enumerate(ms, start=1):
                click.echo(f"{pid}\t{i}\t{value}")
    if engine == "all":
        click.echo(f"engines agree on {len(patterns)} pattern(s)", err=True)


@main.command()
@click.argument("index_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--max-n", type=int, default=4096, show_default=True,
              help="skip the quadratic attractor check above this length")
def verify(index_path, max_n):
    """Structural checks: attractor validity, trees, grid permutation."""
    index = _load_or_fail(index_path)
    n, B = index.parsing.n, index.parsing.B
    text = index.oracle.extract(1, n) if n else ""

    if "".join(index.parsing.phrases(text)) != text:
        raise click.ClickException("phrases do not concatenate to the text")
    xs = sorted(index.grid.x_of_boundary)
    ys = sorted(index.grid.y_of_boundary)
    if xs != list(range(1, B + 1)) or ys != list(range(1, B + 1)):
        raise click.ClickException("grid coordinates are not permutations")
    for tree in (index.trev, index.tsuf):
        for node in tree.nodes:
            if node.children:
                if node.xlo != node.children[0].xlo or node.xhi != node.children[-1].xhi:
                    raise click.ClickException("leaf-rank intervals inconsistent")
                for a, b in zip(node.children, node.children[1:]):
                    if a.xhi + 1 != b.xlo:
                        raise click.ClickException("child intervals do not partition")

    attractor_note = "attractor valid"
    if n <= max_n:
        if not validate_attractor(text, index.parsing.boundaries):
            raise click.ClickException("boundary set is not a valid attractor")
    else:
        attractor_note = f"attractor check skipped (n={n} > {max_n})"
    click.echo(f"{attractor_note}; {B} boundaries; grid permutation OK")


def _bench_patterns(index: MSIndex, count: int, max_m: int, seed: int) -> list[str]:
    rng = random.Random(seed)
    n = index.oracle.n
    text = index.oracle.extract(1, n) if n else ""
    lengths = sorted({max(1, min(max_m, round(max_m ** (i / max(count - 1, 1)))))
                      for i in range(count)})
    out = []
    for m in lengths:
        m = min(m, n) if n else m
        if n and m:
            start = rng.randrange(0, n - m + 1)
            out.append(text[start : start + m])
    return [p for p in out if p]


@main.command()
@click.argument("index_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--patterns-file", type=click.Path(exists=True, dir_okay=False))
@click.option("--generate", type=int, default=0, help="sample this many text substrings")
@click.option("--max-m", type=int, default=64, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--repeat", type=int, default=3, show_default=True)
@click.option("-o", "--output", "csv_path", default="amsi-bench.csv", show_default=True)
@click.option("--plot-dir", default=None, help="figure directory (default: beside the CSV)")
@click.option("--no-plot", is_flag=True)
def bench(index_path, patterns_file, generate, max_m, seed, repeat, csv_path, plot_dir,
          no_plot):
    """Time the engines and dump CSV plus figures."""
    index = _load_or_fail(index_path)
    patterns: list[str] = []
    if patterns_file:
        patterns.extend(p for p in Path(patterns_file).read_text().splitlines() if p)
    if generate or not patterns:
        patterns.extend(_bench_patterns(index, generate or 8, max_m, seed))
    if not patterns:
        raise click.ClickException("no benchmark patterns")

    rows = []
    for engine in index.engines:
        for p in patterns:
            best = math.inf
            counters = None
            for _ in range(max(1, repeat)):
                with collect_counters() as c:
                    t0 = time.perf_counter()
                    compute_ms(p, index, engine)
                    best = min(best, time.perf_counter() - t0)
                counters = c
            rows.append({
                "engine": engine,
                "m": len(p),
                "wall_seconds": f"{best:.6g}",
                **counters.as_dict(),
            })

    fields = ["engine", "m", "wall_seconds", "partner_calls", "range_queries",
              "chars_extracted", "rank_calls"]
    with open(csv_path, "w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        writer.writerows(rows)
    click.echo(f"wrote {csv_path} ({len(rows)} rows)", err=True)
    if not no_plot:
        from amsi.plotting import render_bench_figures

        outdir = plot_dir if plot_dir is not None else Path(csv_path).resolve().parent
        for path in render_bench_figures(rows, outdir):
            click.echo(f"wrote {path}", err=True)


if __name__ == "__main__":  # pragma: no cover
    main()
