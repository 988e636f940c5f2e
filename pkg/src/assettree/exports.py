"""File formats: edge lists, DOT graphs, metric CSVs, JSON reports.

Everything is plain UTF-8 text with explicit "\n" newlines, floats at 17
significant digits (round-trip exact), and deterministic ordering, so
repeated runs on identical inputs are byte-identical.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
from datetime import date as Date

from .correlation import CorrelationMatrix
from .errors import FormatError
from .mst import Tree
from .rolling import MetricSeries, TransitionReport

SERIES_COLUMNS = [
    "end_date",
    "ntl",
    "mol_static",
    "mol_dynamic",
    "k_max",
    "phase",
    "dynamic_center",
]


def fmt_float(x: float) -> str:
    return format(x, ".17g")


def config_hash(config: dict) -> str:
    """Stable short digest of a flat key-value configuration."""
    blob = "".join(
        "%s=%s\n" % (k, config[k]) for k in sorted(config)
    ).encode("utf-8")
    return hashlib.sha256(blob).hexdigest()[:12]


def write_tree_edges(path, tree: Tree, meta: dict | None = None) -> None:
    """Line-oriented edge list with a commented header block."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# n_vertices: %d\n" % tree.n)
        for key in sorted(meta or {}):
            fh.write("# %s: %s\n" % (key, (meta or {})[key]))
        for i, j, w in tree.edges:
            fh.write("%s,%s,%s\n" % (tree.tickers[i], tree.tickers[j], fmt_float(w)))


def read_tree_edges(path) -> Tree:
    """Rebuild a Tree from an edge-list file written by write_tree_edges."""
    pairs: list[tuple[str, str, float]] = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 3:
                raise FormatError("bad edge line %r" % line)
            pairs.append((parts[0], parts[1], float(parts[2])))
    tickers = sorted({t for a, b, _ in pairs for t in (a, b)})
    index = {t: i for i, t in enumerate(tickers)}
    edges = sorted(
        (min(index[a], index[b]), max(index[a], index[b]), w) for a, b, w in pairs
    )
    return Tree(tickers, edges)


def write_dot(path, tree: Tree, name: str = "assettree") -> None:
    """Undirected DOT graph with weight attributes at full precision."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("graph %s {\n" % name)
        for ticker in tree.tickers:
            fh.write('  "%s";\n' % ticker)
        for i, j, w in tree.edges:
            fh.write(
                '  "%s" -- "%s" [weight=%s];\n'
                % (tree.tickers[i], tree.tickers[j], fmt_float(w))
            )
        fh.write("}\n")


def write_metric_series_csv(path, series: MetricSeries) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(SERIES_COLUMNS)
        for k in range(len(series)):
            writer.writerow(
                [
                    series.window_end_dates[k].isoformat(),
                    fmt_float(series.ntl[k]),
                    fmt_float(series.mol_static[k]),
                    fmt_float(series.mol_dynamic[k]),
                    series.k_max[k],
                    series.phase[k],
                    series.dynamic_center[k],
                ]
            )


def read_metric_series_csv(path) -> MetricSeries:
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != SERIES_COLUMNS:
            raise FormatError("unexpected series header %r" % (header,))
        series = MetricSeries([], [], [], [], [], [], [])
        for row in reader:
            if len(row) != len(SERIES_COLUMNS):
                raise FormatError("bad series row %r" % (row,))
            series.window_end_dates.append(Date.fromisoformat(row[0]))
            series.ntl.append(float(row[1]))
            series.mol_static.append(float(row[2]))
            series.mol_dynamic.append(float(row[3]))
            series.k_max.append(int(row[4]))
            series.phase.append(row[5])
            series.dynamic_center.append(row[6])
    return series


def write_transition_report(path, report: TransitionReport, extra: dict | None = None) -> None:
    payload = {
        "ntl_argmin": {
            "index": report.ntl_argmin[0],
            "date": report.ntl_argmin[1].isoformat(),
        },
        "mol_argmin": {
            "index": report.mol_argmin[0],
            "date": report.mol_argmin[1].isoformat(),
        },
        "phase_changes": [
            {"index": i, "from": a, "to": b} for i, a, b in report.phase_changes
        ],
        "superhub_intervals": [
            {"start": s, "end": e, "hub": hub}
            for s, e, hub in report.superhub_intervals
        ],
    }
    payload.update(extra or {})
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def write_correlation_matrix(path, corr: CorrelationMatrix) -> None:
    """Delimited dump: one header row of tickers, then N rows of values."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(corr.tickers) + "\n")
        for row in corr.rho:
            fh.write(",".join(fmt_float(v) for v in row) + "\n")


def format_price_csv(tickers: list[str], dates: list[Date], prices) -> str:
    """Ingestion-compatible price table, rows ordered by date then ticker."""
    out = io.StringIO()
    out.write("date,ticker,close\n")
    for t, day in enumerate(dates):
        for i, ticker in enumerate(tickers):
            out.write("%s,%s,%s\n" % (day.isoformat(), ticker, fmt_float(prices[i][t])))
    return out.getvalue()
