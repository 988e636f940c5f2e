"""Command-line front end.

Subcommands:
  analyze     one-shot pipeline over a whole period, tree + report out
  evolve      rolling-window pipeline, metric series + transition report
  synth       generate an ingestion-compatible synthetic price CSV
  export-dot  convert a saved edge-list tree to DOT

Exit codes: 0 success, 2 validation error, 3 I/O error, 4 fit
underdetermined. Every failure prints a diagnostic naming the stage.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from datetime import date as Date, timedelta
from pathlib import Path

import numpy as np

from . import exports
from .correlation import pearson_matrix, to_distance
from .errors import (
    AssetTreeError,
    ConfigurationError,
    UnderdeterminedFitError,
)
from .ingestion import FormatSpec, align_and_filter, log_returns, parse_price_table
from .metrics import (
    DEFAULT_GAP_RATIO,
    DEFAULT_HUB_THRESHOLD,
    DEFAULT_RESIDUAL_THRESHOLD,
    classify_phase,
    degree_distribution,
    detect_superhub,
    fit_power_law,
    max_degree_vertex,
    mean_occupation_layer,
    normalized_tree_length,
)
from .mst import prim_mst
from .rolling import WindowSpec, detect_transitions, evolve
from .synth import EPOCH, FactorModelParams, HubRegimeParams, hub_regime_returns, one_factor_returns

DEFAULT_WINDOW = 250
DEFAULT_STEP = 5


def _parse_date(text: str) -> Date:
    try:
        return Date.fromisoformat(text)
    except ValueError:
        raise ConfigurationError("bad date %r, expected YYYY-MM-DD" % text) from None


def _resolve_input(args) -> str:
    given = [p for p in (args.input_pos, args.input) if p]
    if len(given) != 1:
        raise ConfigurationError("exactly one input path required")
    return given[0]


def _load_returns(path: str, start: str | None, end: str | None):
    """File text to ReturnPanel; returns (panel, dropped, period)."""
    text = Path(path).read_text(encoding="utf-8")
    parsed = parse_price_table(text, FormatSpec())
    for reject in parsed.rejected:
        print(
            "ingestion: line %d rejected (%s)" % (reject.line_number, reject.reason),
            file=sys.stderr,
        )
    observed = [day for s in parsed.series for day, _ in s.observations]
    if not observed:
        raise ConfigurationError("no parseable records in %s" % path)
    period = (
        _parse_date(start) if start else min(observed),
        _parse_date(end) if end else max(observed),
    )
    aligned = align_and_filter(parsed.series, period)
    return log_returns(aligned.panel), aligned.dropped, period


def _jf(x: float):
    """JSON-safe float: None when not finite."""
    return x if math.isfinite(x) else None


def cmd_analyze(args) -> int:
    stage = "setup"
    try:
        path = _resolve_input(args)
        out = Path(args.out)
        stage = "ingestion"
        returns, dropped, period = _load_returns(path, args.start, args.end)
        stage = "correlation"
        corr = pearson_matrix(returns)
        dist = to_distance(corr)
        stage = "mst"
        tree = prim_mst(dist)
        stage = "metrics"
        ddist = degree_distribution(tree)
        try:
            fit = fit_power_law(ddist, drop_threshold=args.tau)
        except UnderdeterminedFitError:
            fit = None
        report = detect_superhub(ddist, fit, args.tau, args.gap)
        label = classify_phase(ddist, fit, report, args.tau_hub)
        center = max_degree_vertex(tree)
        config = {
            "input": path,
            "start": period[0].isoformat(),
            "end": period[1].isoformat(),
            "tau": args.tau,
            "gap": args.gap,
            "tau_hub": args.tau_hub,
        }
        payload = {
            "n_companies": tree.n,
            "period": {"start": period[0].isoformat(), "end": period[1].isoformat()},
            "dropped_companies": dropped,
            "config_hash": exports.config_hash(config),
            "ntl": normalized_tree_length(tree),
            "mol_dynamic": mean_occupation_layer(tree, center),
            "dynamic_center": center,
            "degree_counts": {str(k): int(c) for k, c in ddist.counts.items()},
            "fit": None
            if fit is None
            else {
                "slope": fit.slope,
                "intercept": fit.intercept,
                "slope_stderr": fit.slope_stderr,
                "k_range": list(fit.k_range),
                "residuals": {str(k): r for k, r in fit.residuals.items()},
                "excluded_degrees": list(fit.excluded_degrees),
            },
            "superhub": {
                "is_superhub": report.is_superhub,
                "hub_ticker": report.hub_ticker,
                "k_max": report.k_max,
                "k_second": report.k_second,
                "log_residual": _jf(report.log_residual),
                "degree_gap_ratio": report.degree_gap_ratio,
            },
            "phase": label.phase,
            "n_outlier_hubs": label.n_outlier_hubs,
        }
        stage = "export"
        out.mkdir(parents=True, exist_ok=True)
        meta = {"period": "%s..%s" % period, "config_hash": payload["config_hash"]}
        if "edges" in args.formats:
            exports.write_tree_edges(out / "tree.edges", tree, meta)
        if "dot" in args.formats:
            exports.write_dot(out / "tree.dot", tree)
        if "csv" in args.formats:
            exports.write_correlation_matrix(out / "corr.csv", corr)
        with open(out / "analysis.json", "w", encoding="utf-8", newline="\n") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 3
    except UnderdeterminedFitError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 4
    except AssetTreeError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 2
    return 0


def cmd_evolve(args) -> int:
    stage = "setup"
    try:
        path = _resolve_input(args)
        out = Path(args.out)
        spec = WindowSpec(args.window, args.step)
        stage = "ingestion"
        returns, dropped, period = _load_returns(path, args.start, args.end)
        stage = "rolling"
        center = args.center
        if center is None:
            # Data-driven default: the dominant vertex of the whole period.
            full_tree = prim_mst(to_distance(pearson_matrix(returns)))
            center = max_degree_vertex(full_tree)
        series = evolve(returns, spec, center, args.tau, args.gap, args.tau_hub)
        report = detect_transitions(series)
        stage = "export"
        config = {
            "input": path,
            "start": period[0].isoformat(),
            "end": period[1].isoformat(),
            "window": spec.width,
            "step": spec.step,
            "center": center,
            "tau": args.tau,
            "gap": args.gap,
            "tau_hub": args.tau_hub,
        }
        out.mkdir(parents=True, exist_ok=True)
        exports.write_metric_series_csv(out / "series.csv", series)
        exports.write_transition_report(
            out / "transitions.json",
            report,
            extra={
                "static_center": center,
                "config_hash": exports.config_hash(config),
                "dropped_companies": dropped,
                "window_drops": {
                    str(i): list(t) for i, t in enumerate(series.dropped) if t
                },
            },
        )
    except OSError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 3
    except UnderdeterminedFitError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 4
    except AssetTreeError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 2
    return 0


_PARAM_KEYS = {
    "kind",
    "n_companies",
    "n_days",
    "beta",
    "betas",
    "noise_sigma",
    "seed",
    "hub_index",
    "gamma",
    "regime_start",
    "regime_end",
}


def _parse_params(path: str) -> dict:
    """Flat key=value file; '#' comments and blank lines ignored."""
    params: dict[str, str] = {}
    for line_number, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError("line %d of %s is not key=value" % (line_number, path))
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _PARAM_KEYS:
            raise ConfigurationError("unknown parameter %r" % key)
        if key in params:
            raise ConfigurationError("duplicate parameter %r" % key)
        params[key] = value
    return params


def _synth_panel(params: dict):
    """Build the return panel described by a params mapping."""
    try:
        n_companies = int(params["n_companies"])
        n_price_days = int(params["n_days"])
        sigma = float(params.get("noise_sigma", "1.0"))
        seed = int(params.get("seed", "0"))
    except KeyError as err:
        raise ConfigurationError("missing parameter %s" % err) from None
    except ValueError as err:
        raise ConfigurationError(str(err)) from None
    if n_price_days < 2:
        raise ConfigurationError("n_days must be at least 2 price days")
    n_return_days = n_price_days - 1
    if "betas" in params:
        betas = tuple(float(b) for b in params["betas"].split(","))
    else:
        betas = (float(params.get("beta", "1.0")),) * n_companies
    base = FactorModelParams(n_companies, n_return_days, betas, sigma, seed)
    kind = params.get("kind", "hub_regime" if "gamma" in params else "one_factor")
    if kind == "one_factor":
        return one_factor_returns(base)
    if kind == "hub_regime":
        try:
            hub_index = int(params["hub_index"])
            gamma = float(params["gamma"])
            interval = (int(params["regime_start"]), int(params["regime_end"]))
        except KeyError as err:
            raise ConfigurationError("missing parameter %s" % err) from None
        except ValueError as err:
            raise ConfigurationError(str(err)) from None
        return hub_regime_returns(HubRegimeParams(base, hub_index, gamma, interval))
    raise ConfigurationError("unknown kind %r" % kind)


def cmd_synth(args) -> int:
    stage = "setup"
    try:
        stage = "params"
        params = _parse_params(args.params)
        stage = "generate"
        panel = _synth_panel(params)
        prices = 100.0 * np.exp(np.cumsum(panel.returns, axis=1))
        prices = np.hstack([np.full((prices.shape[0], 1), 100.0), prices])
        price_dates = [panel.dates[0] - timedelta(days=1)] + list(panel.dates)
        stage = "export"
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        text = exports.format_price_csv(panel.tickers, price_dates, prices)
        with open(out / "prices.csv", "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 3
    except AssetTreeError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 2
    return 0


def cmd_export_dot(args) -> int:
    stage = "setup"
    try:
        path = _resolve_input(args)
        stage = "read"
        tree = exports.read_tree_edges(path)
        stage = "export"
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        exports.write_dot(out / (Path(path).stem + ".dot"), tree)
    except OSError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 3
    except AssetTreeError as err:
        print("%s: %s" % (stage, err), file=sys.stderr)
        return 2
    return 0


def _add_common_io(sub, with_window: bool) -> None:
    sub.add_argument("input_pos", nargs="?", metavar="input", help="price CSV path")
    sub.add_argument("--input", help="price CSV path (alternative to positional)")
    sub.add_argument("--start", help="period start, YYYY-MM-DD (default: first observed)")
    sub.add_argument("--end", help="period end, YYYY-MM-DD (default: last observed)")
    if with_window:
        sub.add_argument("--window", type=int, default=DEFAULT_WINDOW, help="window width in trading days")
        sub.add_argument("--step", type=int, default=DEFAULT_STEP, help="window step in trading days")
        sub.add_argument("--center", help="static center ticker (default: full-period max-degree vertex)")
    sub.add_argument("--tau", type=float, default=DEFAULT_RESIDUAL_THRESHOLD, help="superhub residual threshold, decades")
    sub.add_argument("--gap", type=float, default=DEFAULT_GAP_RATIO, help="superhub degree gap ratio")
    sub.add_argument("--tau-hub", type=float, default=DEFAULT_HUB_THRESHOLD, help="hub residual threshold, decades")
    sub.add_argument("--out", default=".", help="output directory")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="assettree",
        description="Correlation-tree analysis of equity return panels",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_analyze = subs.add_parser("analyze", help="one-shot analysis over a period")
    _add_common_io(p_analyze, with_window=False)
    p_analyze.add_argument(
        "--format",
        dest="formats",
        action="append",
        choices=["dot", "edges", "csv"],
        help="tree/matrix outputs (repeatable; default: edges and dot)",
    )
    p_analyze.set_defaults(func=cmd_analyze)

    p_evolve = subs.add_parser("evolve", help="rolling-window metric series")
    _add_common_io(p_evolve, with_window=True)
    p_evolve.set_defaults(func=cmd_evolve)

    p_synth = subs.add_parser("synth", help="generate a synthetic price CSV")
    p_synth.add_argument("params", help="key=value parameter file")
    p_synth.add_argument("--out", default=".", help="output directory")
    p_synth.set_defaults(func=cmd_synth)

    p_dot = subs.add_parser("export-dot", help="convert an edge-list tree to DOT")
    p_dot.add_argument("input_pos", nargs="?", metavar="input", help="edge-list file")
    p_dot.add_argument("--input", help="edge-list file (alternative to positional)")
    p_dot.add_argument("--out", default=".", help="output directory")
    p_dot.set_defaults(func=cmd_export_dot)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "formats", None) is None and args.command == "analyze":
        args.formats = ["edges", "dot"]
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
