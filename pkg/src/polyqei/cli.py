"""Command-line front end: ``polyqei <command> [options]``.

Exit status: 0 on success, 2 for bad arguments, 3 when a numerical procedure
fails to converge, 4 when a physical consistency check fails.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import cylinder_model, exact_bounds, lp_norms, qei_bounds, spectral_numeric, special_fn
from .errors import ConsistencyError, ConvergenceError
from .rational_core import format_rational
from .report import Report, Series, render, write_plot_data

PRECISION_ENV = "POLYQEI_PRECISION_BITS"
TABLE6_N = (5, 10, 15, 19, 20)

COMMAND_PARAMS = {
    "alpha": {"n"},
    "bounds": {"n"},
    "eigen": {"n", "quad_order"},
    "table6": {"quad_order"},
    "qei": {"d", "m", "tau0"},
    "optimize": {"d", "m", "tau0", "x"},
    "cylinder": {"mL", "m", "tau0"},
    "lpnorms": {"n", "p"},
    "qd": {"d", "x"},
}


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    params: dict[str, Any] = field(default_factory=dict)
    output_format: str = "text"
    precision_bits: int = 256
    output_path: str | None = None
    emit_plot_data: bool = False

    def validate(self) -> None:
        if self.command not in COMMAND_PARAMS:
            raise UsageError(f"unknown command {self.command!r}")
        unknown = set(self.params) - COMMAND_PARAMS[self.command]
        if unknown:
            raise UsageError(f"unknown parameter(s) for {self.command}: {', '.join(sorted(unknown))}")
        if self.output_format not in ("text", "csv", "json"):
            raise UsageError(f"unknown output format {self.output_format!r}")
        if not isinstance(self.precision_bits, int) or self.precision_bits < 64:
            raise UsageError(f"precision_bits must be an integer >= 64, got {self.precision_bits!r}")


def _require(params: dict, *names: str) -> None:
    missing = [n for n in names if params.get(n) is None]
    if missing:
        raise UsageError("missing required option(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))


def _cmd_alpha(params, cfg):
    _require(params, "n")
    n = params["n"]
    sol = exact_bounds.alphas_closed_form(n)
    summary = ", ".join(f"alpha_{j} = {format_rational(a)}" for j, a in enumerate(sol.alphas))
    rows = [[j, a, float(a)] for j, a in enumerate(sol.alphas)]
    series = [Series("alpha", list(range(n + 1)), [float(a) for a in sol.alphas], "j", "alpha_j", logy=True)]
    return Report("alpha", {"n": n}, ["j", "alpha_exact", "alpha"], rows, summary=summary, series=series)


def _cmd_bounds(params, cfg):
    _require(params, "n")
    n = params["n"]
    b = exact_bounds.spectral_bounds(n)
    rn, terms = exact_bounds.ratio_Rn_series(n)
    row = [n, b.lower, b.upper, b.ratio_Rn, b.lambda_lower, b.lambda_upper,
           float(b.lambda_lower), float(b.lambda_upper), exact_bounds.stirling_asymptote(n)]
    cols = ["n", "alpha_0", "sum_alpha", "R_n", "lambda_lower", "lambda_upper",
            "lambda_lower_float", "lambda_upper_float", "stirling_r_T"]
    ks = list(range(len(terms)))
    series = [Series("c_nk", ks, [float(t) for t in terms], "k", "c_{n,k}", logy=True),
              Series("envelope", ks, [2.0 ** -k for k in ks], "k", "2^-k", logy=True)]
    return Report("bounds", {"n": n}, cols, [row], series=series)


_EIGEN_COLS = ["n", "lambda1", "lambda2", "sqrt2_2n_fact_lambda1", "n_lambda2_over_lambda1",
               "quad_order", "residual_estimate"]


def _eigen_row(est):
    return [est.n, est.lambda1, est.lambda2, est.sqrt2_factorial_lambda1, est.rank1_ratio,
            est.quad_order, est.residual_estimate]


def _cmd_eigen(params, cfg):
    _require(params, "n")
    est = spectral_numeric.nystrom_eigs(params["n"], params.get("quad_order"), precision_bits=cfg.precision_bits)
    series = [Series("eigenvector", [float(v) for v in est.nodes],
                     [float(v) for v in est.eigenvector / np.max(np.abs(est.eigenvector))], "t", "u_n(t) (scaled)")]
    return Report("eigen", dict(params), _EIGEN_COLS, [_eigen_row(est)], series=series)


def _cmd_table6(params, cfg):
    rows = []
    for n in TABLE6_N:
        order = params.get("quad_order")
        if order is not None:
            order = max(order, 8 * n)
        est = spectral_numeric.nystrom_eigs(n, order, precision_bits=cfg.precision_bits)
        rows.append(_eigen_row(est))
    cols = _EIGEN_COLS[:5]
    rows_out = [r[:5] for r in rows]
    series = [Series("sqrt2_2n_fact_lambda1", list(TABLE6_N), [r[3] for r in rows], "n", "sqrt(2)(2n)! lambda1"),
              Series("n_lambda2_over_lambda1", list(TABLE6_N), [r[4] for r in rows], "n", "n lambda2/lambda1")]
    return Report("table6", dict(params), cols, rows_out, series=series,
                  meta={"quad_orders": [r[5] for r in rows]})


def _qei_params(params):
    d, m, tau0, x = params.get("d"), params.get("m"), params.get("tau0"), params.get("x")
    if d is None:
        raise UsageError("missing required option: --d")
    if x is not None:
        if tau0 is not None:
            raise UsageError("give either --x or --tau0, not both")
        m = 1.0 if m is None else m
        tau0 = 2.0 * x / m
    if m is None or tau0 is None:
        raise UsageError("need --m and --tau0 (or --x)")
    return d, m, tau0


def _scan_series(d, m, tau0, q):
    hi = max(q.n_star + 6, 2 * q.n_star)
    ns = list(range(qei_bounds.min_n(d), hi + 1))
    return ns, [qei_bounds.log_bound_at_n(d, m, tau0, n) / math.log(10) for n in ns]


def _cmd_qei(params, cfg):
    d, m, tau0 = _qei_params(params)
    q = qei_bounds.optimize_n(d, m, tau0)
    variants = qei_bounds.asymptote_variants(d, m, tau0)
    meta = {
        "n_star": q.n_star,
        "bound": q.bound,
        "log_bound": q.log_bound,
        "asymptotic": q.asymptotic,
        "asymptote_variants": {
            name: {"value": math.exp(v), "log_value": v, "reported": name == "composed",
                   "ratio_bound_over_variant": math.exp(q.log_bound - v)}
            for name, v in variants.items()
        },
    }
    if q.x < 5:
        meta["warning"] = "x = m tau0/2 < 5: asymptotic regime not reached"
    row = [d, m, tau0, q.x, q.n_star, q.bound, q.asymptotic, math.exp(q.log_bound - q.log_asymptotic)]
    ns, logs = _scan_series(d, m, tau0, q)
    return Report("qei", {"d": d, "m": m, "tau0": tau0}, ["d", "m", "tau0", "x", "n_star", "bound", "asymptotic",
                                                           "bound_over_asymptotic"], [row], meta=meta,
                  series=[Series("bound_vs_n", ns, logs, "n", "log10 bound")])


def _cmd_optimize(params, cfg):
    d, m, tau0 = _qei_params(params)
    q = qei_bounds.optimize_n(d, m, tau0)
    ns, logs = _scan_series(d, m, tau0, q)
    rows = [[n, qei_bounds.bound_at_n(d, m, tau0, n), lg, n == q.n_star] for n, lg in zip(ns, logs)]
    meta = {"x": q.x, "n_star": q.n_star}
    if q.x > 1:
        meta["critical_n"] = qei_bounds.critical_n(q.x)
    return Report("optimize", {"d": d, "m": m, "tau0": tau0}, ["n", "bound", "log10_bound", "optimal"], rows,
                  meta=meta, series=[Series("bound_vs_n", ns, logs, "n", "log10 bound")])


def _cmd_cylinder(params, cfg):
    _require(params, "mL")
    m = params.get("m") or 1.0
    rows = []
    for mL in params["mL"]:
        L = mL / m
        tau0 = params.get("tau0")
        r = cylinder_model.compare_to_qei(m, L, tau0=None if tau0 is None else tau0)
        rows.append([m, L, mL, r.energy_density, r.asymptotic, r.terms_used, r.underflow,
                     r.n_star, r.qei_bound, r.ratio])
    cols = ["m", "L", "mL", "energy_density", "asymptotic", "terms_used", "underflow", "n_star", "qei_bound", "ratio"]
    series = [Series("ratio", [r[2] for r in rows], [r[9] for r in rows], "mL", "|<T_tt>| / Q", logy=True),
              Series("energy_density", [r[2] for r in rows], [-r[3] for r in rows], "mL", "|<T_tt>| / m^4",
                     logy=True)]
    return Report("cylinder", {"mL": params["mL"], "m": m, "tau0": params.get("tau0")}, cols, rows, series=series)


def _cmd_lpnorms(params, cfg):
    _require(params, "n")
    n = params["n"]
    ps = params.get("p") or [1.0, 2.0, math.inf]
    ours, theirs, ratio = lp_norms.ddfl_comparison(n)
    rows = []
    for p in ps:
        b = lp_norms.norm_p_bounds(n, p)
        rows.append([n, p, b.r, b.lower, b.upper, b.a_n, b.b_n])
    grid = [i / 40 for i in range(41)]  # 1/p from 0 (p = inf) to 1 (p = 1)
    uppers = [lp_norms.norm_p_bounds(n, math.inf if g == 0 else 1 / g).upper for g in grid]
    meta = {"norm_inf_exact": lp_norms.norm_inf(n), "ddfl": {"our_bound": ours, "ddfl_value": theirs,
                                                              "ratio": ratio}}
    return Report("lpnorms", {"n": n, "p": ps}, ["n", "p", "r", "lower", "upper", "a_n", "b_n"], rows, meta=meta,
                  series=[Series("upper_vs_inv_p", grid, uppers, "1/p", "upper bound on ||T_n||_pp")])


def _cmd_qd(params, cfg):
    _require(params, "d", "x")
    d = params["d"]
    rows = [[d, x, special_fn.q_d(d, x).value] for x in params["x"]]
    top = max(max(params["x"]), 10.0)
    grid = list(np.geomspace(1.0, top, 80))
    series = [Series("Q_d", grid, [special_fn.q_d(d, float(x)).value for x in grid], "x", f"Q_{d}(x)")]
    return Report("qd", {"d": d, "x": params["x"]}, ["d", "x", "Q_d"], rows, series=series)


HANDLERS: dict[str, Callable] = {
    "alpha": _cmd_alpha, "bounds": _cmd_bounds, "eigen": _cmd_eigen, "table6": _cmd_table6, "qei": _cmd_qei,
    "optimize": _cmd_optimize, "cylinder": _cmd_cylinder, "lpnorms": _cmd_lpnorms, "qd": _cmd_qd,
}


def _error(kind: str, message: str, diagnostics=None) -> None:
    doc = {"error": kind, "message": message}
    if diagnostics:
        doc["diagnostics"] = diagnostics
    sys.stderr.write(json.dumps(doc, default=str) + "\n")


def build_report(config: RunConfig) -> Report:
    config.validate()
    return HANDLERS[config.command](dict(config.params), config)


def run(config: RunConfig) -> int:
    """Execute ``config``; returns the process exit status."""
    try:
        report = build_report(config)
    except (UsageError, ValueError) as exc:
        _error("usage", str(exc))
        return 2
    except ConvergenceError as exc:
        best = exc.best
        diag = dict(exc.diagnostics)
        if best is not None:
            diag["best_estimate"] = repr(best)
        _error("convergence", str(exc), diag)
        return 3
    except ConsistencyError as exc:
        _error("consistency", str(exc))
        return 4
    try:
        _emit(report, config)
    except OSError as exc:
        _error("io", str(exc))
        return 2
    return 0


def _emit(report: Report, config: RunConfig) -> None:
    text = render(report, config.output_format, config.precision_bits)
    if config.output_path:
        target = os.path.abspath(config.output_path)
        os.makedirs(os.path.dirname(target), exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if config.emit_plot_data:
        directory = os.path.dirname(os.path.abspath(config.output_path)) if config.output_path else os.getcwd()
        write_plot_data(report, directory)
        from .plotting import render_figure

        render_figure(report, directory)


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _p_value(text: str) -> float:
    value = math.inf if text.lower() in ("inf", "infinity") else float(text)
    if not value >= 1:
        raise argparse.ArgumentTypeError(f"p must lie in [1, inf], got {text}")
    return value


def _default_precision() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return 256
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None


def build_parser(default_precision: int) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv", "json"), default="text")
    common.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")
    common.add_argument("--precision-bits", type=int, default=default_precision,
                        help=f"working precision for kernel assembly (default {default_precision}; "
                             f"env {PRECISION_ENV})")
    common.add_argument("--emit-plot-data", action="store_true",
                        help="also write two-column .dat files and a PNG figure next to the report")

    parser = argparse.ArgumentParser(
        prog="polyqei", description="Clamped polyharmonic eigenvalue bounds and quantum energy inequality bounds.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[common], help=help_text)

    p = add("alpha", "exact alpha_j coefficients")
    p.add_argument("--n", type=_positive_int, required=True)
    p = add("bounds", "exact spectral-radius and eigenvalue bounds")
    p.add_argument("--n", type=_positive_int, required=True)
    p = add("eigen", "Nystrom eigenvalues of T_n")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--quad-order", type=_positive_int)
    p = add("table6", "reproduce the eigenvalue table for n = 5, 10, 15, 19, 20")
    p.add_argument("--quad-order", type=_positive_int)
    for name, help_text in (("qei", "optimized QEI bound"), ("optimize", "bound as a function of n")):
        p = add(name, help_text)
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--m", type=float)
        p.add_argument("--tau0", type=float)
        if name == "optimize":
            p.add_argument("--x", type=float, help="m tau0 / 2 (with m = 1 unless --m is given)")
    p = add("cylinder", "cylinder ground-state energy density against the QEI bound")
    p.add_argument("--mL", type=float, nargs="+", required=True)
    p.add_argument("--m", type=float)
    p.add_argument("--tau0", type=float, help="averaging time (default L; must not exceed L)")
    p = add("lpnorms", "L^p operator-norm bounds and the DDFL comparison")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--p", type=_p_value, nargs="+")
    p = add("qd", "the Q_d function")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--x", type=float, nargs="+", required=True)
    return parser


def parse_config(argv: list[str] | None = None) -> RunConfig:
    parser = build_parser(_default_precision())
    args = parser.parse_args(argv)
    skip = {"command", "format", "out", "precision_bits", "emit_plot_data"}
    params = {k: v for k, v in vars(args).items() if k not in skip and v is not None}
    return RunConfig(args.command, params, args.format, args.precision_bits, args.out, args.emit_plot_data)


def main(argv: list[str] | None = None) -> int:
    try:
        config = parse_config(argv)
        config.validate()
    except UsageError as exc:
        _error("usage", str(exc))
        return 2
    return run(config)


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
