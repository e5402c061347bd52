"""Experiment orchestration and the ``approx`` command line."""

from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .error_metrics import ConvergenceReport, QuadratureConfig, ReportRow, weighted_lp_error
from .functions import CORPUS_IDS, corpus_lookup
from .special_functions import MaternKernel, gaussian_density_pow
from .spline_approx import allocate_points, build_spline_approximant, interval_points
from .trig_interp import (
    ApproximationParams,
    build_trig_interpolant,
    default_gamma_fn,
    select_T,
    select_T_alpha_free,
    trig_nodes,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("trig", "spline")
CSV_COLUMNS = ("algorithm", "n", "param_T_or_m", "error", "rate_running")
DEFAULT_GRID = (-12.0, 12.0, 2001)

EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3


@dataclass
class ExperimentSpec:
    """One convergence experiment.

    ``sizes`` holds sample counts ``n`` for ``trig`` and levels ``m`` for
    ``spline``.
    """

    algorithm: str
    function_id: str
    params: ApproximationParams
    sizes: Sequence[int]
    kernel: MaternKernel | None = None
    alpha_free: bool = False
    gamma_fn: Callable[[int], float] = default_gamma_fn
    quadrature: QuadratureConfig = field(default_factory=QuadratureConfig)
    out: str | None = None
    fmt: str = "csv"

    def __post_init__(self):
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"algorithm must be one of {ALGORITHMS}, got {self.algorithm!r}")
        if self.function_id not in CORPUS_IDS:
            raise ValueError(f"unknown test function {self.function_id!r}")
        self.sizes = tuple(int(s) for s in self.sizes)
        if not self.sizes:
            raise ValueError("need at least one size")
        if any(b <= a for a, b in zip(self.sizes, self.sizes[1:])):
            raise ValueError("sizes must be strictly increasing")
        if self.fmt not in ("csv", "json"):
            raise ValueError(f"format must be csv or json, got {self.fmt!r}")
        if self.algorithm == "trig":
            if self.sizes[0] < 2:
                raise ValueError("trig needs n >= 2")
        else:
            for m in self.sizes:
                allocate_points(m)
            if self.kernel is None:
                self.kernel = MaternKernel(1.5)
            if self.params.alpha > self.kernel.space_order:
                raise ValueError(
                    f"alpha={self.params.alpha} exceeds the kernel's smoothness {self.kernel.space_order}"
                )

    def cutoff(self, n: int) -> float:
        if self.alpha_free:
            return select_T_alpha_free(n, self.params, self.gamma_fn)
        return select_T(n, self.params)

    def sample_count(self, size: int) -> int:
        return size if self.algorithm == "trig" else allocate_points(size)[1]

    def build(self, size: int, f=None):
        """The approximant for one size, sampling ``f`` (a fresh corpus copy by default)."""
        f = f if f is not None else corpus_lookup(self.function_id)
        if self.algorithm == "trig":
            return build_trig_interpolant(f, size, self.cutoff(size), self.params.p)
        return build_spline_approximant(f, size, self.kernel, self.params.alpha, self.params.p)

    def settings(self) -> dict:
        out = {
            "alpha_free": self.alpha_free,
            "panel_width": self.quadrature.panel_width,
            "nodes_per_panel": self.quadrature.nodes_per_panel,
        }
        if self.kernel is not None:
            out["kernel_gamma"] = self.kernel.gamma
            out["length_scale"] = self.kernel.length_scale
        return out


def run_experiment(spec: ExperimentSpec) -> ConvergenceReport:
    """Build, measure and (optionally) write one convergence table."""
    rows = []
    for size in spec.sizes:
        f = corpus_lookup(spec.function_id)
        approx = spec.build(size, f)
        if f.evaluations != spec.sample_count(size):
            raise RuntimeError(f"sampled {f.evaluations} values, budget is {spec.sample_count(size)}")
        error = weighted_lp_error(f, approx, spec.params.p, spec.quadrature)
        param = approx.T if spec.algorithm == "trig" else float(size)
        log.info("%s n=%d param=%.6g error=%.6e", spec.algorithm, f.evaluations, param, error)
        rows.append(ReportRow(n=f.evaluations, param=param, error=error))
    report = ConvergenceReport(
        algorithm=spec.algorithm,
        function_id=spec.function_id,
        params=spec.params,
        rows=rows,
        settings=spec.settings(),
    ).finalize()
    if spec.out:
        write_atomic(spec.out, render_report(report, spec.fmt))
    return report


def render_report(report: ConvergenceReport, fmt: str = "csv") -> str:
    if fmt == "json":
        return report.to_json()
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row, rate in zip(report.rows, report.running_rates()):
        writer.writerow(
            [report.algorithm, row.n, repr(row.param), repr(row.error), "" if rate is None else repr(rate)]
        )
    return buf.getvalue()


def write_atomic(path: str, text: str) -> None:
    """Write via a temporary file in the target directory and rename it into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".approx-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def export_points(spec: ExperimentSpec) -> list[tuple[str, int, float]]:
    """Sample locations ``(algorithm, n, point)`` for every size of the spec."""
    rows = []
    for size in spec.sizes:
        if spec.algorithm == "trig":
            pts = trig_nodes(size, spec.cutoff(size))
        else:
            nu, _ = allocate_points(size)
            pts = np.sort(
                np.concatenate([interval_points(nu[abs(k) - 1], k) for k in range(-size, size + 1) if k])
            )
        n = spec.sample_count(size)
        rows.extend((spec.algorithm, n, float(x)) for x in pts)
    return rows


def export_weighted_curve(spec: ExperimentSpec, grid=None) -> list[tuple[str, int, float, float, float]]:
    """Rows ``(algorithm, n, x, rho^(1/p) A(f)(x), rho^(1/p) f(x))`` on a grid."""
    if grid is None:
        grid = np.linspace(*DEFAULT_GRID)
    grid = np.asarray(grid, dtype=float)
    if not np.all(np.isfinite(grid)):
        raise ValueError("grid must be finite")
    p = spec.params.p
    rows = []
    for size in spec.sizes:
        f = corpus_lookup(spec.function_id)
        approx = spec.build(size, f)
        n = f.evaluations
        approx_w = approx.weighted(grid)
        truth_w = f.derivative(0, grid) * gaussian_density_pow(grid, 1.0 / p)
        rows.extend(
            (spec.algorithm, n, float(x), float(a), float(t)) for x, a, t in zip(grid, approx_w, truth_w)
        )
    return rows


def _render_rows(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--fn", required=True, choices=CORPUS_IDS, help="test function")
    parser.add_argument("--p", type=float, default=1.0, help="error exponent")
    parser.add_argument("--q", type=float, default=2.0, help="smoothness exponent")
    parser.add_argument("--alpha", type=int, default=None, help="Sobolev order")
    parser.add_argument("--eps", type=float, default=None, help="decay slack (default: midpoint)")
    parser.add_argument("--alpha-free", action="store_true", help="trig: T from max(ln ln n, 1)")
    parser.add_argument("--n", type=_int_list, default=None, help="trig sample counts, e.g. 17,33,65")
    parser.add_argument("--m", type=_int_list, default=None, help="spline levels, e.g. 2,3,4")
    parser.add_argument("--gamma", type=float, default=1.5, help="spline Matérn order")
    parser.add_argument("--length-scale", type=float, default=1.0, help="spline Matérn length scale")
    parser.add_argument("--panel-width", type=float, default=QuadratureConfig.panel_width)
    parser.add_argument("--nodes-per-panel", type=int, default=QuadratureConfig.nodes_per_panel)
    parser.add_argument("--out", default=None, help="output file (stdout if omitted)")
    parser.add_argument("--format", dest="fmt", choices=("csv", "json"), default=None)
    parser.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="approx", description="Sampling recovery in Gaussian Sobolev spaces: convergence experiments."
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (("trig", "truncated trigonometric interpolation"), ("spline", "interval spline smoothing")):
        _add_common(sub.add_parser(name, help=f"convergence table for {text}"))
    for name, text in (("points", "export sample locations"), ("curve", "export weighted approximant curves")):
        p = sub.add_parser(name, help=text)
        p.add_argument("--algo", required=True, choices=ALGORITHMS)
        _add_common(p)
        if name == "curve":
            p.add_argument("--grid", type=float, nargs=3, metavar=("LO", "HI", "COUNT"), default=DEFAULT_GRID)
    return parser


def spec_from_args(args: argparse.Namespace) -> ExperimentSpec:
    algorithm = getattr(args, "algo", None) or args.command
    kernel = None
    if algorithm == "spline":
        kernel = MaternKernel(args.gamma, args.length_scale)
        sizes = args.m
        alpha = args.alpha if args.alpha is not None else kernel.space_order
        if sizes is None:
            raise ValueError("spline needs --m")
    else:
        sizes = args.n
        alpha = args.alpha if args.alpha is not None else 1
        if sizes is None:
            raise ValueError("trig needs --n")
    fmt = args.fmt or ("json" if args.out and args.out.endswith(".json") else "csv")
    return ExperimentSpec(
        algorithm=algorithm,
        function_id=args.fn,
        params=ApproximationParams(p=args.p, q=args.q, alpha=alpha, epsilon=args.eps),
        sizes=sizes,
        kernel=kernel,
        alpha_free=args.alpha_free,
        quadrature=QuadratureConfig(panel_width=args.panel_width, nodes_per_panel=args.nodes_per_panel),
        out=args.out,
        fmt=fmt,
    )


def _emit(text: str, out: str | None) -> None:
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        spec = spec_from_args(args)
        if args.command in ALGORITHMS:
            report = run_experiment(spec)
            if not spec.out:
                sys.stdout.write(render_report(report, spec.fmt))
        elif args.command == "points":
            _emit(_render_rows(("algorithm", "n", "point"), export_points(spec)), spec.out)
        else:
            lo, hi, count = args.grid
            grid = np.linspace(lo, hi, int(count))
            header = ("algorithm", "n", "x", "weighted_approx", "weighted_truth")
            _emit(_render_rows(header, export_weighted_curve(spec, grid)), spec.out)
    except (ArithmeticError, np.linalg.LinAlgError) as exc:
        # LinAlgError subclasses ValueError, so this clause must come first
        print(f"approx: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ValueError, KeyError) as exc:
        print(f"approx: invalid spec: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
