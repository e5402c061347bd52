"""Gaussian-weighted error and norm computations.

All integrals use composite Gauss-Legendre rules on panels whose boundaries
include every point where the integrand may lose smoothness: kinks of the
test function, the support edges of the approximant, and the approximant's
own breakpoints (sample nodes, interval joins).
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Sequence

import numpy as np

from .special_functions import gaussian_density_pow, hermite_prob_normalized, log_gaussian_density
from .trig_interp import ApproximationParams


@dataclass(frozen=True)
class QuadratureConfig:
    """Composite Gauss-Legendre settings.

    Parameters
    ----------
    panel_width : float
        Maximum panel width; each gap between consecutive breakpoints is
        split into equal panels no wider than this.
    nodes_per_panel : int
        Gauss-Legendre order on each panel.
    truncation_radius : float or None
        Radius ``R`` of the main integration window ``[-R, R]``. ``None``
        means the support radius of the approximant.
    tail_width : float
        Width of the extra windows ``[R, R + tail_width]`` (and its mirror)
        over which only the test function is integrated.
    breakpoints : tuple of float
        Additional forced panel boundaries.
    """

    panel_width: float = 0.25
    nodes_per_panel: int = 64
    truncation_radius: float | None = None
    tail_width: float = 20.0
    breakpoints: tuple[float, ...] = ()

    def refined(self) -> "QuadratureConfig":
        """Half the panel width and twice the nodes per panel."""
        return replace(self, panel_width=self.panel_width / 2, nodes_per_panel=2 * self.nodes_per_panel)

    def panel_edges(self, a: float, b: float, breakpoints: Iterable[float] = ()) -> np.ndarray:
        """Panel boundaries tiling ``[a, b]`` with every breakpoint inside as an edge."""
        inner = [float(t) for t in (*self.breakpoints, *breakpoints) if a < t < b]
        fixed = np.unique(np.concatenate(([a, b], inner)))
        edges = [fixed[:1]]
        for left, right in zip(fixed[:-1], fixed[1:]):
            count = max(1, math.ceil((right - left) / self.panel_width - 1e-12))
            edges.append(np.linspace(left, right, count + 1)[1:])
        return np.concatenate(edges)

    def panel_count(self, a: float, b: float, breakpoints: Iterable[float] = ()) -> int:
        return len(self.panel_edges(a, b, breakpoints)) - 1

    def rule(self, a: float, b: float, breakpoints: Iterable[float] = ()):
        """Nodes and weights of the composite rule on ``[a, b]``."""
        t, w = np.polynomial.legendre.leggauss(self.nodes_per_panel)
        edges = self.panel_edges(a, b, breakpoints)
        left, right = edges[:-1, None], edges[1:, None]
        half = 0.5 * (right - left)
        nodes = (0.5 * (left + right) + half * t).ravel()
        weights = (half * w).ravel()
        return nodes, weights


def _integrate(integrand: Callable, nodes, weights) -> float:
    # panel-ordered summation keeps results run-to-run identical
    return float(np.sum(integrand(nodes) * weights))


def _plain_values(f, x):
    # evaluate without touching an evaluation counter
    if hasattr(f, "derivative"):
        return f.derivative(0, x)
    return np.asarray(f(x), dtype=float) + 0.0 * x


def _kinks(obj) -> tuple[float, ...]:
    return tuple(getattr(obj, "kinks", ()) or ())


def weighted_lp_error(f, approx, p: float, cfg: QuadratureConfig | None = None) -> float:
    """``(int |f - A(f)|^p rho dx)^(1/p)``.

    ``approx`` is any vectorized callable. When it also provides
    ``weighted(x) = rho^(1/p) A(f)(x)`` for the same ``p`` (the interpolants in
    this package do), the integrand is formed as ``|f rho^(1/p) - weighted|^p``
    so that no ``rho^(-1/p)`` factor is ever evaluated. Approximants exposing
    ``support_radius`` are assumed to vanish outside it.
    """
    if p < 1:
        raise ValueError(f"need p >= 1, got {p}")
    cfg = cfg or QuadratureConfig()
    support = float(getattr(approx, "support_radius", 0.0))
    radius = support if cfg.truncation_radius is None else float(cfg.truncation_radius)
    if radius < support:
        raise ValueError(f"truncation radius {radius} cuts off the approximant support {support}")
    if radius <= 0:
        raise ValueError("need a positive truncation radius for a bare callable approximant")

    breaks = list(_kinks(f))
    if support > 0:
        breaks += [-support, support]
    breaks += list(np.asarray(getattr(approx, "breakpoints", ()), dtype=float))

    use_weighted = hasattr(approx, "weighted") and math.isclose(getattr(approx, "p", -1.0), p)

    def inner(x):
        if use_weighted:
            g = _plain_values(f, x) * gaussian_density_pow(x, 1.0 / p)
            return np.abs(g - approx.weighted(x)) ** p
        diff = np.abs(_plain_values(f, x) - np.asarray(approx(x), dtype=float))
        return diff**p * gaussian_density_pow(x, 1.0)

    def outer(x):
        if support == 0:
            # no declared support: the approximant may be nonzero out here too
            return inner(x)
        return np.abs(_plain_values(f, x)) ** p * gaussian_density_pow(x, 1.0)

    total = _integrate(inner, *cfg.rule(-radius, radius, breaks))
    if cfg.tail_width > 0:
        outer_r = radius + cfg.tail_width
        total += _integrate(outer, *cfg.rule(radius, outer_r, breaks))
        total += _integrate(outer, *cfg.rule(-outer_r, -radius, breaks))
    return total ** (1.0 / p)


def weighted_norm(h, p: float, cfg: QuadratureConfig | None = None) -> float:
    """``||h||_{L^p_rho}`` of a callable, on ``[-R - tail, R + tail]``."""
    cfg = cfg or QuadratureConfig()
    reach = (cfg.truncation_radius or 0.0) + cfg.tail_width
    nodes, weights = cfg.rule(-reach, reach, _kinks(h))
    integrand = np.abs(_plain_values(h, nodes)) ** p * gaussian_density_pow(nodes, 1.0)
    return float(np.sum(integrand * weights)) ** (1.0 / p)


def sobolev_norm(f, alpha: int, q: float, cfg: QuadratureConfig | None = None) -> float:
    """``(sum_{tau<=alpha} int |f^(tau)|^q rho dx)^(1/q)``.

    Integrates over ``[-R - tail_width, R + tail_width]`` with ``R`` from the
    config (0 when unset).
    """
    if q <= 1:
        raise ValueError(f"need q > 1, got {q}")
    if alpha > f.alpha_known:
        raise ValueError(f"{f.id} declares derivatives only up to order {f.alpha_known}")
    cfg = cfg or QuadratureConfig()
    reach = (cfg.truncation_radius or 0.0) + cfg.tail_width
    nodes, weights = cfg.rule(-reach, reach, _kinks(f))
    density = gaussian_density_pow(nodes, 1.0)
    total = sum(
        float(np.sum(np.abs(f.derivative(tau, nodes)) ** q * density * weights)) for tau in range(alpha + 1)
    )
    return total ** (1.0 / q)


def weighted_derivative(f, tau: int, x, p: float, extra_power: float = 0.0):
    """``rho(x)^extra_power * d^tau/dx^tau [f(x) rho(x)^(1/p)]``.

    Uses the product rule with
    ``d^l/dx^l rho^(1/p) = (-1)^l sqrt(l!) p^(-l/2) H_l(x / sqrt(p)) rho^(1/p)``,
    where ``H_l`` is the normalized probabilists' Hermite polynomial. The
    Gaussian factor is applied once, in log space.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros(x.shape)
    y = x / math.sqrt(p)
    for ell in range(tau + 1):
        scale = math.comb(tau, ell) * (-1.0) ** ell * math.sqrt(math.factorial(ell)) * p ** (-ell / 2)
        total = total + scale * hermite_prob_normalized(ell, y) * f.derivative(tau - ell, x)
    return total * np.exp((1.0 / p + extra_power) * log_gaussian_density(x))


def decay_norm_estimate(f, params: ApproximationParams, grid_radius: float, grid_step: float) -> float:
    """Grid maximum of ``|rho^(1/q - 1/p + eps) g^(tau)|`` over ``tau < alpha``.

    Only a lower bound for the supremum over the whole line; a diagnostic.
    """
    if not grid_step > 0:
        raise ValueError("grid_step must be positive")
    count = int(round(2 * grid_radius / grid_step)) + 1
    grid = np.linspace(-grid_radius, grid_radius, count)
    weight = 1.0 / params.q - 1.0 / params.p + params.epsilon
    best = 0.0
    for tau in range(params.alpha):
        values = weighted_derivative(f, tau, grid, params.p, extra_power=weight)
        best = max(best, float(np.max(np.abs(values))))
    return best


def tail_bound(params: ApproximationParams, decay_norm: float, T: float) -> float:
    """Closed-form bound on ``(int_{|x|>T} |f|^p rho dx)^(1/p)``.

    ``(2 / (r p T))^(1/p) (2 pi)^(-r/2) exp(-r T^2 / 2) * decay_norm`` with
    ``r = 1/p - 1/q - eps``.
    """
    if not T > 0:
        raise ValueError("T must be positive")
    p = params.p
    r = 1.0 / p - 1.0 / params.q - params.epsilon
    if r <= 0:
        raise ValueError(f"decay exponent r = {r} must be positive")
    return (2.0 / (r * p * T)) ** (1.0 / p) * (2.0 * math.pi) ** (-r / 2) * math.exp(-r * T * T / 2) * decay_norm


def fit_rate(rows: Sequence[tuple[float, float]]) -> float:
    """Least-squares slope of ``ln(error)`` against ``ln(n)``."""
    rows = list(rows)
    if len(rows) < 3:
        raise ValueError("need at least three (n, error) rows")
    n = np.array([r[0] for r in rows], dtype=float)
    err = np.array([r[1] for r in rows], dtype=float)
    if np.any(err <= 0) or np.any(n <= 0):
        raise ValueError("errors and sample counts must be positive")
    slope, _ = np.polyfit(np.log(n), np.log(err), 1)
    return float(slope)


@dataclass(frozen=True)
class ReportRow:
    n: int
    param: float  # T for trig, m for spline
    error: float


@dataclass
class ConvergenceReport:
    algorithm: str
    function_id: str
    params: ApproximationParams
    rows: list[ReportRow] = field(default_factory=list)
    fitted_rate: float | None = None
    settings: dict = field(default_factory=dict)

    def __post_init__(self):
        self.rows = sorted(self.rows, key=lambda r: r.n)
        if any(r.error <= 0 for r in self.rows):
            raise ValueError("report errors must be strictly positive")

    def finalize(self) -> "ConvergenceReport":
        pairs = [(r.n, r.error) for r in self.rows]
        self.fitted_rate = fit_rate(pairs) if len(pairs) >= 3 else None
        return self

    def running_rates(self) -> list[float | None]:
        pairs = [(r.n, r.error) for r in self.rows]
        return [fit_rate(pairs[: i + 1]) if i >= 2 else None for i in range(len(pairs))]

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "function_id": self.function_id,
            "params": self.params.to_dict(),
            "settings": self.settings,
            "rows": [{"n": r.n, "param_T_or_m": r.param, "error": r.error} for r in self.rows],
            "fitted_rate": self.fitted_rate,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ConvergenceReport":
        return cls(
            algorithm=data["algorithm"],
            function_id=data["function_id"],
            params=ApproximationParams(**data["params"]),
            rows=[ReportRow(int(r["n"]), float(r["param_T_or_m"]), float(r["error"])) for r in data["rows"]],
            fitted_rate=data["fitted_rate"],
            settings=dict(data.get("settings", {})),
        )

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ConvergenceReport":
        return cls.from_dict(json.loads(text))
