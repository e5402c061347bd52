"""Interval-partitioned spline smoothing on ``[-m, m]``.

The truncated line is cut into the unit intervals ``I_k`` (``[k-1, k]`` for
``k >= 1`` and ``[k, k+1]`` for ``k <= -1``). Interval ``I_{+-k}`` receives
``2**(m-k)`` equispaced points, and on each interval a Matérn-kernel spline
smoother is fitted to ``g = f rho^(1/p)``. The assembled approximant is
``rho^(-1/p)`` times the smoother owning the evaluation point, and zero
outside ``[-m, m]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.linalg import lapack

from .special_functions import MaternKernel, gaussian_density_pow
from .trig_interp import reweight

MAX_LEVEL = 24
MAX_CONDITION = 1e14


class SingularSystemError(np.linalg.LinAlgError, ArithmeticError):
    """The regularized Gram matrix is numerically singular."""


def allocate_points(m: int) -> tuple[tuple[int, ...], int]:
    """Per-interval counts ``nu_k = 2**(m-k)``, ``k = 1..m``, and the total ``2(2**m - 1)``."""
    if int(m) != m or not 1 <= m <= MAX_LEVEL:
        raise ValueError(f"level m must be an integer in [1, {MAX_LEVEL}], got {m}")
    m = int(m)
    nu = tuple(2 ** (m - k) for k in range(1, m + 1))
    return nu, 2 * sum(nu)


def interval_left(k: int) -> int:
    if k == 0:
        raise ValueError("interval index must be nonzero")
    return k - 1 if k > 0 else k


def interval_points(nu: int, k: int) -> np.ndarray:
    """The ``nu`` interior points ``left(I_k) + i/(nu+1)``, ``i = 1..nu``."""
    if nu < 1:
        raise ValueError(f"need nu >= 1, got {nu}")
    return interval_left(k) + np.arange(1, nu + 1) / (nu + 1)


def fill_distance(points, left: float, right: float) -> float:
    pts = np.concatenate(([left], np.sort(np.asarray(points, dtype=float)), [right]))
    return float(np.max(np.diff(pts)))


@dataclass(frozen=True, eq=False)
class IntervalSmoother:
    """Spline smoother ``s(x) = sum_i a_i K(x, x_i)`` on one interval."""

    interval_index: int
    points: np.ndarray
    values: np.ndarray
    coefficients: np.ndarray
    kernel: MaternKernel
    lam: float

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        basis = self.kernel(x[..., None], self.points)
        return basis @ self.coefficients

    def objective(self, coefficients=None) -> float:
        """``sum_i (f(x_i) - s(x_i))^2 + lam * a^T K a`` for the given coefficients."""
        a = self.coefficients if coefficients is None else np.asarray(coefficients, dtype=float)
        gram = self.kernel.gram(self.points)
        fitted = gram @ a
        return float(np.sum((self.values - fitted) ** 2) + self.lam * a @ gram @ a)


def fit_interval_smoother(points, values, kernel: MaternKernel, lam: float, interval_index: int = 1):
    """Solve ``(K + lam I) a = f`` by Cholesky.

    Raises
    ------
    SingularSystemError
        If the factorization fails or the estimated condition number of
        ``K + lam I`` exceeds 1e14.
    """
    if not lam > 0:
        raise ValueError(f"regularization must be positive, got {lam}")
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    if points.shape != values.shape or points.ndim != 1:
        raise ValueError("points and values must be 1-d arrays of equal length")
    if np.any(np.diff(np.sort(points)) <= 0):
        raise ValueError("sample points must be distinct")

    system = kernel.gram(points) + lam * np.eye(points.size)
    anorm = np.linalg.norm(system, 1)
    factor, info = lapack.dpotrf(system, lower=False, clean=True)
    if info != 0:
        raise SingularSystemError(f"Cholesky factorization failed (info={info})")
    rcond, info = lapack.dpocon(factor, anorm)
    if info != 0 or rcond * MAX_CONDITION < 1.0:
        raise SingularSystemError(f"shifted Gram matrix is ill-conditioned (rcond={rcond:.3g})")
    coefficients, info = lapack.dpotrs(factor, values)
    # one step of iterative refinement
    residual = values - system @ coefficients
    correction, _ = lapack.dpotrs(factor, residual)
    coefficients = coefficients + correction

    for arr in (points, values, coefficients):
        arr.setflags(write=False)
    return IntervalSmoother(
        interval_index=interval_index,
        points=points,
        values=values,
        coefficients=coefficients,
        kernel=kernel,
        lam=float(lam),
    )


@dataclass(frozen=True, eq=False)
class SplineApproximant:
    """Sum of ``2m`` interval smoothers, reweighted by ``rho^(-1/p)``."""

    m: int
    p: float
    smoothers: tuple[IntervalSmoother, ...]

    @property
    def n(self) -> int:
        return sum(s.points.size for s in self.smoothers)

    @property
    def support_radius(self) -> float:
        return float(self.m)

    @property
    def points(self) -> np.ndarray:
        return np.sort(np.concatenate([s.points for s in self.smoothers]))

    @property
    def breakpoints(self) -> np.ndarray:
        # interval joins and kernel centres, where the smoother loses smoothness
        joins = np.arange(-self.m, self.m + 1, dtype=float)
        return np.union1d(joins, self.points)

    def smoother(self, k: int) -> IntervalSmoother:
        for s in self.smoothers:
            if s.interval_index == k:
                return s
        raise KeyError(k)

    def weighted(self, x):
        return evaluate_spline_weighted(self, x)

    def __call__(self, x):
        return evaluate_spline(self, x)


def regularization(nu: int, order: int) -> float:
    """``lam_nu = nu**(-2 * order)``."""
    return float(nu) ** (-2 * order)


def build_spline_approximant(
    f: Callable,
    m: int,
    kernel: MaternKernel = MaternKernel(1.5),
    alpha: int | None = None,
    p: float = 1.0,
) -> SplineApproximant:
    """Fit the ``2m`` interval smoothers to ``g = f rho^(1/p)``.

    The regularization on an interval with ``nu`` points is
    ``nu**(-2 * kernel.space_order)``. ``alpha`` is the smoothness the caller
    assumes for ``f``; it may not exceed the kernel's space order.

    ``f`` is called once per interval, ``2(2**m - 1)`` points in total.
    """
    nu, _ = allocate_points(m)
    order = kernel.space_order
    if alpha is not None and alpha > order:
        raise ValueError(
            f"kernel of order gamma={kernel.gamma} reproduces smoothness {order} < alpha={alpha}"
        )
    smoothers = []
    for k in list(range(-m, 0)) + list(range(1, m + 1)):
        count = nu[abs(k) - 1]
        pts = interval_points(count, k)
        g = np.asarray(f(pts), dtype=float) * gaussian_density_pow(pts, 1.0 / p)
        smoothers.append(fit_interval_smoother(pts, g, kernel, regularization(count, order), k))
    return SplineApproximant(m=int(m), p=float(p), smoothers=tuple(smoothers))


def owning_interval(x, m: int) -> np.ndarray:
    """Index ``k`` of the interval owning each point (0 outside ``[-m, m]``).

    At an interior integer the interval to its left wins.
    """
    x = np.asarray(x, dtype=float)
    k = np.where(x > 0, np.ceil(x), np.maximum(np.ceil(x) - 1, -m))
    k = np.where(np.abs(x) > m, 0, k)
    return k.astype(int)


def evaluate_spline_weighted(approx: SplineApproximant, x):
    """The smoother value ``s_k(x)`` (that is, ``rho^(1/p) A(f)(x)``), zero outside ``[-m, m]``."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    owner = owning_interval(flat, approx.m)
    out = np.zeros(flat.shape)
    for s in approx.smoothers:
        mask = owner == s.interval_index
        if np.any(mask):
            out[mask] = s(flat[mask])
    return out.reshape(x.shape)


def evaluate_spline(approx: SplineApproximant, x):
    x = np.asarray(x, dtype=float)
    weighted = evaluate_spline_weighted(approx, x)
    inside = np.abs(x) <= approx.m
    out = np.zeros(x.shape)
    if np.any(inside):
        out[inside] = reweight(weighted[inside], x[inside], approx.p)
    return out

