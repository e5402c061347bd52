"""Truncated trigonometric interpolation on ``[-T, T]``.

The function is reweighted to ``g = f * rho**(1/p)``, sampled at ``n``
equidistant points of ``[-T, T]``, interpolated by a trigonometric polynomial
built with the FFT, and reweighted back. Outside ``[-T, T]`` the approximant
is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .special_functions import gaussian_density_pow, log_gaussian_density

_LOG_FLOAT_MAX = math.log(np.finfo(float).max)
_EVAL_CHUNK = 4096


@dataclass(frozen=True)
class ApproximationParams:
    """Exponents ``p < q``, Sobolev order ``alpha`` and decay slack ``epsilon``.

    ``epsilon`` defaults to the midpoint ``(q - p) / (2 p q)`` of its
    admissible interval ``(0, (q - p) / (p q))``.
    """

    p: float = 1.0
    q: float = 2.0
    alpha: int = 1
    epsilon: float | None = None

    def __post_init__(self):
        if not (1.0 <= self.p < self.q < math.inf):
            raise ValueError(f"need 1 <= p < q < inf, got p={self.p}, q={self.q}")
        if int(self.alpha) != self.alpha or self.alpha < 1:
            raise ValueError(f"alpha must be a positive integer, got {self.alpha}")
        object.__setattr__(self, "alpha", int(self.alpha))
        upper = self.decay_gap
        if self.epsilon is None:
            object.__setattr__(self, "epsilon", 0.5 * upper)
        elif not (0.0 < self.epsilon < upper):
            raise ValueError(f"epsilon must lie in (0, {upper}), got {self.epsilon}")

    @property
    def decay_gap(self) -> float:
        """``(q - p) / (p q)``, the upper limit for epsilon."""
        return (self.q - self.p) / (self.p * self.q)

    @property
    def rate_exponent(self) -> float:
        """``(q - p) / (p q) - epsilon``, the Gaussian decay rate that sets T."""
        return self.decay_gap - self.epsilon

    def to_dict(self) -> dict:
        return {"p": self.p, "q": self.q, "alpha": self.alpha, "epsilon": self.epsilon}


def select_T(n: int, params: ApproximationParams) -> float:
    """Cutoff ``T = sqrt(2 alpha ln n / ((q-p)/(pq) - epsilon))``."""
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    return math.sqrt(2.0 * params.alpha * math.log(n) / params.rate_exponent)


def default_gamma_fn(n: int) -> float:
    """Slowly growing surrogate for alpha: ``max(ln ln n, 1)``."""
    return max(math.log(math.log(n)), 1.0) if n > 1 else 1.0


def select_T_alpha_free(
    n: int,
    params: ApproximationParams,
    gamma_fn: Callable[[int], float] = default_gamma_fn,
) -> float:
    """Cutoff with ``alpha`` replaced by a nondecreasing ``gamma_fn(n)``.

    ``params.alpha`` is ignored.
    """
    if n < 2:
        raise ValueError(f"need n >= 2, got {n}")
    gamma = float(gamma_fn(n))
    if not gamma > 0:
        raise ValueError(f"gamma_fn({n}) must be positive, got {gamma}")
    return math.sqrt(2.0 * gamma * math.log(n) / params.rate_exponent)


def trig_nodes(n: int, T: float) -> np.ndarray:
    """Equidistant nodes ``xi_j = 2 T j / n - T``, ``j = 0..n-1``."""
    return 2.0 * T * np.arange(n) / n - T


def fourier_basis(k, x, T: float):
    """Orthonormal basis ``exp(2 pi i k (x + T) / (2T)) / sqrt(2T)`` of L2([-T, T])."""
    k = np.asarray(k)
    x = np.asarray(x, dtype=float)
    return np.exp(1j * np.pi * np.multiply.outer(x + T, k) / T) / math.sqrt(2.0 * T)


@dataclass(frozen=True, eq=False)
class TrigInterpolant:
    """Trigonometric interpolant of ``g = f rho^(1/p)`` on ``[-T, T]``.

    ``coeffs[i]`` belongs to frequency ``frequencies[i]``, running from
    ``-(n // 2)`` to ``n // 2``.
    """

    T: float
    n: int
    p: float
    coeffs: np.ndarray

    @property
    def frequencies(self) -> np.ndarray:
        half = self.n // 2
        return np.arange(-half, half + 1)

    @property
    def nodes(self) -> np.ndarray:
        return trig_nodes(self.n, self.T)

    @property
    def support_radius(self) -> float:
        return self.T

    @property
    def breakpoints(self) -> np.ndarray:
        # The interpolation error vanishes at the nodes
        return np.append(self.nodes, self.T)

    def coefficient(self, k: int) -> complex:
        half = self.n // 2
        if abs(k) > half:
            return 0j
        return complex(self.coeffs[k + half])

    def weighted(self, x):
        return evaluate_trig_weighted(self, x)

    def __call__(self, x):
        return evaluate_trig(self, x)


def coefficients_from_samples(samples, T: float) -> np.ndarray:
    """Interpolation coefficients of the samples ``g(xi_j)`` via the FFT.

    With ``phi_k(xi_j) = exp(2 pi i k j / n) / sqrt(2T)`` the quadrature
    ``(2T/n) sum_j g(xi_j) conj(phi_k(xi_j))`` is ``sqrt(2T)/n`` times the
    DFT. For even ``n`` the aliased Nyquist pair ``k = +-n/2`` shares the
    single DFT bin, so each gets half of it.
    """
    samples = np.asarray(samples)
    n = samples.shape[0]
    if n < 1:
        raise ValueError("need at least one sample")
    if not np.all(np.isfinite(samples)):
        raise ValueError("non-finite samples")
    dft = np.fft.fft(samples) * (math.sqrt(2.0 * T) / n)
    half = n // 2
    k = np.arange(-half, half + 1)
    coeffs = dft[k % n]
    if n % 2 == 0:
        coeffs[0] *= 0.5
        coeffs[-1] *= 0.5
    return coeffs


def build_trig_interpolant(f: Callable, n: int, T: float, p: float) -> TrigInterpolant:
    """Sample ``f`` at the ``n`` nodes on ``[-T, T]`` and interpolate ``f rho^(1/p)``.

    ``f`` is called exactly once, on the whole node vector.
    """
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    if not T > 0:
        raise ValueError(f"need T > 0, got {T}")
    xi = trig_nodes(n, T)
    values = np.asarray(f(xi))
    if values.shape != xi.shape:
        values = np.broadcast_to(values, xi.shape)
    g = values * gaussian_density_pow(xi, 1.0 / p)
    coeffs = coefficients_from_samples(g, T)
    coeffs.setflags(write=False)
    return TrigInterpolant(T=float(T), n=int(n), p=float(p), coeffs=coeffs)


def _sum_series(interp: TrigInterpolant, x: np.ndarray) -> np.ndarray:
    k = interp.frequencies
    out = np.empty(x.shape, dtype=float)
    for start in range(0, x.size, _EVAL_CHUNK):
        chunk = x[start : start + _EVAL_CHUNK]
        out[start : start + _EVAL_CHUNK] = (fourier_basis(k, chunk, interp.T) @ interp.coeffs).real
    return out


def evaluate_trig_weighted(interp: TrigInterpolant, x):
    """``I_n(g)(x)``: the interpolant before reweighting, zero outside ``[-T, T]``."""
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.zeros(flat.shape)
    inside = np.abs(flat) <= interp.T
    if np.any(inside):
        out[inside] = _sum_series(interp, flat[inside])
    return out.reshape(x.shape)


def reweight(values, x, p: float):
    """Multiply by ``rho(x)^(-1/p)``, refusing results that would overflow."""
    x = np.asarray(x, dtype=float)
    log_factor = -log_gaussian_density(x) / p
    if np.any(log_factor > _LOG_FLOAT_MAX):
        raise OverflowError(f"rho^(-1/{p}) overflows at |x| = {np.max(np.abs(x)):.6g}")
    return values * np.exp(log_factor)


def evaluate_trig(interp: TrigInterpolant, x):
    """``rho(x)^(-1/p) I_n(g)(x)`` on ``[-T, T]``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    weighted = evaluate_trig_weighted(interp, x)
    inside = np.abs(x) <= interp.T
    out = np.zeros(x.shape)
    if np.any(inside):
        out[inside] = reweight(weighted[inside], x[inside], interp.p)
    return out
