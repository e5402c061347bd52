"""Closed-form special functions.

Normalized probabilists' Hermite polynomials, standard and scaled Bernoulli
polynomials, half-integer Matérn kernels and powers of the standard Gaussian
density. Everything here is vectorized over the real argument.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

MAX_HERMITE_DEGREE = 32
MAX_BERNOULLI_DEGREE = 32

_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)
# exp() overflows just above this
_LOG_FLOAT_MAX = math.log(np.finfo(float).max)


def hermite_prob_normalized(ell, x):
    """Probabilists' Hermite polynomial scaled by ``1/sqrt(ell!)``.

    ``H_ell(x) = (-1)^ell / sqrt(ell!) * exp(x^2/2) * d^ell/dx^ell exp(-x^2/2)``,
    evaluated with the recurrence
    ``sqrt(ell+1) H_{ell+1} = x H_ell - sqrt(ell) H_{ell-1}``.
    """
    ell = int(ell)
    if ell < 0 or ell > MAX_HERMITE_DEGREE:
        raise ValueError(f"Hermite degree must lie in [0, {MAX_HERMITE_DEGREE}], got {ell}")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if ell == 0:
        return h_prev
    h = x.copy()
    for j in range(1, ell):
        h_prev, h = h, (x * h - math.sqrt(j) * h_prev) / math.sqrt(j + 1)
    return h


@lru_cache(maxsize=None)
def _bernoulli_coefficients(tau: int) -> tuple[Fraction, ...]:
    # Exact monomial coefficients (lowest degree first) from B_0 = 1,
    # B_tau' = tau * B_{tau-1} and int_0^1 B_tau = 0.
    if tau == 0:
        return (Fraction(1),)
    prev = _bernoulli_coefficients(tau - 1)
    coeffs = [Fraction(0)] + [tau * c / (j + 1) for j, c in enumerate(prev)]
    coeffs[0] = -sum(c / (j + 1) for j, c in enumerate(coeffs))
    return tuple(coeffs)


def bernoulli_poly(tau, t):
    """Standard Bernoulli polynomial ``B_tau(t)``."""
    tau = int(tau)
    if tau < 0 or tau > MAX_BERNOULLI_DEGREE:
        raise ValueError(f"Bernoulli degree must lie in [0, {MAX_BERNOULLI_DEGREE}], got {tau}")
    coeffs = [float(c) for c in _bernoulli_coefficients(tau)]
    return np.polynomial.polynomial.polyval(np.asarray(t, dtype=float), coeffs)


def scaled_bernoulli(tau, T, x):
    """Bernoulli polynomial rescaled to ``[-T, T]``.

    ``B_tau^{[-T,T]}(x) = (2T)^(tau-1) * B_tau((x + T) / (2T))``.
    """
    if T <= 0:
        raise ValueError("T must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(np.abs(x) > T):
        raise ValueError(f"argument outside [-{T}, {T}]")
    return (2.0 * T) ** (int(tau) - 1) * bernoulli_poly(tau, (x + T) / (2.0 * T))


@dataclass(frozen=True)
class MaternKernel:
    """Matérn kernel ``K(x, y) = Phi(|x - y|)`` of half-integer order.

    Parameters
    ----------
    gamma : float
        Order, one of 1/2, 3/2, 5/2, 7/2. The kernel reproduces a space
        norm-equivalent to the Sobolev space of order ``gamma + 1/2``.
    length_scale : float
        Positive scale ``l``.
    """

    gamma: float
    length_scale: float = 1.0

    def __post_init__(self):
        two_gamma = 2.0 * self.gamma
        if not (two_gamma == round(two_gamma) and int(round(two_gamma)) in (1, 3, 5, 7)):
            raise ValueError(f"Matérn order must be one of 1/2, 3/2, 5/2, 7/2, got {self.gamma}")
        if not self.length_scale > 0:
            raise ValueError("length_scale must be positive")

    @property
    def half_order(self) -> int:
        """``k`` such that ``gamma = k + 1/2``."""
        return int(round(self.gamma - 0.5))

    @property
    def space_order(self) -> int:
        """Sobolev order ``gamma + 1/2`` of the reproduced space."""
        return self.half_order + 1

    def __call__(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        return matern_phi(self, np.abs(x - y))

    def gram(self, points) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        return matern_phi(self, np.abs(points[:, None] - points[None, :]))


@lru_cache(maxsize=None)
def _matern_poly(k: int) -> tuple[float, ...]:
    # Phi(r) = exp(-z) * sum_i c_i z^i with z = sqrt(2 gamma) r / l, gamma = k + 1/2
    scale = math.factorial(k) / math.factorial(2 * k)
    coeffs = [0.0] * (k + 1)
    for i in range(k + 1):
        power = k - i
        coeffs[power] = (
            scale * math.factorial(k + i) / (math.factorial(i) * math.factorial(k - i)) * 2.0**power
        )
    return tuple(coeffs)


def matern_phi(kernel: MaternKernel, r):
    """Radial profile ``Phi_gamma(r)`` of a half-integer Matérn kernel."""
    r = np.asarray(r, dtype=float)
    if np.any(r < 0):
        raise ValueError("Matérn radius must be non-negative")
    z = math.sqrt(2.0 * kernel.gamma) * r / kernel.length_scale
    return np.polynomial.polynomial.polyval(z, _matern_poly(kernel.half_order)) * np.exp(-z)


def gaussian_density_pow(x, s):
    """``rho(x)**s`` for the standard normal density, computed in log space.

    Raises
    ------
    OverflowError
        If the result is not representable (negative ``s`` far in the tails).
    """
    x = np.asarray(x, dtype=float)
    log_value = s * (-0.5 * x * x - _LOG_SQRT_2PI)
    if np.any(log_value > _LOG_FLOAT_MAX):
        raise OverflowError(f"rho(x)**{s} overflows for |x| = {np.max(np.abs(x)):.6g}")
    return np.exp(log_value)


def log_gaussian_density(x):
    x = np.asarray(x, dtype=float)
    return -0.5 * x * x - _LOG_SQRT_2PI
