"""Bernoulli-corrected periodization of ``g = f rho^(1/p)`` on ``[-T, T]``.

``G = g - sum_{tau=1}^{alpha} B_tau^{[-T,T]} / tau! * mu_tau`` with
``mu_tau = int_{-T}^{T} g^(tau)``. The correction makes every derivative of
``G`` below order ``alpha`` take equal values at ``-T`` and ``T``. Nothing in
the approximation algorithms uses ``G``; it exists to check that property.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .error_metrics import QuadratureConfig, weighted_derivative
from .special_functions import scaled_bernoulli
from .trig_interp import ApproximationParams


@dataclass(frozen=True, eq=False)
class AuxiliaryG:
    f: object
    T: float
    alpha: int
    p: float
    moments: np.ndarray  # moments[tau - 1] = int g^(tau), tau = 1..alpha

    def base(self, tau: int, x):
        """``g^(tau)(x)``."""
        return weighted_derivative(self.f, tau, x, self.p)

    def correction(self, tau: int, x):
        """``tau``-th derivative of the Bernoulli correction ``g - G``."""
        x = np.asarray(x, dtype=float)
        total = np.zeros(x.shape)
        for order in range(max(tau, 1), self.alpha + 1):
            j = order - tau
            total = total + scaled_bernoulli(j, self.T, x) / math.factorial(j) * self.moments[order - 1]
        return total

    def derivative(self, tau: int, x):
        """``G^(tau)(x)`` for ``0 <= tau <= alpha`` and ``x`` in ``[-T, T]``."""
        if not 0 <= tau <= self.alpha:
            raise ValueError(f"derivative order must lie in [0, {self.alpha}]")
        return self.base(tau, x) - self.correction(tau, x)

    def __call__(self, x):
        return self.derivative(0, x)


def _rule(f, T: float, cfg: QuadratureConfig):
    return cfg.rule(-T, T, getattr(f, "kinks", ()))


def build_auxiliary_G(f, params: ApproximationParams, T: float, cfg: QuadratureConfig | None = None) -> AuxiliaryG:
    if not T > 0:
        raise ValueError("T must be positive")
    alpha = params.alpha
    if alpha > f.alpha_known:
        raise ValueError(f"{f.id} declares derivatives only up to order {f.alpha_known}, need {alpha}")
    cfg = cfg or QuadratureConfig()
    nodes, weights = _rule(f, T, cfg)
    moments = np.array(
        [float(np.sum(weighted_derivative(f, tau, nodes, params.p) * weights)) for tau in range(1, alpha + 1)]
    )
    moments.setflags(write=False)
    return AuxiliaryG(f=f, T=float(T), alpha=alpha, p=params.p, moments=moments)


def check_boundary_matching(aux: AuxiliaryG) -> np.ndarray:
    """``|G^(tau)(T) - G^(tau)(-T)| / (1 + |G^(tau)(T)|)`` for ``tau = 0..alpha-1``."""
    ends = np.array([-aux.T, aux.T])
    out = []
    for tau in range(aux.alpha):
        left, right = aux.derivative(tau, ends)
        out.append(abs(right - left) / (1.0 + abs(right)))
    return np.array(out)


def derivative_means(aux: AuxiliaryG, cfg: QuadratureConfig | None = None) -> np.ndarray:
    """``|int G^(tau)| / int |G^(tau)|`` over ``[-T, T]`` for ``tau = 1..alpha``."""
    cfg = cfg or QuadratureConfig()
    nodes, weights = _rule(aux.f, aux.T, cfg)
    out = []
    for tau in range(1, aux.alpha + 1):
        values = aux.derivative(tau, nodes)
        scale = float(np.sum(np.abs(values) * weights))
        signed = abs(float(np.sum(values * weights)))
        out.append(signed / scale if scale > 0 else signed)
    return np.array(out)
