"""Test functions with exact derivatives, and the built-in corpus."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import hermite as _phys_hermite

Evaluator = Callable[[np.ndarray], np.ndarray]


@dataclass
class TestFunction:
    """A real function on the line with derivative evaluators.

    ``derivatives[j]`` evaluates the ``(j+1)``-th (a.e.) derivative. Calls to
    the instance itself are counted point by point in ``evaluations`` so that
    sampling budgets can be audited.
    """

    __test__ = False  # not a pytest class

    id: str
    value: Evaluator
    derivatives: Sequence[Evaluator] = ()
    kinks: tuple[float, ...] = ()
    alpha_known: int | None = None
    evaluations: int = field(default=0, compare=False)

    def __post_init__(self):
        self.derivatives = tuple(self.derivatives)
        if self.alpha_known is None:
            self.alpha_known = len(self.derivatives)
        if self.alpha_known > len(self.derivatives):
            raise ValueError("alpha_known exceeds the number of derivative evaluators")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        self.evaluations += x.size
        return self.value(x)

    def derivative(self, order: int, x):
        """``order``-th derivative; order 0 is the function itself (uncounted)."""
        x = np.asarray(x, dtype=float)
        if order == 0:
            return np.asarray(self.value(x), dtype=float) + 0.0 * x
        if order < 0 or order > self.alpha_known:
            raise ValueError(
                f"{self.id}: derivative of order {order} not available (alpha_known={self.alpha_known})"
            )
        return np.asarray(self.derivatives[order - 1](x), dtype=float) + 0.0 * x

    def reset_count(self):
        self.evaluations = 0


def _abs_power(k: int, alpha: int) -> TestFunction:
    # d/dx |x|^j = j x|x|^(j-2) and d/dx x|x|^(j-1) = j |x|^(j-1)
    derivs = []
    coef, power, odd = 1.0, k, False
    for _ in range(alpha):
        coef *= power
        power -= 1
        odd = not odd
        derivs.append(_abs_term(coef, power, odd))
    return TestFunction(
        id="abs" if k == 1 else f"abs{k}",
        value=lambda x, k=k: np.abs(x) ** k,
        derivatives=derivs,
        kinks=(0.0,),
        alpha_known=alpha,
    )


def _abs_term(coef, power, odd):
    # coef * |x|^power, times sign(x) when odd
    if odd:
        return lambda x: coef * np.sign(x) * np.abs(x) ** power
    return lambda x: coef * np.abs(x) ** power


def _poly2() -> TestFunction:
    zero = lambda x: np.zeros_like(np.asarray(x, dtype=float))
    return TestFunction(
        id="poly2",
        value=lambda x: x * x,
        derivatives=[lambda x: 2.0 * x, lambda x: 2.0 + 0.0 * x] + [zero] * 6,
        alpha_known=8,
    )


def _sin() -> TestFunction:
    cycle = [np.cos, lambda x: -np.sin(x), lambda x: -np.cos(x), np.sin]
    return TestFunction(
        id="sin", value=np.sin, derivatives=[cycle[j % 4] for j in range(8)], alpha_known=8
    )


def _gauss_bump() -> TestFunction:
    # d^j/dx^j exp(-x^2) = (-1)^j H_j(x) exp(-x^2), H_j physicists' Hermite
    def deriv(j):
        c = np.zeros(j + 1)
        c[j] = (-1.0) ** j
        return lambda x: _phys_hermite.hermval(x, c) * np.exp(-x * x)

    return TestFunction(
        id="gauss_bump",
        value=lambda x: np.exp(-x * x),
        derivatives=[deriv(j) for j in range(1, 9)],
        alpha_known=8,
    )


_CORPUS = {
    "abs": lambda: _abs_power(1, 1),
    "abs3": lambda: _abs_power(3, 3),
    "abs5": lambda: _abs_power(5, 5),
    "poly2": _poly2,
    "sin": _sin,
    "gauss_bump": _gauss_bump,
}

CORPUS_IDS = tuple(_CORPUS)


def corpus_lookup(name: str) -> TestFunction:
    """Fresh instance (with a zeroed evaluation counter) of a corpus function."""
    try:
        return _CORPUS[name]()
    except KeyError:
        raise KeyError(f"unknown test function {name!r}; choose from {', '.join(CORPUS_IDS)}") from None


def from_callable(fn: Callable, name: str = "callable") -> TestFunction:
    """Wrap a bare callable (no derivative information)."""
    return TestFunction(id=name, value=fn, alpha_known=0)
