"""Registered manufactured-solution problems on (0, 1).

Every right-hand side is written out by hand as -(alpha u')' + beta u' + gamma u.
"""

from __future__ import annotations

import numpy as np
from numpy.polynomial import Polynomial

from .assembly import Problem
from .projection import SmoothFunction

PI = np.pi


def _const(c):
    c = float(c)
    return lambda x: np.full(np.shape(x), c)


def example1(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0) -> Problem:
    """Constant coefficients, u = sin(pi x)."""
    exact = SmoothFunction(
        value=lambda x: np.sin(PI * x),
        d1=lambda x: PI * np.cos(PI * x),
        d2=lambda x: -PI**2 * np.sin(PI * x),
    )

    def f(x):
        return (alpha * PI**2 + gamma) * np.sin(PI * x) + beta * PI * np.cos(PI * x)

    return Problem(
        name="example1",
        alpha=_const(alpha),
        dalpha=_const(0.0),
        beta=_const(beta),
        gamma=_const(gamma),
        f=f,
        exact=exact,
        constant_coeff=True,
    )


# u = sin(q(x)) with q = x (x^12 - x^11) = x^13 - x^12
def _q(x, d=0):
    x = np.asarray(x, dtype=float)
    return [
        x**13 - x**12,
        13 * x**12 - 12 * x**11,
        156 * x**11 - 132 * x**10,
    ][d]


def _example2_exact() -> SmoothFunction:
    return SmoothFunction(
        value=lambda x: np.sin(_q(x)),
        d1=lambda x: np.cos(_q(x)) * _q(x, 1),
        d2=lambda x: -np.sin(_q(x)) * _q(x, 1) ** 2 + np.cos(_q(x)) * _q(x, 2),
    )


_EXAMPLE2_CASES = {
    1: (np.cos, lambda x: np.asarray(x, dtype=float)),
    2: (_const(0.0), lambda x: np.asarray(x, dtype=float)),
    3: (_const(0.0), _const(0.0)),
}


def example2(case: int) -> Problem:
    """alpha = e^x with (beta, gamma) = (cos x, x), (0, x) or (0, 0)."""
    if case not in _EXAMPLE2_CASES:
        raise KeyError(f"example2 has cases 1-3, got {case}")
    beta, gamma = _EXAMPLE2_CASES[case]
    u = _example2_exact()

    def f(x):
        x = np.asarray(x, dtype=float)
        ex = np.exp(x)
        # -(e^x u')' = -e^x (u'' + u')
        return -ex * (u.d2(x) + u.d1(x)) + beta(x) * u.d1(x) + gamma(x) * u.value(x)

    return Problem(
        name=f"example2-case{case}",
        alpha=np.exp,
        dalpha=np.exp,
        beta=beta,
        gamma=gamma,
        f=f,
        exact=u,
    )


def polynomial(k: int, alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0) -> Problem:
    """Exact solution x(1-x)(x+1/2)^(k-2), a degree-k member of P_k with zero ends."""
    if k < 2:
        raise ValueError("need degree >= 2")
    poly = Polynomial([0, 1, -1]) * Polynomial([0.5, 1]) ** (k - 2)
    d1, d2 = poly.deriv(1), poly.deriv(2)
    exact = SmoothFunction(value=poly, d1=d1, d2=d2)

    def f(x):
        return -alpha * d2(x) + beta * d1(x) + gamma * poly(x)

    return Problem(
        name=f"poly{k}",
        alpha=_const(alpha),
        dalpha=_const(0.0),
        beta=_const(beta),
        gamma=_const(gamma),
        f=f,
        exact=exact,
        constant_coeff=True,
    )


PROBLEM_IDS = ("example1", "example2-case1", "example2-case2", "example2-case3",
               "poly3", "poly4", "poly5")


def get_problem(problem_id: str, alpha: float = 1.0, beta: float = 1.0,
                gamma: float = 1.0) -> Problem:
    """Look up a registered problem; alpha/beta/gamma apply to constant-coefficient ones."""
    if problem_id == "example1":
        return example1(alpha, beta, gamma)
    if problem_id.startswith("example2-case") and problem_id in PROBLEM_IDS:
        return example2(int(problem_id[-1]))
    if problem_id in PROBLEM_IDS and problem_id.startswith("poly"):
        return polynomial(int(problem_id[4:]), alpha, beta, gamma)
    raise KeyError(f"unknown problem {problem_id!r}; available: {', '.join(PROBLEM_IDS)}")


def registry(alpha: float = 1.0, beta: float = 1.0, gamma: float = 1.0) -> list[Problem]:
    return [get_problem(pid, alpha, beta, gamma) for pid in PROBLEM_IDS]
