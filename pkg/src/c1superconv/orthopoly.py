"""Legendre and Jacobi polynomials, Gauss rules and special point families.

Jacobi polynomials use the standard normalization, J_n^{r,l}(1) = binom(n+r, n),
orthogonal on (-1, 1) for the weight (1-s)^r (1+s)^l.  For both indices
in {-1, -2} the definition is extended by

    J_n^{r,l}(s) = (1-s)^{-r} (1+s)^{-l} J_{n+r+l}^{-r,-l}(s),

so that e.g. J_n^{-2,-2} vanishes together with its first derivative at both
endpoints.  Derivatives of any order go through

    d/ds J_n^{r,l} = C_n^{r,l} J_{n-1}^{r+1,l+1}

which lands in the classical family after at most two steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

ROOT_TOL = 1e-14
ROOT_MAXITER = 100
MAX_GAUSS_POINTS = 64


@dataclass(frozen=True)
class JacobiIndex:
    """Pair of Jacobi parameters (r, l) for the weight (1-s)^r (1+s)^l."""

    r: float
    l: float

    def __post_init__(self):
        if not (self.classical or self.extended):
            raise ValueError(
                f"unsupported Jacobi index ({self.r}, {self.l}): need r, l > -1 "
                "or r, l in {-1, -2}"
            )

    @property
    def classical(self) -> bool:
        return self.r > -1 and self.l > -1

    @property
    def extended(self) -> bool:
        return self.r in (-1, -2) and self.l in (-1, -2)

    def weight(self, s):
        s = np.asarray(s, dtype=float)
        return (1.0 - s) ** self.r * (1.0 + s) ** self.l

    def shifted(self, by: int = 1) -> "JacobiIndex":
        return JacobiIndex(self.r + by, self.l + by)


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre rule on [-1, 1]."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def m(self) -> int:
        return len(self.nodes)

    @property
    def exactness(self) -> int:
        """Highest polynomial degree integrated exactly."""
        return 2 * self.m - 1

    def mapped(self, left: float, right: float):
        """Nodes and weights affinely mapped to [left, right]."""
        half = 0.5 * (right - left)
        return left + half * (self.nodes + 1.0), half * self.weights

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))


def _as_index(idx) -> JacobiIndex:
    if isinstance(idx, JacobiIndex):
        return idx
    r, l = idx
    return JacobiIndex(r, l)


def _wrap(s, out):
    return float(out) if np.ndim(s) == 0 else out


def cn(n: int) -> float:
    """Constant in d^2/ds^2 J_n^{-2,-2} = cn(n) L_{n-2}."""
    return 4.0 * (n - 3) * (n - 2)


def deriv_coeff(n: int, r: float, l: float) -> float:
    """C_n^{r,l} of the derivative recurrence d/ds J_n^{r,l} = C J_{n-1}^{r+1,l+1}."""
    if r <= -1 and l <= -1:
        return -2.0 * (n + r + l + 1)
    if r <= -1 or l <= -1:
        return -float(n)
    return 0.5 * (n + r + l + 1)


def kappa(n: int, idx) -> float:
    """Squared weighted norm of the classical J_n^{r,l}."""
    idx = _as_index(idx)
    if not idx.classical:
        raise ValueError("kappa is only defined for classical indices r, l > -1")
    if n < 0:
        raise ValueError("degree must be non-negative")
    r, l = idx.r, idx.l
    if n == 0:
        return 2.0 ** (r + l + 1) * math.gamma(r + 1) * math.gamma(l + 1) / math.gamma(r + l + 2)
    return (
        2.0 ** (r + l + 1)
        * math.gamma(n + r + 1)
        * math.gamma(n + l + 1)
        / ((2 * n + r + l + 1) * math.gamma(n + 1) * math.gamma(n + r + l + 1))
    )


def _classical(n: int, a: float, b: float, s: np.ndarray) -> np.ndarray:
    p_prev = np.ones_like(s)
    if n == 0:
        return p_prev
    p = (a + 1.0) + 0.5 * (a + b + 2.0) * (s - 1.0)
    for j in range(2, n + 1):
        c = 2 * j + a + b
        a1 = 2 * j * (j + a + b) * (c - 2)
        a2 = (c - 1) * (c * (c - 2) * s + a * a - b * b)
        a3 = 2 * (j + a - 1) * (j + b - 1) * c
        p_prev, p = p, (a2 * p - a3 * p_prev) / a1
    return p


def _jacobi(n: int, idx: JacobiIndex, s: np.ndarray, d: int) -> np.ndarray:
    if d > 0:
        if idx.classical and n == 0:
            return np.zeros_like(s)
        c = deriv_coeff(n, idx.r, idx.l)
        return c * _jacobi(n - 1, idx.shifted(), s, d - 1)
    if idx.classical:
        return _classical(n, idx.r, idx.l, s)
    # product form, evaluated directly so the endpoints give exact zeros
    core = _classical(int(n + idx.r + idx.l), -idx.r, -idx.l, s)
    return (1.0 - s) ** int(-idx.r) * (1.0 + s) ** int(-idx.l) * core


def jacobi_eval(n: int, idx, s, d: int = 0):
    """d-th derivative (d = 0, 1, 2) of J_n^{r,l} at s (scalar or array)."""
    idx = _as_index(idx)
    if d not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {d}")
    if n < 0:
        raise ValueError("degree must be non-negative")
    if idx.extended and n + idx.r + idx.l < 0:
        raise ValueError(
            f"J_{n}^{{{idx.r},{idx.l}}} needs n >= {-(idx.r + idx.l):g}"
        )
    sa = np.asarray(s, dtype=float)
    return _wrap(s, _jacobi(n, idx, sa, d))


def legendre_eval(n: int, s, d: int = 0):
    """d-th derivative of the Legendre polynomial L_n."""
    return jacobi_eval(n, JacobiIndex(0, 0), s, d)


def legendre_table(n_max: int, s, d: int = 0) -> np.ndarray:
    """Rows L_0..L_{n_max} (or their d-th derivatives) at the points s."""
    s = np.atleast_1d(np.asarray(s, dtype=float))
    return np.array([legendre_eval(n, s, d) for n in range(n_max + 1)])


def _jacobi_matrix(n: int, a: float, b: float):
    j = np.arange(n, dtype=float)
    c = 2 * j + a + b
    diag = np.empty(n)
    diag[0] = (b - a) / (a + b + 2)
    if n > 1:
        diag[1:] = (b * b - a * a) / (c[1:] * (c[1:] + 2))
    k = np.arange(1, n, dtype=float)
    ck = 2 * k + a + b
    off = 2.0 / ck * np.sqrt(k * (k + a) * (k + b) * (k + a + b) / ((ck - 1) * (ck + 1)))
    return diag, off


def _newton_polish(n: int, a: float, b: float, x: np.ndarray) -> np.ndarray:
    idx = JacobiIndex(a, b)
    for _ in range(ROOT_MAXITER):
        step = _classical(n, a, b, x) / jacobi_eval(n, idx, x, 1)
        x = x - step
        if np.max(np.abs(step)) < ROOT_TOL:
            break
    return x


def jacobi_roots(n: int, r: float, l: float) -> np.ndarray:
    """Sorted roots of the classical J_n^{r,l}.

    Eigenvalues of the symmetric tridiagonal Jacobi matrix, polished by Newton.
    """
    if n == 0:
        return np.empty(0)
    diag, off = _jacobi_matrix(n, r, l)
    x = eigh_tridiagonal(diag, off, eigvals_only=True)
    return np.sort(_newton_polish(n, r, l, x))


def gauss_rule(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule."""
    if not 1 <= m <= MAX_GAUSS_POINTS:
        raise ValueError(f"point count must lie in [1, {MAX_GAUSS_POINTS}], got {m}")
    x = jacobi_roots(m, 0.0, 0.0)
    # symmetrize to kill eigensolver round-off
    x = 0.5 * (x - x[::-1])
    dl = legendre_eval(m, x, 1)
    w = 2.0 / ((1.0 - x * x) * dl * dl)
    return QuadratureRule(nodes=x, weights=w)


def interior_lobatto_points(k: int) -> np.ndarray:
    """The k-2 interior zeros of d/ds J_{k+1}^{-2,-2}, i.e. roots of J_{k-2}^{1,1}."""
    if k < 3:
        raise ValueError(f"trial degree must be >= 3, got {k}")
    x = jacobi_roots(k - 2, 1.0, 1.0)
    return 0.5 * (x - x[::-1])


def jacobi_m2_roots(k: int) -> np.ndarray:
    """The k-3 interior zeros of J_{k+1}^{-2,-2}, i.e. roots of J_{k-3}^{2,2}."""
    if k < 3:
        raise ValueError(f"trial degree must be >= 3, got {k}")
    x = jacobi_roots(k - 3, 2.0, 2.0)
    return 0.5 * (x - x[::-1])
