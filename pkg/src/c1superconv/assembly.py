"""Petrov-Galerkin and Gauss collocation systems for

    -(alpha u')' + beta u' + gamma u = f  on (a, b),   u(a) = u(b) = 0,

with trial space V_h^0 (C^1, degree k) and, for Petrov-Galerkin, the
discontinuous test space of degree k-2 spanned per element by Legendre
polynomials L_0..L_{k-2}.  The operator is applied in the expanded form
-alpha u'' - alpha' u' + beta u' + gamma u, so variable alpha needs its
derivative supplied analytically.

Rows are element-major: row e*(k-1) + j belongs to element e+1 and test
index j (Legendre degree for PG, Gauss point for collocation).
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import lu_factor, lu_solve
from scipy.linalg.lapack import dgecon

from .c1space import C1Function, DofLayout, local_shape, slope_scaling
from .mesh import Mesh1D
from .orthopoly import gauss_rule, legendre_table
from .projection import SmoothFunction

CONDITION_LIMIT = 1e14


class SingularSystemError(RuntimeError):
    pass


class IllConditionedWarning(UserWarning):
    pass


@dataclass
class Problem:
    """Two-point boundary value problem with a manufactured exact solution."""

    name: str
    alpha: Callable
    dalpha: Callable
    beta: Callable
    gamma: Callable
    f: Callable
    exact: SmoothFunction
    constant_coeff: bool = False
    domain: tuple[float, float] = (0.0, 1.0)

    def coefficient(self, which: str, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.broadcast_to(np.asarray(getattr(self, which)(x), dtype=float), x.shape)

    def residual(self, u: SmoothFunction, x) -> np.ndarray:
        """(-(alpha u')' + beta u' + gamma u - f)(x) for a smooth u."""
        c = {n: self.coefficient(n, x) for n in ("alpha", "dalpha", "beta", "gamma", "f")}
        return (-c["alpha"] * u.d2(x) + (c["beta"] - c["dalpha"]) * u.d1(x)
                + c["gamma"] * u.value(x) - c["f"])

    def validate(self, seed: int = 0) -> None:
        a, b = self.domain
        x = np.linspace(a, b, 1000)
        if not np.min(self.coefficient("alpha", x)) > 0:
            raise ValueError(f"{self.name}: alpha must be bounded below by a positive constant")
        if self.constant_coeff:
            xr = np.random.default_rng(seed).uniform(a, b, 100)
            for which in ("alpha", "beta", "gamma"):
                v = self.coefficient(which, xr)
                if np.ptp(v) != 0:
                    raise ValueError(f"{self.name}: {which} flagged constant but varies")
            if np.any(self.coefficient("dalpha", xr) != 0):
                raise ValueError(f"{self.name}: constant alpha with nonzero derivative")


@dataclass
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    row_labels: np.ndarray  # (n, 2): element (1-based), test index
    method: str
    mesh: Mesh1D
    k: int

    @property
    def size(self) -> int:
        return len(self.rhs)

    def dump_triplets(self, path) -> None:
        """Nonzero entries as 'row col value' lines, then the rhs as 'row -1 value'."""
        rows, cols = np.nonzero(self.matrix)
        with open(path, "w") as fh:
            for r, c in zip(rows, cols):
                fh.write(f"{r} {c} {self.matrix[r, c]:.17g}\n")
            for r, v in enumerate(self.rhs):
                fh.write(f"{r} -1 {v:.17g}\n")


@dataclass
class SolveResult:
    coeffs: np.ndarray
    condition: float
    ill_conditioned: bool = False
    messages: list = field(default_factory=list)


def _operator_on_basis(p: Problem, mesh: Mesh1D, k: int, s: np.ndarray):
    """L phi_a at reference points s in every element: (N, len(s), k+1), plus x."""
    x = mesh.map_reference(s)
    h = mesh.h[:, None, None]
    phi = [local_shape(k, s, d)[None, :, :] for d in range(3)]
    alpha = p.coefficient("alpha", x)[..., None]
    drift = (p.coefficient("beta", x) - p.coefficient("dalpha", x))[..., None]
    gamma = p.coefficient("gamma", x)[..., None]
    op = -alpha * phi[2] * (2.0 / h) ** 2 + drift * phi[1] * (2.0 / h) + gamma * phi[0]
    return op * slope_scaling(mesh, k)[:, None, :], x


def _scatter(blocks: np.ndarray, layout: DofLayout) -> np.ndarray:
    """Place (N, k-1, k+1) element blocks into the global matrix."""
    N, nt, _ = blocks.shape
    A = np.zeros((N * nt, layout.ndofs))
    ids = layout.element_dofs
    for e in range(N):
        keep = ids[e] >= 0
        A[e * nt:(e + 1) * nt, ids[e][keep]] = blocks[e][:, keep]
    return A


def _labels(N: int, nt: int) -> np.ndarray:
    e, j = np.meshgrid(np.arange(1, N + 1), np.arange(nt), indexing="ij")
    return np.column_stack([e.ravel(), j.ravel()])


def assemble_pg(p: Problem, mesh: Mesh1D, k: int, quad_points: int | None = None) -> LinearSystem:
    """Petrov-Galerkin system; quad_points defaults to k+4 per element."""
    if k < 3:
        raise ValueError(f"degree must be >= 3, got {k}")
    q = k + 4 if quad_points is None else quad_points
    rule = gauss_rule(q)
    op, x = _operator_on_basis(p, mesh, k, rule.nodes)
    test = legendre_table(k - 2, rule.nodes)  # (k-1, q)
    wt = 0.5 * mesh.h[:, None] * rule.weights[None, :]  # (N, q)
    blocks = np.einsum("jq,eq,eqa->eja", test, wt, op)
    rhs = np.einsum("jq,eq,eq->ej", test, wt, p.coefficient("f", x)).ravel()
    layout = DofLayout.build(mesh.N, k)
    return LinearSystem(_scatter(blocks, layout), rhs, _labels(mesh.N, k - 1), "pg", mesh, k)


def assemble_collocation(p: Problem, mesh: Mesh1D, k: int) -> LinearSystem:
    """Strong form enforced at the k-1 Gauss points of every element."""
    if k < 3:
        raise ValueError(f"degree must be >= 3, got {k}")
    rule = gauss_rule(k - 1)
    op, x = _operator_on_basis(p, mesh, k, rule.nodes)
    rhs = p.coefficient("f", x).ravel()
    layout = DofLayout.build(mesh.N, k)
    return LinearSystem(_scatter(op, layout), rhs, _labels(mesh.N, k - 1), "gauss", mesh, k)


def weighted_collocation_matrix(sys: LinearSystem) -> np.ndarray:
    """Collocation rows combined with Gauss weights against the Legendre tests.

    For the same operator this equals the PG matrix assembled with the
    (k-1)-point rule.
    """
    k, mesh = sys.k, sys.mesh
    rule = gauss_rule(k - 1)
    test = legendre_table(k - 2, rule.nodes)  # (k-1 tests, k-1 points)
    out = np.empty_like(sys.matrix)
    nt = k - 1
    for e in range(mesh.N):
        rows = slice(e * nt, (e + 1) * nt)
        w = 0.5 * mesh.h[e] * rule.weights
        out[rows] = (test * w) @ sys.matrix[rows]
    return out


def solve(sys: LinearSystem) -> SolveResult:
    """Dense LU with partial pivoting plus a 1-norm condition estimate."""
    A = sys.matrix
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        lu, piv = lu_factor(A)
    if np.any(np.diag(lu) == 0.0):
        raise SingularSystemError(
            f"singular {sys.method} system (N={sys.mesh.N}, k={sys.k})"
        )
    coeffs = lu_solve((lu, piv), sys.rhs)
    rcond, info = dgecon(lu, np.linalg.norm(A, 1), norm="1")
    condition = np.inf if rcond == 0 else 1.0 / rcond
    result = SolveResult(coeffs=coeffs, condition=float(condition))
    if condition > CONDITION_LIMIT:
        msg = f"{sys.method} system N={sys.mesh.N}, k={sys.k}: condition estimate {condition:.3e}"
        result.ill_conditioned = True
        result.messages.append(msg)
        warnings.warn(msg, IllConditionedWarning, stacklevel=2)
    return result


def solve_problem(p: Problem, mesh: Mesh1D, k: int, method: str = "pg",
                  quad_points: int | None = None) -> tuple[C1Function, SolveResult]:
    """Assemble, solve and wrap the coefficients as a C1Function."""
    if method == "pg":
        sys = assemble_pg(p, mesh, k, quad_points)
    elif method == "gauss":
        sys = assemble_collocation(p, mesh, k)
    else:
        raise ValueError(f"unknown method {method!r}; use 'pg' or 'gauss'")
    res = solve(sys)
    return C1Function(mesh, k, res.coeffs), res
