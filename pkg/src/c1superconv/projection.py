"""Truncated Jacobi projection u_I of a smooth function.

Per element, u_I is the Hermite cubic interpolant of u plus the bubbles
J_n^{-2,-2}, n = 4..k, with coefficients

    u_n = h^2 / (4 c_n) * int u'' L_{n-2} dx / int L_{n-2}^2 dx.

Since d^2/ds^2 J_n^{-2,-2} = c_n L_{n-2}, u_I'' is the local L^2 projection
of u'' onto P_{k-2}, so u_I matches u and u' at every node.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .c1space import C1Function
from .mesh import Mesh1D
from .orthopoly import cn, gauss_rule, legendre_table

COEFF_QUAD_POINTS = 24


@dataclass(frozen=True)
class SmoothFunction:
    """A function with analytic first and second derivatives."""

    value: Callable
    d1: Callable
    d2: Callable

    def derivative(self, d: int):
        return (self.value, self.d1, self.d2)[d]

    def __call__(self, x, d: int = 0):
        return self.derivative(d)(x)

    def check_consistency(self, a: float, b: float, npts: int = 50, tol: float = 1e-6) -> None:
        """Compare d1, d2 against central differences; raises on mismatch."""
        x = np.linspace(a, b, npts + 2)[1:-1]
        eps = 1e-4 * (b - a)
        fd1 = (self.value(x + eps) - self.value(x - eps)) / (2 * eps)
        fd2 = (self.d1(x + eps) - self.d1(x - eps)) / (2 * eps)
        scale1 = max(1.0, np.max(np.abs(self.d1(x))))
        scale2 = max(1.0, np.max(np.abs(self.d2(x))))
        if np.max(np.abs(fd1 - self.d1(x))) > tol * scale1:
            raise ValueError("first derivative inconsistent with value")
        if np.max(np.abs(fd2 - self.d2(x))) > tol * scale2:
            raise ValueError("second derivative inconsistent with first")


def hermite_h3(u: SmoothFunction, mesh: Mesh1D, i: int) -> np.ndarray:
    """(u(x_{i-1}), u'(x_{i-1}), u(x_i), u'(x_i)) for element i."""
    left, right = mesh.element(i)
    return np.array([u.value(left), u.d1(left), u.value(right), u.d1(right)], dtype=float)


def _bubble_coefficients(u: SmoothFunction, mesh: Mesh1D, k: int, quad_points: int) -> np.ndarray:
    """(N, k-3) array of u_n, all elements at once."""
    if k == 3:
        return np.zeros((mesh.N, 0))
    rule = gauss_rule(quad_points)
    x = mesh.map_reference(rule.nodes)  # (N, q)
    leg = legendre_table(k - 2, rule.nodes)[2:]  # L_2..L_{k-2}, (k-3, q)
    # int_tau u'' L_{n-2} dx = h/2 * sum_q w_q u''(x_q) L_{n-2}(s_q)
    moments = 0.5 * mesh.h[:, None] * ((u.d2(x) * rule.weights) @ leg.T)
    n = np.arange(4, k + 1)
    denom = mesh.h[:, None] / (2 * n - 3)  # closed-form int L_{n-2}^2 dx
    c = np.array([cn(m) for m in n])
    return mesh.h[:, None] ** 2 / (4 * c) * moments / denom


def jacobi_coefficient(u: SmoothFunction, mesh: Mesh1D, i: int, n: int,
                       quad_points: int = COEFF_QUAD_POINTS) -> float:
    """Coefficient u_n of the bubble J_n^{-2,-2} on element i."""
    if n < 4:
        raise ValueError("bubble coefficients start at n = 4")
    left, right = mesh.element(i)
    h = right - left
    rule = gauss_rule(quad_points)
    x, w = rule.mapped(left, right)
    leg = legendre_table(n - 2, rule.nodes)[n - 2]
    integral = np.dot(w, u.d2(x) * leg)
    return float(h * h / (4 * cn(n)) * integral / (h / (2 * n - 3)))


def truncated_projection(u: SmoothFunction, mesh: Mesh1D, k: int,
                         quad_points: int = COEFF_QUAD_POINTS) -> C1Function:
    """u_I in V_h; for k = 3 this is the Hermite cubic interpolant."""
    if k < 3:
        raise ValueError(f"degree must be >= 3, got {k}")
    x = mesh.nodes
    values = np.asarray(u.value(x), dtype=float)
    slopes = np.asarray(u.d1(x), dtype=float)
    bubbles = _bubble_coefficients(u, mesh, k, quad_points)
    return C1Function.from_dofs(mesh, k, values, slopes, bubbles)
