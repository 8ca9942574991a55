"""C^1 piecewise polynomials of degree k on a 1D mesh.

On each element the local basis is the four reference Hermite cubics
(value-left, slope-left, value-right, slope-right) followed by the bubbles
J_n^{-2,-2}(s), n = 4..k.  Slope DOFs hold physical derivatives u'(x_j); the
h/2 factor that turns them into reference Hermite coefficients is applied here.

Global numbering of the N(k-1) free DOFs walks left to right: slope at x_0,
then for each element i = 1..N its bubbles, the value at x_i (unless i = N,
where it is pinned by the boundary condition) and the slope at x_i.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P

from .mesh import Mesh1D
from .orthopoly import JacobiIndex, jacobi_eval

# monomial coefficients in s of the reference Hermite cubics on [-1, 1]
_HERMITE = np.array(
    [
        [2.0, -3.0, 0.0, 1.0],  # (1-s)^2 (2+s) / 4
        [1.0, -1.0, -1.0, 1.0],  # (1-s)^2 (1+s) / 4
        [2.0, 3.0, 0.0, -1.0],  # (1+s)^2 (2-s) / 4
        [-1.0, -1.0, 1.0, 1.0],  # -(1+s)^2 (1-s) / 4
    ]
) / 4.0
_HERMITE_DERIVS = [_HERMITE, np.array([P.polyder(c, 1) for c in _HERMITE]),
                   np.array([P.polyder(c, 2) for c in _HERMITE])]

_M2 = JacobiIndex(-2, -2)


def local_shape(k: int, s, d: int = 0) -> np.ndarray:
    """Reference shape functions (or their s-derivatives) at s.

    Returns shape (k+1,) for scalar s and (len(s), k+1) for an array.
    """
    if k < 3:
        raise ValueError(f"degree must be >= 3, got {k}")
    if d not in (0, 1, 2):
        raise ValueError(f"derivative order must be 0, 1 or 2, got {d}")
    sa = np.atleast_1d(np.asarray(s, dtype=float))
    cols = [P.polyval(sa, c) for c in _HERMITE_DERIVS[d]]
    cols += [jacobi_eval(n, _M2, sa, d) for n in range(4, k + 1)]
    out = np.stack(cols, axis=-1)
    return out[0] if np.ndim(s) == 0 else out


@dataclass(frozen=True)
class DofLayout:
    """Global numbering of the free DOFs of V_h^0.

    ``value_id`` and ``slope_id`` have one entry per node (value entries at
    the two boundary nodes are -1); ``bubble_id`` has shape (N, k-3).
    """

    N: int
    k: int
    value_id: np.ndarray
    slope_id: np.ndarray
    bubble_id: np.ndarray

    @classmethod
    def build(cls, N: int, k: int) -> "DofLayout":
        if k < 3:
            raise ValueError(f"degree must be >= 3, got {k}")
        if N < 1:
            raise ValueError("need at least one element")
        value = np.full(N + 1, -1, dtype=int)
        slope = np.empty(N + 1, dtype=int)
        bubble = np.empty((N, k - 3), dtype=int)
        nxt = 0
        slope[0] = nxt
        nxt += 1
        for i in range(1, N + 1):
            bubble[i - 1] = np.arange(nxt, nxt + k - 3)
            nxt += k - 3
            if i < N:
                value[i] = nxt
                nxt += 1
            slope[i] = nxt
            nxt += 1
        assert nxt == N * (k - 1)
        return cls(N, k, value, slope, bubble)

    @property
    def ndofs(self) -> int:
        return self.N * (self.k - 1)

    @cached_property
    def element_dofs(self) -> np.ndarray:
        """(N, k+1) global ids per local slot; -1 marks a pinned boundary value."""
        i = np.arange(1, self.N + 1)
        return np.column_stack(
            [self.value_id[i - 1], self.slope_id[i - 1], self.value_id[i], self.slope_id[i], self.bubble_id]
        )

    def describe(self):
        """Yield (dof id, kind, node-or-element index) in id order."""
        rows = []
        for j in range(self.N + 1):
            if self.value_id[j] >= 0:
                rows.append((int(self.value_id[j]), "value", j))
            rows.append((int(self.slope_id[j]), "slope", j))
        for i in range(self.N):
            for m, dof in enumerate(self.bubble_id[i]):
                rows.append((int(dof), f"bubble-{m + 4}", i + 1))
        return sorted(rows)


def slope_scaling(mesh: Mesh1D, k: int) -> np.ndarray:
    """(N, k+1) factors turning global DOF values into reference coefficients."""
    scale = np.ones((mesh.N, k + 1))
    scale[:, 1] = scale[:, 3] = 0.5 * mesh.h
    return scale


class C1Function:
    """Member of V_h: global free coefficients plus the two boundary values."""

    def __init__(self, mesh: Mesh1D, k: int, coeffs, boundary=(0.0, 0.0)):
        self.mesh = mesh
        self.k = k
        self.layout = DofLayout.build(mesh.N, k)
        coeffs = np.array(coeffs, dtype=float)
        if coeffs.shape != (self.layout.ndofs,):
            raise ValueError(f"expected {self.layout.ndofs} coefficients, got {coeffs.shape}")
        coeffs.setflags(write=False)
        self.coeffs = coeffs
        self.boundary = (float(boundary[0]), float(boundary[1]))

    @classmethod
    def from_dofs(cls, mesh: Mesh1D, k: int, values, slopes, bubbles=None) -> "C1Function":
        """Build from nodal values/slopes (length N+1) and bubbles (N, k-3)."""
        layout = DofLayout.build(mesh.N, k)
        values = np.asarray(values, dtype=float)
        slopes = np.asarray(slopes, dtype=float)
        c = np.empty(layout.ndofs)
        c[layout.slope_id] = slopes
        c[layout.value_id[1:-1]] = values[1:-1]
        if k > 3:
            c[layout.bubble_id] = 0.0 if bubbles is None else np.asarray(bubbles, dtype=float)
        return cls(mesh, k, c, boundary=(values[0], values[-1]))

    @cached_property
    def local_coeffs(self) -> np.ndarray:
        """(N, k+1) reference-basis coefficients per element."""
        ids = self.layout.element_dofs
        padded = np.concatenate([self.coeffs, [0.0]])
        loc = padded[np.where(ids < 0, -1, ids)]
        loc[0, 0] = self.boundary[0]
        loc[-1, 2] = self.boundary[1]
        return loc * slope_scaling(self.mesh, self.k)

    def element_eval(self, s, d: int = 0) -> np.ndarray:
        """Values at the same reference points s in every element, shape (N, len(s))."""
        shape = local_shape(self.k, np.atleast_1d(s), d)
        return (self.local_coeffs @ shape.T) * (2.0 / self.mesh.h[:, None]) ** d

    def eval(self, x, d: int = 0, side: str = "left"):
        """d-th derivative at x.

        At an interior node the left element is used (``side="right"`` picks
        the right one); only matters for d = 2, since values and slopes are
        continuous.
        """
        xa = np.atleast_1d(np.asarray(x, dtype=float))
        elem = self.mesh.locate(xa)
        if side == "right":
            at_node = np.isin(xa, self.mesh.nodes[1:-1])
            elem = np.where(at_node, elem + 1, elem)
        elif side != "left":
            raise ValueError("side must be 'left' or 'right'")
        left = self.mesh.nodes[elem - 1]
        h = self.mesh.h[elem - 1]
        s = np.clip(2.0 * (xa - left) / h - 1.0, -1.0, 1.0)
        shapes = local_shape(self.k, s, d)
        out = np.einsum("pj,pj->p", shapes, self.local_coeffs[elem - 1]) * (2.0 / h) ** d
        return float(out[0]) if np.ndim(x) == 0 else out

    def __call__(self, x, d: int = 0):
        return self.eval(x, d)

    def nodal(self, d: int = 0) -> np.ndarray:
        """Values (d=0) or slopes (d=1) at all mesh nodes."""
        if d == 0:
            v = np.zeros(self.mesh.N + 1)
            v[1:-1] = self.coeffs[self.layout.value_id[1:-1]]
            v[0], v[-1] = self.boundary
            return v
        if d == 1:
            return self.coeffs[self.layout.slope_id].copy()
        raise ValueError("nodal data exists only for d = 0, 1")

    def compatible(self, other: "C1Function") -> bool:
        return self.k == other.k and self.mesh == other.mesh

    def __sub__(self, other: "C1Function") -> "C1Function":
        if not self.compatible(other):
            raise ValueError("functions live on different meshes or degrees")
        return C1Function(
            self.mesh, self.k, self.coeffs - other.coeffs,
            boundary=(self.boundary[0] - other.boundary[0], self.boundary[1] - other.boundary[1]),
        )

    def dump_csv(self, path) -> None:
        """Rows of (dof id, kind, node/element index, coefficient)."""
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["dof", "kind", "index", "coefficient"])
            for dof, kind, idx in self.layout.describe():
                w.writerow([dof, kind, idx, f"{self.coeffs[dof]:.17g}"])
