"""One-dimensional partitions a = x_0 < x_1 < ... < x_N = b."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class Uniform:
    a: float
    b: float
    N: int


@dataclass(frozen=True)
class Perturbed:
    """Randomly perturbed uniform mesh.

    x_j = a + (b - a) * (j/N + amplitude/N * sin(j pi/N) * U_j), where each
    interior node draws one U_j ~ uniform(0, 1) from numpy's PCG64 generator
    seeded with ``seed``, in node order.  Endpoints never move.
    """

    a: float
    b: float
    N: int
    amplitude: float = 0.01
    seed: int = 0


@dataclass(frozen=True)
class PiecewiseUniform:
    """N/2 equal elements on [a, breakpoint] and N/2 on [breakpoint, b]."""

    a: float
    b: float
    breakpoint: float
    N: int


MeshSpec = Uniform | Perturbed | PiecewiseUniform


class Mesh1D:
    """Immutable sorted partition of [a, b]."""

    def __init__(self, nodes):
        nodes = np.array(nodes, dtype=float)
        if nodes.ndim != 1 or len(nodes) < 2:
            raise ValueError("a mesh needs at least two nodes")
        h = np.diff(nodes)
        if np.any(h <= 0) or not np.all(np.isfinite(nodes)):
            raise ValueError("mesh nodes must be finite and strictly increasing")
        nodes.setflags(write=False)
        h.setflags(write=False)
        self._nodes = nodes
        self._h = h

    @property
    def nodes(self) -> np.ndarray:
        return self._nodes

    @property
    def h(self) -> np.ndarray:
        """Element sizes h_1..h_N."""
        return self._h

    @property
    def N(self) -> int:
        return len(self._h)

    @property
    def a(self) -> float:
        return float(self._nodes[0])

    @property
    def b(self) -> float:
        return float(self._nodes[-1])

    @property
    def hmax(self) -> float:
        return float(self._h.max())

    @property
    def quasi_uniformity(self) -> float:
        """max h_j / min h_j."""
        return float(self._h.max() / self._h.min())

    def element(self, i: int) -> tuple[float, float]:
        """Endpoints of element i (1-based, as tau_i = (x_{i-1}, x_i))."""
        self._check_element(i)
        return float(self._nodes[i - 1]), float(self._nodes[i])

    def _check_element(self, i):
        if not 1 <= i <= self.N:
            raise IndexError(f"element index {i} outside 1..{self.N}")

    def locate(self, x) -> np.ndarray:
        """1-based owning element of each x; interior nodes go to the left element."""
        x = np.asarray(x, dtype=float)
        if np.any(x < self.a) or np.any(x > self.b):
            raise ValueError(f"points outside the domain [{self.a}, {self.b}]")
        return np.clip(np.searchsorted(self._nodes, x, side="left"), 1, self.N)

    def to_reference(self, i: int, x):
        left, right = self.element(i)
        xa = np.asarray(x, dtype=float)
        if np.any(xa < left) or np.any(xa > right):
            raise ValueError(f"point outside element {i} = [{left}, {right}]")
        s = (2.0 * xa - left - right) / (right - left)
        return float(s) if np.ndim(x) == 0 else s

    def from_reference(self, i: int, s):
        left, right = self.element(i)
        x = 0.5 * (left + right) + 0.5 * (right - left) * np.asarray(s, dtype=float)
        return float(x) if np.ndim(s) == 0 else x

    def map_reference(self, s) -> np.ndarray:
        """Reference points s mapped into every element, shape (N, len(s))."""
        s = np.atleast_1d(np.asarray(s, dtype=float))
        mid = 0.5 * (self._nodes[:-1] + self._nodes[1:])
        return mid[:, None] + 0.5 * self._h[:, None] * s[None, :]

    def __eq__(self, other):
        return isinstance(other, Mesh1D) and np.array_equal(self._nodes, other._nodes)

    def __hash__(self):
        return hash(self._nodes.tobytes())

    def __repr__(self):
        return f"Mesh1D(N={self.N}, a={self.a:g}, b={self.b:g}, ratio={self.quasi_uniformity:.4f})"


def build_mesh(spec: MeshSpec) -> Mesh1D:
    if spec.N < 2:
        raise ValueError("need at least two elements")
    if not spec.b > spec.a:
        raise ValueError("need a < b")

    if isinstance(spec, Uniform):
        return Mesh1D(np.linspace(spec.a, spec.b, spec.N + 1))

    if isinstance(spec, PiecewiseUniform):
        if spec.N % 2:
            raise ValueError("piecewise-uniform meshes need an even N")
        if not spec.a < spec.breakpoint < spec.b:
            raise ValueError("breakpoint must lie strictly inside (a, b)")
        half = spec.N // 2
        left = np.linspace(spec.a, spec.breakpoint, half + 1)
        right = np.linspace(spec.breakpoint, spec.b, half + 1)
        return Mesh1D(np.concatenate([left, right[1:]]))

    if isinstance(spec, Perturbed):
        if not 0 <= spec.amplitude < 0.25:
            raise ValueError("perturbation amplitude must lie in [0, 0.25)")
        N = spec.N
        j = np.arange(N + 1)
        rng = np.random.default_rng(spec.seed)
        rand = np.zeros(N + 1)
        rand[1:-1] = rng.random(N - 1)
        t = j / N + spec.amplitude / N * np.sin(j * np.pi / N) * rand
        t[0], t[-1] = 0.0, 1.0
        nodes = spec.a + (spec.b - spec.a) * t
        nodes[0], nodes[-1] = spec.a, spec.b
        if np.any(np.diff(nodes) <= 0):
            raise ValueError("perturbation broke node ordering")
        return Mesh1D(nodes)

    raise TypeError(f"unknown mesh spec {spec!r}")


def dump_mesh(mesh: Mesh1D, path) -> None:
    """One node per line, 17 significant digits."""
    Path(path).write_text("".join(f"{x:.17g}\n" for x in mesh.nodes))


def load_mesh(path) -> Mesh1D:
    return Mesh1D([float(line) for line in Path(path).read_text().split()])
