"""Error sampling at superconvergence points and convergence-rate tables."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np

from .c1space import C1Function
from .orthopoly import gauss_rule, interior_lobatto_points, jacobi_m2_roots
from .projection import SmoothFunction

FP_FLOOR = 1e-13

# column order used by the emitters; e_u is absent for k = 3
ERROR_KINDS = ("e_un", "e_dun", "e_u", "e_du", "e_d2u", "h2_diff")


@dataclass
class ErrorReport:
    n_elements: int
    k: int
    method: str
    e_un: float
    e_dun: float
    e_u: float | None
    e_du: float
    e_d2u: float
    h2_diff: float | None = None

    def get(self, kind: str):
        return getattr(self, kind)

    def as_dict(self) -> dict:
        return {kind: self.get(kind) for kind in ERROR_KINDS}


def _family_error(u_h: C1Function, exact: SmoothFunction, s: np.ndarray, d: int) -> float:
    x = u_h.mesh.map_reference(s)
    return float(np.max(np.abs(exact(x, d) - u_h.element_eval(s, d))))


def sample_errors(u_h: C1Function, exact: SmoothFunction, method: str = "",
                  nodes: str = "all") -> ErrorReport:
    """Max errors at nodes, Jacobi roots, interior Lobatto points and Gauss points.

    Nodal maxima run over all nodes x_0..x_N, or only x_1..x_{N-1} with
    ``nodes="interior"`` (the boundary slope is not pinned by the boundary
    conditions).  The point families live in the element interiors,
    so each element's own polynomial is used.
    """
    k = u_h.k
    if nodes == "all":
        sel = slice(None)
    elif nodes == "interior":
        sel = slice(1, -1)
    else:
        raise ValueError("nodes must be 'all' or 'interior'")
    x = u_h.mesh.nodes[sel]
    e_un = float(np.max(np.abs(exact(x, 0) - u_h.nodal(0)[sel])))
    e_dun = float(np.max(np.abs(exact(x, 1) - u_h.nodal(1)[sel])))
    roots = jacobi_m2_roots(k)
    e_u = _family_error(u_h, exact, roots, 0) if len(roots) else None
    e_du = _family_error(u_h, exact, interior_lobatto_points(k), 1)
    e_d2u = _family_error(u_h, exact, gauss_rule(k - 1).nodes, 2)
    return ErrorReport(u_h.mesh.N, k, method, e_un, e_dun, e_u, e_du, e_d2u)


def h2_norm_diff(u_h: C1Function, u_I: C1Function) -> float:
    """Full H^2 norm of u_h - u_I, exact (k+1)-point Gauss per element."""
    if not u_h.compatible(u_I):
        raise ValueError("both functions must share mesh and degree")
    diff = u_h - u_I
    rule = gauss_rule(u_h.k + 1)
    w = 0.5 * u_h.mesh.h[:, None] * rule.weights[None, :]
    total = sum(float(np.sum(w * diff.element_eval(rule.nodes, d) ** 2)) for d in range(3))
    return math.sqrt(total)


def sup_diff(a: C1Function, b: C1Function, per_element: int | None = None) -> float:
    """max |a - b| sampled at 10(k+1) equispaced points per element."""
    if not a.compatible(b):
        raise ValueError("both functions must share mesh and degree")
    m = per_element or 10 * (a.k + 1)
    s = np.linspace(-1.0, 1.0, m)
    return float(np.max(np.abs(a.element_eval(s) - b.element_eval(s))))


@dataclass
class RateRow:
    N: int
    error: float
    order: float | None = None
    flag: str = ""


@dataclass
class RateTable:
    kind: str
    rows: list[RateRow] = field(default_factory=list)

    @property
    def orders(self) -> list[float]:
        """Orders usable for checks (first row and flagged cells dropped)."""
        return [r.order for r in self.rows[1:] if r.order is not None and not r.flag]

    @property
    def Ns(self):
        return [r.N for r in self.rows]

    @property
    def errors(self):
        return [r.error for r in self.rows]


def convergence_rates(errors, kind: str = "", scale: float = 1.0,
                      floor: float = FP_FLOOR) -> RateTable:
    """order_j = log(e_{j-1}/e_j) / log(N_j/N_{j-1}).

    A zero error makes the cell 'saturated'; an error under floor*scale makes
    it 'fp-floor'.  Flagged cells carry no order.
    """
    errors = [(int(n), float(e)) for n, e in errors]
    Ns = [n for n, _ in errors]
    if any(b <= a for a, b in zip(Ns, Ns[1:])):
        raise ValueError("N must be strictly increasing")
    if any(e < 0 or not math.isfinite(e) for _, e in errors):
        raise ValueError("errors must be finite and non-negative")
    table = RateTable(kind)
    for j, (n, e) in enumerate(errors):
        row = RateRow(n, e)
        if e == 0.0:
            row.flag = "saturated"
        elif e < floor * scale:
            row.flag = "fp-floor"
        if j > 0 and not row.flag:
            n0, e0 = errors[j - 1]
            if e0 == 0.0:
                row.flag = "saturated"
            elif e0 < floor * scale:
                row.flag = "fp-floor"
            else:
                row.order = math.log(e0 / e) / math.log(n / n0)
        table.rows.append(row)
    return table


def fitted_order(Ns, errors) -> float:
    """Least-squares slope of -log(error) against log(N)."""
    slope = np.polyfit(np.log(np.asarray(Ns, float)), np.log(np.asarray(errors, float)), 1)[0]
    return float(-slope)


CSV_HEADER = ("method", "k", "N", "error_kind", "error", "order")


def _fmt_err(e: float) -> str:
    return f"{e:.10e}"


def _fmt_order(row: RateRow) -> str:
    if row.flag:
        return row.flag
    return "" if row.order is None else f"{row.order:.6f}"


def tables_to_csv(tables) -> str:
    """tables: iterable of (method, k, RateTable)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for method, k, table in tables:
        for row in table.rows:
            w.writerow([method, k, row.N, table.kind, _fmt_err(row.error), _fmt_order(row)])
    return buf.getvalue()


def tables_to_text(method: str, k: int, tables: list[RateTable]) -> str:
    """Aligned text: one N per line, an (error, order) pair per error kind."""
    tables = [t for t in tables if t.rows]
    if not tables:
        return ""
    head1 = f"{'k':>3} {'N':>5}" + "".join(f" {t.kind:^21}" for t in tables)
    head2 = f"{'':>3} {'':>5}" + "".join(f" {'error':>10} {'order':>10}" for _ in tables)
    lines = [f"method: {method}", head1, head2, "-" * len(head2)]
    for r, N in enumerate(tables[0].Ns):
        cells = []
        for t in tables:
            row = t.rows[r]
            order = "-" if r == 0 else (row.flag or f"{row.order:.2f}")
            cells.append(f" {row.error:>10.2e} {order:>10}")
        lines.append(f"{k:>3} {N:>5}" + "".join(cells))
    return "\n".join(lines) + "\n"
