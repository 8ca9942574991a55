import csv
import io
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from c1superconv.analysis import (CSV_HEADER, ERROR_KINDS, convergence_rates, fitted_order,
                                  h2_norm_diff, sample_errors, sup_diff, tables_to_csv,
                                  tables_to_text)
from c1superconv.assembly import solve_problem
from c1superconv.c1space import C1Function
from c1superconv.mesh import Perturbed, Uniform, build_mesh
from c1superconv.orthopoly import gauss_rule
from c1superconv.problems import example1, polynomial
from c1superconv.projection import SmoothFunction, truncated_projection


def perturbed(N, seed=0):
    return build_mesh(Perturbed(0, 1, N, 0.01, seed))


# -- rates ----------------------------------------------------------------------------

def test_rate_examples():
    t = convergence_rates([(16, 2.91e-7), (32, 1.80e-8)])
    assert t.rows[0].order is None
    assert t.rows[1].order == pytest.approx(4.02, abs=0.01)
    assert convergence_rates([(4, 1.0), (8, 0.5)]).rows[1].order == pytest.approx(1.0, abs=1e-14)
    assert convergence_rates([(8, 1e-4), (16, 1e-4 / 2**6)]).rows[1].order == pytest.approx(6.0, abs=1e-12)


def test_rate_non_dyadic_steps():
    t = convergence_rates([(3, 1.0), (9, 1.0 / 81)])
    assert t.rows[1].order == pytest.approx(4.0, abs=1e-12)


def test_saturated_and_floor_flags():
    t = convergence_rates([(4, 1e-3), (8, 0.0), (16, 1e-6)])
    assert t.rows[1].flag == "saturated" and t.rows[1].order is None
    assert t.rows[2].flag == "saturated"  # no finite order from a zero predecessor
    t = convergence_rates([(4, 1e-10), (8, 1e-14), (16, 1e-15)], scale=1.0)
    assert t.rows[1].flag == "fp-floor" and t.rows[2].flag == "fp-floor"
    assert t.orders == []
    # the floor is relative to the solution scale
    t = convergence_rates([(4, 1e-10), (8, 1e-14)], scale=1e-3)
    assert t.rows[1].flag == "" and t.orders == [pytest.approx(math.log2(1e4))]


@pytest.mark.parametrize("bad", [
    [(8, 1.0), (4, 0.5)],
    [(4, 1.0), (4, 0.5)],
    [(4, -1.0), (8, 0.5)],
    [(4, float("nan")), (8, 0.5)],
])
def test_rate_input_errors(bad):
    with pytest.raises(ValueError):
        convergence_rates(bad)


@settings(max_examples=60, deadline=None)
@given(p=st.floats(0.5, 8), c=st.floats(1e-3, 1e3), n0=st.integers(2, 10))
def test_rates_recover_power_laws(p, c, n0):
    Ns = [n0 * 2**j for j in range(4)]
    t = convergence_rates([(N, c * N ** (-p)) for N in Ns])
    for o in t.orders:
        assert o == pytest.approx(p, abs=1e-9)
    assert fitted_order(Ns, [c * N ** (-p) for N in Ns]) == pytest.approx(p, abs=1e-9)


# -- emitters --------------------------------------------------------------------------

def _sample_tables():
    a = convergence_rates([(4, 1e-3), (8, 6.1e-5), (16, 3.9e-6), (32, 0.0)], "e_un")
    b = convergence_rates([(4, 2e-2), (8, 5.2e-3), (16, 1.3e-3), (32, 3.2e-4)], "e_d2u")
    return [("pg", 3, a), ("pg", 3, b)]


def test_csv_header_and_self_consistency():
    text = tables_to_csv(_sample_tables())
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_HEADER
    assert text.splitlines()[0] == "method,k,N,error_kind,error,order"
    body = rows[1:]
    assert len(body) == 8
    for prev, cur in zip(body, body[1:]):
        if prev[3] != cur[3] or cur[5] in ("", "saturated", "fp-floor"):
            continue
        order = math.log(float(prev[4]) / float(cur[4])) / math.log(int(cur[2]) / int(prev[2]))
        assert float(cur[5]) == pytest.approx(order, abs=1e-6)
    assert body[3][5] == "saturated"
    assert body[0][5] == ""


def test_text_table_layout():
    tables = [t for _, _, t in _sample_tables()]
    text = tables_to_text("pg", 3, tables)
    lines = text.splitlines()
    assert lines[0] == "method: pg"
    assert "e_un" in lines[1] and "e_d2u" in lines[1]
    assert len(lines) == 4 + 4
    assert "saturated" in lines[-1]
    assert tables_to_text("pg", 3, []) == ""


# -- sampling ----------------------------------------------------------------------------

def test_projection_has_exact_nodal_values():
    p = example1()
    for k in (3, 4, 5):
        u_I = truncated_projection(p.exact, perturbed(16), k)
        rep = sample_errors(u_I, p.exact)
        assert rep.e_un < 1e-13 and rep.e_dun < 1e-13
        assert (rep.e_u is None) == (k == 3)


def test_exact_trial_space_solution_has_tiny_errors():
    for k in (3, 4, 5):
        p = polynomial(k)
        u_h, _ = solve_problem(p, perturbed(6), k, "pg")
        rep = sample_errors(u_h, p.exact, "pg")
        for kind in ("e_un", "e_dun", "e_u", "e_du", "e_d2u"):
            v = rep.get(kind)
            assert v is None or v < 1e-10


def test_error_report_fields():
    p = example1()
    u_h, _ = solve_problem(p, perturbed(8), 4, "gauss")
    rep = sample_errors(u_h, p.exact, "gauss")
    assert rep.method == "gauss" and rep.k == 4 and rep.n_elements == 8
    d = rep.as_dict()
    assert tuple(d) == ERROR_KINDS
    assert all(v >= 0 and math.isfinite(v) for v in d.values() if v is not None)


def test_interior_nodes_option():
    p = example1()
    u_h, _ = solve_problem(p, perturbed(8), 3, "gauss")
    full = sample_errors(u_h, p.exact)
    inner = sample_errors(u_h, p.exact, nodes="interior")
    assert inner.e_dun <= full.e_dun
    assert inner.e_d2u == full.e_d2u
    with pytest.raises(ValueError):
        sample_errors(u_h, p.exact, nodes="some")


def test_second_derivative_sampled_inside_elements():
    # a function with a u'' jump at every node; e_d2u must see only element interiors
    mesh = build_mesh(Uniform(0, 1, 4))
    u_h = C1Function.from_dofs(mesh, 3, np.zeros(5), [0, 1, -1, 1, 0])
    g = gauss_rule(2).nodes
    expected = np.max(np.abs(u_h.element_eval(g, 2)))
    zero = SmoothFunction(np.zeros_like, np.zeros_like, np.zeros_like)
    assert sample_errors(u_h, zero).e_d2u == pytest.approx(expected)


# -- norms ----------------------------------------------------------------------------------

def test_h2_norm_zero_and_exactness():
    p = example1()
    mesh = perturbed(8)
    u_I = truncated_projection(p.exact, mesh, 4)
    assert h2_norm_diff(u_I, u_I) < 1e-13
    pure = example1(1, 0, 0)
    u_h, _ = solve_problem(pure, mesh, 4, "pg")
    assert h2_norm_diff(u_h, truncated_projection(pure.exact, mesh, 4)) < 1e-10


def test_h2_norm_against_dense_quadrature():
    mesh = perturbed(5, seed=3)
    rng = np.random.default_rng(0)
    a = C1Function(mesh, 5, rng.standard_normal(20))
    b = C1Function(mesh, 5, rng.standard_normal(20))
    rule = gauss_rule(30)
    w = 0.5 * mesh.h[:, None] * rule.weights
    ref = math.sqrt(sum(np.sum(w * (a.element_eval(rule.nodes, d) - b.element_eval(rule.nodes, d)) ** 2)
                        for d in range(3)))
    assert h2_norm_diff(a, b) == pytest.approx(ref, rel=1e-12)


def test_h2_and_sup_reject_mismatch():
    a = truncated_projection(example1().exact, perturbed(4), 3)
    b = truncated_projection(example1().exact, perturbed(8), 3)
    c = truncated_projection(example1().exact, perturbed(4), 4)
    for other in (b, c):
        with pytest.raises(ValueError):
            h2_norm_diff(a, other)
        with pytest.raises(ValueError):
            sup_diff(a, other)


@pytest.mark.parametrize("method,target", [("pg", 4), ("gauss", 3)])
def test_h2_supercloseness_split(method, target):
    p = example1(1.0, 0.0, 1.0)
    Ns = [8, 16, 32]
    errs = []
    for N in Ns:
        mesh = perturbed(N)
        u_h, _ = solve_problem(p, mesh, 3, method)
        errs.append(h2_norm_diff(u_h, truncated_projection(p.exact, mesh, 3)))
    t = convergence_rates(list(zip(Ns, errs)))
    assert all(abs(o - target) <= 0.3 for o in t.orders)
