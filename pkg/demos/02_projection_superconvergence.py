"""The truncated Jacobi projection and where its error is small.

u_I matches u and u' at every node, so its nodal error is zero.  Inside
the elements the error of u_I is one order better than optimal at the
Jacobi roots (values), the interior Lobatto points (slopes) and the Gauss
points (second derivatives).  This script measures those rates on a
randomly perturbed mesh.
"""

import numpy as np

from c1superconv.analysis import convergence_rates
from c1superconv.mesh import Perturbed, build_mesh
from c1superconv.orthopoly import gauss_rule, interior_lobatto_points, jacobi_m2_roots
from c1superconv.problems import example1
from c1superconv.projection import truncated_projection

u = example1().exact
k = 4
Ns = [4, 8, 16, 32]
families = {
    "value at Jacobi roots": (jacobi_m2_roots(k), 0, k + 2),
    "slope at Lobatto points": (interior_lobatto_points(k), 1, k + 1),
    "u'' at Gauss points": (gauss_rule(k - 1).nodes, 2, k),
    "value, dense sampling": (np.linspace(-1, 1, 41), 0, k + 1),
}

errors = {name: [] for name in families}
for N in Ns:
    mesh = build_mesh(Perturbed(0, 1, N, 0.01, seed=0))
    u_I = truncated_projection(u, mesh, k)
    for name, (s, d, _) in families.items():
        errors[name].append(np.max(np.abs(u(mesh.map_reference(s), d) - u_I.element_eval(s, d))))

print(f"u = sin(pi x), k = {k}, perturbed mesh")
for name, (_, _, expected) in families.items():
    table = convergence_rates(list(zip(Ns, errors[name])), name)
    orders = ", ".join(f"{o:.2f}" for o in table.orders)
    print(f"  {name:<26} expected {expected}   observed {orders}")
