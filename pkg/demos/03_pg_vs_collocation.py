"""Petrov-Galerkin against Gauss collocation on a constant-coefficient problem.

Both methods converge at rate 2k-2 at the nodes.  They differ in how close
they stay to the projection u_I in H^2: PG gains an order (k+1), collocation
does not (k).  The last table is the sup-norm distance between the two
discrete solutions.
"""

from c1superconv.cli import RunConfig, run_sweep

cfg = RunConfig(method="both", k=3, mesh="perturbed", Ns=(4, 8, 16, 32, 64),
                alpha=1.0, beta=0.0, gamma=1.0, format="table")
result = run_sweep(cfg)
print(result.to_text())
