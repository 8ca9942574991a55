"""Variable diffusion alpha = e^x on a mesh refined on one side.

The nodal errors are reported over interior nodes only, since the
boundary slope is not pinned by the boundary conditions.  With variable coefficients
the H^2 distance to u_I drops to order k for both methods, even when the
convection term vanishes.
"""

from c1superconv.cli import RunConfig, run_sweep

for case in (1, 2, 3):
    for k in (3, 4):
        cfg = RunConfig(method="both", k=k, mesh="piecewise", Ns=(4, 8, 16, 32, 64),
                        problem=f"example2-case{case}", nodes="interior")
        print(f"=== case {case}, k = {k}")
        print(run_sweep(cfg).to_text())
