"""Building blocks: Gauss rules and the generalized Jacobi bubbles.

The bubbles J_n^{-2,-2} vanish with their slope at both ends of [-1, 1],
so they can be added to a Hermite cubic without touching C^1 continuity.
Their second derivatives are scaled Legendre polynomials, which is what
makes the projection coefficients a single Legendre moment.
"""

import numpy as np

from c1superconv.orthopoly import (cn, gauss_rule, interior_lobatto_points, jacobi_eval,
                                   jacobi_m2_roots, legendre_eval)

rule = gauss_rule(5)
print("5-point Gauss rule")
for x, w in zip(rule.nodes, rule.weights):
    print(f"  {x:+.15f}  {w:.15f}")
print(f"  integral of s^8: {rule.integrate(lambda s: s**8):.15f}  (exact {2 / 9:.15f})")

s = np.linspace(-1, 1, 9)
print("\nJ_6^{-2,-2} and its slope at the end points:",
      jacobi_eval(6, (-2, -2), np.array([-1.0, 1.0])), jacobi_eval(6, (-2, -2), np.array([-1.0, 1.0]), 1))
gap = np.max(np.abs(jacobi_eval(6, (-2, -2), s, 2) - cn(6) * legendre_eval(4, s)))
print(f"max |J_6'' - c_6 L_4| on a grid: {gap:.2e}")

k = 5
print(f"\nPoint families on the reference element for k = {k}")
print("  Jacobi roots   :", np.round(jacobi_m2_roots(k), 6))
print("  Lobatto points :", np.round(interior_lobatto_points(k), 6))
print("  Gauss points   :", np.round(gauss_rule(k - 1).nodes, 6))
