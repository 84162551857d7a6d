"""Newton iteration for graph equations on a periodic grid, plus the
deformation linearization on the flat 4-torus.

The solver preconditions with the exact Fourier inverse of the Dirac
symbol and freezes the constant gauge modes; small band-limited data
contracts to the constant solution in a couple of steps.
"""
import numpy as np

from caligeo import classify_solution_planes, coassoc_deformation_linearization, solve_graph

res = solve_graph(kind="assoc", grid=16, eps=1e-2, seed=0, tol=1e-8)
print(f"assoc 16^3: converged {res.converged} in {res.iterations} steps, residual {res.residual:.2e}")
print(res.trace_csv())

# Every grid point of the solution defines a graph plane; all must classify.
out = classify_solution_planes(res.field, "assoc")
print("plane census     :", out["counts"], " worst deviation", f"{out['worst_value_deviation']:.2e}")

mean = res.field.mean()
spread = np.abs(res.field.data - mean[:, None, None, None]).max()
print(f"distance to the constant attractor: {spread:.2e}")

# The deformation check on the 4-torus: scale a self-dual 2-form field beta
# by eps, push it through the nonlinear pullback, and compare eps^{-1} P(eps
# beta) with the exterior derivative of beta.  The error falls like eps^2.
rep = coassoc_deformation_linearization(grid=12, eps_sequence=(1e-2, 1e-3, 1e-4), samples=3, seed=0)
print()
print("deformation linearization on 12^4:", "PASS" if rep.passed else "FAIL")
for s, errs in enumerate(rep.rel_errors):
    pairs = ", ".join(f"eps={e:g}: {r:.2e}" for e, r in zip(rep.eps, errs))
    print(f"  sample {s}: {pairs}  (slope {rep.slopes[s]:.3f})")
print("constant fields pull back to exactly", rep.constant_zero_sup)
