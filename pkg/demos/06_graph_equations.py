"""First-order equations for calibrated graphs, derived rather than typed in.

The nonlinear part of each graph equation is eliminated exactly from the
defining forms: the code solves for the matrix that turns the restriction
components into Dirac rows plus a unique cubic correction.  The resulting
tables (24 trilinear terms, 96 cubic terms) are data, not transcription.
"""
from fractions import Fraction

import numpy as np

from caligeo import dirac_index, dirac_lhs, jet_plane_calibrated, residual
from caligeo.pde import TopologyInvariants, derive_cross_products, random_jet, solve_jet_for_last_partial

tabs = derive_cross_products()
tri, cub = tabs["trilinear"], tabs["cubic"]
print(f"trilinear table: {len(tri.entries)} terms, elimination kernel dim "
      f"{tri.diagnostics['associative']['kernel_dim']}")
print(f"cubic table    : {len(cub.entries)} terms, elimination kernel dim "
      f"{cub.diagnostics['cayley']['kernel_dim']}")
print("coassociative elimination reproduces the trilinear table:",
      tri.diagnostics["matches_coassociative"])

# Plant an exact solution: pick two gradients, solve the 4x4 linear system
# for the third.  The residual is exactly zero as Fractions.
g1 = [Fraction(1), Fraction(-2), Fraction(0), Fraction(1)]
g2 = [Fraction(0), Fraction(1), Fraction(1), Fraction(-1)]
jet = solve_jet_for_last_partial("assoc", [g1, g2])
print("planted residual  :", residual(jet).components)
print("graph plane OK    :", jet_plane_calibrated(jet))

# A random jet solves nothing: nonzero residual, uncalibrated plane.
rng = np.random.default_rng(0)
bad = random_jet("assoc", rng)
sup = max(abs(float(c)) for c in residual(bad).components)
print(f"random jet        : residual sup {sup:.3e}, calibrated {jet_plane_calibrated(bad)}")

# The linear part at zero is the Dirac operator; jets serialize to JSON.
print("dirac part        :", dirac_lhs(jet).components)
print("jet as JSON       :", jet.to_json()[:68] + "...")

# Index arithmetic for the deformation complex, with the parity guard.
for tau, chi, q in ((0, 0, 0), (0, 2, 0), (-16, 24, 0)):
    print(f"index(tau={tau}, chi={chi}, q={q}) =", dirac_index(TopologyInvariants(tau, chi, q)))
try:
    dirac_index(TopologyInvariants(0, 3, 0))
except ValueError as exc:
    print("parity guard      :", exc)
