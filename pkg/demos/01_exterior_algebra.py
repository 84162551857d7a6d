"""Exact exterior algebra on R^n.

Forms carry Fraction coefficients end to end: wedge products, Hodge stars,
and pullbacks never touch floating point, so identities can be checked with
`==` instead of tolerances.
"""
from fractions import Fraction

from caligeo import LinearEndo, dx, evaluate, hodge_star, norm_squared, pullback, wedge

# Build a 2-form on R^5 from coordinate covectors.  Indices are 1-based.
a = 3 * dx(5, 1, 2) + Fraction(1, 2) * dx(5, 2, 4) - dx(5, 3, 5)
print("a               =", a.to_text())
print("|a|^2           =", norm_squared(a))

# The star of a star returns the form up to the sign (-1)^{k(n-k)}.
sa = hodge_star(a)
print("*a              =", sa.to_text())
print("**a == a        :", hodge_star(sa) == a)

# a ^ *a recovers the norm against the volume form, exactly.
vol = dx(5, 1, 2, 3, 4, 5)
print("a ^ *a == |a|^2 vol :", wedge(a, sa) == norm_squared(a) * vol)

# Pullback along a rational endomorphism; top degree picks up the determinant.
A = LinearEndo([[2, 1, 0, 0, 0], [0, 1, 0, 0, 0], [1, 0, 1, 0, 0], [0, 0, 0, 1, 3], [0, 0, 0, 0, 1]])
print("det A           =", A.det())
print("A* vol == det vol   :", pullback(vol, A) == A.det() * vol)

# Evaluation on integer vectors is a Fraction, suitable for == comparisons.
u = [1, 0, 2, 0, 1]
v = [0, 1, 0, 3, 0]
print("a(u, v)         =", evaluate(a, [u, v]))
print("a(v, u)         =", evaluate(a, [v, u]), " (antisymmetry)")
