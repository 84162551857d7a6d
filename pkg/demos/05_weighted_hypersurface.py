"""Exact checks on a hypersurface in a weighted projective space.

Coordinates live in the cyclotomic field Q(zeta_24), so equality of weighted
projective points reduces to enumerating exact roots u^a = ratio.  The
degree-12 hypersurface in CP^5_{1,1,1,1,4,4} carries an antiholomorphic
involution whose fixed singular points, degrees, and local models are all
decided by rational arithmetic.
"""
from caligeo.cyclotomic import zeta
from caligeo.wproj import (
    WeightedPoint,
    Y_WEIGHTS,
    check_example,
    on_hypersurface,
    sigma_map,
    singular_points,
    wps_equal,
)

N = 24

# Weighted scaling: u acts by u^{a_i} on the i-th coordinate.
p = WeightedPoint(Y_WEIGHTS, (1, zeta(N), 0, 0, 0, 0), N)
q = p.scaled(zeta(N, 5))
print("p on hypersurface :", on_hypersurface(p))
print("p == u.p          :", wps_equal(p, q))

# The involution exchanges coordinate pairs with conjugation; applying it
# twice returns the same projective point.
sg = sigma_map(N)
r = WeightedPoint(Y_WEIGHTS, (1, zeta(N, 2), 1, 0, 1, 1), N)
print("sigma^2 fixes r   :", wps_equal(r, sg.apply(sg.apply(r))))

# The three singular points sit where only the weight-4 coordinates survive.
for s in singular_points(N):
    print("singular point    :", s, "on hypersurface:", on_hypersurface(s))

# The full report: hypersurface invariance, fixed points, canonical degree,
# local models, and the order-8 nonabelian symmetry group on R^8.
print()
print(check_example(conductor=N).to_text())
