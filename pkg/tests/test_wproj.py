"""Weighted projective points, the degree-12 hypersurface, and its symmetry group."""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caligeo.cyclotomic import CyclotomicNumber, unit_generator, zeta
from caligeo.orbifold import generate_group
from caligeo.wproj import (
    ConductorError,
    WeightedPoint,
    Y_WEIGHTS,
    check_example,
    on_hypersurface,
    scaling_candidates,
    sigma_map,
    singular_points,
    spin7_generators,
    wps_equal,
)

N = 24


def wpt(*coords, weights=(1, 1, 2)):
    return WeightedPoint(weights, coords, conductor=N)


def test_weighted_point_guards():
    with pytest.raises(ValueError):
        WeightedPoint((2, 4), (1, 1), N)  # gcd > 1
    with pytest.raises(ValueError):
        WeightedPoint((1, 1), (0, 0), N)
    with pytest.raises(ValueError):
        WeightedPoint((1, 1, 1), (1, 0), N)


def test_scaling_matches_weights():
    p = wpt(1, 2, 3)
    u = zeta(N, 3)
    q = p.scaled(u)
    assert q.coords[0] == u * 1
    assert q.coords[2] == u**2 * 3
    assert wps_equal(p, q)


def test_wps_equal_basic():
    assert wps_equal(wpt(1, 1, 1), wpt(2, 2, 4))
    assert not wps_equal(wpt(1, 1, 1), wpt(1, 1, 2))
    assert not wps_equal(wpt(1, 0, 1), wpt(1, 1, 1))  # support differs
    with pytest.raises(ValueError):
        wps_equal(wpt(1, 1, 1), WeightedPoint((1, 2, 1), (1, 1, 1), N))


def test_wps_equal_uses_higher_weight_roots():
    # u^2 = -1 has solutions only among the roots of unity: +-i
    p = WeightedPoint((2, 1), (1, 1), N)
    q = WeightedPoint((2, 1), (-1, zeta(N, 6)), N)  # zeta_24^6 = i
    assert wps_equal(p, q)
    q2 = WeightedPoint((2, 1), (-1, 1), N)
    assert not wps_equal(p, q2)


units = st.integers(0, 23)


@settings(max_examples=25)
@given(units, units)
def test_wps_equal_is_an_equivalence(t1, t2):
    g = unit_generator(N)
    p = wpt(1, zeta(N, 2), 3)
    q = p.scaled(g**t1)
    r = q.scaled(g**t2)
    # reflexive, symmetric on the orbit, transitive back to p
    assert wps_equal(p, p)
    assert wps_equal(p, q) and wps_equal(q, p)
    assert wps_equal(p, r)


def test_scaling_candidates_count():
    one = CyclotomicNumber.one(N)
    sols = scaling_candidates(one, 4)
    assert len(sols) == 4  # gcd(4, 24) solutions of u^4 = 1
    assert all(u**4 == one for u in sols)
    assert len(set(u.coeffs for u in sols)) == 4


def test_conductor_error_names_needed_field():
    # u^3 = zeta_24 forces a 72nd root of unity
    with pytest.raises(ConductorError) as ei:
        scaling_candidates(zeta(N), 3)
    assert ei.value.needed == 72


def test_radical_limitation_is_explicit():
    # u^2 = 2 has no solution of the rational-times-root shape; refuse loudly
    two = CyclotomicNumber.from_rational(2, N)
    with pytest.raises(ValueError, match="no rational"):
        scaling_candidates(two, 2)


def test_hypersurface_membership():
    # zeta_24^12 = -1, so (1 : zeta_24 : 0 : ...) satisfies sum z_i^{e_i} = 0
    p = WeightedPoint(Y_WEIGHTS, (1, zeta(N), 0, 0, 0, 0), N)
    assert on_hypersurface(p)
    q = WeightedPoint(Y_WEIGHTS, (1, 1, 0, 0, 0, 0), N)
    assert not on_hypersurface(q)
    r = WeightedPoint(Y_WEIGHTS, (0, 0, 0, 0, 1, -1), N)
    assert on_hypersurface(r)  # cube exponents on the weight-4 slots


def test_singular_points_are_fixed_loci():
    pts = singular_points(N)
    assert len(pts) > 0
    for p in pts:
        assert on_hypersurface(p)
        # singular points sit where only the weight-4 coordinates survive
        assert all(p.coords[i].is_zero for i in range(4))


def test_sigma_map_is_an_involution_on_points():
    sg = sigma_map(N)
    p = WeightedPoint(Y_WEIGHTS, (1, zeta(N, 2), 1, 0, 1, 1), N)
    q = sg.apply(sg.apply(p))
    assert wps_equal(p, q)


def test_spin7_generators_build_quaternion_group():
    alpha, beta = spin7_generators()
    G = generate_group({"alpha": alpha, "beta": beta})
    assert G.order == 8
    assert not G.abelian
    assert alpha @ alpha == beta @ beta
    central = alpha @ alpha
    assert all(central @ g == g @ central for g in G.elements)


def test_check_example_report():
    rep = check_example(conductor=N)
    assert rep.all_passed(), rep.to_text()
    assert len(rep.checks) == 18
