"""Torus isometry groups: fixed sets, singular sets, and invariant Betti numbers.

The fixed-set machinery is cross-checked against a brute-force count on the
denominator-4 grid: every fixed component of the shipped configs has a
representative with denominator dividing 4 and a saturated direction lattice,
so a d-dimensional component meets the grid in exactly 4^d points.
"""
from fractions import Fraction
from itertools import product
from math import comb

import numpy as np
import pytest

from caligeo import orbifold as orb
from caligeo.suite import _betti_by_character, packaged_config


@pytest.fixture(scope="module")
def ex31():
    cfg = orb.load_config(packaged_config("ex31.toml"))
    return cfg, orb.generate_group(cfg.generators)


@pytest.fixture(scope="module")
def ex54():
    cfg = orb.load_config(packaged_config("ex54-sigma.toml"))
    return cfg, orb.generate_group(cfg.generators)


@pytest.fixture(scope="module")
def ex55():
    cfg = orb.load_config(packaged_config("ex55-sigma.toml"))
    return cfg, orb.generate_group(cfg.generators)


def grid_fixed_count(g: orb.AffineIsometry) -> int:
    """Brute-force count of g(x) = x over the 1/4-integer torus grid."""
    n = g.n
    M = np.array(g.matrix, dtype=np.int64)
    t4 = []
    for v in g.translation:
        q = Fraction(v) * 4
        assert q.denominator == 1
        t4.append(int(q))
    X = np.array(list(product(range(4), repeat=n)), dtype=np.int64).T
    lhs = (M @ X + np.array(t4)[:, None] - X) % 4
    return int(np.sum(~lhs.any(axis=0)))


def predicted_grid_count(fs: orb.FixedSet) -> int:
    return sum(4**c.dimension for c in fs.components)


def test_group_of_first_example(ex31):
    _, G = ex31
    assert G.order == 8
    assert G.abelian
    orders = sorted(G.element_order(g) for g in G.elements)
    assert orders == [1, 2, 2, 2, 2, 2, 2, 2]


def test_fixed_sets_match_brute_force(ex31):
    _, G = ex31
    for g in G.elements:
        if g.is_identity():
            continue
        fs = orb.fixed_set(g)
        assert grid_fixed_count(g) == predicted_grid_count(fs), G.word_of(g)


def test_generator_fixed_sets(ex31):
    _, G = ex31
    for name in ("alpha", "beta", "gamma"):
        fs = orb.fixed_set(G.element_by_word(name))
        assert fs.count == 16
        assert fs.dimensions() == {3: 16}
    for word in ("alpha*beta", "alpha*gamma", "beta*gamma", "alpha*beta*gamma"):
        assert orb.fixed_set(G.element_by_word(word)).empty


def test_singular_set_census(ex31):
    _, G = ex31
    sing = orb.singular_set(G)
    assert len(sing.orbits) == 12
    assert sing.quotient_dimensions() == {3: 12}
    assert sing.upstairs_count == 48
    assert sing.all_disjoint and sing.intersections == []
    assert {o.label for o in sing.orbits} == {"C^2/{+-1}"}
    # every orbit has |G| / (stabilizer of the component) members; here 4
    assert {o.size for o in sing.orbits} == {4}


def test_betti_two_routes(ex31):
    _, G = ex31
    by_rank = orb.orbifold_betti(G)
    assert by_rank == (1, 0, 0, 7, 7, 0, 0, 1)
    assert _betti_by_character(G) == by_rank


def test_betti_trivial_group_gives_binomials():
    triv = orb.generate_group({"e": orb.AffineIsometry.identity(7)})
    assert orb.orbifold_betti(triv) == tuple(comb(7, k) for k in range(8))


def test_first_involution_locus(ex54):
    cfg, G = ex54
    sing = orb.singular_set(G)
    loc = orb.involution_locus(cfg.involution, G, sing)
    assert loc.branch_counts["sigma"] == 16
    assert sum(v for k, v in loc.branch_counts.items() if k != "sigma") == 0
    assert loc.upstairs_count == 16
    assert len(loc.orbits) == 2
    assert loc.quotient_dimensions() == {3: 2}
    assert loc.free_on_components
    assert not loc.meets_singular_set


def test_second_involution_locus(ex55):
    cfg, G = ex55
    loc = orb.involution_locus(cfg.involution, G)
    assert loc.branch_counts["sigma"] == 8
    assert loc.branch_counts["sigma*alpha*beta"] == 128
    assert loc.upstairs_count == 136
    assert loc.quotient_dimensions() == {4: 1, 0: 16}
    assert loc.free_on_components


def test_involution_locus_brute_force(ex55):
    # upstairs census again by the grid count, summed over the coset
    cfg, G = ex55
    total_pred = 0
    total_grid = 0
    for g in G.elements:
        h = cfg.involution @ g
        fs = orb.fixed_set(h)
        total_pred += predicted_grid_count(fs)
        total_grid += grid_fixed_count(h)
    assert total_grid == total_pred


def test_involution_guards(ex31):
    _, G = ex31
    alpha = G.element_by_word("alpha")
    not_inv = orb.AffineIsometry.identity(7)
    with pytest.raises(ValueError):
        orb.involution_locus(not_inv, G)  # identity is not an involution


def test_eight_dim_group_nonabelian():
    cfg = orb.load_config(packaged_config("sec42.toml"))
    G = orb.generate_group(cfg.generators)
    assert G.order == 8
    assert not G.abelian
    # quaternion-type relations: alpha^2 = beta^2 is central of order 2
    a, b = cfg.generators["alpha"], cfg.generators["beta"]
    assert a @ a == b @ b
    assert G.element_order(a @ a) == 2


def test_element_by_word(ex31):
    _, G = ex31
    a, b = G.generators["alpha"], G.generators["beta"]
    assert G.element_by_word("alpha*beta") == a @ b
    assert G.element_by_word("1").is_identity()
    with pytest.raises(KeyError):
        G.element_by_word("delta")


def test_load_config_errors(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text('[orbifold]\ntitle = "no dimension"\n')
    with pytest.raises(ValueError, match="dimension"):
        orb.load_config(str(p))
    with pytest.raises(FileNotFoundError):
        orb.load_config(str(tmp_path / "absent.toml"))


def test_preserves_form_signs(ex31):
    from caligeo.structures import phi0

    cfg, G = ex31
    for g in G.elements:
        assert orb.preserves_form(g, phi0()) == 1
