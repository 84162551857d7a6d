"""Exterior algebra over R^n with exact rational coefficients."""
from fractions import Fraction
from itertools import combinations
from math import comb

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from caligeo.forms import (
    ExteriorForm,
    LinearEndo,
    as_tensor,
    dx,
    embed,
    evaluate,
    hodge_star,
    interior_product,
    norm_squared,
    perm_sign,
    pullback,
    wedge,
    zero_form,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def form_strategy(n: int, k: int, max_terms: int = 4):
    idx = st.tuples(*[st.integers(1, n)] * k) if k else st.just(())
    pairs = st.lists(st.tuples(idx, rationals), max_size=max_terms)
    return pairs.map(lambda ps: ExteriorForm(n, k, dict(ps)))


def test_canonicalization():
    a = ExteriorForm(4, 2, {(2, 1): 3, (1, 2): 1})
    assert a.terms == {(1, 2): Fraction(-2)}
    assert a.coefficient(2, 1) == 2
    # repeated indices vanish
    assert ExteriorForm(4, 2, {(3, 3): 7}).is_zero()


def test_constructor_guards():
    with pytest.raises(ValueError):
        ExteriorForm(9, 1)
    with pytest.raises(ValueError):
        ExteriorForm(4, 5)
    with pytest.raises(ValueError):
        ExteriorForm(4, 2, {(1, 5): 1})
    with pytest.raises(ValueError):
        ExteriorForm(4, 2, {(1,): 1})


def test_perm_sign():
    assert perm_sign((1, 2, 3)) == 1
    assert perm_sign((2, 1, 3)) == -1
    assert perm_sign((3, 1, 2)) == 1
    assert perm_sign((4, 3, 2, 1)) == 1


@given(form_strategy(5, 2), form_strategy(5, 2))
def test_addition_commutes(a, b):
    assert a + b == b + a


@given(form_strategy(5, 2), rationals)
def test_scalar_action(a, c):
    assert c * a == ExteriorForm(5, 2, {k: c * v for k, v in a.terms.items()})
    assert a - a == zero_form(5, 2)


@given(form_strategy(6, 2), form_strategy(6, 3))
def test_wedge_graded_commutativity(a, b):
    # a ^ b = (-1)^{pq} b ^ a with p=2, q=3
    assert wedge(a, b) == wedge(b, a)


@given(form_strategy(6, 1), form_strategy(6, 2))
def test_wedge_anticommutes_odd(a, b):
    ab = wedge(a, b)
    ba = wedge(b, a)
    assert ab == ba  # 1*2 even
    assert wedge(a, a).is_zero()


@settings(max_examples=30)
@given(form_strategy(6, 1), form_strategy(6, 2), form_strategy(6, 2))
def test_wedge_bilinear_and_associative(a, b, c):
    assert wedge(a, b + c) == wedge(a, b) + wedge(a, c)
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))


def test_wedge_exact_value():
    n = 4
    a = dx(n, 1) + 2 * dx(n, 2)
    b = dx(n, 3, 4)
    w = wedge(a, b)
    assert w.terms == {(1, 3, 4): Fraction(1), (2, 3, 4): Fraction(2)}


@given(st.integers(1, 8), st.data())
def test_hodge_star_involution_sign(n, data):
    k = data.draw(st.integers(0, n))
    a = data.draw(form_strategy(n, k, max_terms=3))
    sign = (-1) ** (k * (n - k))
    assert hodge_star(hodge_star(a)) == sign * a


def test_hodge_star_euclidean_pairing():
    # a ^ *a = |a|^2 vol, checked exactly on a mixed 2-form
    n = 5
    a = 3 * dx(n, 1, 2) + Fraction(1, 2) * dx(n, 2, 4) - dx(n, 3, 5)
    top = wedge(a, hodge_star(a))
    vol = dx(n, *range(1, n + 1))
    assert top == norm_squared(a) * vol


@given(form_strategy(5, 2, max_terms=3), form_strategy(5, 2, max_terms=3))
def test_hodge_star_is_linear(a, b):
    assert hodge_star(a + b) == hodge_star(a) + hodge_star(b)


def test_interior_product_antiderivation():
    n = 5
    v = [1, 2, 0, -1, 3]
    a = dx(n, 1) + 2 * dx(n, 4)
    b = dx(n, 2, 3)
    lhs = interior_product(v, wedge(a, b))
    # iota_v(a ^ b) = (iota_v a) b - a ^ (iota_v b) for deg a = 1
    scalar = interior_product(v, a).coefficient()
    rhs = scalar * b - wedge(a, interior_product(v, b))
    assert lhs == rhs


@given(form_strategy(5, 3, max_terms=3), st.lists(rationals, min_size=5, max_size=5))
def test_interior_product_squares_to_zero(a, v):
    assert interior_product(v, interior_product(v, a)).is_zero()


def test_evaluate_alternating_and_multilinear():
    n = 6
    a = dx(n, 1, 3, 5) - 2 * dx(n, 2, 4, 6)
    u = [1, 0, 2, 0, 0, 1]
    v = [0, 1, 0, 3, 0, 0]
    w = [2, 0, 0, 0, 1, 0]
    assert evaluate(a, [u, v, w]) == -evaluate(a, [v, u, w])
    two_u = [2 * x for x in u]
    assert evaluate(a, [two_u, v, w]) == 2 * evaluate(a, [u, v, w])
    assert evaluate(a, [u, u, w]) == 0


def test_evaluate_requires_exact_input():
    a = dx(3, 1, 2)
    with pytest.raises(TypeError):
        evaluate(a, [np.array([1.0, 0.0, 0.0]), [0, 1, 0]])


def test_evaluate_matches_tensor():
    n = 5
    a = dx(n, 1, 2) + Fraction(3, 7) * dx(n, 3, 5)
    T = as_tensor(a)
    rng = np.random.default_rng(0)
    for _ in range(5):
        u, v = rng.integers(-3, 4, n), rng.integers(-3, 4, n)
        exact = evaluate(a, [[int(x) for x in u], [int(x) for x in v]])
        assert float(exact) == pytest.approx(float(u @ T @ v))


def test_pullback_functorial():
    n = 4
    A = LinearEndo([[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 2, 1], [0, 0, 0, 1]])
    B = LinearEndo([[1, 1, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 3, 1]])
    a = dx(n, 1, 3) - 2 * dx(n, 2, 4)
    assert pullback(pullback(a, A), B) == pullback(a, A @ B)
    assert pullback(a, LinearEndo.identity(n)) == a


def test_pullback_top_degree_is_determinant():
    A = LinearEndo([[2, 1, 0], [0, 1, 1], [1, 0, 1]])
    vol = dx(3, 1, 2, 3)
    assert pullback(vol, A) == A.det() * vol
    assert A.det() == Fraction(3)


def test_embed_shifts_indices():
    a = dx(3, 1, 2)
    b = embed(a, 7, offset=2)
    assert b.terms == {(3, 4): Fraction(1)}
    assert b.ambient_dim == 7


def test_norm_squared_counts_terms():
    n = 7
    a = dx(n, 1, 2, 3) - dx(n, 4, 5, 6)
    assert norm_squared(a) == 2


def test_dimension_of_degree_spaces():
    # number of independent basis monomials matches binomial coefficients
    n = 6
    for k in range(n + 1):
        basis = [dx(n, *c) for c in combinations(range(1, n + 1), k)]
        assert len(basis) == comb(n, k)
        seen = {tuple(sorted(b.terms)) for b in basis}
        assert len(seen) == comb(n, k)


def test_text_and_json_round_trip():
    a = Fraction(-3, 2) * dx(5, 1, 4) + dx(5, 2, 3)
    assert ExteriorForm.from_text(5, 2, a.to_text()) == a
    assert ExteriorForm.from_json(a.to_json()) == a
