"""Model forms and their stabilizer algebras."""
import numpy as np
import pytest

from caligeo.forms import dx, hodge_star, norm_squared, wedge
from caligeo.structures import (
    kaehler_omega,
    lie_derivative,
    model_form,
    phi0,
    random_stabilizer_element,
    re_theta,
    spin7_omega0,
    stabilizer_algebra,
    star_phi0,
    unitary_frame_forms,
    verify_product_structures,
    volume,
)


def test_three_form_term_signs():
    ph = phi0()
    assert ph.ambient_dim == 7 and ph.degree == 3
    assert ph.coefficient(1, 2, 3) == 1
    assert ph.coefficient(2, 5, 7) == -1
    assert norm_squared(ph) == 7


def test_star_pair_is_exact():
    assert hodge_star(phi0()) == star_phi0()
    assert hodge_star(star_phi0()) == phi0()
    assert norm_squared(star_phi0()) == 7


def test_four_form_normalization():
    om = spin7_omega0()
    assert om.ambient_dim == 8 and om.degree == 4
    assert om.coefficient(1, 2, 3, 4) == 1
    assert norm_squared(om) == 14
    # om ^ om = 14 vol, the self-duality pairing
    assert wedge(om, om) == 14 * dx(8, *range(1, 9))
    assert hodge_star(om) == om


def test_verify_product_structures_all_pass():
    rep = verify_product_structures()
    assert rep.all_passed(), rep.to_text()
    assert len(rep.checks) >= 7


@pytest.mark.parametrize(
    "form,dim",
    [(phi0(), 14), (star_phi0(), 14), (spin7_omega0(), 21)],
)
def test_stabilizer_dimensions(form, dim):
    assert stabilizer_algebra(form).dimension == dim


def _coeff_vector(form):
    from itertools import combinations

    keys = list(combinations(range(1, form.ambient_dim + 1), form.degree))
    return np.array([float(form.coefficient(*k)) for k in keys])


@pytest.mark.parametrize("m,expected", [(2, 3), (3, 8), (4, 15)])
def test_unitary_stabilizers(m, expected):
    # stab(omega) = u(m); adding Re theta cuts it down to su(m)
    omega = model_form(kaehler_omega(m))
    th_re = model_form(re_theta(m))
    alg = stabilizer_algebra(omega)
    assert alg.dimension == m * m
    cols = [_coeff_vector(lie_derivative(A, th_re)) for A in alg.basis_matrices()]
    M = np.column_stack(cols)
    rank = np.linalg.matrix_rank(M, tol=1e-9)
    assert alg.dimension - rank == expected


def test_random_stabilizer_element_preserves_form():
    for form in (phi0(), spin7_omega0()):
        alg = stabilizer_algebra(form)
        g = random_stabilizer_element(alg, seed=3)
        n = form.ambient_dim
        assert np.allclose(g @ g.T, np.eye(n), atol=1e-12)
        # numeric pullback via the tensor route
        from caligeo.forms import as_tensor

        T = as_tensor(form)
        k = form.degree
        axes = list(range(k))
        S = T
        for ax in axes:
            S = np.tensordot(S, g, axes=([0], [0]))
        assert np.allclose(S, T, atol=1e-10)


def test_model_form_labels():
    assert model_form("g2-phi") == phi0()
    assert model_form("g2-star-phi") == star_phi0()
    assert model_form("spin7-omega") == spin7_omega0()
    assert model_form(volume(4)) == dx(4, 1, 2, 3, 4)
    with pytest.raises(ValueError):
        model_form("nonsense")
    with pytest.raises(ValueError):
        model_form(kaehler_omega(5))


def test_unitary_frame_forms_relations():
    # omega^m / m! is the volume form; theta has unit norm squared 2^m? checked exactly
    pairs = [(dx(6, 1), dx(6, 2)), (dx(6, 3), dx(6, 4)), (dx(6, 5), dx(6, 6))]
    omega, th_re, th_im = unitary_frame_forms(pairs)
    vol = dx(6, *range(1, 7))
    w3 = wedge(wedge(omega, omega), omega)
    assert w3 == 6 * vol
    # Re theta ^ Im theta = vol * 2^{m-1}? verify the standard SU(3) identity
    assert wedge(th_re, th_im) == 4 * vol
    assert wedge(omega, th_re).is_zero()
    assert wedge(omega, th_im).is_zero()
