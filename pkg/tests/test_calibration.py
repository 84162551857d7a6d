"""Comass, plane classification, and the calibrated-family spectrum."""
import numpy as np
import pytest

from caligeo.calibration import (
    OrientedPlane,
    PlaneClass,
    calibrated_family_nullity,
    classify_plane,
    comass,
    family_spectrum,
    normal_selfdual_isomorphism,
    restrict_to_plane,
    vanishing_iff_coassociative,
)
from caligeo.structures import (
    model_form,
    phi0,
    random_stabilizer_element,
    spin7_omega0,
    stabilizer_algebra,
)


def span(n, *cols):
    M = np.zeros((n, len(cols)))
    for j, i in enumerate(cols):
        M[i - 1, j] = 1.0
    return OrientedPlane(M)


MODEL_PLANES = {
    "assoc": span(7, 1, 2, 3),
    "coassoc": span(7, 4, 5, 6, 7),
    "cayley": span(8, 1, 2, 3, 4),
}


def test_oriented_plane_orthonormalizes():
    rng = np.random.default_rng(1)
    M = rng.normal(size=(7, 3))
    pl = OrientedPlane(M)
    Q = pl.frame
    assert np.allclose(Q.T @ Q, np.eye(3), atol=1e-12)
    # same column span as the input
    proj = Q @ Q.T
    assert np.allclose(proj @ M, M, atol=1e-10)


def test_oriented_plane_rejects_degenerate():
    M = np.zeros((7, 3))
    M[0, 0] = M[0, 1] = 1.0
    M[1, 2] = 1.0
    with pytest.raises(ValueError):
        OrientedPlane(M)
    with pytest.raises(ValueError):
        OrientedPlane(np.ones((3, 7)))


def test_orientation_flip_negates_restriction():
    pl = MODEL_PLANES["assoc"]
    assert restrict_to_plane(phi0(), pl) == pytest.approx(1.0, abs=1e-14)
    assert restrict_to_plane(phi0(), pl.orientation_flipped()) == pytest.approx(-1.0, abs=1e-14)


def test_complement_is_orthogonal():
    pl = MODEL_PLANES["coassoc"]
    comp = pl.complement()
    assert comp.shape == (7, 3)
    assert np.allclose(pl.frame.T @ comp, 0.0, atol=1e-12)


@pytest.mark.parametrize(
    "label,plane",
    [("g2-phi", MODEL_PLANES["assoc"]), ("g2-star-phi", MODEL_PLANES["coassoc"]), ("spin7-omega", MODEL_PLANES["cayley"])],
)
def test_model_planes_achieve_one_exactly(label, plane):
    assert abs(restrict_to_plane(model_form(label), plane) - 1.0) <= 1e-12


@pytest.mark.parametrize("label", ["g2-phi", "g2-star-phi", "spin7-omega"])
def test_comass_is_one(label):
    res = comass(model_form(label), restarts=60, seed=0)
    assert abs(res.value - 1.0) <= 1e-4
    assert res.converged == 60
    # the maximizing plane is itself calibrated
    cls = classify_plane(res.plane)
    assert cls.kind != PlaneClass.NONE


def test_comass_deterministic():
    a = comass(phi0(), restarts=20, seed=5)
    b = comass(phi0(), restarts=20, seed=5)
    assert a.value == b.value
    assert np.array_equal(a.best_per_restart, b.best_per_restart)


def test_classify_model_planes():
    assert classify_plane(MODEL_PLANES["assoc"]).kind == PlaneClass.ASSOCIATIVE
    assert classify_plane(MODEL_PLANES["coassoc"]).kind == PlaneClass.COASSOCIATIVE
    assert classify_plane(MODEL_PLANES["cayley"]).kind == PlaneClass.CAYLEY
    rng = np.random.default_rng(2)
    generic = OrientedPlane(rng.normal(size=(7, 3)))
    assert classify_plane(generic).kind == PlaneClass.NONE


def test_classification_invariant_under_stabilizer():
    # rotating a calibrated plane by a stabilizer element keeps its class
    g7 = random_stabilizer_element(stabilizer_algebra(phi0()), seed=11)
    for key, expected in [("assoc", PlaneClass.ASSOCIATIVE), ("coassoc", PlaneClass.COASSOCIATIVE)]:
        pl = MODEL_PLANES[key]
        moved = OrientedPlane(g7 @ pl.frame)
        assert classify_plane(moved).kind == expected
    g8 = random_stabilizer_element(stabilizer_algebra(spin7_omega0()), seed=11)
    moved = OrientedPlane(g8 @ MODEL_PLANES["cayley"].frame)
    assert classify_plane(moved).kind == PlaneClass.CAYLEY


def test_classify_rejects_wrong_shape():
    with pytest.raises(ValueError):
        classify_plane(span(6, 1, 2, 3))


def test_vanishing_iff_coassociative():
    # two independent routes must agree on any 4-plane in R^7
    assert vanishing_iff_coassociative(MODEL_PLANES["coassoc"]) == (True, True)
    rng = np.random.default_rng(3)
    for _ in range(50):
        pl = OrientedPlane(rng.normal(size=(7, 4)))
        vanishes, coassoc = vanishing_iff_coassociative(pl)
        assert vanishes == coassoc


@pytest.mark.parametrize(
    "label,key,nullity",
    [
        ("g2-phi", "assoc", 8),
        ("g2-star-phi", "coassoc", 8),
        ("spin7-omega", "cayley", 12),
    ],
)
def test_family_nullities(label, key, nullity):
    spec = family_spectrum(model_form(label), MODEL_PLANES[key])
    assert spec.nullity == nullity
    assert spec.gap >= 1e3
    assert calibrated_family_nullity(model_form(label), MODEL_PLANES[key]) == nullity


def test_family_spectrum_rejects_uncalibrated_plane():
    rng = np.random.default_rng(4)
    generic = OrientedPlane(rng.normal(size=(7, 3)))
    with pytest.raises(ValueError):
        family_spectrum(phi0(), generic)


def test_normal_selfdual_isomorphism_model():
    res = normal_selfdual_isomorphism(MODEL_PLANES["coassoc"])
    assert res.matrix.shape == (3, 3)
    assert abs(abs(res.determinant) - 1.0) <= 1e-9
    assert res.off_residual <= 1e-12
    assert res.duality in ("self-dual", "anti-self-dual")
    # invertibility is the content: the 3 normal directions hit all 3 dual forms
    assert np.linalg.matrix_rank(res.matrix, tol=1e-9) == 3


def test_normal_selfdual_isomorphism_rotated():
    g7 = random_stabilizer_element(stabilizer_algebra(phi0()), seed=7)
    moved = OrientedPlane(g7 @ MODEL_PLANES["coassoc"].frame)
    res = normal_selfdual_isomorphism(moved)
    assert abs(abs(res.determinant) - 1.0) <= 1e-8
    assert res.off_residual <= 1e-9
