"""Model forms for G2, Spin(7), and SU(m) geometry, with their stabilizers.

The three exceptional model forms are frozen term lists on R^7 and R^8.
Kaehler and complex volume forms are generated from a choice of complex
covectors, which makes the product-structure identities (the SU(3) and
SU(2) splittings of phi0, the SU(4) splitting of Omega0, and the
alternative complex frame on R^8) checkable by exact form equality.

Complex coordinates default to z_j = x_{2j-1} + i x_{2j}.  The two other
identifications used by the checks (the R + C^3 splitting of R^7 and the
alternative w-frame on R^8) are written out explicitly where used.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np
import scipy.linalg

from caligeo import _ratlinalg
from caligeo.forms import (
    ExteriorForm,
    dx,
    embed,
    hodge_star,
    perm_sign,
    wedge,
    zero_form,
)
from caligeo.report import Report

PHI0_TERMS = {
    (1, 2, 3): 1,
    (1, 4, 5): 1,
    (1, 6, 7): 1,
    (2, 4, 6): 1,
    (2, 5, 7): -1,
    (3, 4, 7): -1,
    (3, 5, 6): -1,
}

STAR_PHI0_TERMS = {
    (4, 5, 6, 7): 1,
    (2, 3, 6, 7): 1,
    (2, 3, 4, 5): 1,
    (1, 3, 5, 7): 1,
    (1, 3, 4, 6): -1,
    (1, 2, 5, 6): -1,
    (1, 2, 4, 7): -1,
}

OMEGA0_TERMS = {
    (1, 2, 3, 4): 1,
    (1, 2, 5, 6): 1,
    (1, 2, 7, 8): 1,
    (1, 3, 5, 7): 1,
    (1, 3, 6, 8): -1,
    (1, 4, 5, 8): -1,
    (1, 4, 6, 7): -1,
    (2, 3, 5, 8): -1,
    (2, 3, 6, 7): -1,
    (2, 4, 5, 7): -1,
    (2, 4, 6, 8): 1,
    (3, 4, 5, 6): 1,
    (3, 4, 7, 8): 1,
    (5, 6, 7, 8): 1,
}


def phi0() -> ExteriorForm:
    """The G2 3-form on R^7."""
    return ExteriorForm(7, 3, PHI0_TERMS)


def star_phi0() -> ExteriorForm:
    """The G2 4-form on R^7, the Hodge dual of phi0."""
    return ExteriorForm(7, 4, STAR_PHI0_TERMS)


def spin7_omega0() -> ExteriorForm:
    """The Spin(7) 4-form on R^8."""
    return ExteriorForm(8, 4, OMEGA0_TERMS)


# -- Kaehler and complex volume forms ---------------------------------------
CovectorPair = tuple[ExteriorForm, ExteriorForm]


def unitary_frame_forms(
    pairs: Sequence[CovectorPair],
) -> tuple[ExteriorForm, ExteriorForm, ExteriorForm]:
    """(omega, Re theta, Im theta) for complex covectors dz_j = re_j + i im_j.

    omega = sum re_j ^ im_j and theta = dz_1 ^ ... ^ dz_m, expanded exactly
    over the Gaussian rationals.
    """
    n = pairs[0][0].ambient_dim
    omega = zero_form(n, 2)
    for re, im in pairs:
        omega = omega + wedge(re, im)
    th_re, th_im = pairs[0]
    for re, im in pairs[1:]:
        th_re, th_im = (
            wedge(th_re, re) - wedge(th_im, im),
            wedge(th_re, im) + wedge(th_im, re),
        )
    return omega, th_re, th_im


def _default_pairs(m: int) -> list[CovectorPair]:
    return [(dx(2 * m, 2 * j - 1), dx(2 * m, 2 * j)) for j in range(1, m + 1)]


@dataclass(frozen=True)
class ModelKind:
    label: str
    param: Optional[int] = None


G2_PHI = ModelKind("g2-phi")
G2_STAR_PHI = ModelKind("g2-star-phi")
SPIN7_OMEGA = ModelKind("spin7-omega")


def kaehler_omega(m: int) -> ModelKind:
    return ModelKind("kaehler-omega", m)


def re_theta(m: int) -> ModelKind:
    return ModelKind("re-theta", m)


def im_theta(m: int) -> ModelKind:
    return ModelKind("im-theta", m)


def volume(n: int) -> ModelKind:
    return ModelKind("volume", n)


def model_form(kind: ModelKind | str) -> ExteriorForm:
    """The exact model form for the given kind.

    Complex kinds take the dimension parameter m in 2..4 and use the
    z_j = x_{2j-1} + i x_{2j} identification of C^m with R^{2m}.
    """
    if isinstance(kind, str):
        kind = ModelKind(kind)
    if kind.label == "g2-phi":
        return phi0()
    if kind.label == "g2-star-phi":
        return star_phi0()
    if kind.label == "spin7-omega":
        return spin7_omega0()
    if kind.label == "volume":
        n = kind.param
        if n is None or not 1 <= n <= 8:
            raise ValueError("volume form needs a dimension in 1..8")
        return dx(n, *range(1, n + 1))
    if kind.label in ("kaehler-omega", "re-theta", "im-theta"):
        m = kind.param
        if m is None or not 2 <= m <= 4:
            raise ValueError(f"{kind.label} needs a parameter m in 2..4")
        omega, th_re, th_im = unitary_frame_forms(_default_pairs(m))
        return {"kaehler-omega": omega, "re-theta": th_re, "im-theta": th_im}[kind.label]
    raise ValueError(f"unknown model kind {kind.label!r}")


# -- stabilizer Lie algebras -------------------------------------------------
Matrix = list[list[Fraction]]


def lie_derivative(A: Sequence[Sequence[Fraction]], form: ExteriorForm) -> ExteriorForm:
    """Infinitesimal action of A on a constant form, one slot at a time."""
    n = form.ambient_dim
    acc: dict[tuple[int, ...], Fraction] = {}
    for idx, c in form.terms.items():
        for s, i in enumerate(idx):
            row = A[i - 1]
            for q in range(1, n + 1):
                a = row[q - 1]
                if a == 0:
                    continue
                new_idx = idx[:s] + (q,) + idx[s + 1 :]
                if len(set(new_idx)) != len(new_idx):
                    continue
                key = tuple(sorted(new_idx))
                acc[key] = acc.get(key, Fraction(0)) + perm_sign(new_idx) * a * c
    return ExteriorForm(n, form.degree, acc)


@dataclass(frozen=True)
class StabilizerAlgebra:
    form: ExteriorForm
    dimension: int
    basis: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def basis_matrices(self) -> list[Matrix]:
        return [[list(row) for row in mat] for mat in self.basis]

    def basis_arrays(self) -> list[np.ndarray]:
        return [np.array([[float(x) for x in row] for row in mat]) for mat in self.basis]


def _antisym_basis_pairs(n: int) -> list[tuple[int, int]]:
    return [(p, q) for p in range(n) for q in range(p + 1, n)]


def stabilizer_algebra(form: ExteriorForm) -> StabilizerAlgebra:
    """Exact annihilator of the form inside the antisymmetric matrices.

    Solves L_A(form) = 0 over the basis E_pq - E_qp by exact elimination.
    """
    if form.is_zero():
        raise ValueError("form must be nonzero")
    n, k = form.ambient_dim, form.degree
    pairs = _antisym_basis_pairs(n)
    monomials = list(combinations(range(1, n + 1), k))
    row_index = {mono: r for r, mono in enumerate(monomials)}
    matrix = [[Fraction(0)] * len(pairs) for _ in monomials]
    for col, (p, q) in enumerate(pairs):
        A = [[Fraction(0)] * n for _ in range(n)]
        A[p][q] = Fraction(1)
        A[q][p] = Fraction(-1)
        image = lie_derivative(A, form)
        for idx, c in image.terms.items():
            matrix[row_index[idx]][col] = c
    kernel = _ratlinalg.nullspace(matrix)
    basis = []
    for vec in kernel:
        A = [[Fraction(0)] * n for _ in range(n)]
        for col, (p, q) in enumerate(pairs):
            if vec[col] != 0:
                A[p][q] = vec[col]
                A[q][p] = -vec[col]
        basis.append(tuple(tuple(row) for row in A))
    return StabilizerAlgebra(form=form, dimension=len(basis), basis=tuple(basis))


def random_stabilizer_element(alg: StabilizerAlgebra, seed: int) -> np.ndarray:
    """Orthogonal matrix exp(A) for a random rational combination A of the basis."""
    if not alg.basis:
        raise ValueError("stabilizer algebra has empty basis")
    rng = np.random.default_rng(seed)
    coeffs = rng.integers(-4, 5, size=alg.dimension)
    n = alg.form.ambient_dim
    A = np.zeros((n, n))
    for c, mat in zip(coeffs, alg.basis_arrays()):
        # Denominator keeps the rotation well inside the radius where expm
        # is accurate to machine precision.
        A += (float(c) / 8.0) * mat
    return scipy.linalg.expm(A)


# -- product-structure identities --------------------------------------------
def verify_product_structures() -> Report:
    """Exact checks of the splittings of phi0, *phi0, and Omega0.

    Each identity is verified by exact form equality after the stated
    coordinate identification; a deliberately sign-flipped control confirms
    the comparison can fail.
    """
    rep = Report(command="verify structures")
    p, sp, om = phi0(), star_phi0(), spin7_omega0()

    rep.add(
        "g2-star-pair",
        hodge_star(p) == sp,
        "hodge_star(phi0) equals the listed 4-form term by term",
        sp.to_text(),
        hodge_star(p).to_text(),
    )
    rep.add(
        "g2-star-involution",
        hodge_star(hodge_star(p)) == p,
        "star(star(phi0)) = phi0 on R^7",
        p.to_text(),
        hodge_star(hodge_star(p)).to_text(),
    )

    # R^7 = R + C^3 with (x_1, (x_2 + i x_3, x_4 + i x_5, x_6 + i x_7)).
    su3 = [(dx(7, 2), dx(7, 3)), (dx(7, 4), dx(7, 5)), (dx(7, 6), dx(7, 7))]
    omega3, re3, im3 = unitary_frame_forms(su3)
    built = wedge(dx(7, 1), omega3) + re3
    rep.add(
        "su3-in-g2",
        built == p,
        "dx1 ^ omega + Re theta = phi0 under the R + C^3 splitting",
        p.to_text(),
        built.to_text(),
    )
    built4 = Fraction(1, 2) * wedge(omega3, omega3) - wedge(dx(7, 1), im3)
    rep.add(
        "su3-in-g2-star",
        built4 == sp,
        "omega^2/2 - dx1 ^ Im theta = star(phi0) under the R + C^3 splitting",
        sp.to_text(),
        built4.to_text(),
    )

    # R^7 = R^3 + C^2 with z_1 = x_4 + i x_5, z_2 = x_6 + i x_7.
    su2 = [(dx(7, 4), dx(7, 5)), (dx(7, 6), dx(7, 7))]
    omega2, re2, im2 = unitary_frame_forms(su2)
    built_a = (
        dx(7, 1, 2, 3)
        + wedge(dx(7, 1), omega2)
        + wedge(dx(7, 2), re2)
        - wedge(dx(7, 3), im2)
    )
    rep.add(
        "su2-in-g2",
        built_a == p,
        "dx123 + dx1 ^ omega + dx2 ^ Re theta - dx3 ^ Im theta = phi0",
        p.to_text(),
        built_a.to_text(),
    )
    built_b = (
        Fraction(1, 2) * wedge(omega2, omega2)
        + wedge(dx(7, 2, 3), omega2)
        - wedge(dx(7, 1, 3), re2)
        - wedge(dx(7, 1, 2), im2)
    )
    rep.add(
        "su2-in-g2-star",
        hodge_star(built_a) == built_b,
        "star of the R^3 + C^2 product form equals its stated 4-form expansion",
        built_b.to_text(),
        hodge_star(built_a).to_text(),
    )

    # R^8 = C^4 with z_j = x_{2j-1} + i x_{2j}.
    omega4, re4, _ = unitary_frame_forms(_default_pairs(4))
    built_o = Fraction(1, 2) * wedge(omega4, omega4) + re4
    rep.add(
        "su4-in-spin7",
        built_o == om,
        "omega^2/2 + Re theta = Omega0 in the standard complex frame",
        om.to_text(),
        built_o.to_text(),
    )

    # Alternative complex frame w = (-x1 + i x3, x2 + i x4, -x5 + i x7, x6 + i x8).
    wpairs = [
        (-1 * dx(8, 1), dx(8, 3)),
        (dx(8, 2), dx(8, 4)),
        (-1 * dx(8, 5), dx(8, 7)),
        (dx(8, 6), dx(8, 8)),
    ]
    omega_w, re_w, _ = unitary_frame_forms(wpairs)
    built_w = Fraction(1, 2) * wedge(omega_w, omega_w) + re_w
    rep.add(
        "su4-in-spin7-alt-frame",
        built_w == om,
        "omega^2/2 + Re theta = Omega0 in the alternative complex frame",
        om.to_text(),
        built_w.to_text(),
    )

    # R^8 = R + R^7 with the index shift x_a -> x_{a+1}.
    split = wedge(dx(8, 1), embed(p, 8, 1)) + embed(sp, 8, 1)
    rep.add(
        "g2-spin7-splitting",
        split == om,
        "dx1 ^ shift(phi0) + shift(star phi0) = Omega0",
        om.to_text(),
        split.to_text(),
    )

    control = wedge(dx(7, 1), omega3) - re3
    rep.add(
        "control-sign-flip",
        control != p,
        "a sign-flipped candidate is detected as different from phi0",
        "forms differ",
        "differ" if control != p else "equal",
    )
    return rep
