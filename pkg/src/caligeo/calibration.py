"""Oriented planes, comass optimization, and calibrated-plane classification.

Planes carry floating orthonormal frames; the exact forms enter through
their dense tensors.  The comass optimizer is projected gradient ascent on
the Stiefel manifold with a Gram-Schmidt retraction and multi-start; its
result is a certified lower bound on the comass (the value of the best
plane found), not an upper bound.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from caligeo.forms import ExteriorForm, as_tensor
from caligeo.structures import phi0, spin7_omega0, star_phi0

FRAME_TOL = 1e-12


class AmbiguousSpectrumError(RuntimeError):
    """Raised when the Hessian spectrum shows no clear zero/nonzero gap."""


class PlaneClass(Enum):
    ASSOCIATIVE = "associative"
    COASSOCIATIVE = "coassociative"
    CAYLEY = "cayley"
    NONE = "none"


class OrientedPlane:
    """Oriented k-plane in R^n as an ordered orthonormal frame (n x k).

    The input frame is re-orthonormalized by Gram-Schmidt; column order is
    the orientation.
    """

    __slots__ = ("ambient_dim", "degree", "frame")

    def __init__(self, frame: Sequence[Sequence[float]] | np.ndarray):
        X = np.asarray(frame, dtype=float)
        if X.ndim != 2 or X.shape[0] < X.shape[1] or X.shape[1] < 1:
            raise ValueError(f"frame must be n x k with n >= k >= 1, got {X.shape}")
        Q, R = np.linalg.qr(X)
        diag = np.diag(R)
        if np.min(np.abs(diag)) < 1e-10:
            raise ValueError("frame columns are numerically dependent")
        Q = Q * np.sign(diag)
        self.ambient_dim, self.degree = Q.shape
        self.frame = Q
        err = np.abs(Q.T @ Q - np.eye(self.degree)).max()
        if err >= FRAME_TOL:
            raise ValueError(f"orthonormalization failed, residual {err:.3e}")

    @classmethod
    def span(cls, *vectors: Sequence[float]) -> "OrientedPlane":
        return cls(np.column_stack([np.asarray(v, dtype=float) for v in vectors]))

    def complement(self) -> np.ndarray:
        """Orthonormal basis of the orthogonal complement, n x (n-k)."""
        n, k = self.ambient_dim, self.degree
        # Full QR of the frame supplies the complement columns.
        Q, _ = np.linalg.qr(self.frame, mode="complete")
        comp = Q[:, k:]
        proj = self.frame.T @ comp
        if np.abs(proj).max() > 1e-12:
            raise AssertionError("complement not orthogonal to plane")
        return comp

    def orientation_flipped(self) -> "OrientedPlane":
        X = self.frame.copy()
        X[:, [0, 1]] = X[:, [1, 0]]
        return OrientedPlane(X)

    def rotated_frame(self, rot: np.ndarray) -> "OrientedPlane":
        """Same oriented plane, re-framed by a rotation of SO(k)."""
        if abs(np.linalg.det(rot) - 1.0) > 1e-9:
            raise ValueError("re-framing matrix must have determinant 1")
        return OrientedPlane(self.frame @ rot)

    def __repr__(self) -> str:
        return f"OrientedPlane(n={self.ambient_dim}, k={self.degree})"


def _contract_all(T: np.ndarray, cols: Sequence[np.ndarray]) -> float:
    val = T
    for c in reversed(cols):
        val = np.tensordot(val, c, axes=([val.ndim - 1], [0]))
    return float(val)


def _contract_except(T: np.ndarray, cols: Sequence[np.ndarray], free: int) -> np.ndarray:
    """Contract every slot with its column except ``free``; returns a vector."""
    val = T
    for s in reversed(range(len(cols))):
        if s == free:
            continue
        val = np.tensordot(val, cols[s], axes=([s], [0]))
    return val


def _contract_except_pair(
    T: np.ndarray, cols: Sequence[np.ndarray], i: int, j: int
) -> np.ndarray:
    """Contract every slot except i < j; returns the n x n pair matrix."""
    val = T
    for s in reversed(range(len(cols))):
        if s in (i, j):
            continue
        val = np.tensordot(val, cols[s], axes=([s], [0]))
    return val


def restrict_to_plane(form: ExteriorForm, plane: OrientedPlane) -> float:
    """form(f_1, ..., f_k) on the oriented orthonormal frame."""
    if form.degree != plane.degree:
        raise ValueError("form degree does not match plane degree")
    if form.ambient_dim != plane.ambient_dim:
        raise ValueError("ambient dimensions differ")
    T = as_tensor(form)
    cols = [plane.frame[:, m] for m in range(plane.degree)]
    return _contract_all(T, cols)


def restriction_components(form: ExteriorForm, plane: OrientedPlane) -> np.ndarray:
    """All evaluations of the form on increasing tuples of frame columns.

    For a degree-d form on a k-plane this is the full restriction, one entry
    per d-subset of columns in lexicographic order.
    """
    if form.ambient_dim != plane.ambient_dim:
        raise ValueError("ambient dimensions differ")
    d, k = form.degree, plane.degree
    if d > k:
        raise ValueError("form degree exceeds plane degree")
    T = as_tensor(form)
    out = []
    for subset in combinations(range(k), d):
        cols = [plane.frame[:, m] for m in subset]
        out.append(_contract_all(T, cols))
    return np.array(out)


def random_planes(n: int, k: int, count: int, seed: int) -> np.ndarray:
    """Stack of ``count`` Haar-ish random orthonormal n x k frames."""
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((count, n, k))
    Q, R = np.linalg.qr(raw)
    signs = np.sign(np.einsum("ijj->ij", R))
    return Q * signs[:, None, :]


def restrict_many(form: ExteriorForm, frames: np.ndarray) -> np.ndarray:
    """Vectorized restrict_to_plane over a stack of frames (count x n x k)."""
    T = as_tensor(form)
    k = form.degree
    letters = "abcd"[:k]
    operands = [frames[:, :, m] for m in range(k)]
    spec = letters + "," + ",".join(f"i{c}" for c in letters) + "->i"
    return np.einsum(spec, T, *operands)


# -- comass ------------------------------------------------------------------
@dataclass
class ComassResult:
    value: float
    plane: OrientedPlane
    restarts: int
    converged: int
    best_per_restart: np.ndarray

    def __float__(self) -> float:
        return self.value


def _retract(X: np.ndarray) -> np.ndarray:
    Q, R = np.linalg.qr(X)
    return Q * np.sign(np.diag(R))


def comass(
    form: ExteriorForm,
    restarts: int = 200,
    seed: int = 0,
    tol: float = 1e-10,
    max_iter: int = 300,
) -> ComassResult:
    """Best restriction value over oriented k-planes, by multi-start ascent.

    Projected gradient ascent on orthonormal frames with Gram-Schmidt
    retraction and Armijo backtracking.  Restart seeds are split from the
    master seed, so the result does not depend on execution order.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    if not 0 < tol < 1:
        raise ValueError("tol must lie in (0, 1)")
    n, k = form.ambient_dim, form.degree
    T = as_tensor(form)

    def value(X: np.ndarray) -> float:
        return _contract_all(T, [X[:, m] for m in range(k)])

    def grad(X: np.ndarray) -> np.ndarray:
        cols = [X[:, m] for m in range(k)]
        return np.column_stack([_contract_except(T, cols, m) for m in range(k)])

    best_vals = np.empty(restarts)
    best_X: Optional[np.ndarray] = None
    best_val = -np.inf
    converged = 0
    children = np.random.SeedSequence(seed).spawn(restarts)
    for r in range(restarts):
        rng = np.random.default_rng(children[r])
        X = _retract(rng.standard_normal((n, k)))
        if value(X) < 0:
            X[:, [0, 1]] = X[:, [1, 0]]
        step = 1.0
        ok = False
        for _ in range(max_iter):
            v = value(X)
            G = grad(X)
            R = G - X @ (X.T @ G)
            gnorm2 = float(np.sum(R * R))
            # Value deficit at a maximum scales like gnorm^2, so this bounds
            # the value error by roughly tol.
            if gnorm2 <= tol * max(1.0, abs(v)):
                ok = True
                break
            while step > 1e-16:
                Xn = _retract(X + step * R)
                if value(Xn) >= v + 0.3 * step * gnorm2:
                    break
                step *= 0.5
            else:
                break
            X = Xn
            step = min(step * 2.0, 2.0)
        best_vals[r] = value(X)
        converged += ok
        if best_vals[r] > best_val:
            best_val = best_vals[r]
            best_X = X
    assert best_X is not None
    return ComassResult(
        value=best_val,
        plane=OrientedPlane(best_X),
        restarts=restarts,
        converged=converged,
        best_per_restart=best_vals,
    )


# -- classification ----------------------------------------------------------
@dataclass(frozen=True)
class PlaneClassification:
    kind: PlaneClass
    value: float


def classify_plane(plane: OrientedPlane, tol: float = 1e-9) -> PlaneClassification:
    """Calibrated-plane test for (n, k) in {(7,3), (7,4), (8,4)}.

    The achieved value is the restriction of the relevant model form; the
    class is assigned when that value is 1 within tol.
    """
    nk = (plane.ambient_dim, plane.degree)
    if nk == (7, 3):
        val = restrict_to_plane(phi0(), plane)
        kind = PlaneClass.ASSOCIATIVE if abs(val - 1.0) <= tol else PlaneClass.NONE
    elif nk == (7, 4):
        val = restrict_to_plane(star_phi0(), plane)
        kind = PlaneClass.COASSOCIATIVE if abs(val - 1.0) <= tol else PlaneClass.NONE
    elif nk == (8, 4):
        val = restrict_to_plane(spin7_omega0(), plane)
        kind = PlaneClass.CAYLEY if abs(val - 1.0) <= tol else PlaneClass.NONE
    else:
        raise ValueError(f"unsupported (n, k) = {nk}")
    return PlaneClassification(kind, val)


def vanishing_iff_coassociative(
    plane: OrientedPlane, tol: float = 1e-9
) -> tuple[bool, bool]:
    """(phi0 restriction vanishes, plane is coassociative for some orientation).

    The two flags are computed by independent routes; their equivalence is a
    property of the geometry, asserted by the test suite, not assumed here.
    """
    if (plane.ambient_dim, plane.degree) != (7, 4):
        raise ValueError("needs a 4-plane in R^7")
    comps = restriction_components(phi0(), plane)
    vanishes = bool(np.abs(comps).max() <= tol)
    val = restrict_to_plane(star_phi0(), plane)
    coassoc = bool(abs(abs(val) - 1.0) <= tol)
    return vanishes, coassoc


# -- dimension of the calibrated family ---------------------------------------
@dataclass
class FamilySpectrum:
    eigenvalues: np.ndarray
    nullity: int
    gap: float
    cutoff: float


def family_spectrum(
    form: ExteriorForm,
    plane: OrientedPlane,
    rel_cutoff: float = 1e-6,
    calibration_tol: float = 1e-9,
) -> FamilySpectrum:
    """Spectrum of the Hessian of 1 - form|_V on Hom(V, Vperp) at the plane.

    For a frame curve X + t Xp B the second-order expansion of the
    normalized restriction gives the quadratic form
        q(B) = |B|^2 / 2 - sum_{i<j} b_i^T (Xp^T M_ij Xp) b_j,
    where M_ij contracts the form with all frame columns except slots i, j.
    The kernel dimension of q is the local dimension of the calibrated
    family through the plane.
    """
    val = restrict_to_plane(form, plane)
    if abs(val - 1.0) > calibration_tol:
        raise ValueError(f"plane is not calibrated for the form (value {val:.6f})")
    n, k = plane.ambient_dim, plane.degree
    T = as_tensor(form)
    cols = [plane.frame[:, m] for m in range(k)]
    Xp = plane.complement()
    p = n - k
    H = np.eye(k * p)
    for i in range(k):
        for j in range(i + 1, k):
            M = _contract_except_pair(T, cols, i, j)
            W = Xp.T @ M @ Xp
            H[i * p : (i + 1) * p, j * p : (j + 1) * p] -= W
            H[j * p : (j + 1) * p, i * p : (i + 1) * p] -= W.T
    eig = np.linalg.eigvalsh(H)
    scale = np.abs(eig).max()
    cutoff = rel_cutoff * scale
    zero = np.abs(eig) <= cutoff
    nullity = int(zero.sum())
    kept = np.abs(eig[~zero])
    dropped = np.abs(eig[zero])
    if kept.size == 0:
        gap = np.inf
    elif dropped.size == 0 or dropped.max() == 0.0:
        gap = np.inf
    else:
        gap = float(kept.min() / dropped.max())
    if gap < 1e3:
        raise AmbiguousSpectrumError(
            f"no clear spectral gap: kept min {kept.min():.3e}, "
            f"dropped max {dropped.max():.3e}"
        )
    return FamilySpectrum(eigenvalues=eig, nullity=nullity, gap=gap, cutoff=cutoff)


def calibrated_family_nullity(form: ExteriorForm, plane: OrientedPlane) -> int:
    """Dimension of the local family of calibrated planes through the plane."""
    return family_spectrum(form, plane).nullity


# -- normal bundle vs self-dual forms on a coassociative plane ----------------
@dataclass
class NormalSelfdualResult:
    matrix: np.ndarray
    duality: str
    off_residual: float
    determinant: float


def _dual_basis(sign: float) -> list[np.ndarray]:
    """Basis of Lambda^2_+ (sign +1) or Lambda^2_- (sign -1) on oriented R^4."""
    basis = []
    for (a, b), (c, d) in (((0, 1), (2, 3)), ((0, 2), (3, 1)), ((0, 3), (1, 2))):
        w = np.zeros((4, 4))
        w[a, b] = 1.0
        w[b, a] = -1.0
        w[c, d] = sign
        w[d, c] = -sign
        basis.append(w)
    return basis


def normal_selfdual_isomorphism(
    plane: OrientedPlane, tol: float = 1e-9
) -> NormalSelfdualResult:
    """Matrix of v -> (v -| phi0)|_plane from the normal space to Lambda^2_+.

    For a coassociative plane the image lies in the self-dual 2-forms of the
    plane's induced orientation; flipping the orientation lands it in the
    anti-self-dual ones instead, and the result says which case occurred.
    Any component on the wrong side is an error (orientation convention bug).
    """
    if (plane.ambient_dim, plane.degree) != (7, 4):
        raise ValueError("needs a 4-plane in R^7")
    val = restrict_to_plane(star_phi0(), plane)
    if abs(val - 1.0) <= tol:
        sign, duality = 1.0, "self-dual"
    elif abs(val + 1.0) <= tol:
        sign, duality = -1.0, "anti-self-dual"
    else:
        raise ValueError("plane is not coassociative for either orientation")
    T = as_tensor(phi0())
    Xp = plane.complement()
    F = plane.frame
    basis = _dual_basis(sign)
    mat = np.zeros((3, 3))
    off_max = 0.0
    for m in range(3):
        v = Xp[:, m]
        # beta[a, b] = phi0(v, f_a, f_b) as a 2-form in frame coordinates
        beta = np.einsum("pqr,p,qa,rb->ab", T, v, F, F)
        for s, w in enumerate(basis):
            # <beta, w> with |w|^2 = 4 in the full matrix pairing
            mat[s, m] = float(np.sum(beta * w)) / 4.0
        recon = sum(mat[s, m] * basis[s] for s in range(3))
        off_max = max(off_max, float(np.abs(beta - recon).max()))
    if off_max > max(tol, 1e-9):
        raise ValueError(
            f"image has a {off_max:.3e} component of the wrong duality; "
            "orientation convention violated"
        )
    return NormalSelfdualResult(
        matrix=mat,
        duality=duality,
        off_residual=off_max,
        determinant=float(np.linalg.det(mat)),
    )
