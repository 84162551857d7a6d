"""Periodic-grid solvers and linearization checks for the graph equations.

Fields live on uniform grids over the unit torus (T^3 for associative
graphs, T^4 for Cayley graphs and coassociative deformations), channels
first.  The nonlinear residuals reuse the exact cross-product tables of
caligeo.pde; derivatives are fourth-order centered stencils inside the
Newton solver and exact Fourier derivatives in the deformation check,
whose target accuracy a fourth-order stencil cannot reach on a 12^4 grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy.sparse.linalg import LinearOperator, lgmres

from caligeo import pde
from caligeo.calibration import (
    OrientedPlane,
    PlaneClass,
    classify_plane,
    normal_selfdual_isomorphism,
)
from caligeo.forms import dx, evaluate, wedge
from caligeo.structures import phi0


# -- fields -------------------------------------------------------------------
@dataclass
class PeriodicField:
    """Channels-first samples of a map on the unit torus, equal axes."""

    data: np.ndarray

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=float)
        dims = self.data.shape[1:]
        if len(dims) not in (3, 4) or len(set(dims)) != 1:
            raise ValueError(f"expected (channels, n, ..., n) samples, got {self.data.shape}")

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def base_dim(self) -> int:
        return self.data.ndim - 1

    @property
    def grid(self) -> int:
        return self.data.shape[1]

    @property
    def spacing(self) -> float:
        return 1.0 / self.grid

    def copy(self) -> "PeriodicField":
        return PeriodicField(self.data.copy())

    def mean(self) -> np.ndarray:
        return self.data.mean(axis=tuple(range(1, self.data.ndim)))

    def sup_norm(self) -> float:
        return float(np.abs(self.data).max())


def band_limited_field(
    base_dim: int,
    grid: int,
    channels: int = 4,
    kmax: int = 2,
    seed: int = 0,
    scale: float = 1.0,
) -> PeriodicField:
    """Random real field with Fourier support in |k_a| <= kmax, sup norm = scale."""
    if not 0 < kmax < grid // 2:
        raise ValueError("kmax must be positive and below the Nyquist frequency")
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((channels,) + (grid,) * base_dim)
    spec = np.fft.fftn(raw, axes=tuple(range(1, base_dim + 1)))
    freqs = np.fft.fftfreq(grid, d=1.0 / grid)
    for axis in range(base_dim):
        shape = [1] * (base_dim + 1)
        shape[axis + 1] = grid
        mask = (np.abs(freqs) <= kmax).reshape(shape)
        spec = spec * mask
    out = np.fft.ifftn(spec, axes=tuple(range(1, base_dim + 1))).real
    top = np.abs(out).max()
    if top == 0:
        raise ValueError("degenerate random field")
    return PeriodicField(out * (scale / top))


def stencil_partial(data: np.ndarray, axis: int, spacing: float) -> np.ndarray:
    """Fourth-order centered first derivative along a periodic axis."""
    f1 = np.roll(data, -1, axis=axis)
    f2 = np.roll(data, -2, axis=axis)
    b1 = np.roll(data, 1, axis=axis)
    b2 = np.roll(data, 2, axis=axis)
    return (8.0 * (f1 - b1) - (f2 - b2)) / (12.0 * spacing)


def spectral_partial(data: np.ndarray, axis: int) -> np.ndarray:
    """Exact derivative of a band-limited periodic sample along an axis."""
    n = data.shape[axis]
    spec = np.fft.fft(data, axis=axis)
    k = np.fft.fftfreq(n, d=1.0 / n)
    shape = [1] * data.ndim
    shape[axis] = n
    return np.fft.ifft(spec * (2j * math.pi) * k.reshape(shape), axis=axis).real


# -- vectorized quaternion helpers ---------------------------------------------
def _qmul_arrays(a, b):
    """Componentwise quaternion product of channel-stacked arrays."""
    a0, a1, a2, a3 = a
    b0, b1, b2, b3 = b
    return np.stack(
        [
            a0 * b0 - a1 * b1 - a2 * b2 - a3 * b3,
            a0 * b1 + a1 * b0 + a2 * b3 - a3 * b2,
            a0 * b2 - a1 * b3 + a2 * b0 + a3 * b1,
            a0 * b3 + a1 * b2 - a2 * b1 + a3 * b0,
        ]
    )


_UNITS = {
    "assoc": (
        np.array([0.0, 1.0, 0.0, 0.0]),
        np.array([0.0, 0.0, 1.0, 0.0]),
        np.array([0.0, 0.0, 0.0, -1.0]),
    ),
    "cayley": (
        np.array([1.0, 0.0, 0.0, 0.0]),
        np.array([0.0, 1.0, 0.0, 0.0]),
        np.array([0.0, 0.0, 1.0, 0.0]),
        np.array([0.0, 0.0, 0.0, 1.0]),
    ),
}


def _partials(data: np.ndarray, spacing: float) -> list[np.ndarray]:
    return [stencil_partial(data, axis, spacing) for axis in range(1, data.ndim)]


def _dirac_grid(parts: Sequence[np.ndarray], kind: str) -> np.ndarray:
    out = np.zeros_like(parts[0])
    for u, p in zip(_UNITS[kind], parts):
        out += _qmul_arrays(u.reshape((4,) + (1,) * (p.ndim - 1)), p)
    return out


def _cross_grid(parts: Sequence[np.ndarray], kind: str) -> np.ndarray:
    tables = pde.derive_cross_products()
    out = np.zeros_like(parts[0])
    if kind == "assoc":
        for (c1, c2, c3), coeffs in tables["trilinear"].entries.items():
            prod = parts[0][c1] * parts[1][c2] * parts[2][c3]
            for o in range(4):
                if coeffs[o]:
                    out[o] += float(coeffs[o]) * prod
    else:
        flat = [parts[v // 4][v % 4] for v in range(16)]
        for (v1, v2, v3), coeffs in tables["cubic"].entries.items():
            prod = flat[v1] * flat[v2] * flat[v3]
            for o in range(4):
                if coeffs[o]:
                    out[o] += float(coeffs[o]) * prod
    return out


def _cross_tangent_grid(parts, delta_parts, kind: str) -> np.ndarray:
    """Directional derivative of the cross term at parts along delta_parts."""
    tables = pde.derive_cross_products()
    out = np.zeros_like(parts[0])
    if kind == "assoc":
        for (c1, c2, c3), coeffs in tables["trilinear"].entries.items():
            prod = (
                delta_parts[0][c1] * parts[1][c2] * parts[2][c3]
                + parts[0][c1] * delta_parts[1][c2] * parts[2][c3]
                + parts[0][c1] * parts[1][c2] * delta_parts[2][c3]
            )
            for o in range(4):
                if coeffs[o]:
                    out[o] += float(coeffs[o]) * prod
    else:
        flat = [parts[v // 4][v % 4] for v in range(16)]
        dflat = [delta_parts[v // 4][v % 4] for v in range(16)]
        for (v1, v2, v3), coeffs in tables["cubic"].entries.items():
            prod = (
                dflat[v1] * flat[v2] * flat[v3]
                + flat[v1] * dflat[v2] * flat[v3]
                + flat[v1] * flat[v2] * dflat[v3]
            )
            for o in range(4):
                if coeffs[o]:
                    out[o] += float(coeffs[o]) * prod
    return out


def graph_residual_grid(field: PeriodicField, kind: str) -> np.ndarray:
    """Pointwise quaternion residual of the graph equation on the grid."""
    if kind not in ("assoc", "cayley"):
        raise ValueError("kind must be 'assoc' or 'cayley'")
    want = 3 if kind == "assoc" else 4
    if field.base_dim != want or field.channels != 4:
        raise ValueError(f"{kind} needs 4 channels on a {want}-torus")
    parts = _partials(field.data, field.spacing)
    return _dirac_grid(parts, kind) - _cross_grid(parts, kind)


# -- Fourier-diagonal preconditioner --------------------------------------------
def _stencil_symbols(grid: int, base_dim: int) -> list[np.ndarray]:
    """Real symbols s_a(k) of the fourth-order stencil, broadcast per axis."""
    theta = 2.0 * math.pi * np.fft.fftfreq(grid, d=1.0 / grid) / grid
    s = (8.0 * np.sin(theta) - np.sin(2.0 * theta)) * grid / 6.0
    out = []
    for axis in range(base_dim):
        shape = [1] * base_dim
        shape[axis] = grid
        out.append(s.reshape(shape))
    return out


class _DiracPreconditioner:
    """Exact Fourier inverse of the stencil Dirac operator off its kernel.

    Modes in the kernel (all axis frequencies 0 or Nyquist) are annihilated,
    which freezes the solution's kernel content at the initial guess.
    """

    def __init__(self, kind: str, grid: int):
        base_dim = 3 if kind == "assoc" else 4
        syms = _stencil_symbols(grid, base_dim)
        q = [np.zeros((grid,) * base_dim) for _ in range(4)]
        units = _UNITS[kind]
        for u, s in zip(units, syms):
            for c in range(4):
                if u[c]:
                    q[c] = q[c] + u[c] * s
        self.kind = kind
        self.grid = grid
        self.base_dim = base_dim
        self.norm2 = sum(x * x for x in q)
        self.qbar = [q[0], -q[1], -q[2], -q[3]]
        self.kernel_mask = self.norm2 == 0.0
        self.kernel_dim = int(self.kernel_mask.sum()) * 4

    def apply(self, rhs: np.ndarray) -> np.ndarray:
        axes = tuple(range(1, self.base_dim + 1))
        spec = np.fft.fftn(rhs, axes=axes)
        prod = _qmul_arrays(self.qbar, spec)
        scale = np.where(self.kernel_mask, 1.0, self.norm2)
        prod = np.where(self.kernel_mask, 0.0, (-1j) * prod / scale)
        return np.fft.ifftn(prod, axes=axes).real


# -- Newton solver ----------------------------------------------------------------
@dataclass
class SolveResult:
    field: PeriodicField
    converged: bool
    iterations: int
    residual: float
    trace: list = field(default_factory=list)
    message: str = ""

    def trace_csv(self) -> str:
        lines = ["iteration,residual,step"]
        for it, res, lam in self.trace:
            lines.append(f"{it},{res:.6e},{lam:g}")
        return "\n".join(lines) + "\n"


def solve_graph(
    kind: str = "assoc",
    grid: int = 16,
    eps: float = 1e-2,
    seed: int = 0,
    tol: float = 1e-8,
    max_iter: int = 25,
    initial: Optional[PeriodicField] = None,
    kmax: int = 2,
) -> SolveResult:
    """Damped Newton with Fourier-preconditioned Krylov steps for graph maps.

    The initial guess is eps times a seeded band-limited field unless given.
    The Dirac kernel (constants and per-axis Nyquist modes) is frozen at
    the initial guess's content, fixing the translation gauge.  Divergence
    is reported through converged=False with the reason, never masked.
    """
    if kind not in ("assoc", "cayley"):
        raise ValueError("kind must be 'assoc' or 'cayley'")
    base_dim = 3 if kind == "assoc" else 4
    if initial is None:
        initial = band_limited_field(base_dim, grid, 4, kmax=kmax, seed=seed, scale=eps)
    else:
        grid = initial.grid
        if initial.base_dim != base_dim or initial.channels != 4:
            raise ValueError(f"{kind} needs 4 channels on a {base_dim}-torus")
    f = initial.data.copy()
    spacing = 1.0 / grid
    precond = _DiracPreconditioner(kind, grid)
    shape = f.shape
    size = f.size

    def residual_of(data):
        parts = _partials(data, spacing)
        return _dirac_grid(parts, kind) - _cross_grid(parts, kind)

    res = residual_of(f)
    res_sup = float(np.abs(res).max())
    trace = [(0, res_sup, 0.0)]
    if not np.isfinite(res_sup):
        return SolveResult(PeriodicField(f), False, 0, res_sup, trace, "initial residual is not finite")
    if res_sup <= tol:
        return SolveResult(PeriodicField(f), True, 0, res_sup, trace, "initial guess already below tolerance")

    for it in range(1, max_iter + 1):
        parts = _partials(f, spacing)

        def jac(vec):
            delta = vec.reshape(shape)
            dparts = _partials(delta, spacing)
            out = _dirac_grid(dparts, kind) - _cross_tangent_grid(parts, dparts, kind)
            return out.ravel()

        def prec(vec):
            return precond.apply(vec.reshape(shape)).ravel()

        op = LinearOperator((size, size), matvec=jac)
        M = LinearOperator((size, size), matvec=prec)
        step, info = lgmres(op, -res.ravel(), M=M, rtol=1e-3, atol=0.0, maxiter=50)
        if not np.all(np.isfinite(step)):
            return SolveResult(
                PeriodicField(f), False, it - 1, res_sup, trace, "Krylov step is not finite"
            )
        delta = step.reshape(shape)
        # keep the kernel gauge exactly: remove any kernel content of the step
        axes = tuple(range(1, base_dim + 1))
        spec = np.fft.fftn(delta, axes=axes)
        spec = np.where(precond.kernel_mask, 0.0, spec)
        delta = np.fft.ifftn(spec, axes=axes).real

        lam = 1.0
        accepted = False
        while lam >= 2.0**-16:
            cand = f + lam * delta
            cres = residual_of(cand)
            csup = float(np.abs(cres).max())
            if np.isfinite(csup) and (csup <= tol or csup < res_sup * (1.0 - 1e-4 * lam)):
                f, res, res_sup = cand, cres, csup
                trace.append((it, res_sup, lam))
                accepted = True
                break
            lam *= 0.5
        if not accepted:
            return SolveResult(
                PeriodicField(f),
                False,
                it - 1,
                res_sup,
                trace,
                f"diverged: no damped step reduced the residual below {res_sup:.3e}",
            )
        if res_sup <= tol:
            return SolveResult(
                PeriodicField(f), True, it, res_sup, trace, f"converged in {it} Newton steps"
            )
    return SolveResult(
        PeriodicField(f),
        False,
        max_iter,
        res_sup,
        trace,
        f"did not reach tolerance {tol:g} within {max_iter} iterations",
    )


def classify_solution_planes(field: PeriodicField, kind: str, tol: float = 1e-7) -> dict:
    """Classify the graph tangent plane at every grid point.

    Returns counts per class and the worst deviation of the calibration value
    from 1.  Uses the same stencil derivatives as the solver.
    """
    want = PlaneClass.ASSOCIATIVE if kind == "assoc" else PlaneClass.CAYLEY
    parts = _partials(field.data, field.spacing)
    stacked = np.stack(parts)  # (nbase, 4, *dims)
    nbase = stacked.shape[0]
    flat = stacked.reshape(nbase, 4, -1)
    counts: dict = {}
    worst = 0.0
    for p in range(flat.shape[2]):
        jet = pde.Jet1(
            kind,
            (0.0,) * nbase,
            (0.0,) * 4,
            tuple(tuple(flat[a, :, p]) for a in range(nbase)),
        )
        cls = classify_plane(pde.graph_plane(jet), tol=tol)
        counts[cls.kind.value] = counts.get(cls.kind.value, 0) + 1
        worst = max(worst, abs(cls.value - 1.0))
    return {"counts": counts, "worst_value_deviation": worst, "expected": want.value}


# -- coassociative deformation linearization ---------------------------------------
def _selfdual_forms_dim4():
    """The three self-dual 2-forms on R^4 matching the plane conventions."""
    return (
        dx(4, 1, 2) + dx(4, 3, 4),
        dx(4, 1, 3) + dx(4, 4, 2),
        dx(4, 1, 4) + dx(4, 2, 3),
    )


def _flat_coassoc_iso() -> np.ndarray:
    """Matrix taking normal components (e1,e2,e3) to self-dual components.

    Computed from phi0 directly; cross-checked against the plane-level
    isomorphism of caligeo.calibration up to the complement basis change.
    """
    ph = phi0()
    mat = np.zeros((3, 3))
    for m in range(3):
        beta = np.zeros((4, 4))
        for a in range(4):
            for b in range(4):
                vecs = [[0] * 7 for _ in range(3)]
                vecs[0][m] = 1
                vecs[1][3 + a] = 1
                vecs[2][3 + b] = 1
                beta[a, b] = float(evaluate(ph, vecs))
        basis = []
        for form in _selfdual_forms_dim4():
            w = np.zeros((4, 4))
            for (i, j), c in form.terms.items():
                w[i - 1, j - 1] = float(c)
                w[j - 1, i - 1] = -float(c)
            basis.append(w)
        for s in range(3):
            mat[s, m] = float(np.sum(beta * basis[s])) / 4.0
    plane = OrientedPlane.span(*(np.eye(7)[3 + a] for a in range(4)))
    ref = normal_selfdual_isomorphism(plane)
    comp = plane.complement()
    change = comp[:3, :]  # complement columns expressed in the e1,e2,e3 normals
    if np.abs(mat @ change - ref.matrix).max() > 1e-10:
        raise AssertionError("explicit normal-to-selfdual matrix disagrees with the plane routine")
    return mat


def _dbeta_coefficients():
    """coeffs[(s, d)] = exact terms of dx_d wedge omega_s as a 3-form on R^4."""
    out = {}
    for s, form in enumerate(_selfdual_forms_dim4()):
        for d in range(4):
            prod = wedge(dx(4, d + 1), form)
            out[(s, d)] = {tuple(i - 1 for i in k): float(c) for k, c in prod.terms.items()}
    return out


_TRIPLES = ((0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3))


def _phi_structure() -> list:
    """phi0 as (coefficient, zero-based index triple) pairs."""
    return [(float(c), tuple(i - 1 for i in k)) for k, c in phi0().terms.items()]


def _pullback_components(dv: np.ndarray) -> np.ndarray:
    """phi0 on the graph frame n_b = e_{3+b} + sum_m dv[b,m] e_m, per triple.

    dv has shape (4, 3, *grid); the result has shape (4, *grid), one channel
    per increasing triple of base directions.
    """
    gridshape = dv.shape[2:]
    frame = np.zeros((4, 7) + gridshape)
    for b in range(4):
        frame[b, 3 + b] = 1.0
        for m in range(3):
            frame[b, m] = dv[b, m]
    struct = _phi_structure()
    out = np.zeros((4,) + gridshape)
    for t, tri in enumerate(_TRIPLES):
        rows = [frame[r] for r in tri]
        for coeff, cols in struct:
            i, j, k = cols
            det = (
                rows[0][i] * (rows[1][j] * rows[2][k] - rows[1][k] * rows[2][j])
                - rows[0][j] * (rows[1][i] * rows[2][k] - rows[1][k] * rows[2][i])
                + rows[0][k] * (rows[1][i] * rows[2][j] - rows[1][j] * rows[2][i])
            )
            out[t] += coeff * det
    return out


@dataclass
class McLeanReport:
    grid: int
    eps: list
    rel_errors: list
    slopes: list
    constant_zero_sup: float
    additivity_rel: float
    iso_matrix: list
    worst: dict
    passed: bool
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "grid": self.grid,
            "eps": self.eps,
            "rel_errors": self.rel_errors,
            "slopes": self.slopes,
            "constant_zero_sup": self.constant_zero_sup,
            "additivity_rel": self.additivity_rel,
            "iso_matrix": self.iso_matrix,
            "worst": self.worst,
            "passed": self.passed,
            "message": self.message,
        }


def _dbeta_grid(beta: np.ndarray) -> np.ndarray:
    """Exterior derivative of sum_s beta_s omega_s, via exact wedge tables."""
    coeffs = _dbeta_coefficients()
    gridshape = beta.shape[1:]
    out = np.zeros((4,) + gridshape)
    lookup = {tri: t for t, tri in enumerate(_TRIPLES)}
    for s in range(3):
        for d in range(4):
            der = spectral_partial(beta[s], axis=d)
            for tri, c in coeffs[(s, d)].items():
                out[lookup[tri]] += c * der
    return out


def _linearization_error(beta: np.ndarray, iso_inv: np.ndarray, eps: float):
    """sup |P(eps beta)/eps - d beta| and the oracle's own sup norm."""
    v = np.einsum("ms,s...->m...", iso_inv, beta)
    dv = np.stack([np.stack([spectral_partial(v[m], axis=b) for m in range(3)]) for b in range(4)])
    pulled = _pullback_components(eps * dv)
    oracle = _dbeta_grid(beta)
    diff = np.abs(pulled / eps - oracle)
    return float(diff.max()), float(np.abs(oracle).max()), diff


def coassoc_deformation_linearization(
    grid: int = 12,
    eps_sequence: Sequence[float] = (1e-2, 1e-3, 1e-4),
    samples: int = 5,
    kmax: int = 2,
    seed: int = 0,
    rel_tol: float = 1e-3,
) -> McLeanReport:
    """First-order agreement of the coassociative deformation map with d beta.

    For each random band-limited self-dual field beta, the normal graph of
    eps * beta is pulled back through phi0 and compared against the exact
    exterior derivative route; the ratio P(eps beta)/eps must approach d beta
    at second order in eps.  A constant beta must give exactly zero pullback,
    and the linearization must be additive.
    """
    eps_list = sorted((float(e) for e in eps_sequence), reverse=True)
    if any(e <= 0 for e in eps_list):
        raise ValueError("eps values must be positive")
    iso = _flat_coassoc_iso()
    iso_inv = np.linalg.inv(iso)
    rel_errors = []
    slopes = []
    worst = {"rel_error": 0.0, "sample": None, "eps": None}
    betas = []
    for s in range(samples):
        fld = band_limited_field(4, grid, 3, kmax=kmax, seed=seed + s, scale=1.0)
        betas.append(fld.data)
    for s, beta in enumerate(betas):
        errs = []
        for e in eps_list:
            sup, oracle_sup, _ = _linearization_error(beta, iso_inv, e)
            rel = sup / oracle_sup if oracle_sup > 0 else math.inf
            errs.append(rel)
            if rel > worst["rel_error"]:
                worst = {"rel_error": rel, "sample": s, "eps": e}
        rel_errors.append(errs)
        pos = [(e, r) for e, r in zip(eps_list, errs) if r > 0]
        if len(pos) >= 2:
            slopes.append(
                float(np.polyfit(np.log([p[0] for p in pos]), np.log([p[1] for p in pos]), 1)[0])
            )
        else:
            slopes.append(float("nan"))
    # constant beta must pull back to exactly zero at finite eps
    const_beta = np.ones((3,) + (grid,) * 4) * np.array([0.3, -1.2, 0.7]).reshape(3, 1, 1, 1, 1)
    v = np.einsum("ms,s...->m...", iso_inv, const_beta)
    dv = np.stack([np.stack([spectral_partial(v[m], axis=b) for m in range(3)]) for b in range(4)])
    const_sup = float(np.abs(_pullback_components(1e-2 * dv)).max())
    # additivity of the linearization at the smallest eps
    e = eps_list[-1]
    b1, b2 = betas[0], betas[1 % len(betas)]
    v12 = np.einsum("ms,s...->m...", iso_inv, b1 + b2)

    def limit_of(beta_arr):
        v = np.einsum("ms,s...->m...", iso_inv, beta_arr)
        dv = np.stack(
            [np.stack([spectral_partial(v[m], axis=b) for m in range(3)]) for b in range(4)]
        )
        return _pullback_components(e * dv) / e

    lim_sum = limit_of(b1 + b2)
    lim_parts = limit_of(b1) + limit_of(b2)
    denom = max(float(np.abs(lim_sum).max()), 1e-30)
    additivity_rel = float(np.abs(lim_sum - lim_parts).max()) / denom
    final_rel = [errs[-1] for errs in rel_errors]
    passed = (
        all(r < rel_tol for r in final_rel)
        and const_sup == 0.0
        and additivity_rel < 100 * e * e
    )
    message = "" if passed else (
        f"worst relative error {worst['rel_error']:.3e} on sample {worst['sample']} "
        f"at eps {worst['eps']}"
    )
    return McLeanReport(
        grid=grid,
        eps=eps_list,
        rel_errors=rel_errors,
        slopes=slopes,
        constant_zero_sup=const_sup,
        additivity_rel=additivity_rel,
        iso_matrix=[[float(x) for x in row] for row in iso],
        worst=worst,
        passed=passed,
        message=message,
    )
