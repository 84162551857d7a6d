"""Weighted projective points over a cyclotomic field, exactly.

Covers the degree-12 hypersurface in CP^5_{1,1,1,1,4,4} with its semilinear
involution and three singular points, plus the order-8 subgroup of Spin(7)
acting freely on R^8 and its two complex-coordinate descriptions.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Optional, Sequence, Union

from caligeo.cyclotomic import (
    DEFAULT_CONDUCTOR,
    CyclotomicNumber,
    as_root_of_unity,
    root_of_unity_group,
    unit_generator,
    zeta,
)
from caligeo.forms import ExteriorForm, dx, perm_sign, wedge
from caligeo.orbifold import AffineIsometry, generate_group, linear_fixed_dim
from caligeo.report import Report

Coord = Union[int, Fraction, CyclotomicNumber]


class ConductorError(ValueError):
    """A required root of unity lies outside the configured field."""

    def __init__(self, message: str, needed: int):
        super().__init__(message)
        self.needed = needed


def _coerce(x: Coord, conductor: int) -> CyclotomicNumber:
    if isinstance(x, CyclotomicNumber):
        if x.conductor != conductor:
            raise ValueError(f"coordinate conductor {x.conductor} != {conductor}")
        return x
    return CyclotomicNumber.from_rational(Fraction(x), conductor)


@dataclass(frozen=True)
class WeightedPoint:
    """A point of CP^m_{a_0..a_m} given by homogeneous coordinates."""

    weights: tuple[int, ...]
    coords: tuple[CyclotomicNumber, ...]

    def __init__(
        self,
        weights: Sequence[int],
        coords: Sequence[Coord],
        conductor: int = DEFAULT_CONDUCTOR,
    ):
        w = tuple(int(a) for a in weights)
        if not w or any(a <= 0 for a in w):
            raise ValueError("weights must be positive integers")
        if gcd(*w) != 1:
            raise ValueError("weights must have greatest common divisor 1")
        if len(coords) != len(w):
            raise ValueError("coordinate count does not match weights")
        c = tuple(_coerce(x, conductor) for x in coords)
        if all(x.is_zero for x in c):
            raise ValueError("the zero vector does not define a projective point")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "coords", c)

    @property
    def conductor(self) -> int:
        return self.coords[0].conductor

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.coords) if not x.is_zero)

    def scaled(self, u: CyclotomicNumber) -> "WeightedPoint":
        if u.is_zero:
            raise ValueError("scaling by zero")
        return WeightedPoint(
            self.weights,
            [u ** a * x for a, x in zip(self.weights, self.coords)],
            self.conductor,
        )

    def __repr__(self) -> str:
        inner = ", ".join(str(x) for x in self.coords)
        return f"[{inner}]_{{{','.join(map(str, self.weights))}}}"


def _integer_nth_root(k: int, n: int) -> Optional[int]:
    if k < 0:
        return None
    if k in (0, 1):
        return k
    r = round(k ** (1.0 / n))
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand**n == k:
            return cand
    return None


def _rational_nth_root(x: Fraction, n: int) -> Optional[Fraction]:
    if x < 0:
        if n % 2 == 0:
            return None
        r = _rational_nth_root(-x, n)
        return -r if r is not None else None
    num = _integer_nth_root(x.numerator, n)
    den = _integer_nth_root(x.denominator, n)
    if num is None or den is None:
        return None
    return Fraction(num, den)


def scaling_candidates(ratio: CyclotomicNumber, a: int) -> list[CyclotomicNumber]:
    """All u in the field with u^a = ratio, for ratio = (rational) * (root of unity).

    Raises ConductorError naming a sufficient conductor when the complex
    solutions exist only in a larger cyclotomic field, and ValueError when
    the ratio is outside the supported rational-times-root-of-unity shape.
    """
    n = ratio.conductor
    if ratio.is_zero:
        raise ValueError("scaling ratio must be nonzero")
    if a == 1:
        return [ratio]
    k = root_of_unity_group(n)
    norm = ratio * ratio.conjugate()
    if not norm.is_rational:
        raise ValueError(f"ratio {ratio} has irrational modulus; cannot enumerate roots")
    rho = _rational_nth_root(norm.as_rational(), 2)
    if rho is None:
        raise ValueError(
            f"ratio {ratio} has modulus sqrt({norm.as_rational()}), not rational; "
            "cannot enumerate roots"
        )
    phase = ratio / rho
    t = as_root_of_unity(phase)
    if t is None:
        raise ValueError(f"ratio {ratio} is not a rational multiple of a root of unity")
    radical = _rational_nth_root(rho, a)
    if radical is None:
        raise ValueError(f"modulus {rho} admits no rational {a}-th root")
    g = gcd(a, k)
    if t % g != 0:
        # complex roots have phases of order (a*k)/gcd only
        orders = [(a * k) // gcd(a * k, t + k * j) for j in range(a)]
        raise ConductorError(
            f"solving u^{a} = {ratio} needs a root of unity of order "
            f"{min(orders)}; conductor {n} only contains orders dividing {k}",
            needed=lcm(n, min(orders)),
        )
    gen = unit_generator(n)
    # one solution of a*s = t (mod k), then step by k/g
    s0 = (t // g) * pow(a // g, -1, k // g) % (k // g)
    return [radical * gen ** ((s0 + j * (k // g)) % k) for j in range(g)]


def wps_equal(p: WeightedPoint, q: WeightedPoint) -> bool:
    """Whether some u in C* carries p to q under the weighted action.

    The candidates solve u^a = ratio at the first nonzero slot and every
    candidate is checked against all slots.
    """
    if p.weights != q.weights:
        raise ValueError("points live in different weighted projective spaces")
    if p.conductor != q.conductor:
        raise ValueError("points use different conductors")
    sup = p.support()
    if sup != q.support():
        return False
    j = sup[0]
    ratio = q.coords[j] / p.coords[j]
    for u in scaling_candidates(ratio, p.weights[j]):
        if all(u ** p.weights[i] * p.coords[i] == q.coords[i] for i in sup):
            return True
    return False


# -- the degree-12 hypersurface example -------------------------------------------
Y_WEIGHTS = (1, 1, 1, 1, 4, 4)
Y_DEGREE = 12
Y_EXPONENTS = (12, 12, 12, 12, 3, 3)


@dataclass(frozen=True)
class SemilinearMap:
    """z_i -> coeff_i * z_{perm_i}, with one global conjugation flag.

    Closed under composition, so involution identities can be checked on
    the coordinate maps themselves rather than on sampled points.
    """

    coeffs: tuple[CyclotomicNumber, ...]
    perm: tuple[int, ...]
    conj: bool

    def __matmul__(self, other: "SemilinearMap") -> "SemilinearMap":
        coeffs = []
        for i in range(len(self.coeffs)):
            c_other = other.coeffs[self.perm[i]]
            if self.conj:
                c_other = c_other.conjugate()
            coeffs.append(self.coeffs[i] * c_other)
        perm = tuple(other.perm[self.perm[i]] for i in range(len(self.perm)))
        return SemilinearMap(tuple(coeffs), perm, self.conj ^ other.conj)

    def apply(self, point: WeightedPoint) -> WeightedPoint:
        coords = []
        for i in range(len(self.coeffs)):
            z = point.coords[self.perm[i]]
            if self.conj:
                z = z.conjugate()
            coords.append(self.coeffs[i] * z)
        return WeightedPoint(point.weights, coords, point.conductor)


def sigma_map(conductor: int = DEFAULT_CONDUCTOR) -> SemilinearMap:
    """[z0..z5] -> [conj z1, -conj z0, conj z3, -conj z2, conj z5, conj z4]."""
    one = CyclotomicNumber.one(conductor)
    return SemilinearMap(
        coeffs=(one, -one, one, -one, one, one),
        perm=(1, 0, 3, 2, 5, 4),
        conj=True,
    )


def weight_scaling_map(u: CyclotomicNumber, weights: Sequence[int]) -> SemilinearMap:
    return SemilinearMap(
        coeffs=tuple(u ** a for a in weights),
        perm=tuple(range(len(weights))),
        conj=False,
    )


def defining_polynomial_after(map_: SemilinearMap) -> tuple[dict, bool]:
    """The composite f(map(z)) for f = sum z_i^{e_i}, as (monomial dict, conj flag)."""
    terms: dict[tuple[int, ...], CyclotomicNumber] = {}
    m = len(Y_EXPONENTS)
    for i, e in enumerate(Y_EXPONENTS):
        mono = [0] * m
        mono[map_.perm[i]] = e
        coeff = map_.coeffs[i] ** e
        key = tuple(mono)
        terms[key] = terms.get(key, CyclotomicNumber.zero(coeff.conductor)) + coeff
    return {k: v for k, v in terms.items() if not v.is_zero}, map_.conj


def on_hypersurface(point: WeightedPoint) -> bool:
    total = CyclotomicNumber.zero(point.conductor)
    for x, e in zip(point.coords, Y_EXPONENTS):
        total = total + x**e
    return total.is_zero


def singular_points(conductor: int = DEFAULT_CONDUCTOR) -> list[WeightedPoint]:
    """The three listed singular points of the hypersurface."""
    e = zeta(conductor, conductor // 6)
    return [
        WeightedPoint(Y_WEIGHTS, [0, 0, 0, 0, 1, -1], conductor),
        WeightedPoint(Y_WEIGHTS, [0, 0, 0, 0, 1, e], conductor),
        WeightedPoint(Y_WEIGHTS, [0, 0, 0, 0, 1, e.conjugate()], conductor),
    ]


def canonical_degree(degree: int, weights: Sequence[int]) -> int:
    """Degree of the canonical bundle of a degree-d hypersurface: d - sum(weights)."""
    return degree - sum(weights)


def verify_example_Y(conductor: int = DEFAULT_CONDUCTOR) -> Report:
    """Named exact checks for the hypersurface, its involution and singular points."""
    if conductor % 24:
        raise ValueError(
            f"conductor {conductor} must be a multiple of 24: the checks use "
            "4th, 6th and 24th roots of unity"
        )
    rep = Report(command="wps check-example")
    sigma = sigma_map(conductor)
    one = CyclotomicNumber.one(conductor)
    minus_one = -one

    # (1) sigma^2 equals the weighted scaling by u = -1, as maps on C^6
    sq = sigma @ sigma
    expected = weight_scaling_map(minus_one, Y_WEIGHTS)
    rep.add(
        "sigma-squared-is-weighted-scaling",
        sq == expected,
        "sigma^2 multiplies coordinates by (-1)^weight, the action of u=-1",
        "coefficients (-1,-1,-1,-1,1,1), identity slot map, no conjugation",
        f"coeffs={tuple(str(c) for c in sq.coeffs)}, perm={sq.perm}, conj={sq.conj}",
    )

    # (2) f(sigma(z)) = conj(f(z)): the hypersurface is preserved
    moved, conj_flag = defining_polynomial_after(sigma)
    plain = {
        tuple(e if j == i else 0 for j in range(6)): one
        for i, e in enumerate(Y_EXPONENTS)
    }
    rep.add(
        "sigma-preserves-hypersurface",
        conj_flag is True and moved == plain,
        "substituting sigma into the defining polynomial returns its conjugate",
        "the defining polynomial with conjugated variables",
        f"conj={conj_flag}, {len(moved)} monomials, coefficients match: {moved == plain}",
    )

    # (3) locus z0=..=z3=0 on the hypersurface: exactly the three listed points
    k = root_of_unity_group(conductor)
    gen = unit_generator(conductor)
    locus = []
    for t in range(k):
        c = gen**t
        if c**3 == minus_one:
            locus.append(WeightedPoint(Y_WEIGHTS, [0, 0, 0, 0, 1, c], conductor))
    listed = singular_points(conductor)
    distinct = all(
        not wps_equal(a, b) for i, a in enumerate(locus) for b in locus[i + 1:]
    )
    matched = (
        len(locus) == 3
        and distinct
        and all(any(wps_equal(x, p) for x in locus) for p in listed)
        and all(on_hypersurface(x) for x in locus)
    )
    rep.add(
        "singular-locus-three-points",
        matched,
        "z0=..=z3=0 cuts the surface in exactly the three listed points",
        "3 distinct points [0,0,0,0,1,c] with c^3 = -1, all on the surface",
        f"{len(locus)} points, distinct={distinct}, all listed matched={matched}",
    )

    # (4) sigma fixes each singular point
    fixed = all(wps_equal(sigma.apply(p), p) for p in listed)
    rep.add(
        "sigma-fixes-singular-points",
        fixed,
        "sigma fixes each of the three singular points",
        "sigma(p) ~ p for all three",
        str(fixed),
    )

    # (5) canonical degree and arithmetic controls
    rep.add(
        "canonical-degree-zero",
        canonical_degree(Y_DEGREE, Y_WEIGHTS) == 0,
        "degree 12 minus total weight 12 vanishes (trivial canonical bundle)",
        "0",
        str(canonical_degree(Y_DEGREE, Y_WEIGHTS)),
    )
    controls = (
        canonical_degree(5, (1, 1, 1, 1, 1)),
        canonical_degree(6, (1, 1, 1, 1)),
    )
    rep.add(
        "canonical-degree-controls",
        controls == (0, 2),
        "control values: quintic threefold gives 0, degree-6 in P^3 gives 2",
        "(0, 2)",
        str(controls),
    )

    # (6) stabilizer at each singular point: order 4, generated by i, acting
    # as the scalar i on the four transverse weight-1 coordinates
    i_unit = zeta(conductor, conductor // 4)
    ok_model = True
    for p in listed:
        stab = {gen**t for t in range(k) if p.scaled(gen**t).coords == p.coords}
        if stab != {i_unit**j for j in range(4)}:
            ok_model = False
    transverse = tuple(Y_WEIGHTS[i] for i in range(6) if i not in listed[0].support())
    ok_model = ok_model and transverse == (1, 1, 1, 1)
    rep.add(
        "local-model-c4-mod-i",
        ok_model,
        "each singular point has stabilizer <i> acting as the scalar i on C^4",
        "stabilizer {1, i, -1, -i}, transverse weights (1,1,1,1)",
        f"stabilizers match: {ok_model}, transverse weights {transverse}",
    )

    # (7) spot check of the fixed-point condition: a generic surface point is
    # moved by sigma.  Equality of the full fixed set with the singular locus
    # is beyond these exact point checks and is not claimed here.
    w = zeta(conductor, conductor // 24)
    sample = WeightedPoint(Y_WEIGHTS, [1, w, 0, 0, 0, 0], conductor)
    moved_sample = not wps_equal(sigma.apply(sample), sample)
    rep.add(
        "sigma-moves-generic-point",
        on_hypersurface(sample) and moved_sample,
        "a sample non-singular surface point is not fixed (spot check only)",
        "on surface and moved",
        f"on_surface={on_hypersurface(sample)}, moved={moved_sample}",
    )
    return rep


# -- the order-8 Spin(7) group and its two complex descriptions -------------------
def spin7_generators() -> tuple[AffineIsometry, AffineIsometry]:
    """alpha: x -> (-x2,x1,-x4,x3,-x6,x5,-x8,x7); beta: x -> (x3,-x4,-x1,x2,x7,-x8,-x5,x6)."""

    def rows(images: Sequence[tuple[int, int]]) -> list[list[int]]:
        n = len(images)
        A = [[0] * n for _ in range(n)]
        for i, (j, s) in enumerate(images):
            A[i][j - 1] = s
        return A

    alpha = AffineIsometry(
        rows([(2, -1), (1, 1), (4, -1), (3, 1), (6, -1), (5, 1), (8, -1), (7, 1)])
    )
    beta = AffineIsometry(
        rows([(3, 1), (4, -1), (1, -1), (2, 1), (7, 1), (8, -1), (5, -1), (6, 1)])
    )
    return alpha, beta


def _basis_covector(i: int, sign: int = 1) -> tuple[int, ...]:
    v = [0] * 8
    v[i] = sign
    return tuple(v)


# complex frames: (u_j, v_j) real covectors with z_j = <u_j, x> + i <v_j, x>
_Z_FRAME = tuple(
    (_basis_covector(2 * j), _basis_covector(2 * j + 1)) for j in range(4)
)
_W_FRAME = (
    (_basis_covector(0, -1), _basis_covector(2)),
    (_basis_covector(1), _basis_covector(3)),
    (_basis_covector(4, -1), _basis_covector(6)),
    (_basis_covector(5), _basis_covector(7)),
)


def complex_parts(
    matrix: Sequence[Sequence[int]],
    frame: Sequence[tuple[Sequence[int], Sequence[int]]],
    conductor: int = DEFAULT_CONDUCTOR,
) -> tuple[list[list[CyclotomicNumber]], list[list[CyclotomicNumber]]]:
    """Split a real matrix as z(Ax) = P z(x) + Q conj(z(x)) in the given frame.

    P is the complex-linear block and Q the antilinear one; a holomorphic map
    has Q = 0, an antiholomorphic one has P = 0.  Requires an orthonormal
    frame, which the callers check separately.
    """
    i_unit = zeta(conductor, conductor // 4)
    half = Fraction(1, 2)
    m = len(frame)
    n = len(matrix)

    def pair(row: Sequence[int], col: Sequence[int]) -> Fraction:
        # row . (A col): new coordinate of the pushed vector
        return Fraction(
            sum(row[a] * matrix[a][b] * col[b] for a in range(n) for b in range(n))
        )

    P: list[list[CyclotomicNumber]] = []
    Q: list[list[CyclotomicNumber]] = []
    for j in range(m):
        uj, vj = frame[j]
        prow, qrow = [], []
        for kk in range(m):
            uk, vk = frame[kk]
            uu, vv = pair(uj, uk), pair(vj, vk)
            vu, uv = pair(vj, uk), pair(uj, vk)
            prow.append(half * (uu + vv) + i_unit * (half * (vu - uv)))
            qrow.append(half * (uu - vv) + i_unit * (half * (vu + uv)))
        P.append(prow)
        Q.append(qrow)
    return P, Q


def _cmat_det(M: Sequence[Sequence[CyclotomicNumber]]) -> CyclotomicNumber:
    from itertools import permutations

    m = len(M)
    total = CyclotomicNumber.zero(M[0][0].conductor)
    for p in permutations(range(m)):
        prod = CyclotomicNumber.one(M[0][0].conductor)
        for r in range(m):
            prod = prod * M[r][p[r]]
        total = total + perm_sign(p) * prod
    return total


def _is_zero_block(M: Sequence[Sequence[CyclotomicNumber]]) -> bool:
    return all(x.is_zero for row in M for x in row)


def _covector_form(cov: Sequence[int]) -> ExteriorForm:
    out = None
    for i, c in enumerate(cov):
        if c == 0:
            continue
        term = c * dx(8, i + 1)
        out = term if out is None else out + term
    if out is None:
        raise ValueError("zero covector")
    return out


def spin7_group_checks(conductor: int = DEFAULT_CONDUCTOR) -> Report:
    """Named checks for the order-8 group and its two coordinate descriptions."""
    from caligeo.orbifold import preserves_form
    from caligeo.structures import spin7_omega0, unitary_frame_forms

    rep = Report(command="wps check-example")
    alpha, beta = spin7_generators()
    omega0 = spin7_omega0()

    signs = (preserves_form(alpha, omega0), preserves_form(beta, omega0))
    rep.add(
        "generators-preserve-omega",
        signs == (1, 1),
        "alpha and beta pull the four-form back to itself",
        "(1, 1)",
        str(signs),
    )

    G = generate_group({"alpha": alpha, "beta": beta})
    rep.add(
        "group-order-8-nonabelian",
        G.order == 8 and not G.abelian,
        "the generated group has order 8 and is nonabelian",
        "order 8, nonabelian",
        f"order {G.order}, abelian={G.abelian}",
    )

    ident = AffineIsometry.identity(8)
    rels = (
        alpha @ alpha @ alpha @ alpha == ident
        and beta @ beta @ beta @ beta == ident
        and alpha @ alpha == beta @ beta
        and alpha @ beta == beta @ alpha @ alpha @ alpha
    )
    rep.add(
        "group-relations",
        rels,
        "alpha^4 = beta^4 = 1, alpha^2 = beta^2, alpha*beta = beta*alpha^3",
        "all four relations hold",
        str(rels),
    )

    free = all(linear_fixed_dim(g) == 0 for g in G.elements if not g.is_identity())
    rep.add(
        "free-action-off-origin",
        free,
        "no nonidentity element fixes a nonzero vector of R^8",
        "ker(g - 1) = 0 for all 7 nonidentity elements",
        str(free),
    )

    i_unit = zeta(conductor, conductor // 4)
    zero = CyclotomicNumber.zero(conductor)
    one = CyclotomicNumber.one(conductor)
    swap_pattern = [
        [zero, one, zero, zero],
        [-one, zero, zero, zero],
        [zero, zero, zero, one],
        [zero, zero, -one, zero],
    ]
    diag_i = [[i_unit if a == b else zero for b in range(4)] for a in range(4)]

    for frame, frame_name, linear_gen, anti_gen in (
        (_Z_FRAME, "z", alpha, beta),
        (_W_FRAME, "w", beta, alpha),
    ):
        P, Q = complex_parts(linear_gen.matrix, frame, conductor)
        det = _cmat_det(P)
        rep.add(
            f"multiplication-by-i-in-{frame_name}-frame",
            _is_zero_block(Q) and P == diag_i and det == one,
            f"one generator acts as i times the identity, determinant 1, "
            f"in the {frame_name} coordinates",
            "P = i*I, Q = 0, det P = 1",
            f"Q zero: {_is_zero_block(Q)}, P diagonal i: {P == diag_i}, det P = {det}",
        )
        P2, Q2 = complex_parts(anti_gen.matrix, frame, conductor)
        rep.add(
            f"antiholomorphic-swap-in-{frame_name}-frame",
            _is_zero_block(P2) and Q2 == swap_pattern,
            f"the other generator is antiholomorphic of shape "
            f"(conj z2, -conj z1, conj z4, -conj z3) in the {frame_name} coordinates",
            "P = 0, Q = the stated swap pattern",
            f"P zero: {_is_zero_block(P2)}, Q matches: {Q2 == swap_pattern}",
        )

    # both frames are orthonormal and rebuild the same four-form
    for frame, frame_name in ((_Z_FRAME, "z"), (_W_FRAME, "w")):
        covs = [c for pair_ in frame for c in pair_]
        ortho = all(
            sum(a * b for a, b in zip(covs[i], covs[j])) == (1 if i == j else 0)
            for i in range(8)
            for j in range(8)
        )
        pairs = [(_covector_form(u), _covector_form(v)) for u, v in frame]
        om, re_t, _ = unitary_frame_forms(pairs)
        rebuilt = Fraction(1, 2) * wedge(om, om) + re_t
        rep.add(
            f"four-form-matches-{frame_name}-frame",
            ortho and rebuilt == omega0,
            f"the {frame_name} coordinates are orthonormal and "
            "half omega^2 + Re theta rebuilds the four-form",
            "orthonormal frame, forms equal",
            f"orthonormal={ortho}, equal={rebuilt == omega0}",
        )
    return rep


def check_example(conductor: int = DEFAULT_CONDUCTOR) -> Report:
    """Both example reports merged: the hypersurface and the group coordinates."""
    rep = verify_example_Y(conductor)
    rep.merge(spin7_group_checks(conductor))
    return rep
