"""Finite groups of affine isometries of T^n = R^n/Z^n, exactly.

Group elements are pairs (A, t) with A an integer orthogonal matrix (hence a
signed permutation) and t a rational translation mod Z^n.  Fixed-point sets
are affine subtori computed from the Smith normal form of A - I; components
are compared, intersected, and grouped into orbits in exact arithmetic.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations, product
from math import gcd
from typing import Mapping, Optional, Sequence, Union

from caligeo import _ratlinalg
from caligeo.forms import ExteriorForm, LinearEndo, pullback

Rational = Union[int, str, Fraction]
Point = tuple[Fraction, ...]

OTHER = 0


def _frac_mod1(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


class AffineIsometry:
    """Affine map x -> A x + t of the torus, A integer orthogonal, t mod Z^n."""

    __slots__ = ("n", "matrix", "translation")

    def __init__(
        self,
        matrix: Sequence[Sequence[int]],
        translation: Optional[Sequence[Rational]] = None,
    ):
        A = [tuple(int(x) for x in row) for row in matrix]
        n = len(A)
        if n == 0 or any(len(r) != n for r in A):
            raise ValueError("matrix must be square")
        for i in range(n):
            for j in range(n):
                dot = sum(A[k][i] * A[k][j] for k in range(n))
                if dot != (1 if i == j else 0):
                    raise ValueError(
                        "matrix is not integer orthogonal (signed permutation); "
                        f"columns {i+1}, {j+1} fail"
                    )
        t = [Fraction(x) for x in (translation or [0] * n)]
        if len(t) != n:
            raise ValueError("translation length does not match matrix size")
        self.n = n
        self.matrix = tuple(A)
        self.translation = tuple(_frac_mod1(x) for x in t)

    @classmethod
    def identity(cls, n: int) -> "AffineIsometry":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def is_identity(self) -> bool:
        return self == AffineIsometry.identity(self.n)

    def __matmul__(self, other: "AffineIsometry") -> "AffineIsometry":
        """Composition: (self @ other)(x) = self(other(x))."""
        if self.n != other.n:
            raise ValueError("dimension mismatch")
        n = self.n
        A = [
            [sum(self.matrix[i][k] * other.matrix[k][j] for k in range(n)) for j in range(n)]
            for i in range(n)
        ]
        t = [
            sum((Fraction(self.matrix[i][k]) * other.translation[k] for k in range(n)),
                self.translation[i])
            for i in range(n)
        ]
        return AffineIsometry(A, t)

    def inverse(self) -> "AffineIsometry":
        n = self.n
        At = [[self.matrix[j][i] for j in range(n)] for i in range(n)]
        t = [-sum(Fraction(At[i][k]) * self.translation[k] for k in range(n)) for i in range(n)]
        return AffineIsometry(At, t)

    def apply(self, point: Sequence[Rational]) -> Point:
        x = [Fraction(v) for v in point]
        return tuple(
            _frac_mod1(
                sum((Fraction(self.matrix[i][k]) * x[k] for k in range(self.n)),
                    self.translation[i])
            )
            for i in range(self.n)
        )

    def linear_endo(self) -> LinearEndo:
        return LinearEndo([[Fraction(v) for v in row] for row in self.matrix])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AffineIsometry):
            return NotImplemented
        return self.matrix == other.matrix and self.translation == other.translation

    def __hash__(self) -> int:
        return hash((self.matrix, self.translation))

    def __repr__(self) -> str:
        return f"AffineIsometry(n={self.n}, t={tuple(map(str, self.translation))})"


def _eigenvalue_angles(matrix: Sequence[Sequence[int]]) -> list[Fraction]:
    """Eigenvalues of a signed permutation matrix as angles a with ev = e^{2 pi i a}.

    Signed cycles of length L contribute the L-th roots of the cycle's sign
    product, so everything is an exact root of unity.
    """
    n = len(matrix)
    seen = [False] * n
    angles: list[Fraction] = []
    for j0 in range(n):
        if seen[j0]:
            continue
        length, sign, j = 0, 1, j0
        while not seen[j]:
            seen[j] = True
            i = next(i for i in range(n) if matrix[i][j] != 0)
            sign *= matrix[i][j]
            length += 1
            j = i
        if sign == 1:
            angles.extend(Fraction(k, length) for k in range(length))
        else:
            angles.extend(Fraction(2 * k + 1, 2 * length) for k in range(length))
    return angles


def _angle_label(a: Fraction) -> str:
    a = _frac_mod1(a)
    if a == 0:
        return "1"
    if a == Fraction(1, 2):
        return "-1"
    if a == Fraction(1, 4):
        return "i"
    if a == Fraction(3, 4):
        return "-i"
    return f"e({a.numerator}/{a.denominator})"


def eigenvalue_pattern(g: AffineIsometry, drop_ones: int = 0) -> tuple[str, ...]:
    """Sorted eigenvalue labels of the linear part, minus ``drop_ones`` ones."""
    labels = sorted(_angle_label(a) for a in _eigenvalue_angles(g.matrix))
    for _ in range(drop_ones):
        labels.remove("1")
    return tuple(labels)


def local_model_label(pattern: tuple[str, ...]) -> str:
    if pattern and len(pattern) % 2 == 0 and all(p == "-1" for p in pattern):
        return f"C^{len(pattern)//2}/{{+-1}}"
    return ""


# -- groups -------------------------------------------------------------------
@dataclass
class GroupTable:
    elements: list[AffineIsometry]
    words: dict[AffineIsometry, tuple[str, ...]]
    generators: dict[str, AffineIsometry]
    abelian: bool

    @property
    def order(self) -> int:
        return len(self.elements)

    def word_of(self, g: AffineIsometry) -> str:
        w = self.words[g]
        return "*".join(w) if w else "1"

    def element_by_word(self, word: str) -> AffineIsometry:
        """Compose named generators left to right; '1' is the identity."""
        word = word.strip()
        n = next(iter(self.generators.values())).n if self.generators else 1
        if word in ("", "1", "id"):
            return AffineIsometry.identity(n)
        g = AffineIsometry.identity(n)
        for name in word.replace(" ", "*").split("*"):
            if not name:
                continue
            if name not in self.generators:
                raise KeyError(f"unknown generator {name!r}")
            g = g @ self.generators[name]
        return g

    def element_order(self, g: AffineIsometry) -> int:
        h, k = g, 1
        ident = AffineIsometry.identity(g.n)
        while h != ident:
            h = h @ g
            k += 1
            if k > self.order:
                raise RuntimeError("element order exceeds group order")
        return k


def generate_group(gens: Mapping[str, AffineIsometry], max_order: int = 512) -> GroupTable:
    """Closure of the generators under composition, with shortest words."""
    if not gens:
        raise ValueError("need at least one generator")
    n = next(iter(gens.values())).n
    if any(g.n != n for g in gens.values()):
        raise ValueError("generators have mixed dimensions")
    ident = AffineIsometry.identity(n)
    words: dict[AffineIsometry, tuple[str, ...]] = {ident: ()}
    queue = [ident]
    while queue:
        nxt = []
        for g in queue:
            for name, h in gens.items():
                gh = g @ h
                if gh not in words:
                    if len(words) >= max_order:
                        raise RuntimeError(f"closure not reached within {max_order} elements")
                    words[gh] = words[g] + (name,)
                    nxt.append(gh)
        queue = nxt
    elements = sorted(words, key=lambda g: (len(words[g]), words[g]))
    abelian = all(a @ b == b @ a for a, b in combinations(elements, 2))
    return GroupTable(elements=elements, words=words, generators=dict(gens), abelian=abelian)


def preserves_form(g: AffineIsometry, form: ExteriorForm) -> int:
    """+1 if the linear part pulls the form back to itself, -1 if to its
    negative, OTHER (0) otherwise.  Translations act trivially on constant
    forms."""
    if g.n != form.ambient_dim:
        raise ValueError("dimension mismatch")
    pb = pullback(form, g.linear_endo())
    if pb == form:
        return 1
    if pb == -form:
        return -1
    return OTHER


# -- fixed sets ----------------------------------------------------------------
@dataclass(frozen=True)
class TorusComponent:
    dimension: int
    representative: Point
    directions: tuple[tuple[int, ...], ...]
    normal_eigenvalues: tuple[str, ...]

    def __repr__(self) -> str:
        rep = "(" + ", ".join(str(x) for x in self.representative) + ")"
        return f"TorusComponent(dim={self.dimension}, rep={rep})"


@dataclass(frozen=True)
class _FixedSetLocator:
    """Inverted Smith data of one fixed set: maps points to component indices.

    In coordinates y = V^-1 x the fixed-point equation reads s_i y_i = c_i
    mod 1 per axis, so the torsion pattern k_i = s_i y_i - c_i mod s_i
    identifies the component a point belongs to without any searching.
    """

    v_inv: tuple[tuple[int, ...], ...]
    sdiag: tuple[int, ...]
    c: tuple[Fraction, ...]
    torsion_axes: tuple[int, ...]
    index: Mapping[tuple[int, ...], int]

    def locate(self, point: Sequence[Fraction]) -> Optional[int]:
        n = len(self.sdiag)
        key = []
        for i in self.torsion_axes:
            y = sum((Fraction(self.v_inv[i][j]) * point[j] for j in range(n)), Fraction(0))
            q = y * self.sdiag[i] - self.c[i]
            if q.denominator != 1:
                return None
            key.append(q.numerator % self.sdiag[i])
        return self.index.get(tuple(key))


@dataclass
class FixedSet:
    element: AffineIsometry
    components: list[TorusComponent]
    locator: Optional[_FixedSetLocator] = field(default=None, repr=False, compare=False)

    @property
    def empty(self) -> bool:
        return not self.components

    @property
    def count(self) -> int:
        return len(self.components)

    def dimensions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for c in self.components:
            out[c.dimension] = out.get(c.dimension, 0) + 1
        return out


def _unimodular_inverse(V: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    n = len(V)
    aug = [
        [Fraction(V[i][j]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    _ratlinalg.rref(aug)
    return tuple(tuple(int(aug[i][n + j]) for j in range(n)) for i in range(n))


def fixed_set(g: AffineIsometry) -> FixedSet:
    """All solutions of g(x) = x on the torus, as affine subtori.

    Solves (A - I) x = -t mod Z^n through the Smith normal form
    U (A - I) V = S: in coordinates x = V y the equation splits per axis,
    giving product-of-divisors many components of dimension = number of
    zero divisors.
    """
    n = g.n
    M = [[g.matrix[i][j] - (1 if i == j else 0) for j in range(n)] for i in range(n)]
    U, S, V = _ratlinalg.smith_normal_form(M)
    c = [
        sum((Fraction(U[i][k]) * -g.translation[k] for k in range(n)), Fraction(0))
        for i in range(n)
    ]
    free_axes = [i for i in range(n) if S[i][i] == 0]
    for i in free_axes:
        if c[i].denominator != 1:
            return FixedSet(element=g, components=[])
    dim = len(free_axes)
    directions = tuple(tuple(V[r][i] for r in range(n)) for i in free_axes)
    normal = eigenvalue_pattern(g, drop_ones=dim)
    torsion_axes = tuple(i for i in range(n) if S[i][i] != 0)

    comps: list[TorusComponent] = []
    index: dict[tuple[int, ...], int] = {}
    for key in product(*(range(S[i][i]) for i in torsion_axes)):
        y = [Fraction(0)] * n
        for i, k in zip(torsion_axes, key):
            y[i] = Fraction(c[i] + k, S[i][i])
        rep = tuple(
            _frac_mod1(sum((Fraction(V[r][k]) * y[k] for k in range(n)), Fraction(0)))
            for r in range(n)
        )
        index[key] = len(comps)
        comps.append(
            TorusComponent(
                dimension=dim,
                representative=rep,
                directions=directions,
                normal_eigenvalues=normal,
            )
        )
    locator = _FixedSetLocator(
        v_inv=_unimodular_inverse(V),
        sdiag=tuple(S[i][i] for i in range(n)),
        c=tuple(c),
        torsion_axes=torsion_axes,
        index=index,
    )
    return FixedSet(element=g, components=comps, locator=locator)


def linear_fixed_dim(g: AffineIsometry) -> int:
    """dim ker(A - I) over Q: the fixed subspace of the linear part on R^n."""
    n = g.n
    M = [
        [Fraction(g.matrix[i][j] - (1 if i == j else 0)) for j in range(n)]
        for i in range(n)
    ]
    return n - _ratlinalg.rank(M)


# -- exact membership and intersection tests -----------------------------------
@lru_cache(maxsize=None)
def _span_test_data(
    directions: tuple[tuple[int, ...], ...], n: int
) -> Optional[tuple[tuple[tuple[int, ...], ...], tuple[int, ...]]]:
    """Precomputed (U P, diag S) for testing membership in span + Z^n.

    P rows annihilate the span; U P V = S is the Smith normal form.  None
    means the span is all of R^n.
    """
    if directions:
        dir_rows = [[Fraction(x) for x in d] for d in directions]
        ann = _ratlinalg.nullspace(dir_rows)
    else:
        ann = [[Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
    if not ann:
        return None
    P: list[list[int]] = []
    for row in ann:
        den = 1
        for x in row:
            den = den * x.denominator // gcd(den, x.denominator)
        P.append([int(x * den) for x in row])
    U, S, _ = _ratlinalg.smith_normal_form(P)
    diag = tuple(S[i][i] if i < len(S[0]) else 0 for i in range(len(P)))
    r = len(P)
    UP = tuple(
        tuple(sum(U[i][k] * P[k][j] for k in range(r)) for j in range(n)) for i in range(r)
    )
    return (UP, diag)


def _span_plus_lattice_contains(
    directions: Sequence[Sequence[int]], diff: Sequence[Fraction]
) -> bool:
    """Is diff in span_R(directions) + Z^n?

    diff is in the subgroup iff its image under the span's annihilator P
    lies in the lattice P Z^n, decided by the Smith normal form of P.
    With d clearing the denominators of diff, the condition per row of
    U P is s = 0 when the diagonal entry vanishes, else d*diag | s.
    """
    n = len(diff)
    data = _span_test_data(tuple(tuple(int(x) for x in d) for d in directions), n)
    if data is None:
        return True
    UP, diag = data
    den = 1
    for x in diff:
        den = den * x.denominator // gcd(den, x.denominator)
    num = [int(x * den) for x in diff]
    for row, q in zip(UP, diag):
        s = sum(row[j] * num[j] for j in range(n))
        if q == 0:
            if s != 0:
                return False
        elif s % (den * q) != 0:
            return False
    return True


def _is_lattice_vector(diff: Sequence[Fraction]) -> bool:
    return all(x.denominator == 1 for x in diff)


def component_contains(comp: TorusComponent, point: Sequence[Fraction]) -> bool:
    diff = [Fraction(p) - r for p, r in zip(point, comp.representative)]
    if not comp.directions:
        return _is_lattice_vector(diff)
    return _span_plus_lattice_contains(comp.directions, diff)


@lru_cache(maxsize=None)
def _span_key(
    directions: tuple[tuple[int, ...], ...], n: int
) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical basis of the rational row space (reduced echelon rows)."""
    if not directions:
        return ()
    m = [[Fraction(x) for x in d] for d in directions]
    pivots = _ratlinalg.rref(m)
    return tuple(tuple(m[r]) for r in range(len(pivots)))


def components_equal(a: TorusComponent, b: TorusComponent) -> bool:
    if a.dimension != b.dimension:
        return False
    n = len(a.representative)
    if _span_key(a.directions, n) != _span_key(b.directions, n):
        return False
    return component_contains(b, a.representative)


def components_intersect(a: TorusComponent, b: TorusComponent) -> bool:
    """Exact test whether the two affine subtori share a point."""
    diff = [x - y for x, y in zip(b.representative, a.representative)]
    joint = a.directions + b.directions
    if not joint:
        return _is_lattice_vector(diff)
    return _span_plus_lattice_contains(joint, diff)


# -- singular sets and involution loci ------------------------------------------
@dataclass
class ComponentOrbit:
    dimension: int
    size: int
    members: list[tuple[str, TorusComponent]]
    local_model: dict[str, tuple[str, ...]]
    label: str


@dataclass
class SingularSet:
    orbits: list[ComponentOrbit]
    upstairs_count: int
    all_disjoint: bool
    intersections: list[tuple[str, str]]

    def quotient_dimensions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for orb in self.orbits:
            out[orb.dimension] = out.get(orb.dimension, 0) + 1
        return out


def _pointwise_stabilizer(
    G: GroupTable, comp: TorusComponent
) -> list[AffineIsometry]:
    out = []
    for h in G.elements:
        if h.is_identity():
            continue
        if h.apply(comp.representative) != comp.representative:
            continue
        n = h.n
        fixes_dirs = all(
            tuple(sum(h.matrix[i][k] * d[k] for k in range(n)) for i in range(n)) == tuple(d)
            for d in comp.directions
        )
        if fixes_dirs:
            out.append(h)
    return out


def _collect_components(
    branches: list[tuple[AffineIsometry, str, FixedSet]]
) -> tuple[
    list[tuple[AffineIsometry, str, TorusComponent]],
    dict[AffineIsometry, FixedSet],
    dict[tuple[AffineIsometry, int], int],
]:
    """Deduplicate fixed-set components across branches.

    Components within one fixed set are distinct by construction, so only
    cross-branch duplicates (elements with identical fixed loci) are merged.
    Returns the kept (element, word, component) list, the fixed sets by
    element, and the map from (element, position) to kept index.
    """
    tagged: list[tuple[AffineIsometry, str, TorusComponent]] = []
    sets: dict[AffineIsometry, FixedSet] = {}
    canon: dict[tuple[AffineIsometry, int], int] = {}
    for elem, word, fs in branches:
        sets[elem] = fs
        for pos, comp in enumerate(fs.components):
            hit = None
            for j, (other, _, kept) in enumerate(tagged):
                if other is not elem and components_equal(kept, comp):
                    hit = j
                    break
            if hit is None:
                hit = len(tagged)
                tagged.append((elem, word, comp))
            canon[(elem, pos)] = hit
    return tagged, sets, canon


def _orbit_partition(
    G: GroupTable,
    tagged: list[tuple[AffineIsometry, str, TorusComponent]],
    sets: dict[AffineIsometry, FixedSet],
    canon: dict[tuple[AffineIsometry, int], int],
) -> list[list[int]]:
    """Group tagged components into G-orbits.

    h carries a component of Fix(g) into a component of Fix(h g h^-1); the
    target is identified exactly by the torsion pattern of the moved
    representative in the target's Smith coordinates.
    """
    parent = list(range(len(tagged)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    def union(i: int, j: int) -> None:
        ri, rj = find(i), find(j)
        if ri != rj:
            parent[rj] = ri

    movers = [h for h in G.elements if not h.is_identity()]
    conj = {
        (g, h): h @ g @ h.inverse()
        for g in {t[0] for t in tagged}
        for h in movers
    }
    for i, (g, _, comp) in enumerate(tagged):
        for h in movers:
            target = sets.get(conj[(g, h)])
            if target is None or target.locator is None:
                continue
            pos = target.locator.locate(h.apply(comp.representative))
            if pos is not None:
                union(i, canon[(target.element, pos)])

    groups: dict[int, list[int]] = {}
    for i in range(len(tagged)):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def singular_set(G: GroupTable) -> SingularSet:
    """Fixed loci of all nonidentity elements, grouped into quotient components.

    Components are deduplicated exactly, checked for pairwise disjointness,
    and each orbit carries the local model: the eigenvalue pattern of its
    pointwise stabilizer on the normal directions.
    """
    branches = [
        (g, G.word_of(g), fixed_set(g))
        for g in G.elements
        if not g.is_identity()
    ]
    tagged, sets, canon = _collect_components(branches)

    intersections: list[tuple[str, str]] = []
    for (i, a), (j, b) in combinations(enumerate(tagged), 2):
        if components_intersect(a[2], b[2]):
            intersections.append(
                (f"{a[1]}#{i}", f"{b[1]}#{j}")
            )

    orbits = []
    for idxs in _orbit_partition(G, tagged, sets, canon):
        members = [(tagged[i][1], tagged[i][2]) for i in idxs]
        rep_comp = tagged[idxs[0]][2]
        stab = _pointwise_stabilizer(G, rep_comp)
        model = {
            G.word_of(h): eigenvalue_pattern(h, drop_ones=rep_comp.dimension)
            for h in stab
        }
        # A shorthand label is only claimed when the stabilizer is a single
        # involution; richer stabilizers are left to the per-element patterns.
        label = local_model_label(next(iter(model.values()))) if len(model) == 1 else ""
        orbits.append(
            ComponentOrbit(
                dimension=rep_comp.dimension,
                size=len(idxs),
                members=members,
                local_model=model,
                label=label,
            )
        )
    orbits.sort(key=lambda o: (-o.dimension, o.size))
    return SingularSet(
        orbits=orbits,
        upstairs_count=len(tagged),
        all_disjoint=not intersections,
        intersections=intersections,
    )


@dataclass
class InvolutionLocus:
    orbits: list[ComponentOrbit]
    upstairs_count: int
    free_on_components: bool
    meets_singular_set: bool
    branch_counts: dict[str, int]

    def quotient_dimensions(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for orb in self.orbits:
            out[orb.dimension] = out.get(orb.dimension, 0) + 1
        return out


def involution_locus(
    sigma: AffineIsometry,
    G: GroupTable,
    singular: Optional[SingularSet] = None,
) -> InvolutionLocus:
    """Fixed locus of the isometry class sigma*G in the quotient torus.

    Requires sigma to be an involution outside G commuting with every
    element.  The upstairs locus is the union of Fix(sigma*delta) over
    delta in G; components are grouped into G-orbits, and the locus is
    compared against the singular set of G (precomputed one accepted).
    """
    ident = AffineIsometry.identity(sigma.n)
    if (sigma @ sigma) != ident:
        raise ValueError("sigma is not an involution")
    if sigma in G.elements:
        raise ValueError("sigma lies in the group; its locus is part of the singular set")
    for g in G.elements:
        if sigma @ g != g @ sigma:
            raise ValueError(f"sigma does not commute with {G.word_of(g)}")

    branches = []
    branch_counts: dict[str, int] = {}
    for delta in G.elements:
        word = f"sigma*{G.word_of(delta)}" if not delta.is_identity() else "sigma"
        fs = fixed_set(sigma @ delta)
        branch_counts[word] = fs.count
        branches.append((fs.element, word, fs))
    tagged, sets, canon = _collect_components(branches)

    orbits = []
    free = True
    for idxs in _orbit_partition(G, tagged, sets, canon):
        members = [(tagged[i][1], tagged[i][2]) for i in idxs]
        if len(idxs) != G.order:
            free = False
        rep_comp = tagged[idxs[0]][2]
        orbits.append(
            ComponentOrbit(
                dimension=rep_comp.dimension,
                size=len(idxs),
                members=members,
                local_model={},
                label="",
            )
        )
    orbits.sort(key=lambda o: (-o.dimension, o.size))

    sing = singular_set(G) if singular is None else singular
    meets = False
    for _, word, comp in tagged:
        for orb in sing.orbits:
            if any(components_intersect(comp, sc) for _, sc in orb.members):
                meets = True
                break
        if meets:
            break
    return InvolutionLocus(
        orbits=orbits,
        upstairs_count=len(tagged),
        free_on_components=free,
        meets_singular_set=meets,
        branch_counts=branch_counts,
    )


# -- config files ----------------------------------------------------------------
@dataclass
class OrbifoldConfig:
    title: str
    dimension: int
    form_label: str
    generators: dict[str, AffineIsometry]
    involution_name: str
    involution: Optional[AffineIsometry]


def load_config(path) -> OrbifoldConfig:
    """Read a torus group action from a TOML file.

    Layout: top-level ``dimension`` (int) and optional ``title`` / ``form``
    (a model-form label used for sign reporting); one ``[generators.<name>]``
    table per generator with ``matrix`` (row list of ints) and optional
    ``translation`` (list of rational strings); an optional ``[involution]``
    table with ``name``, ``matrix`` and ``translation``.
    """
    try:
        import tomllib
    except ModuleNotFoundError:
        import tomli as tomllib
    with open(path, "rb") as fh:
        data = tomllib.load(fh)
    try:
        n = int(data["dimension"])
        raw_gens = data["generators"]
        if not raw_gens:
            raise KeyError("generators")
    except KeyError as exc:
        raise ValueError(f"config {path}: missing required field {exc}") from exc

    def build(table: Mapping, what: str) -> AffineIsometry:
        if "matrix" not in table:
            raise ValueError(f"config {path}: {what} has no matrix")
        trans = [Fraction(str(x)) for x in table.get("translation", [0] * n)]
        try:
            return AffineIsometry(table["matrix"], trans)
        except ValueError as exc:
            raise ValueError(f"config {path}: {what}: {exc}") from exc

    gens = {name: build(tbl, f"generator {name!r}") for name, tbl in raw_gens.items()}
    if any(g.n != n for g in gens.values()):
        raise ValueError(f"config {path}: generator size differs from dimension {n}")
    inv = None
    inv_name = ""
    if "involution" in data:
        inv_name = str(data["involution"].get("name", "sigma"))
        inv = build(data["involution"], f"involution {inv_name!r}")
        if inv.n != n:
            raise ValueError(f"config {path}: involution size differs from dimension {n}")
    return OrbifoldConfig(
        title=str(data.get("title", "")),
        dimension=n,
        form_label=str(data.get("form", "")),
        generators=gens,
        involution_name=inv_name,
        involution=inv,
    )


# -- invariant cohomology -------------------------------------------------------
def orbifold_betti(G: GroupTable) -> tuple[int, ...]:
    """Dimensions of the spaces of G-invariant constant k-forms, k = 0..n."""
    n = next(iter(G.generators.values())).n if G.generators else G.elements[0].n
    from itertools import combinations as _comb

    betti = [1]
    for k in range(1, n + 1):
        monomials = list(_comb(range(1, n + 1), k))
        col_index = {m: i for i, m in enumerate(monomials)}
        rows: list[list[Fraction]] = []
        for g in G.elements:
            if g.is_identity():
                continue
            L = g.linear_endo()
            for m in monomials:
                form = ExteriorForm(n, k, {m: 1})
                moved = pullback(form, L)
                row = [Fraction(0)] * len(monomials)
                for idx, c in moved.terms.items():
                    row[col_index[idx]] += c
                row[col_index[m]] -= 1
                rows.append(row)
        if not rows:
            betti.append(len(monomials))
        else:
            betti.append(len(monomials) - _ratlinalg.rank(rows))
    return tuple(betti)
