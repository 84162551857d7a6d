"""Exact exterior algebra on R^n for small n.

Forms are finite sums  sum_I c_I dx_I  with strictly increasing index tuples
I in {1..n} and exact rational coefficients.  All algebraic operations (wedge,
Hodge star, pullback, interior product) stay in exact arithmetic; conversion
to floating point happens only through :func:`as_tensor`.

The Hodge star uses the Euclidean metric and the orientation dx_1 ^ ... ^ dx_n.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations, permutations
from typing import Mapping, Sequence, Union

import numpy as np

Rational = Union[int, str, Fraction]
IndexTuple = tuple[int, ...]

MAX_DIM = 8


def _rat(x: Rational) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"expected exact rational, got {type(x).__name__}")


def perm_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting ``seq``; assumes distinct entries."""
    sign = 1
    n = len(seq)
    for i in range(n):
        for j in range(i + 1, n):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


class ExteriorForm:
    """Immutable exterior form with exact rational coefficients.

    ``terms`` maps strictly increasing index tuples to nonzero Fractions.
    Raw input may use arbitrary index order and duplicate tuples; it is
    canonicalized (sorted indices, permutation signs applied, zeros dropped).
    """

    __slots__ = ("ambient_dim", "degree", "_terms")

    def __init__(
        self,
        ambient_dim: int,
        degree: int,
        terms: Mapping[Sequence[int], Rational] | None = None,
    ):
        if not 1 <= ambient_dim <= MAX_DIM:
            raise ValueError(f"ambient_dim must be in 1..{MAX_DIM}, got {ambient_dim}")
        if not 0 <= degree <= ambient_dim:
            raise ValueError(f"degree must be in 0..{ambient_dim}, got {degree}")
        self.ambient_dim = ambient_dim
        self.degree = degree
        canon: dict[IndexTuple, Fraction] = {}
        for idx, coeff in (terms or {}).items():
            idx = tuple(int(i) for i in idx)
            c = _rat(coeff)
            if len(idx) != degree:
                raise ValueError(f"index tuple {idx} does not match degree {degree}")
            if any(not 1 <= i <= ambient_dim for i in idx):
                raise ValueError(f"index out of range in {idx}")
            if len(set(idx)) != len(idx):
                continue
            key = tuple(sorted(idx))
            canon[key] = canon.get(key, Fraction(0)) + perm_sign(idx) * c
        self._terms = {k: v for k, v in sorted(canon.items()) if v != 0}

    @property
    def terms(self) -> dict[IndexTuple, Fraction]:
        return dict(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coefficient(self, *indices: int) -> Fraction:
        idx = tuple(indices)
        key = tuple(sorted(idx))
        return perm_sign(idx) * self._terms.get(key, Fraction(0))

    # -- ring structure ----------------------------------------------------
    def __add__(self, other: "ExteriorForm") -> "ExteriorForm":
        self._check_match(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, Fraction(0)) + v
        return ExteriorForm(self.ambient_dim, self.degree, terms)

    def __sub__(self, other: "ExteriorForm") -> "ExteriorForm":
        return self + (-other)

    def __neg__(self) -> "ExteriorForm":
        return ExteriorForm(
            self.ambient_dim, self.degree, {k: -v for k, v in self._terms.items()}
        )

    def __rmul__(self, scalar: Rational) -> "ExteriorForm":
        c = _rat(scalar)
        return ExteriorForm(
            self.ambient_dim, self.degree, {k: c * v for k, v in self._terms.items()}
        )

    __mul__ = __rmul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ExteriorForm):
            return NotImplemented
        return (
            self.ambient_dim == other.ambient_dim
            and self.degree == other.degree
            and self._terms == other._terms
        )

    def __hash__(self) -> int:
        return hash((self.ambient_dim, self.degree, tuple(self._terms.items())))

    def __repr__(self) -> str:
        if self.is_zero():
            return f"ExteriorForm({self.ambient_dim}, {self.degree}, 0)"
        return f"ExteriorForm({self.ambient_dim}, {self.degree}, {self.to_text()!r})"

    def _check_match(self, other: "ExteriorForm") -> None:
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("ambient dimensions differ")
        if self.degree != other.degree:
            raise ValueError("degrees differ")

    # -- serialization -----------------------------------------------------
    def to_text(self) -> str:
        """One term per line: ``<sign><num>/<den> dx_<indices>``."""
        if not self._terms:
            return "0"
        lines = []
        for idx, c in self._terms.items():
            sign = "+" if c > 0 else "-"
            body = "dx_" + "".join(str(i) for i in idx) if idx else "1"
            lines.append(f"{sign}{abs(c.numerator)}/{c.denominator} {body}")
        return "\n".join(lines)

    @classmethod
    def from_text(cls, ambient_dim: int, degree: int, text: str) -> "ExteriorForm":
        terms: dict[IndexTuple, Fraction] = {}
        for line in text.strip().splitlines():
            line = line.strip()
            if not line or line == "0":
                continue
            coeff_part, _, body = line.partition(" ")
            c = Fraction(coeff_part)
            body = body.strip()
            if body in ("1", ""):
                idx: IndexTuple = ()
            elif body.startswith("dx_"):
                idx = tuple(int(ch) for ch in body[3:])
            else:
                raise ValueError(f"cannot parse term {line!r}")
            terms[idx] = terms.get(idx, Fraction(0)) + c
        return cls(ambient_dim, degree, terms)

    def to_json(self) -> str:
        payload = {
            "n": self.ambient_dim,
            "k": self.degree,
            "terms": [
                {"idx": list(idx), "coeff": f"{c.numerator}/{c.denominator}"}
                for idx, c in self._terms.items()
            ],
        }
        return json.dumps(payload)

    @classmethod
    def from_json(cls, data: str) -> "ExteriorForm":
        obj = json.loads(data)
        return cls(
            obj["n"],
            obj["k"],
            {tuple(t["idx"]): Fraction(t["coeff"]) for t in obj["terms"]},
        )


def dx(ambient_dim: int, *indices: int) -> ExteriorForm:
    """The basis monomial dx_{i1} ^ ... ^ dx_{ik}."""
    return ExteriorForm(ambient_dim, len(indices), {tuple(indices): Fraction(1)})


def zero_form(ambient_dim: int, degree: int) -> ExteriorForm:
    return ExteriorForm(ambient_dim, degree, {})


class LinearEndo:
    """Linear map of R^n with exact rational matrix entries (row-major)."""

    __slots__ = ("ambient_dim", "matrix")

    def __init__(self, matrix: Sequence[Sequence[Rational]]):
        rows = [[_rat(x) for x in row] for row in matrix]
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise ValueError("matrix must be square and nonempty")
        if n > MAX_DIM:
            raise ValueError(f"dimension {n} exceeds {MAX_DIM}")
        self.ambient_dim = n
        self.matrix = rows

    @classmethod
    def identity(cls, n: int) -> "LinearEndo":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    def __matmul__(self, other: "LinearEndo") -> "LinearEndo":
        if self.ambient_dim != other.ambient_dim:
            raise ValueError("dimension mismatch")
        n = self.ambient_dim
        a, b = self.matrix, other.matrix
        return LinearEndo(
            [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)] for i in range(n)]
        )

    def apply(self, v: Sequence[Rational]) -> list[Fraction]:
        vv = [_rat(x) for x in v]
        return [
            sum((row[j] * vv[j] for j in range(self.ambient_dim)), Fraction(0))
            for row in self.matrix
        ]

    def det(self) -> Fraction:
        return _minor_det(self.matrix, tuple(range(self.ambient_dim)), tuple(range(self.ambient_dim)))

    def as_array(self) -> np.ndarray:
        return np.array([[float(x) for x in row] for row in self.matrix])


def _minor_det(matrix: Sequence[Sequence[Fraction]], rows: IndexTuple, cols: IndexTuple) -> Fraction:
    # Laplace expansion along successive rows, skipping zero entries; on the
    # mostly-zero minors of signed permutation matrices this is near linear.
    k = len(rows)

    def expand(r: int, remaining: tuple[int, ...]) -> Fraction:
        if r == k:
            return Fraction(1)
        row = matrix[rows[r]]
        total = Fraction(0)
        for pos, c in enumerate(remaining):
            a = row[c]
            if a == 0:
                continue
            sub = expand(r + 1, remaining[:pos] + remaining[pos + 1:])
            if sub != 0:
                total += a * sub if pos % 2 == 0 else -(a * sub)
        return total

    return expand(0, tuple(cols))


def wedge(a: ExteriorForm, b: ExteriorForm) -> ExteriorForm:
    """Exterior product a ^ b."""
    if a.ambient_dim != b.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n = a.ambient_dim
    k = a.degree + b.degree
    if k > n:
        # Degree beyond the top is identically zero; report it as the zero top form.
        return zero_form(n, n)
    terms: dict[IndexTuple, Fraction] = {}
    for ia, ca in a.terms.items():
        for ib, cb in b.terms.items():
            if set(ia) & set(ib):
                continue
            idx = ia + ib
            key = tuple(sorted(idx))
            terms[key] = terms.get(key, Fraction(0)) + perm_sign(idx) * ca * cb
    return ExteriorForm(n, k, terms)


def hodge_star(a: ExteriorForm) -> ExteriorForm:
    """Hodge star for the Euclidean metric, orientation dx_1 ^ ... ^ dx_n."""
    n = a.ambient_dim
    terms: dict[IndexTuple, Fraction] = {}
    for idx, c in a.terms.items():
        comp = tuple(i for i in range(1, n + 1) if i not in idx)
        terms[comp] = terms.get(comp, Fraction(0)) + perm_sign(idx + comp) * c
    return ExteriorForm(n, n - a.degree, terms)


def pullback(a: ExteriorForm, endo: LinearEndo) -> ExteriorForm:
    """Pullback L^* a, where (L^* a)(v_1, ..., v_k) = a(L v_1, ..., L v_k)."""
    if a.ambient_dim != endo.ambient_dim:
        raise ValueError("ambient dimensions differ")
    n, k = a.ambient_dim, a.degree
    if k == 0:
        return a
    mat = endo.matrix
    terms: dict[IndexTuple, Fraction] = {}
    for J in combinations(range(1, n + 1), k):
        cols = tuple(j - 1 for j in J)
        acc = Fraction(0)
        for I, c in a.terms.items():
            rows = tuple(i - 1 for i in I)
            d = _minor_det(mat, rows, cols)
            if d != 0:
                acc += c * d
        if acc != 0:
            terms[J] = acc
    return ExteriorForm(n, k, terms)


def interior_product(v: Sequence[Rational], a: ExteriorForm) -> ExteriorForm:
    """Contraction v -| a in the first slot."""
    vv = [_rat(x) for x in v]
    if len(vv) != a.ambient_dim:
        raise ValueError("vector length does not match ambient dimension")
    if a.degree == 0:
        raise ValueError("cannot contract a 0-form")
    terms: dict[IndexTuple, Fraction] = {}
    for idx, c in a.terms.items():
        for pos, i in enumerate(idx):
            if vv[i - 1] == 0:
                continue
            rest = idx[:pos] + idx[pos + 1 :]
            sign = (-1) ** pos
            terms[rest] = terms.get(rest, Fraction(0)) + sign * vv[i - 1] * c
    return ExteriorForm(a.ambient_dim, a.degree - 1, terms)


def norm_squared(a: ExteriorForm) -> Fraction:
    """Euclidean |a|^2 = sum of squared coefficients over increasing tuples."""
    return sum((c * c for c in a.terms.values()), Fraction(0))


def evaluate(a: ExteriorForm, vectors: Sequence[Sequence[Rational]]) -> Fraction:
    """Exact evaluation a(v_1, ..., v_k) on rational vectors."""
    if len(vectors) != a.degree:
        raise ValueError("need exactly one vector per degree")
    vecs = [[_rat(x) for x in v] for v in vectors]
    k = a.degree
    total = Fraction(0)
    for idx, c in a.terms.items():
        sub = [[vecs[r][i - 1] for i in idx] for r in range(k)]
        total += c * _minor_det(sub, tuple(range(k)), tuple(range(k)))
    return total


def embed(a: ExteriorForm, ambient_dim: int, offset: int = 0) -> ExteriorForm:
    """Reindex a form into a larger space, shifting every index by ``offset``."""
    terms = {tuple(i + offset for i in idx): c for idx, c in a.terms.items()}
    return ExteriorForm(ambient_dim, a.degree, terms)


def as_tensor(a: ExteriorForm) -> np.ndarray:
    """Dense antisymmetric float tensor T with a(v_1..v_k) = T[i_1..i_k] v_1^{i_1} ...

    This is the only conversion out of exact arithmetic.
    """
    n, k = a.ambient_dim, a.degree
    T = np.zeros((n,) * k)
    for idx, c in a.terms.items():
        fc = float(c)
        for p in permutations(range(k)):
            T[tuple(idx[q] - 1 for q in p)] = perm_sign(p) * fc
    return T
