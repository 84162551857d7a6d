"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis 1, z, ..., z^(phi(N)-1) with rational
coefficients, reduced modulo the N-th cyclotomic polynomial.  The default
conductor 24 covers every root of unity needed by the shipped examples
(zeta_8 for fourth roots of -1, zeta_6 for e^{i pi/3}).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm
from typing import Optional, Sequence, Union

Rational = Union[int, Fraction]

DEFAULT_CONDUCTOR = 24


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a: Sequence[Fraction], b: Sequence[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            if y != 0:
                out[i + j] += x * y
    return out


def _poly_divmod(
    a: Sequence[Fraction], b: Sequence[Fraction]
) -> tuple[list[Fraction], list[Fraction]]:
    """Quotient and remainder of a by b (b monic or not, exact)."""
    r = list(a)
    _poly_trim(r)
    d = list(b)
    _poly_trim(d)
    if not d:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(0, len(r) - len(d) + 1)
    lead = d[-1]
    while len(r) >= len(d):
        f = r[-1] / lead
        k = len(r) - len(d)
        q[k] = f
        for i, c in enumerate(d):
            r[k + i] -= f * c
        _poly_trim(r)
        if not r:
            break
    return q, r


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Coefficients of Phi_n, constant term first."""
    if n < 1:
        raise ValueError("conductor must be a positive integer")
    num = [Fraction(-1)] + [Fraction(0)] * (n - 1) + [Fraction(1)]
    for d in range(1, n):
        if n % d == 0:
            num, rem = _poly_divmod(num, [Fraction(c) for c in cyclotomic_polynomial(d)])
            if rem:
                raise AssertionError("cyclotomic division left a remainder")
    if any(c.denominator != 1 for c in num):
        raise AssertionError("cyclotomic polynomial is not integral")
    return tuple(int(c) for c in num)


@lru_cache(maxsize=None)
def _field_data(n: int) -> tuple[tuple[Fraction, ...], int]:
    phi = tuple(Fraction(c) for c in cyclotomic_polynomial(n))
    return phi, len(phi) - 1


@lru_cache(maxsize=None)
def _monomial_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Reductions of z^k mod Phi_n for k = 0..n-1."""
    phi, deg = _field_data(n)
    table: list[tuple[Fraction, ...]] = []
    cur = [Fraction(1)]
    for _ in range(n):
        table.append(tuple(cur) + (Fraction(0),) * (deg - len(cur)))
        cur = [Fraction(0)] + cur
        if len(cur) > deg:
            _, cur = _poly_divmod(cur, list(phi))
            cur = cur + [Fraction(0)] * (deg - len(cur))
            _poly_trim(cur)
        if not cur:
            cur = [Fraction(0)]
    return tuple(table)


class CyclotomicNumber:
    """An element of Q(zeta_N) in the power basis, exact."""

    __slots__ = ("conductor", "coeffs")

    def __init__(self, coeffs: Sequence[Rational], conductor: int = DEFAULT_CONDUCTOR):
        phi, deg = _field_data(conductor)
        c = [Fraction(x) for x in coeffs]
        if len(c) > deg:
            _, c = _poly_divmod(c, list(phi))
        c = c + [Fraction(0)] * (deg - len(c))
        object.__setattr__(self, "conductor", conductor)
        object.__setattr__(self, "coeffs", tuple(c[:deg]))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicNumber is immutable")

    # -- constructors ---------------------------------------------------------
    @classmethod
    def from_rational(cls, x: Rational, conductor: int = DEFAULT_CONDUCTOR) -> "CyclotomicNumber":
        return cls([Fraction(x)], conductor)

    @classmethod
    def zero(cls, conductor: int = DEFAULT_CONDUCTOR) -> "CyclotomicNumber":
        return cls([], conductor)

    @classmethod
    def one(cls, conductor: int = DEFAULT_CONDUCTOR) -> "CyclotomicNumber":
        return cls([1], conductor)

    # -- predicates -----------------------------------------------------------
    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for c in self.coeffs[1:])

    def as_rational(self) -> Fraction:
        if not self.is_rational:
            raise ValueError(f"{self} is not rational")
        return self.coeffs[0]

    # -- arithmetic -----------------------------------------------------------
    def _coerce(self, other) -> Optional["CyclotomicNumber"]:
        if isinstance(other, CyclotomicNumber):
            if other.conductor != self.conductor:
                raise ValueError(
                    f"mixed conductors {self.conductor} and {other.conductor}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber.from_rational(other, self.conductor)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return CyclotomicNumber(
            [a + b for a, b in zip(self.coeffs, o.coeffs)], self.conductor
        )

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber([-a for a in self.coeffs], self.conductor)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        prod = _poly_mul(list(self.coeffs), list(o.coeffs))
        return CyclotomicNumber(prod, self.conductor)

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        """Multiplicative inverse via the extended Euclidean algorithm."""
        if self.is_zero:
            raise ZeroDivisionError("inverse of zero")
        phi, _ = _field_data(self.conductor)
        # invariants: r0 = s0 * self + t0 * phi (t coefficients never needed)
        r0, r1 = list(phi), _poly_trim(list(self.coeffs))
        s0, s1 = [Fraction(0)], [Fraction(1)]
        while r1:
            q, r = _poly_divmod(r0, r1)
            qs1 = _poly_mul(q, s1) if q and s1 else []
            s = [Fraction(0)] * max(len(s0), len(qs1))
            for i, c in enumerate(s0):
                s[i] += c
            for i, c in enumerate(qs1):
                s[i] -= c
            _poly_trim(s)
            r0, r1 = r1, r
            s0, s1 = s1, s
        if len(r0) != 1:
            raise ArithmeticError("element is a zero divisor; conductor data corrupt")
        inv_lead = Fraction(1) / r0[0]
        return CyclotomicNumber([c * inv_lead for c in s0], self.conductor)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int) -> "CyclotomicNumber":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = CyclotomicNumber.one(self.conductor)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- Galois action ----------------------------------------------------------
    def galois(self, k: int) -> "CyclotomicNumber":
        """The automorphism zeta -> zeta^k (k coprime to the conductor)."""
        n = self.conductor
        if gcd(k, n) != 1:
            raise ValueError(f"{k} is not coprime to the conductor {n}")
        table = _monomial_table(n)
        out = [Fraction(0)] * len(self.coeffs)
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            for i, t in enumerate(table[(j * k) % n]):
                out[i] += c * t
        return CyclotomicNumber(out, n)

    def conjugate(self) -> "CyclotomicNumber":
        """Complex conjugation: zeta -> zeta^(N-1)."""
        return self.galois(self.conductor - 1)

    # -- comparisons and output ---------------------------------------------------
    def __eq__(self, other) -> bool:
        try:
            o = self._coerce(other)
        except ValueError:
            return False
        if o is None:
            return NotImplemented
        return self.coeffs == o.coeffs

    def __hash__(self) -> int:
        return hash((self.conductor, self.coeffs))

    def __str__(self) -> str:
        parts = []
        for j, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if j == 0:
                parts.append(str(c))
            else:
                mag = "" if abs(c) == 1 else f"{abs(c)}*"
                term = f"{mag}z^{j}" if j > 1 else f"{mag}z"
                parts.append(f"-{term}" if c < 0 else (f"+{term}" if parts else term))
        return " ".join(parts) if parts else "0"

    def __repr__(self) -> str:
        return f"CyclotomicNumber({self.conductor}, {str(self)!r})"

    def to_complex(self) -> complex:
        """Float evaluation; every exact computation stays upstream of this."""
        import cmath

        z = cmath.exp(2j * cmath.pi / self.conductor)
        return sum(float(c) * z**j for j, c in enumerate(self.coeffs))


def zeta(conductor: int = DEFAULT_CONDUCTOR, power: int = 1) -> CyclotomicNumber:
    """The root of unity zeta_N^power."""
    table = _monomial_table(conductor)
    return CyclotomicNumber(table[power % conductor], conductor)


def root_of_unity_group(conductor: int = DEFAULT_CONDUCTOR) -> int:
    """Order of the full group of roots of unity in Q(zeta_N): lcm(2, N)."""
    return lcm(2, conductor)


@lru_cache(maxsize=None)
def _unit_table(conductor: int) -> dict[tuple[Fraction, ...], int]:
    """coeffs -> t for the generator g of the root-of-unity group, g^t."""
    k = root_of_unity_group(conductor)
    g = zeta(conductor) if conductor % 2 == 0 else -zeta(conductor)
    out: dict[tuple[Fraction, ...], int] = {}
    cur = CyclotomicNumber.one(conductor)
    for t in range(k):
        out.setdefault(cur.coeffs, t)
        cur = cur * g
    if cur != CyclotomicNumber.one(conductor):
        raise AssertionError("root of unity group did not close")
    return out


def unit_generator(conductor: int = DEFAULT_CONDUCTOR) -> CyclotomicNumber:
    """A generator of the group of roots of unity in the field."""
    return zeta(conductor) if conductor % 2 == 0 else -zeta(conductor)


def as_root_of_unity(x: CyclotomicNumber) -> Optional[int]:
    """If x = g^t for the unit group generator g, return t; else None."""
    return _unit_table(x.conductor).get(x.coeffs)
