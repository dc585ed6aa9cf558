"""Exact arithmetic in cyclotomic fields Q(zeta_N).

A :class:`CycNum` is stored in canonical form: the remainder of its
polynomial in ``zeta_N`` modulo the N-th cyclotomic polynomial.  Values of
different conductors are combined by lifting both into Q(zeta_L) with
L = lcm of the conductors.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache
from numbers import Rational

__all__ = [
    "CycNum",
    "ArithmeticError_",
    "cyclotomic_poly",
    "euler_phi",
    "root_of_unity",
    "field_arith",
    "geometric_sum",
    "to_cyc",
    "ZERO",
    "ONE",
]


class ArithmeticError_(ArithmeticError):
    """Invalid conductor or division by zero."""


def euler_phi(n: int) -> int:
    result, m, p = n, n, 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


def _mobius(n: int) -> int:
    result, m, p = 1, n, 2
    while p * p <= m:
        if m % p == 0:
            m //= p
            if m % p == 0:
                return 0
            result = -result
        p += 1
    if m > 1:
        result = -result
    return result


def _poly_divexact(num: list[int], den: list[int]) -> list[int]:
    # both monic integer polynomials, coefficients low degree first
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for shift in range(len(q) - 1, -1, -1):
        c = num[shift + len(den) - 1]
        q[shift] = c
        if c:
            for i, d in enumerate(den):
                num[shift + i] -= c * d
    assert not any(num), "inexact cyclotomic division"
    return q


@lru_cache(maxsize=None)
def cyclotomic_poly(n: int) -> tuple[int, ...]:
    """Coefficients (low degree first) of the n-th cyclotomic polynomial.

    Uses the recursion Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    """
    if n < 1:
        raise ArithmeticError_(f"invalid conductor {n}")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, list(cyclotomic_poly(d)))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical coefficients of x^k mod Phi_n for 0 <= k < 2*phi(n)."""
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(2 * deg):
        rows.append(tuple(cur))
        # multiply by x and reduce with the monic Phi_n
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=None)
def _exponent_table(n: int) -> tuple[tuple[Fraction, ...], ...]:
    """Canonical coefficients of zeta_n^k for 0 <= k < n."""
    deg = euler_phi(n)
    pw = _power_table(n)
    out = []
    cur = list(pw[0])
    for _ in range(n):
        out.append(tuple(cur))
        top = cur[-1]
        cur = [Fraction(0)] + cur[:-1]
        if top:
            phi = cyclotomic_poly(n)
            for i in range(deg):
                cur[i] -= top * phi[i]
    return tuple(out)


@lru_cache(maxsize=None)
def _normalized_traces(n: int) -> tuple[Fraction, ...]:
    # Tr(zeta_n^k) / phi(n) = mu(d) / phi(d) with d = n / gcd(k, n)
    out = []
    for k in range(euler_phi(n)):
        d = n // math.gcd(k, n)
        out.append(Fraction(_mobius(d), euler_phi(d)))
    return tuple(out)


def _reduce(n: int, coeffs) -> tuple[Fraction, ...]:
    """Canonical form of sum_k coeffs[k] zeta_n^k for arbitrary length."""
    deg = euler_phi(n)
    table = _exponent_table(n)
    out = [Fraction(0)] * deg
    for k, c in enumerate(coeffs):
        if c:
            row = table[k % n]
            for i in range(deg):
                if row[i]:
                    out[i] += c * row[i]
    return tuple(out)


class CycNum:
    """An element of Q(zeta_N) in canonical form."""

    __slots__ = ("_n", "_c", "_hash")

    def __init__(self, conductor: int = 1, coeffs=(0,)):
        if not isinstance(conductor, int) or conductor < 1:
            raise ArithmeticError_(f"invalid conductor {conductor!r}")
        self._n = conductor
        self._c = _reduce(conductor, [Fraction(c) for c in coeffs])
        self._hash = None

    @classmethod
    def _raw(cls, n: int, canon: tuple[Fraction, ...]) -> CycNum:
        obj = object.__new__(cls)
        obj._n = n
        obj._c = canon
        obj._hash = None
        return obj

    @classmethod
    def rational(cls, q) -> CycNum:
        return cls._raw(1, (Fraction(q),))

    @property
    def conductor(self) -> int:
        return self._n

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        """Length-N coefficient vector; slots >= phi(N) are zero."""
        return self._c + (Fraction(0),) * (self._n - len(self._c))

    def is_zero(self) -> bool:
        return not any(self._c)

    def is_rational(self) -> bool:
        return not any(self._c[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self} is not rational")
        return self._c[0]

    def lift(self, m: int) -> CycNum:
        """The same value viewed in Q(zeta_m); requires N | m."""
        if m == self._n:
            return self
        if m % self._n:
            raise ArithmeticError_(f"cannot lift conductor {self._n} to {m}")
        scale = m // self._n
        spread = [Fraction(0)] * m
        for k, c in enumerate(self._c):
            spread[k * scale] = c
        return CycNum._raw(m, _reduce(m, spread))

    def _common(self, other: CycNum) -> tuple[int, tuple, tuple]:
        if self._n == other._n:
            return self._n, self._c, other._c
        m = self._n * other._n // math.gcd(self._n, other._n)
        return m, self.lift(m)._c, other.lift(m)._c

    def __add__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if other._n == 1 and len(self._c) >= 1:
            if not other._c[0]:
                return self
            return CycNum._raw(self._n, (self._c[0] + other._c[0],) + self._c[1:])
        if self._n == 1:
            return other.__add__(self)
        n, a, b = self._common(other)
        return CycNum._raw(n, tuple(x + y for x, y in zip(a, b)))

    __radd__ = __add__

    def __neg__(self) -> CycNum:
        return CycNum._raw(self._n, tuple(-x for x in self._c))

    def __sub__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if other._n == 1:
            q = other._c[0]
            if q == 1:
                return self
            return CycNum._raw(self._n, tuple(x * q for x in self._c))
        if self._n == 1:
            return other.__mul__(self)
        n, a, b = self._common(other)
        prod = [Fraction(0)] * (2 * len(a) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        deg = len(a)
        table = _power_table(n)
        out = list(prod[:deg])
        for k in range(deg, len(prod)):
            c = prod[k]
            if c:
                row = table[k]
                for i in range(deg):
                    if row[i]:
                        out[i] += c * row[i]
        return CycNum._raw(n, tuple(out))

    __rmul__ = __mul__

    def inverse(self) -> CycNum:
        if self.is_zero():
            raise ZeroDivisionError("division by zero in Q(zeta_N)")
        if self._n == 1 or self.is_rational():
            q = self._c[0]
            return CycNum._raw(self._n, (1 / q,) + self._c[1:])
        return _inverse(self._n, self._c)

    def __truediv__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> CycNum:
        if k < 0:
            return self.inverse() ** (-k)
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        other = to_cyc(other)
        if other is NotImplemented:
            return NotImplemented
        if self._n == other._n:
            return self._c == other._c
        _, a, b = self._common(other)
        return a == b

    def __hash__(self) -> int:
        # normalized trace is invariant under conductor lifting
        if self._hash is None:
            if self.is_rational():
                self._hash = hash(self._c[0])
            else:
                tr = sum(c * t for c, t in zip(self._c, _normalized_traces(self._n)))
                self._hash = hash((tr, "cyc"))
        return self._hash

    def __bool__(self) -> bool:
        return not self.is_zero()

    def __complex__(self) -> complex:
        z = complex(math.cos(2 * math.pi / self._n), math.sin(2 * math.pi / self._n))
        return sum((float(c) * z**k for k, c in enumerate(self._c)), 0j)

    def __repr__(self) -> str:
        return f"CycNum({self._n}, {[str(c) for c in self._c]})"

    def __str__(self) -> str:
        return serialize(self)


def _inverse(n: int, canon: tuple[Fraction, ...]) -> CycNum:
    # solve (x * y) = 1 via the multiplication matrix of x
    deg = len(canon)
    x = CycNum._raw(n, canon)
    cols = []
    for j in range(deg):
        e = [Fraction(0)] * deg
        e[j] = Fraction(1)
        cols.append((x * CycNum._raw(n, tuple(e)))._c)
    # augmented matrix rows: M[i][j] = cols[j][i]
    aug = [[cols[j][i] for j in range(deg)] + [Fraction(int(i == 0))] for i in range(deg)]
    for col in range(deg):
        piv = next(r for r in range(col, deg) if aug[r][col])
        aug[col], aug[piv] = aug[piv], aug[col]
        p = aug[col][col]
        aug[col] = [v / p for v in aug[col]]
        for r in range(deg):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return CycNum._raw(n, tuple(aug[i][deg] for i in range(deg)))


def to_cyc(x) -> CycNum:
    if isinstance(x, CycNum):
        return x
    if isinstance(x, (int, Rational)):
        return CycNum._raw(1, (Fraction(x),))
    return NotImplemented


ZERO = CycNum.rational(0)
ONE = CycNum.rational(1)


def root_of_unity(n: int, k: int = 1) -> CycNum:
    """zeta_n ** k in canonical form."""
    if not isinstance(n, int) or n < 1:
        raise ArithmeticError_(f"invalid conductor {n!r}")
    return CycNum._raw(n, _exponent_table(n)[k % n])


def field_arith(a, b, op: str) -> CycNum:
    a, b = to_cyc(a), to_cyc(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


def geometric_sum(n: int, k: int) -> CycNum:
    """Sum of xi**k over the n-th roots of unity xi."""
    return CycNum.rational(n if k % n == 0 else 0)


_SER_RE = re.compile(r"^cyc\((\d+)\)\[(.*)\]$")


def serialize(x: CycNum) -> str:
    return f"cyc({x.conductor})[{','.join(str(c) for c in x._c)}]"


def parse(text: str) -> CycNum:
    m = _SER_RE.match(text.strip())
    if not m:
        raise ValueError(f"not a cyclotomic literal: {text!r}")
    body = m.group(2).strip()
    coeffs = [Fraction(t.strip()) for t in body.split(",")] if body else [Fraction(0)]
    n = int(m.group(1))
    if len(coeffs) > n:
        raise ValueError(f"too many coefficients for conductor {n}")
    return CycNum(n, coeffs)
