"""Scalar domains and square classes.

Supports exact rationals (``fractions.Fraction``), odd prime fields F_p,
their quadratic extensions F_{p^2}, double-precision reals and complexes.
All backends expose ordinary operator arithmetic so the geometry and
section formulas evaluate uniformly over any of them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import UnsupportedExtension, UnsupportedField, ZeroElement

RATIONAL = "Q"
REAL = "R"
COMPLEX = "C"


def prime_field_tag(p: int) -> str:
    return f"F{p}"


def quad_ext_tag(p: int) -> str:
    return f"F{p}^2"


# ---------------------------------------------------------------------------
# integer factoring support for rational square classes
# ---------------------------------------------------------------------------

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int) -> int:
    """Find a nontrivial factor of composite odd n (deterministic restarts)."""
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x, ys = 2, 2
        y, d, q, m = x, 1, 1, 128
        while d == 1:
            x = y
            for _ in range(m):
                y = (y * y + c) % n
            k = 0
            while k < m and d == 1:
                ys = y
                for _ in range(min(m, m - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                k += m
                d = math.gcd(q, n)
        if d == n:
            # backtrack one step at a time
            d = 1
            while d == 1:
                ys = (ys * ys + c) % n
                d = math.gcd(abs(x - ys), n)
        if d != n:
            return d
    raise ArithmeticError(f"failed to factor {n}")


def _factor(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        tmp: dict[int, int] = {}
        _factor(r, tmp)
        for p, e in tmp.items():
            out[p] = out.get(p, 0) + 2 * e
        return
    d = _pollard_brent(n)
    _factor(d, out)
    _factor(n // d, out)


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of |n|, n != 0."""
    if n == 0:
        raise ZeroElement("cannot factor 0")
    n = abs(n)
    out: dict[int, int] = {}
    for p in (2, 3, 5):
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
    f = 7
    # wheel over residues coprime to 30 keeps trial division short
    incs = (4, 2, 4, 2, 4, 6, 2, 6)
    i = 0
    while f * f <= n and f < 10000:
        while n % f == 0:
            out[f] = out.get(f, 0) + 1
            n //= f
        f += incs[i]
        i = (i + 1) % 8
    _factor(n, out)
    return out


def squarefree_part(n: int) -> int:
    """Signed squarefree kernel of a nonzero integer."""
    if n == 0:
        raise ZeroElement("0 has no square class")
    sign = -1 if n < 0 else 1
    part = 1
    for p, e in factorize(n).items():
        if e % 2:
            part *= p
    return sign * part


def _sf_product(a: int, b: int) -> int:
    """Squarefree part of a*b given both squarefree (no factoring needed)."""
    sign = -1 if (a < 0) != (b < 0) else 1
    a, b = abs(a), abs(b)
    g = math.gcd(a, b)
    return sign * (a // g) * (b // g)


# ---------------------------------------------------------------------------
# prime fields and quadratic extensions
# ---------------------------------------------------------------------------

class PrimeFieldElement:
    """Element of F_p for an odd prime p."""

    __slots__ = ("p", "value")

    def __init__(self, p: int, value: int):
        self.p = p
        self.value = value % p

    def _coerce(self, other):
        if isinstance(other, PrimeFieldElement):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.value + v)

    __radd__ = __add__

    def __sub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.value - v)

    def __rsub__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, v - self.value)

    def __mul__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return PrimeFieldElement(self.p, self.value * v)

    __rmul__ = __mul__

    def __truediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if v == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return PrimeFieldElement(self.p, self.value * pow(v, self.p - 2, self.p))

    def __rtruediv__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        if self.value == 0:
            raise ZeroDivisionError(f"division by zero in F_{self.p}")
        return PrimeFieldElement(self.p, v * pow(self.value, self.p - 2, self.p))

    def __pow__(self, exp: int):
        if exp < 0:
            return (1 / self) ** (-exp)
        return PrimeFieldElement(self.p, pow(self.value, exp, self.p))

    def __neg__(self):
        return PrimeFieldElement(self.p, -self.value)

    def __eq__(self, other):
        v = self._coerce(other)
        if v is NotImplemented:
            return NotImplemented
        return self.value == v

    def __hash__(self):
        return hash((self.p, self.value))

    def __repr__(self):
        return f"F{self.p}({self.value})"


class PrimeField:
    """The field F_p, p an odd prime; also a factory for its elements."""

    def __init__(self, p: int):
        if p == 2 or not is_prime(p):
            raise ValueError(f"modulus must be an odd prime, got {p}")
        self.p = p
        self.tag = prime_field_tag(p)

    def __call__(self, v) -> PrimeFieldElement:
        if isinstance(v, PrimeFieldElement):
            if v.p != self.p:
                raise ValueError("element of a different prime field")
            return v
        if isinstance(v, Fraction):
            if v.denominator % self.p == 0:
                raise ZeroDivisionError(f"denominator divisible by {self.p}")
            return PrimeFieldElement(self.p, v.numerator) / v.denominator
        return PrimeFieldElement(self.p, int(v))

    of = __call__

    def zero(self) -> PrimeFieldElement:
        return PrimeFieldElement(self.p, 0)

    def one(self) -> PrimeFieldElement:
        return PrimeFieldElement(self.p, 1)

    def elements(self):
        return (PrimeFieldElement(self.p, v) for v in range(self.p))

    def units(self):
        return (PrimeFieldElement(self.p, v) for v in range(1, self.p))

    @property
    def least_nonresidue(self) -> int:
        for n in range(2, self.p):
            if pow(n, (self.p - 1) // 2, self.p) != 1:
                return n
        raise ArithmeticError("no nonresidue found")  # unreachable for p > 2

    def __repr__(self):
        return f"PrimeField({self.p})"


class QuadExtElement:
    """Element c0 + c1*t of F_p[t]/(t^2 + beta*t + gamma)."""

    __slots__ = ("field", "c0", "c1")

    def __init__(self, field: "QuadExtField", c0: int, c1: int):
        self.field = field
        self.c0 = c0 % field.p
        self.c1 = c1 % field.p

    def _coerce(self, other):
        if isinstance(other, QuadExtElement):
            if other.field is not self.field and (
                other.field.p, other.field.beta, other.field.gamma
            ) != (self.field.p, self.field.beta, self.field.gamma):
                raise ValueError("mixed quadratic extensions")
            return other
        if isinstance(other, (int, PrimeFieldElement)):
            v = other.value if isinstance(other, PrimeFieldElement) else other
            return QuadExtElement(self.field, v, 0)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExtElement(self.field, self.c0 + o.c0, self.c1 + o.c1)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return QuadExtElement(self.field, self.c0 - o.c0, self.c1 - o.c1)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        p, beta, gamma = self.field.p, self.field.beta, self.field.gamma
        cross = self.c1 * o.c1
        c0 = self.c0 * o.c0 - gamma * cross
        c1 = self.c0 * o.c1 + self.c1 * o.c0 - beta * cross
        return QuadExtElement(self.field, c0 % p, c1 % p)

    __rmul__ = __mul__

    def conjugate(self) -> "QuadExtElement":
        # the other root of the defining polynomial is -beta - t
        return QuadExtElement(
            self.field, self.c0 - self.field.beta * self.c1, -self.c1
        )

    def norm(self) -> PrimeFieldElement:
        f = self.field
        n = self.c0 * self.c0 - f.beta * self.c0 * self.c1 + f.gamma * self.c1 * self.c1
        return PrimeFieldElement(f.p, n)

    def inverse(self) -> "QuadExtElement":
        n = self.norm()
        if n.value == 0:
            raise ZeroDivisionError("division by zero in quadratic extension")
        ninv = pow(n.value, self.field.p - 2, self.field.p)
        conj = self.conjugate()
        return QuadExtElement(self.field, conj.c0 * ninv, conj.c1 * ninv)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, exp: int):
        if exp < 0:
            return self.inverse() ** (-exp)
        result = QuadExtElement(self.field, 1, 0)
        base = self
        while exp:
            if exp & 1:
                result = result * base
            base = base * base
            exp >>= 1
        return result

    def __neg__(self):
        return QuadExtElement(self.field, -self.c0, -self.c1)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.c0 == o.c0 and self.c1 == o.c1

    def __hash__(self):
        return hash((self.field.p, self.field.beta, self.field.gamma, self.c0, self.c1))

    def __repr__(self):
        return f"F{self.field.p}^2({self.c0}+{self.c1}t)"


class QuadExtField:
    """F_{p^2} presented as F_p[t]/(t^2 + beta*t + gamma)."""

    def __init__(self, p: int, beta: int = 0, gamma: int | None = None):
        base = PrimeField(p)
        if gamma is None and beta == 0:
            gamma = (-base.least_nonresidue) % p
        if gamma is None:
            raise ValueError("gamma required when beta != 0")
        disc = (beta * beta - 4 * gamma) % p
        if disc == 0 or pow(disc, (p - 1) // 2, p) == 1:
            raise ValueError("defining polynomial is reducible mod p")
        self.p = p
        self.beta = beta % p
        self.gamma = gamma % p
        self.base = base
        self.tag = quad_ext_tag(p)

    def __call__(self, c0, c1=0) -> QuadExtElement:
        if isinstance(c0, QuadExtElement):
            return c0
        if isinstance(c0, PrimeFieldElement):
            c0 = c0.value
        if isinstance(c1, PrimeFieldElement):
            c1 = c1.value
        return QuadExtElement(self, int(c0), int(c1))

    of = __call__

    def zero(self) -> QuadExtElement:
        return QuadExtElement(self, 0, 0)

    def one(self) -> QuadExtElement:
        return QuadExtElement(self, 1, 0)

    def gen(self) -> QuadExtElement:
        return QuadExtElement(self, 0, 1)

    def elements(self):
        return (
            QuadExtElement(self, c0, c1)
            for c1 in range(self.p)
            for c0 in range(self.p)
        )

    @property
    def canonical_nonresidue(self) -> QuadExtElement:
        half = (self.p * self.p - 1) // 2
        for x in self.elements():
            if (x.c0, x.c1) != (0, 0) and x ** half != 1:
                return x
        raise ArithmeticError("no nonresidue found")  # unreachable

    def __repr__(self):
        return f"QuadExtField(p={self.p}, t^2+{self.beta}t+{self.gamma})"


class RationalField:
    tag = RATIONAL

    @staticmethod
    def of(x) -> Fraction:
        return Fraction(x)

    zero = staticmethod(lambda: Fraction(0))
    one = staticmethod(lambda: Fraction(1))


class RealField:
    tag = REAL

    @staticmethod
    def of(x) -> float:
        return float(x)

    zero = staticmethod(lambda: 0.0)
    one = staticmethod(lambda: 1.0)


class ComplexField:
    tag = COMPLEX

    @staticmethod
    def of(x) -> complex:
        return complex(x)

    zero = staticmethod(lambda: 0j)
    one = staticmethod(lambda: 1 + 0j)


QQ = RationalField()
RR = RealField()
CC = ComplexField()


def ensure_finite(z: complex) -> complex:
    """Complex numbers must be finite wherever they are stored."""
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise UnsupportedField(f"non-finite complex value {z!r}")
    return z


# ---------------------------------------------------------------------------
# square classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SquareClass:
    """An element of k^x/(k^x)^2 in canonical form.

    Representatives: sign over R, 1 over C, a signed squarefree integer
    over Q, 1 or the least positive nonresidue over F_p, and (1,0) or the
    first nonsquare in coordinate order over F_{p^2}.
    """

    field: str
    rep: object

    def is_trivial(self) -> bool:
        return self.rep == 1 or self.rep == (1, 0)

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if self.field != other.field:
            raise UnsupportedField(
                f"cannot multiply classes over {self.field} and {other.field}"
            )
        if self.field == COMPLEX:
            return self
        if self.field == REAL:
            return SquareClass(REAL, self.rep * other.rep)
        if self.field == RATIONAL:
            return SquareClass(RATIONAL, _sf_product(self.rep, other.rep))
        # finite fields: the class group is Z/2 with canonical reps
        if self.rep == other.rep:
            return SquareClass(self.field, 1 if isinstance(self.rep, int) else (1, 0))
        if self.is_trivial():
            return other
        if other.is_trivial():
            return self
        raise AssertionError("non-canonical finite-field square class")

    def __str__(self):
        return f"<{self.rep}>@{self.field}"


def _nonzero(x) -> bool:
    if isinstance(x, (int, Fraction, float)):
        return x != 0
    if isinstance(x, complex):
        return x != 0
    if isinstance(x, PrimeFieldElement):
        return x.value != 0
    if isinstance(x, QuadExtElement):
        return (x.c0, x.c1) != (0, 0)
    raise UnsupportedField(f"unsupported scalar {type(x).__name__}")


def is_square(x) -> bool:
    """True iff the nonzero element x is a square in its field."""
    if not _nonzero(x):
        raise ZeroElement("0 has no square class")
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        if q < 0:
            return False
        return (
            math.isqrt(q.numerator) ** 2 == q.numerator
            and math.isqrt(q.denominator) ** 2 == q.denominator
        )
    if isinstance(x, float):
        return x > 0
    if isinstance(x, complex):
        return True
    if isinstance(x, PrimeFieldElement):
        return pow(x.value, (x.p - 1) // 2, x.p) == 1
    if isinstance(x, QuadExtElement):
        return x ** ((x.field.p ** 2 - 1) // 2) == 1
    raise UnsupportedField(f"unsupported scalar {type(x).__name__}")


def square_class(x) -> SquareClass:
    """Canonical square class of a nonzero field element."""
    if not _nonzero(x):
        raise ZeroElement("0 has no square class")
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
        return SquareClass(RATIONAL, squarefree_part(q.numerator * q.denominator))
    if isinstance(x, float):
        return SquareClass(REAL, 1 if x > 0 else -1)
    if isinstance(x, complex):
        return SquareClass(COMPLEX, 1)
    if isinstance(x, PrimeFieldElement):
        if is_square(x):
            return SquareClass(prime_field_tag(x.p), 1)
        return SquareClass(prime_field_tag(x.p), PrimeField(x.p).least_nonresidue)
    if isinstance(x, QuadExtElement):
        if is_square(x):
            return SquareClass(quad_ext_tag(x.field.p), (1, 0))
        nr = x.field.canonical_nonresidue
        return SquareClass(quad_ext_tag(x.field.p), (nr.c0, nr.c1))
    raise UnsupportedField(f"unsupported scalar {type(x).__name__}")


def field_trace(x: QuadExtElement) -> PrimeFieldElement:
    """Frobenius trace x + x^p down to the base prime field."""
    if not isinstance(x, QuadExtElement):
        raise UnsupportedExtension("field_trace expects a quadratic-extension element")
    # x + x^p = 2*c0 - beta*c1 since the conjugate root is -beta - t
    f = x.field
    return PrimeFieldElement(f.p, 2 * x.c0 - f.beta * x.c1)


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def rational_to_str(q: Fraction) -> str:
    return str(Fraction(q))


def rational_from_str(s: str) -> Fraction:
    return Fraction(s.strip())


def prime_elt_to_json(x: PrimeFieldElement) -> dict:
    return {"p": x.p, "v": x.value}


def prime_elt_from_json(d: dict) -> PrimeFieldElement:
    return PrimeFieldElement(int(d["p"]), int(d["v"]))


def complex_to_json(z: complex) -> list:
    z = ensure_finite(complex(z))
    return [z.real, z.imag]


def complex_from_json(v) -> complex:
    return ensure_finite(complex(v[0], v[1]))
