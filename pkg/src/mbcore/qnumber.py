"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

A :class:`QuadraticNumber` is the value ``(p + q*sqrt(D)) / r`` kept in a
canonical form: ``D`` squarefree, ``r > 0``, ``gcd(p, q, r) = 1`` and the
sentinel ``D = 1`` (with ``q = 0``) for rationals.  Rationals themselves are
plain :class:`fractions.Fraction` elsewhere in the package; every operation
here accepts ``int`` and ``Fraction`` operands and embeds them on the fly.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import lru_cache

from .errors import FieldMismatchError, InputError, UnsupportedFieldError

__all__ = [
    "QuadraticNumber",
    "qnum_normalize",
    "qnum_arith",
    "qnum_compare",
    "qnum_floor",
    "as_qnumber",
    "parse_qnumber",
    "squarefree_decomposition",
]


@lru_cache(maxsize=4096)
def squarefree_decomposition(n: int) -> tuple[int, int]:
    """Return ``(s, m)`` with ``n = s*s*m`` and ``m`` squarefree.

    Trial division runs only up to the cube root of what is left; a cofactor
    with no prime factor below its cube root is 1, a prime, a product of two
    distinct primes, or a prime square, and only the last is a square.
    """
    if n < 0:
        raise ValueError("negative radicand")
    if n == 0:
        return 0, 1
    s, m = 1, 1
    p = 2
    while p * p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            s *= p ** (e // 2)
            if e % 2:
                m *= p
        p += 1 if p == 2 else 2
    t = math.isqrt(n)
    if t * t == n:
        s *= t
    else:
        m *= n
    return s, m


class QuadraticNumber:
    """Immutable element ``(p + q*sqrt(D)) / r`` of a real quadratic field."""

    __slots__ = ("p", "q", "r", "D")

    def __init__(self, p, q=0, r=1, D=1):
        p, q, r, D = _canonical(p, q, r, D)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "D", D)

    def __setattr__(self, name, value):
        raise AttributeError("QuadraticNumber is immutable")

    @classmethod
    def from_parts(cls, a: Fraction, b: Fraction, D: int) -> "QuadraticNumber":
        """Build ``a + b*sqrt(D)`` from rational parts."""
        a, b = Fraction(a), Fraction(b)
        r = a.denominator * b.denominator // math.gcd(a.denominator, b.denominator)
        return cls(a.numerator * (r // a.denominator), b.numerator * (r // b.denominator), r, D)

    # -- views -----------------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        return Fraction(self.p, self.r)

    @property
    def irrational_part(self) -> Fraction:
        """Coefficient ``b`` of ``sqrt(D)``."""
        return Fraction(self.q, self.r)

    def is_rational(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if self.q:
            raise ValueError(f"{self} is irrational")
        return Fraction(self.p, self.r)

    def conjugate(self) -> "QuadraticNumber":
        return QuadraticNumber(self.p, -self.q, self.r, self.D)

    def norm(self) -> Fraction:
        a, b = self.rational_part, self.irrational_part
        return a * a - b * b * self.D

    def sign(self) -> int:
        return _sign(self.p, self.q, self.D)

    # -- arithmetic ------------------------------------------------------
    def _field(self, other: "QuadraticNumber") -> int:
        if self.D == other.D or other.q == 0:
            return self.D
        if self.q == 0:
            return other.D
        raise FieldMismatchError(f"Q(sqrt({self.D})) vs Q(sqrt({other.D}))")

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        D = self._field(other)
        return QuadraticNumber(self.p * other.r + other.p * self.r,
                               self.q * other.r + other.q * self.r,
                               self.r * other.r, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadraticNumber(-self.p, -self.q, self.r, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        D = self._field(other)
        return QuadraticNumber(self.p * other.p + self.q * other.q * D,
                               self.p * other.q + self.q * other.p,
                               self.r * other.r, D)

    __rmul__ = __mul__

    def inverse(self) -> "QuadraticNumber":
        # 1/x = r*conj(p + q sqrt D) / (p^2 - q^2 D)
        n = self.p * self.p - self.q * self.q * self.D
        if n == 0:
            raise ZeroDivisionError("division by zero quadratic number")
        return QuadraticNumber(self.r * self.p, -self.r * self.q, n, self.D)

    def __truediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        self._field(other)
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result, base = QuadraticNumber(1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # -- order -----------------------------------------------------------
    def _cmp(self, other) -> int:
        other = _coerce(other)
        if other is NotImplemented:
            raise TypeError(f"cannot compare QuadraticNumber with {type(other).__name__}")
        return (self - other).sign()

    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return (self.p, self.q, self.r, self.D) == (other.p, other.q, other.r, other.D)

    def __hash__(self):
        if self.q == 0:
            return hash(Fraction(self.p, self.r))
        return hash((self.p, self.q, self.r, self.D))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __floor__(self):
        return qnum_floor(self)

    def __float__(self):
        return float(self.approx(256))

    def __bool__(self):
        return self.p != 0 or self.q != 0

    def approx(self, bits: int = 128) -> Fraction:
        """Rational approximation with absolute error below ``2**-bits / r``."""
        if self.q == 0:
            return Fraction(self.p, self.r)
        scale = 1 << bits
        root = math.isqrt(self.q * self.q * self.D * scale * scale)
        root = root if self.q > 0 else -root
        return Fraction(self.p * scale + root, self.r * scale)

    # -- text / JSON -----------------------------------------------------
    def __str__(self):
        if self.q == 0:
            return str(self.p) if self.r == 1 else f"{self.p}/{self.r}"
        if self.q == 1:
            surd = f"sqrt({self.D})"
        elif self.q == -1:
            surd = f"-sqrt({self.D})"
        else:
            surd = f"{self.q}*sqrt({self.D})"
        if self.p == 0:
            body = surd
        else:
            body = f"{self.p}{surd}" if surd.startswith("-") else f"{self.p}+{surd}"
        if self.r == 1:
            return body
        if self.p == 0 and self.q in (1, -1):
            return f"{body}/{self.r}"
        return f"({body})/{self.r}"

    def __repr__(self):
        return f"QuadraticNumber({self.p}, {self.q}, {self.r}, {self.D})"

    def to_json(self) -> dict:
        return {"p": self.p, "q": self.q, "r": self.r, "D": self.D}

    @classmethod
    def from_json(cls, obj) -> "QuadraticNumber":
        if isinstance(obj, str):
            return parse_qnumber(obj)
        if isinstance(obj, int) and not isinstance(obj, bool):
            return cls(obj)
        if isinstance(obj, dict):
            try:
                return qnum_normalize(int(obj["p"]), int(obj.get("q", 0)),
                                      int(obj.get("r", 1)), int(obj.get("D", 1)))
            except (KeyError, TypeError, ValueError) as exc:
                raise InputError(f"bad quadratic number object {obj!r}: {exc}") from None
        raise InputError(f"cannot read a quadratic number from {obj!r}")


def _canonical(p, q, r, D):
    for name, v in (("p", p), ("q", q), ("r", r), ("D", D)):
        if not isinstance(v, int) or isinstance(v, bool):
            raise TypeError(f"{name} must be an int, got {type(v).__name__}")
    if r == 0:
        raise ZeroDivisionError("zero denominator")
    if D < 0:
        raise UnsupportedFieldError(f"negative radicand {D}: only real quadratic fields are supported")
    s, D = squarefree_decomposition(D)
    q *= s
    if D == 1:
        p, q = p + q, 0
    if q == 0:
        D = 1
    if r < 0:
        p, q, r = -p, -q, -r
    g = math.gcd(math.gcd(p, q), r)
    return p // g, q // g, r // g, D


def _sign(p: int, q: int, D: int) -> int:
    """Sign of ``p + q*sqrt(D)`` by exact integer comparison."""
    sp = (p > 0) - (p < 0)
    sq = (q > 0) - (q < 0)
    if sq == 0 or sp == sq:
        return sp or sq
    if sp == 0:
        return sq
    pp, qq = p * p, q * q * D
    if pp == qq:
        return 0
    return sp if pp > qq else sq


def _coerce(x):
    if isinstance(x, QuadraticNumber):
        return x
    if isinstance(x, bool):
        return NotImplemented
    if isinstance(x, int):
        return QuadraticNumber(x)
    if isinstance(x, Fraction):
        return QuadraticNumber(x.numerator, 0, x.denominator)
    return NotImplemented


def as_qnumber(x) -> QuadraticNumber:
    y = _coerce(x)
    if y is NotImplemented:
        raise TypeError(f"not an exact number: {x!r}")
    return y


def qnum_normalize(p: int, q: int, r: int, D: int) -> QuadraticNumber:
    return QuadraticNumber(p, q, r, D)


def qnum_arith(op: str, x, y) -> QuadraticNumber:
    x, y = as_qnumber(x), as_qnumber(y)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y
    raise ValueError(f"unknown operation {op!r}")


def qnum_compare(x, y) -> int:
    """-1, 0 or 1 as ``x`` is less than, equal to or greater than ``y``."""
    x, y = as_qnumber(x), as_qnumber(y)
    x._field(y)
    return x._cmp(y)


def qnum_floor(x) -> int:
    x = as_qnumber(x)
    if x.q == 0:
        return x.p // x.r
    # q*sqrt(D) lies strictly between consecutive integers t and t+1
    t = math.isqrt(x.q * x.q * x.D)
    low = x.p + t if x.q > 0 else x.p - t - 1
    return low // x.r


_TERM = re.compile(r"[+-]?[^+-]+")
_SURD = re.compile(r"^(?:(\d+)\*?)?sqrt\((\d+)\)$")


def parse_qnumber(text: str) -> QuadraticNumber:
    """Parse ``"(p+q*sqrt(D))/r"`` and its abbreviations (``"6+sqrt(37)"``,
    ``"sqrt(2)"``, ``"5/2"``, ``"-3"``)."""
    s = re.sub(r"\s+", "", str(text))
    if not s:
        raise InputError("empty number literal")
    den = 1
    m = re.match(r"^(.*)/(\d+)$", s)
    if m and (m.group(1).endswith(")") or "sqrt" not in m.group(1)):
        s, den = m.group(1), int(m.group(2))
    if s.startswith("(") and s.endswith(")") and not _SURD.match(s.lstrip("+-")):
        s = s[1:-1]
    p, q, D = 0, 0, 1
    terms = _TERM.findall(s)
    if "".join(terms) != s or not terms:
        raise InputError(f"cannot parse number literal {text!r}")
    for term in terms:
        sign = -1 if term.startswith("-") else 1
        body = term.lstrip("+-")
        if body.isdigit():
            p += sign * int(body)
            continue
        sm = _SURD.match(body)
        if not sm:
            raise InputError(f"cannot parse term {term!r} in {text!r}")
        coeff = int(sm.group(1)) if sm.group(1) else 1
        radicand = int(sm.group(2))
        if q and radicand != D:
            raise InputError(f"mixed radicands in {text!r}")
        q += sign * coeff
        D = radicand
    if den == 0:
        raise InputError(f"zero denominator in {text!r}")
    return QuadraticNumber(p, q, den, D)
