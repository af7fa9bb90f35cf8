"""Continued fractions: quadratic surds, tails, and generalized fractions.

Regular continued fractions of quadratic irrationals are computed with the
classical surd recursion on states ``(P + sqrt(d)) / Q``; two irrationals
are GL(2, Z)-equivalent exactly when their expansions share a tail.

For generalized fractions ``b_0 + K(a_n / b_n)`` the even and odd
convergents are tracked separately.  The equivalent fraction
``b_0 + K(1 / k_n)`` with ``k_1 = b_1/a_1`` and
``k_n = b_n b_{n-1} / (a_n k_{n-1})`` has the same convergents, and the two
convergent subsequences share one limit iff ``sum k_n`` diverges.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import matrices as mx
from .errors import InputError, RefusedError
from .presentations import IntegerSequenceSpec
from .qnumber import QuadraticNumber, as_qnumber

# ---------------------------------------------------------------------------
# regular continued fractions


@dataclass(frozen=True)
class CFExpansion:
    """``[preperiod; period, period, ...]``, canonical on construction.

    The first entry (of the preperiod, or of the period if the preperiod is
    empty) is the integer part and may be any integer unless it sits in the
    period; all later entries are >= 1.
    """

    preperiod: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        pre, per = list(self.preperiod), list(self.period)
        terms = pre + per
        if not terms:
            raise InputError("empty continued fraction")
        if any(not isinstance(x, int) or isinstance(x, bool) for x in terms):
            raise InputError("continued fraction terms must be integers")
        if any(x < 1 for x in terms[1:]) or any(x < 1 for x in per):
            raise InputError("partial quotients after the first must be positive")
        if per:
            per = per[:_least_period(per)]
            while pre and pre[-1] == per[-1]:
                pre.pop()
                per = per[-1:] + per[:-1]
        object.__setattr__(self, "preperiod", tuple(pre))
        object.__setattr__(self, "period", tuple(per))

    def terms(self, n: int) -> tuple:
        out = list(self.preperiod[:n])
        i = 0
        while len(out) < n:
            if not self.period:
                break
            out.append(self.period[i % len(self.period)])
            i += 1
        return tuple(out)

    def __str__(self):
        return f"period: [{','.join(map(str, self.period))}], preperiod: [{','.join(map(str, self.preperiod))}]"


def _least_period(xs: Sequence[int]) -> int:
    n = len(xs)
    for p in range(1, n + 1):
        if n % p == 0 and all(xs[i] == xs[i % p] for i in range(n)):
            return p
    return n


def _floor_state(P: int, Q: int, d: int) -> int:
    """floor((P + sqrt(d)) / Q) for non-square ``d``."""
    t = math.isqrt(d)
    return (P + t) // Q if Q > 0 else (P + t + 1) // Q


def cf_expand_quadratic(x) -> CFExpansion:
    """Continued fraction of a quadratic irrational (eventually periodic)."""
    x = as_qnumber(x)
    if x.is_rational():
        raise InputError(f"{x} is rational; only quadratic irrationals have a periodic expansion")
    # x = (P + sqrt(d)) / Q with Q | d - P^2
    d = x.q * x.q * x.D
    P, Q = (x.p, x.r) if x.q > 0 else (-x.p, -x.r)
    if (d - P * P) % Q:
        P, Q, d = P * abs(Q), Q * abs(Q), d * Q * Q
    seen: dict[tuple[int, int], int] = {}
    quotients: list[int] = []
    while (P, Q) not in seen:
        assert (d - P * P) % Q == 0
        seen[(P, Q)] = len(quotients)
        a = _floor_state(P, Q, d)
        quotients.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
    start = seen[(P, Q)]
    return CFExpansion(tuple(quotients[:start]), tuple(quotients[start:]))


def _mobius(m, y):
    """Apply the matrix ``m`` to ``y`` as ``(m00 y + m01) / (m10 y + m11)``."""
    return (m[0][0] * y + m[0][1]) / (m[1][0] * y + m[1][1])


def cf_value(e: CFExpansion) -> QuadraticNumber:
    """Exact value of an eventually periodic continued fraction."""
    if not e.period:
        raise InputError("finite continued fractions are not supported (empty period)")
    (p, p1), (q, q1) = mx.product(*(((n, 1), (1, 0)) for n in e.period))
    # tail y = (p y + p1) / (q y + q1), the root > 1 of q y^2 + (q1 - p) y - p1
    y = QuadraticNumber(p - q1, 1, 2 * q, (q1 - p) ** 2 + 4 * q * p1)
    assert y > 1
    if not e.preperiod:
        return y
    return _mobius(mx.product(*(((n, 1), (1, 0)) for n in e.preperiod)), y)


def tail_equivalent(e1: CFExpansion, e2: CFExpansion) -> bool:
    """True iff the (least) periods are cyclic rotations of each other."""
    if not e1.period or not e2.period:
        raise InputError("tail equivalence needs non-empty periods")
    a, b = e1.period, e2.period
    if len(a) != len(b):
        return False
    doubled = a + a
    return any(doubled[i:i + len(b)] == b for i in range(len(a)))


def sequences_share_tail(s1: IntegerSequenceSpec, s2: IntegerSequenceSpec) -> bool:
    """Tail equivalence read directly off two eventually periodic sequences."""
    return tail_equivalent(CFExpansion(s1.preperiod, s1.period), CFExpansion(s2.preperiod, s2.period))


def expansion_of(seq: IntegerSequenceSpec) -> CFExpansion:
    return CFExpansion(seq.preperiod, seq.period)


@dataclass(frozen=True)
class Convergent:
    index: int
    p: int
    q: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _terms(seq, n: int, name: str) -> tuple:
    if isinstance(seq, IntegerSequenceSpec):
        if seq.length is not None and seq.length < n:
            raise InputError(f"{name} has {seq.length} terms, {n} needed")
        return seq.head(n)
    seq = tuple(seq)
    if len(seq) < n:
        raise InputError(f"{name} has {len(seq)} terms, {n} needed")
    return seq[:n]


def cf_convergents(N, k: int) -> list[Convergent]:
    """Convergents ``p_0/q_0 .. p_k/q_k`` of ``[n_0; n_1, ...]``."""
    if k < 0:
        raise InputError("k must be >= 0")
    ns = _terms(N, k + 1, "N")
    out = []
    p0, q0, p1, q1 = 1, 0, ns[0], 1
    out.append(Convergent(0, p1, q1))
    for i in range(1, k + 1):
        p0, q0, p1, q1 = p1, q1, ns[i] * p1 + p0, ns[i] * q1 + q0
        out.append(Convergent(i, p1, q1))
    prod = mx.product(*(((n, 1), (1, 0)) for n in ns))
    prev = (out[-2].p, out[-2].q) if k else (1, 0)
    assert prod == ((out[-1].p, prev[0]), (out[-1].q, prev[1])), "convergent/matrix identity"
    return out


# ---------------------------------------------------------------------------
# generalized continued fractions


def gcf_convergents(alpha, beta, k: int) -> list[Convergent]:
    """Convergents ``A_j / B_j`` (``j = 0..k``) of ``b_0 + K(a_n / b_n)``.

    ``alpha`` lists ``a_1, a_2, ...`` and ``beta`` lists ``b_0, b_1, ...``.
    """
    if k < 0:
        raise InputError("k must be >= 0")
    a = _terms(alpha, k, "alpha")
    b = _terms(beta, k + 1, "beta")
    A0, B0, A1, B1 = 1, 0, b[0], 1
    out = [Convergent(0, A1, B1)]
    for j in range(1, k + 1):
        A0, B0, A1, B1 = A1, B1, b[j] * A1 + a[j - 1] * A0, b[j] * B1 + a[j - 1] * B0
        out.append(Convergent(j, A1, B1))
    prev = (out[-2].p, out[-2].q) if k else (1, 0)
    assert A1 * prev[1] - prev[0] * B1 == (-1) ** (k + 1) * math.prod(a), "determinant identity"
    return out


def gcf_k_sequence(alpha, beta, count: int) -> list[Fraction]:
    """``k_1 .. k_count`` of the equivalent fraction ``b_0 + K(1 / k_n)``."""
    if count < 1:
        raise InputError("count must be >= 1")
    a = _terms(alpha, count, "alpha")
    b = _terms(beta, count + 1, "beta")
    ks = [Fraction(b[1], a[0])]
    for n in range(2, count + 1):
        ks.append(Fraction(b[n] * b[n - 1]) / (a[n - 1] * ks[-1]))
    return ks


class SumClass(enum.Enum):
    DIVERGES = "SumDiverges"
    CONVERGES = "SumConverges"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class KSequence:
    terms: tuple
    classification: SumClass
    rule_used: str
    ratio: Fraction | None = None  # geometric ratio behind a R3 verdict
    caveat: str | None = None

    def __post_init__(self):
        ks = self.terms
        assert all(k > 0 for k in ks)


def _available(alpha: IntegerSequenceSpec, beta: IntegerSequenceSpec) -> int | None:
    la, lb = alpha.length, beta.length
    lims = [x for x in (la, None if lb is None else lb - 1) if x is not None]
    return min(lims) if lims else None


GEOMETRIC_TAIL_TERMS = 5


def gcf_classify(alpha: IntegerSequenceSpec, beta: IntegerSequenceSpec, tail_rule: str | None = None) -> KSequence:
    """Decide whether ``sum k_n`` diverges, by the first applicable rule.

    R1  both sequences eventually periodic: ``k_{n+2p} / k_n`` for both
        parities inside the periodic regime (``p`` the joint period).
    R2  tail rule ``bn_gt_an`` (``b_n > a_n`` eventually): diverges.
    R3  explicit data whose last five ``k`` terms have one constant ratio
        below 1: converges, assuming the geometric tail continues.
    R4  otherwise inconclusive.
    """
    if alpha.is_periodic and beta.is_periodic:
        p = math.lcm(len(alpha.period), len(beta.period))
        n0 = max(len(alpha.preperiod), len(beta.preperiod)) + 1
        ks = gcf_k_sequence(alpha, beta, n0 + 2 * p + 1)
        rho_even = ks[n0 + 2 * p - 1] / ks[n0 - 1]
        rho_odd = ks[n0 + 2 * p] / ks[n0]
        # the two multipliers multiply to 1, so at most one can be < 1
        assert rho_even * rho_odd == 1
        cls = SumClass.CONVERGES if max(rho_even, rho_odd) < 1 else SumClass.DIVERGES
        return KSequence(tuple(ks), cls, "R1-periodic", max(rho_even, rho_odd))
    n = _available(alpha, beta)
    if tail_rule == "bn_gt_an":
        ks = gcf_k_sequence(alpha, beta, n) if n else gcf_k_sequence(alpha, beta, 8)
        return KSequence(tuple(ks), SumClass.DIVERGES, "R2-bn_gt_an", caveat="tail rule asserted by the input")
    if n is None or n < 1:
        return KSequence((), SumClass.INCONCLUSIVE, "R4")
    ks = gcf_k_sequence(alpha, beta, n)
    m = GEOMETRIC_TAIL_TERMS
    if n >= m:
        tail = ks[-m:]
        ratios = {tail[i + 1] / tail[i] for i in range(m - 1)}
        if len(ratios) == 1:
            (r,) = ratios
            if r < 1:
                return KSequence(tuple(ks), SumClass.CONVERGES, "R3-geometric-tail", r,
                                 caveat="geometric-tail: the constant ratio is assumed to persist beyond the data")
    return KSequence(tuple(ks), SumClass.INCONCLUSIVE, "R4")


@dataclass(frozen=True)
class Enclosure:
    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        assert self.lo <= self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, x) -> bool:
        return self.lo <= x <= self.hi

    def scaled(self, c: Fraction) -> "Enclosure":
        assert c > 0
        return Enclosure(self.lo * c, self.hi * c)

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2


@dataclass(frozen=True)
class GCFLimits:
    """``even is None``: one limit, enclosed by ``single``.  Otherwise two."""

    single: Enclosure | None = None
    even: Enclosure | None = None
    odd: Enclosure | None = None
    depth: int = 0

    @property
    def count(self) -> int:
        return 1 if self.single is not None else 2


def _check_van_vleck(conv: list[Convergent]) -> None:
    ev = [c.value for c in conv if c.index % 2 == 0]
    od = [c.value for c in conv if c.index % 2 == 1]
    assert all(x < y for x, y in zip(ev, ev[1:])), "even convergents must increase"
    assert all(x > y for x, y in zip(od, od[1:])), "odd convergents must decrease"
    if ev and od:
        assert max(ev) < min(od), "even convergents must stay below odd ones"


def _extended_k(ks: Sequence[Fraction], upto: int, ratio: Fraction) -> list[Fraction]:
    """``k_1 .. k_upto``: data first, then the geometric model ``k_{L+i} = k_L r^i``."""
    out = list(ks)
    while len(out) < upto:
        out.append(out[-1] * ratio)
    return out


def _parity_tail(ks: Sequence[Fraction], first: int, parity: int, ratio: Fraction) -> Fraction:
    """Upper bound for ``sum k_j`` over ``j >= first`` with ``j % 2 == parity``.

    Known terms are summed exactly; past the data the geometric model is
    summed in closed form.
    """
    L = len(ks)  # ks[j-1] = k_j
    total = sum((ks[j - 1] for j in range(first, L + 1) if j % 2 == parity), Fraction(0))
    kL, r2 = ks[L - 1], ratio * ratio
    total += kL * (r2 if L % 2 == parity else ratio) / (1 - r2)
    return total


def gcf_limits(alpha: IntegerSequenceSpec, beta: IntegerSequenceSpec, depth: int,
               ksequence: KSequence | None = None, tail_rule: str | None = None) -> GCFLimits:
    """Certified enclosures of the limit(s) of the convergents ``A_n / B_n``."""
    if depth < 4:
        raise InputError("depth must be at least 4")
    ksq = ksequence or gcf_classify(alpha, beta, tail_rule)
    if ksq.classification is SumClass.INCONCLUSIVE:
        raise RefusedError("convergence of sum k_n could not be decided (rule ladder R1-R3 inconclusive); "
                           "supply eventually periodic data, more terms, or a tail rule")
    conv = gcf_convergents(alpha, beta, depth)
    _check_van_vleck(conv)
    last_even = conv[depth if depth % 2 == 0 else depth - 1]
    last_odd = conv[depth if depth % 2 == 1 else depth - 1]
    if ksq.classification is SumClass.DIVERGES:
        return GCFLimits(single=Enclosure(last_even.value, last_odd.value), depth=depth)
    if ksq.ratio is None or ksq.rule_used != "R3-geometric-tail":
        raise RefusedError("no tail model available to bound the two limits")
    # Equivalent fraction b_0 + K(1/k_j): convergents P_j/Q_j = A_j/B_j and
    # P_j/Q_j - P_{j-2}/Q_{j-2} = (-1)^j k_j / (Q_j Q_{j-2}).  A limit sits at
    # the last convergent of its parity plus a tail of same-signed terms; the
    # first tail term is exact, the rest is bounded using Q_j >= Q_{j-2}.
    ks = _extended_k(ksq.terms, depth + 2, ksq.ratio)
    P, Q = [Fraction(1), Fraction(conv[0].p)], [Fraction(0), Fraction(1)]
    for j in range(1, depth + 3):
        P.append(ks[j - 1] * P[-1] + P[-2])
        Q.append(ks[j - 1] * Q[-1] + Q[-2])
    P, Q = P[1:], Q[1:]
    assert all(P[j] / Q[j] == conv[j].value for j in range(depth + 1))

    def tail(n: int) -> tuple[Fraction, Fraction]:
        first = ks[n + 1] / (Q[n + 2] * Q[n])
        rest = _parity_tail(ks, n + 4, n % 2, ksq.ratio) / (Q[n + 2] * Q[n + 2])
        return first, first + rest

    ne, no = last_even.index, last_odd.index
    lo_e, hi_e = tail(ne)
    lo_o, hi_o = tail(no)
    even = Enclosure(last_even.value + lo_e, last_even.value + hi_e)
    odd = Enclosure(last_odd.value - hi_o, last_odd.value - lo_o)
    if not even.hi < odd.lo:
        raise RefusedError(f"enclosures at depth {depth} overlap; increase the depth")
    return GCFLimits(even=even, odd=odd, depth=depth)
