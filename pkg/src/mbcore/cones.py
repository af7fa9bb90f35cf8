"""Exact polyhedral cone utilities on the non-negative orthant.

Rays are tuples of exact numbers (``int``/``Fraction``).  Redundancy is
decided by exact linear feasibility (a Phase-1 simplex over ``Fraction``
with Bland's rule), and projective distances are carried as the rational
cross-ratio ``kappa``; the Hilbert distance is ``log(kappa)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import matrices as mx
from .qnumber import QuadraticNumber


def _div(a, b):
    if isinstance(a, QuadraticNumber) or isinstance(b, QuadraticNumber):
        return a / b
    return Fraction(a) / b


def normalize(v: Sequence) -> tuple:
    """Scale a non-negative, non-zero vector to coordinate sum 1."""
    s = sum(v)
    if s == 0:
        raise ValueError("zero vector has no ray")
    return tuple(_div(x, s) for x in v)


def in_cone(target: Sequence, generators: Sequence[Sequence]) -> bool:
    """Is ``target`` a non-negative combination of ``generators``?  Exact."""
    n = len(target)
    if not generators:
        return all(x == 0 for x in target)
    m = len(generators)
    # rows: sum_j lam_j g_j[i] + s_i = |target_i|, with the row sign fixed so rhs >= 0
    rows = []
    for i in range(n):
        sgn = -1 if target[i] < 0 else 1
        rows.append([Fraction(sgn * g[i]) for g in generators] + [Fraction(int(k == i)) for k in range(n)]
                    + [Fraction(sgn * target[i])])
    basis = [m + i for i in range(n)]
    ncols = m + n
    # Phase-1 objective: minimise the sum of artificials; reduced costs below
    cost = [0] * m + [1] * n
    while True:
        # reduced cost r_c = cost_c - sum_i cost_{basis_i} * a_ic
        entering = None
        for c in range(ncols):
            if c in basis:
                continue
            rc = cost[c] - sum(cost[basis[i]] * rows[i][c] for i in range(n))
            if rc < 0:
                entering = c
                break
        if entering is None:
            break
        ratios = [(rows[i][-1] / rows[i][entering], basis[i], i) for i in range(n) if rows[i][entering] > 0]
        if not ratios:
            break  # unbounded direction; cannot happen in Phase 1 (objective bounded below)
        _, _, leave = min(ratios)
        piv = rows[leave][entering]
        rows[leave] = [x / piv for x in rows[leave]]
        for i in range(n):
            if i != leave and rows[i][entering] != 0:
                f = rows[i][entering]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[leave])]
        basis[leave] = entering
    residual = sum(rows[i][-1] for i in range(n) if basis[i] >= m)
    return residual == 0


def extreme_rays(rays: Sequence[Sequence]) -> list:
    """Drop every ray that lies in the cone of the remaining ones.

    Order-stable; among exact duplicates the last occurrence survives.
    """
    kept = [tuple(r) for r in rays]
    i = 0
    while i < len(kept):
        others = kept[:i] + kept[i + 1:]
        if in_cone(kept[i], others):
            kept.pop(i)
        else:
            i += 1
    return kept


def cone_contains(outer: Sequence[Sequence], inner: Sequence[Sequence]) -> bool:
    return all(in_cone(r, outer) for r in inner)


# ---------------------------------------------------------------------------
# Hilbert projective metric


def cross_ratio(x: Sequence, y: Sequence):
    """``exp(d_H(x, y))`` as an exact number; ``None`` when infinite.

    Vectors with the same zero pattern are compared on their common support.
    """
    support_x = [i for i, v in enumerate(x) if v != 0]
    support_y = [i for i, v in enumerate(y) if v != 0]
    if support_x != support_y or not support_x:
        return None
    ratios = [_div(x[i], y[i]) for i in support_x]
    return max(ratios) / min(ratios)


def diameter_kappa(rays: Sequence[Sequence]):
    """Largest pairwise cross-ratio of a ray set (``None`` = infinite)."""
    best = Fraction(1)
    for i in range(len(rays)):
        for j in range(i + 1, len(rays)):
            k = cross_ratio(rays[i], rays[j])
            if k is None:
                return None
            best = max(best, k)
    return best


def log_kappa(kappa) -> float:
    """Display value of ``log(kappa)``; accurate for kappa near 1."""
    if kappa is None:
        return math.inf
    if isinstance(kappa, QuadraticNumber):
        return math.log1p(float((kappa - 1).approx(256)))
    return math.log1p(float(Fraction(kappa) - 1))


def hilbert_distance(x: Sequence, y: Sequence) -> float:
    """Hilbert projective distance between two rays given exactly."""
    return log_kappa(cross_ratio(x, y))


def matrix_kappa(b) -> Fraction:
    """Projective diameter of ``b`` applied to the orthant, as a cross-ratio:
    ``max (b_ij b_kl) / (b_il b_kj)`` over rows ``i, k`` and columns ``j, l``."""
    if not mx.is_positive(b):
        raise ValueError("cross-ratio diameter needs a positive matrix")
    n = len(b)
    best = Fraction(1)
    for i in range(n):
        for k in range(n):
            for j in range(n):
                for l in range(n):
                    best = max(best, Fraction(b[i][j] * b[k][l], b[i][l] * b[k][j]))
    return best


def sqrt_upper(x: Fraction, bits: int = 64) -> Fraction:
    """Rational upper bound on ``sqrt(x)``, within ``2**-bits``."""
    scale = 1 << bits
    num, den = x.numerator, x.denominator
    return Fraction(math.isqrt(num * den * scale * scale) + 1, den * scale)


@dataclass(frozen=True)
class ContractionCertificate:
    """Birkhoff contraction witnessed by a positive block.

    ``tau`` is a rational upper bound for ``(sqrt(kappa)-1)/(sqrt(kappa)+1)``.
    After ``applications`` consecutive positive blocks the image cone has
    Hilbert diameter at most ``tau**(applications - 1) * log(kappa)``.
    """

    block: tuple
    kappa: Fraction
    tau: Fraction
    applications: int

    def __post_init__(self):
        assert 0 <= self.tau < 1

    @classmethod
    def for_block(cls, block, applications: int = 1) -> "ContractionCertificate":
        kappa = matrix_kappa(block)
        s = sqrt_upper(kappa)
        return cls(block, kappa, (s - 1) / (s + 1), applications)

    def diameter_bound(self) -> float:
        return float(self.tau) ** (self.applications - 1) * log_kappa(self.kappa)


def positive_blocks(ms: Sequence) -> list[tuple]:
    """Greedy split of a matrix sequence into consecutive blocks with positive
    products; returns ``(start, length, product)`` for each complete block."""
    out, start, acc = [], 0, None
    for i, m in enumerate(ms):
        acc = m if acc is None else mx.mat_mul(acc, m)
        if mx.is_positive(acc):
            out.append((start, i - start + 1, acc))
            start, acc = i + 1, None
    return out


def certificate_for(ms: Sequence) -> ContractionCertificate | None:
    blocks = positive_blocks(ms)
    if not blocks:
        return None
    worst = max(blocks, key=lambda b: matrix_kappa(b[2]))
    cert = ContractionCertificate.for_block(worst[2], len(blocks))
    return cert
