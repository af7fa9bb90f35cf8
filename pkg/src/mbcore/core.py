"""Homology cores, ergodic counts and the GL(2) distinguishers.

The core at place ``k`` is the nested intersection of the images of the
non-negative orthant under the prefix products ``M_k M_{k+1} ... M_{n-1}``.
Periodic two-dimensional towers get an exact answer in a quadratic field;
everything else is approximated by the cone of an ``n``-step product, with
a Hilbert-metric diameter carried as an exact cross-ratio.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import cones
from . import matrices as mx
from .cfrac import cf_expand_quadratic, gcf_classify, gcf_limits, tail_equivalent
from .errors import InputError, RefusedError, UnsupportedFieldError
from .presentations import (
    GCFTower,
    MatrixTower,
    StabilityClass,
    compile_spec,
    stability_class,
)
from .qnumber import QuadraticNumber, as_qnumber

log = logging.getLogger(__name__)

POSITIVITY_NOTE = ("positive cone modelled as the non-negative orthant in the declared basis; "
                   "the full cone of positive and negative classes is its symmetrization")
EXACT_KINDS = ("line", "sector", "rank1")
MAX_REFINE_STEPS = 4096


@dataclass(frozen=True)
class CoreResult:
    """One homology core.

    ``kind`` is ``line``, ``sector``, ``rank1`` or ``numeric``.  Exact rays
    are tuples of :class:`QuadraticNumber` with last coordinate 1; numeric
    rays are tuples of ``Fraction`` with coordinate sum 1.  Cores whose
    endpoints are only known by enclosure (generalized continued fractions)
    leave ``rays`` empty and carry slope enclosures instead, each standing
    for the ray ``(x, 1)``.
    """

    kind: str
    place: int
    dim: int
    rays: tuple = ()
    eigenvalue: QuadraticNumber | None = None
    field_D: int | None = None
    exact: bool = True
    enclosures: tuple = ()
    kappa: Fraction | None = None  # None: infinite diameter
    iterations: int = 0
    certificate: cones.ContractionCertificate | None = None
    stable: bool = False  # numeric cone certified invariant under further steps
    warnings: tuple = ()
    note: str = POSITIVITY_NOTE

    def __post_init__(self):
        if self.kind == "line" and self.exact:
            assert all(x > 0 for x in self.rays[0])
        if self.kind == "sector" and self.enclosures:
            assert self.enclosures[0].hi < self.enclosures[1].lo

    @property
    def hilbert_diameter(self) -> float:
        return cones.log_kappa(self.kappa)

    @property
    def slope(self):
        if self.kind != "line" or not self.rays:
            raise ValueError("only exact line cores have a slope")
        x, y = self.rays[0]
        return x / y


def _scale_to_last(v: Sequence) -> tuple:
    pivot = v[-1] if v[-1] != 0 else next((x for x in v if x != 0), None)
    if pivot is None:
        raise InputError("core ray collapsed to zero (a prefix map kills the Perron-Frobenius direction)")
    return tuple(as_qnumber(x) / pivot for x in v)


def _rank_one(place: int, tower) -> CoreResult:
    lam = QuadraticNumber(mx.product(*tower.cycle)[0][0]) if tower.cycle else None
    return CoreResult("rank1", place, 1, ((QuadraticNumber(1),),), lam, 1)


def core_exact(spec, place: int = 0, tolerance: float = 1e-12) -> CoreResult:
    """Exact core of an eventually periodic tower at ``place``.

    Rank one gives a half-line.  In dimension 2 with primitive cycle
    product the core is the Perron-Frobenius ray of the cycle rotated to the
    place (pushed through any remaining prefix maps).  Higher dimensions are
    refined numerically until the diameter drops below ``tolerance``.
    """
    if place < 0:
        raise InputError("place must be >= 0", "place")
    if isinstance(spec, GCFTower) and not (spec.alpha.is_periodic and spec.beta.is_periodic):
        return gcf_core(spec, place)
    tower = compile_spec(spec)
    if tower.is_finite:
        raise InputError("explicit finite tower has no exact core; use core_numeric")
    t = tower.shifted(place)
    if t.dim == 1:
        return _rank_one(place, t)
    cp = mx.product(*t.cycle)
    if not mx.is_primitive(cp):
        msg = "cycle product is not primitive; core may be a sector or larger, computed numerically"
        log.warning(msg)
        res = core_numeric(spec, place)
        return _with_warning(res, msg)
    if t.dim > 2:
        return _refine(spec, place, tolerance)
    lam, v = mx.pf_eigen_2x2(cp)
    if t.prefix:
        v = mx.apply(t.prefix_product(0, len(t.prefix)), v)
    ray = _scale_to_last(v)
    return CoreResult("line", place, 2, (ray,), lam, lam.D)


def _with_warning(res: CoreResult, msg: str) -> CoreResult:
    d = dict(res.__dict__)
    d["warnings"] = res.warnings + (msg,)
    return CoreResult(**d)


def _refine(spec, place: int, tolerance: float) -> CoreResult:
    steps = 8
    while True:
        res = core_numeric(spec, place, steps)
        if res.kappa is not None and res.hilbert_diameter <= tolerance:
            return res
        if steps >= MAX_REFINE_STEPS:
            return _with_warning(res, f"diameter still above {tolerance} after {steps} steps")
        steps *= 2


def gcf_core(spec: GCFTower, place: int = 0, depth: int = 20) -> CoreResult:
    """Core of a generalized continued fraction tower from cf-engine limits.

    Divergent ``sum k_n`` gives one line, a convergent one the sector between
    the even and odd limits.  From place ``k >= 1`` the tower is the fraction
    with data shifted by ``k`` followed by ``diag(1, a_k)``, so slopes scale
    by ``1/a_k``.
    """
    alpha, beta = spec.alpha, spec.beta
    scale = Fraction(1)
    if place:
        scale = Fraction(1, alpha[place - 1])
        alpha, beta = alpha.shift(place), beta.shift(place)
    avail = alpha.length
    depth = depth if avail is None else min(depth, avail)
    ks = gcf_classify(alpha, beta, spec.tail_rule)
    lim = gcf_limits(alpha, beta, depth, ks, spec.tail_rule)
    warnings = (ks.caveat,) if ks.caveat else ()
    if lim.count == 1:
        enc = (lim.single.scaled(scale),)
        return CoreResult("line", place, 2, exact=False, enclosures=enc, iterations=depth, warnings=warnings)
    enc = (lim.even.scaled(scale), lim.odd.scaled(scale))
    return CoreResult("sector", place, 2, exact=False, enclosures=enc, iterations=depth, warnings=warnings)


def cone_rays(ms: Sequence, dim: int) -> tuple[list, list]:
    """Normalized extreme rays of the image of the orthant under ``prod(ms)``,
    plus the indices of zero columns."""
    p = mx.product(*ms, n=dim)
    rays, dropped = [], []
    for j in range(dim):
        col = mx.column(p, j)
        if any(col):
            rays.append(cones.normalize(col))
        else:
            dropped.append(j)
    return cones.extreme_rays(rays), dropped


def core_numeric(spec, place: int = 0, n_steps: int = 30, tolerance: float | None = None) -> CoreResult:
    """Cone of the ``n_steps`` prefix product from ``place``, reduced to its
    extreme rays, with its Hilbert diameter and a contraction certificate
    when a positive block occurs.  ``tolerance`` is accepted for interface
    symmetry; refinement lives in :func:`core_exact`."""
    if place < 0 or n_steps < 1:
        raise InputError("place must be >= 0 and steps >= 1")
    tower = compile_spec(spec)
    t = tower.shifted(place)
    warnings = []
    avail = t.available(0)
    n = n_steps
    if avail is not None and avail < n_steps:
        n = avail
        warnings.append(f"only {avail} bonding maps available from place {place}; used {avail} steps")
    ms = t.matrices(0, n)
    rays, dropped = cone_rays(ms, t.dim)
    for j in dropped:
        warnings.append(f"degenerate direction: basis class {t.labels[j]} is killed by the product; column dropped")
    if not rays:
        warnings.append("every direction is killed by the product; the cone is {0}")
    kappa = cones.diameter_kappa(rays) if len(rays) > 1 else Fraction(1)
    stable = False
    if not t.is_finite and n >= len(t.prefix) and mx.det(mx.product(*ms, n=t.dim)) != 0:
        more, _ = cone_rays(t.matrices(0, n + len(t.cycle)), t.dim)
        stable = cones.cone_contains(more, rays)
    return CoreResult("numeric", place, t.dim, tuple(rays), exact=False, kappa=kappa, iterations=n,
                      certificate=cones.certificate_for(ms), stable=stable, warnings=tuple(warnings))


def compute_core(spec, place: int = 0, n_steps: int = 30, tolerance: float = 1e-12) -> CoreResult:
    """Exact core when the data allow it, otherwise the numeric cone."""
    tower = compile_spec(spec)
    if isinstance(spec, GCFTower) and not (spec.alpha.is_periodic and spec.beta.is_periodic):
        try:
            return gcf_core(spec, place)
        except RefusedError as exc:
            return _with_warning(core_numeric(spec, place, n_steps), f"no exact GCF core: {exc}")
    if tower.is_finite:
        return core_numeric(spec, place, n_steps)
    return core_exact(spec, place, tolerance)


# ---------------------------------------------------------------------------
# ergodic measures


@dataclass(frozen=True)
class ErgodicCount:
    kind: str  # "exact" | "at_least" | "n/a"
    value: int | str

    def __str__(self):
        if self.kind == "exact":
            return f"exactly {self.value}"
        if self.kind == "at_least":
            return f"at least {self.value}"
        return f"not applicable ({self.value})"


def ergodic_count(core: CoreResult, stability: StabilityClass, positivity_model_ok: bool = True) -> ErgodicCount:
    """Number of ergodic invariant probability measures read off the core."""
    if stability is StabilityClass.UNSTABLE:
        return ErgodicCount("n/a", "Q-stability fails")
    if stability is StabilityClass.UNKNOWN_BEYOND_PREFIX:
        return ErgodicCount("n/a", "Q-stability known only for the given prefix")
    if not positivity_model_ok:
        return ErgodicCount("n/a", "positive classes do not generate top homology")
    if core.kind in ("line", "rank1"):
        return ErgodicCount("exact", 1)
    if core.kind == "sector":
        return ErgodicCount("exact", 2)
    # a finite-step cone is only an outer bound unless it is already invariant
    return ErgodicCount("at_least", len(core.rays) if core.stable else 1)


# ---------------------------------------------------------------------------
# GL(2, Z) and GL(2, Q)


def _slope(ray):
    if len(ray) != 2:
        raise InputError("line comparison needs 2-dimensional rays")
    x, y = (as_qnumber(c) for c in ray)
    if y == 0:
        raise UnsupportedFieldError("ray has infinite slope")
    return x / y


def gl2z_line_equivalent(r1, r2) -> bool:
    """Are two lines with quadratic irrational slopes in one GL(2, Z) orbit?

    Decided by tail equivalence of the slopes' continued fractions.
    """
    s1, s2 = _slope(r1), _slope(r2)
    if s1.is_rational() or s2.is_rational():
        raise UnsupportedFieldError("rational slope: GL(2,Z) line comparison needs quadratic irrationals")
    return tail_equivalent(cf_expand_quadratic(s1), cf_expand_quadratic(s2))


@dataclass(frozen=True)
class GL2QResult:
    equivalent: bool
    witness: tuple | None = None  # ((a, b), (c, d)) over Q
    obstruction: str | None = None


def _as_rays(obj) -> list:
    """A ray, a slope, or a list of one or two of those -> list of rays."""
    if isinstance(obj, (QuadraticNumber, int, Fraction)):
        return [(as_qnumber(obj), QuadraticNumber(1))]
    obj = list(obj)
    if len(obj) == 2 and all(isinstance(x, (QuadraticNumber, int, Fraction)) for x in obj):
        # ambiguous: a single 2-vector; pairs of slopes must be given as rays
        return [tuple(as_qnumber(x) for x in obj)]
    out = []
    for item in obj:
        out.extend(_as_rays(item))
    return out


def _field(rays) -> int:
    ds = {as_qnumber(c).D for r in rays for c in r if not as_qnumber(c).is_rational()}
    if len(ds) > 1:
        raise InputError("rays mix quadratic fields")
    return ds.pop() if ds else 1


def _nullspace(rows: list[list[Fraction]], n: int) -> list[list[Fraction]]:
    rows = [list(r) for r in rows]
    pivots, r = [], 0
    for c in range(n):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
    basis = []
    for free in (c for c in range(n) if c not in pivots):
        v = [Fraction(0)] * n
        v[free] = Fraction(1)
        for i, c in enumerate(pivots):
            v[c] = -rows[i][free]
        basis.append(v)
    return basis


def _mobius_solutions(src: list, dst: list) -> tuple | None:
    # G (x1, x2) parallel to (y1, y2):  (a x1 + b x2) y2 - (c x1 + d x2) y1 = 0
    rows = []
    for (x1, x2), (y1, y2) in zip(src, dst):
        coeffs = [x1 * y2, x2 * y2, -(x1 * y1), -(x2 * y1)]
        coeffs = [as_qnumber(c) for c in coeffs]
        rows.append([c.rational_part for c in coeffs])
        rows.append([c.irrational_part for c in coeffs])
    basis = _nullspace(rows, 4)
    if not basis:
        return None
    # det = ad - bc is a quadratic form on the solution space; a non-zero one
    # cannot vanish on the whole grid {0,1,2}^k
    for coef in itertools.product((0, 1, 2), repeat=len(basis)):
        v = [sum(c * b[i] for c, b in zip(coef, basis)) for i in range(4)]
        a, b, c, d = v
        if a * d - b * c != 0:
            g = ((a, b), (c, d))
            for (x1, x2), (y1, y2) in zip(src, dst):
                z1, z2 = a * x1 + b * x2, c * x1 + d * x2
                assert z1 * y2 == z2 * y1
            return g
    return None


def gl2q_equivalent(A, B) -> GL2QResult:
    """Is there ``G`` in GL(2, Q) carrying the line(s) ``A`` to ``B``?

    ``A`` and ``B`` are a ray/slope each, or ordered pairs of rays; for pairs
    the swapped matching is tried as well.
    """
    ra, rb = _as_rays(A), _as_rays(B)
    if len(ra) != len(rb) or len(ra) not in (1, 2):
        raise InputError("compare one line with one line, or a pair with a pair")
    for r in ra + rb:
        if any(not isinstance(c, (QuadraticNumber, int, Fraction)) for c in r):
            raise RefusedError("slopes are not exact quadratic numbers; compare invariants only")
    if _field(ra) != _field(rb):
        return GL2QResult(False, obstruction="field mismatch")
    matchings = [rb] if len(rb) == 1 else [rb, rb[::-1]]
    for target in matchings:
        g = _mobius_solutions(ra, target)
        if g is not None:
            return GL2QResult(True, witness=g)
    return GL2QResult(False, obstruction="no nonsingular rational Mobius map")


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class ClassificationReport:
    distinguished_by: tuple
    details: dict = field(hash=False)

    def __post_init__(self):
        assert all(isinstance(x, str) for x in self.distinguished_by)

    @property
    def distinguished(self) -> bool:
        return bool(self.distinguished_by)

    @property
    def verdict(self) -> str:
        if self.distinguished_by:
            return "DISTINGUISHED by: " + ", ".join(self.distinguished_by)
        return "not distinguished by the homology core"


def distinguish(spec_a, spec_b, group: str = "gl2z", place: int = 0) -> ClassificationReport:
    """Compare the homology cores of two presentations.

    Stability is a precondition, not an invariant.  In order: homology rank,
    core type, quadratic field of the slopes, then continued-fraction tails
    (``gl2z``) or rational Mobius solvability (``gl2q``).  Eigenvalues are
    reported but never used.
    """
    group = group.lower()
    if group not in ("gl2z", "gl2q"):
        raise InputError(f"unknown group {group!r}", "group")
    st = (stability_class(spec_a), stability_class(spec_b))
    if group == "gl2z" and any(s is not StabilityClass.Z_STABLE for s in st):
        raise RefusedError("GL(2,Z) comparison needs homologically Z-stable presentations "
                           f"(unimodular bonding maps); got {st[0].value} and {st[1].value}")
    details: dict = {"group": group, "stability": [s.value for s in st]}
    by: list[str] = []
    ca, cb = compute_core(spec_a, place), compute_core(spec_b, place)
    details["core_types"] = [ca.kind, cb.kind]
    details["eigenvalues"] = {"values": [None if c.eigenvalue is None else str(c.eigenvalue) for c in (ca, cb)],
                              "status": "informational, not a complete invariant"}
    if ca.dim != cb.dim:
        by.append("dimension")
    elif ca.kind in EXACT_KINDS and cb.kind in EXACT_KINDS and ca.kind != cb.kind:
        by.append("core-type")
    elif "numeric" in (ca.kind, cb.kind):
        details["note"] = "numeric core: only rank and stability compared"
    elif ca.kind == cb.kind == "line" and ca.exact and cb.exact:
        details["field_D"] = [ca.field_D, cb.field_D]
        if ca.field_D != cb.field_D:
            by.append("field")
        elif group == "gl2z":
            if ca.field_D == 1:
                # GL(2,Z) is transitive on rational lines
                details["cf_tails"] = "rational slopes"
            else:
                ea, eb = cf_expand_quadratic(ca.slope), cf_expand_quadratic(cb.slope)
                details["cf_tails"] = [str(ea), str(eb)]
                if not tail_equivalent(ea, eb):
                    by.append("cf-tail")
        else:
            res = gl2q_equivalent(ca.rays[0], cb.rays[0])
            details["gl2q"] = "equivalent" if res.equivalent else res.obstruction
            if not res.equivalent:
                by.append("gl2q-orbit")
    elif ca.kind in ("line", "sector"):
        details["note"] = "core endpoints known by enclosure only; orbit comparison not decided"
    return ClassificationReport(tuple(by), details)


def transform_spec(u, spec) -> MatrixTower:
    """Conjugate every bonding matrix by the permutation matrix ``u``."""
    u = mx.as_matrix(u, field="U")
    if not mx.is_permutation(u):
        raise InputError("transform must be a permutation matrix (it has to preserve the orthant)", "U")
    tower = compile_spec(spec)
    if mx.dim(u) != tower.dim:
        raise InputError(f"U is {mx.dim(u)}x{mx.dim(u)} but the tower is {tower.dim}x{tower.dim}", "U")
    ui = mx.permutation_inverse(u)

    def conj(m):
        return mx.product(u, m, ui)

    return MatrixTower(tuple(conj(m) for m in tower.prefix), tuple(conj(m) for m in tower.cycle), tower.labels)
