import itertools
import math
from fractions import Fraction

from hypothesis import assume, given, strategies as st

from mbcore import cones
from mbcore import matrices as mx
from mbcore.core import cone_rays
from mbcore.presentations import compile_spec
from strategies import matrix_towers, nonneg_matrix


def solve_exact(cols, target):
    """Solve sum_j x_j cols[j] = target by elimination; None if inconsistent."""
    n, k = len(target), len(cols)
    rows = [[Fraction(cols[j][i]) for j in range(k)] + [Fraction(target[i])] for i in range(n)]
    piv_cols, r = [], 0
    for c in range(k):
        p = next((i for i in range(r, n) if rows[i][c] != 0), None)
        if p is None:
            continue
        rows[r], rows[p] = rows[p], rows[r]
        rows[r] = [x / rows[r][c] for x in rows[r]]
        for i in range(n):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        piv_cols.append(c)
        r += 1
    if any(rows[i][-1] != 0 for i in range(r, n)):
        return None
    x = [Fraction(0)] * k
    for i, c in enumerate(piv_cols):
        x[c] = rows[i][-1]
    return x


def caratheodory_in_cone(target, gens):
    """Oracle: target is a non-negative combination of at most dim generators
    that are linearly independent."""
    if all(t == 0 for t in target):
        return True
    n = len(target)
    for size in range(1, min(n, len(gens)) + 1):
        for subset in itertools.combinations(gens, size):
            x = solve_exact(list(subset), target)
            if x is None:
                continue
            # independent subsets give the unique solution; check it directly
            if all(v >= 0 for v in x) and all(
                    sum(x[j] * subset[j][i] for j in range(size)) == target[i] for i in range(n)):
                return True
    return False


vec = lambda n: st.lists(st.integers(0, 4), min_size=n, max_size=n).map(tuple)


@st.composite
def cone_problem(draw):
    n = draw(st.sampled_from([2, 3]))
    gens = draw(st.lists(vec(n).filter(any), min_size=1, max_size=5))
    target = draw(vec(n))
    return target, gens


def test_extreme_ray_examples():
    half = (Fraction(1, 2), Fraction(1, 2))
    assert cones.extreme_rays([(1, 0), (0, 1), half]) == [(1, 0), (0, 1)]
    assert cones.extreme_rays([(1, 0), (0, 1)]) == [(1, 0), (0, 1)]
    sq = mx.power(((10, 3), (7, 2)), 2)
    rays = [cones.normalize(mx.column(sq, j)) for j in range(2)]
    assert cones.extreme_rays(rays) == rays


@given(cone_problem())
def test_in_cone_matches_caratheodory(problem):
    target, gens = problem
    assert cones.in_cone(target, gens) == caratheodory_in_cone(target, gens)


@given(cone_problem())
def test_extreme_rays_generate_the_same_cone(problem):
    _, gens = problem
    rays = [cones.normalize(g) for g in gens]
    ext = cones.extreme_rays(rays)
    assert all(r in rays for r in ext)
    assert cones.cone_contains(ext, rays)
    for i, r in enumerate(ext):
        assert not cones.in_cone(r, ext[:i] + ext[i + 1:])


@given(matrix_towers(), st.integers(1, 12), st.integers(1, 18))
def test_cone_nesting(spec, n, extra):
    t = compile_spec(spec)
    m = min(n + extra, 30)
    outer, _ = cone_rays(t.matrices(0, n), t.dim)
    inner, _ = cone_rays(t.matrices(0, m), t.dim)
    assert cones.cone_contains(outer, inner)


@given(st.lists(st.integers(1, 20), min_size=3, max_size=3), st.lists(st.integers(1, 20), min_size=3, max_size=3))
def test_cross_ratio_basics(x, y):
    k = cones.cross_ratio(x, y)
    assert k >= 1 and k == cones.cross_ratio(y, x)
    assert cones.cross_ratio(x, [3 * v for v in x]) == 1
    assert (k == 1) == (cones.normalize(x) == cones.normalize(y))


def test_cross_ratio_infinite():
    assert cones.cross_ratio((1, 0), (1, 1)) is None
    assert cones.diameter_kappa([(1, 0), (0, 1)]) is None
    assert math.isinf(cones.log_kappa(None))


@given(nonneg_matrix(2, 1, 9) | nonneg_matrix(3, 1, 6),
       st.lists(st.integers(1, 30), min_size=3, max_size=3),
       st.lists(st.integers(1, 30), min_size=3, max_size=3))
def test_birkhoff_contraction(b, x, y):
    n = len(b)
    x, y = x[:n], y[:n]
    assume(cones.cross_ratio(x, y) != 1)
    cert = cones.ContractionCertificate.for_block(b)
    d_before = cones.log_kappa(cones.cross_ratio(x, y))
    d_after = cones.log_kappa(cones.cross_ratio(mx.apply(b, x), mx.apply(b, y)))
    assert d_after <= float(cert.tau) * d_before * (1 + 1e-9) + 1e-15
    # the image of the orthant has diameter log(kappa)
    assert d_after <= cones.log_kappa(cert.kappa) + 1e-12


def test_sigma_certificate():
    cert = cones.ContractionCertificate.for_block(((10, 3), (7, 2)))
    assert cert.kappa == Fraction(21, 20)
    s = math.sqrt(21 / 20)
    assert math.isclose(float(cert.tau), (s - 1) / (s + 1), rel_tol=1e-12)
    # tau is an upper bound: (1 + tau) / (1 - tau) >= sqrt(kappa), checked exactly
    assert ((1 + cert.tau) / (1 - cert.tau)) ** 2 >= cert.kappa


@given(st.fractions(min_value=1, max_value=10 ** 6, max_denominator=10 ** 6))
def test_sqrt_upper(x):
    s = cones.sqrt_upper(x)
    assert s * s >= x
    assert (s - Fraction(1, x.denominator * 2 ** 64)) ** 2 <= x


def test_positive_blocks():
    a, b = ((1, 1), (0, 1)), ((1, 0), (1, 1))
    blocks = cones.positive_blocks([a, b, a, a, b])
    assert [(s, n) for s, n, _ in blocks] == [(0, 2), (2, 3)]
    assert cones.certificate_for([a, a, a]) is None
