from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mbcore import cones
from mbcore import matrices as mx
from mbcore.builtins import EXAMPLE_INPUTS, SIGMA1, SIGMA2, SIGMA3
from mbcore.cfrac import cf_expand_quadratic
from mbcore.core import (
    compute_core,
    core_exact,
    core_numeric,
    distinguish,
    ergodic_count,
    gl2q_equivalent,
    gl2z_line_equivalent,
    transform_spec,
)
from mbcore.errors import InputError, RefusedError, UnsupportedFieldError
from mbcore.presentations import (
    CFTower,
    IntegerSequenceSpec,
    MatrixTower,
    SolenoidTower,
    StabilityClass,
    SubstitutionTower,
    compile_spec,
    spec_from_json,
    stability_class,
    telescope,
)
from mbcore.qnumber import QuadraticNumber, parse_qnumber
from strategies import cf_towers, matrix_towers, positive_quadratic_irrational, solenoid_towers

S1 = MatrixTower((), (((10, 3), (7, 2)),))
SWAP = ((0, 1), (1, 0))
PERMS3 = [((1, 0, 0), (0, 0, 1), (0, 1, 0)), ((0, 1, 0), (0, 0, 1), (1, 0, 0)), ((0, 0, 1), (1, 0, 0), (0, 1, 0))]


def projectively_equal(x, y):
    return all(x[i] * y[j] == x[j] * y[i] for i in range(len(x)) for j in range(len(x)))


def cf(period, pre=()):
    return CFTower(IntegerSequenceSpec.periodic(period, pre))


def test_sigma1_core():
    c = core_exact(S1)
    assert c.kind == "line"
    assert c.rays == ((parse_qnumber("(4+sqrt(37))/7"), 1),)
    assert c.eigenvalue == parse_qnumber("6+sqrt(37)")
    assert c.field_D == 37


def test_cf_core_is_pf_of_cycle():
    c = core_exact(cf([1, 2, 3]))
    assert c.rays[0][0] == parse_qnumber("(4+sqrt(37))/7")


def test_solenoid_rank_one():
    assert core_exact(SolenoidTower(IntegerSequenceSpec.periodic([2, 3], [5]))).kind == "rank1"


def test_finite_tower_needs_numeric():
    with pytest.raises(InputError, match="core_numeric"):
        core_exact(MatrixTower((((10, 3), (7, 2)),)))


def test_imprimitive_cycle_falls_back():
    c = core_exact(MatrixTower((), (((1, 0), (0, 1)),)))
    assert c.kind == "numeric" and any("primitive" in w for w in c.warnings)


def test_identity_keeps_full_orthant():
    for steps in (1, 5, 17):
        c = core_numeric(MatrixTower((), (mx.identity(3),)), 0, steps)
        assert set(c.rays) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}
        assert c.kappa is None


def test_zero_column_warning():
    c = core_numeric(MatrixTower((), (((1, 0), (1, 0)),)), 0, 3)
    assert len(c.rays) == 1 and any("degenerate" in w for w in c.warnings)


def test_sigma_numeric_close_to_pf():
    exact = core_exact(S1).rays[0]
    num = core_numeric(S1, 0, 30)
    assert len(num.rays) == 2
    for r in num.rays:
        assert cones.hilbert_distance(r, exact) < 1e-9
    assert num.certificate is not None


def test_gcf_case2_numeric_brackets_limits():
    g = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    exact = compute_core(g)
    num = core_numeric(g, 0, 12)
    slopes = sorted(r[0] / r[1] for r in num.rays)
    assert len(slopes) == 2
    for e in exact.enclosures:
        assert slopes[0] <= e.lo and e.hi <= slopes[1]


def test_gcf_place_shift():
    g = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    c0, c1 = compute_core(g, 0), compute_core(g, 1)
    # core_0 = M_0 core_1 with M_0 = [[1,1],[1,0]]: slope x -> (x + 1) / x
    for e0, e1 in zip(c0.enclosures, reversed(c1.enclosures)):
        mid = e1.midpoint
        assert e0.lo - Fraction(1, 10 ** 5) <= (mid + 1) / mid <= e0.hi + Fraction(1, 10 ** 5)


@given(cf_towers, st.integers(0, 6))
def test_place_k_core_is_pushed_forward(spec, k):
    t = compile_spec(spec)
    here, there = core_exact(spec, k).rays[0], core_exact(spec, k + 1).rays[0]
    assert projectively_equal(mx.apply(t.matrix(k), there), here)


@given(matrix_towers(dims=(2,), max_pre=0).filter(
    lambda s: mx.is_primitive(mx.product(*s.cycle))))
def test_pf_correctness(spec):
    c = core_exact(spec)
    t = compile_spec(spec)
    cp = mx.product(*t.cycle)
    assert mx.apply(cp, c.rays[0]) == tuple(c.eigenvalue * x for x in c.rays[0])
    assert all(x > 0 for x in c.rays[0])


@given(matrix_towers(), st.integers(1, 8), st.data())
def test_permutation_equivariance(spec, steps, data):
    dim = compile_spec(spec).dim
    u = data.draw(st.sampled_from([SWAP] if dim == 2 else PERMS3))
    before = core_numeric(spec, 0, steps)
    after = core_numeric(transform_spec(u, spec), 0, steps)
    assert set(after.rays) == {mx.apply(u, r) for r in before.rays}
    assert after.kappa == before.kappa


@given(st.one_of(matrix_towers(), cf_towers, solenoid_towers),
       st.lists(st.integers(1, 3), min_size=1, max_size=3), st.integers(1, 6))
def test_telescoping_invariance(spec, blocks, n):
    total = sum(blocks[i % len(blocks)] for i in range(n))
    a = core_numeric(telescope(spec, blocks), 0, n)
    b = core_numeric(spec, 0, total)
    assert set(a.rays) == set(b.rays)


def test_transform_examples():
    t = transform_spec(SWAP, S1)
    assert compile_spec(t).cycle == (((2, 7), (3, 10)),)
    assert projectively_equal(core_exact(t).rays[0], (1, parse_qnumber("(4+sqrt(37))/7")))
    assert compile_spec(transform_spec(mx.identity(2), S1)) == compile_spec(S1)
    assert compile_spec(transform_spec(SWAP, transform_spec(SWAP, S1))) == compile_spec(S1)
    with pytest.raises(InputError):
        transform_spec(((1, 1), (0, 1)), S1)


# ---------------------------------------------------------------------------
# GL(2) equivalence


V1 = (parse_qnumber("(4+sqrt(37))/7"), QuadraticNumber(1))
V2 = (parse_qnumber("(5+sqrt(37))/4"), QuadraticNumber(1))


def test_gl2z_examples():
    assert not gl2z_line_equivalent(V1, V2)
    assert gl2z_line_equivalent(V1, V1)
    from mbcore.cfrac import CFExpansion, cf_value
    rotated = cf_value(CFExpansion((), (2, 3, 1)))
    assert gl2z_line_equivalent(V1, (rotated, 1))
    with pytest.raises(UnsupportedFieldError):
        gl2z_line_equivalent((Fraction(3, 2), 1), V1)


T, S = ((1, 1), (0, 1)), ((0, 1), (1, 0))


@given(positive_quadratic_irrational(), st.lists(st.sampled_from([T, S]), max_size=12))
def test_gl2z_invariance(x, word):
    ray = (x, QuadraticNumber(1))
    g = mx.product(*word, n=2)
    moved = mx.apply(g, ray)
    assert gl2z_line_equivalent(ray, moved)
    assert gl2z_line_equivalent(moved, ray)


@given(positive_quadratic_irrational(), positive_quadratic_irrational())
def test_gl2z_reflexive_symmetric(x, y):
    rx, ry = (x, 1), (y, 1)
    assert gl2z_line_equivalent(rx, rx)
    assert gl2z_line_equivalent(rx, ry) == gl2z_line_equivalent(ry, rx)


def test_gl2q_examples():
    assert gl2q_equivalent(V1, V1).equivalent
    assert gl2q_equivalent(V1, V1).witness is not None
    r = gl2q_equivalent(parse_qnumber("sqrt(37)"), parse_qnumber("sqrt(5)"))
    assert not r.equivalent and r.obstruction == "field mismatch"
    r = gl2q_equivalent(V1, (parse_qnumber("(4+sqrt(37))/3"), 1))
    assert r.equivalent
    (a, b), (c, d) = r.witness
    x = V1[0]
    assert (a * x + b) / (c * x + d) == parse_qnumber("(4+sqrt(37))/3")


def test_gl2q_pairs():
    x1, x2 = parse_qnumber("sqrt(2)"), parse_qnumber("1+sqrt(2)")
    pair = [(x1, 1), (x2, 1)]
    assert gl2q_equivalent(pair, pair).equivalent
    assert gl2q_equivalent(pair, pair[::-1]).equivalent
    y = parse_qnumber("sqrt(3)")
    assert not gl2q_equivalent(pair, [(y, 1), (y + 1, 1)]).equivalent


@given(positive_quadratic_irrational(), positive_quadratic_irrational())
def test_gl2q_single_lines_same_field(x, y):
    r = gl2q_equivalent(x, y)
    assert r.equivalent == (x.D == y.D)
    if r.equivalent:
        (a, b), (c, d) = r.witness
        assert a * d - b * c != 0
        assert (a * x + b) / (c * x + d) == y


# ---------------------------------------------------------------------------
# classification and ergodic counts


def test_distinguish_sigmas():
    s1, s2, s3 = (SubstitutionTower(s) for s in (SIGMA1, SIGMA2, SIGMA3))
    rep = distinguish(s1, s2, "gl2z")
    assert rep.distinguished_by == ("cf-tail",)
    assert rep.details["eigenvalues"]["values"] == ["6+sqrt(37)", "6+sqrt(37)"]
    assert "informational" in rep.details["eigenvalues"]["status"]
    rep = distinguish(s1, s3, "gl2z")
    assert not rep.distinguished
    assert rep.verdict == "not distinguished by the homology core"


def test_distinguish_cf_spaces():
    n1, n2, n3 = cf([12]), cf([1, 2, 3]), cf([2, 1, 3])
    for a, b in ((n1, n2), (n1, n3), (n2, n3)):
        assert distinguish(a, b).distinguished_by == ("cf-tail",)
    assert not distinguish(n2, cf([2, 3, 1], [1])).distinguished


def test_distinguish_refuses_gl2z_on_q_stable():
    g = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    with pytest.raises(RefusedError, match="Z-stable"):
        distinguish(g, S1, "gl2z")
    assert distinguish(g, S1, "gl2q").distinguished_by == ("core-type",)


@given(cf_towers, st.integers(0, 6))
def test_tail_theorem(spec, k):
    shifted = CFTower(spec.terms.shift(k))
    assert not distinguish(spec, shifted).distinguished


def test_ergodic_counts():
    sol = SolenoidTower(IntegerSequenceSpec.periodic([2]))
    c = core_exact(sol)
    assert str(ergodic_count(c, stability_class(sol))) == "exactly 1"
    g = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    assert ergodic_count(compute_core(g), stability_class(g)).value == 2
    unstable = MatrixTower((), (((1, 1), (1, 1)),))
    e = ergodic_count(core_numeric(unstable), StabilityClass.UNSTABLE)
    assert e.kind == "n/a" and "Q-stability fails" in e.value
    num = core_numeric(S1)
    assert ergodic_count(num, StabilityClass.Z_STABLE).kind == "at_least"
    ident = core_numeric(MatrixTower((), (mx.identity(2),)))
    assert ident.stable and ergodic_count(ident, StabilityClass.Z_STABLE).value == 2
    assert ergodic_count(c, StabilityClass.Q_STABLE, positivity_model_ok=False).kind == "n/a"


def brute_extreme_count(points):
    """Extreme points of a finite set on a line: distinct minimum and maximum."""
    distinct = set(points)
    return min(len(distinct), 2)


@pytest.mark.parametrize("name", sorted(EXAMPLE_INPUTS))
def test_exact_counts_match_brute_force(name):
    spec = spec_from_json(EXAMPLE_INPUTS[name])
    core = compute_core(spec)
    count = ergodic_count(core, stability_class(spec))
    if count.kind != "exact":
        return
    if core.kind == "rank1":
        points = [Fraction(1)]
    elif core.rays:
        points = [r[0] / r[1] for r in core.rays]
    else:
        points = [e.midpoint for e in core.enclosures]
    assert count.value == brute_extreme_count(points)


def test_random_solenoids_uniquely_ergodic():
    import random
    rng = random.Random(7)
    for _ in range(10):
        pre = [rng.randint(2, 9) for _ in range(rng.randint(0, 4))]
        per = [rng.randint(2, 9) for _ in range(rng.randint(1, 4))]
        spec = SolenoidTower(IntegerSequenceSpec.periodic(per, pre))
        core = core_exact(spec)
        assert core.kind == "rank1"
        assert ergodic_count(core, stability_class(spec)).value == 1


def test_cf_expansion_of_core_slope():
    assert cf_expand_quadratic(core_exact(cf([1, 2, 3])).slope).period == (1, 2, 3)
