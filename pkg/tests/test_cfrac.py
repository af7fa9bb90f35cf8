from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, strategies as st

from mbcore import matrices as mx
from mbcore.builtins import EXAMPLE_INPUTS
from mbcore.cfrac import (
    CFExpansion,
    SumClass,
    cf_convergents,
    cf_expand_quadratic,
    cf_value,
    gcf_classify,
    gcf_convergents,
    gcf_k_sequence,
    gcf_limits,
    sequences_share_tail,
    tail_equivalent,
)
from mbcore.errors import InputError, RefusedError
from mbcore.presentations import IntegerSequenceSpec, spec_from_json
from mbcore.qnumber import QuadraticNumber, parse_qnumber
from strategies import periodic_seq, positive_quadratic_irrational

mpmath.mp.dps = 80


def backward_value(ns):
    """[n_0; n_1, ..., n_k] evaluated from the bottom up."""
    x = Fraction(ns[-1])
    for n in reversed(ns[:-1]):
        x = n + 1 / x
    return x


def test_expansion_examples():
    assert str(cf_expand_quadratic(parse_qnumber("(4+sqrt(37))/7"))) == "period: [1,2,3], preperiod: []"
    assert cf_expand_quadratic(parse_qnumber("(5+sqrt(37))/4")).period == (2, 1, 3)
    e = cf_expand_quadratic(parse_qnumber("sqrt(2)"))
    assert (e.preperiod, e.period) == ((1,), (2,))
    assert cf_expand_quadratic(parse_qnumber("6+sqrt(37)")).period == (12,)


def test_value_examples():
    assert cf_value(CFExpansion((), (1, 2, 3))) == parse_qnumber("(4+sqrt(37))/7")
    assert cf_value(CFExpansion((5,), (1,))) == parse_qnumber("(9+sqrt(5))/2")
    assert cf_value(CFExpansion((), (12,))) == parse_qnumber("6+sqrt(37)")


def test_expansion_canonical_form():
    assert CFExpansion((1, 2, 3), (1, 2, 3)) == CFExpansion((), (1, 2, 3))
    assert CFExpansion((), (2, 2, 2)).period == (2,)
    assert CFExpansion((4, 3), (1, 3)) == CFExpansion((4,), (3, 1))


def test_rational_rejected():
    with pytest.raises(InputError):
        cf_expand_quadratic(QuadraticNumber(3, 0, 7))


@given(positive_quadratic_irrational())
def test_round_trip_value_of_expansion(x):
    assert cf_value(cf_expand_quadratic(x)) == x


@given(st.integers(-5, 9), st.lists(st.integers(1, 9), max_size=3), st.lists(st.integers(1, 9), min_size=1, max_size=4))
def test_round_trip_expansion_of_value(a0, pre, per):
    e = CFExpansion((a0, *pre), tuple(per))
    assert cf_expand_quadratic(cf_value(e)) == e


@given(positive_quadratic_irrational())
def test_expansion_digits_match_high_precision(x):
    e = cf_expand_quadratic(x)
    y = (mpmath.mpf(x.p) + x.q * mpmath.sqrt(x.D)) / x.r
    for t in e.terms(12):
        assert int(mpmath.floor(y)) == t
        y = 1 / (y - t)


@given(periodic_seq(max_term=9), st.integers(0, 25))
def test_convergent_determinant_identity(N, k):
    conv = cf_convergents(N, k)
    for i in range(1, k + 1):
        assert conv[i].p * conv[i - 1].q - conv[i - 1].p * conv[i].q == (-1) ** (i + 1)
    assert conv[k].value == backward_value(N.head(k + 1))


@pytest.mark.parametrize("k", range(21))
def test_convergent_matrix_identity(k):
    N = IntegerSequenceSpec.periodic([1, 2, 3])
    conv = cf_convergents(N, k)
    prod = mx.product(*(((n, 1), (1, 0)) for n in N.head(k + 1)))
    prev = (conv[k - 1].p, conv[k - 1].q) if k else (1, 0)
    assert prod == ((conv[k].p, prev[0]), (conv[k].q, prev[1]))


def test_tail_equivalence():
    e = CFExpansion((), (1, 2, 3))
    assert tail_equivalent(e, CFExpansion((7, 5), (2, 3, 1)))
    assert not tail_equivalent(e, CFExpansion((), (2, 1, 3)))
    assert not tail_equivalent(e, CFExpansion((), (12,)))
    assert sequences_share_tail(IntegerSequenceSpec.periodic([1, 2], [4]), IntegerSequenceSpec.periodic([2, 1]))


@given(periodic_seq(), st.integers(0, 8), st.lists(st.integers(1, 9), max_size=3))
def test_tail_equivalence_under_shifts(N, k, new_pre):
    shifted = N.shift(k)
    other = IntegerSequenceSpec.periodic(shifted.period, tuple(new_pre) + shifted.preperiod)
    assert sequences_share_tail(N, other)


# ---------------------------------------------------------------------------
# generalized continued fractions


def case2():
    s = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    return s.alpha, s.beta


def mp_gcf_parity_limits(a_of, b_of, depth):
    """Even and odd convergents at large depth, with a given by formula."""
    A0, B0, A1, B1 = mpmath.mpf(1), mpmath.mpf(0), mpmath.mpf(b_of(0)), mpmath.mpf(1)
    vals = [A1 / B1]
    for j in range(1, depth + 1):
        A0, B0, A1, B1 = A1, B1, b_of(j) * A1 + a_of(j) * A0, b_of(j) * B1 + a_of(j) * B0
        vals.append(A1 / B1)
    return vals[depth if depth % 2 == 0 else depth - 1], vals[depth if depth % 2 else depth - 1]


def test_case2_k_sequence():
    alpha, beta = case2()
    assert gcf_k_sequence(alpha, beta, 10) == [Fraction(1, 2 ** n) for n in range(1, 11)]


def test_case2_classification_and_limits():
    alpha, beta = case2()
    ks = gcf_classify(alpha, beta)
    assert ks.classification is SumClass.CONVERGES
    assert ks.caveat and "geometric" in ks.caveat
    lim = gcf_limits(alpha, beta, 20, ks)
    assert lim.count == 2
    assert lim.even.hi < lim.odd.lo
    assert lim.even.width < Fraction(1, 10 ** 6) and lim.odd.width < Fraction(1, 10 ** 6)
    # oracle: the same fraction continued by its defining rule to depth 400
    le, lo = mp_gcf_parity_limits(lambda j: mpmath.mpf(2) ** (2 * j - 1), lambda j: 1, 400)
    assert lim.even.lo <= Fraction(str(le)) <= lim.even.hi
    assert lim.odd.lo <= Fraction(str(lo)) <= lim.odd.hi


def test_divergent_sum_single_limit():
    alpha, beta = IntegerSequenceSpec.periodic([1]), IntegerSequenceSpec.periodic([2])
    ks = gcf_classify(alpha, beta)
    assert ks.classification is SumClass.DIVERGES
    lim = gcf_limits(alpha, beta, 20, ks)
    assert lim.count == 1
    assert lim.single.width < Fraction(1, 10 ** 6)
    assert lim.single.lo <= parse_qnumber("1+sqrt(2)") <= lim.single.hi


def test_tail_rule_and_inconclusive():
    alpha = IntegerSequenceSpec.explicit([1, 3, 2, 5, 4, 1, 2, 2])
    beta = IntegerSequenceSpec.explicit([1] * 9)
    with pytest.raises(RefusedError):
        gcf_limits(alpha, beta, 6)
    beta = IntegerSequenceSpec.explicit([9] * 9)
    ks = gcf_classify(alpha, beta, "bn_gt_an")
    assert ks.classification is SumClass.DIVERGES and ks.rule_used.startswith("R2")


@given(periodic_seq(max_term=5), periodic_seq(max_term=5))
def test_periodic_gcf_sum_always_diverges(alpha, beta):
    assert gcf_classify(alpha, beta).classification is SumClass.DIVERGES


@given(periodic_seq(max_term=6), periodic_seq(max_term=6), st.integers(1, 25))
def test_gcf_determinant_identity(alpha, beta, k):
    conv = gcf_convergents(alpha, beta, k)
    prod_a = 1
    for j in range(1, k + 1):
        prod_a *= alpha[j - 1]
        lhs = conv[j].p * conv[j - 1].q - conv[j - 1].p * conv[j].q
        assert lhs == (-1) ** (j + 1) * prod_a


@given(periodic_seq(max_term=6), periodic_seq(max_term=6), st.integers(1, 12))
def test_k_sequence_preserves_convergents(alpha, beta, n):
    ks = gcf_k_sequence(alpha, beta, n)
    P, Q = [Fraction(1), Fraction(beta[0])], [Fraction(0), Fraction(1)]
    for k in ks:
        P.append(k * P[-1] + P[-2])
        Q.append(k * Q[-1] + Q[-2])
    assert P[-1] / Q[-1] == gcf_convergents(alpha, beta, n)[n].value


def test_depth_validation():
    alpha, beta = case2()
    with pytest.raises(InputError):
        gcf_limits(alpha, beta, 3)
