"""Quick end-to-end checks on the built-in examples (``mbcore selftest``)."""

from __future__ import annotations

from fractions import Fraction

from . import matrices as mx
from .builtins import EXAMPLE_INPUTS, K, K_BASIS, SIGMA1, SIGMA2, SIGMA3, f_map
from .cfrac import cf_expand_quadratic, gcf_k_sequence
from .core import compute_core, core_exact, distinguish, ergodic_count
from .homology import abelianization, induced_h1_matrix
from .presentations import SubstitutionTower, spec_from_json, stability_class
from .qnumber import parse_qnumber


def _checks():
    s1, s2, s3 = (SubstitutionTower(s) for s in (SIGMA1, SIGMA2, SIGMA3))
    yield "abelianization sigma1", abelianization(SIGMA1) == ((10, 3), (7, 2))
    yield "abelianization sigma2", abelianization(SIGMA2) == ((11, 3), (4, 1))
    lam, ray = mx.pf_eigen_2x2(((10, 3), (7, 2)))
    yield "eigenvalue 6+sqrt(37)", lam == parse_qnumber("6+sqrt(37)")
    yield "ray ((4+sqrt(37))/7, 1)", ray[0] == parse_qnumber("(4+sqrt(37))/7")
    yield "cf of (4+sqrt(37))/7", cf_expand_quadratic(ray[0]).period == (1, 2, 3)
    yield "sigma1 vs sigma2 distinguished by cf-tail", distinguish(s1, s2).distinguished_by == ("cf-tail",)
    yield "sigma1 vs sigma3 not distinguished", not distinguish(s1, s3).distinguished
    yield "f_n on H_1(K)", all(induced_h1_matrix(K, f_map(n), K_BASIS) == ((n, 1), (1, 0)) for n in range(1, 11))
    yield "solenoid core rank one", core_exact(spec_from_json(EXAMPLE_INPUTS["dyadic"])).kind == "rank1"
    g = spec_from_json(EXAMPLE_INPUTS["gcf_case2"])
    yield "gcf k-sequence 1/2, 1/4, 1/8", gcf_k_sequence(g.alpha, g.beta, 3) == [Fraction(1, 2 ** i) for i in (1, 2, 3)]
    c = compute_core(g)
    yield "gcf case 2: two ergodic measures", c.kind == "sector" and ergodic_count(c, stability_class(g)).value == 2
    g1 = spec_from_json(EXAMPLE_INPUTS["gcf_a1_b2"])
    yield "gcf a=1, b=2: one ergodic measure", ergodic_count(compute_core(g1), stability_class(g1)).value == 1


def run_selftest(out) -> bool:
    ok = True
    for name, passed in _checks():
        ok &= bool(passed)
        out.write(f"{'PASS' if passed else 'FAIL'}  {name}\n")
    return ok
