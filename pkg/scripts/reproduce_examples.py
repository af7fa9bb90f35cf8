"""Print the headline computations for the bundled examples."""

from mbcore.builtins import EXAMPLE_INPUTS, SIGMA1, SIGMA2, SIGMA3
from mbcore.cfrac import cf_expand_quadratic
from mbcore.core import compute_core, distinguish, ergodic_count
from mbcore.homology import abelianization, proper_power
from mbcore.matrices import pf_eigen_2x2
from mbcore.presentations import SubstitutionTower, spec_from_json, stability_class


def substitutions():
    for name, s in (("sigma1", SIGMA1), ("sigma2", SIGMA2), ("sigma3", SIGMA3)):
        m = abelianization(s)
        lam, ray = pf_eigen_2x2(m)
        print(f"{name}: matrix {m}, proper power {proper_power(s)}, eigenvalue {lam}, "
              f"ray ({ray[0]}, 1), cf {cf_expand_quadratic(ray[0])}")
    towers = {n: SubstitutionTower(s) for n, s in (("sigma1", SIGMA1), ("sigma2", SIGMA2), ("sigma3", SIGMA3))}
    for a, b in (("sigma1", "sigma2"), ("sigma1", "sigma3"), ("sigma2", "sigma3")):
        print(f"{a} vs {b}: {distinguish(towers[a], towers[b]).verdict}")


def cores():
    for name, obj in EXAMPLE_INPUTS.items():
        spec = spec_from_json(obj)
        core = compute_core(spec)
        stab = stability_class(spec)
        print(f"{name:12s} {core.kind:8s} {stab.value:12s} ergodic measures: {ergodic_count(core, stab)}")


if __name__ == "__main__":
    substitutions()
    print()
    cores()
