"""Full analysis of one presentation, and its text, JSON and CSV renderings.

JSON reports carry every number as an exact string (integers, ``p/q``,
quadratic surds); decimals only appear in the CSV plot data.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction

from . import cones
from . import matrices as mx
from .core import CoreResult, ErgodicCount, compute_core, core_numeric, ergodic_count
from .presentations import (
    RecurrenceWitness,
    StabilityClass,
    Tower,
    compile_spec,
    is_recurrent,
    stability_class,
)

STABILITY_TEXT = {
    StabilityClass.Z_STABLE: "Z-stable (every bonding map unimodular)",
    StabilityClass.Q_STABLE: "Q-stable (every bonding map nonsingular)",
    StabilityClass.UNSTABLE: "unstable (some bonding map singular)",
    StabilityClass.UNKNOWN_BEYOND_PREFIX: "prefix-only (explicit finite data; nothing claimed beyond it)",
}
CSV_HEADER = ("k", "p_k", "q_k", "convergent", "hilbert_diameter_bound")


@dataclass(frozen=True)
class AnalysisConfig:
    place: int = 0
    steps: int = 30
    tolerance: float = 1e-12


@dataclass(frozen=True)
class Analysis:
    config: AnalysisConfig
    tower: Tower
    core: CoreResult
    numeric: CoreResult
    stability: StabilityClass
    recurrence: RecurrenceWitness
    ergodic: ErgodicCount


def analyze(spec, config: AnalysisConfig = AnalysisConfig()) -> Analysis:
    tower = compile_spec(spec)
    stab = stability_class(spec)
    core = compute_core(spec, config.place, config.steps, config.tolerance)
    numeric = core if core.kind == "numeric" else core_numeric(spec, config.place, config.steps)
    return Analysis(config, tower, core, numeric, stab, is_recurrent(spec), ergodic_count(core, stab))


# ---------------------------------------------------------------------------
# formatting helpers


def exact_str(x) -> str:
    """Exact rendering: ``7``, ``3/4`` or ``(4+sqrt(37))/7``."""
    return str(x)


def ray_str(ray) -> str:
    return "(" + ", ".join(exact_str(c) for c in ray) + ")"


def matrix_str(m) -> str:
    return "[" + ", ".join("[" + ",".join(map(str, row)) + "]" for row in m) + "]"


def _matrix_json(m) -> list:
    return [[str(x) for x in row] for row in m]


def _kappa_str(kappa) -> str:
    return "inf" if kappa is None else str(kappa)


# ---------------------------------------------------------------------------
# JSON


def _core_json(core: CoreResult) -> dict:
    out = {
        "kind": core.kind,
        "place": str(core.place),
        "dimension": str(core.dim),
        "exact": core.exact,
        "rays": [[exact_str(c) for c in r] for r in core.rays],
        "field_D": None if core.field_D is None else str(core.field_D),
        "eigenvalue": None if core.eigenvalue is None else str(core.eigenvalue),
        "note": core.note,
        "warnings": list(core.warnings),
    }
    if core.enclosures:
        out["slope_enclosures"] = [{"lo": str(e.lo), "hi": str(e.hi), "ray": "(x, 1)"} for e in core.enclosures]
    if core.kind == "numeric":
        out["hilbert_diameter_kappa"] = _kappa_str(core.kappa)
        out["iterations"] = str(core.iterations)
        out["invariant_cone"] = core.stable
    return out


def _certificate_json(cert) -> dict | None:
    if cert is None:
        return None
    return {"block": _matrix_json(cert.block), "kappa": str(cert.kappa),
            "tau_upper": str(cert.tau), "applications": str(cert.applications)}


def report_dict(a: Analysis) -> dict:
    t = a.tower
    rec = {"status": a.recurrence.status}
    if a.recurrence.block is not None:
        rec["block"] = _matrix_json(a.recurrence.block)
        rec["exponent"] = str(a.recurrence.exponent)
    certs = {
        "contraction": _certificate_json(a.numeric.certificate),
        "numeric_cone": {"steps": str(a.numeric.iterations), "hilbert_diameter_kappa": _kappa_str(a.numeric.kappa),
                         "rays": [[str(c) for c in r] for r in a.numeric.rays]},
    }
    if a.core.enclosures:
        certs["gcf_enclosures"] = {"depth": str(a.core.iterations),
                                   "caveats": list(a.core.warnings)}
    stored = {"prefix": [_matrix_json(m) for m in t.prefix], "cycle": [_matrix_json(m) for m in t.cycle]}
    rows = {"prefix": [_matrix_json(mx.transpose(m)) for m in t.prefix],
            "cycle": [_matrix_json(mx.transpose(m)) for m in t.cycle]}
    return {
        "core": _core_json(a.core),
        "stability": a.stability.value,
        "recurrent": rec,
        "ergodic_measures": {"kind": a.ergodic.kind, "value": str(a.ergodic.value)},
        "certificates": certs,
        "tower": {"source": t.source, "labels": list(t.labels), "stored_column_convention": stored,
                  "transpose_row_vector_convention": rows},
        "positivity_model": a.core.note,
    }


def dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def report_json(a: Analysis) -> str:
    return dumps(report_dict(a))


# ---------------------------------------------------------------------------
# text


def _core_lines(core: CoreResult) -> list[str]:
    lines = []
    if core.kind == "line" and core.exact:
        lines.append(f"core: exact line at place {core.place}")
        lines.append(f"  ray: {ray_str(core.rays[0])}")
        lines.append(f"  eigenvalue: {core.eigenvalue} (informational, not a complete invariant)")
        lines.append(f"  field: Q(sqrt({core.field_D}))" if core.field_D != 1 else "  field: Q")
    elif core.kind == "rank1":
        lines.append(f"core: rank one (a single half-line) at place {core.place}")
        lines.append(f"  growth of the cycle: {core.eigenvalue}")
    elif core.kind in ("line", "sector"):
        lines.append(f"core: {core.kind} at place {core.place}, endpoints known by certified enclosure")
        for e in core.enclosures:
            lines.append(f"  ray (x, 1) with x in [{float(e.lo):.12g}, {float(e.hi):.12g}]  width {float(e.width):.3g}")
    else:
        lines.append(f"core: numeric cone at place {core.place} after {core.iterations} steps, "
                     f"{len(core.rays)} extreme rays")
        for r in core.rays:
            lines.append("  ray: (" + ", ".join(f"{float(c):.12g}" for c in r) + ")")
        lines.append(f"  Hilbert diameter <= {cones.log_kappa(core.kappa):.6g}")
    for w in core.warnings:
        lines.append(f"  warning: {w}")
    return lines


def report_text(a: Analysis) -> str:
    t = a.tower
    lines = [f"presentation: {t.source}, dimension {t.dim}, basis {', '.join(t.labels)}"]
    for name, ms in (("prefix", t.prefix), ("cycle", t.cycle)):
        if ms:
            shown = ", ".join(matrix_str(m) for m in ms[:6]) + (", ..." if len(ms) > 6 else "")
            lines.append(f"{name} ({len(ms)} maps, column convention): {shown}")
    if t.cycle and len(t.cycle) == 1:
        lines.append(f"transpose (row-vector convention): {matrix_str(mx.transpose(t.cycle[0]))}")
    lines.append(f"stability: {STABILITY_TEXT[a.stability]}")
    rec = a.recurrence
    if rec.status == "recurrent":
        lines.append(f"recurrent: yes, positive block {matrix_str(rec.block)} (cycle power {rec.exponent})")
    else:
        lines.append(f"recurrent: {'no' if rec.status == 'not-recurrent' else 'unknown (finite data)'}")
    lines.extend(_core_lines(a.core))
    if a.numeric is not a.core:
        lines.append(f"numeric cone after {a.numeric.iterations} steps: Hilbert diameter <= "
                     f"{cones.log_kappa(a.numeric.kappa):.6g}")
    cert = a.numeric.certificate
    if cert is not None:
        lines.append(f"contraction certificate: kappa = {cert.kappa}, tau <= {float(cert.tau):.6g}, "
                     f"{cert.applications} positive blocks, diameter <= {cert.diameter_bound():.6g}")
    lines.append(f"ergodic measures: {a.ergodic}")
    lines.append(f"note: {a.core.note}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# CSV


def csv_rows(a: Analysis) -> list[tuple]:
    """One row per tower step from the analysed place: the first column of
    the prefix product, its slope, and the Hilbert diameter of the cone."""
    t = a.tower.shifted(a.config.place)
    avail = t.available(0)
    n = a.config.steps if avail is None else min(a.config.steps, avail)
    rows, p = [], mx.identity(t.dim)
    for k in range(1, n + 1):
        p = mx.mat_mul(p, t.matrix(k - 1))
        pk = p[0][0]
        qk = p[1][0] if t.dim > 1 else 1
        conv = repr(float(Fraction(pk, qk))) if qk else "inf"
        rays = [cones.normalize(mx.column(p, j)) for j in range(t.dim) if any(mx.column(p, j))]
        rays = cones.extreme_rays(rays)
        kappa = cones.diameter_kappa(rays) if len(rays) > 1 else Fraction(1)
        diam = "inf" if kappa is None else repr(cones.log_kappa(kappa))
        rows.append((k, pk, qk, conv, diam))
    return rows


def emit_csv(a: Analysis) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(CSV_HEADER)
    w.writerows(csv_rows(a))
    return buf.getvalue()
