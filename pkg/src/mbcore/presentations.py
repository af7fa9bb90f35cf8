"""Presentation specs and their compilation into matrix towers.

Every supported input (explicit or eventually periodic matrix lists,
substitutions, graph self-maps, continued-fraction data, solenoid index
chains) compiles to a :class:`Tower`: a finite prefix of non-negative
integer matrices followed by an optional cycle repeated forever.  Matrix
``n`` of a tower is the bonding map from place ``n+1`` to place ``n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

from . import matrices as mx
from .errors import InputError, OrientationError
from .homology import (
    DirectedGraph,
    GraphSelfMap,
    Substitution,
    abelianization,
    cycle_basis,
    induced_h1_matrix,
    parse_edge_word,
    parse_word,
    proper_power,
)

# ---------------------------------------------------------------------------
# integer sequences


@dataclass(frozen=True)
class IntegerSequenceSpec:
    """Positive integer sequence: ``preperiod`` then ``period`` repeated.

    An empty period means the sequence is explicit (finite).
    """

    preperiod: tuple = ()
    period: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "preperiod", tuple(self.preperiod))
        object.__setattr__(self, "period", tuple(self.period))
        for x in self.preperiod + self.period:
            if not isinstance(x, int) or isinstance(x, bool) or x < 1:
                raise InputError(f"sequence terms must be positive integers, got {x!r}")
        if not self.preperiod and not self.period:
            raise InputError("empty sequence")

    @classmethod
    def explicit(cls, terms: Sequence[int]) -> "IntegerSequenceSpec":
        return cls(tuple(terms), ())

    @classmethod
    def periodic(cls, period: Sequence[int], preperiod: Sequence[int] = ()) -> "IntegerSequenceSpec":
        if not period:
            raise InputError("period must be non-empty")
        return cls(tuple(preperiod), tuple(period))

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    @property
    def length(self) -> int | None:
        return None if self.period else len(self.preperiod)

    def __getitem__(self, i: int) -> int:
        if i < 0:
            raise IndexError(i)
        if i < len(self.preperiod):
            return self.preperiod[i]
        if not self.period:
            raise IndexError(f"sequence has only {len(self.preperiod)} terms")
        return self.period[(i - len(self.preperiod)) % len(self.period)]

    def head(self, n: int) -> tuple:
        return tuple(self[i] for i in range(n))

    def shift(self, k: int) -> "IntegerSequenceSpec":
        """The sequence with its first ``k`` terms dropped."""
        if k < len(self.preperiod):
            return IntegerSequenceSpec(self.preperiod[k:], self.period)
        if not self.period:
            raise InputError(f"sequence has fewer than {k + 1} terms")
        j = (k - len(self.preperiod)) % len(self.period)
        return IntegerSequenceSpec((), self.period[j:] + self.period[:j])

    def to_json(self) -> dict:
        if self.period:
            return {"preperiod": list(self.preperiod), "period": list(self.period)}
        return {"explicit": list(self.preperiod)}


def zip_sequences(*seqs: IntegerSequenceSpec) -> tuple[list, list]:
    """Tuples of terms as (prefix, cycle); cycle empty if any input is finite."""
    if all(s.is_periodic for s in seqs):
        pre = max(len(s.preperiod) for s in seqs)
        per = math.lcm(*(len(s.period) for s in seqs))
        rows = [tuple(s[i] for s in seqs) for i in range(pre + per)]
        return rows[:pre], rows[pre:]
    n = min(s.length for s in seqs if s.length is not None)
    return [tuple(s[i] for s in seqs) for i in range(n)], []


# ---------------------------------------------------------------------------
# towers


@dataclass(frozen=True)
class Tower:
    """Compiled presentation: ``prefix`` then ``cycle`` repeated (if any)."""

    prefix: tuple
    cycle: tuple = ()
    labels: tuple = ()
    source: str = "matrices"

    def __post_init__(self):
        ms = list(self.prefix) + list(self.cycle)
        if not ms:
            raise InputError("tower has no matrices")
        d = len(ms[0])
        for i, m in enumerate(ms):
            if len(m) != d:
                raise InputError(f"dimension drift: matrix {i} is {len(m)}x{len(m)}, expected {d}x{d}")
            if not mx.is_nonnegative(m):
                raise OrientationError(f"matrix {i} has a negative entry; the positive basis must map to non-negative classes")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(f"e{i}" for i in range(d)))

    @property
    def dim(self) -> int:
        return len((self.prefix or self.cycle)[0])

    @property
    def is_finite(self) -> bool:
        return not self.cycle

    @property
    def length(self) -> int | None:
        return len(self.prefix) if self.is_finite else None

    def matrix(self, n: int):
        if n < len(self.prefix):
            return self.prefix[n]
        if not self.cycle:
            raise IndexError(f"finite tower has only {len(self.prefix)} matrices")
        return self.cycle[(n - len(self.prefix)) % len(self.cycle)]

    def matrices(self, start: int, count: int) -> list:
        return [self.matrix(start + i) for i in range(count)]

    def prefix_product(self, start: int, count: int):
        return mx.product(*self.matrices(start, count), n=self.dim)

    def available(self, start: int) -> int | None:
        """Number of matrices from ``start`` on (``None`` = unbounded)."""
        return None if self.cycle else max(0, len(self.prefix) - start)

    def shifted(self, k: int) -> "Tower":
        """The tower seen from place ``k``."""
        if k <= len(self.prefix):
            if self.is_finite and k >= len(self.prefix):
                raise InputError(f"place {k} is beyond the end of a finite tower of length {len(self.prefix)}")
            return Tower(self.prefix[k:], self.cycle, self.labels, self.source)
        j = (k - len(self.prefix)) % len(self.cycle)
        return Tower((), self.cycle[j:] + self.cycle[:j], self.labels, self.source)

    def cycle_product(self):
        if not self.cycle:
            raise ValueError("finite tower has no cycle")
        return mx.product(*self.cycle)


# ---------------------------------------------------------------------------
# presentation specs


@dataclass(frozen=True)
class MatrixTower:
    """Explicit matrices (``cycle`` empty) or eventually periodic ones."""

    prefix: tuple = ()
    cycle: tuple = ()
    labels: tuple = ()


@dataclass(frozen=True)
class SubstitutionTower:
    substitution: Substitution
    use_proper_power: bool = True


@dataclass(frozen=True)
class GraphMapTower:
    graph: DirectedGraph
    prefix_maps: tuple = ()
    cycle_maps: tuple = ()
    tree: frozenset | None = None
    basis_order: tuple | None = None


@dataclass(frozen=True)
class CFTower:
    terms: IntegerSequenceSpec


@dataclass(frozen=True)
class GCFTower:
    """``alpha = (a_1, a_2, ...)``, ``beta = (b_0, b_1, ...)``."""

    alpha: IntegerSequenceSpec
    beta: IntegerSequenceSpec
    tail_rule: str | None = None

    def __post_init__(self):
        if self.tail_rule not in (None, "bn_gt_an"):
            raise InputError(f"unknown tail rule {self.tail_rule!r}", "tail_rule")


@dataclass(frozen=True)
class SolenoidTower:
    indices: IntegerSequenceSpec

    def __post_init__(self):
        terms = self.indices.preperiod + self.indices.period
        if any(x < 2 for x in terms):
            raise InputError("subgroup indices must be at least 2", "indices")


PresentationSpec = MatrixTower | SubstitutionTower | GraphMapTower | CFTower | GCFTower | SolenoidTower


def cf_matrix(n: int):
    return ((n, 1), (1, 0))


def gcf_matrix(a: int, b: int):
    return ((b, 1), (a, 0))


def compile_spec(spec) -> Tower:
    """Compile a presentation spec into a :class:`Tower`."""
    if isinstance(spec, Tower):
        return spec
    if isinstance(spec, MatrixTower):
        return Tower(tuple(mx.as_matrix(m) for m in spec.prefix),
                     tuple(mx.as_matrix(m) for m in spec.cycle), tuple(spec.labels))
    if isinstance(spec, SubstitutionTower):
        s = spec.substitution
        k = (proper_power(s) or 1) if spec.use_proper_power else 1
        m = abelianization(s.power(k))
        return Tower((), (m,), tuple(map(str, s.alphabet)), "substitution")
    if isinstance(spec, GraphMapTower):
        basis = cycle_basis(spec.graph, spec.tree, spec.basis_order)
        pre = tuple(induced_h1_matrix(spec.graph, f, basis) for f in spec.prefix_maps)
        cyc = tuple(induced_h1_matrix(spec.graph, f, basis) for f in spec.cycle_maps)
        return Tower(pre, cyc, tuple(f"z[{e}]" for e in basis.generators), "graphmap")
    if isinstance(spec, CFTower):
        n = spec.terms
        return Tower(tuple(cf_matrix(x) for x in n.preperiod),
                     tuple(cf_matrix(x) for x in n.period), ("z1", "z2"), "cf")
    if isinstance(spec, GCFTower):
        b0 = spec.beta[0]
        pre, cyc = zip_sequences(spec.alpha, spec.beta.shift(1))
        return Tower((cf_matrix(b0),) + tuple(gcf_matrix(a, b) for a, b in pre),
                     tuple(gcf_matrix(a, b) for a, b in cyc), ("z1", "z2"), "gcf")
    if isinstance(spec, SolenoidTower):
        n = spec.indices
        return Tower(tuple(((x,),) for x in n.preperiod), tuple(((x,),) for x in n.period), ("M",), "solenoid")
    raise TypeError(f"not a presentation spec: {spec!r}")


# ---------------------------------------------------------------------------
# classification


class StabilityClass(enum.Enum):
    Z_STABLE = "z"
    Q_STABLE = "q"
    UNSTABLE = "unstable"
    UNKNOWN_BEYOND_PREFIX = "prefix-only"

    @property
    def rank(self) -> int:
        return {"z": 3, "q": 2, "prefix-only": 1, "unstable": 0}[self.value]

    def at_least_q(self) -> bool:
        return self in (StabilityClass.Z_STABLE, StabilityClass.Q_STABLE)


def stability_class(spec) -> StabilityClass:
    """Z-stable iff every bonding matrix is unimodular, Q-stable iff every one
    is nonsingular.  Finite explicit towers only get a prefix verdict unless
    the family guarantees the answer for every continuation."""
    tower = compile_spec(spec)
    dets = [mx.det(m) for m in tower.prefix + tower.cycle]
    if any(d == 0 for d in dets):
        return StabilityClass.UNSTABLE
    if isinstance(spec, CFTower):
        return StabilityClass.Z_STABLE
    if isinstance(spec, (GCFTower, SolenoidTower)):
        # every admissible term gives det = -a_k or the index, never 0
        if tower.is_finite or not all(d in (1, -1) for d in dets):
            return StabilityClass.Q_STABLE
        return StabilityClass.Z_STABLE
    if tower.is_finite:
        return StabilityClass.UNKNOWN_BEYOND_PREFIX
    if all(d in (1, -1) for d in dets):
        return StabilityClass.Z_STABLE
    return StabilityClass.Q_STABLE


def prefix_stability(tower: Tower) -> StabilityClass:
    dets = [mx.det(m) for m in tower.prefix + tower.cycle]
    if any(d == 0 for d in dets):
        return StabilityClass.UNSTABLE
    if all(d in (1, -1) for d in dets):
        return StabilityClass.Z_STABLE
    return StabilityClass.Q_STABLE


@dataclass(frozen=True)
class RecurrenceWitness:
    status: str  # "recurrent" | "not-recurrent" | "unknown"
    block: tuple | None = None
    exponent: int | None = None

    def __post_init__(self):
        if self.status == "recurrent":
            assert self.block is not None and mx.is_positive(self.block)


def is_recurrent(spec) -> RecurrenceWitness:
    tower = compile_spec(spec)
    if tower.is_finite:
        return RecurrenceWitness("unknown")
    c = tower.cycle_product()
    k = mx.primitivity_exponent(c)
    if k is None:
        return RecurrenceWitness("not-recurrent")
    return RecurrenceWitness("recurrent", mx.power(c, k), k)


# ---------------------------------------------------------------------------
# telescoping


def telescope(spec, block_lengths: Sequence[int]) -> MatrixTower:
    """Multiply consecutive blocks of bonding maps.

    For a finite tower the blocks must tile an initial segment.  For an
    eventually periodic tower the pattern is repeated forever; the result is
    again eventually periodic and is returned in that form.
    """
    tower = compile_spec(spec)
    blocks = tuple(block_lengths)
    if not blocks or any((not isinstance(b, int)) or b < 1 for b in blocks):
        raise InputError("block lengths must be positive integers")
    if tower.is_finite:
        if sum(blocks) > len(tower.prefix):
            raise InputError(f"blocks cover {sum(blocks)} maps but the tower has {len(tower.prefix)}")
        out, pos = [], 0
        for b in blocks:
            out.append(tower.prefix_product(pos, b))
            pos += b
        return MatrixTower(tuple(out), (), tower.labels)

    npre, p = len(tower.prefix), len(tower.cycle)

    def state(pos, j):
        return (pos if pos < npre else npre + (pos - npre) % p, j)

    seen, products, pos, j = {}, [], 0, 0
    while state(pos, j) not in seen:
        seen[state(pos, j)] = len(products)
        products.append(tower.prefix_product(pos, blocks[j]))
        pos += blocks[j]
        j = (j + 1) % len(blocks)
    start = seen[state(pos, j)]
    return MatrixTower(tuple(products[:start]), tuple(products[start:]), tower.labels)


# ---------------------------------------------------------------------------
# JSON


def sequence_from_json(obj, where: str) -> IntegerSequenceSpec:
    if isinstance(obj, list):
        return IntegerSequenceSpec.explicit(_ints(obj, where))
    if not isinstance(obj, dict):
        raise InputError("expected a sequence object or list", where)
    if "explicit" in obj:
        return IntegerSequenceSpec.explicit(_ints(obj["explicit"], f"{where}.explicit"))
    if "period" not in obj:
        raise InputError("sequence needs 'explicit' or 'period'", where)
    period = _ints(obj["period"], f"{where}.period")
    if not period:
        raise InputError("period must be non-empty", f"{where}.period")
    try:
        return IntegerSequenceSpec.periodic(period, _ints(obj.get("preperiod", []), f"{where}.preperiod"))
    except InputError as exc:
        raise InputError(str(exc), where) from None


def _ints(xs, where) -> list:
    if not isinstance(xs, list) or any(not isinstance(x, int) or isinstance(x, bool) for x in xs):
        raise InputError("expected a list of integers", where)
    return xs


def _matrix_list(obj, where):
    if obj is None:
        return ()
    if not isinstance(obj, list):
        raise InputError("expected a list of matrices", where)
    return tuple(mx.as_matrix(m, field=f"{where}[{i}]") for i, m in enumerate(obj))


def spec_from_json(obj):
    """Build a presentation spec from its JSON object."""
    if not isinstance(obj, dict) or "type" not in obj:
        raise InputError("input must be an object with a 'type' field", "type")
    kind = obj["type"]
    if kind == "matrices":
        return MatrixTower(_matrix_list(obj.get("prefix"), "prefix"), _matrix_list(obj.get("cycle"), "cycle"),
                           tuple(obj.get("labels", ())))
    if kind == "cf":
        if "explicit" in obj:
            return CFTower(sequence_from_json({"explicit": obj["explicit"]}, "explicit"))
        return CFTower(sequence_from_json(obj, "cf"))
    if kind == "gcf":
        for key in ("a", "b"):
            if key not in obj:
                raise InputError("missing field", key)
        return GCFTower(sequence_from_json(obj["a"], "a"), sequence_from_json(obj["b"], "b"), obj.get("tail_rule"))
    if kind == "solenoid":
        if "indices" not in obj:
            raise InputError("missing field", "indices")
        return SolenoidTower(sequence_from_json(obj["indices"], "indices"))
    if kind == "substitution":
        alphabet = obj.get("alphabet")
        rules = obj.get("rules")
        if not isinstance(alphabet, list) or not isinstance(rules, dict):
            raise InputError("substitution needs 'alphabet' (list) and 'rules' (object)", "rules")
        return SubstitutionTower(Substitution(tuple(alphabet), {k: parse_word(v, alphabet) for k, v in rules.items()}))
    if kind == "graphmap":
        g = obj.get("graph")
        if not isinstance(g, dict):
            raise InputError("missing graph object", "graph")
        try:
            edges = tuple((e["id"], e["from"], e["to"]) for e in g["edges"])
            graph = DirectedGraph(tuple(g["vertices"]), edges)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed graph: {exc}", "graph") from None

        def read_map(m, where):
            if not isinstance(m, dict) or "vertex_map" not in m or "edge_map" not in m:
                raise InputError("map needs 'vertex_map' and 'edge_map'", where)
            words = {e: parse_edge_word(w, graph.edge_ids) for e, w in m["edge_map"].items()}
            return GraphSelfMap(graph, m["vertex_map"], words)

        if "maps" in obj or "cycle_maps" in obj:
            pre = tuple(read_map(m, f"maps[{i}]") for i, m in enumerate(obj.get("maps", [])))
            cyc = tuple(read_map(m, f"cycle_maps[{i}]") for i, m in enumerate(obj.get("cycle_maps", [])))
        else:
            pre, cyc = (), (read_map(obj, "edge_map"),)
        tree = frozenset(obj["tree"]) if obj.get("tree") is not None else None
        order = tuple(obj["basis_order"]) if obj.get("basis_order") is not None else None
        return GraphMapTower(graph, pre, cyc, tree, order)
    raise InputError(f"unknown input type {kind!r}", "type")


def spec_to_json(spec) -> dict:
    """JSON object for the spec kinds that round-trip simply."""
    if isinstance(spec, MatrixTower):
        out = {"type": "matrices", "prefix": [list(map(list, m)) for m in spec.prefix],
               "cycle": [list(map(list, m)) for m in spec.cycle]}
        if spec.labels:
            out["labels"] = list(spec.labels)
        return out
    if isinstance(spec, CFTower):
        return {"type": "cf", **spec.terms.to_json()}
    if isinstance(spec, GCFTower):
        return {"type": "gcf", "a": spec.alpha.to_json(), "b": spec.beta.to_json(), "tail_rule": spec.tail_rule}
    if isinstance(spec, SolenoidTower):
        return {"type": "solenoid", "indices": spec.indices.to_json()}
    if isinstance(spec, SubstitutionTower):
        s = spec.substitution
        return {"type": "substitution", "alphabet": list(s.alphabet), "rules": {k: list(v) for k, v in s.rules.items()}}
    raise TypeError(f"no JSON form for {type(spec).__name__}")
