"""First homology of graphs under cellular self-maps, and substitutions.

Chains are ``dict`` edge id -> integer coefficient.  A graph self-map sends
each edge to an edge path (an :data:`EdgeWord`, a tuple of ``(edge, +-1)``).
"""

from __future__ import annotations

from collections import Counter, deque
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Mapping, Sequence

from .errors import InputError
from .matrices import IntMatrix

EdgeWord = tuple  # tuple[tuple[Hashable, int], ...]


@dataclass(frozen=True)
class DirectedGraph:
    vertices: tuple
    edges: tuple  # (id, source, target)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))
        if not self.edges:
            raise InputError("graph needs at least one edge")
        ids = [e[0] for e in self.edges]
        if len(set(ids)) != len(ids):
            raise InputError("edge ids must be unique")
        vs = set(self.vertices)
        for eid, s, t in self.edges:
            if s not in vs or t not in vs:
                raise InputError(f"edge {eid!r} uses an unknown vertex")
        if len(self._component(self.vertices[0])) != len(vs):
            raise InputError("graph must be connected")

    @property
    def edge_ids(self) -> tuple:
        return tuple(e[0] for e in self.edges)

    def endpoints(self, eid) -> tuple:
        for e in self.edges:
            if e[0] == eid:
                return e[1], e[2]
        raise KeyError(eid)

    def _component(self, start, allowed=None) -> set:
        seen, todo = {start}, [start]
        while todo:
            v = todo.pop()
            for eid, s, t in self.edges:
                if allowed is not None and eid not in allowed:
                    continue
                for a, b in ((s, t), (t, s)):
                    if a == v and b not in seen:
                        seen.add(b)
                        todo.append(b)
        return seen

    def boundary(self, chain: Mapping) -> Counter:
        out = Counter()
        for eid, c in chain.items():
            s, t = self.endpoints(eid)
            out[t] += c
            out[s] -= c
        return Counter({v: c for v, c in out.items() if c})


@dataclass(frozen=True)
class CycleBasis:
    """Spanning tree plus one fundamental cycle per non-tree edge."""

    tree: frozenset
    generators: tuple  # non-tree edge ids, in basis order
    cycles: tuple  # chains (dict edge -> coefficient)

    def coordinates(self, chain: Mapping) -> tuple:
        return tuple(chain.get(e, 0) for e in self.generators)


def _spanning_tree(g: DirectedGraph) -> frozenset:
    root = g.vertices[0]
    seen, tree, todo = {root}, set(), deque([root])
    while todo:
        v = todo.popleft()
        for eid, s, t in g.edges:
            for a, b in ((s, t), (t, s)):
                if a == v and b not in seen:
                    seen.add(b)
                    tree.add(eid)
                    todo.append(b)
    return frozenset(tree)


def _tree_path(g: DirectedGraph, tree: frozenset, start, goal) -> dict:
    """Chain of the unique tree path from ``start`` to ``goal``."""
    prev = {start: None}
    todo = deque([start])
    while todo:
        v = todo.popleft()
        if v == goal:
            break
        for eid, s, t in g.edges:
            if eid not in tree:
                continue
            if s == v and t not in prev:
                prev[t] = (eid, 1, v)
                todo.append(t)
            elif t == v and s not in prev:
                prev[s] = (eid, -1, v)
                todo.append(s)
    chain = Counter()
    v = goal
    while prev[v] is not None:
        eid, sgn, u = prev[v]
        chain[eid] += sgn
        v = u
    return chain


def cycle_basis(g: DirectedGraph, preferred_tree: Iterable | None = None,
                order: Sequence | None = None) -> CycleBasis:
    """Fundamental cycles of ``g`` relative to a spanning tree.

    Each non-tree edge ``e`` contributes ``e`` plus the tree path from its
    target back to its source.  ``order`` optionally fixes the order of the
    non-tree edges; otherwise edge declaration order is used.
    """
    if preferred_tree is None:
        tree = _spanning_tree(g)
    else:
        tree = frozenset(preferred_tree)
        if not tree <= set(g.edge_ids):
            raise InputError("preferred tree uses unknown edges", "tree")
        if len(tree) != len(g.vertices) - 1 or len(g._component(g.vertices[0], tree)) != len(g.vertices):
            raise InputError("preferred tree is not a spanning tree", "tree")
    gens = [e for e in g.edge_ids if e not in tree]
    if order is not None:
        if sorted(map(str, order)) != sorted(map(str, gens)) or len(order) != len(gens):
            raise InputError(f"basis order must list exactly the non-tree edges {gens}", "basis_order")
        gens = list(order)
    cycles = []
    for e in gens:
        s, t = g.endpoints(e)
        chain = _tree_path(g, tree, t, s)
        chain[e] += 1
        cycles.append({k: v for k, v in chain.items() if v})
    return CycleBasis(tree, tuple(gens), tuple(cycles))


@dataclass(frozen=True)
class GraphSelfMap:
    """Cellular self-map: a vertex assignment and an edge path per edge."""

    graph: DirectedGraph
    vertex_map: Mapping
    edge_map: Mapping  # edge id -> EdgeWord

    def __post_init__(self):
        g = self.graph
        object.__setattr__(self, "vertex_map", dict(self.vertex_map))
        object.__setattr__(self, "edge_map", {k: tuple(tuple(x) for x in w) for k, w in self.edge_map.items()})
        if set(self.vertex_map) != set(g.vertices):
            raise InputError("vertex map must assign every vertex", "vertex_map")
        if set(self.edge_map) != set(g.edge_ids):
            raise InputError("edge map must assign every edge", "edge_map")
        for eid, s, t in g.edges:
            word = self.edge_map[eid]
            start, end = word_endpoints(g, word) if word else (self.vertex_map[s],) * 2
            if (start, end) != (self.vertex_map[s], self.vertex_map[t]):
                raise InputError(
                    f"image of edge {eid!r} runs {start!r}->{end!r}, expected "
                    f"{self.vertex_map[s]!r}->{self.vertex_map[t]!r}", f"edge_map.{eid}")

    def chain_image(self, chain: Mapping) -> Counter:
        out = Counter()
        for eid, c in chain.items():
            for e, sgn in self.edge_map[eid]:
                out[e] += c * sgn
        return Counter({k: v for k, v in out.items() if v})


def word_endpoints(g: DirectedGraph, word: EdgeWord) -> tuple:
    """Start and end vertex of an edge path; raises if it is not a path."""
    cur = start = None
    for i, (eid, sgn) in enumerate(word):
        s, t = g.endpoints(eid)
        if sgn == -1:
            s, t = t, s
        elif sgn != 1:
            raise InputError(f"bad orientation {sgn!r}")
        if i == 0:
            start = s
        elif s != cur:
            raise InputError(f"edge word is not a path: step {i} ({eid!r}) starts at {s!r}, previous ended at {cur!r}")
        cur = t
    return start, cur


def parse_edge_word(text, edge_ids) -> EdgeWord:
    """Lowercase/declared id = forward, uppercase or ``-id`` = reversed.

    Tokens are whitespace separated; a string without whitespace is read one
    character per edge.
    """
    ids = set(edge_ids)
    if isinstance(text, (list, tuple)):
        tokens = list(text)
    else:
        tokens = text.split() if any(ch.isspace() for ch in text) else list(text)
    word = []
    for tok in tokens:
        if tok in ids:
            word.append((tok, 1))
        elif tok.startswith("-") and tok[1:] in ids:
            word.append((tok[1:], -1))
        elif tok.lower() in ids and tok != tok.lower():
            word.append((tok.lower(), -1))
        else:
            raise InputError(f"unknown edge {tok!r} in word {text!r}")
    return tuple(word)


def compose(g_map: GraphSelfMap, f_map: GraphSelfMap) -> GraphSelfMap:
    """``g_map`` after ``f_map``."""
    g = f_map.graph
    vm = {v: g_map.vertex_map[f_map.vertex_map[v]] for v in g.vertices}
    em = {}
    for eid, word in f_map.edge_map.items():
        out = []
        for e, sgn in word:
            img = g_map.edge_map[e]
            out.extend(img if sgn == 1 else tuple((x, -s) for x, s in reversed(img)))
        em[eid] = tuple(out)
    return GraphSelfMap(g, vm, em)


def induced_h1_matrix(g: DirectedGraph, f: GraphSelfMap, basis: CycleBasis | None = None) -> IntMatrix:
    """Matrix of ``f_*`` on ``H_1(g)`` in the given cycle basis (columns = images)."""
    if basis is None:
        basis = cycle_basis(g)
    cols = []
    for z in basis.cycles:
        img = f.chain_image(z)
        assert not g.boundary(img), "image of a cycle must be a cycle"
        cols.append(basis.coordinates(img))
    return tuple(zip(*cols)) if cols else ()


@dataclass(frozen=True)
class Substitution:
    alphabet: tuple
    rules: Mapping = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        rules = {k: tuple(v) for k, v in dict(self.rules).items()}
        object.__setattr__(self, "rules", rules)
        letters = set(self.alphabet)
        if len(letters) != len(self.alphabet):
            raise InputError("alphabet has repeated letters", "alphabet")
        if set(rules) != letters:
            raise InputError("every letter needs exactly one rule", "rules")
        for k, w in rules.items():
            if not w:
                raise InputError("rule image must be non-empty", f"rules.{k}")
            bad = [x for x in w if x not in letters]
            if bad:
                raise InputError(f"letters {bad} not in the alphabet", f"rules.{k}")

    def apply(self, word: Sequence) -> tuple:
        out = []
        for x in word:
            out.extend(self.rules[x])
        return tuple(out)

    def power(self, k: int) -> "Substitution":
        rules = {x: (x,) for x in self.alphabet}
        for _ in range(k):
            rules = {x: self.apply(w) for x, w in rules.items()}
        return Substitution(self.alphabet, rules)


def parse_word(text, alphabet) -> tuple:
    """``"aab"``, ``"a^10 b^7"`` or a list of letters."""
    if isinstance(text, (list, tuple)):
        return tuple(text)
    if "^" not in text and not any(ch.isspace() for ch in text):
        return tuple(text)
    out = []
    for tok in text.split():
        letter, _, exp = tok.partition("^")
        n = int(exp) if exp else 1
        if n < 0:
            raise InputError(f"negative exponent in {tok!r}")
        out.extend([letter] * n)
    return tuple(out)


def abelianization(s: Substitution) -> IntMatrix:
    """Entry ``(i, j)``: occurrences of letter ``i`` in the image of letter ``j``."""
    counts = {x: Counter(s.rules[x]) for x in s.alphabet}
    return tuple(tuple(counts[j][i] for j in s.alphabet) for i in s.alphabet)


def proper_power(s: Substitution, max_k: int = 16) -> int | None:
    """Least ``k <= max_k`` for which all images under ``s**k`` share a first
    letter and share a last letter."""
    first = {x: x for x in s.alphabet}
    last = dict(first)
    for k in range(1, max_k + 1):
        first = {x: s.rules[first[x]][0] for x in s.alphabet}
        last = {x: s.rules[last[x]][-1] for x in s.alphabet}
        if len(set(first.values())) == 1 and len(set(last.values())) == 1:
            return k
    return None
