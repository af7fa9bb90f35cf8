"""Named example inputs: the three two-letter substitutions, the two-vertex
complex K with its self-map families, and a few ready-made towers."""

from __future__ import annotations

from .homology import DirectedGraph, GraphSelfMap, Substitution, cycle_basis, parse_edge_word, parse_word

SIGMA1 = Substitution("ab", {"a": parse_word("a^10 b^7", "ab"), "b": parse_word("a^3 b^2", "ab")})
SIGMA2 = Substitution("ab", {"a": parse_word("a^11 b^4", "ab"), "b": parse_word("a^3 b", "ab")})
SIGMA3 = Substitution("ab", {"a": tuple("ababaababaababaab"), "b": tuple("ababa")})

# K: vertices u (left), w (right); a, b run w -> u and c runs u -> w.
# Edges are declared b, a, c so the fundamental cycles for the tree {c}
# come out as (b + c, a + c).
K = DirectedGraph(("u", "w"), (("b", "w", "u"), ("a", "w", "u"), ("c", "u", "w")))
K_TREE = frozenset({"c"})
K_BASIS = cycle_basis(K, K_TREE)
_K_SWAP = {"u": "w", "w": "u"}


def f_map(n: int) -> GraphSelfMap:
    """a -> c, b -> c a (c b)^(n-1) c, c -> b."""
    return f_mn(1, n)


def f_mn(m: int, n: int) -> GraphSelfMap:
    """a -> c, b -> (c a)^m (c b)^(n-1) c, c -> b."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be positive")
    word = "ca" * m + "cb" * (n - 1) + "c"
    return GraphSelfMap(K, _K_SWAP, {
        "a": parse_edge_word("c", K.edge_ids),
        "b": parse_edge_word(word, K.edge_ids),
        "c": parse_edge_word("b", K.edge_ids),
    })


def substitution_json(s: Substitution) -> dict:
    return {"type": "substitution", "alphabet": list(s.alphabet),
            "rules": {k: "".join(v) for k, v in s.rules.items()}}


def k_graph_json() -> dict:
    return {"vertices": list(K.vertices),
            "edges": [{"id": e, "from": s, "to": t} for e, s, t in K.edges]}


EXAMPLE_INPUTS = {
    "sigma1": substitution_json(SIGMA1),
    "sigma2": substitution_json(SIGMA2),
    "sigma3": substitution_json(SIGMA3),
    "cf_12": {"type": "cf", "preperiod": [], "period": [12]},
    "cf_123": {"type": "cf", "preperiod": [], "period": [1, 2, 3]},
    "cf_213": {"type": "cf", "preperiod": [], "period": [2, 1, 3]},
    "gcf_case2": {"type": "gcf", "a": {"explicit": [2 ** (2 * n - 1) for n in range(1, 31)]},
                  "b": {"preperiod": [], "period": [1]}, "tail_rule": None},
    "gcf_a1_b2": {"type": "gcf", "a": {"preperiod": [], "period": [1]},
                  "b": {"preperiod": [], "period": [2]}, "tail_rule": None},
    "dyadic": {"type": "solenoid", "indices": {"preperiod": [], "period": [2]}},
    "f5_graphmap": {"type": "graphmap", "graph": k_graph_json(), "vertex_map": dict(_K_SWAP),
                    "edge_map": {"a": "c", "b": "c a c b c b c b c b c", "c": "b"},
                    "tree": ["c"], "basis_order": ["b", "a"]},
}
