"""Spanning trees over edges with uncertain weights.

Kruskal-style growth ordered by lower bounds under an index-breaking
comparison operator; cycles are resolved either by deleting an edge whose
lower bound dominates every other cycle edge's upper bound (the red rule) or,
when no such edge exists, by querying a two-edge witness pair and restarting.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .core import Area
from .engine import EngineError, OracleResponseError, RunReport, RunStatus
from .models import UncertainInstance, validate_instance, validate_response


@dataclass(frozen=True)
class UncertainGraph:
    """Edge order is identity: ties in the comparison operator break toward
    the smaller edge index."""

    vertices: int
    edges: Tuple[Tuple[int, int], ...]

    kind = "mst"

    def __post_init__(self) -> None:
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for u, v in self.edges:
            if u == v:
                raise ValueError("self-loops are not allowed")
            if not (0 <= u < self.vertices and 0 <= v < self.vertices):
                raise ValueError("edge endpoint out of range")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def is_connected(self, active: Optional[Sequence[int]] = None) -> bool:
        if self.vertices == 0:
            return False
        idx = range(self.n_edges) if active is None else active
        adj = defaultdict(list)
        for e in idx:
            u, v = self.edges[e]
            adj[u].append(v)
            adj[v].append(u)
        seen = {0}
        stack = [0]
        while stack:
            for w in adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == self.vertices


@dataclass(frozen=True)
class MstAnswer:
    tree: frozenset
    red_rule_count: int


def edge_prec(x: Fraction, e: int, y: Fraction, f: int) -> bool:
    """x (an endpoint value of edge e) precedes y (of edge f): smaller value
    first, equal values broken toward the smaller edge index."""
    if e == f:
        raise ValueError("cannot compare an edge with itself")
    return x < y or (x == y and e < f)


def always_maximal(cycle: Sequence[int], e: int, weights: Sequence[Area]) -> bool:
    """True iff every other cycle edge's upper bound precedes e's lower bound,
    so e can never be part of a minimum tree using this cycle."""
    if e not in cycle:
        raise ValueError("edge not on the cycle")
    if len(cycle) < 2:
        raise ValueError("a cycle needs at least two edges")
    return all(
        edge_prec(weights[c].hi, c, weights[e].lo, e) for c in cycle if c != e
    )


def mst_witness_or_delete(cycle: Sequence[int], weights: Sequence[Area]):
    """('delete', edge) when the red rule applies, else ('witness', (f, g)).

    f is the cycle edge with the largest upper bound under the comparison
    operator; g is the smallest-index other edge whose upper bound does not
    precede f's lower bound.
    """
    candidates = [e for e in cycle if always_maximal(cycle, e, weights)]
    if candidates:
        pick = candidates[0]
        for e in candidates[1:]:
            if edge_prec(weights[pick].hi, pick, weights[e].hi, e):
                pick = e
        return ("delete", pick)
    f = cycle[0]
    for e in cycle[1:]:
        if edge_prec(weights[f].hi, f, weights[e].hi, e):
            f = e
    partners = [
        g for g in sorted(cycle)
        if g != f and not edge_prec(weights[g].hi, g, weights[f].lo, f)
    ]
    if not partners:
        raise AssertionError("no witness partner despite no always-maximal edge")
    return ("witness", (f, partners[0]))


class _Forest:
    """Spanning forest with cycle extraction; small graphs, so plain BFS."""

    def __init__(self) -> None:
        self.adj: Dict[int, List[Tuple[int, int]]] = defaultdict(list)

    def path_edges(self, u: int, v: int) -> Optional[List[int]]:
        if u == v:
            return []
        prev: Dict[int, Tuple[int, int]] = {}
        seen = {u}
        stack = [u]
        while stack:
            w = stack.pop()
            for x, e in self.adj[w]:
                if x not in seen:
                    seen.add(x)
                    prev[x] = (w, e)
                    if x == v:
                        path = []
                        while x != u:
                            w2, e2 = prev[x]
                            path.append(e2)
                            x = w2
                        return path
                    stack.append(x)
        return None

    def add(self, u: int, v: int, e: int) -> None:
        self.adj[u].append((v, e))
        self.adj[v].append((u, e))

    def remove(self, u: int, v: int, e: int) -> None:
        self.adj[u].remove((v, e))
        self.adj[v].remove((u, e))


def mst_pass(graph: UncertainGraph, weights: Sequence[Area]):
    """One Kruskal pass over the current weights.

    Returns ('done', tree_indices, red_rule_count) when every cycle closed
    during growth had a red-rule deletion, or ('witness', (f, g)) at the
    first cycle that needs queries to resolve.
    """
    order = sorted(
        range(graph.n_edges), key=lambda e: (weights[e].lo, e)
    )
    forest = _Forest()
    in_tree: set = set()
    red = 0
    for e in order:
        u, v = graph.edges[e]
        path = forest.path_edges(u, v)
        if path is None:
            forest.add(u, v, e)
            in_tree.add(e)
            continue
        cycle = path + [e]
        action, payload = mst_witness_or_delete(cycle, weights)
        if action == "witness":
            return ("witness", payload)
        red += 1
        if payload == e:
            continue
        du, dv = graph.edges[payload]
        forest.remove(du, dv, payload)
        in_tree.discard(payload)
        forest.add(u, v, e)
        in_tree.add(e)
    return ("done", frozenset(in_tree), red)


def mst_verifier(graph: UncertainGraph):
    """Verifier closure for the brute-force optimum search: the answer (the
    certified tree) once a pass needs no witness queries, else None."""

    def verify(weights: Sequence[Area]):
        result = mst_pass(graph, weights)
        if result[0] == "done":
            return result[1]
        return None

    return verify


def umst_solve(
    instance: UncertainInstance, oracle, budget: int
) -> Tuple[RunReport, Optional[MstAnswer]]:
    """Grow, resolve cycles, query witness pairs until a pass completes.

    Reprocessing restarts from scratch after each witness query round; only
    query counts matter for the competitive accounting.
    """
    graph = instance.problem
    if not isinstance(graph, UncertainGraph):
        raise EngineError("instance problem is not an uncertain graph")
    if not graph.is_connected():
        raise EngineError("graph must be connected")
    violations = validate_instance(instance)
    if violations:
        raise EngineError(f"invalid instance: {violations[0].reason}")

    weights: List[Area] = list(instance.areas)
    counts: Dict[int, int] = {}
    log: List[Tuple[int, Area]] = []
    trace: List[tuple] = []

    while True:
        result = mst_pass(graph, weights)
        if result[0] == "done":
            _, tree, red = result
            report = RunReport(
                None, log, counts, len(log), RunStatus.SOLVED, tuple(weights), trace
            )
            return report, MstAnswer(tree, red)
        f, g = result[1]
        queriable = [e for e in sorted((f, g)) if not weights[e].is_point]
        if not queriable:
            raise EngineError("witness pair contains no queriable edge")
        trace.append((tuple(queriable), tuple(weights), dict(counts)))
        for e in queriable:
            if len(log) >= budget:
                report = RunReport(
                    None, log, counts, len(log), RunStatus.BUDGET_EXCEEDED,
                    tuple(weights), trace,
                )
                return report, None
            counts[e] = counts.get(e, 0) + 1
            response = oracle.respond(e, counts[e], weights[e])
            err = validate_response(instance.model, weights[e], response)
            if err is not None:
                raise OracleResponseError(f"edge {e + 1}: {err}")
            weights[e] = response
            log.append((e, response))
