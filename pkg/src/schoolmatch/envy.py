"""Envy digraphs over a baseline matching: trading-cycle enumeration,
disjoint-cycle feedback sets, and cycle-trade application."""

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, Tuple

import networkx as nx

from .errors import ResourceLimitError
from .model import BlockingPair, Matching, SchoolChoiceProblem, blocking_pairs, envies
from .mechanisms import deferred_acceptance

DEFAULT_CYCLE_CAP = 10**6


@dataclass(frozen=True)
class EnvyDigraph:
    """Directed graph with an edge (i, j) whenever student i prefers j's
    seat in the baseline matching to their own. Never has self-loops."""

    nodes: Tuple[str, ...]
    edges: Tuple[Tuple[str, str], ...]
    baseline: Matching

    def out_neighbours(self, node: str) -> Tuple[str, ...]:
        return tuple(j for i, j in self.edges if i == node)


def build_envy_digraph(problem: SchoolChoiceProblem, matching: Matching) -> EnvyDigraph:
    """Envy edges of the matching, in declaration order."""
    edges = [
        (i, j)
        for i in problem.students
        for j in problem.students
        if i != j and envies(problem, i, j, matching)
    ]
    return EnvyDigraph(nodes=problem.students, edges=tuple(edges), baseline=matching)


@dataclass(frozen=True)
class TradingCycle:
    """Node-simple directed cycle, stored rotated so the lexicographically
    smallest node comes first. Successor of the last node is the first."""

    nodes: Tuple[str, ...]

    def __post_init__(self):
        nodes = tuple(self.nodes)
        if len(nodes) < 2:
            raise ValueError("a trading cycle needs at least two students")
        if len(set(nodes)) != len(nodes):
            raise ValueError("a trading cycle visits each student once")
        pivot = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[pivot:] + nodes[:pivot])

    def successor(self, node: str) -> str:
        k = self.nodes.index(node)
        return self.nodes[(k + 1) % len(self.nodes)]

    def covers(self) -> FrozenSet[str]:
        return frozenset(self.nodes)


def _cycle_sort_key(cycle: TradingCycle):
    return (len(cycle.nodes), cycle.nodes)


def enumerate_trading_cycles(
    graph: EnvyDigraph, cap: int = DEFAULT_CYCLE_CAP
) -> Tuple[TradingCycle, ...]:
    """All node-simple cycles, canonicalized, sorted by length then nodes.

    Counts above the cap abort with a resource error before returning
    anything partial.
    """
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.edges)
    found = []
    for nodes in nx.simple_cycles(g):
        if len(nodes) < 2:
            continue
        found.append(TradingCycle(tuple(nodes)))
        if len(found) > cap:
            raise ResourceLimitError(
                f"more than {cap} cycles in the envy digraph", bound=cap
            )
    return tuple(sorted(found, key=_cycle_sort_key))


def apply_cycles(
    problem: SchoolChoiceProblem, matching: Matching, cycles: Iterable[TradingCycle]
) -> Matching:
    """Give every student in a cycle their successor's seat.

    Cycles must be pairwise node-disjoint and every consecutive pair must
    be an envy edge of the given matching, else ValueError.
    """
    cycles = tuple(cycles)
    seen = set()
    for c in cycles:
        if seen & c.covers():
            raise ValueError("cycles overlap")
        seen |= c.covers()
    assignment = dict(matching.assignment)
    for c in cycles:
        for node in c.nodes:
            succ = c.successor(node)
            if not envies(problem, node, succ, matching):
                raise ValueError(f"edge {node} -> {succ} is not an envy edge here")
            assignment[node] = matching.school_of(succ)
    return Matching({i: assignment[i] for i in problem.students})


@dataclass(frozen=True)
class FeedbackSet:
    """Pairwise node-disjoint cycles whose removal leaves the digraph
    acyclic. May be empty (acyclic digraph)."""

    cycles: Tuple[TradingCycle, ...]

    def __post_init__(self):
        cycles = tuple(sorted(self.cycles, key=_cycle_sort_key))
        seen = set()
        for c in cycles:
            if seen & c.covers():
                raise ValueError("feedback set cycles overlap")
            seen |= c.covers()
        object.__setattr__(self, "cycles", cycles)

    def covers(self) -> FrozenSet[str]:
        out = set()
        for c in self.cycles:
            out |= c.covers()
        return frozenset(out)


def _is_acyclic_without(g: nx.DiGraph, removed) -> bool:
    rest = g.subgraph([v for v in g.nodes if v not in removed])
    return nx.is_directed_acyclic_graph(rest)


def enumerate_feedback_sets(
    graph: EnvyDigraph, cap: int = DEFAULT_CYCLE_CAP
) -> Tuple[FeedbackSet, ...]:
    """Every family of pairwise-disjoint cycles whose covered nodes hit all
    cycles. Sorted by family size, then by the member cycles' sort keys."""
    cycles = enumerate_trading_cycles(graph, cap)
    g = nx.DiGraph()
    g.add_nodes_from(graph.nodes)
    g.add_edges_from(graph.edges)
    results = []
    visited = 0

    def grow(start: int, chosen: list, covered: set):
        nonlocal visited
        visited += 1
        if visited > cap:
            raise ResourceLimitError(
                f"more than {cap} cycle families examined", bound=cap
            )
        if _is_acyclic_without(g, covered):
            results.append(FeedbackSet(tuple(chosen)))
        for k in range(start, len(cycles)):
            extra = cycles[k].covers()
            if covered & extra:
                continue
            chosen.append(cycles[k])
            grow(k + 1, chosen, covered | extra)
            chosen.pop()

    grow(0, [], set())
    results.sort(key=lambda f: (len(f.cycles), tuple(_cycle_sort_key(c) for c in f.cycles)))
    return tuple(results)


def cycle_blocking_report(
    problem: SchoolChoiceProblem, cycles: Iterable[TradingCycle]
) -> Tuple[BlockingPair, ...]:
    """Blocking pairs after trading the given disjoint cycles on top of the
    student-proposing matching."""
    baseline, _ = deferred_acceptance(problem)
    return blocking_pairs(problem, apply_cycles(problem, baseline, cycles))


def trade_decomposition(
    problem: SchoolChoiceProblem, baseline: Matching, matching: Matching
) -> Tuple[TradingCycle, ...]:
    """Decompose a weakly dominating matching into disjoint trading cycles
    of the baseline's envy digraph.

    Seat attribution inside a school pairs movers in declaration order;
    any pairing works because a mover into a school envies every student
    who vacated it. Raises ValueError when seat counts do not balance
    (possible only for baselines that are wasteful at desired schools).
    """
    from .model import weakly_dominates
    from .errors import DominationError

    if not weakly_dominates(problem, matching, baseline):
        raise DominationError("matching does not weakly dominate the baseline")
    movers = [i for i in problem.students if matching.school_of(i) != baseline.school_of(i)]
    into: Dict[str, list] = {}
    out_of: Dict[str, list] = {}
    for i in movers:
        into.setdefault(matching.school_of(i), []).append(i)
        out_of.setdefault(baseline.school_of(i), []).append(i)
    if {s: len(v) for s, v in into.items()} != {s: len(v) for s, v in out_of.items()}:
        raise ValueError("moved seats do not balance per school")
    takes: Dict[str, str] = {}
    for s, arrivals in into.items():
        for i, j in zip(arrivals, out_of[s]):
            takes[i] = j  # i takes the seat j vacated
    cycles = []
    unseen = set(movers)
    for start in movers:
        if start not in unseen:
            continue
        path = [start]
        unseen.discard(start)
        node = takes[start]
        while node != start:
            path.append(node)
            unseen.discard(node)
            node = takes[node]
        cycles.append(TradingCycle(tuple(path)))
    return tuple(sorted(cycles, key=_cycle_sort_key))


def format_edge_list(graph: EnvyDigraph) -> str:
    """Plain-text export, one "i -> j" per line, declaration order."""
    return "\n".join(f"{i} -> {j}" for i, j in graph.edges)
