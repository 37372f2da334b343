"""Plain-text report rendering.

Every renderer is deterministic: identical inputs give byte-identical
text. Students, schools, pairs, and cycles are always ordered by
declaration position, never by hash or insertion accident.
"""

from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

from .envy import (
    FeedbackSet,
    TradingCycle,
    apply_cycles,
    build_envy_digraph,
    enumerate_feedback_sets,
    enumerate_trading_cycles,
)
from .mechanisms import da_ttc, deferred_acceptance, eada
from .model import (
    BlockingPair,
    ConsentStructure,
    Matching,
    SchoolChoiceProblem,
    blocking_pairs,
    improved_students,
    is_stable,
    weakly_dominates,
)
from .oracle import (
    DominatingEntry,
    doubly_dominates,
    enumerate_dominating_matchings,
    improvement_ratio,
    pareto_frontier_over_da,
)


def format_matching(problem: SchoolChoiceProblem, matching: Matching) -> str:
    return " ".join(f"{i}->{matching.school_of(i)}" for i in problem.students)


def format_students(problem: SchoolChoiceProblem, names: Iterable[str]) -> str:
    chosen = set(names)
    return "{" + ", ".join(i for i in problem.students if i in chosen) + "}"


def _pair_key(problem: SchoolChoiceProblem):
    ipos = {i: k for k, i in enumerate(problem.students)}
    spos = {s: k for k, s in enumerate(problem.schools)}
    return lambda p: (ipos[p[0]], spos[p[1]])


def format_pairs(problem: SchoolChoiceProblem, pairs: Iterable[Tuple[str, str]]) -> str:
    ordered = sorted(set(pairs), key=_pair_key(problem))
    return "{" + ", ".join(f"({i}, {s})" for i, s in ordered) + "}"


def format_blocking(problem: SchoolChoiceProblem, blocking: Iterable[BlockingPair]) -> str:
    return format_pairs(problem, (b.pair for b in blocking))


def format_cycle(cycle: TradingCycle) -> str:
    return "(" + " -> ".join(cycle.nodes + (cycle.nodes[0],)) + ")"


def format_family(family: Iterable[TradingCycle]) -> str:
    return "{" + ", ".join(format_cycle(c) for c in family) + "}"


def render_solve(
    problem: SchoolChoiceProblem,
    mechanism: str,
    matching: Matching,
    consent: Optional[ConsentStructure] = None,
) -> str:
    baseline, _ = deferred_acceptance(problem)
    lines = [f"mechanism: {mechanism}"]
    if consent is not None:
        if consent.consenting == set(problem.students):
            lines.append("consent: all")
        else:
            lines.append("consent: " + format_students(problem, consent.consenting))
    lines.append("matching: " + format_matching(problem, matching))
    if weakly_dominates(problem, matching, baseline):
        improved = improved_students(problem, matching, baseline)
        lines.append(
            f"improved over da ({len(improved)}): " + format_students(problem, improved)
        )
    else:
        lines.append("improved over da: not comparable")
    blocking = blocking_pairs(problem, matching)
    lines.append(f"blocking pairs ({len(blocking)}): " + format_blocking(problem, blocking))
    lines.append("stable: " + ("yes" if is_stable(problem, matching) else "no"))
    return "\n".join(lines) + "\n"


def render_cycles(problem: SchoolChoiceProblem) -> str:
    baseline, _ = deferred_acceptance(problem)
    graph = build_envy_digraph(problem, baseline)
    cycles = enumerate_trading_cycles(graph)
    lines = ["baseline: " + format_matching(problem, baseline)]
    lines.append(f"trading cycles: {len(cycles)}")
    for c in cycles:
        blocking = blocking_pairs(problem, apply_cycles(problem, baseline, [c]))
        lines.append(
            f"{format_cycle(c)}: blocking ({len(blocking)}): "
            + format_blocking(problem, blocking)
        )
    return "\n".join(lines) + "\n"


def render_feedback_sets(problem: SchoolChoiceProblem) -> str:
    baseline, _ = deferred_acceptance(problem)
    graph = build_envy_digraph(problem, baseline)
    families = enumerate_feedback_sets(graph)
    lines = [f"feedback sets: {len(families)}"]
    for f in families:
        applied = apply_cycles(problem, baseline, f.cycles)
        blocking = blocking_pairs(problem, applied)
        lines.append(
            f"{format_family(f.cycles)}: covers {len(f.covers())}, "
            f"blocking ({len(blocking)}): " + format_blocking(problem, blocking)
        )
    return "\n".join(lines) + "\n"


def render_max_improve(problem: SchoolChoiceProblem) -> str:
    frontier = pareto_frontier_over_da(problem)
    lines = [f"max improvement: {frontier.max_improvement}"]
    lines.append(f"witnesses: {len(frontier.witnesses)}")
    for m in frontier.witnesses:
        lines.append(format_matching(problem, m))
    return "\n".join(lines) + "\n"


def render_frontier(problem: SchoolChoiceProblem) -> str:
    frontier = pareto_frontier_over_da(problem)
    lines = [f"efficient dominating matchings: {len(frontier.efficient_matchings)}"]
    lines.append(f"max improvement: {frontier.max_improvement}")
    lines.append(f"minimal blocking sets: {len(frontier.minimal_blocking_sets)}")
    for ps in frontier.minimal_blocking_sets:
        lines.append(format_pairs(problem, ps))
    for e in frontier.efficient_matchings:
        lines.append(
            format_matching(problem, e.matching)
            + f": improved ({len(e.improved)}) "
            + format_students(problem, e.improved)
            + f", blocking ({len(e.blocking)}) "
            + format_blocking(problem, e.blocking)
        )
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# mechanism comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MechanismResult:
    name: str
    matching: Matching
    improved: Tuple[str, ...]
    blocking: Tuple[BlockingPair, ...]
    setwise_minimal: bool
    ratio: Optional[float]


@dataclass(frozen=True)
class ComparisonReport:
    problem: SchoolChoiceProblem
    baseline: Matching
    mechanisms: Tuple[MechanismResult, ...]
    max_improvement: int
    frontier_size: int
    minimal_blocking_sets: Tuple[Tuple[Tuple[str, str], ...], ...]
    double_domination: Tuple[Tuple[str, str, bool], ...]


def build_comparison(
    problem: SchoolChoiceProblem, consent: ConsentStructure
) -> ComparisonReport:
    """Run the baseline, the consent mechanism, and cycle trading, then
    judge each against the exhaustively enumerated frontier."""
    baseline, _ = deferred_acceptance(problem)
    frontier = pareto_frontier_over_da(problem)
    efficient_sets = [
        frozenset(b.pair for b in e.blocking) for e in frontier.efficient_matchings
    ]

    def result(name: str, matching: Matching) -> MechanismResult:
        blocking = blocking_pairs(problem, matching)
        own = frozenset(b.pair for b in blocking)
        return MechanismResult(
            name=name,
            matching=matching,
            improved=improved_students(problem, matching, baseline),
            blocking=blocking,
            setwise_minimal=not any(other < own for other in efficient_sets),
            ratio=improvement_ratio(problem, matching),
        )

    rows = (
        result("da", baseline),
        result("eada", eada(problem, consent)),
        result("da-ttc", da_ttc(problem)),
    )
    verdicts = []
    for a in rows:
        for b in rows:
            if a.name != b.name:
                verdicts.append(
                    (a.name, b.name, doubly_dominates(problem, a.matching, b.matching))
                )
    return ComparisonReport(
        problem=problem,
        baseline=baseline,
        mechanisms=rows,
        max_improvement=frontier.max_improvement,
        frontier_size=len(frontier.efficient_matchings),
        minimal_blocking_sets=frontier.minimal_blocking_sets,
        double_domination=tuple(verdicts),
    )


def render_comparison(report: ComparisonReport, consent: ConsentStructure) -> str:
    problem = report.problem
    lines = [f"students: {len(problem.students)}  schools: {len(problem.schools)}"]
    if consent.consenting == set(problem.students):
        lines.append("consent: all")
    else:
        lines.append("consent: " + format_students(problem, consent.consenting))
    lines.append("")
    for r in report.mechanisms:
        lines.append(f"mechanism {r.name}")
        lines.append("  matching: " + format_matching(problem, r.matching))
        lines.append(
            f"  improved ({len(r.improved)}): " + format_students(problem, r.improved)
        )
        lines.append(
            f"  blocking pairs ({len(r.blocking)}): " + format_blocking(problem, r.blocking)
        )
        lines.append("  setwise minimal: " + ("yes" if r.setwise_minimal else "no"))
        lines.append(
            "  improvement ratio: "
            + ("undefined" if r.ratio is None else str(r.ratio))
        )
        lines.append("")
    lines.append("oracle")
    lines.append(f"  max improvement: {report.max_improvement}")
    lines.append(f"  efficient dominating matchings: {report.frontier_size}")
    lines.append(
        "  minimal blocking sets: "
        + " ".join(format_pairs(problem, ps) for ps in report.minimal_blocking_sets)
    )
    lines.append("")
    lines.append("verdicts")
    for a, b, v in report.double_domination:
        lines.append(f"  {a} doubly dominates {b}: " + ("yes" if v else "no"))
    lines.append("")
    lines.append("[values]")
    lines.append(f"max_improvement = {report.max_improvement}")
    lines.append(f"frontier_size = {report.frontier_size}")
    for r in report.mechanisms:
        lines.append(f"improved_{r.name} = {len(r.improved)}")
        lines.append(f"blocking_{r.name} = {len(r.blocking)}")
    return "\n".join(lines) + "\n"
