"""Exhaustive ground-truth engines.

Everything here enumerates rather than derives: matchings weakly
dominating the student-proposing baseline, the maximum improvement count
with witnesses, the Pareto frontier with inclusion-minimal blocking
sets, and all stable matchings. Guards estimate the search-space size
up front and abort with a resource error before doing any work.
"""

from dataclasses import dataclass
from math import prod
from typing import Dict, List, Optional, Tuple

from .errors import DominationError, ResourceLimitError
from .mechanisms import deferred_acceptance
from .model import (
    BlockingPair,
    Matching,
    SchoolChoiceProblem,
    blocking_pairs,
    improved_students,
    is_stable,
    weakly_dominates,
)

DEFAULT_GUARD = 10**7


def _weak_improvement_options(
    problem: SchoolChoiceProblem, matching: Matching
) -> Dict[str, Tuple[str, ...]]:
    """Per student: schools at least as good as their current seat, best
    first, ending with the seat itself. The outside option appears when it
    beats or equals the seat."""
    options = {}
    for i in problem.students:
        mine = problem.rank_of_school(i, matching.school_of(i))
        row = [s for s in problem.preferences[i] if problem.rank_of_school(i, s) < mine]
        if problem.rank_of_school(i, problem.outside_option) < mine:
            row.append(problem.outside_option)
        row.append(matching.school_of(i))
        options[i] = tuple(row)
    return options


def _enumerate_assignments(
    problem: SchoolChoiceProblem, options: Dict[str, Tuple[str, ...]], guard: int
) -> List[Matching]:
    bound = prod(len(options[i]) for i in problem.students)
    if bound > guard:
        raise ResourceLimitError(
            f"search space of {bound} assignments exceeds the guard of {guard}",
            bound=bound,
        )
    students = problem.students
    free = {s: problem.quotas[s] for s in problem.schools}
    out: List[Matching] = []
    chosen: Dict[str, str] = {}

    def place(k: int):
        if k == len(students):
            out.append(Matching(dict(chosen)))
            return
        i = students[k]
        for s in options[i]:
            if s == problem.outside_option:
                chosen[i] = s
                place(k + 1)
                del chosen[i]
            elif free[s] > 0:
                free[s] -= 1
                chosen[i] = s
                place(k + 1)
                del chosen[i]
                free[s] += 1

    place(0)
    return out


def _exists_dominator(
    problem: SchoolChoiceProblem, matching: Matching, guard: int = DEFAULT_GUARD
) -> bool:
    """True when some matching makes a student strictly better off and
    nobody worse off. Complete: any dominator necessarily assigns every
    student within their weak-improvement options."""
    options = _weak_improvement_options(problem, matching)
    bound = prod(len(v) for v in options.values())
    if bound > guard:
        raise ResourceLimitError(
            f"search space of {bound} assignments exceeds the guard of {guard}",
            bound=bound,
        )
    students = problem.students
    free = {s: problem.quotas[s] for s in problem.schools}

    def place(k: int, any_strict: bool) -> bool:
        if k == len(students):
            return any_strict
        i = students[k]
        for s in options[i]:
            strict = s != matching.school_of(i)
            if s == problem.outside_option:
                if place(k + 1, any_strict or strict):
                    return True
            elif free[s] > 0:
                free[s] -= 1
                hit = place(k + 1, any_strict or strict)
                free[s] += 1
                if hit:
                    return True
        return False

    return place(0, False)


def is_pareto_efficient(
    problem: SchoolChoiceProblem, matching: Matching, guard: int = DEFAULT_GUARD
) -> bool:
    """True when no feasible matching strictly dominates the given one."""
    return not _exists_dominator(problem, matching, guard)


@dataclass(frozen=True)
class DominatingEntry:
    """One matching that weakly dominates the baseline, with the facts
    reports need about it."""

    matching: Matching
    improved: Tuple[str, ...]
    blocking: Tuple[BlockingPair, ...]
    is_pareto_efficient: bool


@dataclass(frozen=True)
class DominatingSet:
    """Every matching weakly dominating the baseline, baseline included."""

    baseline: Matching
    entries: Tuple[DominatingEntry, ...]

    def entry_for(self, matching: Matching) -> Optional[DominatingEntry]:
        for e in self.entries:
            if e.matching == matching:
                return e
        return None


def _assignment_key(problem: SchoolChoiceProblem, matching: Matching):
    pos = {s: k for k, s in enumerate(problem.schools)}
    pos[problem.outside_option] = len(problem.schools)
    return tuple(pos[matching.school_of(i)] for i in problem.students)


def _raw_dominating(
    problem: SchoolChoiceProblem, guard: int
) -> Tuple[Matching, List[Matching]]:
    baseline, _ = deferred_acceptance(problem)
    options = _weak_improvement_options(problem, baseline)
    found = _enumerate_assignments(problem, options, guard)
    found.sort(key=lambda m: _assignment_key(problem, m))
    return baseline, found


def enumerate_dominating_matchings(
    problem: SchoolChoiceProblem, guard: int = DEFAULT_GUARD
) -> DominatingSet:
    """Exhaustive, duplicate-free, sorted by per-student school indices."""
    baseline, found = _raw_dominating(problem, guard)
    entries = []
    for m in found:
        entries.append(
            DominatingEntry(
                matching=m,
                improved=improved_students(problem, m, baseline),
                blocking=blocking_pairs(problem, m),
                is_pareto_efficient=not _exists_dominator(problem, m, guard),
            )
        )
    return DominatingSet(baseline=baseline, entries=tuple(entries))


def max_improvement(
    problem: SchoolChoiceProblem, guard: int = DEFAULT_GUARD
) -> Tuple[int, Tuple[Matching, ...]]:
    """Largest number of strictly improved students over the baseline,
    with every matching attaining it."""
    baseline, found = _raw_dominating(problem, guard)
    counts = [len(improved_students(problem, m, baseline)) for m in found]
    best = max(counts)
    return best, tuple(m for m, c in zip(found, counts) if c == best)


@dataclass(frozen=True)
class FrontierReport:
    """Pareto-efficient dominating matchings and their blocking-set facts."""

    baseline: Matching
    efficient_matchings: Tuple[DominatingEntry, ...]
    minimal_blocking_sets: Tuple[Tuple[Tuple[str, str], ...], ...]
    max_improvement: int
    witnesses: Tuple[Matching, ...]


def pareto_frontier_over_da(
    problem: SchoolChoiceProblem, guard: int = DEFAULT_GUARD
) -> FrontierReport:
    """Efficient dominating matchings, their inclusion-minimal blocking
    sets, and the maximum improvement with witnesses."""
    dset = enumerate_dominating_matchings(problem, guard)
    efficient = tuple(e for e in dset.entries if e.is_pareto_efficient)
    pair_sets = []
    for e in efficient:
        ps = frozenset(b.pair for b in e.blocking)
        if ps not in pair_sets:
            pair_sets.append(ps)
    minimal = [
        ps for ps in pair_sets if not any(other < ps for other in pair_sets)
    ]
    ipos = {i: k for k, i in enumerate(problem.students)}
    spos = {s: k for k, s in enumerate(problem.schools)}
    minimal_sorted = tuple(
        tuple(sorted(ps, key=lambda p: (ipos[p[0]], spos[p[1]])))
        for ps in sorted(minimal, key=lambda ps: (len(ps), sorted(ps)))
    )
    best = max(len(e.improved) for e in dset.entries)
    witnesses = tuple(e.matching for e in dset.entries if len(e.improved) == best)
    return FrontierReport(
        baseline=dset.baseline,
        efficient_matchings=efficient,
        minimal_blocking_sets=minimal_sorted,
        max_improvement=best,
        witnesses=witnesses,
    )


def enumerate_stable_matchings(
    problem: SchoolChoiceProblem, guard: int = DEFAULT_GUARD
) -> Tuple[Matching, ...]:
    """All stable matchings, by filtering every individually rational
    assignment. Guarded by the product of (list length + 1) per student."""
    options = {
        i: problem.preferences[i] + (problem.outside_option,) for i in problem.students
    }
    found = _enumerate_assignments(problem, options, guard)
    stable = [m for m in found if is_stable(problem, m)]
    return tuple(sorted(stable, key=lambda m: _assignment_key(problem, m)))


def doubly_dominates(
    problem: SchoolChoiceProblem, matching: Matching, other: Matching
) -> bool:
    """Strictly more students improved and strictly fewer blocking pairs.

    Both matchings must weakly dominate the student-proposing baseline.
    """
    baseline, _ = deferred_acceptance(problem)
    for m in (matching, other):
        if not weakly_dominates(problem, m, baseline):
            raise DominationError("both matchings must weakly dominate the baseline")
    return len(improved_students(problem, matching, baseline)) > len(
        improved_students(problem, other, baseline)
    ) and len(blocking_pairs(problem, matching)) < len(blocking_pairs(problem, other))


def improvement_ratio(
    problem: SchoolChoiceProblem, matching: Matching, guard: int = DEFAULT_GUARD
) -> Optional[float]:
    """Maximum improvement divided by the matching's improvement count.

    None when the matching improves nobody (ratio undefined).
    """
    baseline, _ = deferred_acceptance(problem)
    count = len(improved_students(problem, matching, baseline))
    if count == 0:
        return None
    best, _ = max_improvement(problem, guard)
    return best / count
