"""Matching mechanisms: deferred acceptance (both proposing sides),
consent-based efficiency adjustment, and trading-cycle reallocation.

All mechanisms are pure functions of the problem; reruns with modified
preferences always restart from scratch.
"""

from dataclasses import dataclass
from typing import Dict, Optional, Tuple

from .errors import InvalidInstanceError
from .model import ConsentStructure, Matching, SchoolChoiceProblem

# ---------------------------------------------------------------------------
# deferred acceptance
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DaRound:
    """One proposal round: who newly applied, who is tentatively held, and
    who was rejected. Schools with nothing to report are omitted from the
    per-round dicts; held lists every current seat holder, best priority
    first; applicants and rejected follow student declaration order."""

    number: int
    applicants: Dict[str, Tuple[str, ...]]
    held: Dict[str, Tuple[str, ...]]
    rejected: Dict[str, Tuple[str, ...]]


@dataclass(frozen=True)
class DaTrace:
    """Full round-by-round record of a student-proposing run. The final
    round contains no rejections and its holds are the returned matching."""

    rounds: Tuple[DaRound, ...]


def _student_proposing_da(problem: SchoolChoiceProblem) -> Tuple[Matching, DaTrace]:
    next_choice = {i: 0 for i in problem.students}
    held: Dict[str, list] = {s: [] for s in problem.schools}
    pending = list(problem.students)  # students who apply this round
    rounds = []
    number = 0
    while True:
        number += 1
        applicants: Dict[str, list] = {}
        for i in pending:
            prefs = problem.preferences[i]
            if next_choice[i] < len(prefs):
                applicants.setdefault(prefs[next_choice[i]], []).append(i)
        rejected: Dict[str, list] = {}
        for s, incoming in applicants.items():
            pool = held[s] + incoming
            pool.sort(key=lambda i: problem.rank_of_student(s, i))
            held[s] = pool[: problem.quotas[s]]
            losers = pool[problem.quotas[s] :]
            if losers:
                rejected[s] = sorted(losers, key=problem.students.index)
        pending = []
        for s, losers in rejected.items():
            for i in losers:
                next_choice[i] += 1
                pending.append(i)
        pending.sort(key=problem.students.index)
        rounds.append(
            DaRound(
                number=number,
                applicants={
                    s: tuple(sorted(applicants[s], key=problem.students.index))
                    for s in problem.schools
                    if applicants.get(s)
                },
                held={s: tuple(held[s]) for s in problem.schools if held[s]},
                rejected={s: tuple(rejected[s]) for s in problem.schools if rejected.get(s)},
            )
        )
        if not rejected:
            break
    assignment = {i: problem.outside_option for i in problem.students}
    for s in problem.schools:
        for i in held[s]:
            assignment[i] = s
    return Matching({i: assignment[i] for i in problem.students}), DaTrace(tuple(rounds))


def _school_proposing_da(problem: SchoolChoiceProblem) -> Matching:
    next_offer = {s: 0 for s in problem.schools}
    holding: Dict[str, Optional[str]] = {i: None for i in problem.students}
    declined: Dict[str, set] = {s: set() for s in problem.schools}
    while True:
        offers: Dict[str, list] = {}
        for s in problem.schools:
            order = problem.priority_order(s)
            seats_open = problem.quotas[s] - sum(1 for i in problem.students if holding[i] == s)
            while seats_open > 0 and next_offer[s] < len(order):
                i = order[next_offer[s]]
                next_offer[s] += 1
                if i in declined[s]:
                    continue
                offers.setdefault(i, []).append(s)
                seats_open -= 1
        if not offers:
            break
        for i, incoming in offers.items():
            candidates = incoming + ([holding[i]] if holding[i] else [])
            acceptable = [s for s in candidates if problem.rank_of_school(i, s).is_acceptable]
            best = min(
                acceptable,
                key=lambda s: problem.rank_of_school(i, s),
                default=None,
            )
            for s in candidates:
                if s != best:
                    declined[s].add(i)
            holding[i] = best
    return Matching(
        {i: holding[i] if holding[i] else problem.outside_option for i in problem.students}
    )


def deferred_acceptance(
    problem: SchoolChoiceProblem, proposing_side: str = "students"
) -> Tuple[Matching, Optional[DaTrace]]:
    """Run deferred acceptance and return (matching, trace).

    Student-proposing returns the student-optimal stable matching with a
    full round trace; school-proposing returns the school-optimal stable
    matching and no trace. Students with exhausted lists end up at the
    outside option.
    """
    if proposing_side == "students":
        return _student_proposing_da(problem)
    if proposing_side == "schools":
        return _school_proposing_da(problem), None
    raise InvalidInstanceError(f"unknown proposing side {proposing_side!r}")


# ---------------------------------------------------------------------------
# interrupters and consent-based adjustment
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Interrupter:
    """A student whose tentative seat at a school outlived someone else's
    rejection there before being lost themselves.

    accepted_round: first round tentatively held (t);
    caused_rejection_round: latest round in [t, own_rejection_round] in
    which another student was rejected at the school (t');
    own_rejection_round: the round the student lost the seat (t'')."""

    student: str
    school: str
    accepted_round: int
    caused_rejection_round: int
    own_rejection_round: int


def find_interrupters(problem: SchoolChoiceProblem, trace: DaTrace) -> Tuple[Interrupter, ...]:
    """All interrupter pairs on a student-proposing trace.

    A student rejected on arrival (never tentatively held) is not an
    interrupter. Each pair appears once; since a rejected student never
    returns to the same school, the own-rejection round is unique.
    Sorted by own-rejection round, then declaration order.
    """
    first_held: Dict[Tuple[str, str], int] = {}
    rejections: Dict[str, Dict[int, Tuple[str, ...]]] = {}
    for rnd in trace.rounds:
        for s, students in rnd.held.items():
            for i in students:
                first_held.setdefault((i, s), rnd.number)
        for s, students in rnd.rejected.items():
            rejections.setdefault(s, {})[rnd.number] = students
    out = []
    for s, by_round in rejections.items():
        for t2, students in by_round.items():
            for i in students:
                t = first_held.get((i, s))
                if t is None or t > t2:
                    continue
                witnesses = [
                    r
                    for r, losers in by_round.items()
                    if t <= r <= t2 and any(j != i for j in losers)
                ]
                if witnesses:
                    out.append(Interrupter(i, s, t, max(witnesses), t2))
    out.sort(
        key=lambda x: (
            x.own_rejection_round,
            problem.students.index(x.student),
            problem.schools.index(x.school),
        )
    )
    return tuple(out)


def eada(problem: SchoolChoiceProblem, consent: ConsentStructure) -> Matching:
    """Consent-based efficiency adjustment.

    Loop: run deferred acceptance with a trace; among consenting
    interrupters take the latest own-rejection round; every consenting
    interrupter rejected in that round has the interrupting school removed
    from their list; rerun. Stops when no consenting interrupter remains.
    With an empty consent set this is plain deferred acceptance.
    """
    unknown = consent.consenting - set(problem.students)
    if unknown:
        raise InvalidInstanceError(f"consent names unknown students: {sorted(unknown)}")
    current = problem
    while True:
        matching, trace = _student_proposing_da(current)
        consenting = [x for x in find_interrupters(current, trace) if consent.consents(x.student)]
        if not consenting:
            return matching
        last = max(x.own_rejection_round for x in consenting)
        prefs = dict(current.preferences)
        for x in consenting:
            if x.own_rejection_round == last:
                prefs[x.student] = tuple(s for s in prefs[x.student] if s != x.school)
        current = current.with_preferences(prefs)


def eada_full_consent_underdemanded(problem: SchoolChoiceProblem) -> Matching:
    """Full-consent efficiency adjustment via under-demanded schools.

    Iterate: run deferred acceptance; schools that rejected nobody in the
    run are fixed with their assignees and removed, as are students left
    at the outside option; repeat on the rest. Equivalent to eada() with
    everyone consenting.
    """
    fixed: Dict[str, str] = {}
    current = problem
    while True:
        matching, trace = _student_proposing_da(current)
        rejecting = set()
        for rnd in trace.rounds:
            rejecting.update(rnd.rejected)
        underdemanded = [s for s in current.schools if s not in rejecting]
        done = set()
        for s in underdemanded:
            for i in matching.students_at(s):
                fixed[i] = s
                done.add(i)
        for i in current.students:
            if matching.school_of(i) == current.outside_option:
                fixed[i] = problem.outside_option
                done.add(i)
        remaining_students = [i for i in current.students if i not in done]
        if not remaining_students:
            break
        if not done and not underdemanded:
            raise RuntimeError("no under-demanded school and nobody unassigned; cannot happen")
        current = current.restricted_to(
            remaining_students,
            [s for s in current.schools if s not in set(underdemanded)],
        )
    return Matching({i: fixed[i] for i in problem.students})


# ---------------------------------------------------------------------------
# trading from an endowment
# ---------------------------------------------------------------------------


def ttc_from_endowment(problem: SchoolChoiceProblem, endowment: Matching) -> Matching:
    """Cycle trading where each student owns their seat in the endowment.

    Students at the outside option own nothing and do not trade. Each
    remaining student points at the highest-priority remaining owner of a
    seat at their most preferred remaining owned school, or at themselves
    when their own school is that school (or when no owned school is on
    their list). All cycles trade and leave; repeat until nobody is left.
    """
    remaining = [i for i in problem.students if endowment.school_of(i) != problem.outside_option]
    result = {i: endowment.school_of(i) for i in problem.students}
    remaining_set = set(remaining)
    while remaining_set:
        owned: Dict[str, list] = {}
        for i in remaining:
            if i in remaining_set:
                owned.setdefault(endowment.school_of(i), []).append(i)
        points: Dict[str, str] = {}
        for i in remaining:
            if i not in remaining_set:
                continue
            own = endowment.school_of(i)
            target = own
            for s in problem.preferences[i]:
                if s in owned:
                    target = s
                    break
            if target == own:
                points[i] = i
            else:
                points[i] = min(
                    owned[target], key=lambda j: problem.rank_of_student(target, j)
                )
        # every node has out-degree one, so walking pointers finds cycles
        state: Dict[str, int] = {}
        for start in remaining:
            if start not in remaining_set or state.get(start):
                continue
            path = []
            node = start
            while state.get(node) is None:
                state[node] = 1  # on current path
                path.append(node)
                node = points[node]
            if state[node] == 1:  # found a new cycle closing at node
                cycle = path[path.index(node) :]
                for k, i in enumerate(cycle):
                    result[i] = endowment.school_of(cycle[(k + 1) % len(cycle)])
                    remaining_set.discard(i)
            for i in path:
                state[i] = 2  # processed
    return Matching({i: result[i] for i in problem.students})


def da_ttc(problem: SchoolChoiceProblem) -> Matching:
    """Cycle trading on top of the student-proposing matching."""
    baseline, _ = _student_proposing_da(problem)
    return ttc_from_endowment(problem, baseline)
