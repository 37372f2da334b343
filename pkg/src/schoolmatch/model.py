"""Problem instances, matchings, and stability checks for school choice.

Conventions used throughout the package:

* rank 1 is a student's favourite school; larger is worse
* a school missing from a student's list is unacceptable to them
* the outside option sits right after the last listed school, so it is
  preferred to every unlisted school
* priority lists may be partial; missing students are appended in the
  order they were declared in the problem
"""

from dataclasses import dataclass, replace
from functools import cached_property, total_ordering
from typing import Dict, FrozenSet, Optional, Tuple

from .errors import DominationError, InvalidInstanceError

# ---------------------------------------------------------------------------
# ranks
# ---------------------------------------------------------------------------


@total_ordering
@dataclass(frozen=True)
class Rank:
    """Position of a school in a student's list (1 = best).

    value None marks an unacceptable school and compares greater than
    every finite rank, including the outside option's.
    """

    value: Optional[int] = None

    @property
    def is_acceptable(self) -> bool:
        return self.value is not None

    def __lt__(self, other):
        if not isinstance(other, Rank):
            return NotImplemented
        if self.value is None:
            return False
        if other.value is None:
            return True
        return self.value < other.value


UNACCEPTABLE = Rank(None)


# ---------------------------------------------------------------------------
# problems
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SchoolChoiceProblem:
    """A school choice instance with strict preferences and priorities.

    students and schools keep their declaration order; that order is the
    tie-break used everywhere output must be deterministic.
    """

    students: Tuple[str, ...]
    schools: Tuple[str, ...]
    quotas: Dict[str, int]
    preferences: Dict[str, Tuple[str, ...]]
    priorities: Dict[str, Tuple[str, ...]]
    outside_option: str = "-"

    def __post_init__(self):
        object.__setattr__(self, "students", tuple(self.students))
        object.__setattr__(self, "schools", tuple(self.schools))
        object.__setattr__(self, "quotas", dict(self.quotas))
        prefs = {i: tuple(v) for i, v in self.preferences.items()}
        for i in self.students:
            prefs.setdefault(i, ())
        object.__setattr__(self, "preferences", prefs)
        prios = {s: tuple(v) for s, v in self.priorities.items()}
        for s in self.schools:
            prios.setdefault(s, ())
        object.__setattr__(self, "priorities", prios)
        self._validate()

    def _validate(self):
        if not self.students:
            raise InvalidInstanceError("a problem needs at least one student")
        if len(set(self.students)) != len(self.students):
            raise InvalidInstanceError("duplicate student names")
        if len(set(self.schools)) != len(self.schools):
            raise InvalidInstanceError("duplicate school names")
        if self.outside_option in self.students or self.outside_option in self.schools:
            raise InvalidInstanceError(
                f"name {self.outside_option!r} is reserved for the outside option"
            )
        school_set = set(self.schools)
        student_set = set(self.students)
        for s in self.schools:
            q = self.quotas.get(s)
            if not isinstance(q, int) or isinstance(q, bool) or q < 1:
                raise InvalidInstanceError(f"school {s!r} needs an integer quota >= 1")
        for s in self.quotas:
            if s not in school_set:
                raise InvalidInstanceError(f"quota given for unknown school {s!r}")
        for i, listed in self.preferences.items():
            if i not in student_set:
                raise InvalidInstanceError(f"preferences given for unknown student {i!r}")
            if len(set(listed)) != len(listed):
                raise InvalidInstanceError(f"student {i!r} lists a school twice")
            for s in listed:
                if s == self.outside_option:
                    raise InvalidInstanceError(
                        f"student {i!r} lists the outside option; it is implicit"
                    )
                if s not in school_set:
                    raise InvalidInstanceError(f"student {i!r} lists unknown school {s!r}")
        for s, listed in self.priorities.items():
            if s not in school_set:
                raise InvalidInstanceError(f"priorities given for unknown school {s!r}")
            if len(set(listed)) != len(listed):
                raise InvalidInstanceError(f"school {s!r} ranks a student twice")
            for i in listed:
                if i not in student_set:
                    raise InvalidInstanceError(f"school {s!r} ranks unknown student {i!r}")

    # -- rank lookups -------------------------------------------------------

    @cached_property
    def _pref_rank(self) -> Dict[str, Dict[str, int]]:
        table = {}
        for i in self.students:
            row = {s: k + 1 for k, s in enumerate(self.preferences[i])}
            row[self.outside_option] = len(self.preferences[i]) + 1
            table[i] = row
        return table

    @cached_property
    def _prio_order(self) -> Dict[str, Tuple[str, ...]]:
        table = {}
        for s in self.schools:
            listed = self.priorities[s]
            seen = set(listed)
            table[s] = listed + tuple(i for i in self.students if i not in seen)
        return table

    @cached_property
    def _prio_rank(self) -> Dict[str, Dict[str, int]]:
        return {
            s: {i: k + 1 for k, i in enumerate(order)}
            for s, order in self._prio_order.items()
        }

    def rank_of_school(self, student: str, school: str) -> Rank:
        """Student's rank of a school; UNACCEPTABLE when not listed."""
        return Rank(self._pref_rank[student].get(school))

    def rank_of_student(self, school: str, student: str) -> int:
        """School's priority rank of a student (always finite, 1 = highest)."""
        return self._prio_rank[school][student]

    def priority_order(self, school: str) -> Tuple[str, ...]:
        """Full priority order of a school after the completion rule."""
        return self._prio_order[school]

    def acceptable_schools(self, student: str) -> Tuple[str, ...]:
        return self.preferences[student]

    # -- derived problems ---------------------------------------------------

    def with_preferences(self, preferences: Dict[str, Tuple[str, ...]]) -> "SchoolChoiceProblem":
        """Same instance with the preference profile swapped out."""
        return replace(self, preferences=preferences)

    def restricted_to(self, students, schools) -> "SchoolChoiceProblem":
        """Subproblem on the given students and schools, keeping declaration order."""
        keep_i = set(students)
        keep_s = set(schools)
        sub_students = tuple(i for i in self.students if i in keep_i)
        sub_schools = tuple(s for s in self.schools if s in keep_s)
        return SchoolChoiceProblem(
            students=sub_students,
            schools=sub_schools,
            quotas={s: self.quotas[s] for s in sub_schools},
            preferences={
                i: tuple(s for s in self.preferences[i] if s in keep_s)
                for i in sub_students
            },
            priorities={
                s: tuple(i for i in self.priorities[s] if i in keep_i)
                for s in sub_schools
            },
            outside_option=self.outside_option,
        )


# ---------------------------------------------------------------------------
# matchings
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class Matching:
    """An assignment of each student to a school or the outside option."""

    assignment: Dict[str, str]

    def __post_init__(self):
        object.__setattr__(self, "assignment", dict(self.assignment))

    def school_of(self, student: str) -> str:
        return self.assignment[student]

    def students_at(self, school: str) -> Tuple[str, ...]:
        return tuple(i for i, s in self.assignment.items() if s == school)

    def items(self) -> Tuple[Tuple[str, str], ...]:
        return tuple(self.assignment.items())

    def __eq__(self, other):
        if not isinstance(other, Matching):
            return NotImplemented
        return self.assignment == other.assignment

    def __hash__(self):
        return hash(frozenset(self.assignment.items()))


def validate_matching(problem: SchoolChoiceProblem, matching: Matching) -> None:
    """Check assignment coverage, school names, and quotas."""
    if set(matching.assignment) != set(problem.students):
        raise InvalidInstanceError("matching must assign exactly the problem's students")
    school_set = set(problem.schools)
    for i, s in matching.assignment.items():
        if s != problem.outside_option and s not in school_set:
            raise InvalidInstanceError(f"student {i!r} assigned to unknown school {s!r}")
    for s in problem.schools:
        held = matching.students_at(s)
        if len(held) > problem.quotas[s]:
            raise InvalidInstanceError(
                f"school {s!r} holds {len(held)} students but has quota {problem.quotas[s]}"
            )


# ---------------------------------------------------------------------------
# blocking, stability, domination
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BlockingPair:
    """A student, a school they prefer, and the lower-priority seat holders."""

    student: str
    school: str
    violators: Tuple[str, ...]

    @property
    def pair(self) -> Tuple[str, str]:
        return (self.student, self.school)


@dataclass(frozen=True)
class ConsentStructure:
    """Which students allow their priorities to be waived."""

    consenting: FrozenSet[str]

    def __post_init__(self):
        object.__setattr__(self, "consenting", frozenset(self.consenting))

    def consents(self, student: str) -> bool:
        return student in self.consenting

    @classmethod
    def everyone(cls, problem: SchoolChoiceProblem) -> "ConsentStructure":
        return cls(frozenset(problem.students))

    @classmethod
    def nobody(cls) -> "ConsentStructure":
        return cls(frozenset())


def desires(problem: SchoolChoiceProblem, student: str, school: str, matching: Matching) -> bool:
    """True when the student strictly prefers the school to their assignment."""
    return problem.rank_of_school(student, school) < problem.rank_of_school(
        student, matching.school_of(student)
    )


def envies(problem: SchoolChoiceProblem, student: str, other: str, matching: Matching) -> bool:
    """True when student strictly prefers other's assignment to their own."""
    return problem.rank_of_school(student, matching.school_of(other)) < problem.rank_of_school(
        student, matching.school_of(student)
    )


def blocking_pairs(problem: SchoolChoiceProblem, matching: Matching) -> Tuple[BlockingPair, ...]:
    """All (student, school) pairs where the student desires the school and
    someone with lower priority holds a seat there.

    Ordered by student then school declaration order; violators are listed
    in the school's priority order.
    """
    found = []
    for i in problem.students:
        mine = problem.rank_of_school(i, matching.school_of(i))
        for s in problem.schools:
            if not problem.rank_of_school(i, s) < mine:
                continue
            my_prio = problem.rank_of_student(s, i)
            violators = sorted(
                (j for j in matching.students_at(s) if problem.rank_of_student(s, j) > my_prio),
                key=lambda j: problem.rank_of_student(s, j),
            )
            if violators:
                found.append(BlockingPair(i, s, tuple(violators)))
    return tuple(found)


def is_nonwasteful(problem: SchoolChoiceProblem, matching: Matching) -> bool:
    """No student desires a school with a free seat.

    The outside option never fills, so anyone assigned to a school they
    did not list makes the matching wasteful.
    """
    fill = {s: len(matching.students_at(s)) for s in problem.schools}
    for i in problem.students:
        mine = problem.rank_of_school(i, matching.school_of(i))
        if problem.rank_of_school(i, problem.outside_option) < mine:
            return False
        for s in problem.schools:
            if problem.rank_of_school(i, s) < mine and fill[s] < problem.quotas[s]:
                return False
    return True


def is_stable(problem: SchoolChoiceProblem, matching: Matching) -> bool:
    """Non-wasteful and free of blocking pairs."""
    return is_nonwasteful(problem, matching) and not blocking_pairs(problem, matching)


def weakly_dominates(problem: SchoolChoiceProblem, matching: Matching, other: Matching) -> bool:
    """Every student is at least as well off under matching as under other."""
    return all(
        problem.rank_of_school(i, matching.school_of(i))
        <= problem.rank_of_school(i, other.school_of(i))
        for i in problem.students
    )


def dominates(problem: SchoolChoiceProblem, matching: Matching, other: Matching) -> bool:
    """Weakly dominates, with at least one student strictly better off."""
    return weakly_dominates(problem, matching, other) and any(
        problem.rank_of_school(i, matching.school_of(i))
        < problem.rank_of_school(i, other.school_of(i))
        for i in problem.students
    )


def improved_students(
    problem: SchoolChoiceProblem, matching: Matching, baseline: Matching
) -> Tuple[str, ...]:
    """Students strictly better off than at the baseline, declaration order.

    Only defined when matching weakly dominates the baseline.
    """
    if not weakly_dominates(problem, matching, baseline):
        raise DominationError("matching does not weakly dominate the baseline")
    return tuple(
        i
        for i in problem.students
        if problem.rank_of_school(i, matching.school_of(i))
        < problem.rank_of_school(i, baseline.school_of(i))
    )
