"""Built-in instance constructors and a seeded random generator.

example1(n) is a unit-capacity family where the stable matching is unique
(student k at school k) yet a pair of disjoint trades improves n-1
students, while consent-based improvement only ever reaches 2 of them.
example2 and example3 are fixed 7x7 and 5x5 instances on which the
count-vs-set trade-offs between the bundled mechanisms point in opposite
directions.
"""

import random
from dataclasses import dataclass
from typing import Optional

from .errors import InvalidInstanceError
from .model import SchoolChoiceProblem


def example1(n: int) -> SchoolChoiceProblem:
    """Worst-case improvement-gap family, n > 4, unit quotas.

    Students i1..in, schools s1..sn. Everyone except i1 tops s1; school
    s1's short priority list funnels rejections into a long cascade.
    """
    if n <= 4:
        raise InvalidInstanceError(f"family needs n > 4, got {n}")
    students = tuple(f"i{k}" for k in range(1, n + 1))
    schools = tuple(f"s{k}" for k in range(1, n + 1))
    prefs = {}
    prefs["i1"] = (f"s2", f"s{n - 1}", "s1")
    for k in range(2, n - 2):
        prefs[f"i{k}"] = ("s1", f"s{k + 1}", f"s{k}")
    prefs[f"i{n - 2}"] = ("s1", "s2", f"s{n - 2}")
    prefs[f"i{n - 1}"] = ("s1", "s2", f"s{n - 1}")
    prefs[f"i{n}"] = ("s1", f"s{n}")
    prios = {"s1": ("i1", f"i{n}", "i2", f"i{n - 1}")}
    for k in range(2, n + 1):
        prios[f"s{k}"] = (f"i{k}", f"i{k - 1}")
    return SchoolChoiceProblem(
        students=students,
        schools=schools,
        quotas={s: 1 for s in schools},
        preferences=prefs,
        priorities=prios,
    )


def example2() -> SchoolChoiceProblem:
    """7x7 unit-quota instance where the mechanism comparison favours
    the larger trade: it improves 6 students with fewer blocking pairs."""
    students = tuple(f"i{k}" for k in range(1, 8))
    schools = tuple(f"s{k}" for k in range(1, 8))
    prefs = {
        "i1": ("s6", "s4", "s2", "s3", "s5", "s1"),
        "i2": ("s1", "s2"),
        "i3": ("s6", "s3"),
        "i4": ("s5", "s4"),
        "i5": ("s3", "s6", "s4", "s1", "s5"),
        "i6": ("s4", "s6"),
        "i7": ("s4", "s7"),
    }
    prios = {
        "s1": ("i1", "i5", "i2"),
        "s2": ("i2", "i1"),
        "s3": ("i3", "i5", "i1"),
        "s4": ("i4", "i7", "i1", "i6", "i5"),
        "s5": ("i5", "i4", "i1"),
        "s6": ("i6", "i3", "i5", "i1"),
        "s7": (),
    }
    return SchoolChoiceProblem(
        students=students,
        schools=schools,
        quotas={s: 1 for s in schools},
        preferences=prefs,
        priorities=prios,
    )


def example3() -> SchoolChoiceProblem:
    """5x5 unit-quota instance where the comparison flips: the consent
    mechanism's 4-student trade beats the pairwise trade on both counts."""
    students = tuple(f"i{k}" for k in range(1, 6))
    schools = tuple(f"s{k}" for k in range(1, 6))
    prefs = {
        "i1": ("s2", "s4", "s1"),
        "i2": ("s1", "s3", "s2"),
        "i3": ("s1", "s2", "s3"),
        "i4": ("s1", "s2", "s4"),
        "i5": ("s1", "s5"),
    }
    prios = {
        "s1": ("i1", "i5", "i4", "i2"),
        "s2": ("i2", "i4", "i3", "i1"),
        "s3": ("i3", "i4", "i2"),
        "s4": ("i4", "i5", "i1"),
        "s5": ("i5",),
    }
    return SchoolChoiceProblem(
        students=students,
        schools=schools,
        quotas={s: 1 for s in schools},
        preferences=prefs,
        priorities=prios,
    )


def random_problem(n: int, m: int, max_quota: int = 1, seed: int = 0) -> SchoolChoiceProblem:
    """Uniform random instance: full-length strict preference and priority
    lists, quotas drawn from [1, max_quota]. Deterministic per seed."""
    if n < 1 or m < 1:
        raise InvalidInstanceError("need at least one student and one school")
    if max_quota < 1:
        raise InvalidInstanceError("max_quota must be >= 1")
    rng = random.Random(seed)
    students = tuple(f"i{k}" for k in range(1, n + 1))
    schools = tuple(f"s{k}" for k in range(1, m + 1))
    prefs = {i: tuple(rng.sample(schools, len(schools))) for i in students}
    prios = {s: tuple(rng.sample(students, len(students))) for s in schools}
    quotas = {s: rng.randint(1, max_quota) for s in schools}
    return SchoolChoiceProblem(
        students=students,
        schools=schools,
        quotas=quotas,
        preferences=prefs,
        priorities=prios,
    )


@dataclass(frozen=True)
class FamilySpec:
    """Named recipe for one of the built-in instance families."""

    family_name: str
    n: Optional[int] = None
    m: Optional[int] = None
    max_quota: int = 1
    seed: int = 0

    def build(self) -> SchoolChoiceProblem:
        if self.family_name == "example1":
            if self.n is None:
                raise InvalidInstanceError("example1 needs n")
            return example1(self.n)
        if self.family_name == "example2":
            if self.n is not None:
                raise InvalidInstanceError("example2 takes no n")
            return example2()
        if self.family_name == "example3":
            if self.n is not None:
                raise InvalidInstanceError("example3 takes no n")
            return example3()
        if self.family_name == "random":
            if self.n is None:
                raise InvalidInstanceError("random needs n")
            m = self.m if self.m is not None else self.n
            return random_problem(self.n, m, self.max_quota, self.seed)
        raise InvalidInstanceError(f"unknown family {self.family_name!r}")
