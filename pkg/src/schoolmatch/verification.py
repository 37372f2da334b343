"""Bundled reference checklist.

Every criterion below recomputes facts about the bundled instance
families and compares them against frozen reference values. Checks
carry formatted expected/actual strings so a report can show exactly
what differs. Nothing here mutates package state; helpers cache pure
computations and clear_caches() forgets them for sensitivity tests.
"""

import random
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Dict, FrozenSet, List, Tuple

from . import instances
from .envy import (
    TradingCycle,
    apply_cycles,
    build_envy_digraph,
    cycle_blocking_report,
    enumerate_trading_cycles,
    trade_decomposition,
)
from .mechanisms import (
    da_ttc,
    deferred_acceptance,
    eada,
    eada_full_consent_underdemanded,
)
from .model import (
    ConsentStructure,
    Matching,
    blocking_pairs,
    improved_students,
    is_stable,
    weakly_dominates,
)
from .oracle import (
    doubly_dominates,
    enumerate_dominating_matchings,
    enumerate_stable_matchings,
    is_pareto_efficient,
    max_improvement,
    pareto_frontier_over_da,
)
from .report import format_cycle, format_matching, format_pairs, format_students

FAMILY_SIZES = (5, 6, 7, 8, 9, 10)
UNIQUE_STABLE_LIMIT = 8
SWEEP_SIZES = (3, 4, 5, 6)
SWEEP_SEEDS_PER_SIZE = 250
SWEEP_ORACLE_LIMIT = 5

# Frozen reference rows for seven listed cycles over example1(7): each
# maps a cycle (canonical rotation) to the blocking pairs its lone
# application is expected to create.
REFERENCE_CYCLE_COUNT = 7
REFERENCE_CYCLE_ROWS: Dict[Tuple[str, ...], FrozenSet[Tuple[str, str]]] = {
    ("i1", "i2"): frozenset({("i7", "s1")}),
    ("i1", "i2", "i3"): frozenset({("i7", "s1"), ("i6", "s1"), ("i2", "s1")}),
    ("i1", "i2", "i3", "i4"): frozenset({("i7", "s1"), ("i6", "s1"), ("i2", "s1")}),
    ("i1", "i2", "i3", "i4", "i5"): frozenset(
        {("i7", "s1"), ("i6", "s1"), ("i2", "s1")}
    ),
    ("i2", "i3", "i4", "i5"): frozenset({("i1", "s2")}),
    ("i1", "i6"): frozenset({("i7", "s1"), ("i2", "s1"), ("i5", "s6")}),
    ("i1", "i6", "i2"): frozenset({("i7", "s1"), ("i1", "s2"), ("i5", "s6")}),
}


@dataclass(frozen=True)
class Check:
    """One recomputed fact next to its reference value."""

    label: str
    passed: bool
    expected: str
    actual: str


def _fmt(value) -> str:
    return value if isinstance(value, str) else str(value)


def _check(label: str, expected, actual) -> Check:
    return Check(label, expected == actual, _fmt(expected), _fmt(actual))


# ---------------------------------------------------------------------------
# cached instance state
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _example1_state(n: int):
    problem = instances.example1(n)
    matching, _ = deferred_acceptance(problem)
    return problem, matching


@lru_cache(maxsize=None)
def _example2_state():
    problem = instances.example2()
    matching, _ = deferred_acceptance(problem)
    return problem, matching


@lru_cache(maxsize=None)
def _example3_state():
    problem = instances.example3()
    matching, _ = deferred_acceptance(problem)
    return problem, matching


def clear_caches() -> None:
    """Forget cached computations so patched instances take effect."""
    _example1_state.cache_clear()
    _example2_state.cache_clear()
    _example3_state.cache_clear()
    _random_sweep.cache_clear()


# ---------------------------------------------------------------------------
# criteria
# ---------------------------------------------------------------------------


def criterion_1() -> Tuple[Check, ...]:
    """Baseline assignment on example1: student k gets school k, the
    school-proposing run agrees, and small sizes have no other stable
    matching."""
    checks = []
    for n in FAMILY_SIZES:
        problem, mine = _example1_state(n)
        identity = Matching({f"i{k}": f"s{k}" for k in range(1, n + 1)})
        checks.append(
            _check(
                f"example1({n}): student-proposing assignment",
                format_matching(problem, identity),
                format_matching(problem, mine),
            )
        )
        school_side, _ = deferred_acceptance(problem, proposing_side="schools")
        checks.append(
            _check(
                f"example1({n}): school-proposing assignment",
                format_matching(problem, identity),
                format_matching(problem, school_side),
            )
        )
        if n <= UNIQUE_STABLE_LIMIT:
            stable = enumerate_stable_matchings(problem)
            actual = (
                format_matching(problem, stable[0])
                if len(stable) == 1
                else f"{len(stable)} stable matchings"
            )
            checks.append(
                _check(
                    f"example1({n}): unique stable matching",
                    format_matching(problem, identity),
                    actual,
                )
            )
    return tuple(checks)


def criterion_2() -> Tuple[Check, ...]:
    """eada with full consent and da-ttc on example1 swap the first two
    students and create exactly one blocking pair, (i_n, s1)."""
    checks = []
    for n in FAMILY_SIZES:
        problem, mine = _example1_state(n)
        swapped = dict(mine.assignment)
        swapped["i1"], swapped["i2"] = "s2", "s1"
        target = Matching(swapped)
        results = (
            ("eada full consent", eada(problem, ConsentStructure.everyone(problem))),
            ("da-ttc", da_ttc(problem)),
        )
        for name, matching in results:
            checks.append(
                _check(
                    f"example1({n}) {name}: improved students",
                    "{i1, i2}",
                    format_students(
                        problem, improved_students(problem, matching, mine)
                    ),
                )
            )
            checks.append(
                _check(
                    f"example1({n}) {name}: assignment",
                    format_matching(problem, target),
                    format_matching(problem, matching),
                )
            )
            checks.append(
                _check(
                    f"example1({n}) {name}: blocking pairs",
                    f"{{(i{n}, s1)}}",
                    format_pairs(
                        problem, (b.pair for b in blocking_pairs(problem, matching))
                    ),
                )
            )
    return tuple(checks)


def criterion_3() -> Tuple[Check, ...]:
    """The exhaustive search finds n-1 improvable students on example1,
    attained by the disjoint two-cycle family."""
    checks = []
    for n in FAMILY_SIZES:
        problem, mine = _example1_state(n)
        best, witnesses = max_improvement(problem)
        checks.append(
            _check(f"example1({n}): maximum improvement count", n - 1, best)
        )
        family = [
            TradingCycle(("i1", f"i{n - 1}")),
            TradingCycle(tuple(f"i{k}" for k in range(2, n - 1))),
        ]
        target = apply_cycles(problem, mine, family)
        checks.append(
            _check(
                f"example1({n}): the two-cycle family attains the maximum",
                True,
                target in witnesses,
            )
        )
        if n == 7:
            pairs = {b.pair for b in blocking_pairs(problem, target)}
            need = {("i1", "s2"), ("i2", "s1"), ("i7", "s1")}
            checks.append(
                _check(
                    "example1(7): witness blocking pairs contain the listed three",
                    True,
                    need <= pairs,
                )
            )
    return tuple(checks)


def criterion_4() -> Tuple[Check, ...]:
    """The ratio subcommand prints exactly (n-1)/2 for both mechanisms."""
    from . import cli  # deferred: cli imports this module for verify-paper

    checks = []
    for n in FAMILY_SIZES:
        for mechanism in ("eada", "da-ttc"):
            argv = [
                "ratio",
                "--family",
                "example1",
                "--n",
                str(n),
                "--mechanism",
                mechanism,
            ]
            code, text = cli.run_command(argv)
            value = text.strip() if code == 0 else f"exit {code}: {text.strip()}"
            checks.append(_check(" ".join(["schoolmatch"] + argv), str((n - 1) / 2), value))
    return tuple(checks)


def criterion_5() -> Tuple[Check, ...]:
    """Cycle enumeration over example1(7) against the frozen reference
    rows: seven cycles, each with its listed blocking pairs."""
    problem, mine = _example1_state(7)
    cycles = enumerate_trading_cycles(build_envy_digraph(problem, mine))
    checks = [
        _check("example1(7): trading cycle count", REFERENCE_CYCLE_COUNT, len(cycles))
    ]
    by_nodes = {c.nodes: c for c in cycles}
    for nodes, want in REFERENCE_CYCLE_ROWS.items():
        label = "example1(7): blocking pairs for " + format_cycle(TradingCycle(nodes))
        expected = format_pairs(problem, want)
        cycle = by_nodes.get(nodes)
        if cycle is None:
            checks.append(_check(label, expected, "cycle not found"))
            continue
        got = {b.pair for b in cycle_blocking_report(problem, [cycle])}
        checks.append(_check(label, expected, format_pairs(problem, got)))
    return tuple(checks)


def criterion_6() -> Tuple[Check, ...]:
    """Among efficient dominating matchings on example1(7) the unique
    inclusion-minimal blocking set is {(i7, s1)}, reached only by
    two-student improvements; maximum-improvement witnesses block a
    strict superset."""
    problem, mine = _example1_state(7)
    frontier = pareto_frontier_over_da(problem)
    checks = [
        _check(
            "example1(7): inclusion-minimal blocking sets",
            "[{(i7, s1)}]",
            "["
            + ", ".join(
                format_pairs(problem, ps) for ps in frontier.minimal_blocking_sets
            )
            + "]",
        )
    ]
    minimal = {("i7", "s1")}
    attaining = [
        e
        for e in frontier.efficient_matchings
        if {b.pair for b in e.blocking} == minimal
    ]
    counts = sorted({len(e.improved) for e in attaining}) if attaining else "none"
    checks.append(
        _check(
            "example1(7): improvement counts when the minimal set is attained",
            "[2]",
            str(counts),
        )
    )
    _, witnesses = max_improvement(problem)
    strict = all(
        {b.pair for b in blocking_pairs(problem, w)} > minimal for w in witnesses
    )
    checks.append(
        _check(
            "example1(7): every maximum-improvement witness blocks a strict superset",
            True,
            strict,
        )
    )
    return tuple(checks)


def criterion_7() -> Tuple[Check, ...]:
    """example2: a disjoint two-cycle family improves six students with
    two blocking pairs, doubly dominating full-consent eada (four
    students, three pairs); da-ttc picks the family matching; i7 is
    improvable by nobody."""
    problem, mine = _example2_state()
    checks = []
    full = eada(problem, ConsentStructure.everyone(problem))
    checks.append(
        _check(
            "example2 eada full consent: improved students",
            "{i1, i4, i5, i6}",
            format_students(problem, improved_students(problem, full, mine)),
        )
    )
    checks.append(
        _check(
            "example2 eada full consent: blocking pairs",
            "{(i3, s6), (i5, s6), (i7, s4)}",
            format_pairs(problem, (b.pair for b in blocking_pairs(problem, full))),
        )
    )
    family = [TradingCycle(("i1", "i2")), TradingCycle(("i3", "i6", "i4", "i5"))]
    alt = None
    try:
        alt = apply_cycles(problem, mine, family)
    except ValueError as exc:
        checks.append(
            Check(
                "example2: the two-cycle family applies to the assignment",
                False,
                "applies",
                f"error: {exc}",
            )
        )
    if alt is not None:
        checks.append(
            _check(
                "example2 two-cycle family: improvement count",
                6,
                len(improved_students(problem, alt, mine)),
            )
        )
        checks.append(
            _check(
                "example2 two-cycle family: blocking pairs",
                "{(i1, s4), (i7, s4)}",
                format_pairs(problem, (b.pair for b in blocking_pairs(problem, alt))),
            )
        )
        checks.append(
            _check(
                "example2: family doubly dominates eada",
                True,
                doubly_dominates(problem, alt, full),
            )
        )
        checks.append(
            _check(
                "example2: da-ttc equals the family matching",
                format_matching(problem, alt),
                format_matching(problem, da_ttc(problem)),
            )
        )
    best, _ = max_improvement(problem)
    checks.append(_check("example2: maximum improvement count", 6, best))
    dominating = enumerate_dominating_matchings(problem)
    checks.append(
        _check(
            "example2: i7 improved in some dominating matching",
            False,
            any("i7" in e.improved for e in dominating.entries),
        )
    )
    return tuple(checks)


def criterion_8() -> Tuple[Check, ...]:
    """example3: da-ttc improves two students at four blocking pairs
    while the two-cycle family improves four students at one pair;
    full-consent eada equals the family matching and doubly dominates
    da-ttc."""
    problem, mine = _example3_state()
    checks = []
    ttc = da_ttc(problem)
    checks.append(
        _check(
            "example3 da-ttc: improved students",
            "{i1, i2}",
            format_students(problem, improved_students(problem, ttc, mine)),
        )
    )
    checks.append(
        _check(
            "example3 da-ttc: blocking pairs",
            "{(i3, s2), (i4, s1), (i4, s2), (i5, s1)}",
            format_pairs(problem, (b.pair for b in blocking_pairs(problem, ttc))),
        )
    )
    family = [TradingCycle(("i1", "i4")), TradingCycle(("i2", "i3"))]
    applied = None
    try:
        applied = apply_cycles(problem, mine, family)
    except ValueError as exc:
        checks.append(
            Check(
                "example3: the two-cycle family applies to the assignment",
                False,
                "applies",
                f"error: {exc}",
            )
        )
    if applied is not None:
        checks.append(
            _check(
                "example3 two-cycle family: improvement count",
                4,
                len(improved_students(problem, applied, mine)),
            )
        )
        checks.append(
            _check(
                "example3 two-cycle family: blocking pairs",
                "{(i5, s1)}",
                format_pairs(
                    problem, (b.pair for b in blocking_pairs(problem, applied))
                ),
            )
        )
        full = eada(problem, ConsentStructure.everyone(problem))
        checks.append(
            _check(
                "example3: eada full consent equals the family matching",
                format_matching(problem, applied),
                format_matching(problem, full),
            )
        )
        checks.append(
            _check(
                "example3: eada doubly dominates da-ttc",
                True,
                doubly_dominates(problem, full, ttc),
            )
        )
    return tuple(checks)


@lru_cache(maxsize=None)
def _random_sweep():
    """Tallies of property violations over the seeded random ensemble."""
    stability: List[str] = []
    dominance: List[str] = []
    equivalence: List[str] = []
    monotonicity: List[str] = []
    efficiency: List[str] = []
    decomposition: List[str] = []
    total = small = 0
    for n in SWEEP_SIZES:
        for k in range(SWEEP_SEEDS_PER_SIZE):
            seed = n * 10000 + k
            problem = instances.random_problem(n, n, max_quota=1, seed=seed)
            tag = f"n={n} seed={seed}"
            total += 1
            mine, _ = deferred_acceptance(problem)
            if not is_stable(problem, mine):
                stability.append(tag)
            rng = random.Random(seed * 31 + 7)
            names = list(problem.students)
            consent = ConsentStructure(
                frozenset(rng.sample(names, rng.randrange(n + 1)))
            )
            partial = eada(problem, consent)
            if not weakly_dominates(problem, partial, mine):
                dominance.append(tag)
            full = eada(problem, ConsentStructure.everyone(problem))
            if full != eada_full_consent_underdemanded(problem):
                equivalence.append(tag)
            waiver = rng.choice(names)
            rest = consent.consenting - {waiver}
            before = eada(problem, ConsentStructure(rest))
            after = eada(problem, ConsentStructure(rest | {waiver}))
            before_rank = problem.rank_of_school(waiver, before.school_of(waiver))
            after_rank = problem.rank_of_school(waiver, after.school_of(waiver))
            if after_rank > before_rank:
                monotonicity.append(tag)
            if n > SWEEP_ORACLE_LIMIT:
                continue
            small += 1
            if not is_pareto_efficient(problem, full):
                efficiency.append(tag + " eada")
            if not is_pareto_efficient(problem, da_ttc(problem)):
                efficiency.append(tag + " da-ttc")
            graph = build_envy_digraph(problem, mine)
            cycle_nodes = {c.nodes for c in enumerate_trading_cycles(graph)}
            dominating = enumerate_dominating_matchings(problem)
            for e in dominating.entries:
                if e.matching == dominating.baseline:
                    continue
                try:
                    cycles = trade_decomposition(
                        problem, dominating.baseline, e.matching
                    )
                except ValueError as exc:
                    decomposition.append(f"{tag}: {exc}")
                    continue
                if any(c.nodes not in cycle_nodes for c in cycles):
                    decomposition.append(f"{tag}: stray cycle")
                elif apply_cycles(problem, dominating.baseline, cycles) != e.matching:
                    decomposition.append(f"{tag}: reapplication mismatch")
    return total, small, {
        "deferred acceptance is stable": stability,
        "eada weakly dominates deferred acceptance": dominance,
        "full-consent eada equals the under-demanded variant": equivalence,
        "consenting never hurts the consenting student": monotonicity,
        "full-consent eada and da-ttc are efficient (small sizes)": efficiency,
        "dominating matchings decompose into trading cycles (small sizes)": decomposition,
    }


def criterion_9() -> Tuple[Check, ...]:
    """Seeded random ensemble, zero violations tolerated."""
    total, small, tallies = _random_sweep()
    checks = [
        _check("random sweep: instances checked", 1000, total),
        _check("random sweep: instances within oracle reach", 750, small),
    ]
    for label, bad in tallies.items():
        actual = (
            "0 violations"
            if not bad
            else f"{len(bad)} violations, first: {bad[0]}"
        )
        checks.append(_check(f"random sweep: {label}", "0 violations", actual))
    return tuple(checks)


CRITERIA: Tuple[Tuple[str, str, Callable[[], Tuple[Check, ...]]], ...] = (
    ("1", "baseline assignment identity on example1", criterion_1),
    ("2", "two-student improvement of eada and da-ttc on example1", criterion_2),
    ("3", "maximum improvement on example1", criterion_3),
    ("4", "improvement ratio through the command line", criterion_4),
    ("5", "reference cycle rows on example1(7)", criterion_5),
    ("6", "minimal blocking set on example1(7)", criterion_6),
    ("7", "double domination on example2", criterion_7),
    ("8", "reverse double domination on example3", criterion_8),
    ("9", "randomized property sweep", criterion_9),
)


def run_all() -> List[Tuple[str, str, Tuple[Check, ...]]]:
    """Run every criterion; a crash in one becomes a failed check
    instead of taking down the rest."""
    results = []
    for key, description, fn in CRITERIA:
        try:
            checks = fn()
        except Exception as exc:
            checks = (
                Check(
                    f"criterion {key} computation",
                    False,
                    "completes without error",
                    f"error: {exc!r}",
                ),
            )
        results.append((key, description, checks))
    return results


def reference_cycle_table() -> str:
    """Plain-text table of every trading cycle over example1(7) and the
    blocking pairs its lone application creates."""
    problem, mine = _example1_state(7)
    cycles = enumerate_trading_cycles(build_envy_digraph(problem, mine))
    rows = [
        (
            format_cycle(c),
            format_pairs(
                problem, (b.pair for b in cycle_blocking_report(problem, [c]))
            ),
        )
        for c in cycles
    ]
    width = max(len(left) for left, _ in rows + [("cycle", "")])
    lines = [f"{'cycle'.ljust(width)}  blocking pairs"]
    for left, right in rows:
        lines.append(f"{left.ljust(width)}  {right}")
    return "\n".join(lines) + "\n"
