"""Text format: parsing, diagnostics with line numbers, serialization
round-trips, and the bundled golden file."""

import pathlib

import pytest

from schoolmatch import (
    ConsentStructure,
    InvalidInstanceError,
    Matching,
    SchoolChoiceProblem,
    deferred_acceptance,
    example1,
    example2,
    example3,
    parse_instance,
    parse_instance_with_consent,
    random_problem,
    serialize_instance,
)

DATA = pathlib.Path(__file__).parent / "data"

BASIC = """\
# tiny instance
students: a b c
schools: x:2 y          # bare name means one seat

pref a: x y
pref b: y x
pref c: x
prio x: b a c
prio y: c
"""


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------


def test_parse_basics():
    p, consent = parse_instance_with_consent(BASIC)
    assert consent is None
    assert p.students == ("a", "b", "c")
    assert p.schools == ("x", "y")
    assert p.quotas == {"x": 2, "y": 1}
    assert p.preferences == {"a": ("x", "y"), "b": ("y", "x"), "c": ("x",)}
    assert p.priorities == {"x": ("b", "a", "c"), "y": ("c",)}


def test_parse_empty_pref_and_prio_lines():
    p = parse_instance(
        "students: a\nschools: x\npref a:\nprio x:\n"
    )
    assert p.preferences == {"a": ()}
    assert p.priorities == {"x": ()}
    m, _ = deferred_acceptance(p)
    assert m.school_of("a") == "-"


def test_parse_consent_all():
    text = BASIC + "consent: all\n"
    p, consent = parse_instance_with_consent(text)
    assert consent == ConsentStructure.everyone(p)


def test_parse_consent_list_and_empty():
    _, consent = parse_instance_with_consent(BASIC + "consent: b c\n")
    assert consent == ConsentStructure(frozenset({"b", "c"}))
    _, consent = parse_instance_with_consent(BASIC + "consent:\n")
    assert consent == ConsentStructure(frozenset())


def test_parse_instance_ignores_consent():
    assert parse_instance(BASIC + "consent: all\n") == parse_instance(BASIC)


@pytest.mark.parametrize(
    "text,fragment",
    [
        ("students a b\nschools: x\n", "line 1"),
        ("students: a\nstuff\n", "line 2: expected"),
        ("students: a\nschools: x\nwhat x: 1\n", "unknown directive"),
        ("students: a\nstudents: a\n", "declared twice"),
        ("students: a\nschools: x\nschools: y\n", "declared twice"),
        ("students: a\nschools: x\npref a: x\npref a: x\n", "declared twice"),
        ("students: a\nschools: x\nprio x: a\nprio x: a\n", "declared twice"),
        ("students: a\nschools: x\nconsent: a\nconsent: a\n", "declared twice"),
        ("students:\nschools: x\n", "students line is empty"),
        ("students: a\nschools: x x\n", "declared twice"),
        ("students: a\nschools: x:zero\n", "bad quota"),
        ("students: a\nschools: :2\n", "bad school token"),
        ("students: a\nschools: x\nconsent: b\n", "line 3: consent names unknown"),
        ("schools: x\n", "missing students"),
        ("students: a\n", "missing schools"),
    ],
)
def test_parse_diagnostics(text, fragment):
    with pytest.raises(InvalidInstanceError, match=fragment):
        parse_instance_with_consent(text)


def test_parse_rejects_unknown_names_via_validation():
    with pytest.raises(InvalidInstanceError):
        parse_instance("students: a\nschools: x\npref a: x zz\n")
    with pytest.raises(InvalidInstanceError):
        parse_instance("students: a\nschools: x\npref a: x x\n")
    with pytest.raises(InvalidInstanceError):
        parse_instance("students: a\nschools: x\nprio x: a b\n")
    with pytest.raises(InvalidInstanceError):
        parse_instance("students: a\nschools: x\npref zz: x\n")


def test_parse_is_deterministic_about_priority_completion():
    text = "students: a b c\nschools: x y z\nprio x: c\n"
    p1 = parse_instance(text)
    p2 = parse_instance(text)
    for s in p1.schools:
        for i in p1.students:
            assert p1.rank_of_student(s, i) == p2.rank_of_student(s, i)
    # the partial line keeps its head, then declaration order
    assert p1.priority_order("x") == ("c", "a", "b")
    assert p1.priority_order("y") == ("a", "b", "c")


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_round_trip_on_bundled_instances(e2, e3):
    for p in (example1(5), example1(8), e2, e3):
        text = serialize_instance(p)
        again, consent = parse_instance_with_consent(text)
        assert again == p
        assert consent is None
        assert serialize_instance(again) == text


def test_round_trip_on_random_instances():
    for seed in range(40):
        n = 2 + seed % 5
        p = random_problem(n, max(2, n - 1), max_quota=3, seed=6000 + seed)
        text = serialize_instance(p)
        assert parse_instance(text) == p


def test_round_trip_with_consent(e2):
    for consent in (
        ConsentStructure.everyone(e2),
        ConsentStructure(frozenset({"i3", "i1"})),
        ConsentStructure(frozenset()),
    ):
        text = serialize_instance(e2, consent)
        p, again = parse_instance_with_consent(text)
        assert p == e2
        assert again == consent
    assert serialize_instance(e2, ConsentStructure.everyone(e2)).endswith("consent: all\n")


def test_serialize_rejects_unwritable_names():
    p = SchoolChoiceProblem(
        students=("a:b",),
        schools=("x",),
        quotas={"x": 1},
        preferences={"a:b": ("x",)},
        priorities={"x": ("a:b",)},
    )
    with pytest.raises(InvalidInstanceError, match="cannot be written"):
        serialize_instance(p)


# ---------------------------------------------------------------------------
# golden file
# ---------------------------------------------------------------------------


def test_golden_file_matches_bundled_instance(e2):
    text = (DATA / "example2.txt").read_text()
    p = parse_instance(text)
    assert p == e2
    assert serialize_instance(p) == text
    m, _ = deferred_acceptance(p)
    assert m == Matching({i: s for i, s in zip(p.students, p.schools)})
