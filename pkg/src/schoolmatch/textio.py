"""Line-oriented text format for instances.

    # comment
    students: i1 i2 i3
    schools: s1:1 s2 s3:2     (bare name means quota 1)
    pref i1: s2 s1            (descending preference, may be empty)
    prio s1: i1 i3            (descending priority, may be partial/empty)
    consent: all              (or a space-separated student list, or empty)

Identifiers are non-whitespace tokens without '#' or ':'. The name '-'
is reserved for the outside option and never appears in files.
"""

from typing import Dict, Optional, Tuple

from .errors import InvalidInstanceError
from .model import ConsentStructure, SchoolChoiceProblem


def _fail(lineno: int, message: str):
    raise InvalidInstanceError(f"line {lineno}: {message}")


def parse_instance_with_consent(
    text: str,
) -> Tuple[SchoolChoiceProblem, Optional[ConsentStructure]]:
    """Parse an instance file; the consent line is optional and returned
    separately (None when absent)."""
    students: Optional[Tuple[str, ...]] = None
    schools: list = []
    quotas: Dict[str, int] = {}
    prefs: Dict[str, Tuple[str, ...]] = {}
    prios: Dict[str, Tuple[str, ...]] = {}
    consent_tokens: Optional[Tuple[str, ...]] = None
    consent_line = 0

    lines = text.splitlines()
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            _fail(lineno, f"expected 'key: values', got {line!r}")
        head, rest = line.split(":", 1)
        key = head.split()
        values = rest.split()
        if key == ["students"]:
            if students is not None:
                _fail(lineno, "students declared twice")
            if not values:
                _fail(lineno, "students line is empty")
            students = tuple(values)
        elif key == ["schools"]:
            if schools:
                _fail(lineno, "schools declared twice")
            for token in values:
                if ":" in token:
                    name, _, q = token.rpartition(":")
                    if not name:
                        _fail(lineno, f"bad school token {token!r}")
                    try:
                        quota = int(q)
                    except ValueError:
                        _fail(lineno, f"bad quota in {token!r}")
                else:
                    name, quota = token, 1
                if name in quotas:
                    _fail(lineno, f"school {name!r} declared twice")
                schools.append(name)
                quotas[name] = quota
        elif len(key) == 2 and key[0] == "pref":
            if key[1] in prefs:
                _fail(lineno, f"preferences for {key[1]!r} declared twice")
            prefs[key[1]] = tuple(values)
        elif len(key) == 2 and key[0] == "prio":
            if key[1] in prios:
                _fail(lineno, f"priorities for {key[1]!r} declared twice")
            prios[key[1]] = tuple(values)
        elif key == ["consent"]:
            if consent_tokens is not None:
                _fail(lineno, "consent declared twice")
            consent_tokens = tuple(values)
            consent_line = lineno
        else:
            _fail(lineno, f"unknown directive {head!r}")

    if students is None:
        raise InvalidInstanceError("missing students line")
    if not schools:
        raise InvalidInstanceError("missing schools line")
    problem = SchoolChoiceProblem(
        students=students,
        schools=tuple(schools),
        quotas=quotas,
        preferences=prefs,
        priorities=prios,
    )
    consent = None
    if consent_tokens is not None:
        if consent_tokens == ("all",):
            consent = ConsentStructure.everyone(problem)
        else:
            unknown = set(consent_tokens) - set(students)
            if unknown:
                _fail(consent_line, f"consent names unknown students: {sorted(unknown)}")
            consent = ConsentStructure(frozenset(consent_tokens))
    return problem, consent


def parse_instance(text: str) -> SchoolChoiceProblem:
    """Parse an instance file, ignoring any consent line."""
    problem, _ = parse_instance_with_consent(text)
    return problem


def _check_token(name: str, what: str):
    if not name or any(ch.isspace() for ch in name) or "#" in name or ":" in name:
        raise InvalidInstanceError(f"{what} {name!r} cannot be written to the text format")


def serialize_instance(
    problem: SchoolChoiceProblem, consent: Optional[ConsentStructure] = None
) -> str:
    """Render an instance (and optional consent) in the text format.

    Round-trips through parse_instance_with_consent byte-for-byte stable:
    quotas are always explicit, every student gets a pref line, every
    school a prio line.
    """
    for i in problem.students:
        _check_token(i, "student")
    for s in problem.schools:
        _check_token(s, "school")
    lines = ["students: " + " ".join(problem.students)]
    lines.append(
        "schools: " + " ".join(f"{s}:{problem.quotas[s]}" for s in problem.schools)
    )
    for i in problem.students:
        lines.append(("pref " + i + ": " + " ".join(problem.preferences[i])).rstrip())
    for s in problem.schools:
        lines.append(("prio " + s + ": " + " ".join(problem.priorities[s])).rstrip())
    if consent is not None:
        if consent.consenting == set(problem.students):
            lines.append("consent: all")
        else:
            listed = [i for i in problem.students if consent.consents(i)]
            lines.append(("consent: " + " ".join(listed)).rstrip())
    return "\n".join(lines) + "\n"
