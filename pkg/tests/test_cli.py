"""Command-line layer: exit codes, golden outputs, determinism, and the
recomputability of every number the reports print."""

import pathlib
import subprocess
import sys

import pytest

from schoolmatch import (
    ConsentStructure,
    da_ttc,
    deferred_acceptance,
    eada,
    example1,
    example2,
    improved_students,
    blocking_pairs,
    max_improvement,
    parse_instance,
    pareto_frontier_over_da,
    serialize_instance,
)
from schoolmatch import cli, verification
from schoolmatch.cli import run_command

DATA = pathlib.Path(__file__).parent / "data"
E2_FILE = str(DATA / "example2.txt")

EXPECTED_VERIFY_FAILURES = [
    "example1(7): trading cycle count",
    "example1(7): blocking pairs for (i1 -> i2 -> i3 -> i4 -> i1)",
    "example1(7): blocking pairs for (i1 -> i2 -> i3 -> i4 -> i5 -> i1)",
    "example1(7): blocking pairs for (i1 -> i6 -> i1)",
    "example1(7): blocking pairs for (i1 -> i6 -> i2 -> i1)",
]


# ---------------------------------------------------------------------------
# golden outputs
# ---------------------------------------------------------------------------


def test_solve_eada_golden():
    code, text = run_command(
        ["solve", "--mechanism", "eada", "--input", E2_FILE, "--consent", "all"]
    )
    assert code == 0
    assert text == (DATA / "solve_example2_eada.txt").read_text()


def test_cycles_golden():
    code, text = run_command(["cycles", "--input", E2_FILE])
    assert code == 0
    assert text == (DATA / "cycles_example2.txt").read_text()


def test_compare_golden():
    code, text = run_command(["compare", "--input", E2_FILE])
    assert code == 0
    assert text == (DATA / "compare_example2.txt").read_text()


def test_reference_table_golden():
    assert verification.reference_cycle_table() == (
        DATA / "cycle_table_example1_7.txt"
    ).read_text()


def test_repeated_runs_are_byte_identical():
    for argv in (
        ["compare", "--input", E2_FILE],
        ["cycles", "--input", E2_FILE],
        ["frontier", "--input", E2_FILE],
        ["feedback-sets", "--input", E2_FILE],
    ):
        first = run_command(argv)
        second = run_command(argv)
        assert first == second
        assert first[0] == 0


# ---------------------------------------------------------------------------
# printed numbers recompute
# ---------------------------------------------------------------------------


def test_compare_values_section_recomputes(e2):
    _, text = run_command(["compare", "--input", E2_FILE])
    values = {}
    for line in text.splitlines():
        if " = " in line:
            key, val = line.split(" = ")
            values[key] = int(val)
    base, _ = deferred_acceptance(e2)
    adjusted = eada(e2, ConsentStructure.everyone(e2))
    traded = da_ttc(e2)
    best, _ = max_improvement(e2)
    frontier = pareto_frontier_over_da(e2)
    assert values == {
        "max_improvement": best,
        "frontier_size": len(frontier.efficient_matchings),
        "improved_da": 0,
        "blocking_da": 0,
        "improved_eada": len(improved_students(e2, adjusted, base)),
        "blocking_eada": len(blocking_pairs(e2, adjusted)),
        "improved_da-ttc": len(improved_students(e2, traded, base)),
        "blocking_da-ttc": len(blocking_pairs(e2, traded)),
    }


def test_max_improve_matches_api(e2):
    code, text = run_command(["max-improve", "--input", E2_FILE])
    assert code == 0
    best, witnesses = max_improvement(e2)
    assert f"max improvement: {best}" in text
    assert f"witnesses: {len(witnesses)}" in text


# ---------------------------------------------------------------------------
# consent handling
# ---------------------------------------------------------------------------


def test_solve_consent_flag_overrides_file(tmp_path):
    path = tmp_path / "inst.txt"
    path.write_text(serialize_instance(example2(), ConsentStructure.everyone(example2())))
    code, text = run_command(
        ["solve", "--mechanism", "eada", "--input", str(path), "--consent", "i1,i5"]
    )
    assert code == 0
    assert "consent: {i1, i5}" in text
    assert "matching: i1->s2 i2->s1 i3->s3 i4->s4 i5->s5 i6->s6 i7->s7" in text


def test_solve_consent_defaults_to_file_then_nobody(tmp_path):
    path = tmp_path / "inst.txt"
    path.write_text(serialize_instance(example2(), ConsentStructure.everyone(example2())))
    code, with_file = run_command(["solve", "--mechanism", "eada", "--input", str(path)])
    assert code == 0
    assert "consent: all" in with_file
    code, without = run_command(["solve", "--mechanism", "eada", "--input", E2_FILE])
    assert code == 0
    # no consent anywhere: the adjustment has nothing to waive
    assert "matching: i1->s1 i2->s2 i3->s3 i4->s4 i5->s5 i6->s6 i7->s7" in without


def test_unknown_consent_name_is_a_usage_error():
    code, text = run_command(
        ["solve", "--mechanism", "eada", "--input", E2_FILE, "--consent", "nobodyhere"]
    )
    assert code == 1
    assert "error:" in text


# ---------------------------------------------------------------------------
# exit codes
# ---------------------------------------------------------------------------


def test_help_exits_zero():
    code, text = run_command(["--help"])
    assert code == 0
    assert "usage:" in text


def test_usage_errors_exit_one():
    for argv in (
        ["frobnicate"],
        ["solve", "--mechanism", "da"],
        ["ratio", "--family", "example1", "--mechanism", "eada"],
        ["family", "example2", "--n", "5"],
    ):
        code, text = run_command(argv)
        assert code == 1, argv
        assert "error" in text.lower()


def test_missing_and_malformed_input_exit_one(tmp_path):
    code, text = run_command(["solve", "--mechanism", "da", "--input", "no-such-file.txt"])
    assert code == 1 and "error:" in text
    bad = tmp_path / "bad.txt"
    bad.write_text("students: a\nschools: x\npref a: zz\n")
    code, text = run_command(["solve", "--mechanism", "da", "--input", str(bad)])
    assert code == 1 and "error:" in text


def test_internal_errors_exit_two(monkeypatch):
    def boom(*args, **kwargs):
        raise RuntimeError("wired to fail")

    monkeypatch.setattr(cli, "render_cycles", boom)
    code, text = run_command(["cycles", "--input", E2_FILE])
    assert code == 2
    assert "internal error:" in text


def test_resource_guard_exits_three(tmp_path):
    students = " ".join(f"i{k}" for k in range(1, 12))
    schools = [f"s{k}" for k in range(1, 12)]
    lines = [f"students: {students}", "schools: " + " ".join(schools)]
    for k in range(1, 12):
        lines.append(f"pref i{k}: " + " ".join(schools))
    for s in schools:
        lines.append(f"prio {s}: {students}")
    path = tmp_path / "big.txt"
    path.write_text("\n".join(lines) + "\n")
    code, text = run_command(["max-improve", "--input", str(path)])
    assert code == 3
    assert "error:" in text and "39916800" in text


# ---------------------------------------------------------------------------
# families and ratios
# ---------------------------------------------------------------------------


def test_family_prints_a_parseable_instance():
    code, text = run_command(["family", "example1", "--n", "5"])
    assert code == 0
    assert parse_instance(text) == example1(5)


def test_family_emit_writes_file(tmp_path):
    out = tmp_path / "fam.txt"
    code, text = run_command(["family", "example1", "--n", "7", "--emit", str(out)])
    assert code == 0
    assert parse_instance(out.read_text()) == example1(7)


def test_ratio_command_value():
    code, text = run_command(
        ["ratio", "--family", "example1", "--n", "9", "--mechanism", "da-ttc"]
    )
    assert (code, text) == (0, "4.0\n")
    code, text = run_command(
        ["ratio", "--family", "example1", "--n", "6", "--mechanism", "eada"]
    )
    assert (code, text) == (0, "2.5\n")


def test_console_entry_point_runs():
    out = subprocess.run(
        [sys.executable, "-m", "schoolmatch.cli", "ratio", "--family", "example1",
         "--n", "9", "--mechanism", "da-ttc"],
        capture_output=True,
        text=True,
    )
    assert out.returncode == 0
    assert out.stdout == "4.0\n"


def test_main_writes_to_stdout(capsys):
    rc = cli.main(["ratio", "--family", "example1", "--n", "5", "--mechanism", "eada"])
    assert rc == 0
    assert capsys.readouterr().out == "2.0\n"


# ---------------------------------------------------------------------------
# bundled verification run
# ---------------------------------------------------------------------------


def test_verify_paper_reports_known_failures():
    code, text = run_command(["verify-paper"])
    assert code == 1
    fails = [line.strip()[5:] for line in text.splitlines() if line.strip().startswith("FAIL")]
    assert fails == EXPECTED_VERIFY_FAILURES
    assert text.rstrip().endswith("110 checks: 105 passed, 5 failed")
