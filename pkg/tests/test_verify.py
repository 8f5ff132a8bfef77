"""Report machinery: record structure, witnesses, skip cascades, formats."""

import pytest

from lagext.catalog import entry_by_label
from lagext.verify import (
    CHECK_NAMES,
    ReportRecord,
    format_text,
    format_tsv,
    run_verify_catalog,
    verify_entry,
)


def test_fail_records_must_carry_witness():
    with pytest.raises(ValueError):
        ReportRecord("x", "torsion", "s0", "fail")
    ReportRecord("x", "torsion", "s0", "fail", "T(e1,e2) = (1)")  # fine


def test_clean_entry_emits_all_checks_in_order():
    records = verify_entry(entry_by_label("a_10"), samples=1, seed=0)
    assert [r.check for r in records] == list(CHECK_NAMES)
    assert all(r.status == "pass" for r in records)
    assert all(r.entry == "a_10" for r in records)


def test_parametrized_entry_emits_per_sample():
    records = verify_entry(entry_by_label("l_3"), samples=3, seed=0)
    assert len(records) == 27
    samples = {r.sample for r in records}
    assert len(samples) == 3
    assert all(r.status == "pass" for r in records)


def test_suspect_entry_emits_conflicts_with_both_values():
    records = verify_entry(entry_by_label("l_29"), samples=1, seed=0)
    assert len(records) == len(CHECK_NAMES)
    assert all(r.status == "conflict" for r in records)
    assert all("-1/2 e3" in r.witness and "e4" in r.witness for r in records)


def test_defective_row_fails_with_witness_and_skip_cascade():
    # t_6 is internally inconsistent as shipped; the report machinery must
    # carry exact residual witnesses and skip the checks it blocks.
    records = verify_entry(entry_by_label("t_6"), samples=1, seed=0)
    by_check = {r.check: r for r in records}
    assert by_check["torsion"].status == "fail"
    assert by_check["torsion"].witness == "T(e2,e4) = (0, 0, -1/6, 0)"
    assert by_check["flatness"].status == "fail"
    assert by_check["base-bracket-match"].status == "fail"
    for name in CHECK_NAMES[3:]:
        assert by_check[name].status == "skipped"


def test_exit_code_reflects_fail_records_only():
    _, clean = run_verify_catalog(samples=1, entry_label="l_26")
    assert clean == 0
    _, conflict = run_verify_catalog(samples=1, entry_label="t_17")
    assert conflict == 0
    _, failing = run_verify_catalog(samples=1, entry_label="t_20")
    assert failing == 1


def test_tsv_and_text_formats():
    records, _ = run_verify_catalog(samples=1, entry_label="l_26")
    tsv = format_tsv(records)
    lines = tsv.splitlines()
    assert lines[0] == "entry\tcheck\tsample\tstatus\twitness"
    assert len(lines) == 10
    assert all(len(line.split("\t")) == 5 for line in lines[1:])
    text = format_text(records)
    assert text.endswith("summary: 9 pass, 0 fail, 0 conflict, 0 skipped\n")


def test_full_run_record_accounting():
    records, exit_code = run_verify_catalog(samples=1)
    assert len(records) == 70 * 9
    counts = {}
    for r in records:
        counts[r.status] = counts.get(r.status, 0) + 1
    # 64 clean rows, 3 suspect rows, 3 rows failing the first three checks
    assert counts["pass"] == 64 * 9
    assert counts["conflict"] == 3 * 9
    assert counts["fail"] == 3 * 3
    assert counts["skipped"] == 3 * 6
    assert exit_code == 1
