import pytest

from dburnside.cyclic_group import CyclicPGroup
from dburnside.verify import (
    ALGEBRA_SUITES,
    EXPLORATORY,
    PASS,
    idempotent_summand_note,
    prime_three_sign_note,
    run_verify,
)


@pytest.mark.parametrize("p, n", [(2, 0), (2, 1), (3, 1), (5, 1), (3, 2), (2, 3)])
def test_algebra_suites_pass(p, n):
    report = run_verify(CyclicPGroup(p, n), units=False)
    assert [s.name for s in report.suites] == [name for name, _ in ALGEBRA_SUITES]
    assert all(s.status == PASS for s in report.suites), report.to_json_obj()
    assert not report.failed


def test_units_suite_flags_open_case():
    report = run_verify(CyclicPGroup(2, 2))
    units = report.suites[-1]
    assert units.name == "units" and units.status == EXPLORATORY
    assert report.exploratory and not report.failed


def test_notes():
    G = CyclicPGroup(3, 2)
    note = idempotent_summand_note(G)
    assert "j_M" in note and "does not sum to Id" in note
    sign = prime_three_sign_note()
    assert "(1, -1, -1, 3) satisfies the equations: True" in sign
    assert "(1, -1, -1, -3) satisfies them: False" in sign
