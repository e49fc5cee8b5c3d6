"""Acceptance gate: one test per criterion, one printed PASS/FAIL line each."""

import pytest

from qsrecon import acceptance


@pytest.mark.parametrize("number", [c[0] for c in acceptance.CRITERIA], ids=[f"criterion-{c[0]:02d}" for c in acceptance.CRITERIA])
def test_criterion(number, capsys):
    result = acceptance.run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


def test_selftest_mutation_is_caught(monkeypatch):
    # flipping the sign convention in the shareholder reply must break the worked-example replay
    from qsrecon import protocol, statevec as sv

    def flipped(m, omega, phi):
        return sv.canonical_angle((-1.0 if m == 1 else 1.0) * omega + phi)

    monkeypatch.setattr(protocol, "shareholder_respond", flipped)
    assert not acceptance.run_criterion(1).passed
