"""One test per acceptance criterion; each prints a PASS/FAIL line.

Tolerances and time limits live in ``exocert.acceptance`` and are fixed:
exceptional sets < 1 s, coverage < 5 s, signature sweep < 30 s, spin
lifting < 1 s with relation error <= 1e-12, parity sweep < 10 s.
"""

import pytest

from exocert import acceptance


@pytest.mark.parametrize("criterion", acceptance.CRITERIA, ids=lambda c: f"criterion_{c.id:02d}")
def test_criterion(criterion, capsys):
    outcome = acceptance.evaluate(criterion)
    with capsys.disabled():
        print("\n" + outcome.line())
    assert outcome.passed, outcome.detail
