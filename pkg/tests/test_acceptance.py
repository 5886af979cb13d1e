"""Acceptance gate: every published behavior at its stated tolerance.

Each case delegates to one check in ``designkit.acceptance`` and prints
the measured numbers alongside its pass/fail line, so this file is the
single place to see the toolkit's claims verified end to end.

Known failure: ``efficiency-bands``.  The shipped solver and section
polars place the 2000 RPM cruise efficiency above the quoted band (and
the 3200 RPM point above its band), while the >= 0.10 separation holds
comfortably.  The numbers are physically consistent with the rest of
the suite, so the check is left to fail rather than tuning the polars
to an unreachable corner; see the repository notes for the analysis.
"""

import pytest

from designkit import acceptance


def _ident(check):
    return check.__name__.removeprefix("check_").replace("_", "-")


@pytest.mark.parametrize("check", acceptance.ALL_CHECKS, ids=_ident)
def test_acceptance(check):
    result = check()
    status = "PASS" if result.passed else "FAIL"
    print(f"{result.name}: {status} [{result.elapsed:.1f} s] {result.detail}")
    assert result.passed, result.detail
