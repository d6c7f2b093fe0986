import numpy as np
import pytest

from btncodec.codes import VectorSet

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record a one-line verdict per acceptance criterion for the terminal summary."""

    def record(number, passed, detail=""):
        _ACCEPTANCE[number] = (passed, detail)

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(
            f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {detail}"
        )


def random_set(rng, n, D):
    """n distinct random D-bit vectors."""
    if n > 2**D:
        raise ValueError(f"cannot draw {n} distinct vectors of {D} bits")
    if D <= 20:
        ks = rng.choice(2**D, size=n, replace=False)
        rows = (ks[:, None] >> np.arange(D - 1, -1, -1)) & 1
        return VectorSet(rows.astype(np.uint8))
    seen = set()
    rows = []
    while len(rows) < n:
        row = tuple(int(b) for b in rng.integers(0, 2, D))
        if row not in seen:
            seen.add(row)
            rows.append(row)
    return VectorSet(np.array(rows, dtype=np.uint8))


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
