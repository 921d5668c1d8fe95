import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from reslie import construct  # noqa: E402

GOLDEN = Path(__file__).parent / "golden"

_ALGEBRAS = {}


def algebra(family: str, n: int, p: int):
    """Session-wide cache of constructed algebras (they are immutable)."""
    key = (family, n, p)
    if key not in _ALGEBRAS:
        _ALGEBRAS[key] = construct(family, n, p)
    return _ALGEBRAS[key]


@pytest.fixture
def golden():
    return GOLDEN


# acceptance summary: one line per criterion, printed after the run
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str):
    ACCEPTANCE.setdefault(criterion, []).append((ok, detail))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for c in sorted(ACCEPTANCE):
        parts = ACCEPTANCE[c]
        ok = all(x for x, _ in parts)
        failed = [d for x, d in parts if not x]
        detail = "; ".join(failed) if failed else "; ".join(d for _, d in parts)
        terminalreporter.write_line(f"criterion {c:>2}: {'PASS' if ok else 'FAIL'}  {detail}")
