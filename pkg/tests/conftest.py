from __future__ import annotations

import os
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ddfrac.graph import Graph, make_complete, make_cycle, make_petersen  # noqa: E402

DATA = Path(__file__).parent / "data"

# acceptance results collected during the run: criterion -> [(ok, detail)]
ACCEPTANCE: dict[int, list[tuple[bool, str]]] = {}


def record(criterion: int, ok: bool, detail: str) -> None:
    ACCEPTANCE.setdefault(criterion, []).append((ok, detail))


def instance_dirs() -> list[Path]:
    dirs = []
    env = os.environ.get("DDFRAC_INSTANCE_DIR")
    if env:
        dirs.extend(Path(p) for p in env.split(os.pathsep) if p)
    dirs.append(DATA)
    return dirs


def find_instance(name: str) -> Path | None:
    for d in instance_dirs():
        p = d / f"{name}.col"
        if p.exists():
            return p
    return None


@pytest.fixture
def diamond() -> Graph:
    # V={1,2,3,4}, E={13,34,42,21,32}, 0-based
    return Graph.from_edges(4, [(0, 2), (2, 3), (3, 1), (1, 0), (2, 1)], "diamond")


@pytest.fixture
def c5() -> Graph:
    return make_cycle(5)


@pytest.fixture
def k4() -> Graph:
    return make_complete(4)


@pytest.fixture
def petersen() -> Graph:
    return make_petersen()


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        items = ACCEPTANCE[k]
        ok = all(flag for flag, _ in items)
        detail = "; ".join(d for _, d in items)
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
