from pathlib import Path

import pytest

from depmat.fileio import parse_graph

REPO_ROOT = Path(__file__).resolve().parents[1]
FIXTURES = REPO_ROOT / "fixtures"
GOLDENS = Path(__file__).resolve().parent / "goldens"

ROBOT_PATH = FIXTURES / "robot.json"


@pytest.fixture(scope="session")
def robot_bytes() -> bytes:
    return ROBOT_PATH.read_bytes()


@pytest.fixture(scope="session")
def robot(robot_bytes):
    return parse_graph(robot_bytes)
