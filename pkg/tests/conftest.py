from pathlib import Path

import pytest

from fourcolor.formats import parse_configs, parse_rules
from fourcolor.rules import INF, diamond_rule, triangle_rule

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA


@pytest.fixture(scope="session")
def birkhoff():
    return parse_configs(DATA / "birkhoff.conf")[0]


@pytest.fixture(scope="session")
def mixed_configs():
    return parse_configs(DATA / "mixed.conf")


@pytest.fixture(scope="session")
def toy_rules():
    return parse_rules(DATA / "toy.rules")


def rule_sets():
    """Empty, single triangle, and a synthetic multi-rule set."""
    return {
        "empty": [],
        "triangle": [triangle_rule(1)],
        "multi": [
            triangle_rule(1, "t55", lo=(5, 5, 5), hi=(5, INF, INF)),
            triangle_rule(2, "t56", lo=(5, 6, 5), hi=(6, INF, 6)),
            diamond_rule(1, "d", lo=(5, 7, 5, 5), hi=(5, INF, INF, INF)),
        ],
    }
