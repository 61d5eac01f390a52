from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from globkernel import fixtures


def corpus():
    """The fixture corpus used across the checker tests."""
    return {
        "discrete_ab_3": fixtures.discrete(("a", "b"), 3),
        "delooping_z2_3": fixtures.delooping(fixtures.cyclic_table(2), 3),
        "delooping_z3_3": fixtures.delooping(fixtures.cyclic_table(3), 3),
        "delooping_s3_3": fixtures.delooping(fixtures.symmetric3_table(), 3),
        "suspension_z2_1_3": fixtures.suspension(fixtures.cyclic_table(2), 1, 3),
        "suspension_z3_2_4": fixtures.suspension(fixtures.cyclic_table(3), 2, 4),
        "product_z2_sz2": fixtures.product(
            fixtures.delooping(fixtures.cyclic_table(2), 3),
            fixtures.suspension(fixtures.cyclic_table(2), 1, 3),
        ),
    }


@pytest.fixture(scope="session")
def fixture_corpus():
    return corpus()


@pytest.fixture(scope="session")
def z2():
    return fixtures.delooping(fixtures.cyclic_table(2), 3)


@pytest.fixture(scope="session")
def z2_deep():
    return fixtures.delooping(fixtures.cyclic_table(2), 4)


@pytest.fixture(scope="session")
def z3():
    return fixtures.delooping(fixtures.cyclic_table(3), 3)


@pytest.fixture(scope="session")
def sus_z2():
    return fixtures.suspension(fixtures.cyclic_table(2), 1, 4)


@pytest.fixture(scope="session")
def sus_z3():
    return fixtures.suspension(fixtures.cyclic_table(3), 2, 4)
