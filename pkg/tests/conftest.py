from __future__ import annotations

import pytest

from precom import Alphabet


@pytest.fixture(scope="session")
def ab2() -> Alphabet:
    return Alphabet(["x", "y"])


@pytest.fixture(scope="session")
def ab3() -> Alphabet:
    return Alphabet(["x", "y", "z"])
