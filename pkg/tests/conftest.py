import pytest

from mxassist.bundled import load_legislation_kb, load_registration_kb
from mxassist.engine import SolveState
from mxassist.logic import PartialStructure


@pytest.fixture(scope="session")
def reg_kb():
    return load_registration_kb()


@pytest.fixture(scope="session")
def leg_kb():
    return load_legislation_kb()


def make_state(kb, obs=None, dec=None) -> SolveState:
    vocab = kb.vocabulary
    return SolveState(
        PartialStructure(vocab, obs or {}), PartialStructure(vocab, dec or {})
    )
