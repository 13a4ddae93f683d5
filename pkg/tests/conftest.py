import os
import sys

import pytest

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

from iqsym.verify import Session  # noqa: E402

CACHE_DIR = os.path.join(os.path.dirname(__file__), "..", ".cache")

_sessions = {}


def get_session(r, sign="even", **kw):
    """Shared sessions so completion runs once per (r, sign, knobs)."""
    key = (r, sign, tuple(sorted(kw.items())))
    if key not in _sessions:
        _sessions[key] = Session(r, sign=sign, cache_dir=CACHE_DIR, **kw)
    return _sessions[key]


@pytest.fixture(scope="session")
def s1():
    return get_session(1)


@pytest.fixture(scope="session")
def s2():
    return get_session(2)


@pytest.fixture(scope="session")
def s1_small():
    # shallow, cheap engine for plumbing tests
    return get_session(1, complete_to=6, degree=16)
