"""Session-cached enumeration tables shared across test modules.

Building a brute-force f-function table or a full channel table is the
expensive part of the oracle cross-checks, and several test modules need
the same (n, m, q) instances, so both are cached for the whole session.
"""

import pytest

from gammacap import oracle


@pytest.fixture(scope="session")
def brute_tables():
    """Factory: (n, m, q) -> cached brute-force f0/f1/f2 tables."""
    cache = {}

    def get(n, m, q):
        key = (n, m, q)
        if key not in cache:
            cache[key] = oracle.brute_f_functions(n, m, q)
        return cache[key]

    return get


@pytest.fixture(scope="session")
def channel_tables():
    """Factory: ChannelParams -> cached exact channel transition table."""
    cache = {}

    def get(params):
        if params not in cache:
            cache[params] = oracle.build_channel(params)
        return cache[params]

    return get
