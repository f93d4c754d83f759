"""Shared fixtures.

The two sieve tables and the conductor cache are session-scoped: they are by
far the most expensive objects the suite touches, and every consumer treats
them as read-only.
"""
import pytest

from ekconst import ConductorCache, build_tables


@pytest.fixture(scope="session")
def tables_small():
    # bound 1e5: enough for the identity grid and the x = 1e5 probes
    return build_tables(100_000)


@pytest.fixture(scope="session")
def tables_big():
    # bound 1e7: dual-route cross-check and the large probe
    return build_tables(10_000_000)


@pytest.fixture(scope="session")
def shared_cache():
    # in-memory (no backing path); shared so repeated gamma_q calls across
    # tests never recompute a conductor total
    return ConductorCache(path=None)
