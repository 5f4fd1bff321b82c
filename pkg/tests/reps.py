"""Shared representation fixtures for the tests (cached, they are deterministic)."""

from functools import lru_cache

from fibretool.seedgen import SeedSpec, deformed_rep, symmetric_g, symmetric_hyperelliptic


@lru_cache(maxsize=None)
def seed_h(n):
    return symmetric_hyperelliptic(n)


@lru_cache(maxsize=None)
def seed_g(n):
    return symmetric_g(n)


@lru_cache(maxsize=None)
def deformed(n, seed, magnitude=1.0):
    return deformed_rep(SeedSpec(n, seed, magnitude))
