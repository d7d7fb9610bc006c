"""Shared fixtures: Dirichlet domains are expensive, so they are
computed once per machine and cached on disk under .domain-cache."""

import os

import pytest

CACHE_DIR = os.path.join(os.path.dirname(__file__), os.pardir,
                         ".domain-cache")


@pytest.fixture(scope="session")
def domain_cache_dir():
    os.makedirs(CACHE_DIR, exist_ok=True)
    return CACHE_DIR


@pytest.fixture(scope="session")
def get_domain(domain_cache_dir):
    from congfund.cli import cached_domain

    cache = {}

    def fetch(d):
        if d not in cache:
            cache[d] = cached_domain(d, domain_cache_dir)
        return cache[d]

    return fetch


@pytest.fixture(scope="session")
def cover_2(get_domain):
    """The congruence cover of the d = 2 orbifold at the ideal of norm
    3 generated by 1 + sqrt(-2): the smallest full manifold example."""
    from congfund.literals import parse_ideal
    from congfund.triangulation import build_principal

    ideal = parse_ideal(2, ["1+s"])
    return build_principal(get_domain(2), ideal)
