"""Exact solvers against brute force, and greedy bound directions."""

import itertools
import random

import pytest

from drsys.counting import (
    greedy_dominating_set,
    greedy_independent_set,
    max_independent_set,
    min_dominating_set,
)


def random_graph(rng, n, p):
    edges = set()
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < p:
                edges.add((i, j))
    return lambda i, j: (min(i, j), max(i, j)) in edges


def brute_max_independent(n, adjacent):
    best = 0
    for r in range(n, -1, -1):
        for combo in itertools.combinations(range(n), r):
            if all(
                not adjacent(a, b) for a, b in itertools.combinations(combo, 2)
            ):
                return r
    return best


def brute_min_dominating(n, adjacent):
    for r in range(n + 1):
        for combo in itertools.combinations(range(n), r):
            dominated = set(combo)
            for v in combo:
                dominated.update(u for u in range(n) if adjacent(u, v))
            if len(dominated) == n:
                return r
    return n


@pytest.mark.parametrize("seed", range(12))
def test_exact_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 9)
    adj = random_graph(rng, n, rng.choice([0.2, 0.5, 0.8]))
    mis = max_independent_set(n, adj)
    assert len(mis) == brute_max_independent(n, adj)
    assert all(not adj(a, b) for a, b in itertools.combinations(mis, 2))
    mds = min_dominating_set(n, adj)
    assert len(mds) == brute_min_dominating(n, adj)
    dominated = set(mds)
    for v in mds:
        dominated.update(u for u in range(n) if adj(u, v))
    assert len(dominated) == n


def test_clique_components():
    # disjoint cliques: independent set picks one per clique, domination too
    def adj(i, j):
        return i // 4 == j // 4

    assert len(max_independent_set(12, adj)) == 3
    assert len(min_dominating_set(12, adj)) == 3


def test_greedy_bounds_direction():
    for seed in range(8):
        rng = random.Random(100 + seed)
        n = rng.randint(2, 9)
        adj = random_graph(rng, n, 0.4)
        exact_mis = len(max_independent_set(n, adj))
        exact_mds = len(min_dominating_set(n, adj))
        assert len(greedy_independent_set(n, adj)) <= exact_mis
        assert len(greedy_dominating_set(n, adj)) >= exact_mds


def test_determinism():
    rng = random.Random(5)
    adj = random_graph(rng, 9, 0.5)
    assert max_independent_set(9, adj) == max_independent_set(9, adj)
    assert min_dominating_set(9, adj) == min_dominating_set(9, adj)
