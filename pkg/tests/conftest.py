"""Shared fixtures and independent oracles.

The brute-force oracle enumerates every rooted binary tree shape
explicitly and evaluates each one, deliberately avoiding the package's
level-indexed dynamic program so the two can check each other.
"""

from __future__ import annotations

import random

import pytest
from hypothesis import settings

from bgrowth.rational import rat
from bgrowth.registry import make_example, matmul_system
from bgrowth.system import BilinearMap, System, star

settings.register_profile("ci", derandomize=True, max_examples=50, deadline=None)
settings.load_profile("ci")


# ---------------------------------------------------------------------------
# example systems


@pytest.fixture(scope="session")
def linear_order() -> System:
    return make_example("linear-order")


@pytest.fixture(scope="session")
def aho_sloane() -> System:
    return make_example("aho-sloane")


@pytest.fixture(scope="session")
def quadratic_order() -> System:
    return make_example("quadratic-order")


@pytest.fixture(scope="session")
def fib_matmul() -> System:
    return matmul_system(2, [1, 1, 1, 0])


# ---------------------------------------------------------------------------
# brute-force oracle: explicit tree shapes, no level DP

_SHAPES: dict[int, tuple] = {}


def tree_shapes(n: int) -> tuple:
    """All rooted binary tree shapes with n leaves (subtrees shared)."""
    if n not in _SHAPES:
        if n == 1:
            _SHAPES[n] = ("s",)
        else:
            _SHAPES[n] = tuple(
                (left, right)
                for m in range(1, n)
                for left in tree_shapes(m)
                for right in tree_shapes(n - m)
            )
    return _SHAPES[n]


def evaluate_tree(system: System, tree, cache=None):
    if cache is None:
        cache = {}
    key = id(tree)
    if key not in cache:
        if tree == "s":
            cache[key] = system.seed
        else:
            cache[key] = star(
                system.map,
                evaluate_tree(system, tree[0], cache),
                evaluate_tree(system, tree[1], cache),
            )
    return cache[key]


def brute_level(system: System, n: int) -> list:
    """Sorted deduplicated level-n vectors from exhaustive tree evaluation."""
    cache: dict = {}
    return sorted({evaluate_tree(system, t, cache) for t in tree_shapes(n)})


def brute_max_entry(system: System, n: int, k=None):
    vectors = brute_level(system, n)
    if k is None:
        return max(max(v) for v in vectors)
    return max(v[k] for v in vectors)


def catalan_by_recurrence(n: int) -> int:
    """C_n via C_k = sum_{i} C_i C_{k-1-i}; independent of the closed form."""
    c = [1]
    for k in range(1, n + 1):
        c.append(sum(c[i] * c[k - 1 - i] for i in range(k)))
    return c[n]


# ---------------------------------------------------------------------------
# randomized systems (deterministic seeds)


def random_system(rng: random.Random, max_dim: int = 3) -> System:
    """Sparse random system with coefficients in {0, 1/2, 1, 2}, positive seed."""
    d = rng.randint(1, max_dim)
    values = [0, 0, 0, 0, rat(1, 2), 1, 2]
    coeffs = []
    for k in range(d):
        for i in range(d):
            for j in range(d):
                v = rng.choice(values)
                if v != 0:
                    coeffs.append((k, i, j, v))
    if not coeffs:
        coeffs.append((rng.randrange(d), rng.randrange(d), rng.randrange(d), 1))
    seed = tuple(rng.choice([rat(1, 2), 1, 2]) for _ in range(d))
    return System(BilinearMap(d, coeffs), seed)


def random_system_pool(count: int, seed: int = 20260810, max_dim: int = 3) -> list:
    rng = random.Random(seed)
    return [random_system(rng, max_dim) for _ in range(count)]
