"""Pattern matrices: construction, composition, search, soundness."""

import random
from fractions import Fraction

import pytest

from bgrowth import patterns as pt
from bgrowth.depgraph import build, shortest_path
from bgrowth.frontier import enumerate_levels
from bgrowth.rational import RootValue
from bgrowth.system import BilinearMap, System, star

from conftest import tree_shapes


# ---------------------------------------------------------------------------
# independent oracle: pattern matrix by unit-vector substitution


def _eval_subst(system, tree, leaf_index, u):
    def rec(t, offset):
        if t == "s":
            return (u if offset == leaf_index else system.seed), offset + 1
        left, offset = rec(t[0], offset)
        right, offset = rec(t[1], offset)
        return star(system.map, left, right), offset

    value, _ = rec(tree, 0)
    return value


def oracle_pattern_matrix(system, tree, leaf_index):
    """Columns of M by evaluating the marked tree at each unit vector."""
    d = system.dim
    cols = [
        _eval_subst(system, tree, leaf_index, tuple(1 if t == j else 0 for t in range(d)))
        for j in range(d)
    ]
    return tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))


def _leaf_count(tree):
    return 1 if tree == "s" else _leaf_count(tree[0]) + _leaf_count(tree[1])


def all_small_patterns(max_pattern_leaves):
    """(tree, marked leaf index) pairs with tree leaves - 1 <= the budget."""
    out = []
    for t in range(2, max_pattern_leaves + 2):
        for shape in tree_shapes(t):
            for mark in range(t):
                out.append((shape, mark))
    return out


# ---------------------------------------------------------------------------
# branch matrices


def test_branch_matrix_linear_order_left(linear_order):
    pm = pt.branch_matrix(linear_order, (1, 1), 1, "L")
    assert pm.matrix == ((1, 1), (0, 1))
    assert pm.leaves == 1


def test_branch_matrix_zero_map():
    system = System(BilinearMap(2, []), (1, 1))
    pm = pt.branch_matrix(system, (1, 1), 1, "L")
    assert pm.matrix == ((0, 0), (0, 0))


def test_branch_matrix_aho_level_two(aho_sloane):
    pm = pt.branch_matrix(aho_sloane, (2, 1), 2, "L")
    assert pm.matrix == ((2, 1), (0, 1))
    assert pm.leaves == 2


def test_branch_matrices_cover_level(aho_sloane):
    table = enumerate_levels(aho_sloane, 4, "none")
    mats = pt.branch_matrices(aho_sloane, table, 4)
    assert len(mats) == 2 * len(table.level(4).vectors)
    assert all(pm.leaves == 4 for pm in mats)


def test_branch_matrix_agrees_with_substitution_oracle(aho_sloane, quadratic_order):
    for system in (aho_sloane, quadratic_order):
        # mark as left child of the root, opposite branch = seed
        assert (
            pt.branch_matrix(system, system.seed, 1, "L").matrix
            == oracle_pattern_matrix(system, ("s", "s"), 0)
        )
        assert (
            pt.branch_matrix(system, system.seed, 1, "R").matrix
            == oracle_pattern_matrix(system, ("s", "s"), 1)
        )


# ---------------------------------------------------------------------------
# composition


def test_compose_unipotent_pair():
    a = pt.PatternMatrix(((1, 1), (0, 1)), 1, (pt.BranchStep("L", 1, (1, 1)),))
    out = pt.compose(a, a)
    assert out.matrix == ((1, 2), (0, 1))
    assert out.leaves == 2
    assert len(out.witness) == 2


def test_compose_growing_pair():
    a = pt.PatternMatrix(((2, 1), (0, 1)), 2, (pt.BranchStep("L", 2, (2, 1)),))
    out = pt.compose(a, a)
    assert out.matrix == ((4, 3), (0, 1))
    assert out.leaves == 4


def test_compose_matches_plain_matrix_product():
    rng = random.Random(5)
    for _ in range(100):
        d = rng.randint(1, 3)
        def rand_matrix():
            return tuple(
                tuple(Fraction(rng.randint(0, 6), rng.randint(1, 3)) for _ in range(d))
                for _ in range(d)
            )
        m1, m2 = rand_matrix(), rand_matrix()
        p1 = pt.PatternMatrix(m1, 1, (pt.BranchStep("L", 1, (1,) * d),))
        p2 = pt.PatternMatrix(m2, 2, (pt.BranchStep("R", 2, (1,) * d),))
        product = pt.compose(p1, p2)
        expected = tuple(
            tuple(sum(m1[i][t] * m2[t][j] for t in range(d)) for j in range(d))
            for i in range(d)
        )
        assert product.matrix == expected
        assert product.leaves == 3


def test_compose_dimension_mismatch():
    a = pt.PatternMatrix(((1,),), 1, (pt.BranchStep("L", 1, (1,)),))
    b = pt.PatternMatrix(((1, 0), (0, 1)), 1, (pt.BranchStep("L", 1, (1, 1)),))
    with pytest.raises(ValueError):
        pt.compose(a, b)


def test_replay_reproduces_search_witnesses(aho_sloane):
    table = enumerate_levels(aho_sloane, 6, "majorized")
    best = pt.search_lower_bound(aho_sloane, table, 10)
    replayed = pt.replay(aho_sloane, best.pattern.witness)
    assert replayed.matrix == best.pattern.matrix
    assert replayed.leaves == best.pattern.leaves


# ---------------------------------------------------------------------------
# patterns from paths


def test_pattern_for_path_edge(linear_order):
    pm = pt.pattern_for_path(linear_order, [0, 1])
    assert pm.leaves == 1
    assert pm.matrix[0][1] > 0


def test_pattern_for_path_rejects_trivial_path(linear_order):
    with pytest.raises(ValueError):
        pt.pattern_for_path(linear_order, [0])


def test_pattern_for_path_self_loop(aho_sloane):
    pm = pt.pattern_for_path(aho_sloane, [0, 0])
    assert pm.leaves == 1
    assert pm.matrix[0][0] > 0


def test_pattern_for_path_rejects_non_edge(linear_order):
    with pytest.raises(ValueError):
        pt.pattern_for_path(linear_order, [1, 0])


def test_positive_entries_match_reachability_both_ways():
    # small exhaustive patterns: every positive entry has a path, and every
    # short path is realized by a pattern of exactly that many leaves
    systems = [
        System(BilinearMap(2, [(0, 0, 1, 1), (0, 1, 0, 1), (1, 1, 1, 1)]), (1, 1)),
        System(BilinearMap(3, [(0, 1, 1, 1), (1, 2, 2, 1), (2, 2, 2, 1)]), (1, 1, 1)),
    ]
    for system in systems:
        graph = build(system)
        seen_positive = set()
        for tree, mark in all_small_patterns(4):
            matrix = oracle_pattern_matrix(system, tree, mark)
            for i in range(system.dim):
                for j in range(system.dim):
                    if matrix[i][j] > 0:
                        seen_positive.add((i, j))
                        assert shortest_path(graph, i, j) is not None
        for i in range(system.dim):
            for j in range(system.dim):
                dist = shortest_path(graph, i, j)
                if dist is not None and 1 <= dist <= 4:
                    pm = pt.pattern_for_path(
                        system, _bfs_path(graph, i, j)
                    )
                    assert pm.matrix[i][j] > 0
                    assert pm.leaves == dist
                    assert (i, j) in seen_positive


def _bfs_path(graph, i, j):
    from bgrowth.depgraph import shortest_path_vertices

    return shortest_path_vertices(graph, i, j)


# ---------------------------------------------------------------------------
# the search


def test_search_linear_order_bound_is_one(linear_order):
    table = enumerate_levels(linear_order, 8, "majorized")
    best = pt.search_lower_bound(linear_order, table, 8)
    assert best.value.compare_scalar(1) == 0


def test_search_aho_beats_the_doubling_value(aho_sloane):
    table = enumerate_levels(aho_sloane, 15, "majorized")
    best = pt.search_lower_bound(aho_sloane, table, 15)
    assert best.value.compare(RootValue(260, 15)) >= 0


def test_search_fib_matmul_approaches_golden_ratio(fib_matmul):
    table = enumerate_levels(fib_matmul, 8, "majorized")
    phi = Fraction(16180339887, 10**10)
    previous = None
    for budget in (8, 16, 32):
        best = pt.search_lower_bound(fib_matmul, table, budget)
        assert best.value.compare_scalar(phi) < 0  # from below
        if previous is not None:
            assert best.value.compare(previous) >= 0  # non-decreasing in budget
        previous = best.value
    assert float(previous) > 1.55


def test_search_monotone_in_budget(quadratic_order):
    table = enumerate_levels(quadratic_order, 8, "majorized")
    result = pt.search(quadratic_order, table, 12)
    values = [bound.value for _leaves, bound in result.running_best]
    for a, b in zip(values, values[1:]):
        assert b.compare(a) >= 0


def test_search_budget_error(aho_sloane):
    table = enumerate_levels(aho_sloane, 10, "majorized")
    with pytest.raises(Exception) as err:
        pt.search(aho_sloane, table, 40, matrix_budget=3)
    assert "budget" in str(err.value)


def test_search_bound_is_sound_by_replay(aho_sloane):
    # repeating the witness t times gives a tree whose i-th entry is at
    # least (M[i][i])**t * seed[i], so the frontier value confirms it
    table = enumerate_levels(aho_sloane, 13, "none")
    best = pt.search_lower_bound(aho_sloane, table, 4)
    m = best.pattern
    i = best.index
    for t in (1, 2, 3):
        power = m
        for _ in range(t - 1):
            power = pt.compose(power, m)
        level = power.leaves + 1
        if level > table.depth:
            break
        floor = (m.matrix[i][i] ** t) * aho_sloane.seed[i]
        value = sum(power.matrix[i][j] * aho_sloane.seed[j] for j in range(2))
        assert value >= floor
        assert table.max_entry(level, i) >= value


def test_matrix_dominance_pruning_is_sound():
    # if A <= B entrywise with equal leaves, any composed diagonal through
    # A is <= the same through B
    rng = random.Random(9)
    for _ in range(50):
        d = 2
        b = tuple(tuple(rng.randint(0, 5) for _ in range(d)) for _ in range(d))
        a = tuple(tuple(max(0, b[i][j] - rng.randint(0, 2)) for j in range(d)) for i in range(d))
        left = tuple(tuple(rng.randint(0, 5) for _ in range(d)) for _ in range(d))
        right = tuple(tuple(rng.randint(0, 5) for _ in range(d)) for _ in range(d))
        step = (pt.BranchStep("L", 1, (1, 1)),)
        for idx in range(d):
            via_a = pt.compose(
                pt.compose(pt.PatternMatrix(left, 1, step), pt.PatternMatrix(a, 1, step)),
                pt.PatternMatrix(right, 1, step),
            ).matrix[idx][idx]
            via_b = pt.compose(
                pt.compose(pt.PatternMatrix(left, 1, step), pt.PatternMatrix(b, 1, step)),
                pt.PatternMatrix(right, 1, step),
            ).matrix[idx][idx]
            assert via_a <= via_b


# ---------------------------------------------------------------------------
# power diagonals


def _pm(matrix, leaves):
    return pt.PatternMatrix(matrix, leaves, (pt.BranchStep("L", leaves, (1,) * len(matrix)),))


def test_power_diagonal_unipotent_stays_one():
    bound = pt.power_diagonal_bound(_pm(((1, 1), (0, 1)), 1), 6)
    assert bound.value.compare_scalar(1) == 0


def test_power_diagonal_single_step():
    bound = pt.power_diagonal_bound(_pm(((2, 1), (0, 1)), 2), 1)
    assert bound.value == RootValue(2, 2)


def test_power_diagonal_swap_matrix():
    bound = pt.power_diagonal_bound(_pm(((0, 2), (2, 0)), 2), 2)
    assert bound.value.compare(RootValue(4, 4)) == 0


def test_power_diagonal_fibonacci_converges(fib_matmul):
    table = enumerate_levels(fib_matmul, 2, "none")
    gen = pt.branch_matrices(fib_matmul, table, 1)[0]
    bound = pt.power_diagonal_bound(gen, 64)
    phi = Fraction(16180339887, 10**10)
    assert bound.value.compare_scalar(phi) < 0
    assert float(bound.value) > 1.60


def test_witness_sexp_renders(aho_sloane):
    pm = pt.branch_matrix(aho_sloane, (2, 1), 2, "L")
    text = pt.witness_sexp(pm)
    assert text == "(branch L 2 (2 1))"
    two = pt.compose(pm, pm)
    assert pt.witness_sexp(two).startswith("(compose (branch L 2 (2 1))")
