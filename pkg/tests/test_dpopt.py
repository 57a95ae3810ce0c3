import random
from fractions import Fraction
from itertools import product

import pytest

from conftest import random_si_instance
from lexknap import (
    KnapsackInstance,
    leaf_set,
    max_capacity,
    optimal_leaves,
    optimize,
    oracle,
    profile_for,
)
from lexknap.errors import LengthMismatch, NotSupportIndex


def rand_costs(rng, n):
    return [Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(n)]


def test_costs_checked():
    vk, gp = profile_for(KnapsackInstance((1, 3), (2, 2), 7))
    with pytest.raises(LengthMismatch):
        optimize(vk, gp, [1])
    with pytest.raises(ValueError):
        optimize(vk, gp, [0.5, 1])
    with pytest.raises(ValueError):
        optimize(vk, gp, [True, 1])


def test_leaf_set_shapes():
    vk, gp = profile_for(KnapsackInstance((2, 8, 46, 150, 310), (3, 5, 2, 1, 2), 841))
    # theta = (0, 3, 1, 1, 2), support (2, 3, 4, 5)
    zero = leaf_set(vk, gp, 0)
    assert zero.values == ((0,), (3,), (1,), (1,), (2,))
    lf = leaf_set(vk, gp, 3)
    assert lf.values[2] == (0,)  # x_3 in [0, theta_3 - 1] = {0}
    assert lf.values[3] == (1,) and lf.values[4] == (2,)  # pinned at theta
    assert lf.values[0] == (0, 1, 2, 3) and lf.values[1] == (0, 1, 2, 3, 4, 5)
    with pytest.raises(NotSupportIndex):
        leaf_set(vk, gp, 1)


def test_leaves_partition_the_feasible_set():
    """Every feasible point lies in exactly one leaf (the pivot is unique)."""
    rng = random.Random(5)
    for _ in range(10):
        inst = random_si_instance(rng, n=rng.randint(2, 4), umax=3)
        vk, gp = profile_for(inst)
        cloud = oracle.enumerate_lattice(vk)
        seen = set()
        for j in (0,) + gp.support:
            pts = set(product(*leaf_set(vk, gp, j).values))
            assert not pts & seen
            seen |= pts
        assert seen == set(cloud.points)


def test_value_matches_enumeration():
    rng = random.Random(2026)
    for _ in range(12):
        inst = random_si_instance(rng, n=rng.randint(2, 5), umax=3)
        vk, gp = profile_for(inst)
        cloud = oracle.enumerate_lattice(vk)
        for _ in range(25):
            c = rand_costs(rng, inst.n)
            res = optimize(vk, gp, c)
            best, arg = oracle.brute_max(cloud, c)
            assert res.value == best
            assert res.solution in arg
            # reported solution is the lex-greatest optimum
            assert res.solution == max(arg, key=lambda p: p[::-1])


def test_optimal_leaves_exact():
    rng = random.Random(31)
    for _ in range(10):
        inst = random_si_instance(rng, n=rng.randint(2, 4), umax=3)
        vk, gp = profile_for(inst)
        cloud = oracle.enumerate_lattice(vk)
        c = rand_costs(rng, inst.n)
        res = optimize(vk, gp, c)
        best, arg = oracle.brute_max(cloud, c)
        leaves = optimal_leaves(vk, gp, c)
        assert leaves == res.leaves
        # a leaf is optimal iff it contains a maximizer
        opt = set(arg)
        for j in (0,) + gp.support:
            pts = set(product(*leaf_set(vk, gp, j).values))
            assert (j in leaves) == bool(pts & opt)


def test_weight_objective_recovers_greedy():
    rng = random.Random(77)
    for _ in range(10):
        inst = random_si_instance(rng, n=rng.randint(2, 5))
        vk, gp = profile_for(inst)
        res = optimize(vk, gp, list(vk.inst.a))
        assert res.value == max_capacity(vk)
        assert res.solution == gp.theta  # theta is the lex-greatest maximizer
    res = optimize(vk, gp, [-1] * vk.n)
    assert res.value == 0 and res.solution == (0,) * vk.n


def test_int_and_fraction_costs_mix():
    vk, gp = profile_for(KnapsackInstance((2, 8, 46, 150, 310), (3, 5, 2, 1, 2), 841))
    res = optimize(vk, gp, [1, -2, Fraction(3, 4), 0, 5])
    cloud = oracle.enumerate_lattice(vk)
    best, _ = oracle.brute_max(cloud, [1, -2, Fraction(3, 4), 0, 5])
    assert res.value == best == Fraction(29, 2)
