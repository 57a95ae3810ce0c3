"""Shared seeded generators for the random sweeps."""
from __future__ import annotations

import random

from lexknap import KnapsackInstance, Sense, build_two_sided
from lexknap.errors import EmptyIntersection, InfeasibleBound
from lexknap.intersect import IntersectionCase, TwoSidedInstance


def random_si_instance(
    rng: random.Random,
    n: int | None = None,
    umax: int = 4,
    amax: int = 4,
    slackmax: int = 3,
) -> KnapsackInstance:
    """A nontrivial superincreasing instance (prefix sums by construction)."""
    if n is None:
        n = rng.randint(2, 6)
    u = [rng.randint(1, umax) for _ in range(n)]
    a = [rng.randint(1, amax)]
    for _ in range(n - 1):
        a.append(sum(ak * uk for ak, uk in zip(a, u)) + rng.randint(0, slackmax))
    lo = max(ai * ui for ai, ui in zip(a, u))
    hi = sum(ai * ui for ai, ui in zip(a, u)) - 1
    return KnapsackInstance(tuple(a), tuple(u), rng.randint(lo, hi))


def random_si_weights(rng: random.Random, u, wmax: int = 3, slackmax: int = 3):
    """A second superincreasing weight vector over a fixed box."""
    w = [rng.randint(1, wmax)]
    for i in range(len(u) - 1):
        w.append(sum(wk * uk for wk, uk in zip(w, u)) + rng.randint(0, slackmax))
    return tuple(w)


def random_two_sided(
    rng: random.Random,
    want: IntersectionCase | None = None,
    n: int | None = None,
    umax: int = 3,
    tries: int = 2000,
) -> tuple[KnapsackInstance, KnapsackInstance, TwoSidedInstance]:
    """A feasible (le, ge) pair, optionally rejection-sampled to one case."""
    for _ in range(tries):
        le = random_si_instance(rng, n=n, umax=umax)
        w = random_si_weights(rng, le.u)
        total = sum(wi * ui for wi, ui in zip(w, le.u))
        ge = KnapsackInstance(w, le.u, rng.randint(1, total), Sense.GE)
        try:
            ts = build_two_sided(le, ge)
        except (EmptyIntersection, InfeasibleBound):
            continue
        if ts.m == 0:
            continue
        if want is not None:
            from lexknap import case_classify

            if case_classify(ts) is not want:
                continue
        return le, ge, ts
    raise AssertionError("generator exhausted its tries")
