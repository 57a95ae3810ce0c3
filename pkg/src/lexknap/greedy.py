"""Greedy packings of superincreasing knapsacks.

Scanning from the highest weight down and taking as much of each item as the
remaining capacity allows,

    theta_i = min( u_i,  floor( (b - sum_{k>i} a_k theta_k) / a_i ) ),

yields the lex-greatest point of K, and a^T theta is the maximal capacity
actually reachable (so b can always be replaced by a^T theta without changing
K).  The support I = {i : theta_i >= 1} indexes the only coordinates where a
feasible point can "drop below" theta, which is why it drives every hull and
DP construction downstream.  After bound tightening the top coordinate always
fills completely, so n is in I.

For demand-side (>=) knapsacks the same machinery applies through the
complement x -> u - x: the lex-least point gamma covering demand d is

    gamma_i = u_i - min( u_i,  floor( (w^T u - d - sum_{k>i} w_k (u_k - gamma_k)) / w_i ) ).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Cmp, KnapsackInstance, Sense, ValidatedKnapsack, _check_vectors, lex_cmp, validate
from .errors import Infeasible


@dataclass(frozen=True)
class GreedyProfile:
    """The greedy point theta plus precomputed support navigation.

    support is the 1-based increasing list I (always ending in n);
    prev[j] / next[j] give the nearest support index below / above j,
    with 0 as the "none" sentinel (next[n] = 0).  Both maps are stored as
    tuples indexed 1..n (slot 0 unused).
    """

    theta: tuple[int, ...]
    support: tuple[int, ...]
    prev: tuple[int, ...]
    next: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.theta)

    def support_tail(self, j: int) -> tuple[int, ...]:
        """I_j = support indices strictly above j (1-based)."""
        return tuple(i for i in self.support if i > j)


@dataclass(frozen=True)
class PackingReport:
    """Uniqueness report for the maximal packing theta.

    ``alternate`` is a second maximal packing (same weight, lex-smaller)
    when one exists, built at the smallest index witnessing non-uniqueness.
    """

    unique: bool
    capacity_used: int
    alternate: tuple[int, ...] | None


def _greedy_vector(a: Sequence[int], u: Sequence[int], b: int) -> list[int]:
    theta = [0] * len(a)
    remaining = b
    for i in range(len(a) - 1, -1, -1):
        take = min(u[i], remaining // a[i])
        if take < 0:
            take = 0
        theta[i] = take
        remaining -= a[i] * take
    return theta


def _profile(theta: Sequence[int]) -> GreedyProfile:
    n = len(theta)
    support = tuple(i + 1 for i in range(n) if theta[i] >= 1)
    prev = [0] * (n + 1)
    nxt = [0] * (n + 1)
    last = 0
    for j in range(1, n + 1):
        prev[j] = last
        if theta[j - 1] >= 1:
            last = j
    ahead = 0
    for j in range(n, 0, -1):
        nxt[j] = ahead
        if theta[j - 1] >= 1:
            ahead = j
    return GreedyProfile(tuple(theta), support, tuple(prev), tuple(nxt))


def greedy_solution(vk: ValidatedKnapsack) -> GreedyProfile:
    """Greedy maximal packing of a validated <=-instance.

    Post-validation the top coordinate satisfies a_n u_n <= b, hence
    theta_n = u_n and n is always in the support.
    """
    inst = vk.inst
    theta = _greedy_vector(inst.a, inst.u, inst.b)
    assert theta[-1] == inst.u[-1], "tightened instances fill the top coordinate"
    return _profile(theta)


def max_capacity(vk: ValidatedKnapsack) -> int:
    """g(a, u, b) = a^T theta, the largest weight reachable within b."""
    inst = vk.inst
    theta = _greedy_vector(inst.a, inst.u, inst.b)
    return sum(ai * ti for ai, ti in zip(inst.a, theta))


def uniqueness(vk: ValidatedKnapsack, gp: GreedyProfile) -> PackingReport:
    """Decide whether theta is the only maximal packing.

    A tie requires an index j whose weight equals the full prefix weight,
    a_j = sum_{i<j} a_i u_i, with theta_j > 0 and nothing packed below j:
    swapping one unit of j for the whole prefix preserves a^T x.  The
    alternate reported is built at the smallest such witness.
    """
    inst = vk.inst
    theta = gp.theta
    used = sum(ai * ti for ai, ti in zip(inst.a, theta))
    prefix = 0
    for j in range(1, inst.n):  # 0-based coordinate; 1-based index j+1
        prefix += inst.a[j - 1] * inst.u[j - 1]
        if inst.a[j] == prefix and theta[j] > 0 and all(theta[i] == 0 for i in range(j)):
            alternate = tuple(inst.u[:j]) + (theta[j] - 1,) + tuple(theta[j + 1:])
            assert sum(ai * xi for ai, xi in zip(inst.a, alternate)) == used
            assert lex_cmp(alternate, theta).result is Cmp.LT
            return PackingReport(False, used, alternate)
    return PackingReport(True, used, None)


def minimal_packing(w: Sequence[int], u: Sequence[int], d: int) -> tuple[int, ...]:
    """Lex-least point of {x in box : w^T x >= d} for superincreasing (w, u).

    Computed as the complement of the greedy packing of capacity w^T u - d.
    Raises Infeasible when even the full box misses the demand.
    """
    _check_vectors(w, u)
    if d < 1:
        raise ValueError("demand must be >= 1 (a nonpositive demand is trivially met by 0)")
    total = sum(wi * ui for wi, ui in zip(w, u))
    if total < d:
        raise Infeasible(f"w^T u = {total} < d = {d}")
    comp = _greedy_vector(w, u, total - d)
    return tuple(ui - ci for ui, ci in zip(u, comp))


def complement_le_instance(w: Sequence[int], u: Sequence[int], d: int) -> KnapsackInstance:
    """The <=-instance (w, u, w^T u - d) whose points are u - x for x meeting demand d."""
    total = sum(wi * ui for wi, ui in zip(w, u))
    if total < d:
        raise Infeasible(f"w^T u = {total} < d = {d}")
    return KnapsackInstance(tuple(w), tuple(u), total - d, Sense.LE)


def profile_for(inst: KnapsackInstance) -> tuple[ValidatedKnapsack, GreedyProfile]:
    """Convenience: validate a <=-instance and compute its greedy profile."""
    vk = validate(inst)
    return vk, greedy_solution(vk)
