"""Linear optimization over a packed box in a single support walk.

Every feasible point either equals the greedy vector or agrees with it above
some support index j, drops strictly below it at j, and is completely free
underneath (superincreasing weights make the whole sub-box fit).  Scanning
those branches from the bottom of the support upward yields the optimum, all
optimal branches, and the lexicographically greatest optimizer in O(n), with
no enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import ValidatedKnapsack
from .errors import LengthMismatch, NotSupportIndex
from .greedy import GreedyProfile

Cost = int | Fraction


def _checked_costs(c: Sequence, n: int) -> tuple[Cost, ...]:
    if len(c) != n:
        raise LengthMismatch(f"expected {n} costs, got {len(c)}")
    out = []
    for v in c:
        if not isinstance(v, (int, Fraction)) or isinstance(v, bool):
            raise ValueError("costs must be int or Fraction (exact arithmetic only)")
        out.append(v)
    return tuple(out)


def _pos(v: Cost) -> Cost:
    return v if v > 0 else 0


@dataclass(frozen=True)
class LeafDescriptor:
    """One branch of the feasible set, as per-coordinate allowed values.

    leaf == 0 names the single greedy point; leaf == j >= 1 names the points
    that match the greedy vector above j and stay strictly below it at j.
    """

    leaf: int
    values: tuple[tuple[int, ...], ...]

    @property
    def size(self) -> int:
        total = 1
        for vals in self.values:
            total *= len(vals)
        return total

    def __contains__(self, x: Sequence[int]) -> bool:
        return len(x) == len(self.values) and all(
            xi in vals for xi, vals in zip(x, self.values)
        )


@dataclass(frozen=True)
class DPResult:
    value: Cost
    solution: tuple[int, ...]
    leaf: int
    leaves: tuple[int, ...]
    trace: tuple[tuple[int, Cost, Cost], ...]  # (support index, stop value, continue value)


def leaf_set(vk: ValidatedKnapsack, gp: GreedyProfile, j: int) -> LeafDescriptor:
    theta = gp.theta
    u = vk.inst.u
    if j == 0:
        return LeafDescriptor(0, tuple((t,) for t in theta))
    if j not in gp.support:
        raise NotSupportIndex(f"index {j} is not 0 or a support index {gp.support}")
    values = []
    for i in range(1, len(theta) + 1):
        if i > j:
            values.append((theta[i - 1],))
        elif i == j:
            values.append(tuple(range(theta[i - 1])))
        else:
            values.append(tuple(range(u[i - 1] + 1)))
    return LeafDescriptor(j, tuple(values))


def optimize(vk: ValidatedKnapsack, gp: GreedyProfile, c: Sequence) -> DPResult:
    """Maximize c^T x over the feasible set.

    Ties are broken toward the lexicographically greatest optimizer (again in
    the highest-index-first order): the smallest optimal branch index wins,
    and inside the branch each free coordinate takes its largest optimal
    value.
    """
    inst = vk.inst
    n = inst.n
    costs = _checked_costs(c, n)
    theta = gp.theta

    # prefix[i] = value of the best completely free sub-box on coordinates <= i
    prefix = [0] * (n + 1)
    for i in range(1, n + 1):
        prefix[i] = prefix[i - 1] + _pos(costs[i - 1]) * inst.u[i - 1]

    trace = []
    stop_value = {}
    cont: Cost = 0
    for j in gp.support:
        f_stop = _pos(costs[j - 1]) * (theta[j - 1] - 1) + prefix[j - 1]
        f_cont = costs[j - 1] * theta[j - 1] + cont
        stop_value[j] = f_stop
        trace.append((j, f_stop, f_cont))
        cont = max(f_stop, f_cont)
    value = cont

    above: Cost = 0  # cost of following the greedy vector strictly above j
    leaf_total = {}
    for j in reversed(gp.support):
        leaf_total[j] = stop_value[j] + above
        above += costs[j - 1] * theta[j - 1]
    leaves = []
    if above == value:  # "above" is now the full greedy value
        leaves.append(0)
    leaves.extend(j for j in gp.support if leaf_total[j] == value)

    leaf = leaves[0]
    if leaf == 0:
        solution = theta
    else:
        x = list(theta)
        x[leaf - 1] = theta[leaf - 1] - 1 if costs[leaf - 1] >= 0 else 0
        for i in range(leaf - 1):
            x[i] = inst.u[i] if costs[i] >= 0 else 0
        solution = tuple(x)
    return DPResult(value, solution, leaf, tuple(leaves), tuple(trace))


def optimal_leaves(vk: ValidatedKnapsack, gp: GreedyProfile, c: Sequence) -> tuple[int, ...]:
    return optimize(vk, gp, c).leaves
