"""Derived instance families and the mixed-capacity extension.

Two constructors build superincreasing pairs whose greedy vectors have
closed forms: divisor chains (mixed-radix number systems) and pure powers
of a base (positional digit expansions).

``MixedInstance`` adds one continuous variable y sharing a rational
capacity with the integer part: a^T x + y <= b, 0 <= y <= ub_cont.  Its
convex hull is assembled from two integer-capacity pieces — the distance
from b decides whether y alone can absorb the slack — glued back together
with a single disjunction multiplier.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import KnapsackInstance, Sense, _check_vectors, is_superincreasing
from .errors import (
    EmptyIntersection,
    LengthMismatch,
    NotDivisorChain,
    NotStartingAtOne,
    NotSuperincreasing,
)
from .facets import HPolytope, LinearInequality, _unit, hull_le
from .greedy import profile_for
from .intersect import build_two_sided, intersection_hull
from .ratlp import lp_feasible


def integer_basis_instance(
    chain: Sequence[int], last_bound: int | None = None
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Bounds u that make a divisor chain a superincreasing pair.

    ``chain`` must start at 1 and each entry must divide the next with
    quotient >= 2.  The returned u has u_i = a_{i+1}/a_i - 1, so every
    prefix fills up to exactly a_{i+1} - 1: greedy over (a, u) computes
    mixed-radix digits.  The top bound is free; it defaults to the last
    quotient minus one and can be overridden with ``last_bound``.
    """
    a = tuple(int(v) for v in chain)
    if len(a) < 2:
        raise ValueError("chain needs at least two entries")
    if a[0] != 1:
        raise NotStartingAtOne(f"chain starts at {a[0]}, not 1")
    for i in range(len(a) - 1):
        if a[i + 1] % a[i] != 0 or a[i + 1] // a[i] < 2:
            raise NotDivisorChain(
                f"entry {i + 2} ({a[i + 1]}) is not a proper multiple of {a[i]}"
            )
    top = a[-1] // a[-2] - 1 if last_bound is None else int(last_bound)
    if top < 1:
        raise ValueError("last bound must be >= 1")
    u = tuple(a[i + 1] // a[i] - 1 for i in range(len(a) - 1)) + (top,)
    assert all(
        sum(a[k] * u[k] for k in range(i + 1)) == a[i + 1] - 1
        for i in range(len(a) - 1)
    )
    assert is_superincreasing(a, u)[0]
    return a, u


def alpha_expansion_instance(alpha: int, ubound: int) -> KnapsackInstance:
    """The base-``alpha`` instance whose greedy vector is ``ubound``'s digits.

    Weights are 1, alpha, alpha^2, ... with every bound alpha - 1, sized so
    the top weight does not exceed ``ubound``.
    """
    if alpha < 2:
        raise ValueError("base must be at least 2")
    if ubound < 1:
        raise ValueError("capacity must be positive")
    digits = []
    v = ubound
    while v:
        digits.append(v % alpha)
        v //= alpha
    inst = KnapsackInstance(
        tuple(alpha**t for t in range(len(digits))),
        (alpha - 1,) * len(digits),
        ubound,
    )
    _, gp = profile_for(inst)
    assert list(gp.theta) == digits
    return inst


@dataclass(frozen=True)
class MixedInstance:
    """Integer knapsack plus one continuous variable on the same capacity.

    The feasible set is {(x, y) : a^T x + y <= b, x integer in [0, u],
    0 <= y <= ub_cont} with rational b and ub_cont, 0 < ub_cont <= b.
    """

    a: tuple[int, ...]
    u: tuple[int, ...]
    ub_cont: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "u", tuple(int(v) for v in self.u))
        object.__setattr__(self, "ub_cont", Fraction(self.ub_cont))
        object.__setattr__(self, "b", Fraction(self.b))
        _check_vectors(self.a, self.u)
        ok, idx = is_superincreasing(self.a, self.u)
        if not ok:
            assert idx is not None
            raise NotSuperincreasing(idx)
        if self.ub_cont <= 0:
            raise ValueError("continuous upper bound must be positive")
        if self.ub_cont > self.b:
            raise ValueError("continuous upper bound exceeds the capacity")

    @property
    def n(self) -> int:
        return len(self.a)

    def feasible(self, x: Sequence[int], y) -> bool:
        """Direct test of the defining constraints."""
        if len(x) != self.n:
            raise LengthMismatch(f"point has length {len(x)}, expected {self.n}")
        if any(xi < 0 or xi > ui for xi, ui in zip(x, self.u)):
            return False
        if not 0 <= Fraction(y) <= self.ub_cont:
            return False
        return sum(ai * xi for ai, xi in zip(self.a, x)) + Fraction(y) <= self.b


def _pad(row: LinearInequality, dim: int) -> LinearInequality:
    coeffs = row.coeffs + (0,) * (dim - len(row.coeffs))
    return LinearInequality(coeffs, row.rhs, row.sense, row.tag)


def _live_prefix(a: Sequence[int], cap: int) -> int:
    """Length of the prefix whose weights fit in cap (weights nondecreasing)."""
    m = len(a)
    while m and a[m - 1] > cap:
        m -= 1
    return m


def _pin_rows(n: int, start: int, width: int) -> list[LinearInequality]:
    rows = []
    for i in range(start, n):
        rows.append(LinearInequality(_unit(width, i), 0, Sense.LE, f"BOUND_UPPER({i + 1})"))
        rows.append(LinearInequality(_unit(width, i), 0, Sense.GE, f"BOUND_LOWER({i + 1})"))
    return rows


def _deep_branch_hull(mi: MixedInstance) -> HPolytope:
    """Hull of the branch a^T x <= floor(b - ub_cont), y in [0, ub_cont].

    Here y has the whole interval available, so x and y decouple: the hull
    is a product of a pure packing hull with a segment.
    """
    n = len(mi.a)
    cap = math.floor(mi.b - mi.ub_cont)
    m = _live_prefix(mi.a, cap)
    rows: list[LinearInequality] = []
    if m:
        vk, gp = profile_for(KnapsackInstance(mi.a[:m], mi.u[:m], cap))
        rows += [_pad(r, n + 1) for r in hull_le(vk, gp).ineqs]
    rows += _pin_rows(n, m, n + 1)
    rows.append(
        LinearInequality(
            _unit(n + 1, n, mi.ub_cont.denominator),
            mi.ub_cont.numerator,
            Sense.LE,
            "CONT_UPPER",
        )
    )
    rows.append(LinearInequality(_unit(n + 1, n), 0, Sense.GE, "CONT_LOWER"))
    return HPolytope(n + 1, tuple(rows))


def _tight_branch_hull(mi: MixedInstance) -> HPolytope:
    """Hull of the branch ceil(b - ub_cont) <= a^T x <= floor(b), 0 <= y <= b - a^T x.

    The integer part lives in a two-sided set with equal weight vectors on
    both sides, so its hull rows come from the lex-interval description; the
    continuous variable is clamped by the shared-capacity row.  Raises
    EmptyIntersection when no integer point reaches the lower threshold.
    """
    n = len(mi.a)
    fb = math.floor(mi.b)
    d1 = math.ceil(mi.b - mi.ub_cont)
    m = _live_prefix(mi.a, fb)
    rows: list[LinearInequality] = []
    if m == 0:
        if d1 > 0:
            raise EmptyIntersection(
                f"no integer point reaches {d1} under capacity {fb}"
            )
        rows += _pin_rows(n, 0, n + 1)
    else:
        ts = build_two_sided(
            KnapsackInstance(mi.a[:m], mi.u[:m], fb),
            KnapsackInstance(mi.a[:m], mi.u[:m], d1, Sense.GE),
        )
        rows += [_pad(r, n + 1) for r in intersection_hull(ts).ineqs]
        rows += _pin_rows(n, m, n + 1)
    den = mi.b.denominator
    rows.append(
        LinearInequality(
            tuple(den * ai for ai in mi.a) + (den,),
            mi.b.numerator,
            Sense.LE,
            "CAPACITY",
        )
    )
    rows.append(LinearInequality(_unit(n + 1, n), 0, Sense.GE, "CONT_LOWER"))
    return HPolytope(n + 1, tuple(rows))


@dataclass(frozen=True)
class MixedExtendedSystem:
    """Disjunctive hull of a mixed instance over (x, y, x', y', lam).

    (x', y') is the portion of (x, y) assigned to the tight branch (integer
    weight within ub_cont of the capacity) and lam its multiplier; the deep
    branch's copy is eliminated as (x - x', y - y').  Every point of the
    mixed set lifts with lam in {0, 1}; projecting out the primed block and
    lam gives exactly the convex hull of the mixed set.
    """

    n: int
    rows: tuple[LinearInequality, ...]
    tight_hull: HPolytope
    deep_hull: HPolytope

    @property
    def dim(self) -> int:
        return 2 * (self.n + 1) + 1

    def var_names(self) -> tuple[str, ...]:
        xs = [f"x{i + 1}" for i in range(self.n)]
        return tuple(xs + ["y"] + [s + "'" for s in xs] + ["y'", "lam"])

    def satisfies(self, point: Sequence) -> bool:
        if len(point) != self.dim:
            raise LengthMismatch(f"point has length {len(point)}, expected {self.dim}")
        return all(row.satisfied(point) for row in self.rows)

    def contains(self, x: Sequence, y) -> bool:
        """Exact membership of (x, y) in the hull: is there a feasible lift?"""
        if len(x) != self.n:
            raise LengthMismatch(f"point has length {len(x)}, expected {self.n}")
        cons = [(row.coeffs, row.rhs, row.sense) for row in self.rows]
        for i, v in enumerate(tuple(x) + (y,)):
            cons.append((_unit(self.dim, i), Fraction(v), None))
        return lp_feasible(cons, self.dim) is not None

    def render(self) -> str:
        names = self.var_names()
        lines = []
        for row in self.rows:
            terms: list[str] = []
            for k, c in enumerate(row.coeffs):
                if c == 0:
                    continue
                mag = abs(c)
                body = names[k] if mag == 1 else f"{mag}{names[k]}"
                if not terms:
                    terms.append(body if c > 0 else f"-{body}")
                else:
                    terms.append(f"+ {body}" if c > 0 else f"- {body}")
            op = "<=" if row.sense is Sense.LE else ">="
            lines.append(f"{' '.join(terms) if terms else '0'} {op} {row.rhs}")
        return "\n".join(lines)


def mixed_hull_extended(mi: MixedInstance) -> MixedExtendedSystem:
    """Compose the two branch hulls into one exact extended formulation.

    Each tight-branch row c (x, y) <= r becomes c (x', y') <= r lam; each
    deep-branch row is applied to the eliminated copy, c (x - x', y - y') <=
    r (1 - lam).  Integer capacities land in both branches, so points with
    a^T x = floor(b - ub_cont) = b - ub_cont are reachable either way.
    """
    tight = _tight_branch_hull(mi)
    deep = _deep_branch_hull(mi)
    base = mi.n + 1
    dim = 2 * base + 1
    rows: list[LinearInequality] = []
    for row in tight.ineqs:
        coeffs = (0,) * base + row.coeffs + (-row.rhs,)
        rows.append(LinearInequality(coeffs, 0, row.sense, "TIGHT_" + row.tag))
    for row in deep.ineqs:
        coeffs = row.coeffs + tuple(-c for c in row.coeffs) + (row.rhs,)
        rows.append(LinearInequality(coeffs, row.rhs, row.sense, "DEEP_" + row.tag))
    rows.append(LinearInequality(_unit(dim, dim - 1), 1, Sense.LE, "LAMBDA_UPPER"))
    rows.append(LinearInequality(_unit(dim, dim - 1), 0, Sense.GE, "LAMBDA_LOWER"))
    return MixedExtendedSystem(mi.n, tuple(rows), tight, deep)
