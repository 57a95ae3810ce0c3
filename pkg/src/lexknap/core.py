"""Superincreasing knapsack instances and the reverse-lexicographic order.

An instance is the integer set

    K = { x in Z^n : a^T x <= b,  0 <= x <= u }

with positive integer weights a, bounds u and capacity b.  The weights are
*superincreasing with respect to u* when every prefix saturates below the next
weight:

    a_1 u_1 + ... + a_i u_i  <=  a_{i+1}        for 1 <= i <= n-1.

Under that condition K is exactly a lower set of the reverse-lexicographic
("lex" below) order: compare two box points at the highest index where they
differ.  All structural results downstream (greedy maximality, hull
descriptions, the linear-time DP) flow from that equivalence, which
:func:`membership` exposes directly.

Indices are 1-based in every report, error and docstring; tuples are stored
0-based as usual in Python.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

from .errors import (
    LengthMismatch,
    NonpositiveEntry,
    InfeasibleBound,
    OutOfBox,
    ZeroWeight,
)


class Sense(str, enum.Enum):
    LE = "le"
    GE = "ge"


class Cmp(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class LexOrdering:
    """Outcome of a reverse-lex comparison.

    ``pivot`` is the highest 1-based index where the vectors differ
    (``None`` for equality).
    """

    result: Cmp
    pivot: int | None


@dataclass(frozen=True)
class KnapsackInstance:
    """One knapsack side; ``sense`` says whether b is a capacity or a demand.

    The constructor only enforces shape (equal lengths, n >= 1, u_i >= 1).
    Positivity of the weights and the superincreasing property are checked by
    :func:`validate`, so that deliberately defective instances (zero weights,
    wrong prefix sums) can still be represented, reported on and rejected with
    precise codes.
    """

    a: tuple[int, ...]
    u: tuple[int, ...]
    b: int
    sense: Sense = Sense.LE

    def __post_init__(self) -> None:
        object.__setattr__(self, "a", tuple(int(v) for v in self.a))
        object.__setattr__(self, "u", tuple(int(v) for v in self.u))
        object.__setattr__(self, "b", int(self.b))
        if len(self.a) != len(self.u):
            raise LengthMismatch(f"len(a)={len(self.a)} != len(u)={len(self.u)}")
        if not self.a:
            raise LengthMismatch("empty instance")
        if any(v < 0 for v in self.a):
            raise NonpositiveEntry("negative weight")
        if any(v < 1 for v in self.u):
            raise NonpositiveEntry("bounds must be >= 1")

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class TightenReport:
    instance: "KnapsackInstance"
    changed: bool
    old_bounds: tuple[int, ...]


@dataclass(frozen=True)
class ValidatedKnapsack:
    """A <=-instance that passed the full pipeline.

    ``inst`` carries the tightened bounds and the *original* capacity b;
    operations that want the normalized capacity use a^T theta directly.
    ``nontrivial`` is False when a^T u <= b (the box itself is feasible).
    """

    inst: KnapsackInstance
    superincreasing_certified: bool
    nontrivial: bool

    @property
    def n(self) -> int:
        return self.inst.n


def _check_vectors(a: Sequence[int], u: Sequence[int]) -> None:
    if len(a) != len(u):
        raise LengthMismatch(f"len(a)={len(a)} != len(u)={len(u)}")
    if len(a) == 0:
        raise LengthMismatch("empty vectors")
    if any(v <= 0 for v in a):
        raise ZeroWeight("weights must be strictly positive")
    if any(v < 1 for v in u):
        raise NonpositiveEntry("bounds must be >= 1")


def is_superincreasing(a: Sequence[int], u: Sequence[int]) -> tuple[bool, int | None]:
    """Check the prefix condition; return (ok, first violating index or None).

    The violating index i (1-based) is the smallest one with
    a_1 u_1 + ... + a_i u_i > a_{i+1}.
    """
    _check_vectors(a, u)
    prefix = 0
    for i in range(len(a) - 1):
        prefix += a[i] * u[i]
        if prefix > a[i + 1]:
            return False, i + 1
    return True, None


def lex_cmp(x: Sequence[int], y: Sequence[int]) -> LexOrdering:
    """Reverse-lexicographic comparison: decide at the highest differing index."""
    if len(x) != len(y):
        raise LengthMismatch(f"len(x)={len(x)} != len(y)={len(y)}")
    for i in range(len(x) - 1, -1, -1):
        if x[i] != y[i]:
            return LexOrdering(Cmp.LT if x[i] < y[i] else Cmp.GT, i + 1)
    return LexOrdering(Cmp.EQ, None)


def tighten_bounds(inst: KnapsackInstance) -> TightenReport:
    """Replace u_i by min(u_i, floor(b / a_i)); report whether anything moved.

    Raises InfeasibleBound (with the full 1-based index list) when the
    capacity forces some variable to zero — the caller decides whether a
    fixed-at-zero variable is acceptable.
    """
    if inst.sense is not Sense.LE:
        raise ValueError("tighten_bounds applies to <=-instances")
    if any(v <= 0 for v in inst.a):
        raise ZeroWeight("weights must be strictly positive")
    new_u = []
    forced = []
    for i, (ai, ui) in enumerate(zip(inst.a, inst.u)):
        cap = inst.b // ai
        if cap < 1:
            forced.append(i + 1)
        new_u.append(min(ui, cap))
    if forced:
        raise InfeasibleBound(tuple(forced))
    tightened = tuple(new_u)
    if tightened == inst.u:
        return TightenReport(inst, False, inst.u)
    return TightenReport(
        KnapsackInstance(inst.a, tightened, inst.b, inst.sense), True, inst.u
    )


def validate(inst: KnapsackInstance) -> ValidatedKnapsack:
    """Full pipeline: positivity -> tighten -> superincreasing -> nontriviality.

    Tightening can only shrink prefix sums, so it cannot break the
    superincreasing property; the re-check is kept because it is O(n) and
    makes the guarantee local.  A trivial instance (a^T u <= b) is accepted
    with ``nontrivial=False`` — its hull is the plain box.
    """
    if inst.sense is not Sense.LE:
        raise ValueError("validate applies to <=-instances; complement a demand first")
    _check_vectors(inst.a, inst.u)
    ok, idx = is_superincreasing(inst.a, inst.u)
    if not ok:
        assert idx is not None
        from .errors import NotSuperincreasing

        raise NotSuperincreasing(idx)
    report = tighten_bounds(inst)
    tight = report.instance
    ok, idx = is_superincreasing(tight.a, tight.u)
    if not ok:  # pragma: no cover - mathematically unreachable
        assert idx is not None
        from .errors import NotSuperincreasing

        raise NotSuperincreasing(idx)
    weight = sum(ai * ui for ai, ui in zip(tight.a, tight.u))
    return ValidatedKnapsack(tight, True, weight > tight.b)


def membership(vk: ValidatedKnapsack, theta: Sequence[int], x: Sequence[int], *, debug: bool = False) -> bool:
    """Is x in K?  Equivalently: is x not lex-greater than the greedy point theta?

    With ``debug=True`` the direct inequality a^T x <= b is evaluated as well
    and any disagreement (there can be none) raises AssertionError.
    """
    inst = vk.inst
    if len(x) != inst.n:
        raise LengthMismatch(f"point has length {len(x)}, instance has n={inst.n}")
    for i, (xi, ui) in enumerate(zip(x, inst.u)):
        if not 0 <= xi <= ui:
            raise OutOfBox(f"x_{i + 1}={xi} outside [0, {ui}]")
    member = lex_cmp(x, theta).result is not Cmp.GT
    if debug:
        direct = sum(ai * xi for ai, xi in zip(inst.a, x)) <= inst.b
        assert direct == member, f"lex test {member} disagrees with a^T x <= b {direct}"
    return member
