"""Exact linear programming over the rationals.

A two-phase dictionary simplex with Bland's rule, run entirely on Fraction
arithmetic.  It is meant for the small feasibility and boundedness questions
that come up when auditing polytopes here (a few dozen rows, a dozen or so
variables), where exactness matters far more than speed.
"""

from __future__ import annotations

import enum
from fractions import Fraction
from typing import Sequence

from .core import Sense

Constraint = tuple[Sequence, object, Sense]  # (coefficients, rhs, sense)


class Status(enum.Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


class _Dictionary:
    """x_B[i] = rhs[i] - sum_j T[i][j] * x_N[j];   z = z0 + sum_j C[j] * x_N[j]."""

    def __init__(self, T, rhs, basics, nonbasics, C, z0):
        self.T = T
        self.rhs = rhs
        self.basics = basics
        self.nonbasics = nonbasics
        self.C = C
        self.z0 = z0

    def pivot(self, i: int, j: int) -> None:
        piv = self.T[i][j]
        enter, leave = self.nonbasics[j], self.basics[i]
        row = [v / piv for v in self.T[i]]
        row[j] = Fraction(1) / piv
        self.rhs[i] = self.rhs[i] / piv
        self.T[i] = row
        for k in range(len(self.T)):
            if k == i:
                continue
            f = self.T[k][j]
            if f:
                self.T[k] = [
                    (-f * row[j2] if j2 == j else self.T[k][j2] - f * row[j2])
                    for j2 in range(len(row))
                ]
                self.rhs[k] -= f * self.rhs[i]
        f = self.C[j]
        if f:
            self.C = [
                (-f * row[j2] if j2 == j else self.C[j2] - f * row[j2])
                for j2 in range(len(row))
            ]
            self.z0 += f * self.rhs[i]
        self.basics[i], self.nonbasics[j] = enter, leave

    def run(self) -> Status:
        """Bland's rule: smallest-index entering and leaving variables."""
        while True:
            cand = [j for j, c in enumerate(self.C) if c > 0]
            if not cand:
                return Status.OPTIMAL
            j = min(cand, key=lambda j2: self.nonbasics[j2])
            best_i, best_ratio = -1, None
            for i in range(len(self.T)):
                t = self.T[i][j]
                if t > 0:
                    ratio = self.rhs[i] / t
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and self.basics[i] < self.basics[best_i])
                    ):
                        best_i, best_ratio = i, ratio
            if best_ratio is None:
                return Status.UNBOUNDED
            self.pivot(best_i, j)


def lp_solve(
    constraints: Sequence[Constraint],
    dim: int,
    objective: Sequence,
    *,
    maximize: bool = True,
) -> tuple[Status, Fraction | None, tuple[Fraction, ...] | None]:
    """Optimize objective^T x over free variables x subject to the constraints.

    Equality rows are accepted and handled as a <=/>= pair.  Returns
    (status, optimal value, an optimal point); value and point are None
    unless status is OPTIMAL.
    """
    rows: list[tuple[list[Fraction], Fraction]] = []  # each: coeffs^T x <= rhs
    for coeffs, rhs, sense in constraints:
        fc = [Fraction(v) for v in coeffs]
        fr = Fraction(rhs)
        if len(fc) != dim:
            raise ValueError("constraint length mismatch")
        if sense is Sense.LE:
            rows.append((fc, fr))
        elif sense is Sense.GE:
            rows.append(([-v for v in fc], -fr))
        else:
            rows.append((fc, fr))
            rows.append(([-v for v in fc], -fr))
    obj = [Fraction(v) for v in objective]
    if not maximize:
        obj = [-v for v in obj]

    # Free x becomes p - q with p, q >= 0; slacks make the dictionary square.
    nstruct = 2 * dim
    m = len(rows)
    if m == 0:
        if any(obj):
            return Status.UNBOUNDED, None, None
        return Status.OPTIMAL, Fraction(0), tuple(Fraction(0) for _ in range(dim))
    struct_cost = obj + [-v for v in obj]

    T = [[row[d] for d in range(dim)] + [-row[d] for d in range(dim)] for row, _ in rows]
    rhs = [r for _, r in rows]
    basics = [nstruct + i for i in range(m)]
    nonbasics = list(range(nstruct))

    if min(rhs) < 0:
        art = nstruct + m
        for i in range(m):
            T[i].append(Fraction(-1))
        nonbasics.append(art)
        d = _Dictionary(T, rhs, basics, nonbasics, [Fraction(0)] * nstruct + [Fraction(-1)], Fraction(0))
        d.pivot(min(range(m), key=lambda i: rhs[i]), nstruct)
        if d.run() is not Status.OPTIMAL or d.z0 != 0:
            return Status.INFEASIBLE, None, None
        if art in d.basics:
            i = d.basics.index(art)
            j = next((j2 for j2, v in enumerate(d.T[i]) if v and d.nonbasics[j2] != art), None)
            if j is None:
                del d.T[i], d.rhs[i], d.basics[i]  # the row degenerated away
            else:
                d.pivot(i, j)
        j = d.nonbasics.index(art)
        for row in d.T:
            del row[j]
        del d.nonbasics[j]
        # Restate the true objective in the surviving nonbasic variables.
        C = [
            (struct_cost[v] if v < nstruct else Fraction(0)) for v in d.nonbasics
        ]
        z0 = Fraction(0)
        for i, v in enumerate(d.basics):
            cb = struct_cost[v] if v < nstruct else Fraction(0)
            if cb:
                z0 += cb * d.rhs[i]
                C = [cj - cb * tij for cj, tij in zip(C, d.T[i])]
        d.C, d.z0 = C, z0
    else:
        d = _Dictionary(T, rhs, basics, nonbasics, list(struct_cost), Fraction(0))

    if d.run() is Status.UNBOUNDED:
        return Status.UNBOUNDED, None, None
    value = {v: d.rhs[i] for i, v in enumerate(d.basics)}
    x = tuple(
        value.get(k, Fraction(0)) - value.get(dim + k, Fraction(0)) for k in range(dim)
    )
    z = d.z0 if maximize else -d.z0
    return Status.OPTIMAL, z, x


def lp_feasible(constraints: Sequence[Constraint], dim: int) -> tuple[Fraction, ...] | None:
    """A feasible point for the system, or None."""
    st, _, x = lp_solve(constraints, dim, [0] * dim)
    return x if st is Status.OPTIMAL else None
