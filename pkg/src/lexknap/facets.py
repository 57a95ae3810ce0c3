"""Complete linear descriptions of superincreasing knapsack hulls.

The convex hull of K = {x in box : a^T x <= b} with (a, u) superincreasing is
cut out by the box together with one *packing inequality* per coordinate j
that the greedy point does not saturate (theta_j < u_j):

    x_j + sum_{i in I_j} phi_j(i) (x_i - theta_i)  <=  theta_j,

where I_j is the part of the support above j and the coefficients telescope
through the support gaps:

    phi_j(i) = (u_j - theta_j) * prod_{k in I, next(j) <= k <= prev(i)} (u_k + 1 - theta_k).

Each such inequality is facet-defining; :func:`facet_certificate` exhibits n
affinely independent tight members of K for it, built from three explicit
point families.  Demand-side hulls come from the complement substitution
y = u - x (:func:`hull_ge`), with an independent direct formula
(:func:`hull_ge_direct`) kept as a cross-check.  For 0/1 bounds the packing
inequalities specialize to minimal covers x_j + sum_{i in I_j} x_i <= |I_j|.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from ._linalg import affine_rank
from .core import (
    Cmp,
    KnapsackInstance,
    Sense,
    ValidatedKnapsack,
    _check_vectors,
    is_superincreasing,
    lex_cmp,
    validate,
)
from .errors import (
    CertificateFailed,
    IndexNotInSupportTail,
    Infeasible,
    InfeasibleShift,
    NotSuperincreasing,
)
from .greedy import GreedyProfile, greedy_solution, minimal_packing


@dataclass(frozen=True)
class LinearInequality:
    """One row c^T x (<= or >=) rhs with exact integer data.

    ``tag`` records the row's role: PACKING(j), GE_PACKING(j), BOUND_UPPER(i)
    or BOUND_LOWER(i), all 1-based.
    """

    coeffs: tuple[int, ...]
    rhs: int
    sense: Sense
    tag: str

    def evaluate(self, point: Sequence) -> Fraction | int:
        return sum(c * x for c, x in zip(self.coeffs, point))

    def satisfied(self, point: Sequence) -> bool:
        v = self.evaluate(point)
        return v <= self.rhs if self.sense is Sense.LE else v >= self.rhs

    def is_tight(self, point: Sequence) -> bool:
        return self.evaluate(point) == self.rhs

    def render(self) -> str:
        terms: list[str] = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mag = abs(c)
            body = f"x{i + 1}" if mag == 1 else f"{mag}x{i + 1}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(f"+ {body}" if c > 0 else f"- {body}")
        lhs = " ".join(terms) if terms else "0"
        op = "<=" if self.sense is Sense.LE else ">="
        return f"{lhs} {op} {self.rhs}"


@dataclass(frozen=True)
class HPolytope:
    """A finite inequality system over dim variables.

    ``relaxation`` marks systems that are only known to be valid (not exact
    integer hulls) — the zero-coefficient two-sided regime sets it.
    """

    dim: int
    ineqs: tuple[LinearInequality, ...]
    relaxation: bool = False

    def satisfies(self, point: Sequence) -> bool:
        return all(row.satisfied(point) for row in self.ineqs)

    def tight_rows(self, point: Sequence) -> tuple[int, ...]:
        return tuple(k for k, row in enumerate(self.ineqs) if row.is_tight(point))

    def render(self) -> str:
        return "\n".join(row.render() for row in self.ineqs)


def _unit(n: int, i: int, value: int = 1) -> tuple[int, ...]:
    row = [0] * n
    row[i] = value
    return tuple(row)


def bound_rows(u: Sequence[int], lower: Sequence[int] | None = None) -> list[LinearInequality]:
    """Box rows x_i <= u_i and x_i >= l_i (default l = 0)."""
    n = len(u)
    lo = lower if lower is not None else [0] * n
    rows = [
        LinearInequality(_unit(n, i), u[i], Sense.LE, f"BOUND_UPPER({i + 1})")
        for i in range(n)
    ]
    rows += [
        LinearInequality(_unit(n, i), lo[i], Sense.GE, f"BOUND_LOWER({i + 1})")
        for i in range(n)
    ]
    return rows


def _phi_general(u: Sequence[int], theta: Sequence[int], support: Sequence[int], j: int, i: int) -> int:
    """phi_j(i) over an explicit support list (1-based j, i)."""
    n = len(u)
    if j == n:
        return 0
    tail = [k for k in support if k > j]
    if i not in tail:
        raise IndexNotInSupportTail(f"i={i} not in support above j={j}")
    prod = u[j - 1] - theta[j - 1]
    for k in tail:
        if k >= i:
            break
        prod *= u[k - 1] + 1 - theta[k - 1]
    return prod


def phi(vk: ValidatedKnapsack, gp: GreedyProfile, j: int, i: int) -> int:
    """Packing coefficient phi_j(i); by convention phi_n(.) = 0.

    Satisfies phi_j(next(j)) = u_j - theta_j and the telescoping step
    phi_j(next(i)) - phi_j(i) = phi_j(i) (u_i - theta_i).
    """
    n = vk.n
    if not 1 <= j <= n:
        raise ValueError(f"j={j} outside 1..{n}")
    return _phi_general(vk.inst.u, gp.theta, gp.support, j, i)


def packing_inequality(vk: ValidatedKnapsack, gp: GreedyProfile, j: int) -> LinearInequality:
    """The j-th packing inequality, constants folded into the rhs.

    Facet-defining whenever theta_j < u_j; for theta_j = u_j it is dominated
    by the bound x_j <= u_j (hull_le suppresses those).
    """
    n = vk.n
    u, theta = vk.inst.u, gp.theta
    coeffs = [0] * n
    coeffs[j - 1] = 1
    rhs = theta[j - 1]
    for i in gp.support_tail(j):
        c = _phi_general(u, theta, gp.support, j, i)
        coeffs[i - 1] = c
        rhs += c * theta[i - 1]
    return LinearInequality(tuple(coeffs), rhs, Sense.LE, f"PACKING({j})")


def hull_le(vk: ValidatedKnapsack, gp: GreedyProfile) -> HPolytope:
    """Complete description of conv K: packing rows (ascending j) plus box."""
    u, theta = vk.inst.u, gp.theta
    rows = [
        packing_inequality(vk, gp, j)
        for j in range(1, vk.n + 1)
        if theta[j - 1] < u[j - 1]
    ]
    rows += bound_rows(u)
    return HPolytope(vk.n, tuple(rows))


# ---------------------------------------------------------------------------
# Demand-side hulls via complementation.


def _ge_split(w: Sequence[int], u: Sequence[int], d: int) -> tuple[int, int]:
    """Live prefix length and complement capacity for a >=-instance.

    Superincreasing weights are increasing, so coordinates whose weight
    exceeds the complement capacity w^T u - d form a top block; those are
    pinned at x_i = u_i.
    """
    total = sum(wi * ui for wi, ui in zip(w, u))
    if total < d:
        raise Infeasible(f"w^T u = {total} < d = {d}")
    cap = total - d
    m = len(w)
    while m >= 1 and w[m - 1] > cap:
        m -= 1
    return m, cap


def hull_ge(w: Sequence[int], u: Sequence[int], d: int) -> HPolytope:
    """Complete description of conv {x in box : w^T x >= d}.

    Implemented by complementing (y = u - x), validating and describing the
    <=-side, then substituting back; pinned coordinates (x_i = u_i forced)
    appear as matching bound pairs.
    """
    _check_vectors(w, u)
    ok, idx = is_superincreasing(w, u)
    if not ok:
        assert idx is not None
        raise NotSuperincreasing(idx)
    if d < 1:
        raise ValueError("demand must be >= 1")
    n = len(w)
    m, cap = _ge_split(w, u, d)

    packing: list[LinearInequality] = []
    lower = list(u)  # pinned default: x_i >= u_i
    upper = list(u)
    if m >= 1:
        vk = validate(KnapsackInstance(tuple(w[:m]), tuple(u[:m]), cap))
        gp = greedy_solution(vk)
        uu, theta = vk.inst.u, gp.theta
        for j in range(1, m + 1):
            if theta[j - 1] >= uu[j - 1]:
                continue
            comp = packing_inequality(vk, gp, j)
            coeffs = list(comp.coeffs) + [0] * (n - m)
            rhs = sum(c * ui for c, ui in zip(comp.coeffs, u[:m])) - comp.rhs
            packing.append(
                LinearInequality(tuple(coeffs), rhs, Sense.GE, f"GE_PACKING({j})")
            )
        for i in range(m):
            lower[i] = u[i] - uu[i]  # tightened complement bound raises the floor
    rows = packing + bound_rows(upper, lower)
    return HPolytope(n, tuple(rows))


def hull_ge_direct(w: Sequence[int], u: Sequence[int], d: int) -> HPolytope:
    """Demand-side hull straight from the minimal packing gamma.

    Coefficients Phi_j(i) = gamma_j * prod_{k in T_j, k < i} (gamma_k + 1)
    over T = {i : gamma_i <= u_i - 1}; emitted for every j with gamma_j >= 1.
    Used as the independent cross-check against :func:`hull_ge`.
    """
    _check_vectors(w, u)
    ok, idx = is_superincreasing(w, u)
    if not ok:
        assert idx is not None
        raise NotSuperincreasing(idx)
    gamma = minimal_packing(w, u, d)
    n = len(w)
    tset = [i for i in range(1, n + 1) if gamma[i - 1] <= u[i - 1] - 1]
    rows: list[LinearInequality] = []
    for j in range(1, n + 1):
        if gamma[j - 1] < 1:
            continue
        coeffs = [0] * n
        coeffs[j - 1] = 1
        rhs = gamma[j - 1]
        prod = gamma[j - 1]
        for i in tset:
            if i <= j:
                continue
            coeffs[i - 1] = prod
            rhs += prod * gamma[i - 1]
            prod *= gamma[i - 1] + 1
        rows.append(LinearInequality(tuple(coeffs), rhs, Sense.GE, f"GE_PACKING({j})"))
    rows += bound_rows(u)
    return HPolytope(n, tuple(rows))


def ge_packing_coefficient(gamma: Sequence[int], u: Sequence[int], j: int, i: int) -> int:
    """Phi_j(i) for a minimal packing gamma (1-based indices; i = n allowed)."""
    n = len(u)
    tset = [k for k in range(1, n + 1) if gamma[k - 1] <= u[k - 1] - 1]
    if i != n and i not in tset:
        raise IndexNotInSupportTail(f"i={i} not in T above j={j}")
    prod = gamma[j - 1]
    for k in tset:
        if j < k < i:
            prod *= gamma[k - 1] + 1
    return prod


# ---------------------------------------------------------------------------
# Facet certificates.


@dataclass(frozen=True)
class FacetCertificate:
    """n affinely independent members of K tight at PACKING(j)."""

    j: int
    inequality: LinearInequality
    points: tuple[tuple[int, ...], ...]
    rank: int

    @property
    def verified(self) -> bool:
        return self.rank == len(self.points[0]) - 1


def facet_certificate(vk: ValidatedKnapsack, gp: GreedyProfile, j: int) -> FacetCertificate:
    """Constructive facet proof for the j-th packing inequality.

    Three point families, counted against n by a telescoping identity:
      1. theta with the part below j zeroed;
      2. for each l < j: e_l, u_j at j, then drop the next support index by 1;
      3. for each support index i above j: saturate j..i-1 on the support,
         drop theta_i by 1 (variant a), plus one extra unit at each gap
         coordinate between the two highest saturated positions (variant b).
    """
    n = vk.n
    u, theta = vk.inst.u, gp.theta
    if not 1 <= j <= n or theta[j - 1] >= u[j - 1]:
        raise CertificateFailed(f"PACKING({j}) is not a candidate facet (theta_j = u_j)")
    ineq = packing_inequality(vk, gp, j)
    tail = gp.support_tail(j)

    points: list[tuple[int, ...]] = []
    base = [0] * n
    for k in range(j - 1, n):
        base[k] = theta[k]
    points.append(tuple(base))

    nxt = gp.next[j]
    assert nxt != 0, "support always reaches n above any facet index"
    for l in range(1, j):
        p = [0] * n
        p[l - 1] = 1
        p[j - 1] = u[j - 1]
        p[nxt - 1] = theta[nxt - 1] - 1
        for k in range(nxt, n):
            p[k] = theta[k]
        points.append(tuple(p))

    for i in tail:
        p = [0] * n
        p[j - 1] = u[j - 1]
        for k in tail:
            if k >= i:
                break
            p[k - 1] = u[k - 1]
        p[i - 1] = theta[i - 1] - 1
        for k in range(i, n):
            p[k] = theta[k]
        points.append(tuple(p))
        start = max(j, gp.prev[i])
        for l in range(start + 1, i):
            q = list(p)
            q[l - 1] = 1
            points.append(tuple(q))

    if len(points) != n:
        raise CertificateFailed(
            f"PACKING({j}) certificate has {len(points)} points, expected n={n}"
        )
    for p in points:
        if any(not 0 <= v <= ub for v, ub in zip(p, u)):
            raise CertificateFailed(f"certificate point {p} leaves the box")
        if lex_cmp(p, theta).result is Cmp.GT:
            raise CertificateFailed(f"certificate point {p} is not in K")
        if not ineq.is_tight(p):
            raise CertificateFailed(f"certificate point {p} is not tight for PACKING({j})")
    rank = affine_rank(points)
    if rank != n - 1:
        raise CertificateFailed(f"PACKING({j}) tight points have affine rank {rank} != {n - 1}")
    return FacetCertificate(j, ineq, tuple(points), rank)


# ---------------------------------------------------------------------------
# Lower-bounded boxes.


def hull_lower_bounded(vk: ValidatedKnapsack, gp: GreedyProfile, l: Sequence[int]) -> HPolytope:
    """Hull of K restricted to x >= l.

    When l <= theta componentwise the packing rows survive unchanged and only
    the box floor rises.  Otherwise shift y = x - l, describe the shifted
    knapsack (capacity b - a^T l) and substitute back; coordinates the shift
    pins (zero shifted bound or zero shifted capacity share) come back as
    equality bound pairs at l_i.
    """
    inst = vk.inst
    n = inst.n
    if len(l) != n:
        raise InfeasibleShift(f"l has length {len(l)}, expected {n}")
    if any(not 0 <= li <= ui for li, ui in zip(l, inst.u)):
        raise InfeasibleShift("l must satisfy 0 <= l <= u")
    shift_cap = inst.b - sum(ai * li for ai, li in zip(inst.a, l))
    if shift_cap < 0:
        raise InfeasibleShift(f"a^T l exceeds the capacity by {-shift_cap}")

    if all(li <= ti for li, ti in zip(l, gp.theta)):
        rows = [
            packing_inequality(vk, gp, j)
            for j in range(1, n + 1)
            if gp.theta[j - 1] < inst.u[j - 1]
        ]
        rows += bound_rows(inst.u, list(l))
        return HPolytope(n, tuple(rows))

    live = [i for i in range(n) if inst.u[i] - l[i] >= 1 and inst.a[i] <= shift_cap]
    upper = list(l)  # pinned default: x_i <= l_i (== l_i from both sides)
    packing: list[LinearInequality] = []
    if live:
        sub = KnapsackInstance(
            tuple(inst.a[i] for i in live),
            tuple(inst.u[i] - l[i] for i in live),
            shift_cap,
        )
        svk = validate(sub)
        sgp = greedy_solution(svk)
        uu, theta = svk.inst.u, sgp.theta
        for j in range(1, len(live) + 1):
            if theta[j - 1] >= uu[j - 1]:
                continue
            row = packing_inequality(svk, sgp, j)
            coeffs = [0] * n
            rhs = row.rhs
            for k, i in enumerate(live):
                coeffs[i] = row.coeffs[k]
                rhs += row.coeffs[k] * l[i]
            packing.append(
                LinearInequality(tuple(coeffs), rhs, Sense.LE, f"PACKING({live[j - 1] + 1})")
            )
        for k, i in enumerate(live):
            upper[i] = l[i] + uu[k]
    rows = packing + bound_rows(upper, list(l))
    return HPolytope(n, tuple(rows))


# ---------------------------------------------------------------------------
# Experimental: block-size generalization of the lex order.


def experimental_beta_lex_hull(
    u: Sequence[int],
    theta: Sequence[int],
    beta: Sequence[int],
    *,
    enumerate_guard: int = 10**6,
) -> HPolytope:
    """Conjectured hull of C = {x in box : x = theta, or x_s <= theta_s - beta_s
    at the highest index s where x and theta differ}.

    The candidate coefficients rescale each phi factor by beta:

        phi_j(i) = (u_j - theta_j)/beta_j * prod (u_k + beta_k - theta_k)/beta_k.

    This is NOT part of any hull output: the system is only returned after a
    full brute-force integer-hull verification, and BetaLexUnverified is
    raised the moment the oracle disagrees (which it does already on small
    instances with beta != 1 — the set generally needs a disjunction).
    """
    from . import oracle  # local import: oracle depends on this module's types

    n = len(u)
    if not (len(theta) == len(beta) == n):
        raise ValueError("u, theta, beta must share a length")
    if any(b < 1 for b in beta):
        raise ValueError("beta entries must be >= 1")
    if any(not 0 <= t <= ub for t, ub in zip(theta, u)):
        raise ValueError("theta must lie in the box")

    support = [i for i in range(1, n + 1) if theta[i - 1] >= 1]
    if n not in support:
        support.append(n)

    rows: list[LinearInequality] = []
    for j in range(1, n + 1):
        if theta[j - 1] >= u[j - 1]:
            continue
        tail = [k for k in support if k > j]
        coeffs: list[Fraction] = [Fraction(0)] * n
        coeffs[j - 1] = Fraction(1)
        rhs = Fraction(theta[j - 1])
        prod = Fraction(u[j - 1] - theta[j - 1], beta[j - 1])
        for i in tail:
            coeffs[i - 1] = prod
            rhs += prod * theta[i - 1]
            prod *= Fraction(u[i - 1] + beta[i - 1] - theta[i - 1], beta[i - 1])
        scale = lcm(*[c.denominator for c in coeffs], rhs.denominator)
        rows.append(
            LinearInequality(
                tuple(int(c * scale) for c in coeffs),
                int(rhs * scale),
                Sense.LE,
                f"PACKING({j})",
            )
        )
    poly = HPolytope(n, tuple(rows + bound_rows(u)))

    def member(x: Sequence[int]) -> bool:
        for s in range(n - 1, -1, -1):
            if x[s] != theta[s]:
                return x[s] <= theta[s] - beta[s]
        return True

    cloud = oracle.enumerate_box(u, member, guard=enumerate_guard)
    report = oracle.assert_integer_hull(poly, cloud, strict=False)
    if not report.passed:
        from .errors import BetaLexUnverified

        raise BetaLexUnverified(
            f"beta-lex system failed the oracle gate: {report.summary()}"
        )
    return poly
