"""Two-sided lex-ordered sets: exact hulls, case split, disjunctive lifting.

With two superincreasing weight vectors on one box, the intersection

    K = {x in box : a^T x <= b, w^T x >= d}

is the lex interval {gamma <= x <= theta} (highest-index-first order), where
theta is the greedy point of the <=-side and gamma the minimal packing of the
>=-side.  For strictly positive weights the convex hull operator distributes:
conv K is cut out by the packing rows of both sides together with the box.

The module builds that description after a full-dimensionality preprocessing
pass (pinning top coordinates where gamma and theta agree), classifies the
remaining instance by the top gap theta_m - gamma_m (one vs. at least two),
and, in the gap-one case, produces the two-branch disjunctive extended
formulation over (x, y) together with the explicit lift used to place
fractional points of the combined system inside it.

When either weight vector has zeros the distributive property genuinely
fails; :func:`relaxed_intersection` still returns the (flagged) intersection
of the two one-sided hulls.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .core import (
    Cmp,
    KnapsackInstance,
    Sense,
    ValidatedKnapsack,
    is_superincreasing,
    lex_cmp,
    validate,
)
from .errors import (
    DifferentBoxes,
    EmptyIntersection,
    LengthMismatch,
    LiftCheckFailed,
    NotInHull,
    NotSuperincreasing,
    WrongCase,
    ZeroCoefficientRegime,
)
from .facets import (
    HPolytope,
    LinearInequality,
    bound_rows,
    ge_packing_coefficient,
    hull_ge,
    hull_le,
    phi,
)
from .greedy import GreedyProfile, _greedy_vector, greedy_solution


class IntersectionCase(enum.Enum):
    GAP_AT_LEAST_TWO = "gap_at_least_two"
    GAP_ONE = "gap_one"


@dataclass(frozen=True)
class TwoSidedInstance:
    """A preprocessed two-sided pair on a common (tightened) box.

    ``theta``/``gamma`` are the lex-greatest and lex-least points of the
    intersection itself.  ``fixed_suffix`` lists the coordinates (1-based)
    pinned to their theta values during preprocessing; everything below them
    is the free prefix, carried as a re-validated instance ``free_le`` with
    its greedy profile and the reduced demand ``free_demand``.
    """

    le: ValidatedKnapsack
    ge: KnapsackInstance
    theta: tuple[int, ...]
    gamma: tuple[int, ...]
    fixed_suffix: tuple[int, ...]
    free_le: ValidatedKnapsack | None
    free_gp: GreedyProfile | None
    free_demand: int

    @property
    def n(self) -> int:
        return self.le.n

    @property
    def m(self) -> int:
        """Length of the free prefix (0 when the set is a single point)."""
        return self.n - len(self.fixed_suffix)

    def as_pair(self) -> tuple[KnapsackInstance, KnapsackInstance]:
        return self.le.inst, self.ge

    def free_part(self, x: Sequence) -> tuple:
        """Project a full-length point to the free prefix, checking the pins."""
        if len(x) != self.n:
            raise LengthMismatch(f"point has length {len(x)}, expected {self.n}")
        for i in self.fixed_suffix:
            if x[i - 1] != self.theta[i - 1]:
                raise NotInHull(
                    f"x_{i}={x[i - 1]} but the intersection pins x_{i}={self.theta[i - 1]}"
                )
        return tuple(x[: self.m])


def build_two_sided(
    le_inst: KnapsackInstance | ValidatedKnapsack,
    ge_inst: KnapsackInstance,
) -> TwoSidedInstance:
    """Validate both sides, compute theta/gamma and pin the forced suffix.

    Pinning repeats while the top free coordinate has gamma_m = theta_m:
    that coordinate is constant on the whole set, so it is fixed, capacities
    are reduced, the prefix box is re-tightened and gamma is recomputed on
    it.  On exit either nothing is free (single point) or the top free gap
    is at least one, which is exactly the full-dimensionality the hull and
    extended-formulation constructions assume.
    """
    raw_le = le_inst.inst if isinstance(le_inst, ValidatedKnapsack) else le_inst
    if raw_le.sense is not Sense.LE:
        raise ValueError("first instance must be a <=-side")
    if ge_inst.sense is not Sense.GE:
        raise ValueError("second instance must be a >=-side")
    if raw_le.u != ge_inst.u:
        raise DifferentBoxes(
            f"boxes differ: le u={raw_le.u}, ge u={ge_inst.u}"
        )
    zero_a = tuple(i + 1 for i, v in enumerate(raw_le.a) if v == 0)
    zero_w = tuple(i + 1 for i, v in enumerate(ge_inst.a) if v == 0)
    if zero_a or zero_w:
        raise ZeroCoefficientRegime(
            "zero weights (le at "
            f"{zero_a or '()'}, ge at {zero_w or '()'}) break distributivity; "
            "use relaxed_intersection for the flagged relaxation"
        )

    vk = validate(raw_le)
    ok, idx = is_superincreasing(ge_inst.a, ge_inst.u)
    if not ok:
        assert idx is not None
        raise NotSuperincreasing(idx)

    n = raw_le.n
    a, w, b, d = raw_le.a, ge_inst.a, raw_le.b, ge_inst.b
    u_cur = list(vk.inst.u)
    theta = tuple(_greedy_vector(a, u_cur, b))

    total = sum(wi * ui for wi, ui in zip(w, u_cur))
    if d > total:
        raise EmptyIntersection(
            f"demand {d} exceeds w^T u = {total} on the tightened box"
        )
    comp = _greedy_vector(w, u_cur, total - d)
    gamma_pref = [ui - ci for ui, ci in zip(u_cur, comp)]
    if lex_cmp(gamma_pref, theta).result is Cmp.GT:
        raise EmptyIntersection("the minimal >=-point already exceeds theta")

    m, b_cur, d_cur = n, b, d
    theta_pref = list(theta)
    while m >= 1 and gamma_pref[m - 1] == theta_pref[m - 1]:
        b_cur -= a[m - 1] * theta_pref[m - 1]
        d_cur -= w[m - 1] * theta_pref[m - 1]
        m -= 1
        for i in range(m):
            u_cur[i] = min(u_cur[i], b_cur // a[i])
        theta_pref = list(_greedy_vector(a[:m], u_cur[:m], b_cur))
        total = sum(w[i] * u_cur[i] for i in range(m))
        assert total >= d_cur, "nonempty interval cannot lose its >=-side"
        comp = _greedy_vector(w[:m], u_cur[:m], total - d_cur)
        gamma_pref = [u_cur[i] - comp[i] for i in range(m)]

    gamma = tuple(gamma_pref) + theta[m:]
    fixed = tuple(range(m + 1, n + 1))
    if m == 0:
        return TwoSidedInstance(vk, _boxed_ge(ge_inst, vk.inst.u), theta, gamma, fixed, None, None, d_cur)

    free_le = validate(KnapsackInstance(a[:m], tuple(u_cur[:m]), b_cur))
    free_gp = greedy_solution(free_le)
    assert free_gp.theta == tuple(theta_pref)
    assert gamma[m - 1] <= theta[m - 1] - 1
    slack = sum(w[i] * free_le.inst.u[i] for i in range(m - 1)) + (theta[m - 1] - 1) * w[m - 1]
    assert slack >= d_cur, "full-dimensionality slack must hold after preprocessing"
    return TwoSidedInstance(vk, _boxed_ge(ge_inst, vk.inst.u), theta, gamma, fixed, free_le, free_gp, d_cur)


def _boxed_ge(ge_inst: KnapsackInstance, u: tuple[int, ...]) -> KnapsackInstance:
    if ge_inst.u == u:
        return ge_inst
    return KnapsackInstance(ge_inst.a, u, ge_inst.b, Sense.GE)


def case_classify(ts: TwoSidedInstance) -> IntersectionCase:
    if ts.m == 0:
        raise WrongCase("the intersection is a single point; no case applies")
    gap = ts.theta[ts.m - 1] - ts.gamma[ts.m - 1]
    assert gap >= 1, "preprocessing guarantees a positive top gap"
    return IntersectionCase.GAP_ONE if gap == 1 else IntersectionCase.GAP_AT_LEAST_TWO


def _embed(row: LinearInequality, n: int) -> LinearInequality:
    return LinearInequality(
        row.coeffs + (0,) * (n - len(row.coeffs)), row.rhs, row.sense, row.tag
    )


def intersection_hull(ts: TwoSidedInstance) -> HPolytope:
    """Exact H-description of the intersection's hull.

    Packing rows of both sides over the free prefix, merged box bounds, and
    one equality pair (matching upper/lower bound rows) per pinned
    coordinate.
    """
    n, m = ts.n, ts.m
    if m == 0:
        return HPolytope(n, tuple(bound_rows(ts.theta, list(ts.theta))))
    assert ts.free_le is not None and ts.free_gp is not None
    u_free = ts.free_le.inst.u
    rows = [
        _embed(row, n)
        for row in hull_le(ts.free_le, ts.free_gp).ineqs
        if row.tag.startswith("PACKING")
    ]
    lower = [0] * n
    if ts.free_demand >= 1:
        ge_poly = hull_ge(ts.ge.a[:m], u_free, ts.free_demand)
        for row in ge_poly.ineqs:
            nz = [(k, c) for k, c in enumerate(row.coeffs) if c]
            if len(nz) == 1 and nz[0][1] == 1 and row.sense is Sense.GE:
                lower[nz[0][0]] = max(lower[nz[0][0]], row.rhs)
            elif row.tag.startswith("GE_PACKING"):
                rows.append(_embed(row, n))
    upper = list(u_free) + list(ts.theta[m:])
    for i in range(m, n):
        lower[i] = ts.theta[i]
    rows += bound_rows(upper, lower)
    return HPolytope(n, tuple(rows))


# ---------------------------------------------------------------------------
# The gap-one extended formulation.


@dataclass(frozen=True)
class ExtendedFormulation:
    """Two-branch disjunctive system over (x_1..x_m, y_1..y_m).

    The system lives on the free prefix of length ``n``; ``fixed_suffix``
    (with values in ``fixed_values``) records how to re-attach the pinned
    coordinates of the original ``full_dim``-dimensional instance.  The
    branch multiplier lambda = (x_m - y_m)/theta_m has been eliminated and
    every row is scaled to integer coefficients by theta_m.  ``g`` and ``h``
    carry the folded packing constants of the two sides, as (j, value) pairs.
    """

    n: int
    full_dim: int
    fixed_suffix: tuple[int, ...]
    fixed_values: tuple[int, ...]
    rows: tuple[LinearInequality, ...]
    g: tuple[tuple[int, int], ...]
    h: tuple[tuple[int, int], ...]

    def satisfies(self, x: Sequence, y: Sequence) -> bool:
        if len(x) != self.n or len(y) != self.n:
            raise LengthMismatch(f"expected two vectors of length {self.n}")
        point = tuple(x) + tuple(y)
        return all(row.satisfied(point) for row in self.rows)

    def violated(self, x: Sequence, y: Sequence) -> tuple[str, ...]:
        point = tuple(x) + tuple(y)
        return tuple(row.tag for row in self.rows if not row.satisfied(point))

    def render(self) -> str:
        lines = []
        for row in self.rows:
            terms: list[str] = []
            for k, c in enumerate(row.coeffs):
                if c == 0:
                    continue
                name = f"x{k + 1}" if k < self.n else f"y{k - self.n + 1}"
                mag = abs(c)
                body = name if mag == 1 else f"{mag}{name}"
                if not terms:
                    terms.append(body if c > 0 else f"-{body}")
                else:
                    terms.append(f"+ {body}" if c > 0 else f"- {body}")
            op = "<=" if row.sense is Sense.LE else ">="
            lines.append(f"{' '.join(terms) if terms else '0'} {op} {row.rhs}")
        return "\n".join(lines)


def extended_formulation(ts: TwoSidedInstance, *, force: bool = False) -> ExtendedFormulation:
    """Eliminated-lambda Balas system for the gap-one disjunction.

    The union being convexified is {x : x_m = theta_m, x lex-below theta} vs.
    {x : x_m = theta_m - 1, x lex-above gamma}; y is the second branch's
    scaled copy.  With ``force=True`` the same system is emitted in the
    gap-at-least-two case for empirical comparison — nothing is guaranteed
    there and callers must verify the projection themselves.
    """
    if ts.m == 0:
        raise WrongCase("no free coordinates to convexify")
    case = case_classify(ts)
    if case is not IntersectionCase.GAP_ONE and not force:
        raise WrongCase(
            f"extended formulation requires a top gap of one, got case {case.value}"
        )
    assert ts.free_le is not None and ts.free_gp is not None
    m = ts.m
    u = ts.free_le.inst.u
    theta = ts.free_gp.theta
    gamma = ts.gamma[:m]
    support = ts.free_gp.support
    tn = theta[m - 1]
    i_r = support[-2] if len(support) >= 2 else 0
    dim = 2 * m

    def mk(coefmap: dict[int, int], rhs: int, sense: Sense, tag: str) -> LinearInequality:
        coeffs = [0] * dim
        for k, v in coefmap.items():
            coeffs[k] = v
        return LinearInequality(tuple(coeffs), rhs, sense, tag)

    def xv(i: int) -> int:
        return i - 1

    def yv(i: int) -> int:
        return m + i - 1

    rows: list[LinearInequality] = []
    for i in range(1, m + 1):
        rows.append(mk({yv(i): 1}, 0, Sense.GE, f"EF_Y_NONNEG({i})"))
        rows.append(mk({xv(i): 1, yv(i): -1}, 0, Sense.GE, f"EF_Y_LE_X({i})"))
    rows.append(mk({xv(m): 1}, tn, Sense.LE, "EF_TOP_UPPER"))
    rows.append(mk({xv(m): 1}, tn - 1, Sense.GE, "EF_TOP_LOWER"))
    rows.append(mk({yv(m): 1, xv(m): tn - 1}, tn * (tn - 1), Sense.LE, "EF_TOP_COUPLE_LE"))
    rows.append(mk({yv(m): 1, xv(m): tn - 1}, tn * (tn - 1), Sense.GE, "EF_TOP_COUPLE_GE"))
    for i in range(i_r + 1, m):
        rows.append(mk({xv(i): 1, yv(i): -1}, 0, Sense.LE, f"EF_GAP_EQ({i})"))
    for i in range(1, m):
        rows.append(
            mk({yv(i): tn, xv(m): u[i - 1], yv(m): -u[i - 1]}, tn * u[i - 1], Sense.LE, f"EF_BRANCH_CAP({i})")
        )
    for i in range(1, i_r + 1):
        rows.append(
            mk({yv(i): tn, xv(i): -tn, xv(m): u[i - 1], yv(m): -u[i - 1]}, 0, Sense.GE, f"EF_BRANCH_FLOOR({i})")
        )

    g_pairs: list[tuple[int, int]] = []
    for j in range(1, m + 1):
        if theta[j - 1] >= u[j - 1]:
            continue
        tail = [i for i in ts.free_gp.support_tail(j) if i != m]
        gj = theta[j - 1] + sum(phi(ts.free_le, ts.free_gp, j, i) * theta[i - 1] for i in tail)
        g_pairs.append((j, gj))
        coefmap = {xv(j): tn, yv(j): -tn, xv(m): -gj, yv(m): gj}
        for i in tail:
            c = tn * phi(ts.free_le, ts.free_gp, j, i)
            coefmap[xv(i)] = c
            coefmap[yv(i)] = -c
        rows.append(mk(coefmap, 0, Sense.LE, f"EF_PACKING({j})"))

    tset = [i for i in range(1, m + 1) if gamma[i - 1] <= u[i - 1] - 1]
    h_pairs: list[tuple[int, int]] = []
    for j in range(1, m + 1):
        if gamma[j - 1] < 1:
            continue
        tail = [i for i in tset if j < i < m]
        hj = gamma[j - 1] + sum(
            ge_packing_coefficient(gamma, u, j, i) * gamma[i - 1] for i in tail
        )
        assert hj == ge_packing_coefficient(gamma, u, j, m), (
            "folded >=-side constant must telescope to the coefficient at the top"
        )
        h_pairs.append((j, hj))
        coefmap = {yv(j): tn, xv(m): hj}
        coefmap[yv(m)] = coefmap.get(yv(m), 0) - hj
        for i in tail:
            coefmap[yv(i)] = tn * ge_packing_coefficient(gamma, u, j, i)
        rows.append(mk(coefmap, tn * hj, Sense.GE, f"EF_GE_PACKING({j})"))

    return ExtendedFormulation(
        m,
        ts.n,
        ts.fixed_suffix,
        tuple(ts.theta[i - 1] for i in ts.fixed_suffix),
        tuple(rows),
        tuple(g_pairs),
        tuple(h_pairs),
    )


def lift_point(ts: TwoSidedInstance, x: Sequence) -> tuple[Fraction, ...]:
    """The explicit witness y for a fractional x in the combined hull.

    Requires the gap-one case and x_m = theta_m - eps with eps strictly
    between 0 and 1 (integral tops belong to a pure branch and need no
    lift).  The returned y is checked against the full extended system; a
    failure there is a genuine bug and raises LiftCheckFailed.
    """
    if case_classify(ts) is not IntersectionCase.GAP_ONE:
        raise WrongCase("lift_point applies to the gap-one case")
    assert ts.free_le is not None and ts.free_gp is not None
    m = ts.m
    xs = [Fraction(v) for v in x]
    if len(xs) == ts.n:
        xf = list(ts.free_part(xs))
    elif len(xs) == m:
        xf = xs
    else:
        raise LengthMismatch(f"point must have length {ts.n} or {m}, got {len(xs)}")

    full = xf + [Fraction(v) for v in ts.theta[m:]]
    hull = intersection_hull(ts)
    if not hull.satisfies(full):
        bad = [row.tag for row in hull.ineqs if not row.satisfied(full)]
        raise NotInHull(f"x violates {', '.join(bad)}")

    u = ts.free_le.inst.u
    theta = ts.free_gp.theta
    support = ts.free_gp.support
    tn = theta[m - 1]
    eps = tn - xf[m - 1]
    if not 0 < eps < 1:
        raise ValueError(f"x_m must leave theta_m by a fractional eps in (0,1), got eps={eps}")
    i_r = support[-2] if len(support) >= 2 else 0

    y = []
    for i in range(1, m):
        if i <= i_r:
            y.append(min(eps * u[i - 1], xf[i - 1]))
        else:
            y.append(xf[i - 1])
    y.append(eps * (tn - 1))

    ef = extended_formulation(ts)
    if not ef.satisfies(xf, y):
        raise LiftCheckFailed(
            f"lift violates {', '.join(ef.violated(xf, y))} — this is a bug"
        )
    return tuple(y)


# ---------------------------------------------------------------------------
# Zero-coefficient regime: the flagged relaxation.


def relaxed_intersection(
    le_inst: KnapsackInstance,
    ge_inst: KnapsackInstance,
    *,
    ge_rows: Sequence[LinearInequality] | None = None,
) -> HPolytope:
    """Intersection of the two one-sided hulls, explicitly marked relaxation.

    Each side's hull is built on its positive-weight coordinates and embedded
    (zero-weight coordinates are genuinely free for that side).  The result
    is valid for the two-sided set but in general NOT its hull — fractional
    vertices can and do appear.  When the positive part of the >=-side is not
    superincreasing its hull has no formula here; pass its facet rows
    explicitly via ``ge_rows``.
    """
    if le_inst.sense is not Sense.LE or ge_inst.sense is not Sense.GE:
        raise ValueError("expected a (<=, >=) pair")
    if le_inst.u != ge_inst.u:
        raise DifferentBoxes(f"boxes differ: le u={le_inst.u}, ge u={ge_inst.u}")
    n = le_inst.n
    u = le_inst.u
    upper = list(u)
    lower = [0] * n
    rows: list[LinearInequality] = []

    pos_a = [i for i in range(n) if le_inst.a[i] > 0]
    sub = KnapsackInstance(
        tuple(le_inst.a[i] for i in pos_a),
        tuple(u[i] for i in pos_a),
        le_inst.b,
    )
    vk = validate(sub)
    gp = greedy_solution(vk)
    for row in hull_le(vk, gp).ineqs:
        if not row.tag.startswith("PACKING"):
            continue
        coeffs = [0] * n
        for k, i in enumerate(pos_a):
            coeffs[i] = row.coeffs[k]
        j_global = pos_a[int(row.tag[8:-1]) - 1] + 1
        rows.append(LinearInequality(tuple(coeffs), row.rhs, Sense.LE, f"PACKING({j_global})"))
    for k, i in enumerate(pos_a):
        upper[i] = vk.inst.u[k]

    if ge_rows is not None:
        for row in ge_rows:
            if len(row.coeffs) != n:
                raise LengthMismatch(f"ge row {row.tag} has dim {len(row.coeffs)}, expected {n}")
            rows.append(row)
    else:
        pos_w = [i for i in range(n) if ge_inst.a[i] > 0]
        ge_poly = hull_ge(
            tuple(ge_inst.a[i] for i in pos_w),
            tuple(u[i] for i in pos_w),
            ge_inst.b,
        )
        for row in ge_poly.ineqs:
            nz = [(k, c) for k, c in enumerate(row.coeffs) if c]
            if len(nz) == 1 and nz[0][1] == 1 and row.sense is Sense.GE:
                i = pos_w[nz[0][0]]
                lower[i] = max(lower[i], row.rhs)
            elif row.tag.startswith("GE_PACKING"):
                coeffs = [0] * n
                for k, i in enumerate(pos_w):
                    coeffs[i] = row.coeffs[k]
                j_global = pos_w[int(row.tag[11:-1]) - 1] + 1
                rows.append(
                    LinearInequality(tuple(coeffs), row.rhs, Sense.GE, f"GE_PACKING({j_global})")
                )

    rows += bound_rows(upper, lower)
    return HPolytope(n, tuple(rows), relaxation=True)
