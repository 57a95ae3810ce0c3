"""Ground truth at desk scale.

Everything here is deliberately independent of the structural theory: lattice
points come from guarded odometer enumeration, optima from scanning all
points, vertices from exhaustive basis enumeration over exact rationals, and
hull claims are certified by the sandwich

    cloud subset-of P   and   ext(P) subset-of cloud (all integral)
    =>  P = conv(cloud),

plus a per-facet affine-rank check on tight cloud points.  No epsilons
anywhere; every comparison is exact integer or Fraction arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Callable, Iterator, Sequence

from ._linalg import affine_rank
from .core import KnapsackInstance, Sense, ValidatedKnapsack
from .errors import (
    CertificateFailed,
    DimensionTooLarge,
    EmptyCloud,
    TooLarge,
    UnboundedDetected,
)
from .facets import HPolytope, LinearInequality

DEFAULT_GUARD = 10**7


@dataclass(frozen=True)
class PointCloud:
    dim: int
    points: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    def __contains__(self, p: Sequence[int]) -> bool:
        return tuple(p) in set(self.points)


@dataclass(frozen=True)
class VertexSet:
    """Vertices (exact rationals, canonically sorted) with their tight rows."""

    vertices: tuple[tuple[Fraction, ...], ...]
    tight: tuple[tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.vertices)

    def integral(self) -> bool:
        return all(v.denominator == 1 for vert in self.vertices for v in vert)


def _box_size(u: Sequence[int]) -> int:
    size = 1
    for ui in u:
        size *= ui + 1
    return size


def _guarded(u: Sequence[int], guard: int) -> None:
    size = _box_size(u)
    if size > guard:
        raise TooLarge(f"box has {size} points > guard {guard}")


def _iter_constrained(
    u: Sequence[int],
    le: tuple[Sequence[int], int] | None,
    ge: tuple[Sequence[int], int] | None,
) -> Iterator[tuple[int, ...]]:
    """Odometer over the box, pruning by partial sums from the top coordinate."""
    n = len(u)
    a, b = le if le else (None, 0)
    w, d = ge if ge else (None, 0)
    ge_suffix = [0] * (n + 1)  # max remaining >=-weight on coordinates < i
    if w is not None:
        for i in range(n):
            ge_suffix[i + 1] = ge_suffix[i] + w[i] * u[i]
    x = [0] * n

    def rec(i: int, le_used: int, ge_used: int) -> Iterator[tuple[int, ...]]:
        if i < 0:
            yield tuple(x)
            return
        for v in range(u[i] + 1):
            x[i] = v
            lu = le_used + (a[i] * v if a is not None else 0)
            gu = ge_used + (w[i] * v if w is not None else 0)
            if a is not None and lu > b:
                break  # weights are nonnegative; larger v only worsens
            if w is not None and gu + ge_suffix[i] < d:
                continue
            yield from rec(i - 1, lu, gu)
        x[i] = 0

    yield from rec(n - 1, 0, 0)


def enumerate_box(
    u: Sequence[int],
    predicate: Callable[[tuple[int, ...]], bool] | None = None,
    *,
    guard: int = DEFAULT_GUARD,
) -> PointCloud:
    _guarded(u, guard)
    pts = _iter_constrained(u, None, None)
    if predicate is not None:
        pts = (p for p in pts if predicate(p))
    return PointCloud(len(u), tuple(pts))


def enumerate_lattice(
    source: KnapsackInstance | ValidatedKnapsack | tuple,
    *,
    guard: int = DEFAULT_GUARD,
) -> PointCloud:
    """All integer points of an instance, or of a (le, ge) pair on one box."""
    if isinstance(source, ValidatedKnapsack):
        source = source.inst
    if isinstance(source, KnapsackInstance):
        _guarded(source.u, guard)
        if source.sense is Sense.LE:
            it = _iter_constrained(source.u, (source.a, source.b), None)
        else:
            it = _iter_constrained(source.u, None, (source.a, source.b))
        return PointCloud(source.n, tuple(it))
    le, ge = source
    if isinstance(le, ValidatedKnapsack):
        le = le.inst
    if isinstance(ge, ValidatedKnapsack):
        ge = ge.inst
    if le.u != ge.u:
        raise ValueError("pair must share one box")
    _guarded(le.u, guard)
    it = _iter_constrained(le.u, (le.a, le.b), (ge.a, ge.b))
    return PointCloud(le.n, tuple(it))


def brute_max(cloud: PointCloud, c: Sequence) -> tuple[Fraction, tuple[tuple[int, ...], ...]]:
    """Exact maximum of c^T x over the cloud and ALL maximizers."""
    if not cloud.points:
        raise EmptyCloud("cannot optimize over an empty point set")
    fracs = [Fraction(v) for v in c]
    den = lcm(*[f.denominator for f in fracs])
    ic = [int(f * den) for f in fracs]
    best: int | None = None
    arg: list[tuple[int, ...]] = []
    for p in cloud.points:
        val = sum(cv * pv for cv, pv in zip(ic, p))
        if best is None or val > best:
            best, arg = val, [p]
        elif val == best:
            arg.append(p)
    assert best is not None
    return Fraction(best, den), tuple(arg)


def lex_max_point(cloud: PointCloud) -> tuple[int, ...]:
    """Greatest point under highest-index-first comparison."""
    return max(cloud.points, key=lambda p: p[::-1])


def lex_min_point(cloud: PointCloud) -> tuple[int, ...]:
    return min(cloud.points, key=lambda p: p[::-1])


# ---------------------------------------------------------------------------
# Exact vertex enumeration by basis search.


def _normalized_rows(poly: HPolytope) -> list[tuple[tuple[int, ...], int]]:
    """All rows as c^T x <= r."""
    out = []
    for row in poly.ineqs:
        if row.sense is Sense.LE:
            out.append((row.coeffs, row.rhs))
        else:
            out.append((tuple(-c for c in row.coeffs), -row.rhs))
    return out


def _syntactic_bounded(rows: Sequence[tuple[tuple[int, ...], int]], dim: int) -> bool:
    upper = [False] * dim
    lower = [False] * dim
    for coeffs, _ in rows:
        nz = [(i, c) for i, c in enumerate(coeffs) if c != 0]
        if len(nz) != 1:
            continue
        i, c = nz[0]
        if c > 0:
            upper[i] = True
        else:
            lower[i] = True
    return all(upper) and all(lower)


def _cone_bounded(rows: Sequence[tuple[tuple[int, ...], int]], dim: int) -> bool:
    """Recession-cone check by exact LP: max/min d_i over {Ad <= 0, |d| <= 1}."""
    from .ratlp import Status, lp_solve

    cone = [(coeffs, 0, Sense.LE) for coeffs, _ in rows]
    for i in range(dim):
        box = [( _unit_vec(dim, i), 1, Sense.LE), (_unit_vec(dim, i), -1, Sense.GE)]
        for sign in (1, -1):
            obj = [0] * dim
            obj[i] = sign
            st, val, _ = lp_solve(cone + box, dim, obj)
            if st is not Status.OPTIMAL or val != 0:
                return False
    return True


def _unit_vec(dim: int, i: int) -> tuple[int, ...]:
    v = [0] * dim
    v[i] = 1
    return tuple(v)


def _reduce(vec: list[int], pivots: list[tuple[int, list[int]]]) -> list[int]:
    for col, pv in pivots:
        f = vec[col]
        if f:
            lead = pv[col]
            vec = [lead * vi - f * pi for vi, pi in zip(vec, pv)]
            g = 0
            for v in vec:
                g = gcd(g, v)
            if g > 1:
                vec = [v // g for v in vec]
    return vec


def vertices(poly: HPolytope, *, row_cap: int = 40) -> VertexSet:
    """All vertices, by exhaustive search over row bases.

    Every dim-subset of rows with independent normals is solved exactly; the
    solution is kept when it satisfies the whole system.  Exhaustive and
    auditable, which is the point at these sizes (dim <= 7, <= row_cap rows).
    """
    dim = poly.dim
    if dim > 7:
        raise DimensionTooLarge(f"dim {dim} > 7")
    rows = _normalized_rows(poly)
    if len(rows) > row_cap:
        raise TooLarge(f"{len(rows)} rows > cap {row_cap}")
    if len(rows) < dim:
        raise UnboundedDetected("fewer rows than dimensions")
    if not _syntactic_bounded(rows, dim) and not _cone_bounded(rows, dim):
        raise UnboundedDetected("system has an unbounded direction")

    nrows = len(rows)
    found: dict[tuple[Fraction, ...], None] = {}

    def solve(pivots: list[tuple[int, list[int]]]) -> tuple[Fraction, ...]:
        # Each pivot row is already reduced against the earlier ones, so it can
        # only involve its own column and columns of later pivots.
        x: dict[int, Fraction] = {}
        for col, pv in reversed(pivots):
            acc = Fraction(pv[dim])
            for c2, _ in pivots:
                if c2 != col and c2 in x and pv[c2]:
                    acc -= pv[c2] * x[c2]
            x[col] = acc / pv[col]
        return tuple(x[i] for i in range(dim))

    def feasible(x: tuple[Fraction, ...]) -> bool:
        den = lcm(*[f.denominator for f in x])
        nums = [int(f * den) for f in x]
        for coeffs, rhs in rows:
            if sum(c * v for c, v in zip(coeffs, nums)) > rhs * den:
                return False
        return True

    def dfs(start: int, pivots: list[tuple[int, list[int]]]) -> None:
        need = dim - len(pivots)
        if need == 0:
            x = solve(pivots)
            if x not in found and feasible(x):
                found[x] = None
            return
        for idx in range(start, nrows - need + 1):
            coeffs, rhs = rows[idx]
            vec = _reduce(list(coeffs) + [rhs], pivots)
            col = next((k for k in range(dim) if vec[k]), None)
            if col is None:
                continue  # dependent (or inconsistent) with the chosen rows
            pivots.append((col, vec))
            dfs(idx + 1, pivots)
            pivots.pop()

    dfs(0, [])
    verts = sorted(found.keys())
    tight = []
    for x in verts:
        den = lcm(*[f.denominator for f in x])
        nums = [int(f * den) for f in x]
        tight.append(
            tuple(
                k
                for k, (coeffs, rhs) in enumerate(rows)
                if sum(c * v for c, v in zip(coeffs, nums)) == rhs * den
            )
        )
    return VertexSet(tuple(verts), tuple(tight))


# ---------------------------------------------------------------------------
# Integer-hull certification.


@dataclass(frozen=True)
class HullReport:
    passed: bool
    n_points: int
    n_vertices: int
    point_failures: tuple[tuple[int, ...], ...]
    vertex_failures: tuple[tuple[Fraction, ...], ...]
    facet_failures: tuple[str, ...]

    def summary(self) -> str:
        if self.passed:
            return (
                f"exact hull: {self.n_points} points inside, "
                f"{self.n_vertices} integral vertices, all facets spanned"
            )
        parts = []
        if self.point_failures:
            parts.append(f"{len(self.point_failures)} cloud points violate the system")
        if self.vertex_failures:
            parts.append(f"{len(self.vertex_failures)} vertices fractional or outside the cloud")
        if self.facet_failures:
            parts.append("facet rank fails: " + ", ".join(self.facet_failures))
        return "; ".join(parts)


def assert_integer_hull(
    poly: HPolytope,
    cloud: PointCloud,
    *,
    strict: bool = True,
    row_cap: int = 40,
    require_facets: bool = True,
) -> HullReport:
    """Certify that poly is exactly conv(cloud).

    Checks: (i) every cloud point satisfies every row; (ii) every vertex of
    poly is integral and belongs to the cloud; (iii) every non-bound row is
    tight at cloud points of affine rank dim-1.  (i) + (ii) already force
    poly == conv(cloud); (iii) additionally certifies each emitted row is a
    facet.  The rank test only makes sense for full-dimensional sets, so it
    is skipped when the cloud spans less than dim (pinned coordinates) or
    when require_facets is False (sliced descriptions keep valid rows that
    may have become redundant).  With strict=True a failure raises
    CertificateFailed.
    """
    if poly.dim != cloud.dim:
        raise ValueError("dimension mismatch")
    point_failures = tuple(p for p in cloud.points if not poly.satisfies(p))

    vs = vertices(poly, row_cap=row_cap)
    cloud_set = set(cloud.points)
    vertex_failures = tuple(
        v
        for v in vs.vertices
        if any(f.denominator != 1 for f in v)
        or tuple(int(f) for f in v) not in cloud_set
    )

    facet_failures: list[str] = []
    if require_facets and cloud.points and affine_rank(cloud.points) == poly.dim:
        for row in poly.ineqs:
            if row.tag.startswith("BOUND_"):
                continue
            tight_pts = [p for p in cloud.points if row.is_tight(p)]
            if not tight_pts or affine_rank(tight_pts) != poly.dim - 1:
                facet_failures.append(row.tag)

    report = HullReport(
        not point_failures and not vertex_failures and not facet_failures,
        len(cloud.points),
        len(vs.vertices),
        point_failures,
        vertex_failures,
        tuple(facet_failures),
    )
    if strict and not report.passed:
        raise CertificateFailed(report.summary())
    return report
