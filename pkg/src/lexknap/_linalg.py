"""Exact integer linear algebra helpers (fraction-free elimination)."""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence


def integer_rank(rows: Sequence[Sequence[int]]) -> int:
    """Rank of an integer matrix via fraction-free Gaussian elimination."""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    row = 0
    for col in range(ncols):
        piv = None
        for r in range(row, len(mat)):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            continue
        mat[row], mat[piv] = mat[piv], mat[row]
        pv = mat[row][col]
        for r in range(row + 1, len(mat)):
            if mat[r][col] != 0:
                f = mat[r][col]
                mat[r] = [mat[r][k] * pv - f * mat[row][k] for k in range(ncols)]
                g = 0
                for v in mat[r]:
                    g = gcd(g, v)
                if g > 1:
                    mat[r] = [v // g for v in mat[r]]
        rank += 1
        row += 1
        if row == len(mat):
            break
    return rank


def affine_rank(points: Sequence[Sequence[int]]) -> int:
    """Dimension of the affine hull of integer points (0 for a single point)."""
    if len(points) <= 1:
        return 0
    base = points[0]
    diffs = [[p[i] - base[i] for i in range(len(base))] for p in points[1:]]
    return integer_rank(diffs)


def solve_square(rows: Sequence[Sequence[int]], rhs: Sequence[int]) -> tuple[Fraction, ...] | None:
    """Solve a square integer system exactly; None when singular."""
    n = len(rows)
    mat = [[Fraction(v) for v in rows[i]] + [Fraction(rhs[i])] for i in range(n)]
    for col in range(n):
        piv = None
        for r in range(col, n):
            if mat[r][col] != 0:
                piv = r
                break
        if piv is None:
            return None
        mat[col], mat[piv] = mat[piv], mat[col]
        pv = mat[col][col]
        for r in range(n):
            if r != col and mat[r][col] != 0:
                f = mat[r][col] / pv
                mat[r] = [mat[r][k] - f * mat[col][k] for k in range(n + 1)]
    return tuple(mat[i][n] / mat[i][i] for i in range(n))


def normalize_direction(vec: Sequence[int]) -> tuple[int, ...]:
    """Divide by the gcd and fix the sign of the leading nonzero entry."""
    g = 0
    for v in vec:
        g = gcd(g, v)
    if g == 0:
        return tuple(vec)
    out = [v // g for v in vec]
    for v in out:
        if v != 0:
            if v < 0:
                out = [-w for w in out]
            break
    return tuple(out)
