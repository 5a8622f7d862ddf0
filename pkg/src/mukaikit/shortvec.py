"""Enumeration of short vectors of positive definite rational forms.

Fincke-Pohst style search driven entirely by exact rational arithmetic:
the form is split as q(x) = sum_i d_i (x_i + sum_{j>i} u_ij x_j)^2 with
d_i > 0, and coordinate intervals are cut with integer square roots plus
an exact final filter, so no floating point enters the search.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import ceil, floor, isqrt
from typing import Sequence

from .errors import ValidationError
from .exactlin import is_symmetric, rat_matrix, shape

Vec = tuple[int, ...]


def ldl_decompose(q: Sequence[Sequence]) -> tuple[list[Fraction], list[list[Fraction]]]:
    """Split a symmetric positive definite matrix as q = U^T D U.

    Returns ``(d, u)`` where ``u[i][j]`` (j > i) are the unit upper
    triangular coefficients, so q(x) = sum d_i (x_i + sum_{j>i} u_ij x_j)^2.
    Raises if the form is not positive definite (exact test).
    """
    mat = rat_matrix(q)
    n, cols = shape(mat)
    if n != cols or not is_symmetric(mat):
        raise ValidationError("ldl decomposition requires a symmetric matrix")
    a = [list(row) for row in mat]
    d: list[Fraction] = []
    u = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        if a[i][i] <= 0:
            raise ValidationError("form is not positive definite")
        d.append(a[i][i])
        for j in range(i + 1, n):
            u[i][j] = a[i][j] / a[i][i]
        for p in range(i + 1, n):
            for r in range(p, n):
                a[p][r] -= d[i] * u[i][p] * u[i][r]
                a[r][p] = a[p][r]
    return d, u


def _sqrt_floor(x: Fraction) -> Fraction:
    """Largest s with s <= sqrt(x), as floor(sqrt(num*den))/den."""
    if x < 0:
        raise ValidationError("square root of a negative rational")
    return Fraction(isqrt(x.numerator * x.denominator), x.denominator)


def _int_range(center: Fraction, radius_sq: Fraction) -> range:
    """Integers n with (n + center)^2 <= radius_sq, by exact filtering."""
    if radius_sq < 0:
        return range(0)
    s = _sqrt_floor(radius_sq)
    lo = floor(-center - s) - 1
    hi = ceil(-center + s) + 1
    while lo <= hi and (lo + center) ** 2 > radius_sq:
        lo += 1
    while hi >= lo and (hi + center) ** 2 > radius_sq:
        hi -= 1
    return range(lo, hi + 1)


def _search(d, u, n, level, x, remaining, out):
    # Coordinates are fixed from the last index downwards; the shift of
    # level i depends only on x_j for j > i.
    t = sum(u[level][j] * x[j] for j in range(level + 1, n))
    for xi in _int_range(t, remaining / d[level]):
        x[level] = xi
        if level == 0:
            if any(x):
                out.append(tuple(x))
        else:
            used = d[level] * (xi + t) ** 2
            _search(d, u, n, level - 1, x, remaining - used, out)
    x[level] = 0


def short_vectors(q: Sequence[Sequence], bound, *, workers: int = 1) -> list[Vec]:
    """All nonzero integer vectors x with x^T q x <= bound.

    ``q`` must be symmetric positive definite; both x and -x are returned.
    The result is sorted, and therefore independent of ``workers``.
    """
    bound = Fraction(bound)
    n, _ = shape(rat_matrix(q))
    if n == 0 or bound < 0:
        return []
    d, u = ldl_decompose(q)
    top = n - 1
    top_range = list(_int_range(Fraction(0), bound / d[top]))
    if workers <= 1 or len(top_range) < 2:
        out: list[Vec] = []
        x = [0] * n
        for xt in top_range:
            x[top] = xt
            if n == 1:
                if xt:
                    out.append(tuple(x))
            else:
                _search(d, u, n, top - 1, x, bound - d[top] * Fraction(xt) ** 2, out)
        return sorted(out)

    def branch(xt: int) -> list[Vec]:
        part: list[Vec] = []
        x = [0] * n
        x[top] = xt
        if n == 1:
            if xt:
                part.append(tuple(x))
        else:
            _search(d, u, n, top - 1, x, bound - d[top] * Fraction(xt) ** 2, part)
        return part

    with ThreadPoolExecutor(max_workers=workers) as pool:
        chunks = list(pool.map(branch, top_range))
    merged: list[Vec] = []
    for chunk in chunks:
        merged.extend(chunk)
    return sorted(merged)


def coordinate_radii(q: Sequence[Sequence], bound) -> list[Fraction]:
    """Per-coordinate bounds: |x_i| <= sqrt(bound * (q^-1)_ii) on the ball.

    Used by tests to certify that an enumeration stays inside a given box.
    Returns the exact values bound * (q^-1)_ii (squares of the radii).
    """
    bound = Fraction(bound)
    mat = rat_matrix(q)
    n, _ = shape(mat)
    a = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(mat)]
    for col in range(n):
        pivot_row = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot_row is None:
            raise ValidationError("singular form has no coordinate radii")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        pivot = a[col][col]
        a[col] = [entry / pivot for entry in a[col]]
        for i in range(n):
            if i != col and a[i][col]:
                factor = a[i][col]
                a[i] = [entry - factor * other for entry, other in zip(a[i], a[col])]
    return [bound * a[i][n + i] for i in range(n)]
