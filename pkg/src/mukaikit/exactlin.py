"""Exact integer and rational linear algebra.

Matrices are immutable tuples of row tuples. Integer matrices hold Python
ints (arbitrary precision); rational matrices hold ``fractions.Fraction``
entries, which are always stored in lowest terms with positive
denominator. No floating point is used anywhere: wall membership and
signature verdicts downstream are exact predicates, so every primitive
here must be exact too.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import ValidationError

IntMatrix = tuple[tuple[int, ...], ...]
RatMatrix = tuple[tuple[Fraction, ...], ...]


def int_matrix(rows: Iterable[Iterable[int]]) -> IntMatrix:
    """Freeze ``rows`` into an integer matrix, validating rectangularity."""
    out = tuple(tuple(entry for entry in row) for row in rows)
    widths = {len(row) for row in out}
    if len(widths) > 1:
        raise ValidationError("matrix rows have inconsistent lengths")
    for row in out:
        for entry in row:
            if not isinstance(entry, int):
                raise ValidationError(f"integer matrix entry {entry!r} is not an int")
    return out


def rat_matrix(rows: Iterable[Iterable]) -> RatMatrix:
    """Freeze ``rows`` into a rational matrix (entries coerced to Fraction)."""
    out = tuple(tuple(Fraction(entry) for entry in row) for row in rows)
    widths = {len(row) for row in out}
    if len(widths) > 1:
        raise ValidationError("matrix rows have inconsistent lengths")
    return out


def identity(n: int) -> IntMatrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def shape(m: Sequence[Sequence]) -> tuple[int, int]:
    return (len(m), len(m[0]) if m else 0)


def transpose(m: Sequence[Sequence]) -> tuple[tuple, ...]:
    rows, cols = shape(m)
    return tuple(tuple(m[i][j] for i in range(rows)) for j in range(cols))


def matmul(a: Sequence[Sequence], b: Sequence[Sequence]) -> tuple[tuple, ...]:
    ra, ca = shape(a)
    rb, cb = shape(b)
    if ca != rb:
        raise ValidationError(f"cannot multiply {ra}x{ca} by {rb}x{cb}")
    bt = transpose(b)
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_vec(m: Sequence[Sequence], v: Sequence) -> tuple:
    rows, cols = shape(m)
    if cols != len(v):
        raise ValidationError(f"cannot apply {rows}x{cols} matrix to length-{len(v)} vector")
    return tuple(sum(x * y for x, y in zip(row, v)) for row in m)


def vec_mat(v: Sequence, m: Sequence[Sequence]) -> tuple:
    rows, cols = shape(m)
    if rows != len(v):
        raise ValidationError(f"cannot apply length-{len(v)} row vector to {rows}x{cols} matrix")
    return tuple(sum(v[i] * m[i][j] for i in range(rows)) for j in range(cols))


def is_symmetric(m: Sequence[Sequence]) -> bool:
    rows, cols = shape(m)
    if rows != cols:
        return False
    return all(m[i][j] == m[j][i] for i in range(rows) for j in range(i + 1, cols))


def determinant(m: Sequence[Sequence]) -> Fraction:
    """Exact determinant by fraction-free style elimination over Q."""
    rows, cols = shape(m)
    if rows != cols:
        raise ValidationError("determinant of a non-square matrix")
    a = [[Fraction(x) for x in row] for row in m]
    det = Fraction(1)
    for col in range(rows):
        pivot_row = next((i for i in range(col, rows) if a[i][col] != 0), None)
        if pivot_row is None:
            return Fraction(0)
        if pivot_row != col:
            a[col], a[pivot_row] = a[pivot_row], a[col]
            det = -det
        pivot = a[col][col]
        det *= pivot
        inv = 1 / pivot
        for i in range(col + 1, rows):
            factor = a[i][col] * inv
            if factor:
                for j in range(col, rows):
                    a[i][j] -= factor * a[col][j]
    return det


def invert_unimodular(m: IntMatrix) -> IntMatrix:
    """Invert an integer matrix with determinant +-1; result is integral."""
    rows, cols = shape(m)
    if rows != cols:
        raise ValidationError("cannot invert a non-square matrix")
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(rows)]
         for i, row in enumerate(m)]
    for col in range(rows):
        pivot_row = next((i for i in range(col, rows) if a[i][col] != 0), None)
        if pivot_row is None:
            raise ValidationError("matrix is singular, not unimodular")
        a[col], a[pivot_row] = a[pivot_row], a[col]
        pivot = a[col][col]
        a[col] = [x / pivot for x in a[col]]
        for i in range(rows):
            if i != col and a[i][col]:
                factor = a[i][col]
                a[i] = [x - factor * y for x, y in zip(a[i], a[col])]
    inv = [row[rows:] for row in a]
    for row in inv:
        for x in row:
            if x.denominator != 1:
                raise ValidationError("matrix inverse is not integral; input not unimodular")
    return tuple(tuple(int(x) for x in row) for row in inv)


# -- Smith normal form -------------------------------------------------------


def _swap_rows(a, t, i, j):
    a[i], a[j] = a[j], a[i]
    t[i], t[j] = t[j], t[i]


def _swap_cols(a, t, i, j):
    for row in a:
        row[i], row[j] = row[j], row[i]
    for row in t:
        row[i], row[j] = row[j], row[i]


def _add_row(a, t, dst, src, q):
    # row_dst += q * row_src
    a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
    t[dst] = [x + q * y for x, y in zip(t[dst], t[src])]


def _add_col(a, t, dst, src, q):
    for row in a:
        row[dst] += q * row[src]
    for row in t:
        row[dst] += q * row[src]


def _xgcd_rows(a, t, i, j, c):
    """One unimodular 2-row operation making a[j][c] = 0, pivot at a[i][c]."""
    p, q = a[i][c], a[j][c]
    g, x, y = _xgcd(p, q)
    pg, qg = p // g, q // g
    a[i], a[j] = (
        [x * u + y * v for u, v in zip(a[i], a[j])],
        [-qg * u + pg * v for u, v in zip(a[i], a[j])],
    )
    t[i], t[j] = (
        [x * u + y * v for u, v in zip(t[i], t[j])],
        [-qg * u + pg * v for u, v in zip(t[i], t[j])],
    )


def _row_hermite_inplace(a, left, rows, cols) -> None:
    """Row Hermite reduction with transform; entries above pivots reduced.

    Keeping everything reduced modulo the pivots is what bounds entry
    growth (Kannan-Bachem style), unlike naive diagonal chasing.
    """
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            _swap_rows(a, left, r, pivot)
        for i in range(r + 1, rows):
            if a[i][c] != 0:
                _xgcd_rows(a, left, r, i, c)
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
            left[r] = [-x for x in left[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                _add_row(a, left, i, r, -q)
        r += 1
        if r == rows:
            break


def _is_diagonal(a, rows, cols) -> bool:
    return all(a[i][j] == 0 for i in range(rows) for j in range(cols) if i != j)


def smith_normal_form(m: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], IntMatrix, IntMatrix]:
    """Return ``(diag, left, right)`` with ``left @ m @ right`` diagonal.

    The diagonal entries are nonnegative and satisfy d1 | d2 | ... ;
    ``left`` and ``right`` are unimodular. The diagonal has length
    ``min(rows, cols)`` including trailing zeros for rank deficiency.
    Alternating row and column Hermite passes diagonalize the matrix,
    then a pairwise gcd/lcm sweep enforces the divisibility chain.
    """
    mat = int_matrix(m)
    rows, cols = shape(mat)
    a = [list(row) for row in mat]
    left = [list(row) for row in identity(rows)]
    right_t = [list(row) for row in identity(cols)]  # transpose of the right transform

    for _ in range(200):
        if _is_diagonal(a, rows, cols):
            break
        _row_hermite_inplace(a, left, rows, cols)
        if _is_diagonal(a, rows, cols):
            break
        at = [list(col) for col in zip(*a)] if a and a[0] else [[] for _ in range(cols)]
        _row_hermite_inplace(at, right_t, cols, rows)
        a = [list(col) for col in zip(*at)] if at and at[0] else [[] for _ in range(rows)]
    else:
        raise ValidationError("Smith reduction did not converge")

    n = min(rows, cols)

    def pair_fix(i: int, j: int) -> None:
        # Turn diag(d_i, d_j) into diag(gcd, lcm) by unimodular operations.
        _add_col_t(a, right_t, i, j, 1)      # col_i += col_j, so a[j][i] = d_j
        _xgcd_rows(a, left, i, j, i)
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            left[i] = [-x for x in left[i]]
        q = a[i][j] // a[i][i]
        if q:
            _add_col_t(a, right_t, j, i, -q)
        if a[j][j] < 0:
            a[j] = [-x for x in a[j]]
            left[j] = [-x for x in left[j]]

    changed = True
    while changed:
        changed = False
        for i in range(n):
            for j in range(i + 1, n):
                di, dj = a[i][i], a[j][j]
                if (di == 0 and dj != 0) or (di != 0 and dj % di != 0):
                    pair_fix(i, j)
                    changed = True
    for i in range(n):
        if a[i][i] < 0:
            a[i] = [-x for x in a[i]]
            left[i] = [-x for x in left[i]]

    diag = tuple(a[i][i] for i in range(n))
    right = tuple(tuple(row) for row in zip(*right_t))
    return diag, tuple(tuple(r) for r in left), right


def _add_col_t(a, right_t, dst, src, q):
    # Column operation col_dst += q * col_src, with the right transform
    # tracked in transposed form (rows of right_t are columns of right).
    for row in a:
        row[dst] += q * row[src]
    right_t[dst] = [x + q * y for x, y in zip(right_t[dst], right_t[src])]


# -- Hermite normal form and kernels ----------------------------------------


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    return old_r, old_s, old_t


def hermite_normal_form(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Row-style Hermite normal form with positive pivots.

    Zero rows are dropped; entries above each pivot are reduced into
    ``[0, pivot)``. Unimodular row operations only, so the row span in Z^n
    is preserved. The result is the canonical basis used for kernels and
    orthogonal complements.
    """
    mat = int_matrix(m)
    rows, cols = shape(mat)
    a = [list(row) for row in mat]
    r = 0
    for c in range(cols):
        pivot_row = next((i for i in range(r, rows) if a[i][c] != 0), None)
        if pivot_row is None:
            continue
        a[r], a[pivot_row] = a[pivot_row], a[r]
        for i in range(r + 1, rows):
            while a[i][c] != 0:
                g, x, y = _xgcd(a[r][c], a[i][c])
                p, q = a[r][c] // g, a[i][c] // g
                a[r], a[i] = (
                    [x * u + y * v for u, v in zip(a[r], a[i])],
                    [-q * u + p * v for u, v in zip(a[r], a[i])],
                )
        if a[r][c] < 0:
            a[r] = [-x for x in a[r]]
        for i in range(r):
            q = a[i][c] // a[r][c]
            if q:
                a[i] = [u - q * v for u, v in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return tuple(tuple(row) for row in a[:r] if any(row))


def integer_kernel_saturated(m: Sequence[Sequence[int]]) -> IntMatrix:
    """Basis of the saturated kernel ``{x in Z^n : m @ x^T = 0}``.

    The rows span a primitive sublattice (equal to its saturation) and are
    returned in Hermite normal form, so the output is deterministic.
    """
    mat = int_matrix(m)
    rows, cols = shape(mat)
    if cols == 0:
        return ()
    if rows == 0:
        return identity(cols)
    diag, _left, right = smith_normal_form(mat)
    rank = sum(1 for d in diag if d != 0)
    # Columns of `right` beyond the rank span the kernel; they are part of a
    # unimodular matrix, hence the sublattice they span is saturated.
    kernel_cols = range(rank, cols)
    basis = tuple(tuple(right[i][j] for i in range(cols)) for j in kernel_cols)
    if not basis:
        return ()
    return hermite_normal_form(basis)


def solve_left(basis: Sequence[Sequence[int]], target: Sequence[int]) -> tuple[int, ...] | None:
    """Solve ``x @ basis == target`` for an integer row vector, or None.

    Used to express a lattice vector in a sublattice basis.
    """
    mat = int_matrix(basis)
    rows, cols = shape(mat)
    if len(target) != cols:
        raise ValidationError("target length does not match basis width")
    diag, left, right = smith_normal_form(mat)
    # x @ m = v  <=>  (x @ left^-1) @ (left m right) = v @ right
    v = vec_mat(tuple(target), right)
    y = []
    for i in range(rows):
        d = diag[i] if i < len(diag) else 0
        if d == 0:
            y.append(0)
        else:
            if v[i] % d != 0:
                return None
            y.append(v[i] // d)
    for j in range(rows, cols):
        if v[j] != 0:
            return None
    x = vec_mat(tuple(y), left)
    return tuple(int(c) for c in x)


# -- Signatures --------------------------------------------------------------


def rational_signature(g: Sequence[Sequence]) -> tuple[int, int, int]:
    """Inertia ``(n_plus, n_zero, n_minus)`` of a symmetric rational matrix.

    Exact symmetric congruence reduction: diagonal pivots are consumed
    directly; when the remaining block has an all-zero diagonal, a nonzero
    off-diagonal entry is turned into a diagonal one by a congruence
    (valid in characteristic 0). Rejects non-symmetric input.
    """
    mat = rat_matrix(g)
    n, cols = shape(mat)
    if n != cols or not is_symmetric(mat):
        raise ValidationError("signature requires a symmetric matrix")
    a = [list(row) for row in mat]
    live = list(range(n))
    n_plus = n_minus = n_zero = 0
    while live:
        pivot = next((i for i in live if a[i][i] != 0), None)
        if pivot is None:
            pair = None
            for i in live:
                for j in live:
                    if i != j and a[i][j] != 0:
                        pair = (i, j)
                        break
                if pair:
                    break
            if pair is None:
                n_zero += len(live)
                break
            i, j = pair
            # Congruence x_i -> x_i + x_j makes the (i,i) entry 2*a[i][j] != 0.
            for k in range(n):
                a[i][k] += a[j][k]
            for k in range(n):
                a[k][i] += a[k][j]
            pivot = i
        p = a[pivot][pivot]
        if p > 0:
            n_plus += 1
        else:
            n_minus += 1
        live.remove(pivot)
        for i in live:
            factor = a[i][pivot] / p
            if factor:
                for k in range(n):
                    a[i][k] -= factor * a[pivot][k]
                for k in range(n):
                    a[k][i] -= factor * a[k][pivot]
    return (n_plus, n_zero, n_minus)


def content_of(coords: Sequence[int]) -> int:
    """gcd of the entries; 0 for the zero vector."""
    g = 0
    for c in coords:
        g = gcd(g, abs(c))
    return g
