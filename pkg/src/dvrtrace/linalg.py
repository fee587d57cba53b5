"""Exact Gaussian elimination over a coefficient field.

Matrices are plain lists of rows of field elements; everything is copied
before elimination, nothing is mutated in place for the caller.
"""

from __future__ import annotations


def identity(field, n: int):
    return [[field.one if i == j else field.zero for j in range(n)] for i in range(n)]


def zero_matrix(field, rows: int, cols: int):
    return [[field.zero] * cols for _ in range(rows)]


def transpose(m):
    return [list(col) for col in zip(*m)]


def mat_vec(m, v, field):
    out = []
    for row in m:
        acc = field.zero
        for a, b in zip(row, v):
            if a and b:
                acc = acc + a * b
        out.append(acc)
    return out


def mat_mul(a, b, field):
    bt = transpose(b)
    return [[_dot(row, col, field) for col in bt] for row in a]


def _dot(xs, ys, field):
    acc = field.zero
    for x, y in zip(xs, ys):
        if x and y:
            acc = acc + x * y
    return acc


def rref(m, field):
    """Reduced row echelon form; returns (rows, pivot column indices)."""
    rows = [list(r) for r in m]
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pivot_row = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = field.one / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(m, field) -> int:
    return len(rref(m, field)[1])


def kernel_basis(m, field):
    """Basis of the right kernel {v : m v = 0}."""
    if not m:
        return []
    ncols = len(m[0])
    rows, pivots = rref(m, field)
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    for f in free:
        v = [field.zero] * ncols
        v[f] = field.one
        for r, c in enumerate(pivots):
            v[c] = -rows[r][f]
        basis.append(v)
    return basis


def solve(m, rhs, field):
    """One solution of m x = rhs, or None if inconsistent."""
    if not m:
        return None
    ncols = len(m[0])
    aug = [list(row) + [b] for row, b in zip(m, rhs)]
    rows, pivots = rref(aug, field)
    for row in rows:
        if row[-1] and not any(row[:-1]):
            return None
    x = [field.zero] * ncols
    for r, c in enumerate(pivots):
        if c == ncols:
            return None
        x[c] = rows[r][-1]
    return x


def solve_unique(m, rhs, field):
    x = solve(m, rhs, field)
    if x is None:
        raise ValueError("inconsistent linear system")
    return x


def row_space_basis(vectors, field):
    """Echelonized basis of the span of the given vectors."""
    rows, pivots = rref(vectors, field)
    return [rows[i] for i in range(len(pivots))]


def in_span(vectors, v, field) -> bool:
    if not vectors:
        return not any(v)
    before = rank(vectors, field)
    return rank(vectors + [v], field) == before


def matrix_trace(m, field):
    acc = field.zero
    for i, row in enumerate(m):
        acc = acc + row[i]
    return acc
