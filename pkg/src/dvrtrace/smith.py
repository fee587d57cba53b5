"""Smith normal form and exact determinants over a DVR.

Elimination pivots on the entry of minimal valuation (ties broken by
smallest row, then column), so every quotient stays in the ring and the
diagonal comes out as uniformizer powers with nondecreasing exponents.
The transformation witnesses are accumulated together with their inverses
and verified exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .dvr import INFINITY
from .errors import InputError, InternalError


def _copy(m):
    return [list(row) for row in m]


def _identity(backend, n):
    return [[backend.one if i == j else backend.zero for j in range(n)] for i in range(n)]


def _mat_mul(a, b, backend):
    out = []
    for row in a:
        new_row = []
        for j in range(len(b[0])):
            acc = backend.zero
            for k, x in enumerate(row):
                if x and b[k][j]:
                    acc = acc + x * b[k][j]
            new_row.append(acc)
        out.append(new_row)
    return out


@dataclass
class SmithProfile:
    """Diagonalization U M V = diag(pi^e_1, ..., pi^e_r, 0, ...)."""

    backend: object
    shape: tuple[int, int]
    exponents: tuple[int, ...]
    rank_deficiency: int
    u: list
    v: list
    u_inv: list
    v_inv: list

    def diagonal_matrix(self):
        rows, cols = self.shape
        d = [[self.backend.zero] * cols for _ in range(rows)]
        for i, e in enumerate(self.exponents):
            d[i][i] = self.backend.uniformizer ** e
        return d

    def verify(self, m) -> bool:
        """Exact check: U m V equals the diagonal and U, V are unimodular."""
        backend = self.backend
        rows, cols = self.shape
        product = _mat_mul(_mat_mul(self.u, _copy(m), backend), self.v, backend)
        if product != self.diagonal_matrix():
            return False
        if _mat_mul(self.u, self.u_inv, backend) != _identity(backend, rows):
            return False
        if _mat_mul(self.v, self.v_inv, backend) != _identity(backend, cols):
            return False
        return True


def smith_over_dvr(m, backend) -> SmithProfile:
    """Smith normal form of a matrix of backend scalars (any shape)."""
    rows = len(m)
    cols = len(m[0]) if rows else 0
    work = _copy(m)
    u, u_inv = _identity(backend, rows), _identity(backend, rows)
    v, v_inv = _identity(backend, cols), _identity(backend, cols)
    exponents = []
    for k in range(min(rows, cols)):
        pivot_pos, pivot_val = None, None
        for i in range(k, rows):
            for j in range(k, cols):
                val = work[i][j].valuation()
                if val is INFINITY:
                    continue
                if pivot_val is None or val < pivot_val:
                    pivot_pos, pivot_val = (i, j), val
        if pivot_pos is None:
            break
        pi, pj = pivot_pos
        if pi != k:
            work[pi], work[k] = work[k], work[pi]
            u[pi], u[k] = u[k], u[pi]
            for row in u_inv:
                row[pi], row[k] = row[k], row[pi]
        if pj != k:
            for row in work:
                row[pj], row[k] = row[k], row[pj]
            for row in v:
                row[pj], row[k] = row[k], row[pj]
            v_inv[pj], v_inv[k] = v_inv[k], v_inv[pj]
        # normalize the pivot to an exact uniformizer power
        unit = work[k][k].unit_shift(pivot_val)
        unit_inv = backend.one / unit
        work[k] = [unit_inv * x for x in work[k]]
        u[k] = [unit_inv * x for x in u[k]]
        for row in u_inv:
            row[k] = row[k] * unit
        pivot = work[k][k]
        for i in range(rows):
            if i == k or not work[i][k]:
                continue
            q = work[i][k] / pivot  # exact: pivot has minimal valuation
            work[i] = [a - q * b for a, b in zip(work[i], work[k])]
            u[i] = [a - q * b for a, b in zip(u[i], u[k])]
            for row in u_inv:
                row[k] = row[k] + q * row[i]
        for j in range(cols):
            if j == k or not work[k][j]:
                continue
            q = work[k][j] / pivot
            for row in work:
                row[j] = row[j] - q * row[k]
            for row in v:
                row[j] = row[j] - q * row[k]
            v_inv[k] = [a + q * b for a, b in zip(v_inv[k], v_inv[j])]
        exponents.append(pivot_val)
    if any(a > b for a, b in zip(exponents, exponents[1:])):
        raise InternalError("Smith exponents are not nondecreasing")
    profile = SmithProfile(
        backend=backend,
        shape=(rows, cols),
        exponents=tuple(exponents),
        rank_deficiency=min(rows, cols) - len(exponents),
        u=u, v=v, u_inv=u_inv, v_inv=v_inv,
    )
    if not profile.verify(m):
        raise InternalError("Smith witnesses failed exact verification")
    return profile


def bareiss_det(m, backend):
    """Fraction-free exact determinant of a square scalar matrix."""
    n = len(m)
    if n == 0:
        return backend.one
    work = _copy(m)
    negate = False
    prev = backend.one
    for k in range(n - 1):
        if not work[k][k]:
            swap = next((i for i in range(k + 1, n) if work[i][k]), None)
            if swap is None:
                return backend.zero
            work[k], work[swap] = work[swap], work[k]
            negate = not negate
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = work[i][j] * work[k][k] - work[i][k] * work[k][j]
                work[i][j] = num / prev  # Bareiss division is exact
            work[i][k] = backend.zero
        prev = work[k][k]
    det = work[n - 1][n - 1]
    return -det if negate else det


def unimodular_inverse(s, backend):
    """Inverse of a matrix invertible over the ring (all exponents zero)."""
    profile = smith_over_dvr(s, backend)
    if profile.rank_deficiency or any(profile.exponents):
        raise InputError("matrix is not unimodular over the backend")
    return _mat_mul(profile.v, profile.u, backend)
