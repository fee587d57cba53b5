"""Finite flat algebras over a DVR backend and their closed fibers.

An algebra is always given on a free basis by a structure-constant table
``c[i][j]`` (the coordinate vector of x_i * x_j), so flatness is by
construction. The basis order is part of the value: Gram matrices are
reported in that basis, while the derived invariants are basis-free and
tested as such.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .errors import InputError
from .polys import Poly


@dataclass(frozen=True)
class MonogenicTag:
    poly: Poly  # the defining monic polynomial (over scalars or residue field)


@dataclass(frozen=True)
class ProductTag:
    factors: tuple


@dataclass(frozen=True)
class TableTag:
    pass


class _StructureAlgebra:
    """Shared multiplication/trace machinery; subclasses fix the scalars."""

    def __init__(self, scalars, rank, table, unit, provenance):
        self.scalars = scalars  # backend ring or residue field
        self.rank = rank
        self.table = tuple(tuple(tuple(vec) for vec in row) for row in table)
        self.unit = tuple(unit)
        self.provenance = provenance
        self._basis_traces = None

    # -- multiplication ------------------------------------------------

    def basis_vector(self, i: int):
        zero = self.scalars.zero
        return tuple(self.scalars.one if j == i else zero for j in range(self.rank))

    def mul_vec(self, a, b):
        zero = self.scalars.zero
        out = [zero] * self.rank
        for i, ai in enumerate(a):
            if not ai:
                continue
            row = self.table[i]
            for j, bj in enumerate(b):
                if not bj:
                    continue
                coeff = ai * bj
                for k, c in enumerate(row[j]):
                    if c:
                        out[k] = out[k] + coeff * c
        return tuple(out)

    def scale_vec(self, s, a):
        return tuple(s * x for x in a)

    def add_vec(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def power_vec(self, a, n: int):
        result = self.unit
        for _ in range(n):
            result = self.mul_vec(result, a)
        return result

    def mult_operator(self, a):
        """Matrix of multiplication-by-a; column j is a * x_j."""
        if len(a) != self.rank:
            raise InputError(f"coordinate vector has length {len(a)}, rank is {self.rank}")
        cols = [self.mul_vec(a, self.basis_vector(j)) for j in range(self.rank)]
        return [[cols[j][i] for j in range(self.rank)] for i in range(self.rank)]

    # -- trace form ----------------------------------------------------

    def basis_traces(self):
        if self._basis_traces is None:
            traces = []
            for k in range(self.rank):
                acc = self.scalars.zero
                for i in range(self.rank):
                    acc = acc + self.table[k][i][i]
                traces.append(acc)
            self._basis_traces = tuple(traces)
        return self._basis_traces

    def trace(self, a):
        if len(a) != self.rank:
            raise InputError(f"coordinate vector has length {len(a)}, rank is {self.rank}")
        traces = self.basis_traces()
        acc = self.scalars.zero
        for ak, tk in zip(a, traces):
            if ak and tk:
                acc = acc + ak * tk
        return acc

    def trace_gram(self):
        """Symmetric matrix (trace(x_i x_j))_{i,j}."""
        traces = self.basis_traces()
        gram = []
        for i in range(self.rank):
            row = []
            for j in range(self.rank):
                acc = self.scalars.zero
                for k, c in enumerate(self.table[i][j]):
                    if c and traces[k]:
                        acc = acc + c * traces[k]
                row.append(acc)
            gram.append(row)
        return gram

    # -- axioms ----------------------------------------------------------

    def validate(self) -> list[str]:
        """Exhaustive check of commutativity, associativity and the unit law.

        Returns the violated identities (empty list = valid algebra).
        """
        violations = []
        n = self.rank
        for i in range(n):
            for j in range(i + 1, n):
                if self.table[i][j] != self.table[j][i]:
                    violations.append(f"commutativity at ({i},{j})")
        for i in range(n):
            if self.mul_vec(self.unit, self.basis_vector(i)) != self.basis_vector(i):
                violations.append(f"unit law at {i}")
        for i in range(n):
            for l in range(i, n):  # (x_i x_j) x_l vs x_i (x_j x_l); i,l symmetric
                for j in range(n):
                    left = self.mul_vec(self.table[i][j], self.basis_vector(l))
                    right = self.mul_vec(self.basis_vector(i), self.table[j][l])
                    if left != right:
                        violations.append(f"associativity at ({i},{j},{l})")
        return violations


class FiniteFlatAlgebra(_StructureAlgebra):
    """Free rank-n algebra over a DVR backend, given by structure constants."""

    def __init__(self, backend, rank, table, unit, provenance=TableTag()):
        super().__init__(backend, rank, table, unit, provenance)
        self.backend = backend

    def base_change_fiber(self) -> "FiberAlgebra":
        """Reduce everything modulo the maximal ideal: A tensor k_R."""
        field = self.backend.residue_field
        table = [[tuple(c.reduce() for c in vec) for vec in row] for row in self.table]
        unit = tuple(c.reduce() for c in self.unit)
        provenance = self.provenance
        if isinstance(provenance, MonogenicTag):
            fbar = Poly(field, [c.reduce() for c in provenance.poly.coeffs])
            provenance = MonogenicTag(fbar)
        elif isinstance(provenance, ProductTag):
            provenance = ProductTag(tuple(f.base_change_fiber() for f in provenance.factors))
        return FiberAlgebra(field, self.rank, table, unit, provenance)

    def __repr__(self):
        return f"FiniteFlatAlgebra(rank={self.rank}, backend={self.backend!r})"


class FiberAlgebra(_StructureAlgebra):
    """Finite-dimensional algebra over a residue field (the closed fiber)."""

    def __init__(self, field, rank, table, unit, provenance=TableTag()):
        super().__init__(field, rank, table, unit, provenance)
        self.field = field

    def min_poly(self, b) -> Poly:
        """Monic minimal polynomial of multiplication-by-b."""
        field = self.field
        powers = [list(self.unit)]
        current = tuple(self.unit)
        while True:
            current = self.mul_vec(current, b)
            sol = linalg.solve(linalg.transpose(powers), list(current), field)
            if sol is not None:
                return Poly(field, [-c for c in sol] + [field.one])
            powers.append(list(current))

    def __repr__(self):
        return f"FiberAlgebra(rank={self.rank}, field={self.field!r})"


def from_monogenic(backend, f: Poly) -> FiniteFlatAlgebra:
    """R[X]/(f) on the power basis 1, X, ..., X^(n-1); f monic of degree >= 1."""
    if not f.coeffs or f.leading() != backend.one:
        raise InputError("monogenic constructor needs a monic polynomial")
    n = f.degree
    if n < 1:
        raise InputError("monogenic constructor needs degree >= 1")
    zero = backend.zero
    powers = []  # X^k mod f as coordinate vectors, k = 0 .. 2n-2
    current = Poly.one(backend)
    for _ in range(2 * n - 1):
        powers.append(tuple(current.coeff(i) for i in range(n)))
        current = (current.shift_up(1)) % f
    table = [[powers[i + j] for j in range(n)] for i in range(n)]
    unit = tuple(backend.one if i == 0 else zero for i in range(n))
    return FiniteFlatAlgebra(backend, n, table, unit, MonogenicTag(f))


def product(a: FiniteFlatAlgebra, b: FiniteFlatAlgebra) -> FiniteFlatAlgebra:
    """Direct product with block-diagonal structure constants."""
    if a.backend != b.backend:
        raise InputError("product factors must share a backend")
    n, m = a.rank, b.rank
    zero = a.backend.zero
    total = n + m

    def pad_left(vec):
        return tuple(vec) + (zero,) * m

    def pad_right(vec):
        return (zero,) * n + tuple(vec)

    zero_vec = (zero,) * total
    table = [[zero_vec] * total for _ in range(total)]
    for i in range(n):
        for j in range(n):
            table[i][j] = pad_left(a.table[i][j])
    for i in range(m):
        for j in range(m):
            table[n + i][n + j] = pad_right(b.table[i][j])
    unit = tuple(a.unit) + tuple(b.unit)
    factors = []
    factors.extend(a.provenance.factors if isinstance(a.provenance, ProductTag) else [a])
    factors.extend(b.provenance.factors if isinstance(b.provenance, ProductTag) else [b])
    return FiniteFlatAlgebra(a.backend, total, table, unit, ProductTag(tuple(factors)))


def change_basis(a: FiniteFlatAlgebra, s, s_inv) -> FiniteFlatAlgebra:
    """Rewrite a on the basis whose j-th vector is column j of s.

    ``s_inv`` must be the exact inverse over the backend (s unimodular).
    The result carries a plain table provenance: the monogenic shortcut
    no longer applies on a scrambled basis.
    """
    n = a.rank
    cols = [[s[i][j] for i in range(n)] for j in range(n)]
    table = []
    for i in range(n):
        row = []
        for j in range(n):
            w = a.mul_vec(cols[i], cols[j])
            row.append(tuple(linalg.mat_vec(s_inv, list(w), a.backend)))
        table.append(row)
    unit = tuple(linalg.mat_vec(s_inv, list(a.unit), a.backend))
    return FiniteFlatAlgebra(a.backend, n, table, unit, TableTag())
