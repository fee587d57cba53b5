"""Trace-form invariants: discriminant valuation, cokernel structure,
and the regularity test.

The discriminant valuation is computed twice on purpose: as the valuation
of the exact determinant of the trace Gram matrix and as the sum of the
Smith exponents; a mismatch raises instead of returning either answer.
Regularity is read off dim p/p^2 at every maximal ideal over the closed
point, computed globally (p/p^2 is supported at p, so no localization is
needed), with an independent divisibility shortcut on monogenic input.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import linalg
from .algebras import FiniteFlatAlgebra, MonogenicTag
from .dvr import INFINITY
from .errors import InputError, InternalError
from .fiber import FiberReport, LocalFactor, analyze_fiber, fiber_to_residue_matrix
from .polys import Poly
from .smith import SmithProfile, bareiss_det, smith_over_dvr


@dataclass(frozen=True)
class TraceProfile:
    gram: tuple
    disc_valuation: object  # natural number or INFINITY
    determinant: object
    smith: SmithProfile
    generically_etale: bool
    etale: bool
    cokernel_over_residue: bool


def trace_profile(a: FiniteFlatAlgebra) -> TraceProfile:
    """Gram matrix, its determinant valuation, and the cokernel shape."""
    gram = a.trace_gram()
    det = bareiss_det(gram, a.backend)
    f = det.valuation()
    profile = smith_over_dvr(gram, a.backend)
    generically_etale = bool(det)
    if generically_etale != (profile.rank_deficiency == 0):
        raise InternalError("determinant and Smith rank disagree")
    if generically_etale and f != sum(profile.exponents):
        raise InternalError(
            f"det valuation {f} differs from Smith length {sum(profile.exponents)}")
    etale = f == 0
    if etale != (profile.rank_deficiency == 0 and not any(profile.exponents)):
        raise InternalError("etale flags disagree")
    cokernel_over_residue = generically_etale and all(e <= 1 for e in profile.exponents)
    return TraceProfile(
        gram=tuple(tuple(row) for row in gram),
        disc_valuation=f,
        determinant=det,
        smith=profile,
        generically_etale=generically_etale,
        etale=etale,
        cokernel_over_residue=cokernel_over_residue,
    )


def f_invariant(a: FiniteFlatAlgebra):
    """The discriminant valuation (infinite iff the Gram determinant is 0)."""
    return trace_profile(a).disc_valuation


def is_generically_etale(a: FiniteFlatAlgebra) -> bool:
    return trace_profile(a).generically_etale


def cokernel_defined_over_residue(a: FiniteFlatAlgebra) -> bool:
    """Whether the trace cokernel is killed by the maximal ideal.

    False when the algebra is not generically etale: the cokernel then has
    a free summand and cannot be a residue-field vector space.
    """
    return trace_profile(a).cokernel_over_residue


# ---------------------------------------------------------------------------
# maximal ideals and the cotangent test
# ---------------------------------------------------------------------------

def maximal_ideal_module(a: FiniteFlatAlgebra, factor: LocalFactor,
                         report: FiberReport) -> list:
    """R-module generators of the kernel of A -> k(p) for the given factor.

    Lifts of a kernel basis of the residue map, saturated with the
    uniformizer times the basis of A.
    """
    backend = a.backend
    field = backend.residue_field
    residue_matrix = fiber_to_residue_matrix(report.fiber, factor)
    kernel = linalg.kernel_basis(residue_matrix, field)
    generators = []
    for vec in kernel:
        generators.append(tuple(backend.lift(c) for c in vec))
    pi = backend.uniformizer
    for i in range(a.rank):
        generators.append(tuple(pi if j == i else backend.zero for j in range(a.rank)))
    return generators


def cotangent_dimension(a: FiniteFlatAlgebra, factor: LocalFactor,
                        report: FiberReport) -> int:
    """dim over k(p) of p/p^2 at the maximal ideal of the given factor."""
    backend = a.backend
    generators = maximal_ideal_module(a, factor, report)
    gen_matrix = [[g[i] for g in generators] for i in range(a.rank)]
    ideal = smith_over_dvr(gen_matrix, backend)
    if ideal.rank_deficiency:
        raise InternalError("maximal ideal does not have full rank")
    # free basis of p: columns of U^-1 D
    basis_cols = []
    for i, e in enumerate(ideal.exponents):
        scale = backend.uniformizer ** e
        basis_cols.append([ideal.u_inv[r][i] * scale for r in range(a.rank)])
    # p^2 generators: pairwise products, expressed in that basis
    products = []
    for i, g in enumerate(generators):
        for h in generators[i:]:
            products.append(a.mul_vec(g, h))
    columns = []
    for w in products:
        uw = linalg.mat_vec(ideal.u, list(w), backend)
        try:
            columns.append([uw[i].unit_shift(e) for i, e in enumerate(ideal.exponents)])
        except InputError as exc:
            raise InternalError(f"p^2 does not lie in p: {exc}") from exc
    square_matrix = [[col[i] for col in columns] for i in range(a.rank)]
    quotient = smith_over_dvr(square_matrix, backend)
    if quotient.rank_deficiency:
        raise InternalError("p/p^2 has a free summand")
    if any(e > 1 for e in quotient.exponents):
        raise InternalError("p/p^2 is not killed by the maximal ideal")
    dim_over_base = sum(quotient.exponents)
    if dim_over_base % factor.residue_degree:
        raise InternalError("cotangent dimension is not a k(p)-dimension")
    return dim_over_base // factor.residue_degree


@dataclass(frozen=True)
class CotangentEntry:
    factor_index: int
    generators: tuple
    dimension: int
    regular: bool


@dataclass(frozen=True)
class CotangentReport:
    entries: tuple
    regular: bool


def cotangent_report(a: FiniteFlatAlgebra, report: FiberReport) -> CotangentReport:
    entries = []
    for idx, factor in enumerate(report.factors):
        gens = maximal_ideal_module(a, factor, report)
        dim = cotangent_dimension(a, factor, report)
        if dim < 1:
            raise InternalError("cotangent space of a maximal ideal is zero")
        entries.append(CotangentEntry(idx, tuple(gens), dim, dim == 1))
    regular = all(e.regular for e in entries)
    if isinstance(a.provenance, MonogenicTag):
        shortcut = _monogenic_regular(a)
        if shortcut != regular:
            raise InternalError(
                f"monogenic regularity shortcut ({shortcut}) disagrees with "
                f"the cotangent criterion ({regular})")
    return CotangentReport(tuple(entries), regular)


def is_regular(a: FiniteFlatAlgebra, report: FiberReport | None = None) -> bool:
    """Regularity of every localization at a maximal ideal over m_R."""
    if report is None:
        report = analyze_fiber(a.base_change_fiber())
    return cotangent_report(a, report).regular


def _monogenic_regular(a: FiniteFlatAlgebra) -> bool:
    """Divisibility shortcut: A regular iff f avoids (pi, g)^2 at each factor.

    Dividing f by g^2 (g a monic lift of an irreducible factor of the
    reduction) and expanding the remainder in g-adic digits r = r1 g + r0,
    membership in (pi, g)^2 is exactly v(r1) >= 1 and v(r0) >= 2 on all
    coefficients.
    """
    from .factorize import factor as factor_poly

    f = a.provenance.poly
    backend = a.backend
    fbar = Poly(backend.residue_field, [c.reduce() for c in f.coeffs])
    for gbar, _ in factor_poly(fbar).factors:
        g = Poly(backend, [backend.lift(c) for c in gbar.coeffs])
        remainder = f % (g * g)
        r1, r0 = remainder.divmod(g)
        in_square = all(c.valuation() >= 1 for c in r1.coeffs) and \
            all(c.valuation() >= 2 for c in r0.coeffs)
        if in_square:
            return False
    return True
