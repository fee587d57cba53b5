"""Independent evaluation of the three equivalent regularity conditions.

cond1: the discriminant valuation meets the lower bound rank - points;
cond2: regular, tame, separable residue fields;
cond3: tame, separable residue fields, cokernel killed by the maximal ideal.

The three flags are computed from disjoint machinery (determinant/Smith,
cotangent spaces, fiber decomposition), so their agreement on every
instance is a whole-stack self-test: a disagreement is reported as a
theorem-violation event, never silently accepted.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

from .algebras import FiniteFlatAlgebra
from .dvr import INFINITY
from .errors import CapabilityError
from .fiber import FiberReport, analyze_fiber
from .invariants import CotangentReport, TraceProfile, cotangent_report, trace_profile


@dataclass(frozen=True)
class TheoremVerdict:
    rank: int
    disc_valuation: object  # natural or INFINITY
    geometric_points: int
    slack: object  # disc_valuation - (rank - points), INFINITY allowed
    cond1: bool  # equality holds in the bound
    cond2: bool  # regular and tame with separable residue fields
    cond3: bool  # tame, separable residue fields, cokernel over the residue field
    consistent: bool

    @property
    def slack_nonnegative(self) -> bool:
        return self.slack >= 0

    @property
    def violation(self) -> bool:
        return (not self.consistent) or (not self.slack_nonnegative)


def theorem_verdict(a: FiniteFlatAlgebra,
                    fiber: FiberReport | None = None,
                    trace: TraceProfile | None = None,
                    cotangent: CotangentReport | None = None) -> TheoremVerdict:
    if fiber is None:
        fiber = analyze_fiber(a.base_change_fiber())
    if trace is None:
        trace = trace_profile(a)
    if cotangent is None:
        cotangent = cotangent_report(a, fiber)
    rank = a.rank
    points = fiber.geometric_points
    f = trace.disc_valuation
    slack = f - (rank - points)
    cond1 = f == rank - points
    cond2 = cotangent.regular and fiber.tame and fiber.separable_residue
    cond3 = fiber.tame and fiber.separable_residue and trace.cokernel_over_residue
    consistent = cond1 == cond2 == cond3
    return TheoremVerdict(
        rank=rank,
        disc_valuation=f,
        geometric_points=points,
        slack=slack,
        cond1=cond1,
        cond2=cond2,
        cond3=cond3,
        consistent=consistent,
    )


@dataclass(frozen=True)
class AnalysisReport:
    document: dict
    algebra: FiniteFlatAlgebra
    validation: tuple
    trace: TraceProfile
    fiber: FiberReport | None
    cotangent: CotangentReport | None
    verdict: TheoremVerdict | None
    capability_notes: tuple  # ((stage, message), ...)
    timing: float


def analyze(document: dict) -> AnalysisReport:
    """Full pipeline on an input document; capability limits are annotated
    per stage rather than aborting the whole report."""
    from .documents import parse_document

    start = time.perf_counter()
    algebra = parse_document(document)
    violations = tuple(algebra.validate())
    trace = trace_profile(algebra)
    notes = []
    fiber = None
    cotangent = None
    verdict = None
    if not violations:
        try:
            fiber = analyze_fiber(algebra.base_change_fiber())
        except CapabilityError as exc:
            notes.append(("fiber", str(exc)))
        if fiber is not None:
            try:
                cotangent = cotangent_report(algebra, fiber)
            except CapabilityError as exc:
                notes.append(("cotangent", str(exc)))
        if fiber is not None and cotangent is not None:
            verdict = theorem_verdict(algebra, fiber, trace, cotangent)
    return AnalysisReport(
        document=document,
        algebra=algebra,
        validation=violations,
        trace=trace,
        fiber=fiber,
        cotangent=cotangent,
        verdict=verdict,
        capability_notes=tuple(notes),
        timing=time.perf_counter() - start,
    )
