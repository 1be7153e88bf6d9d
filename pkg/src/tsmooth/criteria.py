"""Smoothness criterion evaluation and its arithmetic consistency checks.

The sufficient condition compared here is

    sum over singularities of gamma_alpha  <  rate * (D - K)^2

with rate = alpha on the rank-one family and rate = gamma (at most 1/4) on
products of curves and ruled surfaces, which use the alpha = 0 invariants.
A passing comparison certifies "T-smooth or empty" for the family of
irreducible curves; a failing one decides nothing, so the verdict is never
stronger than INCONCLUSIVE in that direction.

Two refinements allow "<=" instead of "<": kappa > 0 on the rank-one family,
and, on the plane, the presence of a singularity whose exact invariants
satisfy gamma_1 > 4*tau_ci.  Both are recorded with their reason.

Verdicts computed from search lower bounds (explicit germs) are downgraded:
a lower bound on the left side cannot certify the true inequality, so only
closed-form or catalog-matched exact gamma values yield TSMOOTH_OR_EMPTY.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .invariants import (
    DEFAULT_BUDGET,
    GAMMA_CLOSED_FORM,
    GermSpec,
    InvariantRecord,
    SearchBudget,
    invariants_of,
)
from .surfaces import (
    RANK_ONE_MODELS,
    CriterionConstants,
    DivisorClass,
    HypothesisCheck,
    SurfaceModel,
    criterion_constants,
    d_minus_k_squared,
    gram_value,
    intersect,
)

VERDICT_TSMOOTH = "TSMOOTH_OR_EMPTY"  # printed as "T-smooth or empty"
VERDICT_INCONCLUSIVE = "INCONCLUSIVE"
VERDICT_HYPOTHESES_FAIL = "HYPOTHESES_FAIL"

STRICT = "strict"
NON_STRICT = "non_strict"

FORCE_STRICT = "force_strict"


@dataclass(frozen=True)
class SingularityLine:
    germ: GermSpec
    count: int
    gamma: Fraction | None
    provenance: str
    exact: bool


@dataclass(frozen=True)
class CriterionReport:
    model: SurfaceModel
    divisor: DivisorClass
    lhs: Fraction | None
    rhs: Fraction | None
    margin: Fraction | None
    alpha_used: Fraction
    rate: Fraction | None
    strictness: str
    strictness_reason: str
    hypotheses: tuple[HypothesisCheck, ...]
    verdict: str
    verdict_note: str
    per_singularity: tuple[SingularityLine, ...]

    @property
    def passed(self) -> bool:
        return self.verdict == VERDICT_TSMOOTH


def normalize_singularities(
    sings: Iterable,
) -> tuple[tuple[GermSpec, int], ...]:
    """Accept GermSpec items or (GermSpec, count) pairs; merge duplicates."""
    merged: dict[GermSpec, int] = {}
    order: list[GermSpec] = []
    for item in sings:
        if isinstance(item, GermSpec):
            spec, count = item, 1
        else:
            spec, count = item
            count = int(count)
        if count < 1:
            raise ValueError("singularity multiplicities must be >= 1")
        if spec not in merged:
            order.append(spec)
            merged[spec] = 0
        merged[spec] += count
    return tuple((spec, merged[spec]) for spec in order)


def _strictness_from_records(
    model: SurfaceModel, records: Sequence[InvariantRecord]
) -> tuple[str, str]:
    if isinstance(model, RANK_ONE_MODELS):
        if model.kappa > 0:
            return NON_STRICT, f"kappa = {model.kappa} > 0"
        if model.is_plane_like:
            for record in records:
                if not record.tau_ci_exact or record.tau_ci in (None, 0):
                    continue
                gv = record.gamma.get(Fraction(1))
                if gv is None or gv.value is None or not gv.exact:
                    continue
                if gv.value > 4 * record.tau_ci:
                    return (
                        NON_STRICT,
                        f"{record.germ.label()} has gamma_1 = {gv.value} > "
                        f"4*tau_ci = {4 * record.tau_ci}",
                    )
    return STRICT, ""


def strictness_mode(
    model: SurfaceModel,
    sings: Iterable,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> str:
    """strict or non_strict for the model and singularity list.

    Undecidable triggers (search-only invariants) fall back to strict, the
    conservative side.
    """
    pairs = normalize_singularities(sings)
    records = [invariants_of(spec, [Fraction(1)], budget) for spec, _ in pairs]
    return _strictness_from_records(model, records)[0]


def evaluate(
    model: SurfaceModel,
    D: DivisorClass,
    sings: Iterable,
    budget: SearchBudget = DEFAULT_BUDGET,
    strictness_override: str | None = None,
) -> CriterionReport:
    """Evaluate the criterion for the given surface, divisor class and germs."""
    pairs = normalize_singularities(sings)
    if not pairs:
        raise ValueError("the singularity list must not be empty")
    constants = criterion_constants(model, D)
    alpha_used = constants.alpha if constants.alpha is not None else Fraction(0)

    needed = {alpha_used}
    plane_like = isinstance(model, RANK_ONE_MODELS) and model.is_plane_like
    if plane_like:
        needed.add(Fraction(1))
    records = [
        invariants_of(spec, sorted(needed), budget) for spec, _ in pairs
    ]

    if strictness_override == FORCE_STRICT:
        strictness, strictness_reason = STRICT, "forced by options"
    elif strictness_override in (None, "none"):
        strictness, strictness_reason = _strictness_from_records(model, records)
    else:
        raise ValueError(f"unknown strictness override {strictness_override!r}")

    per: list[SingularityLine] = []
    hypotheses = list(constants.hypotheses)
    lhs: Fraction | None = Fraction(0)
    certifiable = True
    for (spec, count), record in zip(pairs, records):
        gv = record.gamma_at(alpha_used)
        per.append(SingularityLine(spec, count, gv.value, gv.provenance, gv.exact))
        if gv.value is None:
            reason = "; ".join(record.notes) or "gamma value unavailable"
            hypotheses.append(
                HypothesisCheck(
                    f"gamma available for {spec.label()}", False, reason
                )
            )
            lhs = None
        elif lhs is not None:
            lhs += count * gv.value
            certifiable = certifiable and (
                gv.provenance == GAMMA_CLOSED_FORM or gv.exact
            )

    rate = constants.rate
    rhs = rate * constants.dk_squared if rate is not None else None
    margin = rhs - lhs if (lhs is not None and rhs is not None) else None

    verdict_note = ""
    if any(not h.ok for h in hypotheses) or lhs is None or rhs is None:
        verdict = VERDICT_HYPOTHESES_FAIL
    else:
        passes = lhs < rhs or (strictness == NON_STRICT and lhs == rhs)
        if not passes:
            verdict = VERDICT_INCONCLUSIVE
            verdict_note = (
                "the sufficient condition does not hold; "
                "nothing follows about the family"
            )
        elif certifiable:
            verdict = VERDICT_TSMOOTH
        else:
            verdict = VERDICT_INCONCLUSIVE
            verdict_note = (
                "comparison passed, but some gamma values are search lower "
                "bounds; the true left side may be larger"
            )

    return CriterionReport(
        model=model,
        divisor=D,
        lhs=lhs,
        rhs=rhs,
        margin=margin,
        alpha_used=alpha_used,
        rate=rate,
        strictness=strictness,
        strictness_reason=strictness_reason,
        hypotheses=tuple(hypotheses),
        verdict=verdict,
        verdict_note=verdict_note,
        per_singularity=tuple(per),
    )


# -- arithmetic consequences of the instability construction -----------------

@dataclass(frozen=True)
class InstabilityInstance:
    """Lattice data for one run of the divisor-and-degree bound checks.

    ``eps`` and ``local_degs`` describe the local scheme: positive integers
    with ``deg_x0 = sum(local_degs)``.  ``canonical`` defaults to the model's
    canonical class but may be overridden, the checks being pure lattice
    arithmetic.
    """

    model: SurfaceModel
    divisor: DivisorClass
    delta: DivisorClass
    deg_x0: int
    eps: tuple[int, ...]
    local_degs: tuple[int, ...]
    canonical: DivisorClass | None = None

    def __post_init__(self):
        if len(self.eps) != len(self.local_degs):
            raise ValueError("eps and local_degs must have equal length")
        if any(e < 1 for e in self.eps):
            raise ValueError("every eps entry must be >= 1")
        if any(d < 1 for d in self.local_degs):
            raise ValueError("every local degree must be >= 1")
        if self.deg_x0 != sum(self.local_degs):
            raise ValueError("deg_x0 must equal the sum of local degrees")

    def canonical_class(self) -> DivisorClass:
        if self.canonical is not None:
            return self.canonical
        return self.model.canonical_class()


def check_instability_arithmetic(
    inst: InstabilityInstance,
) -> list[tuple[str, bool]]:
    """Evaluate the bound conditions exactly and return the truth vector.

    ``a``: D.Delta >= deg + sum(eps);  ``b``: deg >= (D-K-Delta).Delta;
    ``c``: (D-K-2*Delta)^2 > 0;  ``a1_lower``/``a1_upper``: the two halves of
    0 <= (D-K)^2/4 - deg <= ((D-K)/2 - Delta)^2.  The upper half is computed
    on half-integer coordinates, independently of ``b``, so the algebraic
    equivalence of the two can be asserted by tests.
    """
    model, D, delta = inst.model, inst.divisor, inst.delta
    K = inst.canonical_class()
    dk = D - K
    total_eps = sum(inst.eps)

    cond_a = intersect(model, D, delta) >= inst.deg_x0 + total_eps
    cond_b = inst.deg_x0 >= intersect(model, dk - delta, delta)
    dk2d = dk - delta.scale(2)
    cond_c = intersect(model, dk2d, dk2d) > 0

    dk_sq = Fraction(intersect(model, dk, dk))
    half_shift = [
        Fraction(c, 2) - d for c, d in zip(dk.coords, delta.coords)
    ]
    lower = Fraction(0) <= dk_sq / 4 - inst.deg_x0
    upper = dk_sq / 4 - inst.deg_x0 <= gram_value(model, half_shift)

    return [
        ("a", cond_a),
        ("b", cond_b),
        ("c", cond_c),
        ("a1_lower", lower),
        ("a1_upper", upper),
    ]


# -- corollary cross-checks ---------------------------------------------------

@dataclass(frozen=True)
class CorollaryCheck:
    name: str
    points: int
    mismatches: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def _boundary_window(numerator: int, denominator: int, width: int = 2) -> range:
    """Integer candidates around numerator/denominator, floored, never < 1."""
    centre = numerator // denominator
    return range(max(1, centre - width), centre + width + 1)


def _node(equivalence: str = "topological") -> GermSpec:
    return GermSpec.catalog("A", 1, equivalence)


def _cusp() -> GermSpec:
    return GermSpec.catalog("A", 2)


def cross_check_corollaries(
    *,
    plane_degrees: Sequence[int] = range(3, 13),
    p3_degrees: Sequence[int] = range(2, 21),
    k3_degrees: Sequence[int] = range(1, 21),
    product_range: Sequence[int] = range(3, 31),
    ruled_range: Sequence[int] = range(3, 31),
) -> list[CorollaryCheck]:
    """Verify that evaluate() reproduces the specialised closed-form bounds.

    Each check walks a parameter grid, compares the verdict with the quoted
    inequality on a window of counts straddling the boundary, and records any
    mismatch; the left sides are integer multiples of a fixed gamma, so
    window agreement pins down the whole pass set.
    """
    from .surfaces import (
        K3Surface,
        P3Hypersurface,
        ProductOfCurves,
        ProjectivePlane,
        RuledSurface,
        divisor,
    )

    checks: list[CorollaryCheck] = []

    # plane, nodes only: strict 4r < (d+3)^2
    plane = ProjectivePlane()
    mismatches = []
    points = 0
    for d in plane_degrees:
        D = divisor(plane, [d])
        bound = (d + 3) ** 2
        for r in _boundary_window(bound, 4):
            points += 1
            got = evaluate(plane, D, [(_node(), r)]).passed
            want = 4 * r < bound
            if got != want:
                mismatches.append(f"plane nodes d={d} r={r}: {got} vs {want}")
    checks.append(CorollaryCheck("plane_nodes_strict", points, tuple(mismatches)))

    # plane, nodes + cusps + ordinary points: 4k + 9m + sum 2*mi^2 <= (d+3)^2
    mismatches = []
    points = 0
    mixes = [
        (1, 1, ()),
        (5, 5, (4,)),
        (0, 1, (3, 4)),
        (3, 0, (5,)),
        (0, 2, ()),
    ]
    for d in plane_degrees:
        D = divisor(plane, [d])
        bound = (d + 3) ** 2
        for k, m, ms in mixes:
            lhs = 4 * k + 9 * m + sum(2 * mi * mi for mi in ms)
            sings = []
            if k:
                sings.append((_node(), k))
            if m:
                sings.append((_cusp(), m))
            sings.extend((GermSpec.catalog("M", mi), 1) for mi in ms)
            points += 1
            got = evaluate(plane, D, sings).passed
            want = lhs <= bound
            if got != want:
                mismatches.append(f"plane mix d={d} {k},{m},{ms}: {got} vs {want}")
    checks.append(CorollaryCheck("plane_mixed_nonstrict", points, tuple(mismatches)))

    # hypersurfaces in P^3, nodes: r*(1+a)^2 <= a*(d-kappa)^2*n, a = 1/(n-3)
    mismatches = []
    points = 0
    for n in (5, 6, 7):
        surface = P3Hypersurface(n)
        a = Fraction(1, n - 3)
        for d in p3_degrees:
            if d < n - 3:
                continue
            D = divisor(surface, [d])
            rhs = a * (d - (n - 4)) ** 2 * n
            gamma1 = (1 + a) ** 2
            boundary = int(rhs / gamma1)
            for r in _boundary_window(boundary, 1):
                points += 1
                got = evaluate(surface, D, [(_node(), r)]).passed
                want = r * gamma1 <= rhs
                if got != want:
                    mismatches.append(f"p3 n={n} d={d} r={r}: {got} vs {want}")
                if n == 5:
                    quintic = r <= Fraction(10, 9) * (d - 1) ** 2
                    if got != quintic:
                        mismatches.append(
                            f"p3 quintic d={d} r={r}: {got} vs {quintic}"
                        )
    checks.append(CorollaryCheck("p3_nodes_nonstrict", points, tuple(mismatches)))

    # K3, nodes: strict 4r < d^2 n, and the right side is exactly d^2 n
    mismatches = []
    points = 0
    for n in (2, 4, 6):
        surface = K3Surface(n)
        for d in k3_degrees:
            D = divisor(surface, [d])
            bound = d * d * n
            report = evaluate(surface, D, [(_node(), 1)])
            if report.rhs != bound:
                mismatches.append(f"k3 n={n} d={d}: rhs {report.rhs} != {bound}")
            for r in _boundary_window(bound, 4):
                points += 1
                got = evaluate(surface, D, [(_node(), r)]).passed
                want = 4 * r < bound
                if got != want:
                    mismatches.append(f"k3 n={n} d={d} r={r}: {got} vs {want}")
    checks.append(CorollaryCheck("k3_nodes_strict", points, tuple(mismatches)))

    # product of non-isogenous elliptic curves, nodes: r < ab/2
    elliptic = ProductOfCurves(1, 1)
    mismatches = []
    points = 0
    for a_coord in product_range:
        for b_coord in product_range:
            D = divisor(elliptic, [a_coord, b_coord])
            bound = a_coord * b_coord
            for r in _boundary_window(bound, 2):
                points += 1
                got = evaluate(elliptic, D, [(_node(), r)]).passed
                want = 2 * r < bound
                if got != want:
                    mismatches.append(
                        f"product nodes a={a_coord} b={b_coord} r={r}: "
                        f"{got} vs {want}"
                    )
    checks.append(CorollaryCheck("product_nodes_strict", points, tuple(mismatches)))

    # elliptic product, ordinary points: sum 4*(mi-1)^2 < ab
    mismatches = []
    points = 0
    multisets = [(3,), (3, 3), (4,), (3, 4), (5, 5, 3), (6,)]
    for a_coord in product_range:
        for b_coord in product_range:
            D = divisor(elliptic, [a_coord, b_coord])
            for ms in multisets:
                lhs = sum(4 * (mi - 1) ** 2 for mi in ms)
                points += 1
                sings = [(GermSpec.catalog("M", mi), 1) for mi in ms]
                got = evaluate(elliptic, D, sings).passed
                want = lhs < a_coord * b_coord
                if got != want:
                    mismatches.append(
                        f"product points a={a_coord} b={b_coord} {ms}: "
                        f"{got} vs {want}"
                    )
    checks.append(CorollaryCheck("product_points_strict", points, tuple(mismatches)))

    # P1 x P1 with b = 3a, cusps: 8r < 3a^2 + 8a + 4
    quadric = RuledSurface(0, 0)
    mismatches = []
    points = 0
    for a_coord in ruled_range:
        D = divisor(quadric, [a_coord, 3 * a_coord])
        bound = 3 * a_coord * a_coord + 8 * a_coord + 4
        for r in _boundary_window(bound, 8):
            points += 1
            got = evaluate(quadric, D, [(_cusp(), r)]).passed
            want = 8 * r < bound
            if got != want:
                mismatches.append(f"quadric a={a_coord} r={r}: {got} vs {want}")
    checks.append(CorollaryCheck("quadric_cusps_strict", points, tuple(mismatches)))

    return checks
