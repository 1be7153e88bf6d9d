"""Singularity invariants: tau, tau_ci, lambda_alpha and gamma_alpha.

Catalog germs (A_k, D_k, E_k and ordinary m-fold points M_m) are served from
closed forms.  Explicit germs go through the exact kernel: tau is the
colength of the Tjurina ideal, tau_ci and gamma_alpha are certified lower
bounds obtained by searching complete-intersection ideals that provably
contain the Tjurina ideal.  Search results are tagged with their provenance
and are only marked exact when they match a recognised catalog value, so a
criterion verdict downstream can tell a certificate from a bound.

The gamma invariant of a germ f relative to an m-primary ideal I of colength
d is the maximum of (1+a)^2*d and of lambda_a(d, i) over the intersection
multiplicities i in (d, 2d] realised by members of I, where

    lambda_a(d, i) = (a*i + (1-a)*d)^2 / (i - d).

For fixed a in [0,1], lambda_a is nonincreasing in i on that range, so the
supremum (d+a)^2 is attained exactly when i = d+1 is realised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .jets import Jet
from .local_algebra import (
    DEFAULT_TRUNCATION_CAP,
    LocalIdealRep,
    NotFiniteColengthError,
    SpanEchelon,
    _jet_row,
    bounded_colength,
    colength,
    mono_index,
    monomials_in_span,
    span_at,
    standard_generators,
    tjurina_ideal,
)

TOPOLOGICAL = "topological"
ANALYTIC = "analytic"

GAMMA_CLOSED_FORM = "closed_form"
GAMMA_SEARCH = "search_lower_bound"
GAMMA_UNAVAILABLE = "unavailable"


class GermInputError(ValueError):
    """Invalid germ description (catalog constraints, equivalence kind...)."""


class NonReducedGermError(ArithmeticError):
    """The germ has a repeated factor: its Tjurina ideal is not m-primary."""


class IntersectionBoundViolation(ArithmeticError):
    """An ideal member had intersection multiplicity <= the ideal colength.

    For an ideal containing the Tjurina ideal of a reduced germ this cannot
    happen; hitting it signals an illegitimate (germ, ideal, member) triple.
    """


class ChainViolationError(AssertionError):
    """An invariant record failed the (1+a)^2*tau_ci <= gamma <= ... chain."""


def validate_alpha(value) -> Fraction:
    a = Fraction(value)
    if not 0 <= a <= 1:
        raise GermInputError(f"alpha must lie in [0, 1], got {a}")
    return a


def parse_alpha(text: str) -> Fraction:
    try:
        a = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise GermInputError(f"cannot parse alpha {text!r}: {exc}") from None
    return validate_alpha(a)


# -- germ specifications -----------------------------------------------------

_CATALOG_FAMILIES = ("A", "D", "E", "M")


@dataclass(frozen=True)
class GermSpec:
    """A singularity: either a catalog type or an explicit germ."""

    equivalence: str
    family: str | None = None
    index: int | None = None
    poly: Jet | None = None

    def __post_init__(self):
        if self.equivalence not in (TOPOLOGICAL, ANALYTIC):
            raise GermInputError(f"unknown equivalence {self.equivalence!r}")
        catalog = self.family is not None or self.index is not None
        if catalog == (self.poly is not None):
            raise GermInputError("give either a catalog type or a polynomial")
        if catalog:
            if self.family not in _CATALOG_FAMILIES or self.index is None:
                raise GermInputError(f"unknown catalog family {self.family!r}")
            k = self.index
            ok = (
                (self.family == "A" and k >= 1)
                or (self.family == "D" and k >= 4)
                or (self.family == "E" and k in (6, 7, 8))
                or (self.family == "M" and k >= 2)
            )
            if not ok:
                raise GermInputError(f"index {k} out of range for {self.family}")
        else:
            if self.poly.is_zero():
                raise GermInputError("the zero polynomial is not a germ")
            if self.poly.constant_term() != 0:
                raise GermInputError("germ must vanish at the origin")

    @classmethod
    def catalog(cls, family: str, index: int, equivalence: str = TOPOLOGICAL):
        return cls(equivalence=equivalence, family=family, index=index)

    @classmethod
    def explicit(cls, poly: Jet, equivalence: str = ANALYTIC):
        return cls(equivalence=equivalence, poly=poly)

    @property
    def is_catalog(self) -> bool:
        return self.family is not None

    def label(self) -> str:
        if self.is_catalog:
            return f"{self.family}_{self.index}"
        return f"germ({self.poly})"


@dataclass(frozen=True)
class GammaValue:
    value: Fraction | None
    provenance: str
    exact: bool


@dataclass(frozen=True)
class InvariantRecord:
    germ: GermSpec
    tau: int | None
    tau_ci: int | None
    tau_ci_exact: bool
    gamma: dict[Fraction, GammaValue]
    notes: tuple[str, ...] = ()

    def gamma_at(self, alpha) -> GammaValue:
        return self.gamma[Fraction(alpha)]


@dataclass(frozen=True)
class SearchBudget:
    """Caps for the certified searches; results degrade gracefully."""

    max_candidates: int = 400
    combo_coefficients: tuple = (
        Fraction(1),
        Fraction(-1),
        Fraction(2),
        Fraction(-2),
        Fraction(1, 2),
        Fraction(-1, 2),
    )
    truncation_cap: int = DEFAULT_TRUNCATION_CAP


DEFAULT_BUDGET = SearchBudget()


# -- closed forms ------------------------------------------------------------

def dk_first_branch(k: int, alpha: Fraction) -> bool:
    """Branch selector for the D_k closed form, decided exactly.

    The boundary k = 4 + sqrt(2)*(2+alpha) is irrational for rational alpha,
    but the tie (which cannot occur for valid inputs) goes to the first
    branch.  For k < 4 the bound trivially holds.
    """
    if k <= 4:
        return True
    return Fraction((k - 4) ** 2) <= 2 * (2 + Fraction(alpha)) ** 2


def catalog_tau(family: str, k: int) -> int:
    if family in ("A", "D", "E"):
        return k
    if family == "M":
        if k == 2:
            return 1
        # m(m+1)/2 point conditions for an m-fold point, minus 2 translations
        return k * (k + 1) // 2 - 2
    raise GermInputError(f"unknown catalog family {family!r}")


def catalog_tau_ci(family: str, k: int) -> int:
    if family == "A":
        return k
    if family in ("D", "E"):
        # quasihomogeneous normal forms: the Tjurina ideal is generated by
        # the two partials, hence itself a complete intersection of colength k
        return k
    if family == "M":
        if k == 2:
            return 1
        if k % 2 == 1:
            return (k + 1) ** 2 // 4
        return (k * k + 2 * k) // 4
    raise GermInputError(f"unknown catalog family {family!r}")


def catalog_gamma(family: str, k: int, alpha, equivalence: str) -> Fraction | None:
    """Closed-form gamma, or None where no closed form exists.

    ADE values hold for both equivalences.  The M_m value is the topological
    one; analytically an ordinary m-fold point with m >= 3 has no closed form
    here (m >= 4 even carries moduli), so None is returned rather than a
    guess.  M_2 is the node A_1 and inherits its values.
    """
    a = validate_alpha(alpha)
    if family == "A":
        return (k + a) ** 2
    if family == "D":
        if dk_first_branch(k, a):
            return (k + 2 * a) ** 2 / 2
        return (k - 2 + a) ** 2
    if family == "E":
        return (k + 2 * a) ** 2 / 2
    if family == "M":
        if k == 2:
            return (1 + a) ** 2
        if equivalence == ANALYTIC:
            return None
        return 2 * (k - 1 + a) ** 2
    raise GermInputError(f"unknown catalog family {family!r}")


def catalog_invariants(spec: GermSpec, alphas: Sequence) -> InvariantRecord:
    """Fill an invariant record from the closed forms."""
    if not spec.is_catalog:
        raise GermInputError("catalog_invariants needs a catalog germ")
    family, k = spec.family, spec.index
    notes: list[str] = []
    if family == "M" and k == 2:
        notes.append("M_2 is the node A_1; its values are used")
    gamma: dict[Fraction, GammaValue] = {}
    available = True
    for alpha in alphas:
        a = validate_alpha(alpha)
        value = catalog_gamma(family, k, a, spec.equivalence)
        if value is None:
            available = False
            gamma[a] = GammaValue(None, GAMMA_UNAVAILABLE, False)
        else:
            gamma[a] = GammaValue(value, GAMMA_CLOSED_FORM, True)
    if available:
        record = InvariantRecord(
            germ=spec,
            tau=catalog_tau(family, k),
            tau_ci=catalog_tau_ci(family, k),
            tau_ci_exact=True,
            gamma=gamma,
            notes=tuple(notes),
        )
        verify_chain(record)
        return record
    notes.append(
        f"no closed form for the analytic invariants of M_{k} with m >= 3"
    )
    return InvariantRecord(
        germ=spec,
        tau=None,
        tau_ci=None,
        tau_ci_exact=False,
        gamma=gamma,
        notes=tuple(notes),
    )


def verify_chain(record: InvariantRecord) -> None:
    """Assert (1+a)^2*tau_ci <= gamma_a <= (tau_ci+a)^2 <= (tau+a)^2 exactly."""
    if record.tau_ci is None or record.tau is None:
        return
    t_ci, t = Fraction(record.tau_ci), Fraction(record.tau)
    if (t_ci + 1) ** 2 > (t + 1) ** 2:
        raise ChainViolationError(f"tau_ci {t_ci} exceeds tau {t}")
    for a, gv in record.gamma.items():
        if gv.value is None:
            continue
        lo = (1 + a) ** 2 * t_ci
        hi = (t_ci + a) ** 2
        if not (lo <= gv.value <= hi <= (t + a) ** 2):
            raise ChainViolationError(
                f"chain violated at alpha={a} for {record.germ.label()}: "
                f"{lo} <= {gv.value} <= {hi} <= {(t + a) ** 2}"
            )


# -- lambda and the gamma search ----------------------------------------------

def lambda_alpha(d: int, i: int, alpha) -> Fraction:
    """(a*i + (1-a)*d)^2 / (i - d) for an ideal colength d and contact i."""
    a = validate_alpha(alpha)
    if d < 1:
        raise IntersectionBoundViolation(f"ideal colength must be >= 1, got {d}")
    if i <= d:
        raise IntersectionBoundViolation(
            f"intersection multiplicity {i} must exceed the ideal colength {d}"
        )
    return (a * i + (1 - a) * d) ** 2 / (i - d)


def match_ak_normal_form(f: Jet) -> int | None:
    """Exact-match recognition of A_k normal forms.

    Accepts c1*y^2 + c2*x^(k+1), the transposed form, and c*x*y (the node);
    over the complex numbers any such germ is analytically A_k.
    """
    support = sorted(f.coeffs)
    if support == [(1, 1)]:
        return 1
    if len(support) != 2:
        return None
    (e1, e2) = support
    for (sq, other) in ((e1, e2), (e2, e1)):
        if sq in ((0, 2), (2, 0)):
            i, j = other
            if sq == (0, 2) and j == 0 and i >= 2:
                return i - 1
            if sq == (2, 0) and i == 0 and j >= 2:
                return j - 1
    return None


@dataclass(frozen=True)
class GammaProfile:
    """Intersection multiplicities realised by members of one ideal."""

    ideal: LocalIdealRep
    d: int
    achieved: dict[int, Jet]
    warnings: tuple[str, ...] = ()


@dataclass(frozen=True)
class GammaSearchResult:
    value: Fraction
    floor: Fraction
    witnesses: dict[int, Jet] = field(default_factory=dict)
    warnings: tuple[str, ...] = ()


def _combo_candidates(
    gens: Sequence[Jet], coefficients: Sequence[Fraction]
) -> Iterator[Jet]:
    for a in range(len(gens)):
        for b in range(a + 1, len(gens)):
            for c in coefficients:
                yield gens[a] + gens[b].scale(c)


def _axis_contact(f: Jet, variable: str) -> int | None:
    """i(f, x) = order of f(0, y) in y, and symmetrically for y.

    None when the axis divides the germ (the contact is not finite), or when
    the restriction vanishes below the truncation, which for the search is
    just as good: any such contact lies beyond the window anyway.
    """
    if variable == "x":
        degrees = [j for (i, j) in f.coeffs if i == 0]
    else:
        degrees = [i for (i, j) in f.coeffs if j == 0]
    return min(degrees) if degrees else None


def _monomials_in_ideal(
    ech: SpanEchelon, max_degree: int
) -> Iterator[tuple[int, int]]:
    for deg in range(1, max_degree + 1):
        for j in range(deg + 1):
            i = deg - j
            if ech.contains({mono_index(i, j): Fraction(1)}):
                yield (i, j)


def gamma_search_profile(
    f: Jet, ideal: LocalIdealRep, budget: SearchBudget = DEFAULT_BUDGET
) -> GammaProfile:
    """Scan ideal members for realised intersection multiplicities in (d, 2d].

    Candidates are the inter-reduced generators, their pairwise combinations
    g1 + c*g2 over the budget's coefficients, and all monomials of the ideal
    up to total degree 2d+1.  Monomial contacts are split multiplicatively
    over i(f,x) and i(f,y); everything else is certified by a one-shot
    colength at working degree 2d+4, which is always high enough to certify
    any contact <= 2d, so skipped candidates can only have contact beyond the
    search window (or none at all).
    """
    d = colength(ideal, cap=budget.truncation_cap).value
    if d < 1:
        raise IntersectionBoundViolation("gamma search needs an ideal inside m")
    working = 2 * d + 4
    f_w = f.with_truncation(working)
    achieved: dict[int, Jet] = {}
    warnings: list[str] = []
    examined = 0

    def consider(g: Jet) -> bool:
        nonlocal examined
        if g.is_zero():
            return False
        examined += 1
        got = bounded_colength(LocalIdealRep.of(f_w, g.with_truncation(working)), working)
        if not got.stable:
            return False
        return _record(got.value, g)

    def _record(i: int, g: Jet) -> bool:
        if i <= d:
            raise IntersectionBoundViolation(
                f"member {g} has contact {i} <= colength {d}; "
                "the ideal does not contain the Tjurina ideal of a reduced germ"
            )
        if i <= 2 * d and i not in achieved:
            achieved[i] = g
        return i == d + 1

    done = False
    gens = standard_generators(ideal, cap=budget.truncation_cap)
    for g in gens:
        if examined >= budget.max_candidates:
            break
        if consider(g):
            done = True
            break
    if not done:
        for g in _combo_candidates(gens, budget.combo_coefficients):
            if examined >= budget.max_candidates:
                break
            if consider(g):
                done = True
                break
    if not done:
        base = {"x": _axis_contact(f, "x"), "y": _axis_contact(f, "y")}
        ech = span_at(ideal.nonzero_generators(), working)
        for (i_exp, j_exp) in _monomials_in_ideal(ech, 2 * d + 1):
            if examined >= budget.max_candidates:
                break
            examined += 1
            if (i_exp > 0 and base["x"] is None) or (j_exp > 0 and base["y"] is None):
                continue
            contact = i_exp * (base["x"] or 0) + j_exp * (base["y"] or 0)
            if _record(contact, Jet.monomial(i_exp, j_exp, working)):
                break
    if not achieved:
        warnings.append(
            "no ideal member with finite contact at most twice the colength "
            "was found; only the floor value is reported"
        )
    return GammaProfile(ideal, d, achieved, tuple(warnings))


def gamma_from_profile(profile: GammaProfile, alpha) -> GammaSearchResult:
    a = validate_alpha(alpha)
    floor = (1 + a) ** 2 * profile.d
    best = floor
    for i in profile.achieved:
        lam = lambda_alpha(profile.d, i, a)
        if lam > best:
            best = lam
    return GammaSearchResult(best, floor, dict(profile.achieved), profile.warnings)


def gamma_alpha_search(
    f: Jet,
    ideal: LocalIdealRep,
    alpha,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> GammaSearchResult:
    """Certified lower bound for gamma_alpha(f; ideal), with witnesses."""
    return gamma_from_profile(gamma_search_profile(f, ideal, budget), alpha)


# -- tau_ci search -------------------------------------------------------------

@dataclass(frozen=True)
class TauCiResult:
    value: int
    exact: bool
    ideals: tuple[LocalIdealRep, ...]  # verified complete intersections, by colength desc


def _containment_certified(
    pair_ideal: LocalIdealRep,
    tjurina_gens: Sequence[Jet],
    value: int,
    working: int,
) -> bool:
    ech = span_at(pair_ideal.nonzero_generators(), working)
    if value + 1 >= working:
        return False
    if not monomials_in_span(ech, value + 1):
        return False
    for g in tjurina_gens:
        row = _jet_row(g.with_truncation(working), working)
        if row and not ech.contains(row):
            return False
    return True


def tau_ci_search(
    f: Jet,
    equivalence: str = ANALYTIC,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> TauCiResult:
    """Largest certified colength of a 2-generated ideal containing
    the Tjurina ideal.

    Candidate pairs are drawn from the Tjurina generators, the inter-reduced
    generators, and their pairwise combinations; each pair is kept only when
    its ideal is certified m-primary and provably contains the Tjurina ideal.
    The maximal ideal <x, y> always qualifies, so the result is at least 1.
    Exact when some pair reaches tau (the Tjurina ideal is then itself a
    complete intersection) or when the germ matches an A_k normal form.
    """
    if equivalence == TOPOLOGICAL:
        k = match_ak_normal_form(f)
        if k is None:
            raise GermInputError(
                "topological invariants are only available for catalog types"
            )
    elif equivalence != ANALYTIC:
        raise GermInputError(f"unknown equivalence {equivalence!r}")

    tj = tjurina_ideal(f)
    tau_value = colength(tj, cap=budget.truncation_cap).value
    if tau_value == 0:
        return TauCiResult(0, True, ())
    working = max(tau_value + 4, 8)

    pool: list[Jet] = [g for g in tj.generators if not g.is_zero()]
    reduced = standard_generators(tj, cap=budget.truncation_cap)
    pool.extend(reduced)
    pool.extend(_combo_candidates(reduced, budget.combo_coefficients))

    found: dict[int, LocalIdealRep] = {}
    x = Jet.variable("x", working)
    y = Jet.variable("y", working)
    found[1] = LocalIdealRep((x, y))

    tj_gens = tj.nonzero_generators()
    examined = 0
    for a in range(len(pool)):
        if examined >= budget.max_candidates or tau_value in found:
            break
        for b in range(a + 1, len(pool)):
            if examined >= budget.max_candidates:
                break
            examined += 1
            h1 = pool[a].with_truncation(working)
            h2 = pool[b].with_truncation(working)
            if h1.is_zero() or h2.is_zero():
                continue
            pair = LocalIdealRep((h1, h2))
            got = bounded_colength(pair, working)
            if not got.stable or got.value in found:
                continue
            if not _containment_certified(pair, tj_gens, got.value, working):
                continue
            if got.value > tau_value:
                raise IntersectionBoundViolation(
                    "certified candidate exceeds tau; kernel inconsistency"
                )
            found[got.value] = pair
            if got.value == tau_value:
                break

    value = max(found)
    exact = value == tau_value
    if not exact:
        k = match_ak_normal_form(f)
        exact = k is not None and value == k
    ideals = tuple(found[c] for c in sorted(found, reverse=True))
    return TauCiResult(value, exact, ideals)


# -- top-level dispatch ---------------------------------------------------------

def invariants_of(
    spec: GermSpec,
    alphas: Sequence,
    budget: SearchBudget = DEFAULT_BUDGET,
) -> InvariantRecord:
    """Catalog germs from closed forms, explicit germs through the kernel.

    Results are memoised: records are immutable and the computation is a pure
    function of (germ, alphas, budget), so sweeps do not redo kernel work.
    """
    key = (spec, tuple(validate_alpha(a) for a in alphas), budget)
    hit = _INVARIANT_CACHE.get(key)
    if hit is None:
        hit = _invariants_of(*key)
        _INVARIANT_CACHE[key] = hit
    return hit


_INVARIANT_CACHE: dict = {}


def _invariants_of(
    spec: GermSpec,
    alphas: Sequence,
    budget: SearchBudget,
) -> InvariantRecord:
    alphas = [validate_alpha(a) for a in alphas]
    if spec.is_catalog:
        return catalog_invariants(spec, alphas)

    f = spec.poly
    if spec.equivalence == TOPOLOGICAL:
        k = match_ak_normal_form(f)
        if k is None:
            raise GermInputError(
                "topological invariants for an explicit germ are only "
                "available when it matches an A_k normal form"
            )
        record = catalog_invariants(
            GermSpec.catalog("A", k, TOPOLOGICAL), alphas
        )
        return InvariantRecord(
            germ=spec,
            tau=record.tau,
            tau_ci=record.tau_ci,
            tau_ci_exact=record.tau_ci_exact,
            gamma=record.gamma,
            notes=record.notes + (f"recognised as A_{k}",),
        )

    tj = tjurina_ideal(f)
    try:
        tau_value = colength(tj, cap=budget.truncation_cap).value
    except NotFiniteColengthError:
        raise NonReducedGermError(
            "the Tjurina ideal is not m-primary: the germ has a repeated "
            "factor (or the truncation cap is too low)"
        ) from None
    if tau_value == 0:
        return InvariantRecord(
            germ=spec,
            tau=0,
            tau_ci=0,
            tau_ci_exact=True,
            gamma={a: GammaValue(None, GAMMA_UNAVAILABLE, False) for a in alphas},
            notes=("no singularity: the germ is smooth at the origin",),
        )

    ci = tau_ci_search(f, ANALYTIC, budget)
    profiles = [gamma_search_profile(f, ideal, budget) for ideal in ci.ideals]
    k = match_ak_normal_form(f)
    notes: list[str] = []
    if k is not None:
        notes.append(f"recognised as A_{k}")
    gamma: dict[Fraction, GammaValue] = {}
    warnings: set[str] = set()
    for a in alphas:
        best = Fraction(0)
        for profile in profiles:
            got = gamma_from_profile(profile, a)
            warnings.update(got.warnings)
            if got.value > best:
                best = got.value
        exact = k is not None and best == catalog_gamma("A", k, a, ANALYTIC)
        gamma[a] = GammaValue(best, GAMMA_SEARCH, exact)
    record = InvariantRecord(
        germ=spec,
        tau=tau_value,
        tau_ci=ci.value,
        tau_ci_exact=ci.exact,
        gamma=gamma,
        notes=tuple(notes) + tuple(sorted(warnings)),
    )
    verify_chain(record)
    return record


def ideal_member_stream(
    f: Jet, ideal: LocalIdealRep, budget: SearchBudget = DEFAULT_BUDGET
) -> Iterator[Jet]:
    """Deterministic stream of certified ideal members, for property checks."""
    gens = standard_generators(ideal, cap=budget.truncation_cap)
    yield from gens
    yield from _combo_candidates(gens, budget.combo_coefficients)
    d = colength(ideal, cap=budget.truncation_cap).value
    working = 2 * d + 4
    ech = span_at(ideal.nonzero_generators(), working)
    for (i, j) in _monomials_in_ideal(ech, 2 * d + 1):
        yield Jet.monomial(i, j, working)
