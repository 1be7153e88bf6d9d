"""Exact local algebra in Q[[x,y]] via jet-space linear algebra.

The universal primitive is the colength dim_Q(R/I) of an ideal I in the local
ring R at the origin.  Working at truncation degree M, the image of I in
R/m^M is the linear span of all (monomial * generator) products cut below M;
the colength at M is the monomial count minus the rank of that span, computed
by exact Gaussian elimination over the rationals.

Certification: if dim R/(I + m^M) equals dim R/(I + m^(M+2)) then the two
ideals coincide, which forces m^M inside I (Nakayama), so the value is the
true colength.  As an independent witness we additionally reduce every
monomial of total degree value+1 to zero against the span.  When the value
keeps growing up to the truncation cap the ideal is reported "not finite";
a cap hit cannot be distinguished from a genuinely non-primary ideal except
heuristically (the cap default is far above every colength this package
handles, so in practice a hit means infinity, e.g. two germs sharing a
branch).

Monomials are ordered by total degree, then within a degree from pure x to
pure y; leading terms are minimal in that order, as is usual for local rings.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .jets import Jet

DEFAULT_TRUNCATION_CAP = 64


class NotFiniteColengthError(ArithmeticError):
    """The colength did not stabilise below the truncation cap."""

    def __init__(self, cap: int):
        super().__init__(
            f"colength did not stabilise up to truncation degree {cap}; "
            "the ideal is not m-primary (or the cap is too low)"
        )
        self.cap = cap


@dataclass(frozen=True)
class LocalIdealRep:
    """An ideal given by jet generators at a common truncation degree.

    ``primary_certificate``, when set, is an exponent k with m^k contained in
    the ideal (established by the colength routine).
    """

    generators: tuple[Jet, ...]
    primary_certificate: int | None = None

    def __post_init__(self):
        gens = tuple(self.generators)
        if not gens:
            raise ValueError("an ideal needs at least one generator")
        n = gens[0].truncation
        for g in gens:
            if g.truncation != n:
                raise ValueError("generators must share a truncation degree")
        object.__setattr__(self, "generators", gens)

    @staticmethod
    def of(*jets: Jet) -> "LocalIdealRep":
        """Build from jets, lifting all to the largest truncation present."""
        if not jets:
            raise ValueError("an ideal needs at least one generator")
        n = max(j.truncation for j in jets)
        return LocalIdealRep(tuple(j.with_truncation(n) for j in jets))

    @property
    def truncation(self) -> int:
        return self.generators[0].truncation

    def at_truncation(self, truncation: int) -> "LocalIdealRep":
        return LocalIdealRep(
            tuple(g.with_truncation(truncation) for g in self.generators),
            self.primary_certificate,
        )

    def nonzero_generators(self) -> tuple[Jet, ...]:
        return tuple(g for g in self.generators if not g.is_zero())


@dataclass(frozen=True)
class Colength:
    """dim_Q(R/I); ``stable`` records that the value was certified exact."""

    value: int
    stable: bool


def monomials_below(truncation: int) -> list[tuple[int, int]]:
    """All exponent pairs of total degree < truncation, in term order."""
    out = []
    for d in range(truncation):
        for j in range(d + 1):
            out.append((d - j, j))
    return out


def mono_index(i: int, j: int) -> int:
    """Position of x^i y^j in the term order (degree, then pure-x first)."""
    d = i + j
    return d * (d + 1) // 2 + j


def monomial_count(truncation: int) -> int:
    return truncation * (truncation + 1) // 2


class SpanEchelon:
    """Incremental reduced echelon basis of a set of sparse jet-space rows.

    Rows are dicts mapping monomial index to Fraction.  The pivot of a row is
    its minimal index (the local leading term).  ``insert`` keeps the basis
    fully reduced so pivot rows are canonical.
    """

    def __init__(self):
        self.pivots: dict[int, dict[int, Fraction]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: dict[int, Fraction]) -> dict[int, Fraction]:
        row = dict(row)
        while row:
            lead = min(row)
            pivot_row = self.pivots.get(lead)
            if pivot_row is None:
                return row
            c = row[lead]
            for k, v in pivot_row.items():
                s = row.get(k, Fraction(0)) - c * v
                if s:
                    row[k] = s
                else:
                    row.pop(k, None)
        return row

    def insert(self, row: dict[int, Fraction]) -> bool:
        row = self.reduce(row)
        if not row:
            return False
        lead = min(row)
        inv = 1 / row[lead]
        row = {k: v * inv for k, v in row.items()}
        # keep the basis reduced: clear the new pivot from existing rows
        for prow in self.pivots.values():
            c = prow.get(lead)
            if c is None:
                continue
            for k, v in row.items():
                s = prow.get(k, Fraction(0)) - c * v
                if s:
                    prow[k] = s
                else:
                    prow.pop(k, None)
        self.pivots[lead] = row
        return True

    def contains(self, row: dict[int, Fraction]) -> bool:
        return not self.reduce(row)


def _jet_row(jet: Jet, truncation: int) -> dict[int, Fraction]:
    return {
        mono_index(i, j): c for (i, j), c in jet.coeffs.items() if i + j < truncation
    }


def span_at(generators: Sequence[Jet], truncation: int) -> SpanEchelon:
    """Echelon basis of the image of the ideal in R/m^truncation."""
    ech = SpanEchelon()
    for g in generators:
        if g.is_zero():
            continue
        g = g.with_truncation(truncation) if g.truncation < truncation else g
        ord_g = g.order()
        for d in range(truncation - ord_g):
            for j in range(d + 1):
                shifted = g.shift(d - j, j)
                row = _jet_row(shifted, truncation)
                if row:
                    ech.insert(row)
    return ech


def colength_at(ideal: LocalIdealRep, truncation: int) -> int:
    """dim R/(I + m^truncation): a lower bound for the true colength."""
    gens = ideal.nonzero_generators()
    if not gens:
        raise ValueError("colength of the zero ideal is not finite")
    ech = span_at(gens, truncation)
    return monomial_count(truncation) - ech.rank


def monomials_in_span(ech: SpanEchelon, degree: int) -> bool:
    """True when every monomial of the given total degree reduces to zero."""
    for j in range(degree + 1):
        if not ech.contains({mono_index(degree - j, j): Fraction(1)}):
            return False
    return True


def _certified_value(
    gens: Sequence[Jet], truncation: int
) -> tuple[int, bool, SpanEchelon]:
    """Colength at a working degree plus the degree-(value+1) certificate."""
    ech = span_at(gens, truncation)
    value = monomial_count(truncation) - ech.rank
    certified = value + 1 < truncation and monomials_in_span(ech, value + 1)
    return value, certified, ech


def colength(
    ideal: LocalIdealRep, *, cap: int = DEFAULT_TRUNCATION_CAP
) -> Colength:
    """Certified colength of an m-primary ideal.

    Escalates the working truncation (doubling, up to ``cap``) until the value
    is reproduced at degree M+2 and all monomials of degree value+1 lie in the
    span; both together certify exactness.  Raises
    :class:`NotFiniteColengthError` when the cap is hit first.
    """
    gens = ideal.nonzero_generators()
    if not gens:
        raise ValueError("colength of the zero ideal is not finite")
    m = min(ideal.truncation, cap)
    while True:
        v1, _, _ = _certified_value(gens, m)
        v2, certified, _ = _certified_value(gens, m + 2)
        if v1 == v2 and certified:
            return Colength(v1, True)
        if m >= cap:
            raise NotFiniteColengthError(cap)
        m = min(2 * m, cap)


def bounded_colength(ideal: LocalIdealRep, truncation: int) -> Colength:
    """One-shot colength at a fixed working degree, no escalation.

    ``stable`` is True only when the degree-(value+1) certificate passes, in
    which case the value is the true colength.  An unstable value is a lower
    bound.  Used by the invariant searches, which pick the working degree so
    that every candidate they keep certifies in one shot.
    """
    gens = ideal.nonzero_generators()
    if not gens:
        raise ValueError("colength of the zero ideal is not finite")
    value, certified, _ = _certified_value(gens, truncation)
    return Colength(value, certified)


def certify_primary(ideal: LocalIdealRep, exponent: int, truncation: int) -> bool:
    """Check that every monomial of total degree ``exponent`` lies in the span."""
    ech = span_at(ideal.nonzero_generators(), truncation)
    return monomials_in_span(ech, exponent)


def intersection_multiplicity(
    f: Jet, g: Jet, *, cap: int = DEFAULT_TRUNCATION_CAP
) -> Colength:
    """i(f,g) = dim R/<f,g>; "not finite" when the germs share a branch."""
    if f.is_zero() or g.is_zero():
        raise ValueError("intersection multiplicity needs nonzero germs")
    return colength(LocalIdealRep.of(f, g), cap=cap)


def tjurina_ideal(f: Jet) -> LocalIdealRep:
    """The ideal generated by both partials of f and f itself."""
    if f.is_zero():
        raise ValueError("the zero germ has no Tjurina ideal")
    if f.constant_term() != 0:
        raise ValueError("germ must vanish at the origin")
    return LocalIdealRep((f.diff("x"), f.diff("y"), f))


def tau(f: Jet, *, cap: int = DEFAULT_TRUNCATION_CAP) -> int:
    """Tjurina number of a germ (colength of its Tjurina ideal)."""
    return colength(tjurina_ideal(f), cap=cap).value


def _row_to_jet(row: dict[int, Fraction], truncation: int) -> Jet:
    monos = monomials_below(truncation)
    return Jet({monos[k]: c for k, c in row.items()}, truncation)


def standard_generators(
    ideal: LocalIdealRep, *, cap: int = DEFAULT_TRUNCATION_CAP
) -> tuple[Jet, ...]:
    """Inter-reduced generators read off the leading-term staircase.

    The span's pivot monomials form a monomial ideal; for each of its corners
    (pivots minimal under divisibility) the corresponding reduced row is an
    ideal element with that leading term.  Together they generate the ideal;
    each returned jet is the canonical reduced representative below the
    working truncation.
    """
    value = colength(ideal, cap=cap).value
    m = ideal.truncation
    while m < min(cap, value + 3):
        m = min(2 * m, cap)
    ech = span_at(ideal.nonzero_generators(), m)
    pivots = set(ech.pivots)
    monos = monomials_below(m)
    corners = []
    for k in sorted(pivots):
        i, j = monos[k]
        divisible = (i > 0 and mono_index(i - 1, j) in pivots) or (
            j > 0 and mono_index(i, j - 1) in pivots
        )
        if not divisible:
            corners.append(k)
    return tuple(_row_to_jet(ech.pivots[k], m) for k in corners)


def minimal_generator_count(
    ideal: LocalIdealRep, *, cap: int = DEFAULT_TRUNCATION_CAP
) -> int:
    """Number of generators in a minimal generating set (dim I/mI)."""
    d = colength(ideal, cap=cap).value
    n = ideal.truncation + 2  # room so the products keep their full support
    x = Jet.variable("x", n)
    y = Jet.variable("y", n)
    gens = tuple(g.with_truncation(n) for g in ideal.generators)
    m_i = LocalIdealRep(tuple(g * x for g in gens) + tuple(g * y for g in gens))
    return colength(m_i, cap=cap).value - d


def ideal_contains(
    ideal: LocalIdealRep,
    members: Iterable[Jet],
    *,
    cap: int = DEFAULT_TRUNCATION_CAP,
) -> bool:
    """Certified containment of each candidate member in the ideal.

    Requires the ideal to be m-primary: with m^(value+1) inside the ideal,
    reduction to zero at a working degree past value+1 certifies genuine
    membership, not just membership modulo high-order terms.
    """
    value = colength(ideal, cap=cap).value
    m = max(ideal.truncation, value + 2)
    ech = span_at(ideal.nonzero_generators(), m)
    for g in members:
        row = _jet_row(g, m)
        if row and not ech.contains(row):
            return False
    return True
