"""Rank-one and rank-two Neron-Severi lattices for the five surface classes.

Each model carries an integer intersection form on a fixed basis, its
canonical class in that basis, and the constants entering the smoothness
criterion: a weight alpha for the rank-one family, or a coefficient gamma
(at most 1/4) for products of curves and geometrically ruled surfaces, plus
the hypotheses the corresponding theorem places on the divisor.

Bases:
  * rank one: an ample generator L with L^2 = l2 and K = kappa * L;
  * product of curves: the two fibre classes, form ((0,1),(1,0)),
    K = (2*g2-2, 2*g1-2);
  * ruled surface over a genus-g curve with invariant e: a section C0 and a
    fibre F, form ((-e,1),(1,0)), K = (-2, 2g-2-e).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


class SurfaceInputError(ValueError):
    """Invalid surface parameters or divisor coordinates."""


@dataclass(frozen=True)
class DivisorClass:
    coords: tuple[int, ...]

    def __post_init__(self):
        coords = tuple(int(c) for c in self.coords)
        if len(coords) not in (1, 2):
            raise SurfaceInputError("divisor classes have 1 or 2 coordinates")
        object.__setattr__(self, "coords", coords)

    def __add__(self, other: "DivisorClass") -> "DivisorClass":
        self._match(other)
        return DivisorClass(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "DivisorClass") -> "DivisorClass":
        self._match(other)
        return DivisorClass(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def scale(self, c: int) -> "DivisorClass":
        return DivisorClass(tuple(c * a for a in self.coords))

    def _match(self, other: "DivisorClass") -> None:
        if len(self.coords) != len(other.coords):
            raise SurfaceInputError("divisor rank mismatch")


class _RankOneFamily:
    """Shared behaviour of the Picard-number-one models."""

    rank = 1

    def gram(self) -> tuple[tuple[int, ...], ...]:
        return ((self.l2,),)

    def canonical_class(self) -> DivisorClass:
        return DivisorClass((self.kappa,))

    def criterion_alpha(self) -> Fraction:
        return Fraction(1, max(1, 1 + self.kappa))

    @property
    def is_plane_like(self) -> bool:
        # numerically the projective plane: the strictness refinement keys on this
        return self.l2 == 1 and self.kappa == -3

    def hypothesis_checks(self, D: DivisorClass) -> tuple["HypothesisCheck", ...]:
        d = D.coords[0]
        need = max(self.kappa + 1, -self.kappa)
        ok = d >= need
        return (
            HypothesisCheck(
                "d >= max(kappa+1, -kappa)",
                ok,
                "" if ok else f"d = {d} < {need}",
            ),
        )


@dataclass(frozen=True)
class PicardOne(_RankOneFamily):
    l2: int
    kappa: int
    variant = "picard_one"

    def __post_init__(self):
        if self.l2 < 1:
            raise SurfaceInputError("the ample generator needs L^2 >= 1")


@dataclass(frozen=True)
class ProjectivePlane(_RankOneFamily):
    variant = "projective_plane"
    l2 = 1
    kappa = -3


@dataclass(frozen=True)
class P3Hypersurface(_RankOneFamily):
    n: int
    variant = "p3_hypersurface"

    def __post_init__(self):
        if self.n < 4:
            raise SurfaceInputError("hypersurface degree must be >= 4")

    @property
    def l2(self) -> int:
        return self.n

    @property
    def kappa(self) -> int:
        return self.n - 4


@dataclass(frozen=True)
class K3Surface(_RankOneFamily):
    n: int
    variant = "k3"
    kappa = 0

    def __post_init__(self):
        if self.n < 1:
            raise SurfaceInputError("the ample generator needs L^2 = n >= 1")

    @property
    def l2(self) -> int:
        return self.n


@dataclass(frozen=True)
class ProductOfCurves:
    g1: int
    g2: int
    variant = "product_of_curves"
    rank = 2

    def __post_init__(self):
        if self.g2 < 0 or self.g1 < self.g2:
            raise SurfaceInputError("genera must satisfy g1 >= g2 >= 0")

    def gram(self) -> tuple[tuple[int, ...], ...]:
        return ((0, 1), (1, 0))

    def canonical_class(self) -> DivisorClass:
        return DivisorClass((2 * self.g2 - 2, 2 * self.g1 - 2))

    def hypothesis_checks(self, D: DivisorClass) -> tuple["HypothesisCheck", ...]:
        a, b = D.coords
        need_a = max(2 - 2 * self.g2, 2 * self.g2 - 1)
        need_b = max(2 - 2 * self.g1, 2 * self.g1 - 1)
        return (
            HypothesisCheck(
                "a >= max(2-2g2, 2g2-1)",
                a >= need_a,
                "" if a >= need_a else f"a = {a} < {need_a}",
            ),
            HypothesisCheck(
                "b >= max(2-2g1, 2g1-1)",
                b >= need_b,
                "" if b >= need_b else f"b = {b} < {need_b}",
            ),
        )

    def criterion_gamma(self, D: DivisorClass) -> Fraction:
        a, b = D.coords
        if self.g1 <= 1:
            return Fraction(1, 4)
        ratio = Fraction(a - 2 * self.g2 + 2, b - 2 * self.g1 + 2)
        options = [Fraction(1, 4 * self.g1), Fraction(1, 4 * (self.g1 - 1)) / ratio]
        if self.g2 >= 2:
            options = [
                Fraction(1, 4 * self.g1 + 4 * self.g2 - 4),
                ratio / (4 * (self.g2 - 1)),
                Fraction(1, 4 * (self.g1 - 1)) / ratio,
            ]
        return min(options)


@dataclass(frozen=True)
class RuledSurface:
    g: int
    e: int
    variant = "ruled"
    rank = 2

    def __post_init__(self):
        if self.g < 0:
            raise SurfaceInputError("the base curve genus must be >= 0")
        if self.e < -self.g:
            raise SurfaceInputError("the invariant must satisfy e >= -g")

    def gram(self) -> tuple[tuple[int, ...], ...]:
        return ((-self.e, 1), (1, 0))

    def canonical_class(self) -> DivisorClass:
        return DivisorClass((-2, 2 * self.g - 2 - self.e))

    def hypothesis_checks(self, D: DivisorClass) -> tuple["HypothesisCheck", ...]:
        a, b = D.coords
        bound = max(2 * self.g - 2, 2 - 2 * self.g) + Fraction(a * self.e, 2)
        return (
            HypothesisCheck("a > 2", a > 2, "" if a > 2 else f"a = {a} <= 2"),
            HypothesisCheck(
                "b > max(2g-2, 2-2g) + a*e/2",
                b > bound,
                "" if b > bound else f"b = {b} <= {bound}",
            ),
        )

    def criterion_gamma(self, D: DivisorClass) -> Fraction:
        a, b = D.coords
        if self.g <= 1:
            return Fraction(1, 4)
        ratio = Fraction(a + 2) / (b + 2 - 2 * self.g - Fraction(a * self.e, 2))
        return min(Fraction(1, 4 * self.g), Fraction(1, 4 * (self.g - 1)) / ratio)


SurfaceModel = (
    PicardOne | ProjectivePlane | P3Hypersurface | K3Surface | ProductOfCurves | RuledSurface
)

RANK_ONE_MODELS = (PicardOne, ProjectivePlane, P3Hypersurface, K3Surface)


def divisor(model: SurfaceModel, coords: Sequence[int]) -> DivisorClass:
    D = DivisorClass(tuple(coords))
    if len(D.coords) != model.rank:
        raise SurfaceInputError(
            f"divisor has {len(D.coords)} coordinates, model rank is {model.rank}"
        )
    return D


def intersect(model: SurfaceModel, D1: DivisorClass, D2: DivisorClass) -> int:
    """Value of the intersection form, exact."""
    if len(D1.coords) != model.rank or len(D2.coords) != model.rank:
        raise SurfaceInputError("divisor rank mismatch")
    gram = model.gram()
    return sum(
        D1.coords[i] * gram[i][j] * D2.coords[j]
        for i in range(model.rank)
        for j in range(model.rank)
    )


def gram_value(model: SurfaceModel, coords: Sequence[Fraction]) -> Fraction:
    """Quadratic form on rational coordinates (for half-integer classes)."""
    coords = [Fraction(c) for c in coords]
    if len(coords) != model.rank:
        raise SurfaceInputError("divisor rank mismatch")
    gram = model.gram()
    return sum(
        coords[i] * gram[i][j] * coords[j]
        for i in range(model.rank)
        for j in range(model.rank)
    )


def canonical_class(model: SurfaceModel) -> DivisorClass:
    return model.canonical_class()


def d_minus_k_squared(model: SurfaceModel, D: DivisorClass) -> Fraction:
    dk = D - model.canonical_class()
    return Fraction(intersect(model, dk, dk))


@dataclass(frozen=True)
class HypothesisCheck:
    name: str
    ok: bool
    reason: str = ""


@dataclass(frozen=True)
class CriterionConstants:
    """Per-model criterion data: exactly one of alpha / gamma is set."""

    alpha: Fraction | None
    gamma: Fraction | None
    dk_squared: Fraction
    hypotheses: tuple[HypothesisCheck, ...]

    @property
    def hypotheses_ok(self) -> bool:
        return all(h.ok for h in self.hypotheses)

    @property
    def rate(self) -> Fraction | None:
        """Coefficient multiplying (D-K)^2 on the comparison's right side."""
        return self.alpha if self.alpha is not None else self.gamma


def criterion_constants(model: SurfaceModel, D: DivisorClass) -> CriterionConstants:
    """Alpha or gamma for the model, the exact (D-K)^2, and the hypotheses.

    When the hypotheses fail, gamma is left unset rather than evaluated on
    degenerate data (its denominators are only known positive under the
    hypotheses); the failure reasons tell the caller what went wrong.
    """
    if len(D.coords) != model.rank:
        raise SurfaceInputError("divisor rank mismatch")
    checks = model.hypothesis_checks(D)
    dk2 = d_minus_k_squared(model, D)
    if isinstance(model, RANK_ONE_MODELS):
        return CriterionConstants(model.criterion_alpha(), None, dk2, checks)
    if all(c.ok for c in checks):
        gamma = model.criterion_gamma(D)
    else:
        gamma = None
    return CriterionConstants(None, gamma, dk2, checks)
