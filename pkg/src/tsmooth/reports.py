"""JSON and CSV serialisation, problem files and parameter sweeps.

Every rational number crosses the boundary as an exact "p/q" string (plain
"n" for integers); decimals appear only in clearly-labelled convenience
columns of the CSV output.  Reports are emitted with sorted keys and no
timestamps, so identical inputs produce byte-identical bytes; the metadata
header carries the tool version.

File formats (JSON Schemas shipped in docs/):
  * problem file: surface + divisor + singularities with multiplicities,
    plus options (extra alphas to report, search budget, strictness
    override);
  * sweep file: a base problem plus integer axes; an axis drives one or more
    integer parameters, each through an optional scale factor, so coupled
    walks like b = 3a stay expressible;
  * reports: the criterion verdict with hypotheses and per-singularity data,
    or an invariant record.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterator, Sequence

from . import __version__
from .invariants import (
    ANALYTIC,
    TOPOLOGICAL,
    GermInputError,
    GermSpec,
    InvariantRecord,
    SearchBudget,
)
from .jets import jet_for_germ, make_jet
from .criteria import CriterionReport, evaluate
from .surfaces import (
    DivisorClass,
    K3Surface,
    P3Hypersurface,
    PicardOne,
    ProductOfCurves,
    ProjectivePlane,
    RuledSurface,
    SurfaceInputError,
    SurfaceModel,
    divisor,
)


class ProblemFileError(ValueError):
    """Malformed problem or sweep file."""


def frac_str(value: Fraction | int) -> str:
    f = Fraction(value)
    if f.denominator == 1:
        return str(f.numerator)
    return f"{f.numerator}/{f.denominator}"


def frac_approx(value: Fraction | int) -> str:
    return repr(float(Fraction(value)))


def meta() -> dict:
    return {"tool": "tsmooth", "version": __version__}


def canonical_json(payload: Any) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


# -- germs --------------------------------------------------------------------

def germ_to_dict(spec: GermSpec) -> dict:
    out: dict[str, Any] = {"equivalence": spec.equivalence}
    if spec.is_catalog:
        out["type"] = spec.family
        out["m" if spec.family == "M" else "k"] = spec.index
    else:
        out["poly"] = str(spec.poly)
        out["truncation"] = spec.poly.truncation
    return out


def germ_from_dict(data: dict) -> GermSpec:
    if not isinstance(data, dict):
        raise ProblemFileError("a singularity must be a JSON object")
    equivalence = data.get("equivalence")
    if "poly" in data:
        if equivalence is None:
            equivalence = ANALYTIC
        text = data["poly"]
        if "truncation" in data:
            poly = make_jet(text, int(data["truncation"]))
        else:
            poly = jet_for_germ(text)
        return GermSpec.explicit(poly, equivalence)
    family = data.get("type")
    if family is None:
        raise ProblemFileError("a singularity needs a 'type' or a 'poly'")
    index = data.get("m") if family == "M" else data.get("k")
    if index is None:
        index = data.get("k", data.get("m"))
    if index is None:
        raise ProblemFileError(f"catalog type {family!r} needs an index")
    if equivalence is None:
        equivalence = TOPOLOGICAL
    return GermSpec.catalog(family, int(index), equivalence)


# -- surfaces -------------------------------------------------------------------

def model_to_dict(model: SurfaceModel) -> dict:
    out: dict[str, Any] = {"variant": model.variant}
    if isinstance(model, PicardOne):
        out.update(L2=model.l2, kappa=model.kappa)
    elif isinstance(model, (P3Hypersurface, K3Surface)):
        out.update(n=model.n)
    elif isinstance(model, ProductOfCurves):
        out.update(g1=model.g1, g2=model.g2)
    elif isinstance(model, RuledSurface):
        out.update(g=model.g, e=model.e)
    return out


def model_from_dict(data: dict) -> SurfaceModel:
    if not isinstance(data, dict) or "variant" not in data:
        raise ProblemFileError("surface must be an object with a 'variant'")
    variant = data["variant"]
    try:
        if variant == "picard_one":
            return PicardOne(int(data["L2"]), int(data["kappa"]))
        if variant == "projective_plane":
            return ProjectivePlane()
        if variant == "p3_hypersurface":
            return P3Hypersurface(int(data["n"]))
        if variant == "k3":
            return K3Surface(int(data["n"]))
        if variant == "product_of_curves":
            return ProductOfCurves(int(data["g1"]), int(data["g2"]))
        if variant == "ruled":
            return RuledSurface(int(data["g"]), int(data["e"]))
    except KeyError as exc:
        raise ProblemFileError(f"surface {variant!r} misses parameter {exc}") from None
    except SurfaceInputError as exc:
        raise ProblemFileError(str(exc)) from None
    raise ProblemFileError(f"unknown surface variant {variant!r}")


# -- invariant records -----------------------------------------------------------

def record_to_dict(record: InvariantRecord) -> dict:
    gamma = []
    for alpha in sorted(record.gamma):
        gv = record.gamma[alpha]
        gamma.append(
            {
                "alpha": frac_str(alpha),
                "value": None if gv.value is None else frac_str(gv.value),
                "provenance": gv.provenance,
                "exact": gv.exact,
            }
        )
    return {
        "meta": meta(),
        "germ": germ_to_dict(record.germ),
        "tau": record.tau,
        "tau_ci": {"value": record.tau_ci, "exact": record.tau_ci_exact},
        "smooth": record.tau == 0,
        "gamma": gamma,
        "notes": list(record.notes),
    }


# -- criterion reports -------------------------------------------------------------

def report_to_dict(report: CriterionReport, extra: dict | None = None) -> dict:
    out = {
        "meta": meta(),
        "surface": model_to_dict(report.model),
        "divisor": list(report.divisor.coords),
        "alpha_used": frac_str(report.alpha_used),
        "rate": None if report.rate is None else frac_str(report.rate),
        "lhs": None if report.lhs is None else frac_str(report.lhs),
        "rhs": None if report.rhs is None else frac_str(report.rhs),
        "margin": None if report.margin is None else frac_str(report.margin),
        "strictness": report.strictness,
        "strictness_reason": report.strictness_reason,
        "hypotheses": [
            {"name": h.name, "ok": h.ok, "reason": h.reason}
            for h in report.hypotheses
        ],
        "verdict": report.verdict,
        "verdict_meaning": (
            "T-smooth or empty" if report.verdict == "TSMOOTH_OR_EMPTY" else ""
        ),
        "verdict_note": report.verdict_note,
        "per_singularity": [
            {
                "germ": germ_to_dict(line.germ),
                "count": line.count,
                "gamma": None if line.gamma is None else frac_str(line.gamma),
                "provenance": line.provenance,
                "exact": line.exact,
            }
            for line in report.per_singularity
        ],
    }
    if extra:
        out.update(extra)
    return out


# -- problem files -------------------------------------------------------------------

@dataclass(frozen=True)
class Problem:
    model: SurfaceModel
    divisor: DivisorClass
    singularities: tuple[tuple[GermSpec, int], ...]
    alphas: tuple[Fraction, ...] = ()
    budget: SearchBudget = SearchBudget()
    strictness_override: str | None = None


def problem_from_dict(data: dict) -> Problem:
    if not isinstance(data, dict):
        raise ProblemFileError("problem file must be a JSON object")
    for key in ("surface", "divisor", "singularities"):
        if key not in data:
            raise ProblemFileError(f"problem file misses {key!r}")
    model = model_from_dict(data["surface"])
    try:
        D = divisor(model, [int(c) for c in data["divisor"]])
    except (TypeError, ValueError, SurfaceInputError) as exc:
        raise ProblemFileError(f"bad divisor: {exc}") from None
    sings = []
    if not data["singularities"]:
        raise ProblemFileError("the singularity list must not be empty")
    for entry in data["singularities"]:
        count = int(entry.get("count", 1)) if isinstance(entry, dict) else 1
        if count < 1:
            raise ProblemFileError("singularity counts must be >= 1")
        try:
            sings.append((germ_from_dict(entry), count))
        except GermInputError as exc:
            raise ProblemFileError(str(exc)) from None
    options = data.get("options", {}) or {}
    from .invariants import parse_alpha

    alphas = tuple(parse_alpha(str(a)) for a in options.get("alphas", ()))
    budget = SearchBudget()
    if "budget" in options and options["budget"] is not None:
        budget = SearchBudget(max_candidates=int(options["budget"]))
    override = options.get("strictness_override")
    if override in ("", "none"):
        override = None
    if override not in (None, "force_strict"):
        raise ProblemFileError(f"unknown strictness_override {override!r}")
    return Problem(model, D, tuple(sings), alphas, budget, override)


def load_problem(path: str) -> Problem:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"invalid JSON in {path}: {exc}") from None
    return problem_from_dict(data)


def run_problem(problem: Problem) -> CriterionReport:
    return evaluate(
        problem.model,
        problem.divisor,
        problem.singularities,
        budget=problem.budget,
        strictness_override=problem.strictness_override,
    )


# -- sweeps --------------------------------------------------------------------------

@dataclass(frozen=True)
class SweepAxis:
    name: str
    targets: tuple[tuple[str, int], ...]  # (path, scale)
    start: int
    stop: int  # inclusive
    step: int = 1

    def values(self) -> range:
        if self.step < 1:
            raise ProblemFileError("axis step must be >= 1")
        return range(self.start, self.stop + 1, self.step)


@dataclass(frozen=True)
class SweepSpec:
    base: dict
    axes: tuple[SweepAxis, ...]


_AXIS_PARAMETERS = ("divisor", "singularities", "surface")


def _axis_from_dict(data: dict) -> SweepAxis:
    if not isinstance(data, dict):
        raise ProblemFileError("each axis must be a JSON object")
    if "targets" in data:
        targets = tuple(
            (t["path"], int(t.get("scale", 1))) for t in data["targets"]
        )
    elif "path" in data:
        targets = ((data["path"], 1),)
    else:
        raise ProblemFileError("an axis needs a 'path' or 'targets'")
    for path, _ in targets:
        if not path.startswith(_AXIS_PARAMETERS):
            raise ProblemFileError(f"axis path {path!r} is not an integer parameter")
    name = data.get("name") or targets[0][0]
    try:
        start, stop = int(data["start"]), int(data["stop"])
    except KeyError as exc:
        raise ProblemFileError(f"axis misses {exc}") from None
    return SweepAxis(name, targets, start, stop, int(data.get("step", 1)))


def sweep_from_dict(data: dict) -> SweepSpec:
    if not isinstance(data, dict) or "base" not in data or "axes" not in data:
        raise ProblemFileError("sweep file needs 'base' and 'axes'")
    axes = tuple(_axis_from_dict(a) for a in data["axes"])
    names = [a.name for a in axes]
    if len(set(names)) != len(names):
        raise ProblemFileError("axis names must be distinct")
    base = data["base"]
    problem_from_dict(base)  # validate eagerly so errors carry no grid point
    return SweepSpec(base, axes)


def load_sweep(path: str) -> SweepSpec:
    with open(path, "r", encoding="utf-8") as handle:
        try:
            data = json.load(handle)
        except json.JSONDecodeError as exc:
            raise ProblemFileError(f"invalid JSON in {path}: {exc}") from None
    return sweep_from_dict(data)


def _set_path(tree: Any, path: str, value: int) -> None:
    tokens: list[Any] = []
    for part in path.split("."):
        while "[" in part:
            head, rest = part.split("[", 1)
            idx, part = rest.split("]", 1)
            if head:
                tokens.append(head)
            tokens.append(int(idx))
        if part:
            tokens.append(part)
    node = tree
    try:
        for token in tokens[:-1]:
            node = node[token]
        last = tokens[-1]
        node[last]  # must already exist: axes only move existing parameters
        node[last] = value
    except (KeyError, IndexError, TypeError):
        raise ProblemFileError(f"axis path {path!r} not found in the problem") from None


SWEEP_COLUMNS = (
    "lhs",
    "rhs",
    "margin",
    "lhs_approx",
    "rhs_approx",
    "margin_approx",
    "verdict",
    "strictness",
)


def sweep_header(spec: SweepSpec) -> list[str]:
    return [axis.name for axis in spec.axes] + list(SWEEP_COLUMNS)


def run_sweep(spec: SweepSpec) -> Iterator[list[str]]:
    """Rows in lexicographic axis order; values exact, decimals labelled."""
    import copy

    for point in itertools.product(*(axis.values() for axis in spec.axes)):
        tree = copy.deepcopy(spec.base)
        for axis, value in zip(spec.axes, point):
            for path, scale in axis.targets:
                _set_path(tree, path, scale * value)
        report = run_problem(problem_from_dict(tree))
        row = [str(v) for v in point]
        for field in ("lhs", "rhs", "margin"):
            value = getattr(report, field)
            row.append("" if value is None else frac_str(value))
        for field in ("lhs", "rhs", "margin"):
            value = getattr(report, field)
            row.append("" if value is None else frac_approx(value))
        row.append(report.verdict)
        row.append(report.strictness)
        yield row
