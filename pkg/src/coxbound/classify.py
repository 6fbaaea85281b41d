"""Component classification and the rank-one decision.

Template matching against the diagram tables is authoritative; the Gram
signature (tolerance 1e-9) is a mandatory cross-check, and any conflict
raises ``InternalDisagreement``.  The rank-one decision inspects the
minimum finite-index parabolic subgroup: the product of the infinite
irreducible factors.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .coxeter import CoxeterMatrix, IrreducibleComponent, components, gram, signature
from .diagrams import Kind, TypeLabel, identify

SIGNATURE_TOL = 1e-9


class InternalDisagreement(RuntimeError):
    """Template label and Gram signature disagree: a table bug or a
    tolerance failure, never a legitimate outcome."""


class Verdict(Enum):
    RANK_ONE = "RankOne"
    FINITE = "Finite"
    ELEMENTARY = "Elementary"
    AFFINE_OBSTRUCTION = "AffineObstruction"
    PRODUCT_OBSTRUCTION = "ProductObstruction"


@dataclass(frozen=True)
class ComponentClassification:
    component: IrreducibleComponent
    label: TypeLabel


@dataclass(frozen=True)
class RankOneVerdict:
    verdict: Verdict
    tilde_generators: tuple[int, ...]
    classifications: tuple[ComponentClassification, ...]
    narrative: tuple[str, ...]


def classify_component(component: IrreducibleComponent) -> TypeLabel:
    """Type label of a connected component, cross-checked against the
    signature trichotomy (positive definite / corank-1 PSD / indefinite)."""
    label = identify(component.induced)
    n_plus, n_zero, n_minus = signature(gram(component.induced), SIGNATURE_TOL)
    n = component.rank
    if label.kind is Kind.FINITE:
        ok = (n_plus, n_zero, n_minus) == (n, 0, 0)
    elif label.kind is Kind.AFFINE:
        ok = (n_plus, n_zero, n_minus) == (n - 1, 1, 0)
    else:
        ok = n_minus >= 1
    if not ok:
        raise InternalDisagreement(
            f"component {component.generators}: template says {label}, "
            f"signature is ({n_plus},{n_zero},{n_minus})"
        )
    return label


def classify(matrix: CoxeterMatrix) -> list[ComponentClassification]:
    return [
        ComponentClassification(c, classify_component(c)) for c in components(matrix)
    ]


def tilde_generators(
    matrix: CoxeterMatrix,
) -> tuple[tuple[int, ...], list[ComponentClassification]]:
    """Generator set of the minimum finite-index parabolic subgroup: the
    union of all components that are not of finite type.  Empty when the
    whole group is finite."""
    classified = classify(matrix)
    subset = sorted(
        g
        for c in classified
        if c.label.kind is not Kind.FINITE
        for g in c.component.generators
    )
    return tuple(subset), classified


_CONDITIONS = (
    "the minimum finite-index parabolic subgroup is irreducible and non-affine",
    "the group contains a rank-one isometry of its Davis complex",
    "the group contains a rank-one isometry of every proper CAT(0) space "
    "it acts on geometrically",
    "the Davis-complex boundary has a topological fractal structure",
    "the Davis-complex boundary action is minimal",
    "the Davis-complex boundary action is scrambled",
    "every geometric CAT(0) boundary of the group has a topological "
    "fractal structure",
    "every geometric CAT(0) boundary action of the group is minimal",
    "every geometric CAT(0) boundary action of the group is scrambled",
    "the Davis complex contains no quasi-dense subspace splitting as a "
    "product of two unbounded subspaces",
    "no geometric CAT(0) space for the group contains a quasi-dense "
    "subspace splitting as a product of two unbounded subspaces",
    "the group has no finite-index subgroup splitting as a product of two "
    "infinite subgroups",
)


def _narrative(verdict: Verdict, infinite_parts: list[ComponentClassification]):
    lines = []
    if verdict is Verdict.FINITE:
        lines.append(
            "every irreducible component is of finite type, so the group is "
            "finite and the rank-one dichotomy does not apply"
        )
        return tuple(lines)
    if verdict is Verdict.ELEMENTARY:
        lines.append(
            "the minimum finite-index parabolic subgroup is a single infinite "
            "dihedral factor, so the group is 2-ended (elementary) and the "
            "rank-one dichotomy does not apply"
        )
        return tuple(lines)
    if verdict is Verdict.RANK_ONE:
        head = "holds"
        reason = (
            f"the minimum finite-index parabolic subgroup is the single "
            f"indefinite component on generators "
            f"{infinite_parts[0].component.generators}"
        )
    elif verdict is Verdict.AFFINE_OBSTRUCTION:
        label = infinite_parts[0].label
        rank = infinite_parts[0].component.rank
        head = "fails"
        reason = (
            f"the minimum finite-index parabolic subgroup is a single affine "
            f"component of type {label}, hence virtually Z^{rank - 1}, which "
            f"splits: condition (12) fails"
        )
    else:
        names = ", ".join(str(c.label) for c in infinite_parts)
        head = "fails"
        reason = (
            f"the minimum finite-index parabolic subgroup splits as a product "
            f"of {len(infinite_parts)} infinite factors ({names}): "
            f"condition (12) fails"
        )
    lines.append(reason)
    for i, text in enumerate(_CONDITIONS, start=1):
        lines.append(f"({i}) {head}: {text}")
    return tuple(lines)


def decide_rank_one(matrix: CoxeterMatrix) -> RankOneVerdict:
    """Decide whether the group contains a rank-one isometry.

    The twelve equivalent characterizations (irreducible non-affine core,
    rank-one isometries, fractal / minimal / scrambled boundaries, absence
    of quasi-dense or finite-index product splittings) hold together or
    fail together for infinite non-elementary groups; the verdict reports
    which side holds and why.  Finite and 2-ended groups fall outside the
    dichotomy and get their own verdicts.
    """
    subset, classified = tilde_generators(matrix)
    infinite_parts = [
        c for c in classified if c.label.kind is not Kind.FINITE
    ]
    if not infinite_parts:
        verdict = Verdict.FINITE
    elif len(infinite_parts) >= 2:
        verdict = Verdict.PRODUCT_OBSTRUCTION
    else:
        label = infinite_parts[0].label
        if label.name == "A~1":
            verdict = Verdict.ELEMENTARY
        elif label.kind is Kind.AFFINE:
            verdict = Verdict.AFFINE_OBSTRUCTION
        else:
            verdict = Verdict.RANK_ONE
    return RankOneVerdict(
        verdict=verdict,
        tilde_generators=subset,
        classifications=tuple(classified),
        narrative=_narrative(verdict, infinite_parts),
    )
