"""The numeric word engine: lengths, ShortLex normal forms, balls.

Elements act on root coordinates through the geometric representation:
the simple reflection for generator s sends v to v - 2 B(e_s, v) e_s,
where B is the cosine form.  Whether a generator shortens a word is a
sign test on root coordinates, so every sign test carries a tolerance
and raises ``NumericAmbiguity`` instead of guessing when a coordinate
sits inside the tolerance band.  At desk scale (words up to a few dozen
letters) double precision sits many orders of magnitude clear of the
band; the combinatorial oracle in ``rewriting`` double-checks that on
every finite system the tests use.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coxeter import CoxeterMatrix, gram

SIGN_TOL = 1e-7
RENORM_EVERY = 32


class NumericAmbiguity(RuntimeError):
    """A sign test landed inside the tolerance band; the word is too long
    for the numeric regime."""


@dataclass(frozen=True)
class ReflectionRep:
    """Simple reflection matrices over the cosine form, simple roots the
    standard basis."""

    matrix: CoxeterMatrix
    bilinear: np.ndarray
    generators: tuple[np.ndarray, ...]
    inverse_bilinear: np.ndarray | None
    sign_tol: float = SIGN_TOL

    @property
    def rank(self) -> int:
        return self.matrix.rank

    def __post_init__(self):
        self.bilinear.flags.writeable = False
        for g in self.generators:
            g.flags.writeable = False


def build_rep(matrix: CoxeterMatrix, sign_tol: float = SIGN_TOL) -> ReflectionRep:
    bilinear = gram(matrix)
    n = matrix.rank
    gens = []
    for s in range(n):
        sigma = np.eye(n)
        sigma[s, :] -= 2.0 * bilinear[s, :]
        gens.append(sigma)
    try:
        inverse_bilinear = np.linalg.inv(bilinear)
        if np.abs(inverse_bilinear).max() > 1e12:
            inverse_bilinear = None
    except np.linalg.LinAlgError:
        inverse_bilinear = None
    return ReflectionRep(matrix, bilinear, tuple(gens), inverse_bilinear, sign_tol)


@dataclass(frozen=True)
class GroupElement:
    """A group element carried as its ShortLex normal form plus matrices."""

    word: tuple[int, ...]
    matrix: np.ndarray
    inverse_matrix: np.ndarray

    @property
    def length(self) -> int:
        return len(self.word)

    def __post_init__(self):
        self.matrix.flags.writeable = False
        self.inverse_matrix.flags.writeable = False

    def __repr__(self) -> str:
        return f"GroupElement{self.word}"


def restore_form(m: np.ndarray, rep: ReflectionRep) -> np.ndarray:
    """One Newton step back toward exact B-orthogonality, a no-op when the
    form is singular."""
    if rep.inverse_bilinear is None:
        return m
    n = rep.rank
    residual = rep.inverse_bilinear @ m.T @ rep.bilinear @ m
    return m @ ((3.0 * np.eye(n) - residual) / 2.0)


def word_matrix(rep: ReflectionRep, word) -> np.ndarray:
    m = np.eye(rep.rank)
    for count, s in enumerate(word, start=1):
        m = m @ rep.generators[s]
        if count % RENORM_EVERY == 0:
            m = restore_form(m, rep)
    return m


def _root_sign(v: np.ndarray, tol: float) -> int:
    lo = v.min()
    hi = v.max()
    if lo >= -tol and hi > tol:
        return 1
    if hi <= tol and lo < -tol:
        return -1
    raise NumericAmbiguity(
        f"root coordinates straddle the tolerance band: min {lo:.3e}, max {hi:.3e}"
    )


def _least_descent(m: np.ndarray, tol: float) -> int | None:
    """Least s whose simple root maps to a negative root, or None."""
    for s in range(m.shape[0]):
        if _root_sign(m[:, s], tol) < 0:
            return s
    return None


def _check_identity(m: np.ndarray, tol: float = 1e-6):
    if np.abs(m - np.eye(m.shape[0])).max() > tol:
        raise NumericAmbiguity("descent reduction did not land on the identity")


def length(word, rep: ReflectionRep) -> int:
    """Word-metric length, by stripping one descent generator at a time."""
    for s in word:
        if not 0 <= s < rep.rank:
            raise ValueError(f"letter {s} out of range")
    m = word_matrix(rep, word)
    count = 0
    while (s := _least_descent(m, rep.sign_tol)) is not None:
        m = m @ rep.generators[s]
        count += 1
    _check_identity(m)
    return count


def _normal_form_from_inverse(inverse: np.ndarray, rep: ReflectionRep):
    """ShortLex normal form read off the inverse matrix: at every step the
    least left descent of the element is the least right descent of its
    inverse."""
    u = inverse.copy()
    out = []
    while (s := _least_descent(u, rep.sign_tol)) is not None:
        out.append(s)
        u = u @ rep.generators[s]
    _check_identity(u)
    return tuple(out)


def normal_form(word, rep: ReflectionRep) -> GroupElement:
    """ShortLex-minimal reduced form of a word, with its matrices."""
    for s in word:
        if not 0 <= s < rep.rank:
            raise ValueError(f"letter {s} out of range")
    inverse = word_matrix(rep, tuple(reversed(tuple(word))))
    nf = _normal_form_from_inverse(inverse, rep)
    return GroupElement(
        word=nf,
        matrix=word_matrix(rep, nf),
        inverse_matrix=word_matrix(rep, tuple(reversed(nf))),
    )


def identity_element(rep: ReflectionRep) -> GroupElement:
    n = rep.rank
    return GroupElement((), np.eye(n), np.eye(n))


def multiply(a: GroupElement, b: GroupElement, rep: ReflectionRep) -> GroupElement:
    product_inverse = b.inverse_matrix @ a.inverse_matrix
    nf = _normal_form_from_inverse(product_inverse, rep)
    return GroupElement(
        word=nf,
        matrix=word_matrix(rep, nf),
        inverse_matrix=word_matrix(rep, tuple(reversed(nf))),
    )


def inverse(a: GroupElement, rep: ReflectionRep) -> GroupElement:
    nf = _normal_form_from_inverse(a.matrix.copy(), rep)
    return GroupElement(nf, a.inverse_matrix.copy(), a.matrix.copy())


def equal(a, b, rep: ReflectionRep) -> bool:
    """True when two words name the same group element."""
    return normal_form(a, rep).word == normal_form(b, rep).word


def ball(rep: ReflectionRep, radius: int) -> list[GroupElement]:
    """Every element of length <= radius, in ShortLex order.

    Breadth-first over right multiplication: a child g*s is taken only
    when it is longer than g, and children are deduplicated by normal
    form, so each element appears exactly once at its own length.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    out = [identity_element(rep)]
    frontier = out[:]
    for level in range(1, radius + 1):
        renorm = level % RENORM_EVERY == 0
        new: dict[tuple[int, ...], GroupElement] = {}
        for g in frontier:
            for s in range(rep.rank):
                if _root_sign(g.matrix[:, s], rep.sign_tol) < 0:
                    continue  # descent: g*s is shorter
                m = g.matrix @ rep.generators[s]
                m_inv = rep.generators[s] @ g.inverse_matrix
                if renorm:
                    m = restore_form(m, rep)
                    m_inv = restore_form(m_inv, rep)
                nf = _normal_form_from_inverse(m_inv, rep)
                if nf not in new:
                    new[nf] = GroupElement(nf, m, m_inv)
        frontier = [new[w] for w in sorted(new)]
        out.extend(frontier)
        if not frontier:
            break
    return out


class OrderKind(Enum):
    INFINITE = "infinite"
    FINITE = "finite"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class OrderResult:
    kind: OrderKind
    order: int | None = None
    spectral_radius: float | None = None


def is_infinite_order(
    g: GroupElement,
    rep: ReflectionRep,
    power_cap: int = 64,
    eig_tol: float = 1e-9,
) -> OrderResult:
    """Tri-state order test.

    Spectral radius above 1 certifies infinite order.  Otherwise powers up
    to ``power_cap`` are compared against the identity; translations along
    affine directions have spectral radius 1 and infinite order, so they
    come back ``UNKNOWN`` rather than with a wrong certificate.
    """
    eigenvalues = np.linalg.eigvals(g.matrix)
    radius = float(np.abs(eigenvalues).max())
    if radius > 1.0 + eig_tol:
        return OrderResult(OrderKind.INFINITE, spectral_radius=radius)
    n = rep.rank
    power = np.eye(n)
    for k in range(1, power_cap + 1):
        power = power @ g.matrix
        if np.abs(power - np.eye(n)).max() < 1e-7:
            return OrderResult(OrderKind.FINITE, order=k)
    return OrderResult(OrderKind.UNKNOWN, spectral_radius=radius)
