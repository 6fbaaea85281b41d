"""Coxeter matrices: validation, irreducible components, Gram form, signature.

A Coxeter system on generators ``0..n-1`` is encoded by its symmetric bond
matrix ``m(s,t)`` with ``m(s,s) = 1`` and ``m(s,t) >= 2`` off the diagonal.
Infinite bonds are stored as ``0`` throughout (the same convention the JSON
wire format uses), so the entry array stays integer typed.  Use
``math.inf`` or ``0`` interchangeably when building matrices by hand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

INFINITE_BOND = 0


class CoxeterMatrixError(ValueError):
    """Raised when a raw table is not a legal Coxeter matrix."""


class NonSymmetricError(CoxeterMatrixError):
    pass


class BadDiagonalError(CoxeterMatrixError):
    pass


class BadOffDiagonalError(CoxeterMatrixError):
    pass


@dataclass(frozen=True)
class CoxeterMatrix:
    """Validated bond matrix.  ``entries`` is read-only, 0 encodes infinity."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries.flags.writeable = False

    @property
    def rank(self) -> int:
        return self.entries.shape[0]

    def bond(self, s: int, t: int) -> int:
        """m(s,t) as stored: an integer, 0 meaning infinity."""
        return int(self.entries[s, t])

    def is_infinite_bond(self, s: int, t: int) -> bool:
        return self.entries[s, t] == INFINITE_BOND

    def submatrix(self, generators) -> "CoxeterMatrix":
        idx = list(generators)
        return CoxeterMatrix(self.entries[np.ix_(idx, idx)].copy())

    def permuted(self, perm) -> "CoxeterMatrix":
        """Relabel generators: new index i corresponds to old index perm[i]."""
        return self.submatrix(perm)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CoxeterMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool(
            np.array_equal(self.entries, other.entries)
        )

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"CoxeterMatrix({self.entries.tolist()})"


@dataclass(frozen=True)
class IrreducibleComponent:
    """A connected component of the diagram, with its induced bond matrix."""

    generators: tuple[int, ...]
    induced: CoxeterMatrix

    @property
    def rank(self) -> int:
        return len(self.generators)


def _normalize_entry(value) -> int:
    if isinstance(value, (bool, np.bool_)):
        raise BadOffDiagonalError(f"entry {value!r} is not an integer or infinity")
    if value == math.inf:
        return INFINITE_BOND
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, float) and value.is_integer():
        return int(value)
    raise BadOffDiagonalError(f"entry {value!r} is not an integer or infinity")


def validate(table) -> CoxeterMatrix:
    """Validate a raw square table and return a ``CoxeterMatrix``.

    Entries must lie in {1, 2, 3, ...} with infinity written as either
    ``math.inf`` or ``0``.  The input is never mutated.
    """
    rows = [list(row) for row in table]
    n = len(rows)
    if n == 0 or any(len(row) != n for row in rows):
        raise CoxeterMatrixError("matrix must be square and non-empty")
    m = np.empty((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            m[i, j] = _normalize_entry(rows[i][j])
    for i in range(n):
        if m[i, i] != 1:
            raise BadDiagonalError(f"m({i},{i}) = {m[i, i]}, must be 1")
    for i in range(n):
        for j in range(i + 1, n):
            if m[i, j] != m[j, i]:
                raise NonSymmetricError(
                    f"m({i},{j}) = {m[i, j]} but m({j},{i}) = {m[j, i]}"
                )
            if m[i, j] != INFINITE_BOND and m[i, j] < 2:
                raise BadOffDiagonalError(f"m({i},{j}) = {m[i, j]}, must be >= 2")
    return CoxeterMatrix(m)


def components(matrix: CoxeterMatrix) -> list[IrreducibleComponent]:
    """Connected components of the diagram (edges where m(s,t) != 2).

    Components are listed by least generator index; together they
    partition the generator set.
    """
    n = matrix.rank
    seen = [False] * n
    result = []
    for start in range(n):
        if seen[start]:
            continue
        stack = [start]
        seen[start] = True
        comp = []
        while stack:
            s = stack.pop()
            comp.append(s)
            for t in range(n):
                if not seen[t] and matrix.entries[s, t] != 2:
                    seen[t] = True
                    stack.append(t)
        comp.sort()
        result.append(
            IrreducibleComponent(tuple(comp), matrix.submatrix(comp))
        )
    return result


def gram(matrix: CoxeterMatrix) -> np.ndarray:
    """Cosine form B(s,t) = -cos(pi / m(s,t)), with -1 on infinite bonds."""
    m = matrix.entries
    b = np.where(m == INFINITE_BOND, -1.0, -np.cos(np.pi / np.where(m == 0, 1, m)))
    b[m == 2] = 0.0
    return b


def signature(gram_matrix: np.ndarray, tol: float = 1e-9) -> tuple[int, int, int]:
    """Eigenvalue sign counts (n_plus, n_zero, n_minus); |lam| <= tol counts as zero."""
    eigenvalues = np.linalg.eigvalsh(np.asarray(gram_matrix, dtype=float))
    n_zero = int(np.count_nonzero(np.abs(eigenvalues) <= tol))
    n_plus = int(np.count_nonzero(eigenvalues > tol))
    n_minus = int(np.count_nonzero(eigenvalues < -tol))
    return n_plus, n_zero, n_minus


def direct_sum(*matrices: CoxeterMatrix) -> CoxeterMatrix:
    """Block join: m = 2 between blocks, so the factors commute."""
    ranks = [m.rank for m in matrices]
    n = sum(ranks)
    out = np.full((n, n), 2, dtype=np.int64)
    offset = 0
    for m in matrices:
        k = m.rank
        out[offset : offset + k, offset : offset + k] = m.entries
        offset += k
    return CoxeterMatrix(out)
