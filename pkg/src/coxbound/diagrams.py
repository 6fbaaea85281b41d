"""Irreducible diagram templates: recognition and construction.

Recognition is exact combinatorics on the labeled diagram (edges wherever
m(s,t) != 2), matched up to relabeling against the finite and affine
tables.  Anything matching neither table is indefinite.  Rank-2 names are
normalized to the dihedral family, so a bond of 3 reports I2(3) rather
than A2 and a bond of 4 reports I2(4) rather than B2.

Affine names are written with a trailing tilde: ``A~2``, ``C~2``, ``G~2``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .coxeter import INFINITE_BOND, CoxeterMatrix


class Kind(Enum):
    FINITE = "finite"
    AFFINE = "affine"
    INDEFINITE = "indefinite"


@dataclass(frozen=True)
class TypeLabel:
    kind: Kind
    name: str | None = None

    def __str__(self) -> str:
        return self.name if self.name is not None else "indefinite"


INDEFINITE = TypeLabel(Kind.INDEFINITE)


def _finite(name: str) -> TypeLabel:
    return TypeLabel(Kind.FINITE, name)


def _affine(name: str) -> TypeLabel:
    return TypeLabel(Kind.AFFINE, name)


# ---------------------------------------------------------------------------
# Recognition


def _edges(matrix: CoxeterMatrix) -> dict[tuple[int, int], int]:
    n = matrix.rank
    out = {}
    for i in range(n):
        for j in range(i + 1, n):
            m = matrix.bond(i, j)
            if m != 2:
                out[(i, j)] = m
    return out


def _arm_lengths(adj: list[list[int]], branch: int) -> list[int] | None:
    """Arm lengths of a tree with a single branch vertex, or None if a
    neighbor chain branches again."""
    arms = []
    for first in adj[branch]:
        length = 1
        prev, cur = branch, first
        while len(adj[cur]) == 2:
            nxt = adj[cur][0] if adj[cur][0] != prev else adj[cur][1]
            prev, cur = cur, nxt
            length += 1
        if len(adj[cur]) != 1:
            return None
        arms.append(length)
    return sorted(arms)


def identify(matrix: CoxeterMatrix) -> TypeLabel:
    """Template match a connected diagram against the finite and affine tables."""
    n = matrix.rank
    edges = _edges(matrix)
    labels = sorted(edges.values())

    if n == 1:
        return _finite("A1")
    if n == 2:
        m = labels[0]
        return _affine("A~1") if m == INFINITE_BOND else _finite(f"I2({m})")
    if INFINITE_BOND in labels:
        return INDEFINITE

    adj: list[list[int]] = [[] for _ in range(n)]
    for (i, j) in edges:
        adj[i].append(j)
        adj[j].append(i)
    degrees = sorted(len(a) for a in adj)
    all_threes = all(m == 3 for m in labels)

    if len(edges) >= n:
        # connected with a cycle: only the (n-1)-cycle of 3-bonds survives
        if len(edges) == n and degrees == [2] * n and all_threes:
            return _affine(f"A~{n - 1}")
        return INDEFINITE

    # tree cases
    if degrees[-1] >= 4:
        if n == 5 and degrees == [1, 1, 1, 1, 4] and all_threes:
            return _affine("D~4")
        return INDEFINITE

    branch_vertices = [v for v in range(n) if len(adj[v]) == 3]

    if len(branch_vertices) >= 3:
        return INDEFINITE

    if len(branch_vertices) == 2:
        # forks at both ends of a path: D~(n-1); every leaf hangs directly
        # off a branch vertex and all bonds are 3
        if not all_threes:
            return INDEFINITE
        leaves = [v for v in range(n) if len(adj[v]) == 1]
        if len(leaves) == 4 and all(
            any(u in branch_vertices for u in adj[v]) for v in leaves
        ):
            return _affine(f"D~{n - 1}")
        return INDEFINITE

    if len(branch_vertices) == 1:
        branch = branch_vertices[0]
        arms = _arm_lengths(adj, branch)
        if arms is None:
            return INDEFINITE
        if all_threes:
            if arms[:2] == [1, 1]:
                return _finite(f"D{n}")
            finite_t = {(1, 2, 2): "E6", (1, 2, 3): "E7", (1, 2, 4): "E8"}
            affine_t = {(2, 2, 2): "E~6", (1, 3, 3): "E~7", (1, 2, 5): "E~8"}
            key = tuple(arms)
            if key in finite_t:
                return _finite(finite_t[key])
            if key in affine_t:
                return _affine(affine_t[key])
            return INDEFINITE
        # one 4-bond on the pendant edge of the long arm of a (1,1,k) fork: B~(n-1)
        if labels.count(4) == 1 and labels.count(3) == len(labels) - 1:
            if arms[:2] == [1, 1]:
                (i, j) = next(e for e, m in edges.items() if m == 4)
                deg = {v: len(adj[v]) for v in range(n)}
                far = i if deg[i] == 1 else j
                near = j if far == i else i
                # the 4-bond leaf must close the long arm, so its other end
                # is the branch vertex only when every arm has length 1
                if deg[far] == 1 and (near != branch or arms == [1, 1, 1]):
                    return _affine(f"B~{n - 1}")
        return INDEFINITE

    # path: read bond labels end to end, orientation-free
    ends = [v for v in range(n) if len(adj[v]) == 1]
    prev, cur = None, ends[0]
    seq = []
    while True:
        nxts = [u for u in adj[cur] if u != prev]
        if not nxts:
            break
        nxt = nxts[0]
        seq.append(matrix.bond(cur, nxt))
        prev, cur = cur, nxt
    seq = min(tuple(seq), tuple(reversed(seq)))

    threes = (3,) * (n - 1)
    if seq == threes:
        return _finite(f"A{n}")
    if seq == (3,) * (n - 2) + (4,):
        return _finite(f"B{n}")
    if n == 4 and seq == (3, 4, 3):
        return _finite("F4")
    if n == 3 and seq == (3, 5):
        return _finite("H3")
    if n == 4 and seq == (3, 3, 5):
        return _finite("H4")
    if seq == (4,) + (3,) * (n - 3) + (4,):
        return _affine(f"C~{n - 1}")
    if n == 5 and seq == (3, 3, 4, 3):
        return _affine("F~4")
    if n == 3 and seq == (3, 6):
        return _affine("G~2")
    return INDEFINITE


# ---------------------------------------------------------------------------
# Construction


def _path_matrix(bonds: list[int]) -> CoxeterMatrix:
    n = len(bonds) + 1
    m = np.full((n, n), 2, dtype=np.int64)
    np.fill_diagonal(m, 1)
    for i, b in enumerate(bonds):
        m[i, i + 1] = m[i + 1, i] = b
    return CoxeterMatrix(m)


def _tree_matrix(n: int, edges: list[tuple[int, int, int]]) -> CoxeterMatrix:
    m = np.full((n, n), 2, dtype=np.int64)
    np.fill_diagonal(m, 1)
    for i, j, b in edges:
        m[i, j] = m[j, i] = b
    return CoxeterMatrix(m)


def _cycle_matrix(n: int) -> CoxeterMatrix:
    edges = [(i, (i + 1) % n, 3) for i in range(n)]
    return _tree_matrix(n, edges)


def _fork_path(n: int, tail_bond: int) -> CoxeterMatrix:
    # vertices 0,1 forked onto 2, then a path 2..n-1 whose last bond is tail_bond
    edges = [(0, 2, 3), (1, 2, 3)]
    edges += [(i, i + 1, 3) for i in range(2, n - 2)]
    if n >= 4:
        edges.append((n - 2, n - 1, tail_bond))
    return _tree_matrix(n, edges)


def _double_fork(n: int) -> CoxeterMatrix:
    edges = [(0, 2, 3), (1, 2, 3), (n - 2, n - 3, 3), (n - 1, n - 3, 3)]
    edges += [(i, i + 1, 3) for i in range(2, n - 3)]
    return _tree_matrix(n, edges)


_NAME_RE = re.compile(r"^([A-H])(~?)(\d+)$")
_I2_RE = re.compile(r"^I2\((\d+|inf)\)$")


def diagram_matrix(name: str) -> CoxeterMatrix:
    """Bond matrix of a named irreducible diagram.

    Finite names: ``A1``..., ``B2``..., ``D4``..., ``E6``-``E8``, ``F4``,
    ``G2``, ``H3``, ``H4``, ``I2(m)`` with ``I2(inf)`` for the infinite
    dihedral diagram.  Affine names take a tilde: ``A~1``, ``A~2``...,
    ``B~3``..., ``C~2``..., ``D~4``..., ``E~6``-``E~8``, ``F~4``, ``G~2``.
    """
    name = name.strip()
    i2 = _I2_RE.match(name)
    if i2:
        m = INFINITE_BOND if i2.group(1) == "inf" else int(i2.group(1))
        if m != INFINITE_BOND and m < 3:
            raise ValueError(f"I2({m}) is not irreducible")
        return _path_matrix([m])
    match = _NAME_RE.match(name)
    if not match:
        raise ValueError(f"unknown diagram name {name!r}")
    family, tilde, rank_str = match.groups()
    k = int(rank_str)
    if not tilde:
        if family == "A" and k >= 1:
            return _path_matrix([3] * (k - 1))
        if family == "B" and k >= 2:
            return _path_matrix([3] * (k - 2) + [4])
        if family == "D" and k >= 4:
            return _fork_path(k, 3)
        if family == "E" and k in (6, 7, 8):
            # path 0..k-2 with vertex k-1 hung off vertex 2
            edges = [(i, i + 1, 3) for i in range(k - 2)]
            edges.append((2, k - 1, 3))
            return _tree_matrix(k, edges)
        if family == "F" and k == 4:
            return _path_matrix([3, 4, 3])
        if family == "G" and k == 2:
            return _path_matrix([6])
        if family == "H" and k in (3, 4):
            return _path_matrix([5] + [3] * (k - 2))
    else:
        if family == "A" and k == 1:
            return _path_matrix([INFINITE_BOND])
        if family == "A" and k >= 2:
            return _cycle_matrix(k + 1)
        if family == "B" and k >= 3:
            return _fork_path(k + 1, 4)
        if family == "C" and k >= 2:
            return _path_matrix([4] + [3] * (k - 2) + [4])
        if family == "D" and k >= 4:
            return _double_fork(k + 1)
        if family == "E" and k in (6, 7, 8):
            finite = diagram_matrix(f"E{k}").entries.copy()
            n = k + 1
            m = np.full((n, n), 2, dtype=np.int64)
            m[:k, :k] = finite
            np.fill_diagonal(m, 1)
            attach = {6: k - 1, 7: 0, 8: k - 2}[k]
            m[k, attach] = m[attach, k] = 3
            return CoxeterMatrix(m)
        if family == "F" and k == 4:
            return _path_matrix([3, 3, 4, 3])
        if family == "G" and k == 2:
            return _path_matrix([6, 3])
    raise ValueError(f"unknown diagram name {name!r}")


def finite_table(max_rank: int) -> list[tuple[str, CoxeterMatrix]]:
    """All irreducible finite diagrams of rank <= max_rank, keyed by their
    normalized names (rank 2 lives in the I2 family, sampled to bond 12)."""
    out = [("A1", diagram_matrix("A1"))]
    out += [(f"A{n}", diagram_matrix(f"A{n}")) for n in range(3, max_rank + 1)]
    if max_rank >= 2:
        out += [(f"I2({m})", diagram_matrix(f"I2({m})")) for m in range(3, 13)]
    out += [(f"B{n}", diagram_matrix(f"B{n}")) for n in range(3, max_rank + 1)]
    out += [(f"D{n}", diagram_matrix(f"D{n}")) for n in range(4, max_rank + 1)]
    out += [
        (f"E{n}", diagram_matrix(f"E{n}")) for n in (6, 7, 8) if n <= max_rank
    ]
    if max_rank >= 4:
        out.append(("F4", diagram_matrix("F4")))
    if max_rank >= 3:
        out.append(("H3", diagram_matrix("H3")))
    if max_rank >= 4:
        out.append(("H4", diagram_matrix("H4")))
    return out


def affine_table(max_rank: int) -> list[tuple[str, CoxeterMatrix]]:
    """All irreducible affine diagrams of rank <= max_rank (rank = k + 1 for X~k)."""
    out = []
    if max_rank >= 2:
        out.append(("A~1", diagram_matrix("A~1")))
    out += [(f"A~{k}", diagram_matrix(f"A~{k}")) for k in range(2, max_rank)]
    out += [(f"B~{k}", diagram_matrix(f"B~{k}")) for k in range(3, max_rank)]
    out += [(f"C~{k}", diagram_matrix(f"C~{k}")) for k in range(2, max_rank)]
    out += [(f"D~{k}", diagram_matrix(f"D~{k}")) for k in range(4, max_rank)]
    out += [(f"E~{k}", diagram_matrix(f"E~{k}")) for k in (6, 7, 8) if k < max_rank]
    if max_rank >= 5:
        out.append(("F~4", diagram_matrix("F~4")))
    if max_rank >= 3:
        out.append(("G~2", diagram_matrix("G~2")))
    return out


