"""Exact word problem by string rewriting, used as a test oracle.

Words over the generators are rewritten with the defining relations only:
``ss`` deletes, and for a finite bond m(s,t) = m the alternating block
``stst...`` of length m rewrites to ``tsts...``.  A word is reduced once
no deletion applies anywhere in its rewrite orbit, and the canonical form
is the lexicographically least word of that orbit.  Equality of canonical
forms is exact group equality, with no floating point anywhere.

The canonical form is the same word the numeric engine calls the ShortLex
normal form, which is what makes cross-checking the two paths meaningful.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .coxeter import INFINITE_BOND, CoxeterMatrix


class TooLarge(Exception):
    """Group closure exceeded the element cap."""


def _braid_neighbors(word: tuple[int, ...], matrix: CoxeterMatrix):
    """Words obtained by one braid replacement stst... -> tsts..."""
    n = len(word)
    for i in range(n - 1):
        s, t = word[i], word[i + 1]
        if s == t:
            continue
        m = matrix.bond(s, t)
        if m == INFINITE_BOND or i + m > n:
            continue
        block = word[i : i + m]
        expected = tuple(s if k % 2 == 0 else t for k in range(m))
        if block == expected:
            replacement = tuple(t if k % 2 == 0 else s for k in range(m))
            yield word[:i] + replacement + word[i + m :]


def _orbit_or_shorter(word, matrix):
    """Braid orbit of ``word``; stops early with a shortened word when any
    orbit member carries an adjacent equal pair."""
    orbit = {word}
    queue = deque([word])
    while queue:
        u = queue.popleft()
        for i in range(len(u) - 1):
            if u[i] == u[i + 1]:
                return orbit, u[:i] + u[i + 2 :]
        for v in _braid_neighbors(u, matrix):
            if v not in orbit:
                orbit.add(v)
                queue.append(v)
    return orbit, None


def canonical_word(
    word, matrix: CoxeterMatrix, cache: dict | None = None
) -> tuple[int, ...]:
    """Lexicographically least reduced word equal to ``word``."""
    w = tuple(word)
    trail: set = set()
    while True:
        if cache is not None and w in cache:
            result = cache[w]
            break
        orbit, shorter = _orbit_or_shorter(w, matrix)
        trail |= orbit
        if shorter is None:
            result = min(orbit)
            break
        w = shorter
    if cache is not None:
        for u in trail:
            cache[u] = result
    return result


@dataclass
class GroupTable:
    """Closure of the generators: canonical words and the Cayley edges."""

    matrix: CoxeterMatrix
    words: list[tuple[int, ...]]
    index: dict[tuple[int, ...], int]
    right_by_generator: list[list[int]]
    _cache: dict = field(repr=False, default_factory=dict)

    @property
    def order(self) -> int:
        return len(self.words)

    def element(self, word) -> int:
        """Index of the element a word represents."""
        return self.index[canonical_word(word, self.matrix, self._cache)]

    def multiply(self, i: int, j: int) -> int:
        """Index of element i * element j, by folding j's word through the
        generator table."""
        for s in self.words[j]:
            i = self.right_by_generator[i][s]
        return i

    def inverse(self, i: int) -> int:
        k = 0
        for s in reversed(self.words[i]):
            k = self.right_by_generator[k][s]
        return k


def brute_force_oracle(matrix: CoxeterMatrix, cap: int = 2000) -> GroupTable:
    """Close the generators under multiplication, entirely combinatorially.

    Raises ``TooLarge`` as soon as more than ``cap`` distinct elements
    appear, which is the expected outcome for infinite groups.
    """
    cache: dict = {}
    words: list[tuple[int, ...]] = [()]
    index = {(): 0}
    right: list[list[int]] = []
    frontier = deque([0])
    rank = matrix.rank
    while frontier:
        i = frontier.popleft()
        row = []
        for s in range(rank):
            c = canonical_word(words[i] + (s,), matrix, cache)
            k = index.get(c)
            if k is None:
                if len(words) >= cap:
                    raise TooLarge(f"more than {cap} elements")
                k = len(words)
                index[c] = k
                words.append(c)
                frontier.append(k)
            row.append(k)
        right.append(row)
    return GroupTable(matrix, words, index, right, cache)
