"""Oriented paths (and trees) used as forbidden patterns.

An orientation of the path on ``n`` vertices is stored as a word of length
``n - 1`` over ``>`` and ``<``: letter ``i`` describes the edge between path
vertices ``i`` and ``i + 1``, ``>`` meaning the arc ``i -> i+1``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

from .digraph import Digraph, DigraphBuilder, components

FORWARD = ">"
BACKWARD = "<"
_FLIP = str.maketrans("<>", "><")
# Forward sorts before Backward.
_ORDER = str.maketrans("><", "01")


class PatternError(ValueError):
    pass


def _key(word: str) -> str:
    return word.translate(_ORDER)


@dataclass(frozen=True, order=False)
class PathPattern:
    word: str

    def __post_init__(self) -> None:
        if set(self.word) - {FORWARD, BACKWARD}:
            raise PatternError(f"pattern word {self.word!r} must use only '>' and '<'")

    @classmethod
    def parse(cls, text: str) -> "PathPattern":
        text = text.strip()
        if text in ("", ".", "-"):
            return cls("")
        return cls(text)

    def __str__(self) -> str:
        return self.word or "."

    @property
    def n(self) -> int:
        return len(self.word) + 1

    @property
    def length(self) -> int:
        return len(self.word)

    def traversed_backwards(self) -> "PathPattern":
        """The same digraph read from the other end."""
        return PathPattern(self.word[::-1].translate(_FLIP))

    def canonical(self) -> "PathPattern":
        other = self.traversed_backwards().word
        return PathPattern(min(self.word, other, key=_key))

    def is_self_mirror(self) -> bool:
        return self.traversed_backwards() == self

    def isomorphic(self, other: "PathPattern") -> bool:
        return self.canonical() == other.canonical()

    def sort_key(self) -> tuple[int, str]:
        return (self.n, _key(self.word))


# Named patterns.  The sink/source naming of V3 is used as in the 2-coloring
# gadget constructions: V3 has its middle vertex as a sink.
DIRECTED_EDGE = PathPattern(">")
P3 = PathPattern(">>")
V3 = PathPattern("><")
V3_SOURCE = PathPattern("<>")
P4 = PathPattern(">>>")
N4 = PathPattern("><>")
L4 = PathPattern(">><")
L4_REVERSED = PathPattern("<<>")


def enumerate_orientations(n: int) -> list[PathPattern]:
    if n < 1:
        raise PatternError("a path needs at least one vertex")
    seen = {PathPattern("".join(w)).canonical() for w in itertools.product("><", repeat=n - 1)}
    return sorted(seen, key=PathPattern.sort_key)


def lrem(p: PathPattern) -> PathPattern:
    """Deletes both end vertices of the path."""
    if p.n < 3:
        raise PatternError("lrem needs a path on at least 3 vertices")
    return PathPattern(p.word[1:-1])


def reverse_pattern(p: PathPattern) -> PathPattern:
    """Reverses every arc."""
    return PathPattern(p.word.translate(_FLIP))


def pattern_to_digraph(p: PathPattern) -> Digraph:
    b = DigraphBuilder()
    b.add_vertices(p.n)
    for i, c in enumerate(p.word):
        if c == FORWARD:
            b.add_arc(i, i + 1)
        else:
            b.add_arc(i + 1, i)
    return b.build()


@dataclass(frozen=True)
class TreePattern:
    """An oriented tree given as a digraph with a tree as underlying graph."""

    digraph: Digraph

    def __post_init__(self) -> None:
        d = self.digraph
        if d.n == 0 or len(d.arcs) != d.n - 1 or len(components(d)) != 1:
            raise PatternError("underlying graph is not a tree")

    @classmethod
    def from_path(cls, p: PathPattern) -> "TreePattern":
        return cls(pattern_to_digraph(p))

    @property
    def leaves(self) -> list[int]:
        d = self.digraph
        if d.n == 1:
            return [0]
        return [v for v in range(d.n) if len(d.nbrs[v]) == 1]

    def as_path(self) -> PathPattern | None:
        """The path word if the tree is a path, read from its smallest leaf."""
        d = self.digraph
        if any(len(s) > 2 for s in d.nbrs):
            return None
        if d.n == 1:
            return PathPattern("")
        start = min(self.leaves)
        word, prev, cur = [], None, start
        while True:
            nxt = [w for w in d.nbrs[cur] if w != prev]
            if not nxt:
                break
            w = nxt[0]
            word.append(FORWARD if d.has_arc(cur, w) else BACKWARD)
            prev, cur = cur, w
        return PathPattern("".join(word))

    def lrem(self) -> "TreePattern":
        from .digraph import induced_subdigraph

        keep = set(range(self.digraph.n)) - set(self.leaves)
        return TreePattern(induced_subdigraph(self.digraph, keep)[0])


class Verdict(enum.Enum):
    ALWAYS_COLORABLE = "always colorable"
    POLYNOMIAL_BIPARTITE = "polynomial: bipartiteness"
    TRIVIAL_SINGLETON = "trivial"
    NP_HARD = "NP-hard (even for acyclic planar inputs)"


def classify_problem(p: PathPattern, k: int) -> Verdict:
    """Complexity of deciding ``p``-free ``k``-colorability of planar digraphs."""
    if k <= 0:
        raise PatternError("k must be positive")
    if p.n == 1 or k == 1:
        return Verdict.TRIVIAL_SINGLETON
    if k >= 4:
        return Verdict.ALWAYS_COLORABLE
    if k == 2 and p.n == 2:
        return Verdict.POLYNOMIAL_BIPARTITE
    return Verdict.NP_HARD
