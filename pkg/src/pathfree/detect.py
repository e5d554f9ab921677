"""Induced copies of path patterns."""

from __future__ import annotations

import itertools
from typing import Sequence

from .digraph import Coloring, Digraph
from .patterns import FORWARD, PathPattern

InducedCopy = tuple[int, ...]

DEFAULT_BRUTE_BUDGET = 10**8


class BudgetExceeded(RuntimeError):
    """A search exceeded its configured work budget."""


def _keep(copy: InducedCopy, mirror: bool) -> bool:
    # A self-mirror pattern is found once from each end of the same vertex set.
    return not mirror or copy <= copy[::-1]


def enumerate_induced(d: Digraph, p: PathPattern, vertices: Sequence[int] | None = None) -> list[InducedCopy]:
    """Every induced copy of ``p`` in ``d``, one tuple per vertex set, sorted.

    ``vertices`` restricts the search to copies lying inside that set.
    """
    allowed = None if vertices is None else set(vertices)
    pool = range(d.n) if allowed is None else sorted(allowed)
    word = p.word
    mirror = p.is_self_mirror()
    out: list[InducedCopy] = []
    succ, pred, nbrs = d.succ, d.pred, d.nbrs

    path: list[int] = []
    on_path: set[int] = set()

    def extend(i: int) -> None:
        if i == len(word):
            t = tuple(path)
            if _keep(t, mirror):
                out.append(t)
            return
        cur = path[-1]
        step = succ[cur] if word[i] == FORWARD else pred[cur]
        for w in step:
            if w in on_path or (allowed is not None and w not in allowed):
                continue
            # w may touch only the current end of the path
            if any(x in on_path and x != cur for x in nbrs[w]):
                continue
            path.append(w)
            on_path.add(w)
            extend(i + 1)
            path.pop()
            on_path.discard(w)

    for v in pool:
        path.append(v)
        on_path.add(v)
        extend(0)
        path.pop()
        on_path.discard(v)
    out.sort()
    return out


def is_induced_copy(d: Digraph, p: PathPattern, copy: Sequence[int]) -> bool:
    """Checks the pattern arcs and every non-adjacency among the tuple directly."""
    if len(copy) != p.n or len(set(copy)) != p.n:
        return False
    for i, j in itertools.combinations(range(p.n), 2):
        u, v = copy[i], copy[j]
        if j == i + 1:
            want = (u, v) if p.word[i] == FORWARD else (v, u)
            if not d.has_arc(*want) or d.has_arc(want[1], want[0]):
                return False
        elif d.adjacent(u, v):
            return False
    return True


def brute_enumerate_induced(d: Digraph, p: PathPattern, budget: int = DEFAULT_BRUTE_BUDGET) -> list[InducedCopy]:
    """Oracle: tests every ordered tuple of distinct vertices."""
    if p.n > d.n:
        return []
    if d.n**p.n > budget:
        raise BudgetExceeded(f"{d.n}^{p.n} tuples exceed the budget of {budget}")
    mirror = p.is_self_mirror()
    out = [t for t in itertools.permutations(range(d.n), p.n) if is_induced_copy(d, p, t) and _keep(t, mirror)]
    out.sort()
    return out


def _check_total(d: Digraph, c: Coloring) -> None:
    if len(c) != d.n:
        raise ValueError(f"coloring covers {len(c)} of {d.n} vertices")


def find_monochromatic(d: Digraph, c: Coloring, p: PathPattern) -> InducedCopy | None:
    """A copy of ``p`` inside one color class, or ``None`` if the coloring is ``p``-free."""
    _check_total(d, c)
    for cls in c.classes():
        if len(cls) < p.n:
            continue
        found = enumerate_induced(d, p, cls)
        if found:
            return found[0]
    return None
