"""Simple digraphs, colorings and rotation-system embeddings."""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class DigraphError(ValueError):
    """Raised when an operation would break the simple-digraph invariants."""


class EmbeddingError(ValueError):
    """Raised for a rotation system that does not match its digraph."""


@dataclass(frozen=True)
class Digraph:
    """An immutable simple digraph on vertices ``0..n-1``.

    ``labels`` maps names (ports, certificate vertices) to vertices.  ``rotation``
    is an optional cyclic neighbour order per vertex describing a drawing.
    """

    n: int
    arcs: tuple[tuple[int, int], ...]
    labels: Mapping[str, int] = field(default_factory=dict, compare=False)
    rotation: tuple[tuple[int, ...], ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        if self.n < 0:
            raise DigraphError("negative vertex count")
        arcs = tuple(sorted(set((int(u), int(v)) for u, v in self.arcs)))
        if len(arcs) != len(self.arcs):
            raise DigraphError("parallel arcs")
        present = set(arcs)
        for u, v in arcs:
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise DigraphError(f"arc ({u},{v}) has an endpoint out of range")
            if u == v:
                raise DigraphError(f"loop at {u}")
            if (v, u) in present:
                raise DigraphError(f"anti-parallel arcs between {u} and {v}")
        for name, v in self.labels.items():
            if not 0 <= v < self.n:
                raise DigraphError(f"label {name!r} points outside the digraph")
        object.__setattr__(self, "arcs", arcs)
        object.__setattr__(self, "labels", dict(self.labels))
        if self.rotation is not None:
            object.__setattr__(self, "rotation", tuple(tuple(r) for r in self.rotation))

    # adjacency -----------------------------------------------------------

    @cached_property
    def arc_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.arcs)

    @cached_property
    def succ(self) -> tuple[frozenset[int], ...]:
        out: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            out[u].add(v)
        return tuple(frozenset(s) for s in out)

    @cached_property
    def pred(self) -> tuple[frozenset[int], ...]:
        inc: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.arcs:
            inc[v].add(u)
        return tuple(frozenset(s) for s in inc)

    @cached_property
    def nbrs(self) -> tuple[frozenset[int], ...]:
        return tuple(s | p for s, p in zip(self.succ, self.pred))

    def has_arc(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set

    def adjacent(self, u: int, v: int) -> bool:
        return (u, v) in self.arc_set or (v, u) in self.arc_set

    def label(self, name: str) -> int:
        return self.labels[name]

    def with_rotation(self, rotation: Sequence[Sequence[int]] | None) -> "Digraph":
        return Digraph(self.n, self.arcs, self.labels, rotation)

    def with_labels(self, labels: Mapping[str, int]) -> "Digraph":
        return Digraph(self.n, self.arcs, labels, self.rotation)

    # serialization -------------------------------------------------------

    def to_json(self) -> dict:
        doc: dict = {"n": self.n, "arcs": [list(a) for a in self.arcs], "labels": dict(self.labels)}
        if self.rotation is not None:
            index = {}
            for i, (u, v) in enumerate(self.arcs):
                index[(u, v)] = index[(v, u)] = i
            doc["rotation"] = [[index[(v, w)] for w in rot] for v, rot in enumerate(self.rotation)]
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "Digraph":
        n = doc["n"]
        arcs = [tuple(a) for a in doc["arcs"]]
        rotation = None
        if doc.get("rotation") is not None:
            sorted_arcs = sorted(set(arcs))
            rotation = []
            for v, idxs in enumerate(doc["rotation"]):
                order = []
                for i in idxs:
                    a, b = sorted_arcs[i]
                    order.append(b if a == v else a)
                rotation.append(order)
        return cls(n, tuple(arcs), doc.get("labels", {}), rotation)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Digraph":
        return cls.from_json(json.loads(text))


class DigraphBuilder:
    """Mutable accumulator used by all constructions; ``build()`` freezes it."""

    def __init__(self) -> None:
        self.n = 0
        self._arcs: set[tuple[int, int]] = set()
        self.labels: dict[str, int] = {}

    def add_vertex(self, label: str | None = None) -> int:
        v = self.n
        self.n += 1
        if label is not None:
            self.set_label(label, v)
        return v

    def add_vertices(self, count: int) -> list[int]:
        return [self.add_vertex() for _ in range(count)]

    def set_label(self, label: str, v: int) -> None:
        if label in self.labels and self.labels[label] != v:
            raise DigraphError(f"duplicate label {label!r}")
        self.labels[label] = v

    def add_arc(self, u: int, v: int) -> None:
        if u == v:
            raise DigraphError(f"loop at {u}")
        if (v, u) in self._arcs:
            raise DigraphError(f"anti-parallel arc ({u},{v}) rejected")
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise DigraphError(f"arc ({u},{v}) out of range")
        self._arcs.add((u, v))

    def add_digraph(self, d: Digraph, prefix: str | None = None) -> int:
        """Copy ``d`` in disjointly; returns the index offset of its vertices."""
        offset = self.n
        self.n += d.n
        for u, v in d.arcs:
            self._arcs.add((u + offset, v + offset))
        if prefix is not None:
            for name, v in d.labels.items():
                self.set_label(f"{prefix}{name}", v + offset)
        return offset

    def build(self) -> Digraph:
        return Digraph(self.n, tuple(self._arcs), dict(self.labels))


@dataclass(frozen=True)
class Coloring:
    k: int
    colors: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "colors", tuple(self.colors))
        for c in self.colors:
            if not 0 <= c < self.k:
                raise ValueError(f"color {c} outside 0..{self.k - 1}")

    def __getitem__(self, v: int) -> int:
        return self.colors[v]

    def __len__(self) -> int:
        return len(self.colors)

    def classes(self) -> list[list[int]]:
        out: list[list[int]] = [[] for _ in range(self.k)]
        for v, c in enumerate(self.colors):
            out[c].append(v)
        return out


# operations ------------------------------------------------------------------


def topological_order(d: Digraph) -> list[int] | None:
    indeg = [len(p) for p in d.pred]
    queue = deque(v for v in range(d.n) if indeg[v] == 0)
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        for w in sorted(d.succ[v]):
            indeg[w] -= 1
            if indeg[w] == 0:
                queue.append(w)
    return order if len(order) == d.n else None


def is_acyclic(d: Digraph) -> bool:
    return topological_order(d) is not None


def underlying_graph(d: Digraph) -> frozenset[frozenset[int]]:
    return frozenset(frozenset(a) for a in d.arcs)


def reverse(d: Digraph) -> Digraph:
    return Digraph(d.n, tuple((v, u) for u, v in d.arcs), d.labels, d.rotation)


def induced_subdigraph(d: Digraph, vertices: Iterable[int]) -> tuple[Digraph, dict[int, int]]:
    """Returns the induced subdigraph and the map old vertex -> new vertex."""
    chosen = sorted(set(vertices))
    for v in chosen:
        if not 0 <= v < d.n:
            raise DigraphError(f"vertex {v} out of range")
    relabel = {v: i for i, v in enumerate(chosen)}
    arcs = tuple((relabel[u], relabel[v]) for u, v in d.arcs if u in relabel and v in relabel)
    labels = {name: relabel[v] for name, v in d.labels.items() if v in relabel}
    return Digraph(len(chosen), arcs, labels), relabel


def disjoint_union(d1: Digraph, d2: Digraph) -> tuple[Digraph, int]:
    b = DigraphBuilder()
    b.add_digraph(d1)
    offset = b.add_digraph(d2)
    labels = dict(d1.labels)
    labels.update({name: v + offset for name, v in d2.labels.items() if name not in labels})
    rotation = None
    if d1.rotation is not None and d2.rotation is not None:
        rotation = list(d1.rotation) + [tuple(w + offset for w in r) for r in d2.rotation]
    return Digraph(b.n, tuple(b._arcs), labels, rotation), offset


def components(d: Digraph) -> list[list[int]]:
    seen = [False] * d.n
    comps = []
    for s in range(d.n):
        if seen[s]:
            continue
        seen[s] = True
        comp, stack = [], [s]
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in d.nbrs[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def bipartition(d: Digraph) -> list[int] | None:
    """A proper 2-coloring of the underlying graph, or ``None`` if there is an odd cycle."""
    side = [-1] * d.n
    for s in range(d.n):
        if side[s] != -1:
            continue
        side[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for w in d.nbrs[v]:
                if side[w] == -1:
                    side[w] = 1 - side[v]
                    queue.append(w)
                elif side[w] == side[v]:
                    return None
    return side


def is_bipartite(d: Digraph) -> bool:
    return bipartition(d) is not None


# embeddings -------------------------------------------------------------------


def count_faces(d: Digraph, rotation: Sequence[Sequence[int]]) -> list[tuple[int, int, int]]:
    """Per component ``(V, E, F)`` where faces are traced dart by dart.

    The face following dart ``(u, v)`` continues with ``(v, w)`` where ``w`` is
    the successor of ``u`` in the cyclic order at ``v``.
    """
    if len(rotation) != d.n:
        raise EmbeddingError("rotation must list every vertex")
    position: list[dict[int, int]] = []
    for v, rot in enumerate(rotation):
        if sorted(rot) != sorted(d.nbrs[v]) or len(set(rot)) != len(rot):
            raise EmbeddingError(f"rotation at {v} does not list each incident edge exactly once")
        position.append({w: i for i, w in enumerate(rot)})
    comp_of = [0] * d.n
    comps = components(d)
    for ci, comp in enumerate(comps):
        for v in comp:
            comp_of[v] = ci
    faces = [0] * len(comps)
    seen: set[tuple[int, int]] = set()
    for u in range(d.n):
        for v in rotation[u]:
            if (u, v) in seen:
                continue
            faces[comp_of[u]] += 1
            a, b = u, v
            while (a, b) not in seen:
                seen.add((a, b))
                rot = rotation[b]
                a, b = b, rot[(position[b][a] + 1) % len(rot)]
    out = []
    for ci, comp in enumerate(comps):
        edges = sum(len(d.nbrs[v]) for v in comp) // 2
        out.append((len(comp), edges, faces[ci] if edges else 1))
    return out


def verify_embedding(d: Digraph, rotation: Sequence[Sequence[int]] | None = None) -> bool:
    """True iff the rotation system is planar: ``V - E + F == 2`` for every component."""
    rotation = d.rotation if rotation is None else rotation
    if rotation is None:
        raise EmbeddingError("no rotation system attached")
    return all(v - e + f == 2 for v, e, f in count_faces(d, rotation))


def planar_rotation(d: Digraph) -> tuple[tuple[int, ...], ...] | None:
    """A planar rotation system for ``d`` or ``None`` if ``d`` is not planar."""
    import networkx as nx

    g = nx.Graph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs)
    ok, emb = nx.check_planarity(g)
    if not ok:
        return None
    return tuple(tuple(emb.neighbors_cw_order(v)) if d.nbrs[v] else () for v in range(d.n))


def embedded(d: Digraph) -> Digraph:
    """``d`` with a freshly computed planar rotation; raises if none exists."""
    rot = planar_rotation(d)
    if rot is None:
        raise EmbeddingError("construction is not planar")
    return d.with_rotation(rot)


# export ----------------------------------------------------------------------


def to_dot(d: Digraph, name: str = "D", coloring: Coloring | None = None) -> str:
    palette = ["lightblue", "salmon", "palegreen", "khaki", "plum", "lightgray"]
    names = {v: label for label, v in d.labels.items()}
    lines = [f"digraph {name} {{"]
    for v in range(d.n):
        attrs = []
        if v in names:
            attrs += [f'label="{names[v]}"', "shape=box", "style=bold"]
        if coloring is not None:
            attrs += ["style=filled", f'fillcolor="{palette[coloring[v] % len(palette)]}"']
        lines.append(f"  {v}" + (f" [{', '.join(attrs)}]" if attrs else "") + ";")
    for u, v in d.arcs:
        lines.append(f"  {u} -> {v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def from_dot(text: str) -> Digraph:
    """Reads back the subset of DOT written by :func:`to_dot`."""
    import re

    n = 0
    arcs = []
    labels = {}
    for line in text.splitlines():
        line = line.strip().rstrip(";")
        m = re.fullmatch(r"(\d+)\s*->\s*(\d+)", line)
        if m:
            arcs.append((int(m.group(1)), int(m.group(2))))
            continue
        m = re.fullmatch(r"(\d+)(?:\s*\[(.*)\])?", line)
        if m:
            v = int(m.group(1))
            n = max(n, v + 1)
            lab = re.search(r'label="([^"]*)"', m.group(2) or "")
            if lab:
                labels[lab.group(1)] = v
    return Digraph(n, tuple(arcs), labels)
