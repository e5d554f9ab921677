"""Gadgets, fans and towers together with machine-checked contracts.

A gadget is a small acyclic planar digraph with named boundary ports.  Its
contract states what every pattern-free coloring does on the ports and which
port colorings extend with all port-incident edges bichromatic; the latter is
what lets gadgets be glued at their ports without creating new copies.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field, replace
from typing import Callable, Iterable, Mapping, Sequence

import networkx as nx
import numpy as np

from .detect import BudgetExceeded, enumerate_induced
from .digraph import (
    Coloring,
    Digraph,
    DigraphBuilder,
    embedded,
    is_acyclic,
    planar_rotation,
    reverse,
    to_dot,
    verify_embedding,
)
from .patterns import FORWARD, L4, P3, V3, PathPattern, pattern_to_digraph, reverse_pattern
from .solve import solve_exact

EXHAUSTIVE_LIMIT = 1 << 20


@dataclass(frozen=True)
class GadgetContract:
    k: int
    pattern: PathPattern
    forced_equalities: tuple[tuple[str, str], ...] = ()
    forced_inequalities: tuple[tuple[str, str], ...] = ()
    boundary_extension: bool = False
    # ports (t', x', y', z'): extends iff c(t') is among the other three colors
    clause_rule: tuple[str, str, str, str] | None = None
    # no pattern-free k-coloring at all
    uncolorable: bool = False
    # ports that must lie on one face in this cyclic order
    outer_ports: tuple[str, ...] = ()

    def to_json(self) -> dict:
        return {
            "k": self.k,
            "pattern": self.pattern.word,
            "forced_equalities": [list(p) for p in self.forced_equalities],
            "forced_inequalities": [list(p) for p in self.forced_inequalities],
            "boundary_extension": self.boundary_extension,
            "clause_rule": list(self.clause_rule) if self.clause_rule else None,
            "uncolorable": self.uncolorable,
            "outer_ports": list(self.outer_ports),
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "GadgetContract":
        return cls(
            k=doc["k"],
            pattern=PathPattern(doc["pattern"]),
            forced_equalities=tuple(tuple(p) for p in doc.get("forced_equalities", ())),
            forced_inequalities=tuple(tuple(p) for p in doc.get("forced_inequalities", ())),
            boundary_extension=doc.get("boundary_extension", False),
            clause_rule=tuple(doc["clause_rule"]) if doc.get("clause_rule") else None,
            uncolorable=doc.get("uncolorable", False),
            outer_ports=tuple(doc.get("outer_ports", ())),
        )


@dataclass(frozen=True)
class Gadget:
    name: str
    digraph: Digraph
    ports: Mapping[str, int]
    contract: GadgetContract

    def __post_init__(self) -> None:
        if len(set(self.ports.values())) != len(self.ports):
            raise ValueError(f"{self.name}: ports must be distinct vertices")

    def port(self, name: str) -> int:
        return self.ports[name]

    def to_json(self, report: "ContractReport | None" = None) -> dict:
        doc = {
            "name": self.name,
            "digraph": self.digraph.to_json(),
            "ports": dict(self.ports),
            "contract": self.contract.to_json(),
        }
        if report is not None:
            doc["report"] = report.to_json()
        return doc

    @classmethod
    def from_json(cls, doc: Mapping) -> "Gadget":
        return cls(doc["name"], Digraph.from_json(doc["digraph"]), dict(doc["ports"]), GadgetContract.from_json(doc["contract"]))

    def to_dot(self) -> str:
        return to_dot(self.digraph.with_labels(self.ports), name=self.name.replace("-", "_"))


# construction helpers ------------------------------------------------------------


class _Net(DigraphBuilder):
    """Builder with pattern pendants and port-identified gadget copies."""

    def pendant(self, v: int, p: PathPattern, inward: bool) -> list[int]:
        """A fresh copy of ``p`` joined to ``v`` by arcs all into ``v`` or all out of it."""
        off = self.add_digraph(pattern_to_digraph(p))
        copy = list(range(off, off + p.n))
        for u in copy:
            self.add_arc(u, v) if inward else self.add_arc(v, u)
        return copy

    def attach(self, g: "Gadget", at: Mapping[str, int]) -> dict[int, int]:
        """Copies ``g`` in, identifying the named ports with existing vertices."""
        fixed = {g.ports[name]: v for name, v in at.items()}
        where = {}
        for u in range(g.digraph.n):
            where[u] = fixed[u] if u in fixed else self.add_vertex()
        for u, v in g.digraph.arcs:
            self.add_arc(where[u], where[v])
        return where


def _finish(name: str, b: DigraphBuilder, ports: Mapping[str, int], contract: GadgetContract, renumber: bool = True) -> Gadget:
    d = b.build()
    if renumber:
        # reverse Cuthill-McKee keeps neighbors close in index, so index-order
        # search (DPLL branches on the lowest variable) stays local
        g = nx.Graph(d.arcs)
        g.add_nodes_from(range(d.n))
        pos = {v: i for i, v in enumerate(nx.utils.reverse_cuthill_mckee_ordering(g))}
        d = Digraph(d.n, tuple(sorted((pos[u], pos[v]) for u, v in d.arcs)))
        ports = {name: pos[v] for name, v in ports.items()}
    d = embedded(d.with_labels(dict(ports)))
    return Gadget(name, d, dict(ports), contract)


def mirror(g: Gadget) -> Gadget:
    """All arcs reversed; the contract is restated for the reversed pattern."""
    c = replace(g.contract, pattern=reverse_pattern(g.contract.pattern))
    return Gadget(g.name + "_mirror", reverse(g.digraph), dict(g.ports), c)


# fans and towers --------------------------------------------------------------------


def _spoke(b: DigraphBuilder, root: int, leaf: int, letter: str) -> None:
    if letter == FORWARD:
        b.add_arc(root, leaf)
    else:
        b.add_arc(leaf, root)


def _add_fan(b: DigraphBuilder, p: PathPattern, root: int, spoke_letter: str) -> list[int]:
    path = b.add_vertices(p.n)
    for i, letter in enumerate(p.word):
        _spoke(b, path[i], path[i + 1], letter)
    for v in path:
        _spoke(b, root, v, spoke_letter)
    return path


def build_fan(p: PathPattern) -> Gadget:
    """A copy of the path ``p`` plus a root joined to every path vertex.

    Spokes follow the first letter of ``p``, as at the top level of a tower.
    """
    if p.length < 1:
        raise ValueError("a fan needs a pattern with at least one edge")
    b = DigraphBuilder()
    u = b.add_vertex()
    path = _add_fan(b, p, u, p.word[0])
    ports = {"u": u} | {f"v{i + 1}": v for i, v in enumerate(path)}
    return _finish(f"fan[{p}]", b, ports, GadgetContract(2, p), renumber=False)


def build_tower(p: PathPattern) -> Gadget:
    """Stacked fans: every vertex at depth ``d < len(p)`` roots a fan of its own.

    Spokes from depth ``d`` to depth ``d + 1`` follow letter ``d`` of ``p``,
    so each root-to-deepest-level path is an induced copy of ``p``.
    """
    if p.length < 1:
        raise ValueError("a tower needs a pattern with at least one edge")
    b = DigraphBuilder()
    u = b.add_vertex()
    level = [u]
    for depth in range(p.length):
        nxt = []
        for root in level:
            nxt += _add_fan(b, p, root, p.word[depth])
        level = nxt
    return _finish(f"tower[{p}]", b, {"u": u}, GadgetContract(2, p, uncolorable=True), renumber=False)


def tower_size(p: PathPattern) -> int:
    return sum(p.n**i for i in range(p.length + 1))


def tower_depths(p: PathPattern) -> list[int]:
    """Depth of every tower vertex, in construction order."""
    out = [0]
    level = 1
    for depth in range(1, p.length + 1):
        level *= p.n
        out += [depth] * level
    return out


def tower_root_paths(g: Gadget, p: PathPattern) -> list[tuple[int, ...]]:
    """Every path from the root to the deepest level that uses only spokes."""
    d = g.digraph
    depth = tower_depths(p)
    paths = [(g.port("u"),)]
    for lvl in range(1, p.length + 1):
        paths = [q + (w,) for q in paths for w in sorted(d.nbrs[q[-1]]) if depth[w] == lvl and _is_spoke(d, q[-1], w, p, lvl)]
    return paths


def _is_spoke(d: Digraph, root: int, w: int, p: PathPattern, lvl: int) -> bool:
    letter = p.word[lvl - 1]
    return d.has_arc(root, w) if letter == FORWARD else d.has_arc(w, root)


def tower_special_3coloring(p: PathPattern = PathPattern("<>"), g: Gadget | None = None) -> Coloring:
    """A pattern-free 3-coloring of the tower in which color 0 is used exactly once.

    Tries each vertex as the unique color-0 vertex in index order.
    """
    g = g or build_tower(p)
    d = g.digraph
    copies = enumerate_induced(d, p)
    for x0 in range(d.n):
        pins = {v: (0,) if v == x0 else (1, 2) for v in range(d.n)}
        res = solve_exact(d, p, 3, pinned=pins, copies=copies)
        if res.coloring is not None:
            return res.coloring
    raise AssertionError("no 3-coloring with a unique color-0 vertex exists; the tower construction is inconsistent")


# catalog ------------------------------------------------------------------------------


def _wire(kind: str, p: PathPattern) -> GadgetContract:
    pair = (("x", "y"),)
    if kind == "negator":
        return GadgetContract(2, p, forced_inequalities=pair, boundary_extension=True)
    return GadgetContract(2, p, forced_equalities=pair, boundary_extension=True)


def _crossover_contract(p: PathPattern) -> GadgetContract:
    return GadgetContract(
        2,
        p,
        forced_equalities=(("x", "x'"), ("y", "y'")),
        boundary_extension=True,
        outer_ports=("x", "y", "x'", "y'"),
    )


def _clause_contract(p: PathPattern) -> GadgetContract:
    names = ("t'", "x'", "y'", "z'")
    return GadgetContract(2, p, clause_rule=names, outer_ports=names)


def negator_p3() -> Gadget:
    # x -> x1 fans out over the vertical path v1 -> v2 -> v3, which fans into y1 -> y
    b = _Net()
    x, x1, v1, v2, v3, y1, y = b.add_vertices(7)
    for u, v in [(x, x1), (v1, v2), (v2, v3), (y1, y)]:
        b.add_arc(u, v)
    for v in (v1, v2, v3):
        b.add_arc(x1, v)
        b.add_arc(v, y1)
    return _finish("negator_p3", b, {"x": x, "y": y}, _wire("negator", P3))


def _double_negator(name: str, neg: Gadget) -> Gadget:
    # two negators sharing their y end; both point into the shared vertex
    b = _Net()
    x, m, y = b.add_vertices(3)
    b.attach(neg, {"x": x, "y": m})
    b.attach(neg, {"x": y, "y": m})
    return _finish(name, b, {"x": x, "y": y}, _wire("extender", neg.contract.pattern))


def extender_p3() -> Gadget:
    return _double_negator("extender_p3", negator_p3())


def clause_p3() -> Gadget:
    b = _Net()
    t, x, y, z, a, c = b.add_vertices(6)
    # x -> a -> y and z -> c -> y, with a -> t -> c joining the two middles
    for u, v in [(x, a), (a, y), (z, c), (c, y), (a, t), (t, c)]:
        b.add_arc(u, v)
    return _finish("clause_p3", b, {"t'": t, "x'": x, "y'": y, "z'": z}, _clause_contract(P3))


def negator_v3() -> Gadget:
    # triangle b -> a -> c, b -> c with a pattern pendant pointing into c
    b = _Net()
    x, y, a, w, c = b.add_vertices(5)
    for u, v in [(x, a), (y, c), (w, a), (a, c), (w, c)]:
        b.add_arc(u, v)
    b.pendant(c, V3, inward=True)
    return _finish("negator_v3", b, {"x": x, "y": y}, _wire("negator", V3))


def extender_v3() -> Gadget:
    b = _Net()
    x, y = b.add_vertices(2)
    _equality_wire(b, V3, x, y)
    return _finish("extender_v3", b, {"x": x, "y": y}, _wire("extender", V3))


def clause_v3() -> Gadget:
    b = _Net()
    t, x, y, z, a, c = b.add_vertices(6)
    for u, v in [(x, a), (y, a), (y, c), (z, c), (a, t), (c, t)]:
        b.add_arc(u, v)
    return _finish("clause_v3", b, {"t'": t, "x'": x, "y'": y, "z'": z}, _clause_contract(V3))


def _fan_into(b: _Net, p: PathPattern) -> int:
    """A copy of ``p`` whose vertices all point into a fresh root."""
    root = b.add_vertex()
    off = b.add_digraph(pattern_to_digraph(p))
    for v in range(off, off + p.n):
        b.add_arc(v, root)
    return root


def extender_l4() -> Gadget:
    # roots a -> c of two fans differ; z points into both, so the ports avoid z's color
    b = _Net()
    a = _fan_into(b, L4)
    c = _fan_into(b, L4)
    x, y, z = b.add_vertices(3)
    for u, v in [(a, c), (z, a), (z, c), (x, z), (y, z)]:
        b.add_arc(u, v)
    return _finish("extender_l4", b, {"x": x, "y": y}, _wire("extender", L4))


def negator_l4() -> Gadget:
    # a pattern copy x -> u -> w <- y whose middle vertices copy the far ends
    b = _Net()
    x, u, w, y = b.add_vertices(4)
    for s, t in [(x, u), (u, w), (y, w)]:
        b.add_arc(s, t)
    ext = extender_l4()
    b.attach(ext, {"x": y, "y": u})
    b.attach(ext, {"x": x, "y": w})
    return _finish("negator_l4", b, {"x": x, "y": y}, _wire("negator", L4))


def _equality_wire(b: _Net, p: PathPattern, s: int, t: int) -> None:
    if p == L4:
        b.attach(extender_l4(), {"x": s, "y": t})
        return
    # s -> m <- t, with a pendant that makes both arcs bichromatic
    m = b.add_vertex()
    b.add_arc(s, m)
    b.add_arc(t, m)
    b.pendant(m, p, inward=(p == V3))


def _crossover(name: str, p: PathPattern, neg: Gadget) -> Gadget:
    """Two hubs on the y route, each the middle of one constrained copy.

    Hub h1 sees (x, y, not x') and hub h2 sees (not x, y, x'); forbidding a
    monochromatic triple at both hubs leaves exactly x = x'.
    """
    b = _Net()
    x, y, x2, y2 = b.add_vertices(4)
    n1, n2, s1, s2, h1, h2 = b.add_vertices(6)
    for top, hub, bottom in [(n1, h1, s1), (n2, h2, s2)]:
        b.add_arc(top, hub)
        if p == V3:
            b.add_arc(bottom, hub)
        else:
            b.add_arc(hub, bottom)
        if p == L4:
            b.pendant(bottom, L4, inward=True)
    _equality_wire(b, p, x, n1)
    b.attach(neg, {"x": x, "y": n2})
    b.attach(neg, {"x": s1, "y": x2})
    _equality_wire(b, p, x2, s2)
    _equality_wire(b, p, y, h1)
    _equality_wire(b, p, h1, h2)
    _equality_wire(b, p, h2, y2)
    return _finish(name, b, {"x": x, "y": y, "x'": x2, "y'": y2}, _crossover_contract(p))


def crossover_p3() -> Gadget:
    return _crossover("crossover_p3", P3, negator_p3())


def crossover_v3() -> Gadget:
    return _crossover("crossover_v3", V3, negator_v3())


def crossover_l4() -> Gadget:
    return _crossover("crossover_l4", L4, negator_l4())


CATALOG: dict[str, Callable[[], Gadget]] = {
    "negator_p3": negator_p3,
    "extender_p3": extender_p3,
    "crossover_p3": crossover_p3,
    "clause_p3": clause_p3,
    "negator_v3": negator_v3,
    "extender_v3": extender_v3,
    "crossover_v3": crossover_v3,
    "clause_v3": clause_v3,
    "extender_l4": extender_l4,
    "negator_l4": negator_l4,
    "crossover_l4": crossover_l4,
}

_cache: dict[str, Gadget] = {}


def build_gadget(gid: str) -> Gadget:
    if gid not in CATALOG:
        raise KeyError(f"unknown gadget {gid!r}; known: {', '.join(CATALOG)}")
    if gid not in _cache:
        _cache[gid] = CATALOG[gid]()
    return _cache[gid]


# contract checking ---------------------------------------------------------------------


@dataclass
class ClauseResult:
    clause: str
    passed: bool
    witness: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        return {"clause": self.clause, "passed": self.passed, "witness": list(self.witness) if self.witness else None}


@dataclass
class ContractReport:
    gadget: str
    method: str
    results: list[ClauseResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def failures(self) -> list[str]:
        return [r.clause for r in self.results if not r.passed]

    def to_json(self) -> dict:
        return {"gadget": self.gadget, "method": self.method, "passed": self.passed, "results": [r.to_json() for r in self.results]}


class _Exhaustive:
    """Every 2-coloring as a bitmask; ``valid`` marks the pattern-free ones."""

    def __init__(self, d: Digraph, copies: Sequence[tuple[int, ...]]) -> None:
        self.codes = np.arange(1 << d.n, dtype=np.int64)
        valid = np.ones(1 << d.n, dtype=bool)
        for t in copies:
            mask = 0
            for v in t:
                mask |= 1 << v
            part = self.codes & mask
            valid &= (part != 0) & (part != mask)
        self.valid = valid

    def bit(self, v: int) -> np.ndarray:
        return (self.codes >> v) & 1

    def find(self, pins: Mapping[int, int], differ: Iterable[tuple[int, int]] = ()) -> tuple[int, ...] | None:
        ok = self.valid.copy()
        for v, c in pins.items():
            ok &= self.bit(v) == c
        for u, v in differ:
            ok &= self.bit(u) != self.bit(v)
        hits = np.flatnonzero(ok)
        if hits.size == 0:
            return None
        code = int(hits[0])
        return tuple((code >> v) & 1 for v in range(len(self.valid).bit_length() - 1))


class _Searcher:
    def __init__(self, d: Digraph, p: PathPattern, k: int, budget: int | None) -> None:
        self.d, self.p, self.k, self.budget = d, p, k, budget
        self.copies = enumerate_induced(d, p)
        self.exhaustive = _Exhaustive(d, self.copies) if k == 2 and (1 << d.n) <= EXHAUSTIVE_LIMIT else None
        self.method = "exhaustive" if self.exhaustive is not None else "solver"

    def find(self, pins: Mapping[int, int], differ: Iterable[tuple[int, int]] = ()) -> tuple[int, ...] | None:
        if self.exhaustive is not None:
            return self.exhaustive.find(pins, differ)
        res = solve_exact(self.d, self.p, self.k, pinned=pins, not_all_equal=list(differ), copies=self.copies, budget=self.budget)
        return res.coloring.colors if res.coloring is not None else None


def _outer_face_ok(d: Digraph, order: Sequence[int]) -> bool:
    # ports lie on one face in this cyclic order iff adding a vertex joined to
    # all of them plus the cycle through them keeps the graph planar
    b = DigraphBuilder()
    b.add_digraph(d)
    hub = b.add_vertex()
    for i, v in enumerate(order):
        b.add_arc(hub, v)
        w = order[(i + 1) % len(order)]
        if len(order) > 2 and not d.adjacent(v, w):
            b.add_arc(v, w)
    return planar_rotation(b.build()) is not None


def _admissible(g: Gadget) -> list[dict[str, int]]:
    c = g.contract
    names = sorted(g.ports)
    out = []
    for combo in itertools.product(range(c.k), repeat=len(names)):
        a = dict(zip(names, combo))
        if all(a[u] == a[v] for u, v in c.forced_equalities) and all(a[u] != a[v] for u, v in c.forced_inequalities):
            out.append(a)
    return out


def check_contract(g: Gadget, budget: int | None = None, stop_early: bool = False) -> ContractReport:
    """Checks every clause of the gadget's contract.

    Forced (in)equalities ask for a violating pattern-free coloring, which must
    not exist; the other clauses ask for colorings that must exist.  With
    ``stop_early`` the report ends at the first failed clause.
    """
    c = g.contract
    d = g.digraph
    s = _Searcher(d, c.pattern, c.k, budget)
    rep = ContractReport(g.name, s.method)

    def record(name: str, passed: bool, witness=None) -> bool:
        rep.results.append(ClauseResult(name, passed, witness))
        return stop_early and not passed

    if record("acyclic", is_acyclic(d)):
        return rep
    if d.rotation is not None and record("planar embedding", verify_embedding(d)):
        return rep
    if c.outer_ports and record("ports on one face", _outer_face_ok(d, [g.port(x) for x in c.outer_ports])):
        return rep
    if c.uncolorable:
        w = s.find({})
        if record("no pattern-free coloring", w is None, w):
            return rep
    for u, v in c.forced_equalities:
        w = s.find({g.port(u): 0, g.port(v): 1})
        if record(f"{u} = {v}", w is None, w):
            return rep
    for u, v in c.forced_inequalities:
        w = s.find({g.port(u): 0, g.port(v): 0})
        if record(f"{u} != {v}", w is None, w):
            return rep
    if c.boundary_extension:
        port_edges = [(g.port(x), w) for x in sorted(g.ports) for w in sorted(d.nbrs[g.port(x)])]
        for a in _admissible(g):
            pins = {g.port(x): col for x, col in a.items()}
            w = s.find(pins, port_edges)
            label = ",".join(f"{x}={a[x]}" for x in sorted(a))
            if record(f"extends bichromatically from {label}", w is not None, w):
                return rep
    if c.clause_rule:
        names = c.clause_rule
        for combo in itertools.product(range(c.k), repeat=4):
            pins = {g.port(x): col for x, col in zip(names, combo)}
            w = s.find(pins)
            expected = combo[0] in combo[1:]
            label = ",".join(f"{x}={col}" for x, col in zip(names, combo))
            if record(f"clause rule at {label}", (w is not None) == expected, w):
                return rep
    return rep


def arc_flip_mutants(g: Gadget) -> Iterable[tuple[tuple[int, int], Gadget]]:
    """Each single-arc reversal of the gadget, with ports and contract kept."""
    d = g.digraph
    for i, (u, v) in enumerate(d.arcs):
        arcs = d.arcs[:i] + ((v, u),) + d.arcs[i + 1 :]
        yield (u, v), Gadget(g.name, Digraph(d.n, arcs, d.labels, d.rotation), g.ports, g.contract)


def _same_gadget(g: Gadget, h: Gadget) -> bool:
    """Isomorphic with every port mapped to the port of the same name."""
    from networkx.algorithms.isomorphism import DiGraphMatcher

    def nxg(x: Gadget):
        G = nx.DiGraph()
        names = {v: k for k, v in x.ports.items()}
        G.add_nodes_from((v, {"port": names.get(v)}) for v in range(x.digraph.n))
        G.add_edges_from(x.digraph.arcs)
        return G

    return DiGraphMatcher(nxg(g), nxg(h), node_match=lambda a, b: a["port"] == b["port"]).is_isomorphic()


@dataclass
class MutationReport:
    gadget: str
    total: int
    caught: int
    equivalent: list[tuple[int, int]]
    survivors: list[tuple[int, int]]

    @property
    def raw_rate(self) -> float:
        return self.caught / self.total if self.total else 1.0

    @property
    def rate(self) -> float:
        """Caught share among mutants that differ from the original up to isomorphism."""
        live = self.total - len(self.equivalent)
        return self.caught / live if live else 1.0


def mutation_score(g: Gadget, budget: int | None = None) -> MutationReport:
    """Checks every single-arc reversal; survivors isomorphic to ``g`` are set apart."""
    caught, equivalent, survivors = 0, [], []
    total = 0
    for arc, m in arc_flip_mutants(g):
        total += 1
        if not check_contract(m, budget=budget, stop_early=True).passed:
            caught += 1
        elif _same_gadget(g, m):
            equivalent.append(arc)
        else:
            survivors.append(arc)
    return MutationReport(g.name, total, caught, equivalent, survivors)


# synthesis ---------------------------------------------------------------------------------

SYNTH_MAX_VERTICES = 12


def _contract_ports(c: GadgetContract) -> list[str]:
    names: list[str] = []
    for group in (*c.forced_equalities, *c.forced_inequalities, c.clause_rule or (), c.outer_ports):
        for x in group:
            if x not in names:
                names.append(x)
    return names


def _contradictory(c: GadgetContract) -> bool:
    eq = {frozenset(p) for p in c.forced_equalities}
    return any(frozenset(p) in eq for p in c.forced_inequalities)


def synthesize_gadget(
    contract: GadgetContract, max_vertices: int = 6, budget: int = 2_000_000, name: str = "synthesized"
) -> Gadget | None:
    """The first gadget meeting ``contract``, smallest vertex count first.

    Candidates are acyclic by construction: vertex order is a topological
    order, every vertex pair is either joined forward or not at all, and the
    ports may sit at any positions.  Within one size, port placements are
    tried in lexicographic order and arc sets in increasing binary order.
    ``budget`` caps the number of candidates examined.
    """
    if max_vertices > SYNTH_MAX_VERTICES:
        raise ValueError(f"max_vertices is capped at {SYNTH_MAX_VERTICES}")
    names = _contract_ports(contract)
    if not names or _contradictory(contract):
        return None
    seen = 0
    for n in range(len(names), max_vertices + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for placement in itertools.permutations(range(n), len(names)):
            ports = dict(zip(names, placement))
            for mask in range(1 << len(pairs)):
                seen += 1
                if seen > budget:
                    raise BudgetExceeded(f"synthesis examined {budget} candidates")
                arcs = tuple(pr for i, pr in enumerate(pairs) if mask >> i & 1)
                d = Digraph(n, arcs)
                if n >= 3 and len(arcs) > 3 * n - 6:
                    continue
                g = Gadget(name, d, ports, contract)
                if not check_contract(g, stop_early=True).passed:
                    continue
                rot = planar_rotation(d)
                if rot is None:
                    continue
                g = Gadget(name, d.with_rotation(rot).with_labels(ports), ports, contract)
                if check_contract(g).passed:
                    return g
    return None
