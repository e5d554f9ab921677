"""Hardness reductions as executable constructions.

Every constructor returns an acyclic digraph carrying a planar rotation
system.  The 3-SAT compilers lay the instance out on two horizontal lines,
join the lines by wire strips, and replace each strip crossing by a
crossover gadget; the result is checked for planarity before it is returned.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .digraph import Coloring, Digraph, DigraphBuilder, EmbeddingError, embedded, is_acyclic, reverse, verify_embedding
from .gadgets import Gadget, _Net, build_gadget, build_tower
from .patterns import (
    DIRECTED_EDGE,
    L4,
    L4_REVERSED,
    N4,
    P3,
    P4,
    V3,
    V3_SOURCE,
    PathPattern,
    PatternError,
    TreePattern,
    Verdict,
    classify_problem,
    lrem,
    pattern_to_digraph,
)


class ReductionError(ValueError):
    """Malformed reduction input or a construction that failed its own checks."""


# formulas -----------------------------------------------------------------------


@dataclass(frozen=True)
class Sat3Formula:
    """A CNF formula whose clauses have exactly three signed literals."""

    variable_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.variable_count < 0:
            raise ReductionError("negative variable count")
        clauses = tuple(tuple(int(x) for x in c) for c in self.clauses)
        for j, c in enumerate(clauses):
            if len(c) != 3:
                raise ReductionError(f"clause {j + 1} has {len(c)} literals, expected 3")
            for lit in c:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ReductionError(f"clause {j + 1} has literal {lit} outside 1..{self.variable_count}")
        object.__setattr__(self, "clauses", clauses)

    def satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        return all(any(assignment[abs(x)] == (x > 0) for x in c) for c in self.clauses)

    def brute_force(self) -> dict[int, bool] | None:
        """A satisfying assignment found by walking the truth table, or ``None``."""
        for bits in itertools.product([False, True], repeat=self.variable_count):
            a = {i + 1: b for i, b in enumerate(bits)}
            if self.satisfied_by(a):
                return a
        return None

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {len(self.clauses)}"]
        lines += [" ".join(map(str, c)) + " 0" for c in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str, source: str = "<input>") -> "Sat3Formula":
        header = None
        literals: list[int] = []
        clauses: list[tuple[int, ...]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ReductionError(f"{source}:{lineno}: malformed header {line!r}")
                header = (int(parts[2]), int(parts[3]))
                continue
            if header is None:
                raise ReductionError(f"{source}:{lineno}: clause before the 'p cnf' header")
            for tok in line.split():
                try:
                    lit = int(tok)
                except ValueError:
                    raise ReductionError(f"{source}:{lineno}: not an integer: {tok!r}") from None
                if lit == 0:
                    if len(literals) != 3:
                        raise ReductionError(f"{source}:{lineno}: clause has {len(literals)} literals, expected 3")
                    clauses.append(tuple(literals))
                    literals = []
                else:
                    if abs(lit) > header[0]:
                        raise ReductionError(f"{source}:{lineno}: literal {lit} exceeds {header[0]} variables")
                    literals.append(lit)
        if header is None:
            raise ReductionError(f"{source}: missing 'p cnf' header")
        if literals:
            raise ReductionError(f"{source}: last clause is not terminated by 0")
        if len(clauses) != header[1]:
            raise ReductionError(f"{source}: header announces {header[1]} clauses, found {len(clauses)}")
        return cls(header[0], tuple(clauses))


def random_formula(rng: random.Random, n: int, m: int) -> Sat3Formula:
    """Clauses draw their three variables independently, so repeats are possible."""
    if n < 1:
        raise ReductionError("need at least one variable")
    clauses = tuple(tuple(rng.randint(1, n) * rng.choice((1, -1)) for _ in range(3)) for _ in range(m))
    return Sat3Formula(n, clauses)


# certificates ----------------------------------------------------------------------


@dataclass(frozen=True)
class ReductionCertificate:
    """An emitted instance plus what is needed to read a coloring back.

    ``truth_color`` is the color of a true literal once the coloring has been
    normalised so that the reference vertex ``t`` has color 0.
    """

    instance: Digraph
    pattern: PathPattern
    k: int
    literal_vertices: Mapping[int, int] = field(default_factory=dict)
    truth_color: int = 0
    gadget_regions: tuple[tuple[str, int, int], ...] = ()
    crossings: int = 0
    strips: int = 0

    def __post_init__(self) -> None:
        d = self.instance
        for lit, v in self.literal_vertices.items():
            if not 0 <= v < d.n:
                raise ReductionError(f"literal {lit} points outside the instance")
            if d.labels.get(_lit_label(lit)) != v:
                raise ReductionError(f"literal {lit} is not labeled in the instance")
        if self.literal_vertices and "t" not in d.labels:
            raise ReductionError("a SAT certificate needs the reference vertex t")

    @property
    def variables(self) -> list[int]:
        return sorted({abs(x) for x in self.literal_vertices})

    def decode(self, c: Coloring) -> dict[int, bool]:
        """The assignment read off the literal vertices of a coloring."""
        t = c[self.instance.labels["t"]]
        return {i: (c[self.literal_vertices[i]] - t) % self.k == self.truth_color for i in self.variables}

    def to_json(self) -> dict:
        return {
            "instance": self.instance.to_json(),
            "pattern": self.pattern.word,
            "k": self.k,
            "literal_vertices": {str(k): v for k, v in self.literal_vertices.items()},
            "truth_color": self.truth_color,
            "gadget_regions": [list(r) for r in self.gadget_regions],
            "crossings": self.crossings,
            "strips": self.strips,
        }

    @classmethod
    def from_json(cls, doc: Mapping) -> "ReductionCertificate":
        return cls(
            instance=Digraph.from_json(doc["instance"]),
            pattern=PathPattern(doc["pattern"]),
            k=doc["k"],
            literal_vertices={int(k): v for k, v in doc.get("literal_vertices", {}).items()},
            truth_color=doc.get("truth_color", 0),
            gadget_regions=tuple(tuple(r) for r in doc.get("gadget_regions", ())),
            crossings=doc.get("crossings", 0),
            strips=doc.get("strips", 0),
        )


def _lit_label(lit: int) -> str:
    return f"x{lit}" if lit > 0 else f"~x{-lit}"


def reduction_report(cert: ReductionCertificate) -> dict:
    counts: dict[str, int] = {}
    for gid, _, _ in cert.gadget_regions:
        counts[gid] = counts.get(gid, 0) + 1
    d = cert.instance
    return {
        "pattern": cert.pattern.word,
        "k": cert.k,
        "vertices": d.n,
        "arcs": len(d.arcs),
        "gadgets": dict(sorted(counts.items())),
        "strips": cert.strips,
        "crossings_replaced": cert.crossings,
        "acyclic": is_acyclic(d),
        "planar_embedding": d.rotation is not None and verify_embedding(d),
    }


def _checked(d: Digraph) -> Digraph:
    d = embedded(d)
    if not is_acyclic(d):
        raise ReductionError("construction produced a directed cycle")
    if not verify_embedding(d):
        raise EmbeddingError("emitted rotation system fails the Euler check")
    return d


# leaf lifts ---------------------------------------------------------------------


def _hang(b: DigraphBuilder, v: int, piece: Digraph, outward: bool) -> None:
    off = b.add_digraph(piece)
    for u in range(off, off + piece.n):
        b.add_arc(v, u) if outward else b.add_arc(u, v)


def _lift(d: Digraph, pieces: Sequence[tuple[Digraph, bool]]) -> Digraph:
    b = DigraphBuilder()
    b.add_vertices(d.n)
    for u, v in d.arcs:
        b.add_arc(u, v)
    for v in range(d.n):
        for piece, outward in pieces:
            _hang(b, v, piece, outward)
    b.labels.update(d.labels)
    return _checked(b.build())


def lift_leaf_2col(d: Digraph, t: TreePattern | PathPattern) -> Digraph:
    """Hangs ``2 * leaves(t)`` copies of ``t`` off every vertex, half of them on out-arcs.

    The original vertices keep their indices.
    """
    if isinstance(t, PathPattern):
        t = TreePattern.from_path(t)
    leaves = len(t.leaves)
    return _lift(d, [(t.digraph, True)] * leaves + [(t.digraph, False)] * leaves)


def lift_leaf_3col(d: Digraph, p: PathPattern) -> Digraph:
    """Two towers of ``p`` per vertex, one reached by out-arcs and one by in-arcs."""
    if p.n < 4:
        raise PatternError("the 3-color leaf lift needs a path on at least 4 vertices")
    tower = build_tower(p).digraph
    return _lift(d, [(tower, True), (tower, False)])


def pendant_lift(d: Digraph, p4: PathPattern) -> Digraph:
    """One copy of ``p4`` per vertex, every copy vertex an out-neighbour of it."""
    if not (p4.isomorphic(N4) or p4.isomorphic(P4)):
        raise PatternError("pendant lift is defined for the two 4-vertex paths ending in a forward arc")
    return _lift(d, [(pattern_to_digraph(p4), True)])


# planarization -------------------------------------------------------------------------


@dataclass(frozen=True)
class Strip:
    """A wire drawn as a segment from ``top`` on the upper line to ``bottom`` on the lower one."""

    top: Fraction
    bottom: Fraction


def strips_cross(s: Strip, r: Strip) -> bool:
    return (s.top - r.top) * (s.bottom - r.bottom) < 0


def _meet(s: Strip, r: Strip) -> Fraction:
    # parameter along s (0 at the upper line) where the two segments meet
    return (r.top - s.top) / ((s.bottom - s.top) - (r.bottom - r.top))


@dataclass(frozen=True)
class PlanarLayout:
    """Crossing strip pairs and, per strip, its crossings ordered downwards."""

    crossings: tuple[tuple[int, int], ...]
    chains: tuple[tuple[int, ...], ...]


def planarize(strips: Sequence[Strip]) -> PlanarLayout:
    """Finds every crossing and orders the crossings met along each strip.

    Raises if three strips pass through one point, since the order along the
    strips would then be ambiguous.
    """
    crossings = [(i, j) for i, j in itertools.combinations(range(len(strips)), 2) if strips_cross(strips[i], strips[j])]
    along: list[list[tuple[Fraction, int]]] = [[] for _ in strips]
    for ci, (i, j) in enumerate(crossings):
        along[i].append((_meet(strips[i], strips[j]), ci))
        along[j].append((_meet(strips[j], strips[i]), ci))
    chains = []
    for lst in along:
        lst.sort()
        if any(a[0] == b[0] for a, b in zip(lst, lst[1:])):
            raise ReductionError("three strips meet in one point")
        chains.append(tuple(ci for _, ci in lst))
    return PlanarLayout(tuple(crossings), tuple(chains))


def _generic(x: int, eps: Fraction) -> Fraction:
    # a strictly convex nudge keeps three strips from meeting in one point
    return x + eps * x * x


# SAT compilers ----------------------------------------------------------------------------


_SUITES = {
    "P3": (P3, "negator_p3", "extender_p3", "crossover_p3", "clause_p3"),
    "V3": (V3, "negator_v3", "extender_v3", "crossover_v3", "clause_v3"),
    "L4": (L4, "negator_l4", "extender_l4", "crossover_l4", None),
}


def _variant_key(variant: str | PathPattern, table: Mapping) -> str:
    if isinstance(variant, PathPattern):
        for key, entry in table.items():
            q = entry[0] if isinstance(entry, tuple) else entry
            if variant.isomorphic(q):
                return key
        raise ReductionError(f"no reduction variant for pattern {variant}")
    key = str(variant).upper()
    if key not in table:
        raise ReductionError(f"unknown variant {variant!r}; choose from {', '.join(table)}")
    return key


class _Layout:
    def __init__(self) -> None:
        self.b = _Net()
        self.regions: list[tuple[str, int, int]] = []

    def attach(self, gid: str, at: Mapping[str, int]) -> dict[int, int]:
        g = build_gadget(gid)
        start = self.b.n
        where = self.b.attach(g, at)
        self.regions.append((gid, start, self.b.n))
        return where

    def fresh(self, gid: str) -> dict[str, int]:
        g = build_gadget(gid)
        where = self.attach(gid, {})
        return {name: where[v] for name, v in g.ports.items()}


def sat3_to_2col(f: Sat3Formula, variant: str | PathPattern = "P3") -> ReductionCertificate:
    """A planar acyclic digraph that is pattern-free 2-colorable iff ``f`` is satisfiable.

    The upper line carries ``t`` and the literal vertices, with a negator
    between each complementary pair.  The lower line carries one block per
    clause.  Each block port is wired to its literal (or to ``t``) through an
    extender strip, and strip crossings become crossover gadgets.
    """
    key = _variant_key(variant, _SUITES)
    pattern, neg, ext, cross, clause = _SUITES[key]
    lay = _Layout()
    b = lay.b
    t = b.add_vertex("t")
    top_pos = {t: 0}
    lits: dict[int, int] = {}
    for i in range(1, f.variable_count + 1):
        lits[i] = b.add_vertex(_lit_label(i))
        lits[-i] = b.add_vertex(_lit_label(-i))
        top_pos[lits[i]] = 2 * i - 1
        top_pos[lits[-i]] = 2 * i
    for i in range(1, f.variable_count + 1):
        lay.attach(neg, {"x": lits[i], "y": lits[-i]})

    # (upper vertex, lower vertex) per strip, lower vertices in line order
    ends: list[tuple[int, int]] = []
    for c in f.clauses:
        if clause is not None:
            ports = lay.fresh(clause)
            ends.append((t, ports["t'"]))
            ends += [(lits[x], ports[name]) for x, name in zip(c, ("x'", "y'", "z'"))]
        else:
            # a bare pattern copy whose last vertex is tied to t
            q = b.add_vertices(4)
            start = q[0]
            for u, v in [(q[0], q[1]), (q[1], q[2]), (q[3], q[2])]:
                b.add_arc(u, v)
            lay.regions.append(("clause_copy_l4", start, start + 4))
            ends += [(lits[x], v) for x, v in zip(c, q[:3])]
            ends.append((t, q[3]))

    layout = None
    for attempt in range(1, 50):
        eps = Fraction(1, 1000 * attempt + 7)
        strips = [Strip(_generic(top_pos[u], eps), _generic(pos, eps / 3)) for pos, (u, _) in enumerate(ends)]
        try:
            layout = planarize(strips)
            break
        except ReductionError:
            continue
    if layout is None:
        raise ReductionError("could not place strips in general position")

    crossers = [lay.fresh(cross) for _ in layout.crossings]
    for si, (u, w) in enumerate(ends):
        nodes = [u]
        exits = []
        for ci in layout.chains[si]:
            first = layout.crossings[ci][0] == si
            ports = crossers[ci]
            nodes.append(ports["x" if first else "y"])
            exits.append(ports["x'" if first else "y'"])
        # each crossover is entered on one port and left from its partner
        seq = [u]
        for a, z in zip(nodes[1:], exits):
            seq += [a, z]
        seq.append(w)
        for a, z in zip(seq[::2], seq[1::2]):
            lay.attach(ext, {"x": a, "y": z})

    d = b.build()
    try:
        d = _checked(d)
    except EmbeddingError as exc:
        raise ReductionError(f"planarized instance is not planar: {exc}") from exc
    return ReductionCertificate(
        instance=d,
        pattern=pattern,
        k=2,
        literal_vertices=lits,
        truth_color=1 if key == "L4" else 0,
        gadget_regions=tuple(lay.regions),
        crossings=len(layout.crossings),
        strips=len(ends),
    )


def mirror_certificate(cert: ReductionCertificate) -> ReductionCertificate:
    """The same instance with every arc reversed, for the reversed pattern."""
    from .patterns import reverse_pattern

    d = reverse(cert.instance)
    return ReductionCertificate(
        instance=_checked(d),
        pattern=reverse_pattern(cert.pattern),
        k=cert.k,
        literal_vertices=dict(cert.literal_vertices),
        truth_color=cert.truth_color,
        gadget_regions=cert.gadget_regions,
        crossings=cert.crossings,
        strips=cert.strips,
    )


# planar 3-coloring -----------------------------------------------------------------------


_THREE = {"V3": V3, "P3": P3}


def planar3col_to_3col(g: Digraph, variant: str | PathPattern = "V3") -> ReductionCertificate:
    """A digraph that is pattern-free 3-colorable iff the planar graph ``g`` is 3-colorable.

    Edges of ``g`` (arc directions are ignored) are oriented from the lower
    to the higher index.  Every vertex then receives its own tower, all of
    whose vertices point into it.
    """
    key = _variant_key(variant, _THREE)
    pattern = _THREE[key]
    b = DigraphBuilder()
    b.add_vertices(g.n)
    for e in sorted({tuple(sorted(a)) for a in g.arcs}):
        b.add_arc(*e)
    tower = build_tower(pattern).digraph
    regions = []
    for v in range(g.n):
        start = b.n
        _hang(b, v, tower, outward=False)
        regions.append((f"tower_{key.lower()}", start, b.n))
    for v in range(g.n):
        b.set_label(f"g{v}", v)
    return ReductionCertificate(instance=_checked(b.build()), pattern=pattern, k=3, gadget_regions=tuple(regions))


def planar_coloring_instance(g: Digraph) -> ReductionCertificate:
    """Proper 3-coloring is the directed-edge-free case; only an orientation is needed."""
    b = DigraphBuilder()
    b.add_vertices(g.n)
    for e in sorted({tuple(sorted(a)) for a in g.arcs}):
        b.add_arc(*e)
    return ReductionCertificate(instance=_checked(b.build()), pattern=DIRECTED_EDGE, k=3)


# induction chain -----------------------------------------------------------------------------


@dataclass(frozen=True)
class ChainStep:
    """``pattern`` at this level and the construction that produces its instances.

    ``operation`` is a lift name for the inner steps and a base construction
    for the last step.
    """

    pattern: PathPattern
    operation: str


def _base_2col(p: PathPattern) -> str:
    table = [
        (P3, "sat3_to_2col:P3"),
        (V3, "sat3_to_2col:V3"),
        (V3_SOURCE, "mirror:sat3_to_2col:V3"),
        (P4, "pendant_lift:P4"),
        (N4, "pendant_lift:N4"),
        (L4, "sat3_to_2col:L4"),
        (L4_REVERSED, "mirror:sat3_to_2col:L4"),
    ]
    for q, op in table:
        if p.isomorphic(q):
            return op
    raise ReductionError(f"{p} is not a two-color base pattern")


def _base_3col(p: PathPattern) -> str:
    table = [
        (DIRECTED_EDGE, "planar_coloring"),
        (P3, "planar3col_to_3col:P3"),
        (V3, "planar3col_to_3col:V3"),
        (V3_SOURCE, "mirror:planar3col_to_3col:V3"),
    ]
    for q, op in table:
        if p.isomorphic(q):
            return op
    raise ReductionError(f"{p} is not a three-color base pattern")


def reduction_chain(p: PathPattern, k: int) -> list[ChainStep]:
    """Patterns from ``p`` down to a base case, each tagged with how its instances are built."""
    if k not in (2, 3) or classify_problem(p, k) is not Verdict.NP_HARD:
        raise ReductionError(f"{p} with {k} colors is not in the hard regime")
    base = (3, 4) if k == 2 else (2, 3)
    lift = "lift_leaf_2col" if k == 2 else "lift_leaf_3col"
    steps = []
    while p.n not in base:
        steps.append(ChainStep(p, lift))
        p = lrem(p)
    steps.append(ChainStep(p, _base_2col(p) if k == 2 else _base_3col(p)))
    return steps


def _relabel(cert: ReductionCertificate, d: Digraph, p: PathPattern) -> ReductionCertificate:
    return ReductionCertificate(
        instance=d,
        pattern=p,
        k=cert.k,
        literal_vertices=dict(cert.literal_vertices),
        truth_color=cert.truth_color,
        gadget_regions=cert.gadget_regions,
        crossings=cert.crossings,
        strips=cert.strips,
    )


def build_base(step: ChainStep, source: Sat3Formula | Digraph) -> ReductionCertificate:
    """Runs the base construction named by the last chain step."""
    op = step.operation
    mirrored = op.startswith("mirror:")
    if mirrored:
        op = op[len("mirror:") :]
    name, _, arg = op.partition(":")
    if name == "sat3_to_2col":
        cert = sat3_to_2col(_need(source, Sat3Formula), arg)
    elif name == "pendant_lift":
        inner = sat3_to_2col(_need(source, Sat3Formula), "P3" if arg == "P4" else "V3")
        q = P4 if arg == "P4" else N4
        cert = _relabel(inner, pendant_lift(inner.instance, q), q)
    elif name == "planar3col_to_3col":
        cert = planar3col_to_3col(_need(source, Digraph), arg)
    elif name == "planar_coloring":
        cert = planar_coloring_instance(_need(source, Digraph))
    else:
        raise ReductionError(f"unknown base operation {step.operation!r}")
    return mirror_certificate(cert) if mirrored else cert


def _need(source, kind):
    if not isinstance(source, kind):
        raise ReductionError(f"this base case starts from a {kind.__name__}")
    return source


def compile_chain(chain: Sequence[ChainStep], source: Sat3Formula | Digraph) -> ReductionCertificate:
    """The base instance lifted level by level up to the first pattern of the chain."""
    cert = build_base(chain[-1], source)
    for step in reversed(chain[:-1]):
        if step.operation == "lift_leaf_2col":
            d = lift_leaf_2col(cert.instance, step.pattern)
        else:
            d = lift_leaf_3col(cert.instance, step.pattern)
        cert = _relabel(cert, d, step.pattern)
    return cert
