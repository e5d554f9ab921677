"""Exact decision of pattern-free k-colorability.

Two independent routes: a forward-checking backtracker with conflict-directed
backjumping over the induced copies, and a CNF encoding decided by a small
DPLL solver.  Either may be handed extra "not all equal" tuples and pinned
domains, which is how gadget contracts are queried.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .detect import BudgetExceeded, InducedCopy, enumerate_induced, find_monochromatic
from .digraph import Coloring, Digraph
from .patterns import PathPattern


@dataclass(frozen=True)
class SolveResult:
    coloring: Coloring | None
    nodes: int = 0

    @property
    def satisfiable(self) -> bool:
        return self.coloring is not None


def verify_coloring(d: Digraph, c: Coloring, p: PathPattern) -> InducedCopy | None:
    """``None`` when ``c`` is ``p``-free, otherwise a monochromatic witness."""
    if c.k < 1:
        raise ValueError("k must be positive")
    return find_monochromatic(d, c, p)


def _domains(n: int, k: int, pinned: Mapping[int, int | Iterable[int]] | None) -> list[int]:
    full = (1 << k) - 1
    dom = [full] * n
    for v, allowed in (pinned or {}).items():
        colors = [allowed] if isinstance(allowed, int) else list(allowed)
        mask = 0
        for col in colors:
            if not 0 <= col < k:
                raise ValueError(f"pinned color {col} outside 0..{k - 1}")
            mask |= 1 << col
        dom[v] &= mask
    return dom


def _search_order(n: int, cons: Sequence[tuple[int, ...]]) -> list[int]:
    # breadth-first over the constraint hypergraph, lowest index first per component
    adj: list[set[int]] = [set() for _ in range(n)]
    for t in cons:
        for v in t:
            adj[v].update(t)
    seen = [False] * n
    order = []
    for s in range(n):
        if seen[s]:
            continue
        seen[s] = True
        queue = [s]
        for v in queue:
            order.append(v)
            for w in sorted(adj[v]):
                if not seen[w]:
                    seen[w] = True
                    queue.append(w)
    return order


def solve_exact(
    d: Digraph,
    p: PathPattern,
    k: int,
    *,
    pinned: Mapping[int, int | Iterable[int]] | None = None,
    not_all_equal: Iterable[Sequence[int]] = (),
    copies: Sequence[InducedCopy] | None = None,
    budget: int | None = None,
    learn: int = 6,
) -> SolveResult:
    """Finds a ``p``-free ``k``-coloring or proves none exists.

    Vertices whose domain has shrunk to one color are assigned first; the rest
    follow a breadth-first order of the constraint hypergraph.  Colors are
    tried least-threatening first, ties going to the lower color, so the
    answer is deterministic.  ``not_all_equal`` adds tuples that
    must not be monochromatic (a pair means the two vertices differ).
    ``budget`` caps the number of assignments; exceeding it raises
    :class:`BudgetExceeded`.

    Every backjump records the culprit assignments as a nogood when there are
    at most ``learn`` of them (0 disables this).  Forward checking treats the
    nogoods like the pattern tuples, so a refuted sub-search is not repeated
    under a different assignment of unrelated vertices.
    """
    if k < 1:
        raise ValueError("k must be positive")
    n = d.n
    if copies is None:
        copies = enumerate_induced(d, p)
    cons = [tuple(c) for c in copies] + [tuple(t) for t in not_all_equal]
    dom = _domains(n, k, pinned)
    for t in cons:
        if len(t) == 1:
            dom[t[0]] = 0
    if any(x == 0 for x in dom):
        return SolveResult(None, 0)
    by_vertex: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
    for t in cons:
        if len(t) > 1:
            for v in t:
                by_vertex[v].append(t)
    order = _search_order(n, [t for t in cons if len(t) > 1])
    rank = [0] * n
    for i, v in enumerate(order):
        rank[v] = i

    color = [-1] * n
    depth = [-1] * n
    # removed[u][c] = the assigned vertices whose colors pruned c from u
    removed: list[dict[int, tuple[int, ...]]] = [{} for _ in range(n)]
    trail: list[tuple[int, int]] = []
    marks = [0] * n
    remaining: list[list[int]] = [[] for _ in range(n)]
    conf: list[set[int]] = [set() for _ in range(n)]
    stack: list[int] = []
    # nogoods[v][c] = learned sets of (vertex, color) pairs that include (v, c)
    nogoods: list[dict[int, list[tuple[tuple[int, int], ...]]]] = [{} for _ in range(n)]
    forced: list[int] = [v for v in range(n) if dom[v] & (dom[v] - 1) == 0]
    cursor = 0
    nodes = 0

    def undo_to(mark: int) -> None:
        while len(trail) > mark:
            u, c = trail.pop()
            dom[u] |= 1 << c
            del removed[u][c]

    def forward(v: int, c: int) -> int:
        """Prunes after ``v := c``; returns a wiped-out vertex or -1."""
        bit = 1 << c
        for t in by_vertex[v]:
            free = -1
            for w in t:
                cw = color[w]
                if cw == -1:
                    if free != -1:
                        break
                    free = w
                elif cw != c:
                    break
            else:
                if free == -1:
                    return v
                if dom[free] & bit:
                    dom[free] &= ~bit
                    removed[free][c] = tuple(w for w in t if w != free)
                    trail.append((free, c))
                    if dom[free] == 0:
                        return free
                    if dom[free] & (dom[free] - 1) == 0:
                        forced.append(free)
        for ng in nogoods[v].get(c, ()):
            free = -1
            for w, cw in ng:
                if color[w] == cw:
                    continue
                if color[w] != -1 or free != -1:
                    break
                free, fc = w, cw
            else:
                if free == -1:
                    conf[v].update(w for w, _ in ng if w != v)
                    return v
                fbit = 1 << fc
                if dom[free] & fbit:
                    dom[free] &= ~fbit
                    removed[free][fc] = tuple(w for w, _ in ng if w != free)
                    trail.append((free, fc))
                    if dom[free] == 0:
                        return free
                    if dom[free] & (dom[free] - 1) == 0:
                        forced.append(free)
        return -1

    def values(v: int) -> list[int]:
        # least-threatening colors first: those closing the fewest monochromatic near-copies
        threat = [0] * k
        for t in by_vertex[v]:
            seen = -1
            for w in t:
                cw = color[w]
                if w == v or cw == -1:
                    continue
                if seen == -1:
                    seen = cw
                elif cw != seen:
                    break
            else:
                if seen != -1:
                    threat[seen] += 1
        allowed = [c for c in range(k) if dom[v] >> c & 1]
        allowed.sort(key=lambda c: (threat[c], c), reverse=True)
        return allowed

    def pick() -> int:
        nonlocal cursor
        while forced:
            v = forced.pop()
            if color[v] == -1 and depth[v] == -1:
                return v
        while depth[order[cursor]] != -1:
            cursor += 1
        return order[cursor]

    v = -1
    entering = True
    while True:
        if entering:
            if len(stack) == n:
                col = Coloring(k, tuple(color))
                if verify_coloring(d, col, p) is not None or any(len({color[w] for w in t}) == 1 for t in cons):
                    raise AssertionError("solver produced an invalid coloring")
                return SolveResult(col, nodes)
            v = pick()
            depth[v] = len(stack)
            stack.append(v)
            remaining[v] = values(v)
            conf[v] = set()
            entering = False
        advanced = False
        while remaining[v]:
            c = remaining[v].pop()
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"search exceeded {budget} nodes")
            marks[v] = len(trail)
            color[v] = c
            wiped = forward(v, c)
            if wiped == -1:
                advanced = True
                break
            for reason in removed[wiped].values():
                conf[v].update(reason)
            if wiped == v:
                conf[v].update(w for t in by_vertex[v] for w in t if len({color[x] for x in t}) == 1)
            conf[v].discard(v)
            undo_to(marks[v])
            color[v] = -1
        if advanced:
            entering = True
            continue
        culprits = set(conf[v])
        for reason in removed[v].values():
            culprits.update(reason)
        culprits.discard(v)
        if not culprits:
            return SolveResult(None, nodes)
        if len(culprits) <= learn:
            ng = tuple((u, color[u]) for u in culprits)
            for u, cu in ng:
                nogoods[u].setdefault(cu, []).append(ng)
        h = max(culprits, key=depth.__getitem__)
        culprits.discard(h)
        # unwind everything above h, h's own assignment included
        unwound = []
        while True:
            u = stack.pop()
            if color[u] != -1:
                undo_to(marks[u])
                color[u] = -1
            depth[u] = -1
            cursor = min(cursor, rank[u])
            if u == h:
                break
            unwound.append(u)
        forced.clear()
        forced.extend(u for u in reversed(unwound) if dom[u] & (dom[u] - 1) == 0)
        depth[h] = len(stack)
        stack.append(h)
        conf[h].update(culprits)
        v = h


# CNF ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    variable_count: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "clauses", tuple(tuple(c) for c in self.clauses))
        for cl in self.clauses:
            if not cl:
                raise ValueError("empty clause")
            for lit in cl:
                if lit == 0 or abs(lit) > self.variable_count:
                    raise ValueError(f"literal {lit} out of range")

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.variable_count} {len(self.clauses)}"]
        lines += [" ".join(map(str, cl)) + " 0" for cl in self.clauses]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_dimacs(cls, text: str) -> "CnfFormula":
        nvars = None
        clauses: list[tuple[int, ...]] = []
        current: list[int] = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line or line.startswith("c") or line.startswith("%"):
                continue
            if line.startswith("p"):
                parts = line.split()
                if len(parts) != 4 or parts[1] != "cnf":
                    raise ValueError(f"line {lineno}: malformed header {line!r}")
                nvars = int(parts[2])
                continue
            try:
                nums = [int(x) for x in line.split()]
            except ValueError:
                raise ValueError(f"line {lineno}: non-integer token in {line!r}") from None
            for x in nums:
                if x == 0:
                    clauses.append(tuple(current))
                    current = []
                else:
                    current.append(x)
        if current:
            clauses.append(tuple(current))
        if nvars is None:
            raise ValueError("missing 'p cnf' header")
        return cls(nvars, tuple(clauses))


@dataclass(frozen=True)
class VariableMap:
    k: int
    n: int

    def var(self, v: int, color: int) -> int:
        return v * self.k + color + 1

    def decode(self, assignment: Mapping[int, bool]) -> Coloring:
        colors = []
        for v in range(self.n):
            picked = [c for c in range(self.k) if assignment.get(self.var(v, c))]
            # an unconstrained variable may be left unassigned; take the first allowed color
            colors.append(picked[0] if picked else 0)
        return Coloring(self.k, tuple(colors))

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "vars": {f"{v}:{c}": self.var(v, c) for v in range(self.n) for c in range(self.k)}}


def encode_cnf(
    d: Digraph,
    p: PathPattern,
    k: int,
    *,
    pinned: Mapping[int, int | Iterable[int]] | None = None,
    not_all_equal: Iterable[Sequence[int]] = (),
    copies: Sequence[InducedCopy] | None = None,
) -> tuple[CnfFormula, VariableMap]:
    vm = VariableMap(k, d.n)
    clauses: list[tuple[int, ...]] = []
    for v in range(d.n):
        clauses.append(tuple(vm.var(v, c) for c in range(k)))
        for a in range(k):
            for b in range(a + 1, k):
                clauses.append((-vm.var(v, a), -vm.var(v, b)))
    if copies is None:
        copies = enumerate_induced(d, p)
    for t in list(copies) + [tuple(t) for t in not_all_equal]:
        for c in range(k):
            clauses.append(tuple(-vm.var(v, c) for v in t))
    for v, allowed in (pinned or {}).items():
        colors = {allowed} if isinstance(allowed, int) else set(allowed)
        for c in range(k):
            if c not in colors:
                clauses.append((-vm.var(v, c),))
    return CnfFormula(d.n * k, tuple(clauses)), vm


def dpll_solve(f: CnfFormula, budget: int | None = None) -> dict[int, bool] | None:
    """Chronological DPLL with unit propagation and pure-literal elimination.

    Branches on the lowest unassigned variable, trying true first.  Returns
    a (possibly partial) satisfying assignment or ``None``.
    """
    nv = f.variable_count
    clauses = f.clauses
    occ: dict[int, list[int]] = {}
    for ci, cl in enumerate(clauses):
        for lit in cl:
            occ.setdefault(lit, []).append(ci)
    value = [0] * (nv + 1)  # 0 unassigned, 1 true, -1 false
    sat_by = [0] * len(clauses)  # number of true literals
    free = [len(cl) for cl in clauses]
    # active occurrences per literal, counting only clauses not yet satisfied
    active = {lit: len(cs) for lit, cs in occ.items()}
    trail: list[int] = []
    nodes = 0

    pending: list[int] = []

    def assign(lit: int) -> int:
        """Sets ``lit`` true; returns a falsified clause index or -1."""
        var = abs(lit)
        value[var] = 1 if lit > 0 else -1
        trail.append(lit)
        bad = -1
        for ci in occ.get(lit, ()):
            sat_by[ci] += 1
            free[ci] -= 1
            if sat_by[ci] == 1:
                for other in clauses[ci]:
                    active[other] -= 1
        for ci in occ.get(-lit, ()):
            free[ci] -= 1
            if sat_by[ci] == 0:
                if free[ci] == 0:
                    bad = ci
                elif free[ci] == 1:
                    pending.append(ci)
        return bad

    def unassign() -> None:
        lit = trail.pop()
        value[abs(lit)] = 0
        for ci in occ.get(lit, ()):
            sat_by[ci] -= 1
            free[ci] += 1
            if sat_by[ci] == 0:
                for other in clauses[ci]:
                    active[other] += 1
        for ci in occ.get(-lit, ()):
            free[ci] += 1

    def lit_value(lit: int) -> int:
        v = value[abs(lit)]
        return v if lit > 0 else -v

    def propagate() -> bool:
        while pending:
            ci = pending.pop()
            if sat_by[ci]:
                continue
            if free[ci] == 0:
                pending.clear()
                return False
            unit = next(l for l in clauses[ci] if lit_value(l) == 0)
            if assign(unit) != -1:
                pending.clear()
                return False
        for var in range(1, nv + 1):
            if value[var]:
                continue
            pos, neg = active.get(var, 0), active.get(-var, 0)
            if pos and not neg:
                assign(var)
            elif neg and not pos:
                assign(-var)
        return True

    for ci, cl in enumerate(clauses):
        if len(cl) == 1:
            pending.append(ci)
    # decisions: (trail length before decision, decision literal, flipped)
    stack: list[tuple[int, int, bool]] = []
    ok = propagate()
    while True:
        if ok:
            var = next((x for x in range(1, nv + 1) if value[x] == 0 and (active.get(x, 0) or active.get(-x, 0))), 0)
            if var == 0:
                if all(sat_by[ci] for ci in range(len(clauses))):
                    return {x: value[x] == 1 for x in range(1, nv + 1) if value[x]}
                ok = False
                continue
            nodes += 1
            if budget is not None and nodes > budget:
                raise BudgetExceeded(f"DPLL exceeded {budget} decisions")
            stack.append((len(trail), var, False))
            ok = assign(var) == -1 and propagate()
            if not ok:
                pending.clear()
            continue
        while stack:
            mark, lit, flipped = stack.pop()
            while len(trail) > mark:
                unassign()
            if not flipped:
                stack.append((mark, -lit, True))
                ok = assign(-lit) == -1 and propagate()
                if not ok:
                    pending.clear()
                break
        else:
            return None


def save_cnf_with_map(f: CnfFormula, vm: VariableMap, cnf_path: str, map_path: str) -> None:
    with open(cnf_path, "w") as fh:
        fh.write(f.to_dimacs())
    with open(map_path, "w") as fh:
        json.dump(vm.to_json(), fh, sort_keys=True)


def solve_via_cnf(d: Digraph, p: PathPattern, k: int, budget: int | None = None, **kw) -> SolveResult:
    f, vm = encode_cnf(d, p, k, **kw)
    model = dpll_solve(f, budget=budget)
    if model is None:
        return SolveResult(None)
    return SolveResult(vm.decode(model))


def external_sat_available() -> bool:
    try:
        import pysat.solvers  # noqa: F401
    except ImportError:
        return False
    return True


def cdcl_solve(f: CnfFormula, solver: str = "cadical195") -> dict[int, bool] | None:
    """Hands the formula to an external CDCL solver from python-sat."""
    try:
        from pysat.solvers import Solver
    except ImportError as exc:
        raise RuntimeError("the external engine needs the python-sat package") from exc
    with Solver(name=solver, bootstrap_with=[list(c) for c in f.clauses]) as s:
        if not s.solve():
            return None
        return {abs(lit): lit > 0 for lit in s.get_model()}


ENGINES = ("exact", "dpll", "external", "auto")


def decide(d: Digraph, p: PathPattern, k: int, engine: str = "auto", budget: int | None = None, **kw) -> SolveResult:
    """Runs one engine; ``auto`` keeps small inputs in-house and large ones external.

    Colorings coming back from the CNF routes are re-verified before use.
    """
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}; choose from {', '.join(ENGINES)}")
    if engine == "auto":
        engine = "exact" if d.n <= 400 or not external_sat_available() else "external"
    if engine == "exact":
        return solve_exact(d, p, k, budget=budget, **kw)
    f, vm = encode_cnf(d, p, k, **kw)
    model = dpll_solve(f, budget=budget) if engine == "dpll" else cdcl_solve(f)
    if model is None:
        return SolveResult(None)
    col = vm.decode(model)
    if verify_coloring(d, col, p) is not None:
        raise AssertionError("CNF model decodes to a coloring with a monochromatic copy")
    return SolveResult(col)
