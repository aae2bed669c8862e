"""Finite digraph model and the structural analyses everything else consumes.

A digraph is a finite vertex set plus *arrow classes*: an arrow class has a
source, a target and a multiplicity, which is a positive integer or ω
(:data:`OMEGA`).  A class of multiplicity k stands for k parallel arrows
wherever counts matter; an ω class makes its source an infinite emitter.

Cycles are *geometric*: an arrow-id sequence up to rotation, stored in the
canonical rotation whose first arrow id is lexicographically smallest.
Cycle enumeration runs over vertex-simple cycles (sources pairwise
distinct) and expands parallel classes afterwards.

All values are immutable after construction and every analysis is a pure
function, so everything here is safe to share across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

import networkx as nx

from .errors import (
    MalformedMorphismError,
    NotHereditaryError,
    ResourceLimitError,
    UnknownArrowError,
    UnknownVertexError,
)

#: Multiplicity marker for an infinite arrow class.
OMEGA = math.inf


def is_omega(multiplicity) -> bool:
    return multiplicity == OMEGA


@dataclass(frozen=True)
class ArrowClass:
    id: str
    source: str
    target: str
    multiplicity: int | float = 1

    def __post_init__(self):
        ok = is_omega(self.multiplicity) or (
            isinstance(self.multiplicity, int) and self.multiplicity >= 1)
        if not ok:
            raise ValueError(f"arrow {self.id}: bad multiplicity {self.multiplicity!r}")


class Digraph:
    """Immutable finite digraph with ordered vertices and arrow classes."""

    def __init__(self, name: str, vertices: Iterable[str],
                 arrows: Iterable[ArrowClass | tuple]):
        self.name = name
        self.vertices: tuple[str, ...] = tuple(vertices)
        self.arrows: tuple[ArrowClass, ...] = tuple(
            a if isinstance(a, ArrowClass) else ArrowClass(*a) for a in arrows)
        if len(set(self.vertices)) != len(self.vertices):
            raise ValueError(f"digraph {name}: duplicate vertex id")
        vs = set(self.vertices)
        self._by_id: dict[str, ArrowClass] = {}
        self._out: dict[str, list[ArrowClass]] = {v: [] for v in self.vertices}
        self._in: dict[str, list[ArrowClass]] = {v: [] for v in self.vertices}
        for a in self.arrows:
            if a.id in self._by_id:
                raise ValueError(f"digraph {name}: duplicate arrow id {a.id}")
            if a.source not in vs:
                raise ValueError(f"digraph {name}: arrow {a.id} has undeclared source {a.source}")
            if a.target not in vs:
                raise ValueError(f"digraph {name}: arrow {a.id} has undeclared target {a.target}")
            self._by_id[a.id] = a
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def __eq__(self, other):
        return (isinstance(other, Digraph) and self.name == other.name
                and self.vertices == other.vertices and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.name, self.vertices, self.arrows))

    def __repr__(self):
        return f"Digraph({self.name!r}, |V|={len(self.vertices)}, |E|={len(self.arrows)})"

    # -- lookups ------------------------------------------------------------

    def has_vertex(self, v: str) -> bool:
        return v in self._out

    def check_vertices(self, xs: Iterable[str]):
        for v in xs:
            if not self.has_vertex(v):
                raise UnknownVertexError(f"unknown vertex {v!r} in digraph {self.name}")

    def arrow(self, aid: str) -> ArrowClass:
        try:
            return self._by_id[aid]
        except KeyError:
            raise UnknownArrowError(f"unknown arrow {aid!r} in digraph {self.name}") from None

    def has_arrow(self, aid: str) -> bool:
        return aid in self._by_id

    def out_arrows(self, v: str) -> tuple[ArrowClass, ...]:
        self.check_vertices([v])
        return tuple(self._out[v])

    def in_arrows(self, v: str) -> tuple[ArrowClass, ...]:
        self.check_vertices([v])
        return tuple(self._in[v])

    def out_degree(self, v: str) -> int | float:
        """Arrow-instance count leaving v; ω classes absorb to infinity."""
        total = 0
        for a in self.out_arrows(v):
            if is_omega(a.multiplicity):
                return OMEGA
            total += a.multiplicity
        return total

    @property
    def is_row_finite(self) -> bool:
        return not any(is_omega(a.multiplicity) for a in self.arrows)

    def sinks(self) -> tuple[str, ...]:
        return tuple(v for v in self.vertices if not self._out[v])

    # -- reachability ---------------------------------------------------------

    def successors(self, xs: Iterable[str]) -> frozenset[str]:
        """Vertices reachable from xs, including xs itself (⤳ is reflexive)."""
        xs = list(xs)
        self.check_vertices(xs)
        seen = set(xs)
        stack = list(xs)
        while stack:
            for a in self._out[stack.pop()]:
                if a.target not in seen:
                    seen.add(a.target)
                    stack.append(a.target)
        return frozenset(seen)

    def predecessors(self, xs: Iterable[str]) -> frozenset[str]:
        xs = list(xs)
        self.check_vertices(xs)
        seen = set(xs)
        stack = list(xs)
        while stack:
            for a in self._in[stack.pop()]:
                if a.source not in seen:
                    seen.add(a.source)
                    stack.append(a.source)
        return frozenset(seen)

    def full_subgraph(self, ws: Iterable[str], name: str | None = None) -> "Digraph":
        """Restriction to ws, keeping every class with both endpoints inside."""
        ws = set(ws)
        self.check_vertices(ws)
        return Digraph(
            name if name is not None else self.name,
            tuple(v for v in self.vertices if v in ws),
            tuple(a for a in self.arrows if a.source in ws and a.target in ws))


# -- vertex classification ----------------------------------------------------

@dataclass(frozen=True)
class VertexInfo:
    sink: bool
    source: bool
    branch_vertex: bool
    infinite_emitter: bool
    regular: bool
    line_point: bool
    leak: bool = False  # provably False on every finite digraph


def _is_line_point(g: Digraph, v: str) -> bool:
    # successor subgraph must be a simple path ending at a sink
    seen = {v}
    cur = v
    while True:
        deg = g.out_degree(cur)
        if deg == 0:
            return True
        if deg != 1:
            return False
        nxt = g._out[cur][0].target
        if nxt in seen:
            return False
        seen.add(nxt)
        cur = nxt


def classify_vertices(g: Digraph) -> dict[str, VertexInfo]:
    out = {}
    for v in g.vertices:
        deg = g.out_degree(v)
        omega = any(is_omega(a.multiplicity) for a in g._out[v])
        out[v] = VertexInfo(
            sink=deg == 0,
            source=not g._in[v],
            branch_vertex=deg >= 2,
            infinite_emitter=omega,
            regular=0 < deg < OMEGA,
            line_point=_is_line_point(g, v),
            leak=False,
        )
    return out


# -- geometric cycles ---------------------------------------------------------

@dataclass(frozen=True)
class GeometricCycle:
    """Arrow ids of a simple cycle, canonically rotated."""

    arrows: tuple[str, ...]

    @staticmethod
    def canonical_rotation(arrows: Sequence[str]) -> tuple[str, ...]:
        k = min(range(len(arrows)), key=lambda i: arrows[i])
        return tuple(arrows[k:]) + tuple(arrows[:k])

    @classmethod
    def of(cls, arrows: Sequence[str]) -> "GeometricCycle":
        if not arrows:
            raise ValueError("a cycle needs at least one arrow")
        return cls(cls.canonical_rotation(list(arrows)))

    def __len__(self):
        return len(self.arrows)

    def label(self) -> str:
        return "(" + " ".join(self.arrows) + ")"


def cycle_vertices(g: Digraph, cycle: GeometricCycle) -> tuple[str, ...]:
    """Sources of the cycle's arrows, in cycle order; validates the shape."""
    arrows = [g.arrow(aid) for aid in cycle.arrows]
    for a, b in zip(arrows, arrows[1:] + arrows[:1]):
        if a.target != b.source:
            raise ValueError(f"{cycle.label()} is not a cycle in {g.name}: "
                             f"{a.id} ends at {a.target}, {b.id} starts at {b.source}")
    sources = tuple(a.source for a in arrows)
    if len(set(sources)) != len(sources):
        raise ValueError(f"{cycle.label()} revisits a vertex; cycles must be simple")
    return sources


def base_vertex(g: Digraph, cycle: GeometricCycle) -> str:
    return g.arrow(cycle.arrows[0]).source


@dataclass(frozen=True)
class CycleInfo:
    cycle: GeometricCycle
    has_exit: bool
    exclusive: bool
    multiplicity_one: bool


def _vertex_cycles(g: Digraph) -> Iterator[list[str]]:
    """Vertex sequences of simple cycles of length >= 2 (parallel classes merged)."""
    simple = nx.DiGraph()
    simple.add_nodes_from(g.vertices)
    simple.add_edges_from(sorted({(a.source, a.target)
                                  for a in g.arrows if a.source != a.target}))
    yield from nx.simple_cycles(simple)


def enumerate_cycles(g: Digraph, limit: int = 10_000) -> list[CycleInfo]:
    """All geometric cycles with exit/exclusive flags, sorted deterministically."""
    if limit < 1:
        raise ValueError("limit must be positive")
    found: set[GeometricCycle] = set()

    def add(arrows):
        found.add(GeometricCycle.of(arrows))
        if len(found) > limit:
            raise ResourceLimitError(f"digraph {g.name} has more than {limit} cycles")

    for a in g.arrows:
        if a.source == a.target:
            add([a.id])
    classes_between: dict[tuple[str, str], list[str]] = {}
    for a in g.arrows:
        classes_between.setdefault((a.source, a.target), []).append(a.id)
    for vs in _vertex_cycles(g):
        hops = [(vs[i], vs[(i + 1) % len(vs)]) for i in range(len(vs))]
        choices = [classes_between[h] for h in hops]
        stack = [[]]
        while stack:
            prefix = stack.pop()
            if len(prefix) == len(hops):
                add(prefix)
                continue
            for aid in reversed(choices[len(prefix)]):
                stack.append(prefix + [aid])

    cycles = sorted(found, key=lambda c: (len(c.arrows), c.arrows))
    vertex_sets = {c: frozenset(cycle_vertices(g, c)) for c in cycles}
    hits: dict[str, int] = {}
    for c in cycles:
        for v in vertex_sets[c]:
            hits[v] = hits.get(v, 0) + 1
    out = []
    for c in cycles:
        arrows = [g.arrow(aid) for aid in c.arrows]
        mult_one = all(a.multiplicity == 1 for a in arrows)
        no_exit = mult_one and all(g.out_degree(v) == 1 for v in vertex_sets[c])
        out.append(CycleInfo(
            cycle=c,
            has_exit=not no_exit,
            exclusive=all(hits[v] == 1 for v in vertex_sets[c]),
            multiplicity_one=mult_one,
        ))
    return out


def find_any_cycle(g: Digraph) -> GeometricCycle | None:
    """Deterministic DFS for a single cycle, cheap for acyclicity checks."""
    color = {v: 0 for v in g.vertices}
    parent_arrow: dict[str, ArrowClass] = {}
    for root in g.vertices:
        if color[root]:
            continue
        stack = [(root, iter(sorted(g._out[root], key=lambda a: a.id)))]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for a in it:
                if a.source == a.target:
                    return GeometricCycle.of([a.id])
                w = a.target
                if color[w] == 1:
                    arrows = [a.id]
                    cur = v
                    while cur != w:
                        pa = parent_arrow[cur]
                        arrows.append(pa.id)
                        cur = pa.source
                    return GeometricCycle.of(list(reversed(arrows)))
                if color[w] == 0:
                    color[w] = 1
                    parent_arrow[w] = a
                    stack.append((w, iter(sorted(g._out[w], key=lambda x: x.id))))
                    advanced = True
                    break
            if not advanced:
                color[v] = 2
                stack.pop()
    return None


# -- hereditary and saturated sets ---------------------------------------------

def hereditary_saturated_closure(g: Digraph, xs: Iterable[str]) -> frozenset[str]:
    """Smallest hereditary and saturated vertex set containing xs."""
    xs = set(xs)
    g.check_vertices(xs)
    current = set(xs)
    while True:
        changed = False
        for a in g.arrows:
            if a.source in current and a.target not in current:
                current.add(a.target)
                changed = True
        for v in g.vertices:
            if v in current:
                continue
            deg = g.out_degree(v)
            if 0 < deg < OMEGA and all(a.target in current for a in g._out[v]):
                current.add(v)
                changed = True
        if not changed:
            return frozenset(current)


def is_hereditary(g: Digraph, hs: frozenset[str] | set[str]) -> bool:
    return all(a.target in hs for a in g.arrows if a.source in hs)


def is_saturated(g: Digraph, hs: frozenset[str] | set[str]) -> bool:
    for v in g.vertices:
        if v in hs:
            continue
        deg = g.out_degree(v)
        if 0 < deg < OMEGA and all(a.target in hs for a in g._out[v]):
            return False
    return True


def enumerate_hereditary_saturated(g: Digraph, limit: int = 10_000,
                                   max_vertices: int = 16) -> list[frozenset[str]]:
    """All hereditary saturated subsets, sorted by (size, members)."""
    n = len(g.vertices)
    if n > max_vertices:
        raise ResourceLimitError(
            f"digraph {g.name} has {n} vertices; subset sweep capped at {max_vertices}")
    out = []
    for mask in range(1 << n):
        hs = frozenset(v for i, v in enumerate(g.vertices) if mask >> i & 1)
        if is_hereditary(g, hs) and is_saturated(g, hs):
            out.append(hs)
            if len(out) > limit:
                raise ResourceLimitError(
                    f"digraph {g.name} has more than {limit} hereditary saturated sets")
    return sorted(out, key=lambda s: (len(s), sorted(s)))


def breaking_vertices(g: Digraph, hs: Iterable[str]) -> frozenset[str]:
    """Infinite emitters with finitely many, but at least one, arrows into V∖H."""
    hs = set(hs)
    g.check_vertices(hs)
    if not is_hereditary(g, hs):
        raise NotHereditaryError(f"{sorted(hs)} is not hereditary in {g.name}")
    out = set()
    for v in g.vertices:
        arrows = g._out[v]
        if not any(is_omega(a.multiplicity) for a in arrows):
            continue
        escaping = [a for a in arrows if a.target not in hs]
        if escaping and not any(is_omega(a.multiplicity) for a in escaping):
            out.add(v)
    return frozenset(out)


def instances_escaping(g: Digraph, v: str, hs: Iterable[str]) -> frozenset[tuple[str, int]]:
    """(arrow id, instance index) pairs leaving v whose target is outside hs.

    Only defined when that set is finite, i.e. no ω class escapes.
    """
    hs = set(hs)
    out = set()
    for a in g._out[v]:
        if a.target in hs:
            continue
        if is_omega(a.multiplicity):
            raise ValueError(f"ω class {a.id} escapes {sorted(hs)}; instance set is infinite")
        for i in range(a.multiplicity):
            out.add((a.id, i))
    return frozenset(out)


# -- digraph morphisms ----------------------------------------------------------

@dataclass(frozen=True)
class DigraphMorphism:
    name: str
    source: Digraph
    target: Digraph
    vertex_map: Mapping[str, str]
    arrow_map: Mapping[str, str]


@dataclass(frozen=True)
class MorphismReport:
    valid: bool
    violations: tuple[str, ...]
    notes: tuple[str, ...] = ()


def check_admissible_morphism(m: DigraphMorphism) -> MorphismReport:
    """Admissibility of a digraph morphism: finite fibers, target bijections on
    arrow fibers, and sinks landing on sinks or infinite emitters."""
    src, dst = m.source, m.target
    for g, kind in ((src, "source"), (dst, "target")):
        for a in g.arrows:
            if a.multiplicity != 1:
                raise MalformedMorphismError(
                    f"{kind} digraph {g.name} has a class of multiplicity != 1 ({a.id})")
    if set(m.vertex_map) != set(src.vertices):
        raise MalformedMorphismError(f"morphism {m.name}: vertex map is not total")
    if set(m.arrow_map) != {a.id for a in src.arrows}:
        raise MalformedMorphismError(f"morphism {m.name}: arrow map is not total")
    for v, w in m.vertex_map.items():
        if not dst.has_vertex(w):
            raise MalformedMorphismError(f"morphism {m.name}: image vertex {w!r} unknown")
    for e, f_ in m.arrow_map.items():
        if not dst.has_arrow(f_):
            raise MalformedMorphismError(f"morphism {m.name}: image arrow {f_!r} unknown")
        a, b = src.arrow(e), dst.arrow(f_)
        if m.vertex_map[a.source] != b.source or m.vertex_map[a.target] != b.target:
            raise MalformedMorphismError(
                f"morphism {m.name}: arrow {e} does not commute with source/target")

    violations = []
    notes = ["fibers are finite (finite digraphs)"]
    dst_info = classify_vertices(dst)
    for b in dst.arrows:
        fiber = sorted(e for e, f_ in m.arrow_map.items() if f_ == b.id)
        targets = [src.arrow(e).target for e in fiber]
        vertex_fiber = sorted(v for v, w in m.vertex_map.items() if w == b.target)
        if sorted(targets) != vertex_fiber or len(set(targets)) != len(targets):
            violations.append(
                f"arrow {b.id}: target map on its fiber is not a bijection")
    for v in src.vertices:
        if src._out[v]:
            continue
        w = m.vertex_map[v]
        if not (dst_info[w].sink or dst_info[w].infinite_emitter):
            violations.append(f"sink {v}: image {w} is neither a sink nor an infinite emitter")
    return MorphismReport(valid=not violations, violations=tuple(violations),
                          notes=tuple(notes))


# -- DOT export ------------------------------------------------------------------

def to_dot(g: Digraph) -> str:
    """Deterministic DOT rendering; declaration order, ω labelled as such."""
    lines = [f'digraph "{g.name}" {{']
    for v in g.vertices:
        lines.append(f'  "{v}";')
    for a in g.arrows:
        if is_omega(a.multiplicity):
            label = f"{a.id} (ω)"
        elif a.multiplicity != 1:
            label = f"{a.id} (x{a.multiplicity})"
        else:
            label = a.id
        lines.append(f'  "{a.source}" -> "{a.target}" [label="{label}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
