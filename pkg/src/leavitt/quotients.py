"""The three digraph constructions and the quotient decision procedure.

* graded quotient Γ/(H, S): delete H, add a primed sink v' for each breaking
  vertex kept out of S, duplicate arrows into those vertices toward the sinks;
* cycle-to-loop rewrite: replace the first arrow of a no-exit cycle by a loop
  at its source, leaving everything else alone;
* severing Γ//J: graded quotient, then cycles to loops, then each loop
  replaced by deg θ(C) fresh sinks with every incoming arrow split into that
  many copies.

Severing depends only on the degrees of θ.  The quotient is (isomorphic to)
a path algebra quotient of the same kind exactly when every θ(C) factors
into distinct linear factors; the decision procedure reports a witness per
cycle and, on success, an explicit generator-image certificate.

Fresh-id scheme: primed ids append a prime character, split ids append
``.j`` (j from 1), so provenance stays readable and DOT output is stable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .digraph import (
    ArrowClass,
    Digraph,
    GeometricCycle,
    base_vertex,
    breaking_vertices,
    cycle_vertices,
    enumerate_cycles,
    is_omega,
)
from .errors import (
    CycleHasExitError,
    CyclesNotDisjointError,
    InternalConsistencyError,
    InvalidIdealError,
    NotDlfError,
    UnsupportedShapeError,
)
from .fields import DlfVerdict, Polynomial, Scalar, find_roots, is_dlf, squarefree_part
from .ideals import AdmissiblePair, IdealPresentation, ensure_admissible, validate_ideal


@dataclass(frozen=True)
class QuotientResult:
    """A constructed digraph plus, for every new id, where it came from."""

    digraph: Digraph
    provenance: Mapping[str, str]


def _fresh(name: str, taken: set[str]) -> str:
    if name in taken:
        raise InternalConsistencyError(f"fresh id {name!r} collides with an existing id")
    taken.add(name)
    return name


def graded_quotient(g: Digraph, pair: AdmissiblePair) -> QuotientResult:
    """Γ/(H, S): survivors keep their ids; each v ∈ B_H∖S gets a sink v'."""
    ensure_admissible(g, pair)
    primed = breaking_vertices(g, pair.h) - pair.s
    taken = set(g.vertices) | {a.id for a in g.arrows}
    vertices: list[str] = []
    provenance: dict[str, str] = {}
    for v in g.vertices:
        if v not in pair.h:
            vertices.append(v)
            provenance[v] = f"vertex {v}"
    for v in g.vertices:
        if v in primed:
            vp = _fresh(v + "'", taken)
            vertices.append(vp)
            provenance[vp] = f"breaking-sink {v}"
    arrows: list[ArrowClass] = []
    for a in g.arrows:
        if a.target not in pair.h:
            arrows.append(a)
            provenance[a.id] = f"arrow {a.id}"
    for a in g.arrows:
        if a.target in primed:
            ap = _fresh(a.id + "'", taken)
            arrows.append(ArrowClass(ap, a.source, a.target + "'", a.multiplicity))
            provenance[ap] = f"breaking-arrow {a.id}"
    return QuotientResult(Digraph(g.name, vertices, arrows), provenance)


def _check_no_exit(g: Digraph, cycle: GeometricCycle):
    for aid in cycle.arrows:
        if g.arrow(aid).multiplicity != 1:
            raise CycleHasExitError(
                f"cycle {cycle.label()} has a class of multiplicity != 1 in {g.name}")
    for v in cycle_vertices(g, cycle):
        if g.out_degree(v) != 1:
            raise CycleHasExitError(f"cycle {cycle.label()} has an exit at {v} in {g.name}")


def cycle_to_loop(g: Digraph, cycles: Iterable[GeometricCycle]) -> QuotientResult:
    """Rewrite each no-exit cycle so its first arrow becomes a loop at the base."""
    cycles = [GeometricCycle.of(c.arrows) for c in cycles]
    seen_vertices: set[str] = set()
    for c in cycles:
        vs = set(cycle_vertices(g, c))
        if vs & seen_vertices:
            raise CyclesNotDisjointError("cycles to rewrite share a vertex")
        seen_vertices |= vs
        _check_no_exit(g, c)
    taken = set(g.vertices) | {a.id for a in g.arrows}
    replacement: dict[str, ArrowClass] = {}
    provenance: dict[str, str] = {v: f"vertex {v}" for v in g.vertices}
    for c in cycles:
        if len(c) == 1:
            continue  # already a loop
        first = g.arrow(c.arrows[0])
        loop_id = _fresh(first.id + "'", taken)
        replacement[first.id] = ArrowClass(loop_id, first.source, first.source, 1)
        provenance[loop_id] = f"loop-rewrite {first.id}"
    arrows = []
    for a in g.arrows:
        if a.id in replacement:
            arrows.append(replacement[a.id])
        else:
            arrows.append(a)
            provenance[a.id] = f"arrow {a.id}"
    return QuotientResult(Digraph(g.name, g.vertices, arrows), provenance)


def loop_arrow_of(cycle: GeometricCycle) -> str:
    """Id of the loop that represents the cycle after the rewrite."""
    return cycle.arrows[0] if len(cycle) == 1 else cycle.arrows[0] + "'"


def split_sink_ids(g_or_base, cycle: GeometricCycle, degree: int) -> list[str]:
    """Fresh sink ids for a severed cycle: ``<base>.1 .. <base>.d``."""
    base = g_or_base if isinstance(g_or_base, str) else base_vertex(g_or_base, cycle)
    return [f"{base}.{j}" for j in range(1, degree + 1)]


def _validated(g: Digraph, j: IdealPresentation) -> IdealPresentation:
    report = validate_ideal(g, j)
    if not report.valid:
        raise InvalidIdealError(report.violations)
    return j


def sever(g: Digraph, j: IdealPresentation) -> QuotientResult:
    """Γ//J: graded quotient, cycles to loops, loops into deg θ(C) sinks.

    Defined for any valid presentation; only the degrees of θ matter here.
    """
    _validated(g, j)
    q1 = graded_quotient(g, j.pair)
    q2 = cycle_to_loop(q1.digraph, j.beta)
    work = q2.digraph
    provenance = dict(q2.provenance)
    for new, origin in q1.provenance.items():
        if origin != f"vertex {new}" and origin != f"arrow {new}":
            provenance[new] = origin

    taken = set(work.vertices) | {a.id for a in work.arrows}
    vertex_order = list(work.vertices)
    arrow_order: list[ArrowClass] = list(work.arrows)
    for cycle in j.beta:
        degree = j.theta[cycle].degree
        base = base_vertex(g, cycle)  # first arrow keeps its source through the pipeline
        loop_id = loop_arrow_of(cycle)
        sinks = [_fresh(s, taken) for s in split_sink_ids(base, cycle, degree)]
        pos = vertex_order.index(base)
        vertex_order[pos:pos + 1] = sinks
        provenance.pop(base, None)
        for jdx, s in enumerate(sinks, 1):
            provenance[s] = f"cycle-sink {base} root {jdx}"
        rebuilt: list[ArrowClass] = []
        for a in arrow_order:
            if a.id == loop_id:
                provenance.pop(a.id, None)
                continue
            if a.target == base:
                if a.source == base:
                    raise InternalConsistencyError(
                        f"unexpected second loop {a.id} at severed vertex {base}")
                provenance.pop(a.id, None)
                for jdx, s in enumerate(sinks, 1):
                    copy_id = _fresh(f"{a.id}.{jdx}", taken)
                    rebuilt.append(ArrowClass(copy_id, a.source, s, a.multiplicity))
                    provenance[copy_id] = f"split-arrow {a.id} copy {jdx}"
            else:
                rebuilt.append(a)
        arrow_order = rebuilt
    digraph = Digraph(g.name, vertex_order, arrow_order)
    missing = (set(digraph.vertices) | {a.id for a in digraph.arrows}) ^ set(provenance)
    if missing:
        raise InternalConsistencyError(f"provenance does not cover {sorted(missing)}")
    return QuotientResult(digraph, provenance)


@dataclass(frozen=True)
class CycleDlfReport:
    label: str
    cycle: GeometricCycle
    verdict: DlfVerdict


@dataclass(frozen=True)
class DecideResult:
    is_lpa: bool
    reports: tuple[CycleDlfReport, ...]
    severed: QuotientResult | None

    def failing(self) -> tuple[CycleDlfReport, ...]:
        return tuple(r for r in self.reports if not r.verdict.is_dlf)


def decide_lpa_quotient(g: Digraph, j: IdealPresentation) -> DecideResult:
    """Is the quotient by j again of path-algebra type?  Yes iff j is dlf."""
    _validated(g, j)
    reports = tuple(
        CycleDlfReport(j.label_of(c), c, is_dlf(j.theta[c])) for c in j.beta)
    ok = all(r.verdict.is_dlf for r in reports)
    return DecideResult(ok, reports, sever(g, j) if ok else None)


@dataclass(frozen=True)
class CertEntry:
    kind: str  # "vertex" | "arrow" | "cycle"
    generator: str
    image: tuple[tuple[Scalar, str], ...]


@dataclass(frozen=True)
class IsoCertificate:
    """Generator images of the isomorphism from the graded quotient onto Γ//J.

    Every vertex and arrow of Γ/(H, S) appears exactly once; the slot of each
    severed cycle's first arrow carries the cycle symbol, whose image lists
    the roots.
    """

    entries: tuple[CertEntry, ...]

    def image_of(self, generator: str) -> tuple[tuple[Scalar, str], ...]:
        for e in self.entries:
            if e.generator == generator:
                return e.image
        raise KeyError(generator)


def iso_certificate(g: Digraph, j: IdealPresentation) -> IsoCertificate:
    decision = decide_lpa_quotient(g, j)
    if not decision.is_lpa:
        bad = ", ".join(f"{r.label}: {r.verdict.describe(j.field)}" for r in decision.failing())
        raise NotDlfError(f"no certificate: {bad}")
    quotient = graded_quotient(g, j.pair).digraph
    roots_of: dict[GeometricCycle, list[Scalar]] = {}
    base_of: dict[GeometricCycle, str] = {}
    for c in j.beta:
        roots_of[c] = sorted(r for r, _ in find_roots(j.theta[c]).roots)
        base_of[c] = base_vertex(quotient, c)
    bases = {b: c for c, b in base_of.items()}
    first_arrows = {c.arrows[0]: c for c in j.beta}
    one = j.field.one

    entries: list[CertEntry] = []
    for v in quotient.vertices:
        if v in bases:
            c = bases[v]
            sinks = split_sink_ids(v, c, len(roots_of[c]))
            entries.append(CertEntry("vertex", v, tuple((one, s) for s in sinks)))
        else:
            entries.append(CertEntry("vertex", v, ((one, v),)))
    for a in quotient.arrows:
        if a.id in first_arrows:
            c = first_arrows[a.id]
            sinks = split_sink_ids(base_of[c], c, len(roots_of[c]))
            entries.append(CertEntry(
                "cycle", j.label_of(c),
                tuple(zip(roots_of[c], sinks))))
        elif a.target in bases:
            c = bases[a.target]
            copies = [f"{a.id}.{jdx}" for jdx in range(1, len(roots_of[c]) + 1)]
            entries.append(CertEntry("arrow", a.id, tuple((one, e) for e in copies)))
        else:
            entries.append(CertEntry("arrow", a.id, ((one, a.id),)))
    return IsoCertificate(tuple(entries))


@dataclass(frozen=True)
class RadicalResult:
    j_prime: IdealPresentation
    severed: QuotientResult
    degree_drops: tuple[tuple[str, int], ...]
    hypothesis_ok: bool
    hypothesis_violations: tuple[str, ...]


def radical_quotient(g: Digraph, j: IdealPresentation) -> RadicalResult:
    """Replace each θ(C) by its squarefree part; the drop measures nilpotency.

    The radical-equals-kernel reading needs every squarefree part to split
    into distinct linear factors over the field; when it does not, the
    construction still goes through and the violation is flagged.
    """
    _validated(g, j)
    new_theta: dict[GeometricCycle, Polynomial] = {}
    drops: list[tuple[str, int]] = []
    violations: list[str] = []
    for c in j.beta:
        f = j.theta[c]
        sf = squarefree_part(f)
        new_theta[c] = sf
        drops.append((j.label_of(c), f.degree - sf.degree))
        verdict = is_dlf(sf)
        if not verdict.is_dlf:
            violations.append(
                f"{j.label_of(c)}: squarefree part is not split "
                f"({verdict.describe(j.field)})")
    j_prime = IdealPresentation(field=j.field, pair=j.pair, beta=j.beta,
                                theta=new_theta, labels=dict(j.labels),
                                name=j.name + ".rad")
    return RadicalResult(j_prime, sever(g, j_prime), tuple(drops),
                         hypothesis_ok=not violations,
                         hypothesis_violations=tuple(violations))


# -- dimensions ----------------------------------------------------------------

def _paths_ending_at(g: Digraph, v: str, skip_arrows: frozenset[str],
                     memo: dict, active: set[str]) -> int:
    """Count of paths ending at v (trivial path included), multiplicities expanded."""
    key = (v, skip_arrows)
    if key in memo:
        return memo[key]
    if v in active:
        raise UnsupportedShapeError(
            f"a cycle feeds {v} in {g.name}; path counts are infinite")
    active.add(v)
    total = 1
    for a in g.in_arrows(v):
        if a.id in skip_arrows:
            continue
        if is_omega(a.multiplicity):
            raise UnsupportedShapeError(f"ω class {a.id} makes path counts infinite")
        total += a.multiplicity * _paths_ending_at(g, a.source, skip_arrows, memo, active)
    active.discard(v)
    memo[key] = total
    return total


def path_count_to(g: Digraph, v: str) -> int:
    """Number of paths ending at v, including the trivial path."""
    return _paths_ending_at(g, v, frozenset(), {}, set())


def partial_cycle_path_count(g: Digraph, cycle: GeometricCycle) -> int:
    """|P_C|: paths ending at the base vertex that do not traverse the full cycle.

    Each such path is an off-cycle prefix into some cycle vertex followed by
    the unique partial run to the base, so the count is the sum over cycle
    vertices of the off-cycle path counts into them.
    """
    skip = frozenset(cycle.arrows)
    memo: dict = {}
    return sum(_paths_ending_at(g, w, skip, memo, set())
               for w in cycle_vertices(g, cycle))


def quotient_dimension(g: Digraph, j: IdealPresentation | None = None) -> int:
    """Total dimension of the quotient: sink blocks plus severed cycle blocks.

    dim = Σ_sinks n(v)² + Σ_{C∈β} deg θ(C)·|P_C|², over the graded quotient
    when an ideal is given, over g itself (which must then be acyclic)
    otherwise.
    """
    if j is not None:
        _validated(g, j)
        work = graded_quotient(g, j.pair).digraph
        beta = j.beta
    else:
        work = g
        beta = ()
    if not work.is_row_finite:
        raise UnsupportedShapeError(f"{work.name} has an ω class; dimension is infinite")
    cycles = {info.cycle for info in enumerate_cycles(work)}
    if set(beta) != cycles:
        stray = sorted(c.label() for c in cycles - set(beta))
        if stray:
            raise UnsupportedShapeError(
                f"unsevered cycle(s) {', '.join(stray)} in {work.name}")
        raise UnsupportedShapeError("ideal lists cycles absent from the quotient")
    total = 0
    for v in work.sinks():
        total += path_count_to(work, v) ** 2
    for c in beta:
        total += j.theta[c].degree * partial_cycle_path_count(work, c) ** 2
    return total


@dataclass(frozen=True)
class DimensionBlocks:
    """Matrix-block view of a finite-dimensional quotient, for reporting."""

    sink_blocks: tuple[tuple[str, int], ...]           # (sink, n(v))
    cycle_blocks: tuple[tuple[str, int, int], ...]     # (cycle label, deg, |P_C|)

    @property
    def total(self) -> int:
        return (sum(n * n for _, n in self.sink_blocks)
                + sum(d * n * n for _, d, n in self.cycle_blocks))

    def grouped(self) -> tuple[tuple[int, int], ...]:
        """Sorted (block size, copies) pairs over all matrix blocks."""
        sizes: dict[int, int] = {}
        for _, n in self.sink_blocks:
            sizes[n] = sizes.get(n, 0) + 1
        for _, d, n in self.cycle_blocks:
            sizes[n] = sizes.get(n, 0) + d
        return tuple(sorted(sizes.items()))


def dimension_blocks(g: Digraph, j: IdealPresentation | None = None) -> DimensionBlocks:
    """Same preconditions as :func:`quotient_dimension`, but keep the block data."""
    quotient_dimension(g, j)  # validate shape first
    work = graded_quotient(g, j.pair).digraph if j is not None else g
    sinks = tuple((v, path_count_to(work, v)) for v in work.sinks())
    cycle_blocks = tuple(
        (j.label_of(c), j.theta[c].degree, partial_cycle_path_count(work, c))
        for c in j.beta) if j is not None else ()
    return DimensionBlocks(sinks, cycle_blocks)
