"""Shared test oracles, independent of the library code paths they check."""

from __future__ import annotations

import itertools
from fractions import Fraction

from leavitt.digraph import Digraph, is_omega


# -- label isomorphism (structure match ignoring id names) ------------------------

def _mult_profile(g: Digraph, u: str, w: str):
    return sorted(a.multiplicity for a in g.arrows if a.source == u and a.target == w)


def label_isomorphic(g1: Digraph, g2: Digraph) -> bool:
    """Backtracking search for a structure-preserving vertex bijection."""
    if len(g1.vertices) != len(g2.vertices) or len(g1.arrows) != len(g2.arrows):
        return False

    def signature(g, v):
        outs = sorted(a.multiplicity for a in g.arrows if a.source == v)
        ins = sorted(a.multiplicity for a in g.arrows if a.target == v)
        return (tuple(outs), tuple(ins))

    sig1 = {v: signature(g1, v) for v in g1.vertices}
    sig2 = {v: signature(g2, v) for v in g2.vertices}
    if sorted(sig1.values()) != sorted(sig2.values()):
        return False
    order = sorted(g1.vertices)

    def extend(mapping, used):
        if len(mapping) == len(order):
            return True
        v = order[len(mapping)]
        for w in g2.vertices:
            if w in used or sig1[v] != sig2[w]:
                continue
            ok = True
            for v0, w0 in mapping.items():
                if (_mult_profile(g1, v, v0) != _mult_profile(g2, w, w0)
                        or _mult_profile(g1, v0, v) != _mult_profile(g2, w0, w)):
                    ok = False
                    break
            if ok and _mult_profile(g1, v, v) == _mult_profile(g2, w, w):
                mapping[v] = w
                used.add(w)
                if extend(mapping, used):
                    return True
                del mapping[v]
                used.discard(w)
        return False

    return extend({}, set())


# -- instance-level path machinery ----------------------------------------------

def arrow_instances(g: Digraph):
    """(arrow id, index) pairs; requires a row-finite digraph."""
    out = []
    for a in g.arrows:
        assert not is_omega(a.multiplicity)
        out.extend((a.id, i) for i in range(a.multiplicity))
    return out


def paths_from(g: Digraph, v: str, max_len: int):
    """All instance-level paths starting at v, up to max_len arrows.

    Yields lists of (arrow id, index); the empty path comes first.
    """
    stack = [(v, [])]
    while stack:
        cur, path = stack.pop()
        yield path
        if len(path) >= max_len:
            continue
        for a in g.out_arrows(cur):
            assert not is_omega(a.multiplicity)
            for i in range(a.multiplicity):
                stack.append((a.target, path + [(a.id, i)]))


def maximal_paths_from(g: Digraph, v: str):
    """Maximal instance-level paths from v; None if a path exceeds |V| arrows (cycle)."""
    out = []
    limit = len(g.vertices)

    def walk(cur, path):
        if len(path) > limit:
            raise RecursionError
        arrows = g.out_arrows(cur)
        if not arrows:
            out.append(list(path))
            return
        for a in arrows:
            for i in range(a.multiplicity):
                walk(a.target, path + [(a.id, i)])

    try:
        walk(v, [])
    except RecursionError:
        return None
    return out


def paths_into(g: Digraph, v: str):
    """Instance-level paths ending at v (trivial path included), for acyclic regions."""
    out = [()]
    for a in g.in_arrows(v):
        for i in range(a.multiplicity):
            for p in paths_into(g, a.source):
                out.append(p + ((a.id, i),))
    return out


# -- exact rank over Q ----------------------------------------------------------

def exact_rank(rows) -> int:
    """Row-echelon rank over Fraction; rows is a list of equal-length vectors."""
    mat = [[Fraction(x) for x in row] for row in rows]
    cols = len(mat[0]) if mat else 0
    pivot_row = 0
    for col in range(cols):
        pivot = next((r for r in range(pivot_row, len(mat)) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[pivot_row], mat[pivot] = mat[pivot], mat[pivot_row]
        pv = mat[pivot_row][col]
        for r in range(pivot_row + 1, len(mat)):
            if mat[r][col] != 0:
                factor = mat[r][col] / pv
                mat[r] = [a - factor * b for a, b in zip(mat[r], mat[pivot_row])]
        pivot_row += 1
        if pivot_row == len(mat):
            break
    return pivot_row


# -- explicit matrix representation of an acyclic digraph -------------------------

class SinkBlockRepresentation:
    """Block-matrix model of the path-algebra quotient of a finite acyclic
    row-finite digraph: one block per sink, basis indexed by pairs of paths
    ending at that sink.  Provides the images of vertices and arrow
    instances, relation checks, and the rank of the represented spanning set.
    """

    def __init__(self, g: Digraph):
        self.g = g
        self.sinks = g.sinks()
        self.paths = {v: paths_into(g, v) for v in self.sinks}
        self.basis = []  # (sink, p, q)
        for v in self.sinks:
            for p in self.paths[v]:
                for q in self.paths[v]:
                    self.basis.append((v, p, q))
        self.index = {b: i for i, b in enumerate(self.basis)}
        self.n = len(self.basis)

    def _zero(self):
        return [[0] * self.n for _ in range(self.n)]

    def _path_source(self, sink, p):
        return self.g.arrow(p[0][0]).source if p else sink

    def vertex_matrix(self, u: str):
        m = self._zero()
        for (v, p, q), i in self.index.items():
            if self._path_source(v, p) == u:
                m[i][i] = 1
        return m

    def arrow_matrix(self, aid: str, idx: int):
        a = self.g.arrow(aid)
        m = self._zero()
        for (v, p, q), col in self.index.items():
            if self._path_source(v, p) != a.target:
                continue
            row = self.index[(v, ((aid, idx),) + tuple(p), q)]
            m[row][col] = 1
        return m

    @staticmethod
    def mul(a, b):
        n = len(a)
        return [[sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)]
                for i in range(n)]

    @staticmethod
    def transpose(a):
        return [list(row) for row in zip(*a)]

    @staticmethod
    def add(a, b):
        return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]

    def path_matrix(self, path):
        m = None
        for aid, idx in path:
            step = self.arrow_matrix(aid, idx)
            m = step if m is None else self.mul(m, step)
        return m

    def check_relations(self) -> list[str]:
        g = self.g
        failures = []
        vm = {u: self.vertex_matrix(u) for u in g.vertices}
        am = {(aid, i): self.arrow_matrix(aid, i) for aid, i in arrow_instances(g)}
        for u, w in itertools.product(g.vertices, repeat=2):
            expected = vm[u] if u == w else self._zero()
            if self.mul(vm[u], vm[w]) != expected:
                failures.append(f"(V) fails at {u},{w}")
        for (aid, i), e in am.items():
            a = g.arrow(aid)
            if self.mul(vm[a.source], e) != e or self.mul(e, vm[a.target]) != e:
                failures.append(f"(E) fails at {aid}#{i}")
        for (aid, i), e in am.items():
            for (bid, jx), f in am.items():
                expected = vm[g.arrow(aid).target] if (aid, i) == (bid, jx) else self._zero()
                if self.mul(self.transpose(e), f) != expected:
                    failures.append(f"(CK1) fails at {aid}#{i},{bid}#{jx}")
        for u in g.vertices:
            arrows = g.out_arrows(u)
            if not arrows:
                continue
            acc = self._zero()
            for a in arrows:
                for i in range(a.multiplicity):
                    e = am[(a.id, i)]
                    acc = self.add(acc, self.mul(e, self.transpose(e)))
            if acc != vm[u]:
                failures.append(f"(CK2) fails at {u}")
        return failures

    def spanning_rank(self) -> int:
        vectors = []
        for v in self.sinks:
            for p in self.paths[v]:
                mp = self.path_matrix(p)
                for q in self.paths[v]:
                    mq = self.path_matrix(q)
                    if mp is None and mq is None:
                        m = self.vertex_matrix(v)
                    elif mp is None:
                        m = self.transpose(mq)
                    elif mq is None:
                        m = mp
                    else:
                        m = self.mul(mp, self.transpose(mq))
                    vectors.append([x for row in m for x in row])
        return exact_rank(vectors)
