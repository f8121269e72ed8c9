"""Quiver presentations and the truncated path-algebra constructor.

A presentation is a quiver with relations together with a truncation length
``L``; the resulting category has one object per vertex and basis the paths of
length < L, reduced modulo the ideal generated by the relations (and by every
path of length >= L, which the truncation kills).  The ideal is computed by
linear closure inside the finite-dimensional truncated path space, so no
Groebner machinery is needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, TruncationTooSmall
from .exactla import PrimeField, rref_mod
from .fdcat import FDCategory


@dataclass(frozen=True)
class Arrow:
    name: str
    source: str
    target: str


@dataclass
class QuiverPresentation:
    """A quiver with relations over F_p, truncated at path length ``trunc``.

    Relations are lists of ``(coefficient, path)`` terms where a path is a
    tuple of arrow names in traversal order (first arrow first); all terms of
    a relation must be parallel paths of length >= 2.
    """

    p: int
    vertices: list[str]
    arrows: list[Arrow]
    relations: list[list[tuple[int, tuple[str, ...]]]] = field(default_factory=list)
    trunc: int = 2
    name: str | None = None

    def __post_init__(self):
        PrimeField(self.p)
        if self.trunc < 1:
            raise BadParameter(f"truncation length must be >= 1, got {self.trunc}")
        if len(set(self.vertices)) != len(self.vertices):
            raise BadParameter("duplicate vertex names")
        seen = set()
        for a in self.arrows:
            if a.name in seen:
                raise BadParameter(f"duplicate arrow name {a.name!r}")
            seen.add(a.name)
            if a.source not in self.vertices or a.target not in self.vertices:
                raise BadParameter(f"arrow {a.name!r} uses an unknown vertex")
        arrow_by_name = {a.name: a for a in self.arrows}
        for rel in self.relations:
            if not rel:
                raise BadParameter("empty relation")
            ends = set()
            for coeff, path in rel:
                if len(path) < 2:
                    raise BadParameter("relation terms must be paths of length >= 2")
                for nm in path:
                    if nm not in arrow_by_name:
                        raise BadParameter(f"relation uses an unknown arrow {nm!r}")
                for step, nxt in zip(path, path[1:]):
                    if arrow_by_name[step].target != arrow_by_name[nxt].source:
                        raise BadParameter(f"path {'*'.join(path)} is not composable")
                ends.add((arrow_by_name[path[0]].source, arrow_by_name[path[-1]].target))
            if len(ends) > 1:
                raise BadParameter("relation terms must be parallel paths")


def _enumerate_paths(q: QuiverPresentation):
    """All paths of length < trunc as (source, target, word).

    A path is keyed by (source vertex, tuple of arrow names in traversal
    order); the list is sorted by (length, word) with trivial paths first in
    vertex order.
    """
    paths = [(v, v, ()) for v in q.vertices]
    frontier = list(paths)
    for _ in range(1, q.trunc):
        nxt = []
        for (s, t, w) in frontier:
            for a in q.arrows:
                if a.source == t:
                    nxt.append((s, a.target, w + (a.name,)))
        frontier = nxt
        paths.extend(frontier)
    vorder = {v: i for i, v in enumerate(q.vertices)}
    paths.sort(key=lambda st: (len(st[2]), st[2], vorder[st[0]]))
    return paths


def from_quiver(q: QuiverPresentation) -> FDCategory:
    """The truncated path category of a presentation.

    Raises TruncationTooSmall for a relation mixing terms shorter than the
    truncation with terms the truncation already kills (such a relation would
    silently change meaning); relations all of whose terms have length >=
    trunc are vacuous here and are ignored.
    """
    p = q.p
    arrow_by_name = {a.name: a for a in q.arrows}
    paths = _enumerate_paths(q)
    index = {(s, w): k for k, (s, t, w) in enumerate(paths)}
    npaths = len(paths)

    def path_source(word):
        return arrow_by_name[word[0]].source

    rel_vectors = []
    for rel in q.relations:
        short = [term for term in rel if len(term[1]) < q.trunc]
        if short and len(short) < len(rel):
            raise TruncationTooSmall(
                f"relation mixes terms below and at/above the truncation length {q.trunc}"
            )
        if not short:
            continue  # every term is killed by the truncation already
        vec = np.zeros(npaths, dtype=np.int64)
        for coeff, path in rel:
            vec[index[(path_source(path), tuple(path))]] += coeff
        rel_vectors.append(vec % p)

    # linear closure of the relation span under arrow multiplication
    if rel_vectors:
        span, rank, _ = rref_mod(np.array(rel_vectors, dtype=np.int64), p)
        span = span[:rank]
        while True:
            new_rows = [span]
            for row in span:
                for a in q.arrows:
                    right = np.zeros(npaths, dtype=np.int64)  # row . a (a first)
                    left = np.zeros(npaths, dtype=np.int64)  # a . row (row first)
                    for k in np.nonzero(row)[0]:
                        s, t, w = paths[k]
                        if a.target == s and len(w) + 1 < q.trunc:
                            right[index[(a.source, (a.name,) + w)]] += row[k]
                        if a.source == t and len(w) + 1 < q.trunc:
                            left[index[(s, w + (a.name,))]] += row[k]
                    if right.any():
                        new_rows.append(right[None, :] % p)
                    if left.any():
                        new_rows.append(left[None, :] % p)
            stacked = np.concatenate(new_rows, axis=0)
            reduced, new_rank, _ = rref_mod(stacked, p)
            if new_rank == span.shape[0]:
                break
            span = reduced[:new_rank]
        ideal, ideal_rank, ideal_pivots = rref_mod(span, p)
        ideal = ideal[:ideal_rank]
    else:
        ideal = np.zeros((0, npaths), dtype=np.int64)
        ideal_pivots = []

    def reduce_vec(v):
        v = v % p
        for row_idx, piv in enumerate(ideal_pivots):
            if v[piv]:
                v = (v - v[piv] * ideal[row_idx]) % p
        return v

    keep = [k for k in range(npaths) if k not in set(ideal_pivots)]
    pos = {k: i for i, k in enumerate(keep)}
    d = len(keep)
    vtx_index = {v: i for i, v in enumerate(q.vertices)}

    names, src, tgt = [], [], []
    for k in keep:
        s, t, w = paths[k]
        names.append("*".join(w) if w else f"e_{s}")
        src.append(vtx_index[s])
        tgt.append(vtx_index[t])

    mult = np.zeros((d, d, d), dtype=np.int64)
    for bi, ki in enumerate(keep):
        si, ti, wi = paths[ki]
        for bj, kj in enumerate(keep):
            sj, tj, wj = paths[kj]
            if tj != si:
                continue
            word = wj + wi  # traverse j first, then i
            if len(word) >= q.trunc:
                continue
            vec = np.zeros(npaths, dtype=np.int64)
            vec[index[(sj, word)]] = 1
            red = reduce_vec(vec)
            for k in np.nonzero(red)[0]:
                mult[bi, bj, pos[k]] = red[k]

    units = np.zeros((len(q.vertices), d), dtype=np.int64)
    for k in keep:
        s, t, w = paths[k]
        if not w:
            units[vtx_index[s], pos[k]] = 1

    name = q.name or f"kQ<{q.trunc}({len(q.relations)} rels)"
    return FDCategory(p, q.vertices, names, src, tgt, mult, units, name=name)
