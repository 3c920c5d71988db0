"""Combinatorial classification of every section a polytope admits.

A sweep cone fixes the order of the vertices along the cutting direction;
inside the cone, an offset interval (or a breakpoint slot) fixes which edges
are crossed and which vertices are hit.  Each such cell determines the
vertex-facet incidence matrix of the section, and the canonical form of that
matrix under independent row and column permutations is the combinatorial
type.  Enumerating cells times offset slots therefore yields the complete,
exact catalog of section types, each with an exact witness hyperplane.

A cut whose section is empty or of dimension below dim(P) - 1 (a point, or
a flat lower face grazed by the hyperplane) is degenerate and is not a type;
full-dimensional sections that merely touch vertices are kept.
"""

from __future__ import annotations

import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from typing import NamedTuple, Optional

from .errors import InputError, InternalInvariantError
from .hyperplanes import Hyperplane, _canonical, enumerate_cells, sweep_arrangement
from .qmath import Q, qvec, vsub
from .search import _ambient_hyperplane
from .sections import (
    SectionIncidence,
    SlicingChamber,
    _chart_cut,
    parallel_chambers,
    pull_to_chart,
    section_polytope,
    slice_combinatorics,
)


class CombinatorialType(NamedTuple):
    """One section type: canonical incidence string, f-vector, one exact
    witness (ambient normal, offset), and how many (cone, slot) cells of the
    sweep decomposition realize it."""

    canonical_incidence: str
    f_vector: tuple
    witness: tuple
    multiplicity: int


# ---------------------------------------------------------------------------
# canonical form of a 0/1 incidence matrix

def _canonical_bits(rows) -> str:
    """Lexicographically least row-string form of a 0/1 matrix over
    independent row and column permutations.

    Iterated equitable refinement of row/column colors, individualizing one
    row of the first non-singleton color class and recursing over every
    choice in that class.  Color values are ranks of sorted signatures, so
    the branch set, and hence the minimum leaf, is invariant under
    relabeling.
    """
    R = len(rows)
    C = len(rows[0]) if rows else 0
    if R == 0 or C == 0:
        return ""
    rsup = [tuple(j for j, x in enumerate(r) if x) for r in rows]
    csup = [tuple(i for i in range(R) if rows[i][j]) for j in range(C)]

    def refine(rc, cc):
        while True:
            sig = [(rc[i], tuple(sorted(cc[j] for j in rsup[i])))
                   for i in range(R)]
            rank = {s: k for k, s in enumerate(sorted(set(sig)))}
            nrc = [rank[s] for s in sig]
            sig = [(cc[j], tuple(sorted(nrc[i] for i in csup[j])))
                   for j in range(C)]
            rank = {s: k for k, s in enumerate(sorted(set(sig)))}
            ncc = [rank[s] for s in sig]
            if nrc == rc and ncc == cc:
                return rc, cc
            rc, cc = nrc, ncc

    best = [None]
    budget = [50000]

    def leaf(rc, cc):
        # all row colors are singletons here; equal column colors can only
        # come from identical columns, so any tie order gives the same string
        rorder = sorted(range(R), key=lambda i: rc[i])
        corder = sorted(range(C), key=lambda j: cc[j])
        s = "|".join(
            "".join("1" if rows[i][j] else "0" for j in corder)
            for i in rorder
        )
        if best[0] is None or s < best[0]:
            best[0] = s

    def search(rc, cc):
        rc, cc = refine(rc, cc)
        classes = {}
        for i in range(R):
            classes.setdefault(rc[i], []).append(i)
        target = None
        for c in sorted(classes):
            if len(classes[c]) > 1:
                target = classes[c]
                break
        if target is None:
            leaf(rc, cc)
            return
        fresh = R + C
        for i in target:
            budget[0] -= 1
            if budget[0] < 0:
                raise InternalInvariantError(
                    "incidence canonicalization budget exhausted"
                )
            rc2 = list(rc)
            rc2[i] = fresh
            search(rc2, cc)

    search([0] * R, [0] * C)
    return best[0]


def canonical_incidence(inc: SectionIncidence) -> str:
    """Canonical form of a section's vertex-facet incidence matrix."""
    return _canonical_bits(inc.incidence)


# ---------------------------------------------------------------------------
# per-chamber classification

_MISS = object()


def _section_rows(S):
    facets = [frozenset(f) for f in S.incidence]
    return tuple(
        tuple(1 if i in f else 0 for f in facets)
        for i in range(len(S.vertices))
    )


def _type_for_chamber(P, ch: SlicingChamber, cache) -> Optional[tuple]:
    """(canonical string, f_vector) of the chamber's section, None for an
    empty cut or a degenerate section of dimension below dim(P) - 1.  The
    result depends only on which edges are crossed and which vertices are
    hit, so it is memoized on that key."""
    key = (ch.edges, ch.on_vertices)
    hit = cache.get(key, _MISS)
    if hit is not _MISS:
        return hit
    inc = slice_combinatorics(P, ch)
    if not inc.f_vector or len(inc.f_vector) < P.dim - 1:
        out = None
    elif ch.on_vertices:
        # vertices on the hyperplane: distinct facets of P may meet the
        # section in one common face, so the incidence of P's cut facets
        # can overcount; classify the concrete section hull instead
        S = section_polytope(P, ch)
        out = (_canonical_bits(_section_rows(S)), inc.f_vector)
    else:
        out = (_canonical_bits(inc.incidence), inc.f_vector)
    cache[key] = out
    return out


def slice_type(P, normal, offset, _cache=None) -> Optional[tuple]:
    """Combinatorial type (canonical string, f_vector) of one concrete
    ambient cut, or None when the section is empty or degenerate (dimension
    below dim(P) - 1) or the hyperplane misses the affine span of P."""
    Hc = pull_to_chart(P, Hyperplane(qvec(normal), Q(offset)))
    if Hc is None:
        return None
    cut = _chart_cut(P, Hc)
    ch = SlicingChamber("translational", cut.crossed, cut.touched,
                        tuple(Hc.normal), Hc.offset)
    return _type_for_chamber(P, ch, _cache if _cache is not None else {})


# ---------------------------------------------------------------------------
# optional symmetry reduction

def _lead_sign(w):
    for x in w:
        if x != 0:
            return 1 if x > 0 else -1
    raise InputError("degenerate vertex pair under symmetry", field="symmetry")


def _fan_action(P, A, perm):
    """Index permutation + orientation flips of the sweep hyperplanes under
    one vertex permutation.  Raises when the permutation is not a symmetry
    of the fan."""
    n = len(P.chart_vertices)
    if sorted(perm) != list(range(n)):
        raise InputError("not a permutation of the vertex indices",
                         field="symmetry")
    index = {h: k for k, h in enumerate(A.hyperplanes)}
    tau = []
    flip = []
    for k in range(len(A.hyperplanes)):
        i, j = A.provenance[k][0]
        w0 = vsub(P.chart_vertices[i], P.chart_vertices[j])
        w1 = vsub(P.chart_vertices[perm[i]], P.chart_vertices[perm[j]])
        if all(x == 0 for x in w1):
            raise InputError("permutation collapses a vertex pair",
                             field="symmetry")
        k1 = index.get(_canonical(w1, Q(0)))
        if k1 is None:
            raise InputError("permutation does not preserve the sweep fan",
                             field="symmetry")
        tau.append(k1)
        flip.append(_lead_sign(w0) * _lead_sign(w1))
    return tuple(tau), tuple(flip)


def _act(signs, tau, flip):
    out = ["0"] * len(signs)
    for k, c in enumerate(signs):
        if c == "0" or flip[k] > 0:
            out[tau[k]] = c
        else:
            out[tau[k]] = "+" if c == "-" else "-"
    return "".join(out)


def _orbit_representatives(P, A, cells, symmetry):
    """Union-find orbits of sweep cells under the generators; returns the
    representative indices (first in enumeration order) and orbit sizes."""
    actions = [_fan_action(P, A, tuple(int(x) for x in perm))
               for perm in symmetry]
    index = {c.signs: i for i, c in enumerate(cells)}
    parent = list(range(len(cells)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i, c in enumerate(cells):
        for tau, flip in actions:
            j = index.get(_act(c.signs, tau, flip))
            if j is None:
                raise InputError(
                    "permutation does not preserve the sweep fan",
                    field="symmetry",
                )
            ri, rj = find(i), find(j)
            if ri != rj:
                parent[max(ri, rj)] = min(ri, rj)

    groups = {}
    for i in range(len(cells)):
        groups.setdefault(find(i), []).append(i)
    chosen = sorted(groups)
    weights = {r: len(groups[r]) for r in groups}
    return chosen, weights


# ---------------------------------------------------------------------------
# checkpointing

def _qstr(x):
    return str(Q(x))


def _entry_to_json(entries):
    return [
        {
            "canonical": can,
            "f_vector": list(fv),
            "witness": {"normal": [_qstr(x) for x in wit[0]],
                        "offset": _qstr(wit[1])},
            "count": cnt,
        }
        for can, fv, wit, cnt in entries
    ]


def _entry_from_json(types):
    out = []
    for t in types:
        wit = (tuple(Q(s) for s in t["witness"]["normal"]),
               Q(t["witness"]["offset"]))
        out.append((t["canonical"], tuple(int(x) for x in t["f_vector"]),
                    wit, int(t["count"])))
    return out


def _load_checkpoint(path, n_hyps, n_cells):
    """Read a resume log, dropping a torn trailing line; create the file
    with a header when absent.  Returns {cell signs: entries}."""
    if not os.path.exists(path) or os.path.getsize(path) == 0:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(json.dumps({"kind": "slice-type-checkpoint",
                                 "hyperplanes": n_hyps,
                                 "cells": n_cells}) + "\n")
        return {}
    done = {}
    keep = 0
    with open(path, "r+", encoding="utf-8") as fh:
        lines = fh.readlines()
        try:
            head = json.loads(lines[0])
        except (json.JSONDecodeError, IndexError):
            raise InputError("unreadable checkpoint header",
                             field="checkpoint")
        if (head.get("kind") != "slice-type-checkpoint"
                or head.get("hyperplanes") != n_hyps
                or head.get("cells") != n_cells):
            raise InputError(
                "checkpoint belongs to a different enumeration",
                field="checkpoint",
            )
        keep = len(lines[0])
        for ln in lines[1:]:
            try:
                rec = json.loads(ln)
                done[rec["cell"]] = _entry_from_json(rec["types"])
            except (json.JSONDecodeError, KeyError):
                break  # torn tail from an interrupted run
            keep += len(ln)
        fh.seek(0)
        fh.truncate(keep)
    return done


# ---------------------------------------------------------------------------
# the catalog

def _cell_types(P, cell, cache):
    """canonical -> [f_vector, offset, count] over one cone's offset slots,
    in slot order."""
    u = qvec(cell.representative)
    agg = {}
    for ch in parallel_chambers(P, u, mode="translational",
                                include_slots=True):
        t = _type_for_chamber(P, ch, cache)
        if t is None:
            continue
        can, fv = t
        e = agg.get(can)
        if e is None:
            agg[can] = [fv, Q(ch.chamber_rep), 1]
        else:
            e[2] += 1
    return agg


def enumerate_slice_types(P, symmetry=None, checkpoint=None, workers=None):
    """The complete catalog of section types of P, sorted by f-vector.

    symmetry: optional iterable of vertex permutations known to extend to
    linear symmetries of P; sweep cones are then enumerated up to orbit und
    multiplicities scaled by orbit size.  checkpoint: path of an append-only
    resume log keyed by cone sign vectors.  workers: thread count for the
    per-cone classification (results are merged in enumeration order either
    way, so the catalog is identical).
    """
    A = sweep_arrangement(P)
    cells = enumerate_cells(A, min_dim=1)
    chosen = list(range(len(cells)))
    weights = {i: 1 for i in chosen}
    if symmetry is not None:
        chosen, weights = _orbit_representatives(P, A, cells, symmetry)

    done = {}
    log = None
    if checkpoint is not None:
        done = _load_checkpoint(checkpoint, len(A.hyperplanes), len(cells))
        log = open(checkpoint, "a", encoding="utf-8")

    cache = {}
    found = {}

    def work(idx):
        cell = cells[idx]
        agg = _cell_types(P, cell, cache)
        out = []
        for can, (fv, b, cnt) in agg.items():
            n, c = _ambient_hyperplane(P, cell.representative, b)
            out.append((can, fv, (tuple(n), c), cnt))
        return out

    pending = [i for i in chosen if cells[i].signs not in done]

    def merge(stream):
        seq = iter(stream)
        for i in chosen:
            cell = cells[i]
            if cell.signs in done:
                entries = done[cell.signs]
            else:
                entries = next(seq)
                if log is not None:
                    log.write(json.dumps(
                        {"cell": cell.signs,
                         "types": _entry_to_json(entries)},
                        separators=(",", ":")) + "\n")
                    log.flush()
            w = weights[i]
            for can, fv, wit, cnt in entries:
                e = found.get(can)
                if e is None:
                    found[can] = [tuple(fv), wit, cnt * w]
                else:
                    e[2] += cnt * w

    try:
        if workers is not None and workers > 1 and pending:
            with ThreadPoolExecutor(max_workers=workers) as ex:
                merge(ex.map(work, pending))
        else:
            merge(map(work, pending))
    finally:
        if log is not None:
            log.close()

    out = [
        CombinatorialType(can, fv, wit, mult)
        for can, (fv, wit, mult) in found.items()
    ]
    out.sort(key=lambda t: (t.f_vector, t.canonical_incidence))
    return tuple(out)


def type_count_bound(P) -> int:
    """Combinatorial upper bound on the number of enumerated sweep cells:
    cells of the pair arrangement times sign patterns times slots."""
    n = len(P.vertices)
    d = P.dim
    pairs = n * (n - 1) // 2
    return sum(math.comb(pairs, i) for i in range(d + 1)) * 2 ** d * n
