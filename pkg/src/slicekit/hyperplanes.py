"""The four hyperplane arrangements attached to a polytope, and exact cell
enumeration.

Arrangements live in the polytope's chart space (identical to ambient space
for full-dimensional polytopes). Cells are enumerated flat by flat: for every
intersection flat of dimension >= min_dim, the hyperplanes that do not contain
the flat restrict to an arrangement inside it, and its full-dimensional
chambers there are exactly the cells carried by that flat. Chambers are found
by breadth-first wall crossing from a generic point, flipping one sign at a
time, with an exact LP feasibility fallback; this enumerates each cell exactly
once because a cell's affine span determines its flat.
"""

from __future__ import annotations

import itertools
import math
from typing import NamedTuple

from .errors import InternalInvariantError
from .qmath import (
    ONE,
    Q,
    ZERO,
    clear_denominators,
    nullspace,
    qvec,
    rank,
    vadd,
    vdot,
    vscale,
    vsub,
)


class Hyperplane(NamedTuple):
    normal: tuple
    offset: object  # rational

    def value(self, x):
        return vdot(self.normal, x) - self.offset


class Cell(NamedTuple):
    signs: str
    dim: int
    representative: tuple
    maximal: bool

    @property
    def zero_set(self):
        return frozenset(i for i, s in enumerate(self.signs) if s == "0")


class Arrangement:
    """Deduplicated hyperplane family with per-hyperplane provenance.

    provenance[i] lists every generator (vertex index, index pair, or index
    tuple, by kind) whose hyperplane canonicalizes to hyperplanes[i].
    """

    __slots__ = (
        "ambient_dim",
        "kind",
        "hyperplanes",
        "provenance",
        "direction",
        "_breaks",
    )

    def __init__(
        self, ambient_dim, kind, hyperplanes, provenance, direction=None, breaks=None
    ):
        self.ambient_dim = ambient_dim
        self.kind = kind
        self.hyperplanes = tuple(hyperplanes)
        self.provenance = tuple(tuple(p) for p in provenance)
        self.direction = direction
        self._breaks = breaks

    def __len__(self):
        return len(self.hyperplanes)

    def sign_vector(self, x):
        out = []
        for h in self.hyperplanes:
            v = h.value(x)
            out.append("0" if v == 0 else ("+" if v > 0 else "-"))
        return "".join(out)

    def breakpoints(self):
        """Sorted distinct values <u, v> over vertices; the parallel
        arrangement's one-dimensional structure, in the scale of the stored
        direction (not of the canonicalized hyperplane rows)."""
        if self.kind != "parallel" or self._breaks is None:
            raise ValueError("breakpoints are defined for parallel arrangements")
        return self._breaks


def _canonical(normal, offset):
    row = clear_denominators(tuple(normal) + (offset,))
    return Hyperplane(row[:-1], row[-1])


def _dedup(raw, ambient_dim, kind, direction=None, breaks=None):
    """raw: list of (normal, offset, generator). Canonicalize, merge, sort."""
    table = {}
    for normal, offset, gen in raw:
        h = _canonical(normal, offset)
        table.setdefault(h, []).append(gen)
    hyps = sorted(table)
    prov = [tuple(table[h]) for h in hyps]
    return Arrangement(ambient_dim, kind, hyps, prov, direction=direction, breaks=breaks)


def central_arrangement(P) -> Arrangement:
    """Hyperplanes v^perp for every non-origin vertex v (chart coordinates)."""
    raw = []
    for i, v in enumerate(P.chart_vertices):
        if all(c == 0 for c in v):
            continue
        raw.append((v, ZERO, i))
    return _dedup(raw, P.dim, "central")


def parallel_arrangement(P, u) -> Arrangement:
    """Hyperplanes {<u, x> = <u, v>} per vertex v; u in chart coordinates."""
    u = qvec(u)
    if all(c == 0 for c in u):
        raise ValueError("direction must be nonzero")
    raw = []
    for i, v in enumerate(P.chart_vertices):
        raw.append((u, vdot(u, v), i))
    breaks = tuple(sorted({val for _, val, _ in raw}))
    return _dedup(raw, P.dim, "parallel", direction=u, breaks=breaks)


def cocircuit_arrangement(P) -> Arrangement:
    """Affine spans of the negated vertex d-subsets that are affinely independent."""
    d = P.dim
    verts = P.chart_vertices
    raw = []
    for subset in itertools.combinations(range(len(verts)), d):
        pts = [vscale(Q(-1), verts[i]) for i in subset]
        if d == 1:
            normal = (ONE,)
        else:
            diffs = [vsub(p, pts[0]) for p in pts[1:]]
            if rank(diffs) != d - 1:
                continue
            ns = nullspace(diffs)
            if len(ns) != 1:
                continue
            normal = ns[0]
        raw.append((normal, vdot(normal, pts[0]), subset))
    return _dedup(raw, d, "cocircuit")


def sweep_arrangement(P) -> Arrangement:
    """Central hyperplanes (v_i - v_j)^perp over all vertex pairs."""
    verts = P.chart_vertices
    raw = []
    for i, j in itertools.combinations(range(len(verts)), 2):
        n = vsub(verts[i], verts[j])
        if all(c == 0 for c in n):
            continue
        raw.append((n, ZERO, (i, j)))
    return _dedup(raw, P.dim, "sweep")


# ---------------------------------------------------------------------------
# cell enumeration


class _Flat(NamedTuple):
    key: frozenset  # indices of hyperplanes containing the flat
    point: tuple  # a point of the flat, in arrangement coordinates
    basis: tuple  # rows spanning the flat's direction space


def _restrict(h: Hyperplane, flat: _Flat):
    """(w, c) with the hyperplane reading <w, y> = c in flat coordinates."""
    w = tuple(vdot(h.normal, b) for b in flat.basis)
    c = h.offset - vdot(h.normal, flat.point)
    return w, c


def _flat_key(hyperplanes, point, basis):
    key = set()
    for i, h in enumerate(hyperplanes):
        if all(vdot(h.normal, b) == 0 for b in basis) and vdot(h.normal, point) == h.offset:
            key.add(i)
    return frozenset(key)


def _enumerate_flats(A: Arrangement, min_dim: int):
    d = A.ambient_dim
    identity = tuple(tuple(ONE if j == i else ZERO for j in range(d)) for i in range(d))
    top = _Flat(frozenset(), (ZERO,) * d, identity)
    levels = [[top]]
    seen = {top.key}
    current = [top]
    dim = d
    while dim - 1 >= min_dim and current:
        nxt = []
        for flat in current:
            for i, h in enumerate(A.hyperplanes):
                if i in flat.key:
                    continue
                w, c = _restrict(h, flat)
                if all(x == 0 for x in w):
                    continue  # parallel to (or missing) the flat
                t = c / vdot(w, w)
                y0 = vscale(t, w)
                point = flat.point
                for yj, b in zip(y0, flat.basis):
                    point = vadd(point, vscale(yj, b))
                sub = nullspace([w])
                basis = tuple(
                    clear_denominators(
                        tuple(
                            sum(m[j] * b[col] for j, b in enumerate(flat.basis))
                            for col in range(d)
                        )
                    )
                    for m in sub
                )
                key = _flat_key(A.hyperplanes, point, basis)
                if key in seen:
                    continue
                seen.add(key)
                nxt.append(_Flat(key, point, basis))
        nxt.sort(key=lambda f: tuple(sorted(f.key)))
        levels.append(nxt)
        current = nxt
        dim -= 1
    return levels


def _to_ambient(flat: _Flat, y):
    x = flat.point
    for yj, b in zip(y, flat.basis):
        x = vadd(x, vscale(yj, b))
    return x


def _line_cells(A: Arrangement, flat: _Flat, full_dim: int):
    """The 1-dimensional cells of a line flat: sort the crossing parameters,
    take midpoints and points beyond the ends."""
    ts = set()
    for i, h in enumerate(A.hyperplanes):
        if i in flat.key:
            continue
        (w,), c = _restrict(h, flat)
        if w != 0:
            ts.add(c / w)
    if not ts:
        reps = [(ZERO,)]
    else:
        T = sorted(ts)
        reps = [(T[0] - 1,)]
        reps += [((a + b) / 2,) for a, b in zip(T, T[1:])]
        reps.append((T[-1] + 1,))
    out = []
    for y in reps:
        x = _to_ambient(flat, y)
        signs = A.sign_vector(x)
        for i, s in enumerate(signs):
            if (s == "0") != (i in flat.key):
                raise InternalInvariantError("line representative hit a wall")
        out.append(Cell(signs, 1, x, 1 == full_dim))
    return out


def _cells_from_facets(A: Arrangement, flat: _Flat, subcells, full_dim: int):
    """The full-dimensional cells of a flat, discovered from the cells one
    dimension lower.

    Every k-cell bounded by at least one wall has a facet, and that facet is
    a (k-1)-cell of the arrangement carried by a subflat; stepping off such
    a cell to both sides by half the minimal crossing ratio lands inside the
    two incident k-cells.  So the map over all subflat cells and both signs
    is the complete cell list, with no feasibility solves.  A flat no wall
    restricts nontrivially is itself one cell.
    """
    k = len(flat.basis)
    key = flat.key
    if not subcells:
        x = flat.point
        signs = A.sign_vector(x)
        for i, s in enumerate(signs):
            if (s == "0") != (i in key):
                raise InternalInvariantError("free flat crosses a wall")
        return [Cell(signs, k, x, k == full_dim)]

    out = {}
    for X in subcells:
        crossing = X.zero_set - key
        hstar = min(crossing)
        w, _ = _restrict(A.hyperplanes[hstar], flat)
        s = None
        for wj, b in zip(w, flat.basis):
            if wj:
                sb = vscale(wj, b)
                s = sb if s is None else vadd(s, sb)
        x = X.representative
        vals = [h.value(x) for h in A.hyperplanes]
        rates = [vdot(h.normal, s) for h in A.hyperplanes]
        for direction in (1, -1):
            tmax = None
            for v, r in zip(vals, rates):
                if v == 0 or r == 0:
                    continue
                t = -v / (Q(direction) * r)
                if t > 0 and (tmax is None or t < tmax):
                    tmax = t
            eps = tmax / 2 if tmax is not None else ONE
            expected = []
            for i, (v, r) in enumerate(zip(vals, rates)):
                if i in key:
                    expected.append("0")
                elif v != 0:
                    expected.append(X.signs[i])
                elif r == 0:
                    # a wall through the facet but parallel to the step
                    # would contain the whole flat, contradicting the key
                    raise InternalInvariantError("degenerate facet crossing")
                else:
                    sg = direction * (1 if r > 0 else -1)
                    expected.append("+" if sg > 0 else "-")
            expected = "".join(expected)
            if expected in out:
                continue
            rep = vadd(x, vscale(Q(direction) * eps, s))
            signs = A.sign_vector(rep)
            if signs != expected:
                raise InternalInvariantError("facet step left its chamber")
            out[signs] = Cell(signs, k, rep, k == full_dim)
    return list(out.values())


def enumerate_cells(A: Arrangement, min_dim: int = 1):
    """Every cell of dimension >= min_dim, each exactly once, with an exact
    representative. Maximal (full-dimensional) cells are flagged."""
    if min_dim < 1:
        raise ValueError("min_dim must be at least 1")
    d = A.ambient_dim
    # the facet-stepping construction needs every level down to lines,
    # whatever the caller keeps
    levels = _enumerate_flats(A, 1)
    cells_by_key = {}
    for li in range(len(levels) - 1, -1, -1):
        below = levels[li + 1] if li + 1 < len(levels) else []
        for flat in levels[li]:
            if len(flat.basis) == 1:
                cells_by_key[flat.key] = _line_cells(A, flat, d)
            else:
                subs = []
                for G in below:
                    if flat.key <= G.key:
                        subs.extend(cells_by_key[G.key])
                cells_by_key[flat.key] = _cells_from_facets(A, flat, subs, d)
    cells = []
    for level in levels:
        for flat in level:
            if len(flat.basis) < min_dim:
                continue
            cells.extend(cells_by_key[flat.key])
    m = len(A.hyperplanes)
    bound = sum(math.comb(m, i) for i in range(d + 1))
    n_max = sum(1 for c in cells if c.maximal)
    if n_max > bound:
        raise InternalInvariantError(
            f"{n_max} maximal cells exceed the count bound {bound}"
        )
    cells.sort(key=lambda c: (-c.dim, c.signs))
    return tuple(cells)


def representative_point(cell: Cell):
    """The cell's stored exact representative."""
    return cell.representative
