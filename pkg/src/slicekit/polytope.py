"""Exact polytope representation: double-description conversion between vertex
and facet form, affine charts for lower-dimensional polytopes, face counting,
polarity, pulling triangulations, and exact volumes.

All geometry here is rational and exact. Lower-dimensional polytopes are
carried in an orthogonal (not orthonormal) chart of their affine hull; chart
volumes are exact rationals and differ from intrinsic Euclidean volumes by
sqrt(gram_correction), applied numerically only at reporting time.
"""

from __future__ import annotations

import math
from functools import lru_cache

from .qmath import (
    ONE,
    Q,
    ZERO,
    gram_schmidt,
    qvec,
    rank,
    vadd,
    vdot,
    vscale,
    vsub,
)


def primitive_vector(vec):
    """Scale by a positive rational so entries are coprime integers."""
    vec = [Q(x) for x in vec]
    nums = 0
    dens = 1
    for x in vec:
        nums = math.gcd(nums, abs(int(x.numerator)))
        d = int(x.denominator)
        dens = dens // math.gcd(dens, d) * d
    if nums == 0:
        return tuple(vec)
    s = Q(dens, nums)
    return tuple(x * s for x in vec)


def canonical_inequality(normal, offset):
    """Positive-scale an inequality <normal, x> <= offset to coprime integers."""
    row = primitive_vector(list(normal) + [offset])
    return row[:-1], row[-1]


class GeometryError(ValueError):
    pass


class UnboundedError(GeometryError):
    pass


class InfeasibleError(GeometryError):
    pass


# ---------------------------------------------------------------------------
# double description: cone {x : <r, x> <= 0 for r in rows} -> (rays, lineality)


def dd_cone(rows, dim):
    """Extreme rays and lineality basis of {x in R^dim : <row, x> <= 0}.

    Incremental double description with combinatorial adjacency on tight-set
    bitmasks. Masks are recomputed by exact evaluation whenever a ray is
    created, so they are the true zero sets (the adjacency test needs that).
    Rays are returned as primitive integer tuples, lineality as a basis of the
    maximal linear subspace.
    """
    rows = [qvec(a) for a in rows]
    lineality = [tuple(ONE if j == i else ZERO for j in range(dim)) for i in range(dim)]
    rays = []  # (vector, exact tight bitmask over processed row indices)

    def exact_mask(vec, upto):
        m = 0
        for i in range(upto):
            if vdot(rows[i], vec) == 0:
                m |= 1 << i
        return m

    for idx, a in enumerate(rows):
        bit = 1 << idx
        vals = [vdot(a, l) for l in lineality]
        j = next((k for k, v in enumerate(vals) if v != 0), None)
        if j is not None:
            l0 = lineality.pop(j)
            v0 = vals.pop(j)
            if v0 > 0:
                l0 = vscale(Q(-1), l0)
                v0 = -v0
            lineality = [vsub(l, vscale(vdot(a, l) / v0, l0)) for l in lineality]
            new_rays = []
            for r, m in rays:
                shifted = primitive_vector(vsub(r, vscale(vdot(a, r) / v0, l0)))
                if any(c != 0 for c in shifted):
                    new_rays.append((shifted, exact_mask(shifted, idx + 1)))
            l0 = primitive_vector(l0)
            new_rays.append((l0, exact_mask(l0, idx + 1)))
            rays = new_rays
            continue
        # all lineality tight on this row
        neg, zero, pos = [], [], []
        for r, m in rays:
            s = vdot(a, r)
            if s < 0:
                neg.append((r, m))
            elif s == 0:
                zero.append((r, m | bit))
            else:
                pos.append((r, m))
        fresh = []
        for p, mp in pos:
            for n, mn in neg:
                t = mp & mn
                adjacent = True
                for r, m in rays:
                    if r is p or r is n:
                        continue
                    if (m & t) == t:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                ap = vdot(a, p)
                an = vdot(a, n)
                vec = primitive_vector(vsub(vscale(ap, n), vscale(an, p)))
                if any(c != 0 for c in vec):
                    fresh.append((vec, exact_mask(vec, idx + 1)))
        merged = {}
        for r, m in zero + neg + fresh:
            merged[r] = m
        rays = list(merged.items())
    return [r for r, _ in rays], lineality


# ---------------------------------------------------------------------------


class AffineChart:
    """Orthogonal rational chart of an affine subspace.

    Maps ambient points x to chart coordinates y via y_i = <q_i, x-base>/g_i
    where the basis rows q_i are pairwise orthogonal and g_i = <q_i, q_i>.
    The inverse map is x = base + sum y_i q_i, so the chart-to-ambient matrix
    B has columns q_i and gram_correction = det(B^T B) = prod g_i.
    """

    __slots__ = ("base", "basis", "gram", "gram_correction", "identity")

    def __init__(self, base, basis, identity=False):
        self.base = tuple(Q(x) for x in base)
        self.basis = tuple(tuple(Q(x) for x in b) for b in basis)
        self.gram = tuple(vdot(b, b) for b in self.basis)
        gc = ONE
        for g in self.gram:
            gc *= g
        self.gram_correction = gc
        self.identity = identity

    @property
    def dim(self):
        return len(self.basis)

    @property
    def ambient_dim(self):
        return len(self.base)

    def to_chart(self, x):
        if self.identity:
            return tuple(Q(c) for c in x)
        d = vsub(x, self.base)
        return tuple(vdot(q, d) / g for q, g in zip(self.basis, self.gram))

    def to_ambient(self, y):
        if self.identity:
            return tuple(Q(c) for c in y)
        x = list(self.base)
        for yi, q in zip(y, self.basis):
            x = vadd(x, vscale(Q(yi), q))
        return tuple(x)

    def on_subspace(self, x):
        """True iff the ambient point lies on the chart's affine subspace."""
        return tuple(Q(c) for c in x) == self.to_ambient(self.to_chart(x))

    def pull_hyperplane(self, normal, offset):
        """Chart-coordinate (normal, offset) of {x : <normal,x> = offset}.

        Returns None if the hyperplane is parallel to (or contains) the chart
        subspace, i.e. the pulled-back normal vanishes.
        """
        w = tuple(vdot(normal, q) for q in self.basis)
        if all(c == 0 for c in w):
            return None
        c = Q(offset) - vdot(normal, self.base)
        return w, c

    def section_factor_squared(self, w):
        """Square of the ratio (intrinsic measure)/(chart measure) for sections
        {y : <w, y> = c}; the full-dimensional ratio is gram_correction."""
        num = sum((Q(wi) ** 2) / g for wi, g in zip(w, self.gram))
        den = sum(Q(wi) ** 2 for wi in w)
        return self.gram_correction * num / den


def identity_chart(d):
    basis = [tuple(ONE if j == i else ZERO for j in range(d)) for i in range(d)]
    return AffineChart((ZERO,) * d, basis, identity=True)


def sqrt_exact(q):
    """Exact rational square root, or None if q is not a perfect square."""
    q = Q(q)
    if q < 0:
        raise ValueError("negative radicand")
    n, d = int(q.numerator), int(q.denominator)
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Q(rn, rd)
    return None


# ---------------------------------------------------------------------------


class Polytope:
    """Immutable bounded rational polytope with vertex and facet descriptions.

    vertices are ambient points (lex-sorted, all extreme). facets are chart
    coordinate inequalities <normal, y> <= offset relative to the affine hull;
    for a full-dimensional polytope the chart is the identity and facets are
    ambient inequalities.
    """

    __slots__ = (
        "ambient_dim",
        "dim",
        "vertices",
        "chart",
        "chart_vertices",
        "facets",
        "incidence",
        "edges",
        "_faces",
        "_triangulation",
    )

    def __init__(self, vertices, chart, chart_vertices, facets, incidence, edges):
        self.vertices = vertices
        self.chart = chart
        self.chart_vertices = chart_vertices
        self.facets = facets
        self.incidence = incidence
        self.edges = edges
        self.ambient_dim = chart.ambient_dim
        self.dim = chart.dim
        self._faces = None
        self._triangulation = None

    # -- derived combinatorics -------------------------------------------

    def vertex_facets(self, i):
        return frozenset(f for f, inc in enumerate(self.incidence) if i in inc)

    def edge_endpoints(self, e):
        i, j = self.edges[e]
        return self.vertices[i], self.vertices[j]

    def all_faces(self):
        """Proper nonempty faces as {dim: set of vertex-index frozensets}."""
        if self._faces is not None:
            return self._faces
        facet_sets = [frozenset(inc) for inc in self.incidence]
        seen = set(facet_sets)
        frontier = list(facet_sets)
        while frontier:
            f = frontier.pop()
            for s in facet_sets:
                g = f & s
                if g and g not in seen:
                    seen.add(g)
                    frontier.append(g)
        by_dim = {k: set() for k in range(self.dim)}
        for f in seen:
            pts = [self.chart_vertices[i] for i in f]
            k = rank([vsub(p, pts[0]) for p in pts[1:]]) if len(pts) > 1 else 0
            by_dim[k].add(f)
        self._faces = by_dim
        return by_dim

    def face_count(self, k):
        if k < 0 or k > self.dim:
            raise GeometryError(f"face dimension {k} out of range 0..{self.dim}")
        if k == self.dim:
            return 1
        return len(self.all_faces()[k])

    def triangulation(self):
        """Pulling triangulation: vertex-index simplices covering the polytope.

        Each simplex is built recursively by coning the lowest-index vertex of
        each face over the subfaces that avoid it, so the decomposition depends
        only on the face lattice.
        """
        if self._triangulation is not None:
            return self._triangulation
        if self.dim == 0:
            self._triangulation = ((0,),)
            return self._triangulation
        faces = self.all_faces()

        memo = {}

        def pull(face, k):
            if k == 0:
                (v,) = face
                return [(v,)]
            key = face
            if key in memo:
                return memo[key]
            v = min(face)
            out = []
            subs = sorted(
                (g for g in faces[k - 1] if g < face and v not in g),
                key=lambda g: tuple(sorted(g)),
            )
            for g in subs:
                for s in pull(g, k - 1):
                    out.append(s + (v,))
            memo[key] = out
            return out

        full = frozenset(range(len(self.vertices)))
        top = sorted(
            (g for g in faces[self.dim - 1] if min(full) not in g),
            key=lambda g: tuple(sorted(g)),
        )
        tris = []
        v = min(full)
        for g in top:
            for s in pull(g, self.dim - 1):
                tris.append(s + (v,))
        self._triangulation = tuple(tris)
        return self._triangulation

    # -- metric ------------------------------------------------------------

    def volume_chart(self):
        """Exact Lebesgue volume in chart coordinates (1 for a point)."""
        if self.dim == 0:
            return ONE
        total = ZERO
        fact = Q(1, math.factorial(self.dim))
        from .qmath import det

        for s in self.triangulation():
            p0 = self.chart_vertices[s[0]]
            rows = [vsub(self.chart_vertices[i], p0) for i in s[1:]]
            total += abs(det(rows)) * fact
        return total

    def volume(self):
        """Intrinsic Euclidean volume: exact rational when the gram correction
        is a perfect square (always for full-dimensional polytopes), float
        otherwise."""
        vc = self.volume_chart()
        r = sqrt_exact(self.chart.gram_correction)
        if r is not None:
            return vc * r
        return float(vc) * math.sqrt(float(self.chart.gram_correction))

    def centroid(self):
        """Exact ambient centroid (volume-weighted over the triangulation)."""
        if self.dim == 0:
            return self.vertices[0]
        from .qmath import det

        total = ZERO
        acc = [ZERO] * self.dim
        for s in self.triangulation():
            p0 = self.chart_vertices[s[0]]
            rows = [vsub(self.chart_vertices[i], p0) for i in s[1:]]
            w = abs(det(rows))
            if w == 0:
                continue
            total += w
            bary = [ZERO] * self.dim
            for i in s:
                bary = vadd(bary, self.chart_vertices[i])
            acc = vadd(acc, vscale(w / Q(len(s)), bary))
        c = vscale(ONE / total, acc)
        return self.chart.to_ambient(c)

    # -- predicates ----------------------------------------------------------

    def contains(self, x, strict=False):
        """Exact membership of an ambient point; strict tests the relative
        interior (interior within the affine hull)."""
        if not self.chart.on_subspace(x):
            return False
        y = self.chart.to_chart(x)
        for (n, c) in self.facets:
            s = vdot(n, y)
            if strict:
                if not (s < c):
                    return False
            else:
                if s > c:
                    return False
        return True

    def translate(self, t):
        return hull_from_vertices([vadd(v, t) for v in self.vertices])

    def __repr__(self):
        return (
            f"Polytope(dim={self.dim}, ambient={self.ambient_dim}, "
            f"vertices={len(self.vertices)}, facets={len(self.facets)})"
        )


# ---------------------------------------------------------------------------


def hull_from_vertices(points) -> Polytope:
    """Convex hull of rational points: irredundant vertices, facets, incidence,
    edges. Lower-dimensional input is carried in an affine chart of its hull."""
    if not points:
        raise GeometryError("empty point set")
    pts = sorted({tuple(Q(c) for c in p) for p in points})
    d_amb = len(pts[0])
    if any(len(p) != d_amb for p in pts):
        raise GeometryError("points of mixed dimension")

    base = pts[0]
    span = [vsub(p, base) for p in pts[1:]]
    basis = gram_schmidt(span)
    dim = len(basis)
    if dim == d_amb:
        chart = identity_chart(d_amb)
    else:
        chart = AffineChart(base, basis)
    ys = [chart.to_chart(p) for p in pts]

    if dim == 0:
        return Polytope((pts[0],), chart, ((),), (), (), ())

    # facets of conv(ys): rays (a, c) of {<y_i, a> + c <= 0} give <a, y> <= -c
    rows = [tuple(list(y) + [ONE]) for y in ys]
    rays, lin = dd_cone(rows, dim + 1)
    assert not lin, "affine hull not full-dimensional in chart"
    facets = sorted(canonical_inequality(r[:-1], -r[-1]) for r in rays)

    # extreme points: tight facet normals span the whole chart
    tight_sets = []
    for y in ys:
        tight_sets.append(
            [f for f, (n, c) in enumerate(facets) if vdot(n, y) == c]
        )
    keep = [
        i
        for i, ts in enumerate(tight_sets)
        if rank([facets[f][0] for f in ts]) == dim
    ]
    vertices = tuple(pts[i] for i in keep)
    chart_vertices = tuple(ys[i] for i in keep)

    incidence = []
    for f, (n, c) in enumerate(facets):
        inc = frozenset(
            i for i, y in enumerate(chart_vertices) if vdot(n, y) == c
        )
        incidence.append(inc)
        span_pts = [chart_vertices[i] for i in inc]
        assert (
            len(span_pts) >= 1
            and rank([vsub(p, span_pts[0]) for p in span_pts[1:]]) == dim - 1
        ), "facet not spanned by its tight vertices"

    edges = []
    nv = len(vertices)
    vertex_tight = [
        frozenset(f for f, inc in enumerate(incidence) if i in inc)
        for i in range(nv)
    ]
    for i in range(nv):
        for j in range(i + 1, nv):
            common = vertex_tight[i] & vertex_tight[j]
            if not common and dim > 1:
                continue
            if rank([facets[f][0] for f in common]) == dim - 1:
                edges.append((i, j))

    return Polytope(
        vertices, chart, chart_vertices, tuple(facets), tuple(incidence), tuple(edges)
    )


def vertex_enumeration(facets) -> Polytope:
    """Polytope from inequalities <normal, x> <= offset.

    Raises UnboundedError / InfeasibleError when the system is not a polytope.
    """
    facets = [(qvec(n), Q(c)) for n, c in facets]
    if not facets:
        raise UnboundedError("no constraints")
    d = len(facets[0][0])
    # homogenize: {(x, t) : <n, x> - c t <= 0, -t <= 0}
    rows = [tuple(list(n) + [-c]) for n, c in facets]
    rows.append(tuple([ZERO] * d + [-ONE]))
    rays, lin = dd_cone(rows, d + 1)
    if lin:
        raise UnboundedError("feasible set contains a line")
    verts = []
    for r in rays:
        t = r[-1]
        if t == 0:
            if any(c != 0 for c in r[:-1]):
                raise UnboundedError("feasible set has a recession direction")
            continue
        verts.append(tuple(c / t for c in r[:-1]))
    if not verts:
        raise InfeasibleError("inequality system is infeasible")
    return hull_from_vertices(verts)


def polar(P: Polytope) -> Polytope:
    """Polar dual {y : <v, y> <= 1 for all vertices v}; requires the origin
    strictly inside a full-dimensional P."""
    if P.dim != P.ambient_dim:
        raise GeometryError("polar needs a full-dimensional polytope")
    origin = (ZERO,) * P.ambient_dim
    if not P.contains(origin, strict=True):
        raise GeometryError("origin is not strictly interior")
    return vertex_enumeration([(v, ONE) for v in P.vertices])


def affine_chart(P: Polytope):
    """(chart, full-dimensional chart image) of P. Identity for full-dim P."""
    image = hull_from_vertices(P.chart_vertices)
    return P.chart, image
