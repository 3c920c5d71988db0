"""Per-chamber combinatorics of hyperplane sections, halfspace cuts and
shadows.

Everything here is exact.  A hyperplane is handed over in ambient
coordinates; all chamber bookkeeping happens in the chart of the polytope so
that lower-dimensional inputs (the permutahedron inside a hyperplane of R^4)
behave exactly like full-dimensional ones.  Section vertices are labelled by
the edge of P they sit on, or by the vertex of P they coincide with; those
labels are stable across a slicing chamber, which is what makes a
triangulation recipe reusable for every hyperplane of the chamber.
"""

from __future__ import annotations

from typing import NamedTuple, Optional

from .errors import InputError
from .hyperplanes import (
    Hyperplane,
    central_arrangement,
    enumerate_cells,
    parallel_arrangement,
)
from .polytope import Polytope, hull_from_vertices, polar
from .qmath import Q, vdot, vsub, qvec
from .symbolic import MultiPoly, RatFunc


class EdgeCut(NamedTuple):
    """Exact classification of P's edges against one hyperplane."""

    crossed: tuple      # edge indices cut in their relative interior
    touched: tuple      # vertex indices lying on the hyperplane
    values: tuple       # per-vertex values <n,v> - c


def hyperplane_values(P: Polytope, H: Hyperplane) -> tuple:
    return tuple(H.value(v) for v in P.vertices)


def intersected_edges(P: Polytope, H: Hyperplane) -> EdgeCut:
    vals = hyperplane_values(P, H)
    touched = tuple(i for i, w in enumerate(vals) if w == 0)
    crossed = []
    for e, (i, j) in enumerate(P.edges):
        if vals[i] * vals[j] < 0:
            crossed.append(e)
    return EdgeCut(tuple(crossed), touched, vals)


def pull_to_chart(P: Polytope, H: Hyperplane) -> Optional[Hyperplane]:
    """Ambient hyperplane -> hyperplane in chart coordinates, or None when
    the pulled normal vanishes (hyperplane parallel to or containing P's
    span)."""
    pulled = P.chart.pull_hyperplane(H.normal, H.offset)
    if pulled is None:
        return None
    w, c = pulled
    return Hyperplane(qvec(w), Q(c))


class SlicingChamber(NamedTuple):
    """One cell of a slicing decomposition.

    mode is one of 'central', 'parallel', 'rotational', 'translational'.
    All representative data lives in chart coordinates of P.
      central:       chamber_rep = u
      parallel:      region_rep = u (fixed direction), chamber_rep = offset b
      rotational:    region_rep = t (translation), chamber_rep = u
      translational: region_rep = u (sweep cone rep), chamber_rep = offset b
    index is the interval slot for offset modes (0-based between sorted
    breakpoints; breakpoint slots carry half-integral index k - 1/2).
    """

    mode: str
    edges: tuple
    on_vertices: tuple
    region_rep: Optional[tuple]
    chamber_rep: object
    index: Optional[object] = None


def chamber_hyperplane(ch: SlicingChamber) -> Hyperplane:
    """The representative cutting hyperplane, in chart coordinates."""
    if ch.mode == "central":
        return Hyperplane(qvec(ch.chamber_rep), Q(0))
    if ch.mode in ("parallel", "translational"):
        return Hyperplane(qvec(ch.region_rep), Q(ch.chamber_rep))
    if ch.mode == "rotational":
        u = qvec(ch.chamber_rep)
        return Hyperplane(u, -vdot(u, ch.region_rep))
    raise InputError("unknown chamber mode %r" % (ch.mode,), field="mode")


def _chart_cut(P: Polytope, H: Hyperplane) -> EdgeCut:
    """Like intersected_edges but H given in chart coordinates."""
    vals = tuple(H.value(v) for v in P.chart_vertices)
    touched = tuple(i for i, w in enumerate(vals) if w == 0)
    crossed = tuple(
        e for e, (i, j) in enumerate(P.edges) if vals[i] * vals[j] < 0
    )
    return EdgeCut(crossed, touched, vals)


def central_chambers(P: Polytope) -> tuple:
    """Maximal chambers of the radial slicing fan, one SlicingChamber each.

    Chambers whose hyperplane misses the polytope entirely (possible when
    the origin is outside P) are still emitted, with an empty edge set.
    """
    A = central_arrangement(P)
    out = []
    for cell in enumerate_cells(A, min_dim=P.dim):
        u = cell.representative
        cut = _chart_cut(P, Hyperplane(qvec(u), Q(0)))
        out.append(
            SlicingChamber("central", cut.crossed, cut.touched, None, u)
        )
    return tuple(out)


def parallel_chambers(P: Polytope, u, mode: str = "parallel",
                      include_slots: bool = False) -> tuple:
    """Interval chambers of the fixed-direction decomposition, sorted by
    offset.  With include_slots=True the degenerate sections at the
    breakpoints themselves are interleaved (indices k - 1/2)."""
    u = qvec(u)
    A = parallel_arrangement(P, u)
    breaks = A.breakpoints()
    out = []
    for k, b in enumerate(breaks):
        if include_slots:
            cut = _chart_cut(P, Hyperplane(u, Q(b)))
            out.append(
                SlicingChamber(mode, cut.crossed, cut.touched, tuple(u), b,
                               index=Q(2 * k - 1, 2))
            )
        if k + 1 < len(breaks):
            mid = (b + breaks[k + 1]) / 2
            cut = _chart_cut(P, Hyperplane(u, Q(mid)))
            out.append(
                SlicingChamber(mode, cut.crossed, cut.touched, tuple(u), mid,
                               index=k)
            )
    return tuple(out)


def rotational_chambers(P: Polytope, t) -> tuple:
    """Chambers of the radial fan of P shifted by t, as cuts of P itself."""
    t = qvec(t)
    shifted = hull_from_vertices(
        [tuple(a + b for a, b in zip(v, t)) for v in P.chart_vertices]
    )
    out = []
    A = central_arrangement(shifted)
    for cell in enumerate_cells(A, min_dim=P.dim):
        u = qvec(cell.representative)
        # u-perp cuts P + t; in P's own coordinates the cut is <u,x> = -<u,t>
        cut = _chart_cut(P, Hyperplane(u, -vdot(u, t)))
        out.append(
            SlicingChamber("rotational", cut.crossed, cut.touched,
                           tuple(t), tuple(u))
        )
    return tuple(out)


# ---------------------------------------------------------------------------
# section labels

def _label_sort_key(label):
    # edge labels (plain ints) come first, vertex labels ('v', i) second
    if isinstance(label, tuple):
        return (1, label[1])
    return (0, label)


def section_points(P: Polytope, ch: SlicingChamber) -> dict:
    """Concrete chart coordinates of the section's vertices at the chamber
    representative, keyed by stable label."""
    H = chamber_hyperplane(ch)
    pts = {}
    for e in ch.edges:
        i, j = P.edges[e]
        a, b = P.chart_vertices[i], P.chart_vertices[j]
        va, vb = H.value(a), H.value(b)
        lam = va / (va - vb)
        pts[e] = tuple(x + lam * (y - x) for x, y in zip(a, b))
    for i in ch.on_vertices:
        pts[("v", i)] = P.chart_vertices[i]
    return pts


class SectionIncidence(NamedTuple):
    vertices: tuple      # section-vertex labels
    facets: tuple        # facet indices of P meeting the hyperplane
    incidence: tuple     # rows per section vertex, columns per facet, 0/1
    f_vector: tuple


def _faces_meeting(P: Polytope, vals):
    """For each face of P including the top one, whether the hyperplane
    meets its relative interior transversally ('cut') or contains it
    ('flat')."""
    table = {k: set(v) for k, v in P.all_faces().items()}
    table.setdefault(P.dim, set()).add(frozenset(range(len(P.vertices))))
    cut = {}
    flat = {}
    for k, faces in table.items():
        cut[k] = set()
        flat[k] = set()
        for F in faces:
            fv = [vals[i] for i in F]
            if all(w == 0 for w in fv):
                flat[k].add(F)
            elif any(w > 0 for w in fv) and any(w < 0 for w in fv):
                cut[k].add(F)
    return cut, flat


def slice_combinatorics(P: Polytope, ch: SlicingChamber) -> SectionIncidence:
    H = chamber_hyperplane(ch)
    vals = tuple(H.value(v) for v in P.chart_vertices)
    cut, flat = _faces_meeting(P, vals)

    labels = sorted(ch.edges, key=_label_sort_key)
    labels += sorted((("v", i) for i in ch.on_vertices), key=_label_sort_key)

    facet_sets = [frozenset(P.incidence[f]) for f in range(len(P.facets))]
    facets = tuple(
        f for f, S in enumerate(facet_sets)
        if S in cut.get(P.dim - 1, ()) or S in flat.get(P.dim - 1, ())
    )

    rows = []
    for lab in labels:
        if isinstance(lab, tuple):
            member = {lab[1]}
        else:
            member = set(P.edges[lab])
        rows.append(
            tuple(1 if member <= set(P.incidence[f]) else 0 for f in facets)
        )

    # dimension of the section, then proper-face counts only
    dims = [k - 1 for k in cut if cut[k]] + [k for k in flat if flat[k]]
    sect_dim = max(dims, default=-1)
    fvec = tuple(
        len(cut.get(k + 1, ())) + len(flat.get(k, ()))
        for k in range(sect_dim)
    )
    return SectionIncidence(tuple(labels), facets, tuple(rows), fvec)


def section_polytope(P: Polytope, ch: SlicingChamber) -> Optional[Polytope]:
    """Concrete section at the chamber representative, in chart ambient.

    The returned hull lives in P's chart coordinate space; its own chart
    accounts for the section being one dimension lower.  None for an empty
    cut."""
    pts = section_points(P, ch)
    if not pts:
        return None
    return hull_from_vertices(sorted(pts.values()))


class TriangulationRecipe(NamedTuple):
    simplices: tuple     # tuples of section-vertex labels
    labels: tuple        # all labels in use, sorted


def _pulling(faces_by_dim, top, dim):
    """Pulling triangulation of an abstract face lattice, recursing on the
    smallest label of each face.  Returns frozensets of labels."""
    def tri(face, k):
        if len(face) == k + 1:
            return [frozenset(face)]
        v = min(face, key=_label_sort_key)
        out = []
        for G in faces_by_dim.get(k - 1, ()):
            if G <= face and v not in G:
                for s in tri(G, k - 1):
                    out.append(s | {v})
        return out

    return tri(top, dim)


def chamber_triangulation(P: Polytope, ch: SlicingChamber) -> TriangulationRecipe:
    pts = section_points(P, ch)
    if not pts:
        raise InputError("section is empty; nothing to triangulate")
    labels = sorted(pts, key=_label_sort_key)
    concrete = [pts[lab] for lab in labels]
    Q_ = hull_from_vertices(sorted(set(concrete)))
    if Q_.dim != P.dim - 1:
        raise InputError(
            "degenerate section of dimension %d" % Q_.dim, field="chamber"
        )
    # map hull vertex order back to labels
    pos = {v: lab for lab, v in zip(labels, concrete)}
    relabel = {i: pos[v] for i, v in enumerate(Q_.vertices)}
    faces = {
        k: {frozenset(relabel[i] for i in F) for F in fs}
        for k, fs in Q_.all_faces().items()
    }
    top = frozenset(relabel.values())
    sims = _pulling(faces, top, Q_.dim)
    simplices = tuple(
        sorted(
            (tuple(sorted(s, key=_label_sort_key)) for s in sims),
            key=lambda t: tuple(_label_sort_key(x) for x in t),
        )
    )
    return TriangulationRecipe(simplices, tuple(labels))


# ---------------------------------------------------------------------------
# parametric vertices

def parametric_vertex(edge, mode: str, dim: Optional[int] = None,
                      direction=None) -> tuple:
    """Symbolic crossing point of one edge, as a vector of RatFunc.

    edge: pair of exact points (chart coordinates).
    mode: 'central' (variables u_i), 'rotational' (t_i and u_i),
          'translational' (u_i and offset b), or 'parallel' (fixed rational
          direction passed via `direction`, single variable b).
    """
    a, b = (qvec(edge[0]), qvec(edge[1]))
    d = dim if dim is not None else len(a)
    if len(a) != d or len(b) != d:
        raise InputError("edge endpoints of wrong dimension", field="edge")
    uvars = ["u%d" % (i + 1) for i in range(d)]

    if mode == "parallel":
        if direction is None:
            raise InputError("parallel mode needs a direction",
                             field="direction")
        u = qvec(direction)
        den = vdot(u, vsub(b, a))
        if den == 0:
            raise InputError("edge is parallel to the cutting direction",
                             field="edge")
        bvar = RatFunc(MultiPoly.var("b", ["b"]))
        lam = (bvar - RatFunc.const(vdot(u, a), ["b"])) / RatFunc.const(
            den, ["b"]
        )
        return tuple(
            RatFunc.const(a[i], ["b"])
            + lam * RatFunc.const(b[i] - a[i], ["b"])
            for i in range(d)
        )

    if mode == "central":
        vs = uvars
        u = [RatFunc(MultiPoly.var(v, vs)) for v in vs]
        ua = sum((u[i] * RatFunc.const(a[i], vs) for i in range(d)),
                 RatFunc.const(0, vs))
        ub = sum((u[i] * RatFunc.const(b[i], vs) for i in range(d)),
                 RatFunc.const(0, vs))
        den = ub - ua
        if den.num.is_zero():
            raise InputError("edge endpoints coincide", field="edge")
        return tuple(
            (ub * RatFunc.const(a[i], vs) - ua * RatFunc.const(b[i], vs))
            / den
            for i in range(d)
        )

    if mode == "rotational":
        vs = ["t%d" % (i + 1) for i in range(d)] + uvars
        t = [RatFunc(MultiPoly.var("t%d" % (i + 1), vs)) for i in range(d)]
        u = [RatFunc(MultiPoly.var("u%d" % (i + 1), vs)) for i in range(d)]
        dot = lambda p, q: sum((x * y for x, y in zip(p, q)),
                               RatFunc.const(0, vs))
        ca = [RatFunc.const(x, vs) for x in a]
        cb = [RatFunc.const(x, vs) for x in b]
        uat = dot(u, [x + y for x, y in zip(ca, t)])
        ubt = dot(u, [x + y for x, y in zip(cb, t)])
        den = dot(u, [x - y for x, y in zip(cb, ca)])
        return tuple(
            (ubt * ca[i] - uat * cb[i]) / den + t[i] for i in range(d)
        )

    if mode == "translational":
        vs = uvars + ["b"]
        u = [RatFunc(MultiPoly.var("u%d" % (i + 1), vs)) for i in range(d)]
        bvar = RatFunc(MultiPoly.var("b", vs))
        ca = [RatFunc.const(x, vs) for x in a]
        cb = [RatFunc.const(x, vs) for x in b]
        dot = lambda p, q: sum((x * y for x, y in zip(p, q)),
                               RatFunc.const(0, vs))
        den = dot(u, [x - y for x, y in zip(cb, ca)])
        lam = (bvar - dot(u, ca)) / den
        return tuple(ca[i] + lam * (cb[i] - ca[i]) for i in range(d))

    raise InputError("unknown mode %r" % (mode,), field="mode")


# ---------------------------------------------------------------------------
# halfspace sections

def halfspace_section(P: Polytope, H: Hyperplane, side: int) -> Optional[Polytope]:
    """P cut to the closed side sign(side) of the ambient hyperplane H."""
    if side not in (1, -1):
        raise InputError("side must be +1 or -1", field="side")
    vals = hyperplane_values(P, H)
    keep = [P.vertices[i] for i, w in enumerate(vals) if side * w >= 0]
    pts = set(keep)
    for (i, j) in P.edges:
        if vals[i] * vals[j] < 0:
            a, b = P.vertices[i], P.vertices[j]
            lam = vals[i] / (vals[i] - vals[j])
            pts.add(tuple(x + lam * (y - x) for x, y in zip(a, b)))
    if not pts:
        return None
    return hull_from_vertices(sorted(pts))


# ---------------------------------------------------------------------------
# projections through polarity

class ProjectionCombinatorics(NamedTuple):
    section: SectionIncidence   # of the polar body cut by u-perp
    survivors: tuple            # P-vertex indices whose shadow is a vertex
    classes: tuple              # per shadow vertex, the P-vertices mapping there
    shadow_f_vector: tuple
    center: tuple               # the centroid shift that was applied


def projection_combinatorics(P: Polytope, u) -> ProjectionCombinatorics:
    u = qvec(u)
    if all(x == 0 for x in u):
        raise InputError("zero projection direction", field="direction")
    if P.dim != P.ambient_dim or P.dim < 2:
        raise InputError(
            "projection requires a full-dimensional polytope of dim >= 2",
            field="input",
        )
    # vertex centroid: cheap, exact, and strictly interior
    n = len(P.vertices)
    c = tuple(sum(col) / n for col in zip(*P.vertices))
    shifted = P.translate(tuple(-x for x in c))
    D = polar(shifted)

    H = Hyperplane(u, Q(0))
    cut_res = intersected_edges(D, H)
    ch = SlicingChamber("central", cut_res.crossed, cut_res.touched, None,
                        tuple(u))
    inc = slice_combinatorics(D, ch)

    # facets of the section are cut facets of D plus flat (d-2)-faces of D;
    # each dualizes to the face of P whose projection is one shadow vertex
    cut, flat = _faces_meeting(D, cut_res.values)
    d = D.dim
    facet_faces = sorted(cut.get(d - 1, ()), key=sorted)
    facet_faces += sorted(flat.get(d - 2, ()), key=sorted)
    classes = []
    for W in facet_faces:
        cls = tuple(
            i for i, v in enumerate(shifted.vertices)
            if all(vdot(D.vertices[w], v) == 1 for w in W)
        )
        classes.append(cls)
    survivors = tuple(sorted({i for cls in classes for i in cls}))
    shadow_f = tuple(reversed(inc.f_vector))
    return ProjectionCombinatorics(inc, survivors, tuple(classes),
                                   shadow_f, tuple(c))


def shadow_polytope(P: Polytope, u) -> Polytope:
    """Concrete orthogonal projection of P along u, as a polytope embedded
    in the hyperplane through the origin orthogonal to u."""
    u = qvec(u)
    nsq = vdot(u, u)
    if nsq == 0:
        raise InputError("zero projection direction", field="direction")
    pts = sorted(
        {
            tuple(x - vdot(u, v) * y / nsq for x, y in zip(v, u))
            for v in P.vertices
        }
    )
    return hull_from_vertices(pts)
