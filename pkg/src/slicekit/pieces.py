"""Piecewise symbolic integrals of polynomials over hyperplane sections,
halfspace cuts, and shadows.

Normalization of the emitted formulas: section pieces (central, rotational,
translational) are scaled so that evaluating at a unit-length direction
gives the integral directly; each such piece is homogeneous of degree -1 in
its direction block.  At a non-unit rational u the numeric integral is
piece(u) * |u| for those modes, piece(b) / |u| for the fixed-direction mode
(with b measured against the raw u), piece(u) / |u| for shadows, and
piece(u) exactly for halfspace cuts, which are 0-homogeneous.

Everything is exact rational-function arithmetic; floats enter only in the
convenience evaluators at the bottom.
"""

from __future__ import annotations

import math
from math import factorial
from typing import NamedTuple, Optional

from .errors import InputError, InternalInvariantError
from .hyperplanes import cocircuit_arrangement, enumerate_cells, sweep_arrangement
from .polytope import Polytope, hull_from_vertices, polar
from .qmath import Q, det as qdet, qvec, vdot
from .sections import (
    SlicingChamber,
    _label_sort_key,
    _pulling,
    central_chambers,
    chamber_hyperplane,
    chamber_triangulation,
    parallel_chambers,
    parametric_vertex,
    projection_combinatorics,
    rotational_chambers,
    section_points,
)
from .symbolic import (
    MultiPoly,
    RatFunc,
    monomial_to_linear_powers,
    parse_formula,
    rf_determinant,
    simplex_integral_power,
)


class Piece(NamedTuple):
    chamber: SlicingChamber
    value: RatFunc
    labels: tuple = ()        # projection mode: surviving vertex indices


class PiecewiseIntegral(NamedTuple):
    mode: str                 # central | parallel | rotational |
                              # translational | projection | halfspace
    pieces: tuple
    dim: int
    direction: Optional[tuple] = None   # parallel mode only


def _mode_vars(mode: str, d: int):
    u = ["u%d" % (i + 1) for i in range(d)]
    if mode in ("central", "halfspace", "projection"):
        return u
    if mode == "parallel":
        return ["b"]
    if mode == "rotational":
        return ["t%d" % (i + 1) for i in range(d)] + u
    if mode == "translational":
        return u + ["b"]
    raise InputError("unknown mode %r" % (mode,), field="mode")


def _coerce_poly(f, d: int) -> MultiPoly:
    xs = tuple("x%d" % (i + 1) for i in range(d))
    if isinstance(f, MultiPoly):
        if len(f.vars) != d:
            raise InputError(
                "polynomial has %d variables, expected %d" % (len(f.vars), d),
                field="poly",
            )
        return f
    if isinstance(f, str):
        rf = parse_formula(f, xs)
        if not rf.den.is_constant():
            raise InputError(
                "integrand must be polynomial, got a denominator",
                field="poly",
            )
        c = rf.den.constant_value()
        return MultiPoly(rf.num.vars,
                         {e: q / c for e, q in rf.num.terms.items()})
    try:
        c = Q(f)
    except (TypeError, ValueError):
        raise InputError("cannot read %r as an integrand" % (f,),
                         field="poly")
    return MultiPoly.const(c, xs)


def _norm_sq(vs, d) -> RatFunc:
    terms = {}
    for i in range(d):
        e = [0] * len(vs)
        e[vs.index("u%d" % (i + 1))] = 2
        terms[tuple(e)] = Q(1)
    return RatFunc(MultiPoly(tuple(vs), terms))


def _rep_env(ch: SlicingChamber) -> dict:
    if ch.mode == "central":
        return {"u%d" % (i + 1): x for i, x in enumerate(ch.chamber_rep)}
    if ch.mode == "parallel":
        return {"b": Q(ch.chamber_rep)}
    if ch.mode == "rotational":
        env = {"t%d" % (i + 1): x for i, x in enumerate(ch.region_rep)}
        env.update({"u%d" % (i + 1): x for i, x in enumerate(ch.chamber_rep)})
        return env
    if ch.mode == "translational":
        env = {"u%d" % (i + 1): x for i, x in enumerate(ch.region_rep)}
        env["b"] = Q(ch.chamber_rep)
        return env
    raise InputError("unknown chamber mode %r" % (ch.mode,), field="mode")


def _symbolic_points(P: Polytope, ch: SlicingChamber, labels) -> dict:
    """Label -> parametric section vertex (tuple of RatFunc over the
    chamber mode's variables)."""
    vs = _mode_vars(ch.mode, P.dim)
    pts = {}
    for lab in labels:
        if isinstance(lab, tuple):
            pts[lab] = tuple(
                RatFunc.const(x, vs) for x in P.chart_vertices[lab[1]]
            )
        else:
            i, j = P.edges[lab]
            edge = (P.chart_vertices[i], P.chart_vertices[j])
            if ch.mode == "parallel":
                pts[lab] = parametric_vertex(edge, "parallel",
                                             direction=ch.region_rep)
            else:
                pts[lab] = parametric_vertex(edge, ch.mode)
    return pts


def _u_row(mode: str, d: int, ch: SlicingChamber):
    vs = _mode_vars(mode, d)
    if mode == "parallel":
        return tuple(RatFunc.const(x, vs) for x in ch.region_rep)
    return tuple(
        RatFunc(MultiPoly.var("u%d" % (i + 1), vs)) for i in range(d)
    )


def _simplex_sum(points, fpoly: MultiPoly, vol: RatFunc, vs) -> RatFunc:
    total = RatFunc.const(0, vs)
    for alpha, c in fpoly.terms.items():
        for coeff, p, D in monomial_to_linear_powers(alpha):
            total = total + RatFunc.const(c * coeff, vs) * \
                simplex_integral_power(points, p, D, vol)
    return total


def _signed_volume(det: RatFunc, env: dict, fact: int, vs) -> RatFunc:
    val = det.evaluate(env)
    if val == 0:
        raise InternalInvariantError(
            "degenerate simplex at a chamber representative"
        )
    sign = 1 if val > 0 else -1
    return det * RatFunc.const(Q(sign, fact), vs)


def section_piece(P: Polytope, ch: SlicingChamber, f) -> RatFunc:
    """The symbolic integral of f over the moving section, on one chamber."""
    d = P.dim
    vs = _mode_vars(ch.mode, d)
    fpoly = _coerce_poly(f, d)
    if not ch.edges:
        return RatFunc.const(0, vs)
    recipe = chamber_triangulation(P, ch)
    pts = _symbolic_points(P, ch, recipe.labels)
    urow = _u_row(ch.mode, d, ch)
    env = _rep_env(ch)

    total = RatFunc.const(0, vs)
    for simplex in recipe.simplices:
        sp = [pts[lab] for lab in simplex]
        rows = [
            tuple(sp[j][k] - sp[0][k] for k in range(d))
            for j in range(1, d)
        ]
        rows.append(urow)
        det = rf_determinant(rows)
        vol = _signed_volume(det, env, factorial(d - 1), vs)
        total = total + _simplex_sum(sp, fpoly, vol, vs)

    if ch.mode == "parallel":
        return total.reduce()
    return (total / _norm_sq(vs, d)).reduce()


def integral_central(P: Polytope, f) -> PiecewiseIntegral:
    pieces = tuple(
        Piece(ch, section_piece(P, ch, f)) for ch in central_chambers(P)
    )
    return PiecewiseIntegral("central", pieces, P.dim)


def integral_parallel(P: Polytope, u, f) -> PiecewiseIntegral:
    u = qvec(u)
    pieces = tuple(
        Piece(ch, section_piece(P, ch, f)) for ch in parallel_chambers(P, u)
    )
    return PiecewiseIntegral("parallel", pieces, P.dim, direction=tuple(u))


def integral_affine_rotational(P: Polytope, f, regions=None) -> PiecewiseIntegral:
    """Pieces over (translation region, direction chamber) pairs.

    regions: iterable of exact translation vectors restricting the outer
    loop; default is one representative per maximal region of the
    vertex-simplex decomposition of translation space."""
    if regions is None:
        A = cocircuit_arrangement(P)
        regions = [c.representative for c in enumerate_cells(A, min_dim=P.dim)]
    pieces = []
    for t in regions:
        for ch in rotational_chambers(P, t):
            pieces.append(Piece(ch, section_piece(P, ch, f)))
    return PiecewiseIntegral("rotational", tuple(pieces), P.dim)


def integral_affine_translational(P: Polytope, f, regions=None) -> PiecewiseIntegral:
    """Pieces over (direction cone, offset interval) pairs, symbolic in both
    the direction u and the offset b.

    regions: iterable of exact direction vectors, one per cone of interest;
    default is one representative per maximal cone of the edge-difference
    fan."""
    if regions is None:
        A = sweep_arrangement(P)
        regions = [c.representative for c in enumerate_cells(A, min_dim=P.dim)]
    pieces = []
    for u in regions:
        for ch in parallel_chambers(P, u, mode="translational"):
            pieces.append(Piece(ch, section_piece(P, ch, f)))
    return PiecewiseIntegral("translational", tuple(pieces), P.dim)


# ---------------------------------------------------------------------------
# halfspace cuts

def _relabeled_recipe(hull: Polytope, relabel: dict):
    faces = {
        k: {frozenset(relabel[i] for i in F) for F in fs}
        for k, fs in hull.all_faces().items()
    }
    top = frozenset(relabel.values())
    return _pulling(faces, top, hull.dim)


def _halfspace_recipe(P: Polytope, ch: SlicingChamber):
    """Stable-label triangulation of P cut to the nonnegative side of the
    chamber's hyperplane; None when that side has no volume."""
    H = chamber_hyperplane(ch)
    pts = {}
    for i, v in enumerate(P.chart_vertices):
        if H.value(v) >= 0:
            pts[("v", i)] = v
    pts.update(section_points(P, ch))
    if len(pts) <= P.dim:
        return None
    hull = hull_from_vertices(sorted(set(pts.values())))
    if hull.dim < P.dim:
        return None
    pos = {}
    for lab in sorted(pts, key=_label_sort_key):
        pos.setdefault(pts[lab], lab)
    relabel = {i: pos[v] for i, v in enumerate(hull.vertices)}
    sims = _relabeled_recipe(hull, relabel)
    return tuple(sorted(
        (tuple(sorted(s, key=_label_sort_key)) for s in sims),
        key=lambda t: tuple(_label_sort_key(x) for x in t),
    ))


def halfspace_piece(P: Polytope, ch: SlicingChamber, f) -> RatFunc:
    """Integral of f over the part of P on the nonnegative side of the
    moving hyperplane, on one chamber of any slicing decomposition; the
    piece's variables follow the chamber mode."""
    d = P.dim
    vs = _mode_vars(ch.mode, d)
    fpoly = _coerce_poly(f, d)
    recipe = _halfspace_recipe(P, ch)
    if recipe is None:
        return RatFunc.const(0, vs)
    labels = sorted({lab for s in recipe for lab in s}, key=_label_sort_key)
    pts = _symbolic_points(P, ch, labels)
    env = _rep_env(ch)

    total = RatFunc.const(0, vs)
    for simplex in recipe:
        sp = [pts[lab] for lab in simplex]
        rows = [
            tuple(sp[j][k] - sp[0][k] for k in range(d))
            for j in range(1, d + 1)
        ]
        det = rf_determinant(rows)
        vol = _signed_volume(det, env, factorial(d), vs)
        total = total + _simplex_sum(sp, fpoly, vol, vs)
    return total.reduce()


def integral_halfspace(P: Polytope, f) -> PiecewiseIntegral:
    pieces = tuple(
        Piece(ch, halfspace_piece(P, ch, f)) for ch in central_chambers(P)
    )
    return PiecewiseIntegral("halfspace", pieces, P.dim)


# ---------------------------------------------------------------------------
# shadows

def _projected_points(P: Polytope, survivors, vs, d) -> dict:
    """Symbolic orthogonal projections v - <u,v> u / |u|^2 of the surviving
    vertices, in the original coordinates of P."""
    u = [RatFunc(MultiPoly.var("u%d" % (i + 1), vs)) for i in range(d)]
    nsq = sum((x * x for x in u), RatFunc.const(0, vs))
    out = {}
    for i in survivors:
        v = P.vertices[i]
        uv = sum((u[k] * RatFunc.const(v[k], vs) for k in range(d)),
                 RatFunc.const(0, vs))
        out[i] = tuple(
            RatFunc.const(v[k], vs) - uv * u[k] / nsq for k in range(d)
        )
    return out


def _shadow_recipe(P: Polytope, urep):
    """Surviving vertices and a stable shadow triangulation at one concrete
    direction, labels being P-vertex indices; valid across the whole open
    chamber of the polar fan that contains urep."""
    pc = projection_combinatorics(P, urep)
    if any(len(cls) != 1 for cls in pc.classes):
        raise InternalInvariantError(
            "non-simple shadow vertex inside an open chamber"
        )
    survivors = pc.survivors
    nsq = vdot(urep, urep)
    concrete = {
        i: tuple(
            x - vdot(urep, P.vertices[i]) * y / nsq
            for x, y in zip(P.vertices[i], urep)
        )
        for i in survivors
    }
    hull = hull_from_vertices(sorted(set(concrete.values())))
    if hull.dim != P.dim - 1 or len(hull.vertices) != len(survivors):
        raise InternalInvariantError("shadow has the wrong shape")
    back = {v: i for i, v in concrete.items()}
    relabel = {k: back[v] for k, v in enumerate(hull.vertices)}
    return survivors, _relabeled_recipe(hull, relabel)


def projection_piece(P: Polytope, urep, f):
    """Symbolic shadow integral of f on the polar-fan chamber containing
    urep; returns (piece, survivors)."""
    d = P.dim
    if P.dim != P.ambient_dim or d < 2:
        raise InputError(
            "projection requires a full-dimensional polytope of dim >= 2",
            field="input",
        )
    vs = _mode_vars("projection", d)
    fpoly = _coerce_poly(f, d)
    urep = qvec(urep)
    survivors, sims = _shadow_recipe(P, urep)
    spts = _projected_points(P, survivors, vs, d)
    urow = tuple(RatFunc(MultiPoly.var("u%d" % (i + 1), vs)) for i in range(d))
    env = {"u%d" % (i + 1): x for i, x in enumerate(urep)}
    total = RatFunc.const(0, vs)
    for simplex in sims:
        order = sorted(simplex)
        # row operations cancel the -<u,v>u/|u|^2 parts against the u
        # row, so plain vertex differences give the same determinant
        rows = [
            tuple(
                RatFunc.const(P.vertices[j][k] - P.vertices[order[0]][k], vs)
                for k in range(d)
            )
            for j in order[1:]
        ]
        rows.append(urow)
        det = rf_determinant(rows)
        vol = _signed_volume(det, env, factorial(d - 1), vs)
        total = total + _simplex_sum([spts[j] for j in order], fpoly, vol, vs)
    return total.reduce(), survivors


def integral_projection(P: Polytope, f) -> PiecewiseIntegral:
    """Integral of f over the shadow (orthogonal projection along u), one
    piece per chamber of the radial fan of the polar body.

    Each piece also records which vertices of P survive to the shadow
    boundary on its chamber."""
    d = P.dim
    if P.dim != P.ambient_dim or d < 2:
        raise InputError(
            "projection requires a full-dimensional polytope of dim >= 2",
            field="input",
        )
    n = len(P.vertices)
    c = tuple(sum(col) / n for col in zip(*P.vertices))
    shifted = P.translate(tuple(-x for x in c))
    D = polar(shifted)

    pieces = []
    for ch in central_chambers(D):
        value, survivors = projection_piece(P, ch.chamber_rep, f)
        pieces.append(Piece(ch, value, tuple(survivors)))
    return PiecewiseIntegral("projection", tuple(pieces), d)


# ---------------------------------------------------------------------------
# whole-polytope integral and numeric evaluation

def polytope_integral(P: Polytope, f):
    """Exact integral of f over P in chart coordinates.

    For a lower-dimensional P embedded with a non-orthonormal chart the
    intrinsic value differs by the square root of the chart's Gram
    determinant, which the caller applies."""
    d = P.dim
    fpoly = _coerce_poly(f, d)
    if d == 0:
        return Q(0)
    total = Q(0)
    for simplex in P.triangulation():
        pts = [P.chart_vertices[i] for i in simplex]
        rows = [tuple(b - a for a, b in zip(pts[0], p)) for p in pts[1:]]
        vol = abs(qdet(rows)) / factorial(d)
        if vol == 0:
            continue
        for alpha, c in fpoly.terms.items():
            for coeff, p, D in monomial_to_linear_powers(alpha):
                total += c * coeff * simplex_integral_power(pts, p, D, vol)
    return total


def evaluate_float(rf: RatFunc, env: dict) -> float:
    def poly(p):
        acc = 0.0
        for e, c in p.terms.items():
            t = float(c)
            for v, k in zip(p.vars, e):
                if k:
                    t *= float(env[v]) ** k
            acc += t
        return acc

    return poly(rf.num) / poly(rf.den)


def numeric_value(mode: str, rf: RatFunc, *, u=None, b=None, t=None) -> float:
    """Numeric integral for the cut with unit normal u/|u| (offset b, where
    applicable, measured against that unit normal)."""
    env = {}
    norm = 1.0
    if u is not None:
        u = qvec(u)
        norm = math.sqrt(float(vdot(u, u)))
        env.update({"u%d" % (i + 1): x for i, x in enumerate(u)})
    if t is not None:
        env.update({"t%d" % (i + 1): x for i, x in enumerate(qvec(t))})
    if mode in ("central", "rotational"):
        return evaluate_float(rf, env) * norm
    if mode == "translational":
        env["b"] = float(b) * norm
        return evaluate_float(rf, env) * norm
    if mode == "parallel":
        return evaluate_float(rf, {"b": float(b) * norm}) / norm
    if mode == "projection":
        return evaluate_float(rf, env) / norm
    if mode == "halfspace":
        return evaluate_float(rf, env)
    raise InputError("unknown mode %r" % (mode,), field="mode")
