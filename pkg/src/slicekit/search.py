"""Search for optimal cuts over all affine hyperplanes.

Two regimes share one sweep skeleton.  Combinatorial objectives (face
counts of the cut, weighted counts of crossed faces) are constant on each
chamber of the direction-times-offset decomposition, so those optima come
from finite exact enumeration over every cell of positive dimension,
breakpoint slots included.  Continuous objectives (integrals of a
polynomial over the moving section, halfspace, or shadow) are piecewise
rational; each chamber contributes a smooth subproblem solved by
multistart projected ascent in the direction block combined with exact
one-dimensional optimization in the offset, followed by re-optimization on
every wall flat the incumbent touches.  The winning float witness is then
snapped to exact rational coordinates and kept only when the exact value
certifies at least the float value.

Zero-homogeneity of the assembled objective (piece times the square root
of the metric weight) lets the ascent run on raw direction vectors;
normalization is purely for conditioning.  Chambers are closed throughout,
so optima attained on walls are reachable both numerically and exactly.

Chamber identity is the pair (cell sign string, slot key).  Ties between
chambers break toward the lexicographically smallest identity; within a
chamber the first witness found wins.
"""

from __future__ import annotations

import math
import random
import zlib
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from typing import NamedTuple, Optional

from .errors import InputError, InternalInvariantError
from .hyperplanes import (
    Hyperplane,
    central_arrangement,
    enumerate_cells,
    sweep_arrangement,
)
from .lp import interior_point
from .pieces import (
    _coerce_poly,
    _mode_vars,
    halfspace_piece,
    polytope_integral,
    projection_piece,
    section_piece,
)
from .polytope import Polytope, hull_from_vertices, polar, sqrt_exact
from .qmath import Q, clear_denominators, nullspace, qvec, rank, vdot
from .sections import (
    SlicingChamber,
    _chart_cut,
    chamber_hyperplane,
    halfspace_section,
    parallel_chambers,
    pull_to_chart,
    section_points,
    shadow_polytope,
    slice_combinatorics,
)
from .symbolic import MultiPoly, RatFunc

_TARGETS = ("section", "halfspace", "projection")
_SENSES = ("max", "min")


class OptimizationResult(NamedTuple):
    value: float
    witness_normal: tuple          # ambient coordinates; exact when certified
    witness_offset: object         # ambient offset; None for projections
    chamber: tuple                 # (cell signs, slot key) at the witness
    log: tuple                     # ((cell signs, slot key), value, iterations)
    certified: bool = False
    exact_value: object = None     # rational optimum, when it is one
    exact_value_sq: object = None  # optimum^2, when only the square is rational


class ChamberProblem(NamedTuple):
    """One chamber of a slicing decomposition as a feasible set.

    The direction u ranges over the closed cone cut out of the flat
    {<n, u> = 0 for n in zero_rows} by sign * <n, u> >= 0 for (sign, n) in
    cone_rows.  When interval is a pair (wlo, whi) of vertex vectors the
    offset b ranges over [<wlo, u>, <whi, u>]; None means the piece has no
    offset variable.  The objective is piece * sqrt(weight), with weight a
    positive rational function of u encoding the chart metric (the sum of
    squares for a full-dimensional polytope, the default)."""

    dim: int
    rep: Optional[tuple]
    zero_rows: tuple = ()
    cone_rows: tuple = ()
    interval: Optional[tuple] = None
    weight: object = None


# ---------------------------------------------------------------------------
# fast float evaluation

class _FloatPoly:
    __slots__ = ("terms",)

    def __init__(self, p: MultiPoly):
        self.terms = tuple((float(c), tuple(e)) for e, c in p.terms.items())

    def __call__(self, xs):
        acc = 0.0
        for c, e in self.terms:
            t = c
            for x, k in zip(xs, e):
                if k:
                    t *= x ** k
            acc += t
        return acc


def _norm(v):
    return math.sqrt(sum(x * x for x in v))


def _unit(v):
    n = _norm(v)
    if n == 0.0 or not math.isfinite(n):
        return None
    return tuple(x / n for x in v)


def _flat_projector(zero_rows):
    """Orthonormal basis of the null space of the zero rows as a numpy
    matrix; None stands for the whole space."""
    if not zero_rows:
        return None
    import numpy as np

    M = np.array([[float(x) for x in r] for r in zero_rows], dtype=float)
    _, s, vt = np.linalg.svd(M)
    r = int((s > 1e-12 * max(1.0, s[0])).sum()) if len(s) else 0
    return vt[r:].T


def _project_flat(Z, v):
    if Z is None:
        return tuple(v)
    import numpy as np

    x = np.asarray(v, dtype=float)
    return tuple((Z @ (Z.T @ x)).tolist())


def _offset_coefficients(piece: RatFunc):
    """Numerator grouped by the power of the offset variable; slicing pieces
    never carry the offset into the denominator."""
    vs = piece.vars
    bi = vs.index("b")
    if any(e[bi] for e in piece.den.terms):
        raise InternalInvariantError("offset variable in a piece denominator")
    groups = {}
    for e, c in piece.num.terms.items():
        k = e[bi]
        rest = e[:bi] + (0,) + e[bi + 1:]
        bucket = groups.setdefault(k, {})
        bucket[rest] = bucket.get(rest, Q(0)) + c
    return sorted((k, MultiPoly(vs, t)) for k, t in groups.items())


# ---------------------------------------------------------------------------
# per-chamber continuous optimization

class _Engine:
    """Float machinery for one chamber: value piece * sqrt(weight), with the
    offset coordinate solved per direction from its polynomial structure.
    Gradients come from numerator/denominator partials, never from squared
    denominators."""

    def __init__(self, piece: RatFunc, problem: ChamberProblem, sense: str):
        self.problem = problem
        self.sgn = 1.0 if sense == "max" else -1.0
        d = problem.dim
        self.d = d
        self.has_b = problem.interval is not None
        uvars = ["u%d" % (i + 1) for i in range(d)]
        self.p_num = _FloatPoly(piece.num)
        self.p_den = _FloatPoly(piece.den)
        self.p_num_d = [_FloatPoly(piece.num.derivative(v)) for v in uvars]
        self.p_den_d = [_FloatPoly(piece.den.derivative(v)) for v in uvars]
        self.p_num_b = _FloatPoly(piece.num.derivative("b")) if self.has_b \
            else None
        w = problem.weight
        self.w_num = _FloatPoly(w.num)
        self.w_den = _FloatPoly(w.den)
        self.w_num_d = [_FloatPoly(w.num.derivative(v)) for v in uvars]
        self.w_den_d = [_FloatPoly(w.den.derivative(v)) for v in uvars]
        self.rows = tuple(
            (s, tuple(float(x) for x in n), _norm([float(x) for x in n]))
            for s, n in problem.cone_rows
        )
        self.Z = _flat_projector(problem.zero_rows)
        if self.has_b:
            self.wlo = tuple(float(x) for x in problem.interval[0])
            self.whi = tuple(float(x) for x in problem.interval[1])
            self.f_bcoeffs = [(k, _FloatPoly(c))
                              for k, c in _offset_coefficients(piece)]

    def feasible(self, u):
        for s, n, sc in self.rows:
            if s * sum(a * b for a, b in zip(n, u)) < -1e-11 * max(sc, 1.0):
                return False
        return True

    def best_b(self, u):
        """Offset optimization at fixed direction: the piece is polynomial
        in b, so candidates are the closed interval's ends plus the real
        critical points inside it.  Where the interval pinches shut the
        piece is 0/0 and float evaluation is meaningless, so such points
        are reported unevaluable; exact certification handles them."""
        lo = sum(a * b for a, b in zip(self.wlo, u))
        hi = sum(a * b for a, b in zip(self.whi, u))
        if hi < lo:
            lo, hi = hi, lo
        if hi - lo <= 1e-12 * max(1.0, abs(lo), abs(hi)):
            return None
        den = self.p_den(tuple(u) + (0.0,))
        if abs(den) < 1e-300 or not math.isfinite(den):
            return None
        coeffs = {k: c(tuple(u) + (0.0,)) / den for k, c in self.f_bcoeffs}
        deg = max(coeffs) if coeffs else 0
        cands = [lo, hi]
        if deg >= 2:
            dcf = [k * coeffs.get(k, 0.0) for k in range(1, deg + 1)]
            while dcf and abs(dcf[-1]) < 1e-300:
                dcf.pop()
            if len(dcf) >= 2:
                import numpy as np

                for r in np.roots(list(reversed(dcf))):
                    if abs(r.imag) < 1e-9 and lo < r.real < hi:
                        cands.append(float(r.real))
        best_b, best_v = lo, -math.inf
        for b in cands:
            v = self.sgn * sum(c * b ** k for k, c in coeffs.items())
            if math.isfinite(v) and v > best_v:
                best_b, best_v = b, v
        return best_b

    def _core(self, u, b):
        xs = tuple(u) + ((b,) if self.has_b else ())
        N, D = self.p_num(xs), self.p_den(xs)
        WN, WD = self.w_num(tuple(u)), self.w_den(tuple(u))
        if abs(D) < 1e-300 or abs(WD) < 1e-300:
            return None
        w = WN / WD
        if not (math.isfinite(N) and math.isfinite(w)) or w <= 0.0:
            return None
        return xs, N, D, w

    def value(self, u, b):
        core = self._core(u, b)
        if core is None:
            return math.nan
        _, N, D, w = core
        return (N / D) * math.sqrt(w)

    def grad(self, u, b):
        core = self._core(u, b)
        if core is None:
            return None
        xs, N, D, w = core
        p = N / D
        s = math.sqrt(w)
        bvec = None
        if self.has_b:
            lo = sum(a * c for a, c in zip(self.wlo, u))
            hi = sum(a * c for a, c in zip(self.whi, u))
            if abs(b - lo) <= 1e-9 * (1.0 + abs(lo)):
                bvec = self.wlo
            elif abs(b - hi) <= 1e-9 * (1.0 + abs(hi)):
                bvec = self.whi
        pb = 0.0
        if bvec is not None:
            pb = self.p_num_b(xs) / D
        uu = tuple(u)
        g = []
        for i in range(self.d):
            dp = (self.p_num_d[i](xs) - p * self.p_den_d[i](xs)) / D
            dw = (self.w_num_d[i](uu) - w * self.w_den_d[i](uu)) / \
                self.w_den(uu)
            gi = dp * s + p * dw / (2.0 * s)
            if bvec is not None:
                gi += pb * bvec[i] * s
            if not math.isfinite(gi):
                return None
            g.append(gi)
        return g

    def eval_at(self, u):
        if self.has_b:
            b = self.best_b(u)
            if b is None:
                return math.nan, None
            return self.value(u, b), b
        return self.value(u, None), None

    def ascend(self, u0, iters):
        u = _unit(_project_flat(self.Z, u0))
        if u is None or not self.feasible(u):
            return None
        val, b = self.eval_at(u)
        if not math.isfinite(val):
            return None
        used = 0
        stall = 0
        while used < iters:
            used += 1
            g = self.grad(u, b)
            if g is None:
                break
            g = list(_project_flat(self.Z, g))
            du = sum(a * c for a, c in zip(g, u))
            g = [a - du * c for a, c in zip(g, u)]
            if self.sgn < 0:
                g = [-a for a in g]
            gn = _norm(g)
            if gn < 1e-12 * (1.0 + abs(val)):
                break
            step = [a / gn for a in g]
            eta = 0.5
            moved = False
            for _ in range(14):
                cand = _unit(_project_flat(
                    self.Z, [a + eta * c for a, c in zip(u, step)]
                ))
                if cand is not None and self.feasible(cand):
                    cv, cb = self.eval_at(cand)
                    if math.isfinite(cv) and self.sgn * (cv - val) > 1e-15:
                        u, b, val = cand, cb, cv
                        moved = True
                        break
                eta /= 3.0
            if moved:
                stall = 0
            else:
                stall += 1
                if stall >= 2:
                    break
        return val, u, b, used


def _default_weight(d):
    vs = tuple(_mode_vars("central", d))
    terms = {}
    for i in range(d):
        e = [0] * d
        e[i] = 2
        terms[tuple(e)] = Q(1)
    return RatFunc(MultiPoly(vs, terms))


def _chamber_rep(problem: ChamberProblem):
    if problem.rep is not None:
        return qvec(problem.rep)
    strict = [(n, Q(0), s) for s, n in problem.cone_rows]
    eqs = [(z, Q(0)) for z in problem.zero_rows]
    got = interior_point(strict, eqs, problem.dim, box=Q(1))
    if got is None:
        raise InputError("empty chamber: no feasible direction",
                         field="chamber")
    return qvec(got[0])


def per_chamber_optimize(piece, problem: ChamberProblem, sense: str = "max",
                         rng=None, starts: int = 8, iters: int = 120,
                         _seen=None):
    """Best local value of piece * sqrt(weight) over the closed chamber.

    Multistart projected ascent over directions (descent for sense 'min'),
    the offset coordinate optimized per direction from its polynomial
    critical points, then recursive re-optimization on every wall flat the
    incumbent touches.  Returns (value, witness) with witness a dict
    {'u': direction floats, 'b': offset float or None, 'iterations': n}.
    Exactness is the sweep driver's job; this is the float stage.
    """
    if sense not in _SENSES:
        raise InputError("sense must be 'max' or 'min'", field="sense")
    if starts < 1:
        raise InputError("need at least one start", field="starts")
    if problem.weight is None:
        problem = problem._replace(weight=_default_weight(problem.dim))
    rep = _chamber_rep(problem)
    rng = rng if rng is not None else random.Random(0)
    engine = _Engine(piece, problem, sense)
    sgn = engine.sgn

    repf = tuple(float(x) for x in rep)
    seeds = [repf]
    sigmas = (0.3, 1.0, 3.0)
    tries = 0
    while len(seeds) < starts and tries < 40 * starts:
        tries += 1
        sigma = sigmas[len(seeds) % len(sigmas)]
        cand = _unit(_project_flat(
            engine.Z, [a + sigma * rng.gauss(0.0, 1.0) for a in repf]
        ))
        if cand is not None and engine.feasible(cand):
            seeds.append(cand)

    best = None
    used = 0
    for s in seeds:
        got = engine.ascend(s, iters)
        if got is None:
            continue
        val, u, b, it = got
        used += it
        if best is None or sgn * (val - best[0]) > 0:
            best = (val, u, b)
    if best is None:
        u = _unit(repf)
        v, b = engine.eval_at(u)
        best = (v if math.isfinite(v) else (-sgn) * math.inf, u, b)

    # wall restrictions at the incumbent, recursively (closure convention);
    # restricting means promoting the touched row to a zero row, so the
    # engine's flat projection does the rest
    seen = _seen if _seen is not None else set()
    seen.add(frozenset(problem.zero_rows))
    val, u, b = best
    for s, n in problem.cone_rows:
        nf = [float(x) for x in n]
        if abs(sum(a * c for a, c in zip(nf, u))) > 1e-6 * max(_norm(nf), 1.0):
            continue
        new_zero = problem.zero_rows + (n,)
        if frozenset(new_zero) in seen:
            continue
        seen.add(frozenset(new_zero))
        r = rank([list(z) for z in new_zero])
        if problem.dim - r < 1:
            continue
        kept, absorbed = [], list(new_zero)
        for so, no in problem.cone_rows:
            if no == n:
                continue
            if rank([list(z) for z in absorbed] + [list(no)]) == r:
                absorbed.append(no)
            else:
                kept.append((so, no))
        sub = problem._replace(
            rep=None, zero_rows=tuple(absorbed), cone_rows=tuple(kept)
        )
        try:
            sv, sw = per_chamber_optimize(
                piece, sub, sense, rng, max(2, starts // 2), iters, seen
            )
        except InputError:
            continue
        used += sw["iterations"]
        if sgn * (sv - val) > 0:
            val, u, b = sv, tuple(sw["u"]), sw["b"]
    return val, {"u": tuple(u), "b": b, "iterations": used}


# ---------------------------------------------------------------------------
# exact witness snapping

def _snap_directions(problem: ChamberProblem, uf, extra_zero=()):
    """Rational directions near uf inside the closed chamber, rationalized
    in an exact basis of the active flat so zero walls stay exactly zero."""
    import numpy as np

    rows = [list(r) for r in problem.zero_rows + tuple(extra_zero)]
    if rows:
        basis = nullspace(rows)
    else:
        basis = [
            tuple(Q(1) if j == i else Q(0) for j in range(problem.dim))
            for i in range(problem.dim)
        ]
    if not basis:
        return []
    A = np.array([[float(b[i]) for b in basis] for i in range(problem.dim)])
    y, *_ = np.linalg.lstsq(A, np.asarray(uf, dtype=float), rcond=None)
    out = []
    for N in (4, 12, 48, 360, 3600, 100000):
        coords = [Fraction(float(c)).limit_denominator(N) for c in y]
        u = [Q(0)] * problem.dim
        for c, bvec in zip(coords, basis):
            if c:
                u = [a + Q(c.numerator, c.denominator) * x
                     for a, x in zip(u, bvec)]
        if all(x == 0 for x in u):
            continue
        u = clear_denominators(u)
        if sum(float(a) * b for a, b in zip(u, uf)) < 0:
            u = tuple(-a for a in u)
        if all(s * vdot(n, u) >= 0 for s, n in problem.cone_rows) \
                and u not in out:
            out.append(tuple(u))
    return out


def _snap_offsets(problem: ChamberProblem, piece: RatFunc, u, bf):
    """Exact offset candidates at an exact direction: interval ends, the
    float offset's rationalized relative position, and rational critical
    points of the offset polynomial."""
    if problem.interval is None:
        return [None]
    lo = vdot(problem.interval[0], u)
    hi = vdot(problem.interval[1], u)
    if hi < lo:
        lo, hi = hi, lo
    cands = [lo, hi]
    flo, fhi = float(lo), float(hi)
    if bf is not None and fhi - flo > 1e-12:
        lam = (bf - flo) / (fhi - flo)
        for N in (4, 60, 3600):
            fr = Fraction(lam).limit_denominator(N)
            q = Q(fr.numerator, fr.denominator)
            if 0 <= q <= 1:
                cands.append(lo + q * (hi - lo))
    env = {v: x for v, x in zip(piece.vars, tuple(u) + (Q(0),))}
    coeffs = {k: c.evaluate(env) for k, c in _offset_coefficients(piece)}
    deg = max(coeffs) if coeffs else 0
    if deg == 2 and coeffs.get(2):
        b = -coeffs.get(1, Q(0)) / (2 * coeffs[2])
        if lo < b < hi:
            cands.append(b)
    elif deg == 3 and coeffs.get(3):
        # the derivative is quadratic; rational roots need a square
        # discriminant
        a2, a1 = 3 * coeffs[3], 2 * coeffs.get(2, Q(0))
        a0 = coeffs.get(1, Q(0))
        disc = a1 * a1 - 4 * a2 * a0
        if disc >= 0:
            root = sqrt_exact(disc)
            if root is not None:
                for sg in (1, -1):
                    b = (-a1 + sg * root) / (2 * a2)
                    if lo < b < hi:
                        cands.append(b)
    uniq = []
    for b in cands:
        if b not in uniq:
            uniq.append(b)
    return uniq


def _snap_candidates(piece: RatFunc, problem: ChamberProblem, wit):
    """Exact (u, b) pairs in the closed chamber near the float witness,
    walls the witness touches pinned first.  Scoring them is the caller's
    job; the piece only supplies the offset critical-point structure."""
    uf = wit["u"]
    extra = tuple(
        n for s, n in problem.cone_rows
        if abs(sum(float(x) * c for x, c in zip(n, uf)))
        <= 1e-6 * max(_norm([float(x) for x in n]), 1.0)
    )
    dirs = []
    for zset in (extra, ()):
        for u in _snap_directions(problem, uf, zset):
            if u not in dirs:
                dirs.append(u)
    red = piece.reduce()
    out = []
    for u in dirs:
        for b in _snap_offsets(problem, red, u, wit["b"]):
            out.append((u, b))
    return out


# ---------------------------------------------------------------------------
# ambient conversions and independent re-evaluation

def _ambient_hyperplane(P: Polytope, u, b):
    """The chart hyperplane <u, y> = b as an exact ambient (normal, offset);
    identity charts pass through unchanged."""
    u = qvec(u)
    ch = P.chart
    if ch.identity:
        return tuple(u), Q(b)
    n = [Q(0)] * ch.ambient_dim
    for ui, qi, gi in zip(u, ch.basis, ch.gram):
        if ui:
            n = [a + ui * x / gi for a, x in zip(n, qi)]
    off = vdot(tuple(n), ch.base) + Q(b)
    row = clear_denominators(tuple(n) + (off,))
    return tuple(row[:-1]), row[-1]


def chamber_hyperplane_ambient(P: Polytope, ch: SlicingChamber) -> Hyperplane:
    """The chamber's representative hyperplane in ambient coordinates."""
    if ch.mode == "central":
        u, b = ch.chamber_rep, Q(0)
    else:
        u, b = ch.region_rep, Q(ch.chamber_rep)
    n, c = _ambient_hyperplane(P, u, b)
    return Hyperplane(n, c)


def _pullback(fpoly: MultiPoly, base, basis, yvars):
    """Compose a polynomial exactly with the affine map
    y -> base + sum y_i basis_i."""
    binding = {}
    for k, xv in enumerate(fpoly.vars):
        terms = {}
        c0 = Q(base[k])
        if c0:
            terms[(0,) * len(yvars)] = c0
        for i in range(len(yvars)):
            ci = Q(basis[i][k])
            if ci:
                e = [0] * len(yvars)
                e[i] = 1
                terms[tuple(e)] = ci
        binding[xv] = MultiPoly(tuple(yvars), terms)
    g = fpoly.substitute(binding)
    if len(g.vars) != len(yvars):
        if not g.is_constant():
            raise InternalInvariantError("pullback lost variables")
        g = MultiPoly.const(g.constant_value(), tuple(yvars))
    return g


def _exact_chart_integral(P: Polytope, S: Polytope, fpoly: MultiPoly):
    """Exact integral over S (a polytope given in P's chart coordinates) of
    fpoly, with S's own chart metric squared split off: returns (I, msq)
    with the metric value I * sqrt(msq)."""
    yvars = tuple("y%d" % (i + 1) for i in range(S.dim))
    g = _pullback(fpoly, S.chart.base, S.chart.basis, yvars)
    return polytope_integral(S, g), Q(S.chart.gram_correction)


def _exact_objective(P: Polytope, fpoly: MultiPoly, target: str, normal,
                     offset):
    """Exact signed square of the objective at one concrete ambient witness,
    from the concrete cut geometry alone (no chamber formulas): returns
    (sign, value_squared) with the value sign * sqrt(value_squared)."""
    if target == "projection":
        if P.dim != P.ambient_dim:
            raise InputError(
                "projection needs a full-dimensional polytope", field="input"
            )
        S = shadow_polytope(P, qvec(normal))
        I, msq = _exact_chart_integral(P, S, fpoly)
        return _qsign(I), I * I * msq
    if offset is None:
        raise InputError("this target needs an offset", field="offset")
    H = Hyperplane(qvec(normal), Q(offset))
    Hc = pull_to_chart(P, H)
    if Hc is None:
        raise InputError(
            "hyperplane does not cut the affine hull transversally",
            field="witness",
        )
    if target == "section":
        cut = _chart_cut(P, Hc)
        if not cut.crossed and not cut.touched:
            return 0, Q(0)
        ch = SlicingChamber("parallel", cut.crossed, cut.touched,
                            tuple(Hc.normal), Hc.offset)
        pts = sorted(set(section_points(P, ch).values()))
        if len(pts) <= 1:
            return 0, Q(0)
        S = hull_from_vertices(pts)
        I, msq = _exact_chart_integral(P, S, fpoly)
        sfs = Q(P.chart.section_factor_squared(Hc.normal))
        return _qsign(I), I * I * msq * sfs
    # halfspace: cut in ambient coordinates, pull f through both charts
    S = halfspace_section(P, H, +1)
    if S is None or S.dim < P.dim:
        return 0, Q(0)
    ch = P.chart
    yvars = tuple("y%d" % (i + 1) for i in range(S.dim))
    diff = tuple(a - b for a, b in zip(S.chart.base, ch.base))
    base = [vdot(ch.basis[k], diff) / ch.gram[k] for k in range(P.dim)]
    basis = [
        tuple(vdot(ch.basis[k], S.chart.basis[i]) / ch.gram[k]
              for k in range(P.dim))
        for i in range(S.dim)
    ]
    g = _pullback(fpoly, base, basis, yvars)
    I = polytope_integral(S, g)
    return _qsign(I), I * I * Q(S.chart.gram_correction)


def _qsign(x):
    return 1 if x > 0 else (-1 if x < 0 else 0)


def evaluate_witness(P: Polytope, f, target: str, normal,
                     offset=None) -> float:
    """Objective value at one concrete hyperplane (or direction), recomputed
    from the concrete cut geometry rather than from chamber formulas; the
    re-evaluation oracle for optimization results."""
    if target not in _TARGETS:
        raise InputError("unknown target %r" % (target,), field="target")
    fpoly = _coerce_poly(f, P.dim)
    sign, vsq = _exact_objective(P, fpoly, target, normal, offset)
    return sign * math.sqrt(float(vsq))


# ---------------------------------------------------------------------------
# sweep drivers: continuous objectives

class _Task(NamedTuple):
    identity: tuple
    piece: RatFunc
    problem: ChamberProblem
    kind: str                    # translational | central | projection


def _chart_weight(P: Polytope):
    """Positive form W(u) with sqrt(W) the ambient (d-1)-measure of the unit
    chart section cell per unit chart measure, times the raw length of u;
    reduces to the sum of squares on identity charts."""
    if P.chart.identity:
        return _default_weight(P.dim)
    vs = tuple(_mode_vars("central", P.dim))
    gc = P.chart.gram_correction
    terms = {}
    for i in range(P.dim):
        e = [0] * P.dim
        e[i] = 2
        terms[tuple(e)] = Q(gc) / P.chart.gram[i]
    return RatFunc(MultiPoly(vs, terms))


def _halfspace_weight(P: Polytope):
    return RatFunc.const(
        P.chart.gram_correction, tuple(_mode_vars("central", P.dim))
    )


def _cell_rows(A, cell):
    zero, cone = [], []
    for i, s in enumerate(cell.signs):
        n = A.hyperplanes[i].normal
        if s == "0":
            zero.append(tuple(n))
        else:
            cone.append((1 if s == "+" else -1, tuple(n)))
    return tuple(zero), tuple(cone)


class _PieceCache:
    """Pieces are symbolic in (u, b), so one formula serves every chamber
    sharing the cut combinatorics; section formulas are side-symmetric,
    halfspace formulas also need the vertex side pattern.  Reducing once
    per distinct cut keeps both the cache entries and the float engines
    small."""

    def __init__(self, P, fpoly, target):
        self.P = P
        self.fpoly = fpoly
        self.target = target
        self.store = {}

    def get(self, ch, sides):
        key = (ch.edges, ch.on_vertices,
               sides if self.target == "halfspace" else None)
        got = self.store.get(key)
        if got is None:
            got = (section_piece(self.P, ch, self.fpoly)
                   if self.target == "section"
                   else halfspace_piece(self.P, ch, self.fpoly)).reduce()
            self.store[key] = got
        return got


def _sides(values, b):
    return tuple(1 if v > b else (-1 if v < b else 0) for v in values)


def _translational_tasks(P, fpoly, target):
    A = sweep_arrangement(P)
    W = _chart_weight(P) if target == "section" else _halfspace_weight(P)
    cache = _PieceCache(P, fpoly, target)
    tasks = []
    for cell in enumerate_cells(A, min_dim=P.dim):
        u = qvec(cell.representative)
        zero, cone = _cell_rows(A, cell)
        values = [vdot(u, v) for v in P.chart_vertices]
        breaks = sorted(set(values))
        reps = [P.chart_vertices[values.index(b)] for b in breaks]
        for ch in parallel_chambers(P, u, mode="translational"):
            k = ch.index
            piece = cache.get(ch, _sides(values, Q(ch.chamber_rep)))
            problem = ChamberProblem(
                dim=P.dim, rep=u, zero_rows=zero, cone_rows=cone,
                interval=(reps[k], reps[k + 1]), weight=W,
            )
            tasks.append(
                _Task((cell.signs, Q(k)), piece, problem, "translational")
            )
    return A, tasks


def _central_tasks(P, fpoly, target, weight):
    A = central_arrangement(P)
    cache = _PieceCache(P, fpoly, target)
    tasks = []
    for cell in enumerate_cells(A, min_dim=P.dim):
        u = qvec(cell.representative)
        zero, cone = _cell_rows(A, cell)
        cut = _chart_cut(P, Hyperplane(u, Q(0)))
        ch = SlicingChamber("central", cut.crossed, cut.touched, None, u)
        piece = cache.get(ch, _sides(cut.values, Q(0)))
        problem = ChamberProblem(
            dim=P.dim, rep=u, zero_rows=zero, cone_rows=cone,
            interval=None, weight=weight,
        )
        tasks.append(_Task((cell.signs, Q(0)), piece, problem, "central"))
    return A, tasks


def _projection_tasks(P, fpoly):
    n = len(P.vertices)
    c = tuple(sum(col) / n for col in zip(*P.vertices))
    shifted = P.translate(tuple(-x for x in c))
    D = polar(shifted)
    A = central_arrangement(D)
    nsq = _default_weight(P.dim)
    W = RatFunc(nsq.den, nsq.num)
    tasks = []
    for cell in enumerate_cells(A, min_dim=D.dim):
        u = qvec(cell.representative)
        zero, cone = _cell_rows(A, cell)
        piece, _ = projection_piece(P, u, fpoly)
        problem = ChamberProblem(
            dim=P.dim, rep=u, zero_rows=zero, cone_rows=cone,
            interval=None, weight=W,
        )
        tasks.append(_Task((cell.signs, Q(0)), piece, problem, "projection"))
    return A, tasks


def _identity_key(identity):
    signs, slot = identity
    return (signs, float(slot))


def _better(sense, value, identity, incumbent):
    if incumbent is None:
        return True
    iv, iid = incumbent
    if value != iv:
        return value > iv if sense == "max" else value < iv
    return _identity_key(identity) < _identity_key(iid)


def _slot_key(P, u, b):
    values = sorted({vdot(u, v) for v in P.chart_vertices})
    for k, bv in enumerate(values):
        if b == bv:
            return Q(2 * k - 1, 2)
        if b < bv:
            return Q(k - 1)
    return Q(len(values) - 1)


def _rationalize(x, N=10 ** 12):
    fr = Fraction(float(x)).limit_denominator(N)
    return Q(fr.numerator, fr.denominator)


def optimize_integral(P: Polytope, f=1, target: str = "section",
                      sense: str = "max", center=None, seed: int = 0,
                      starts: int = 8, iters: int = 120,
                      workers: Optional[int] = None) -> OptimizationResult:
    """Optimum of the integral of f over the moving cut, across all affine
    hyperplanes (or all directions, for projections).

    With center set, only hyperplanes through that point compete, via the
    radial fan of the recentred polytope; no offset sweep happens then.
    The search runs chamber by chamber, each local optimum is logged, the
    winner's witness is snapped to exact rationals whenever the snapped
    value certifies the float one, and the reported chamber identity is
    recomputed at the witness so exact containment holds by construction.
    """
    if target not in _TARGETS:
        raise InputError("unknown target %r" % (target,), field="target")
    if sense not in _SENSES:
        raise InputError("sense must be 'max' or 'min'", field="sense")
    if starts < 1:
        raise InputError("need at least one start", field="starts")
    fpoly = _coerce_poly(f, P.dim)

    shift = None
    if center is not None:
        if target == "projection":
            raise InputError(
                "projections have no center constraint", field="center"
            )
        c = qvec(center)
        if len(c) != P.ambient_dim:
            raise InputError(
                "center has %d coordinates, ambient is %d"
                % (len(c), P.ambient_dim),
                field="center",
            )
        if not P.chart.on_subspace(c):
            raise InputError(
                "center is off the polytope's affine hull", field="center"
            )
        shift = qvec(P.chart.to_chart(c))
        moved = hull_from_vertices(
            [tuple(a - b for a, b in zip(v, shift))
             for v in P.chart_vertices]
        )
        binding = {
            v: MultiPoly(fpoly.vars, {
                tuple(1 if j == k else 0 for j in range(P.dim)): Q(1),
                (0,) * P.dim: Q(shift[k]),
            })
            for k, v in enumerate(fpoly.vars) if shift[k] != 0
        }
        fshift = fpoly.substitute(binding) if binding else fpoly
        weight = _chart_weight(P) if target == "section" \
            else _halfspace_weight(P)
        A, tasks = _central_tasks(moved, fshift, target, weight)
    elif target == "projection":
        A, tasks = _projection_tasks(P, fpoly)
    else:
        A, tasks = _translational_tasks(P, fpoly, target)

    def run(item):
        idx, task = item
        rng = random.Random(
            (seed * 0x9E3779B1 + zlib.crc32(repr(task.identity).encode()))
            & 0xFFFFFFFF
        )
        val, wit = per_chamber_optimize(
            task.piece, task.problem, sense, rng, starts, iters
        )
        return idx, val, wit

    items = list(enumerate(tasks))
    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = sorted(pool.map(run, items))
    else:
        results = [run(it) for it in items]

    log = []
    best = None
    best_data = None
    for idx, val, wit in results:
        task = tasks[idx]
        log.append((task.identity, val, wit["iterations"]))
        if math.isfinite(val) and _better(sense, val, task.identity, best):
            best = (val, task.identity)
            best_data = (task, wit)
    if best is None:
        raise InternalInvariantError("no chamber produced a finite value")

    task, wit = best_data
    value, identity = best

    def to_ambient(u, b):
        if target == "projection":
            return tuple(u), None
        if center is not None:
            return _ambient_hyperplane(P, u, vdot(u, shift))
        return _ambient_hyperplane(P, u, b)

    # score the exact candidates by exact cut geometry, not by the piece:
    # the piece formula degenerates to 0/0 exactly at the pinch points
    # where many true optima live
    sgnf = 1.0 if sense == "max" else -1.0
    snapped = None
    for u_c, b_c in _snap_candidates(task.piece, task.problem, wit):
        try:
            nrm, off = to_ambient(u_c, b_c)
            sg, vsq = _exact_objective(P, fpoly, target, nrm, off)
        except InputError:
            continue
        v = sg * math.sqrt(float(vsq))
        if snapped is None or sgnf * (v - snapped[0]) > 0:
            snapped = (v, u_c, b_c, nrm, off, sg, vsq)
    # float piece values suffer cancellation noise near walls, so the float
    # incumbent may sit slightly off the exact optimum in either direction
    if snapped is not None and \
            sgnf * (snapped[0] - value) < -2e-6 * max(1.0, abs(value)):
        snapped = None

    certified = snapped is not None
    exact_value = exact_sq = None
    if certified:
        value, u_exact, b_exact, normal, offset, sg, vsq = snapped
        root = sqrt_exact(vsq)
        if root is not None:
            exact_value = sg * root
        else:
            exact_sq = vsq
        slot = (_slot_key(P, u_exact, b_exact)
                if task.kind == "translational" else Q(0))
        identity = (A.sign_vector(u_exact), slot)
    else:
        uraw = [_rationalize(x, 10 ** 6) for x in wit["u"]]
        if target == "projection":
            normal, offset = tuple(clear_denominators(uraw)), None
        elif center is not None:
            ur = clear_denominators(uraw)
            normal, offset = _ambient_hyperplane(P, ur, vdot(ur, shift))
        else:
            row = clear_denominators(list(uraw) + [_rationalize(wit["b"])])
            normal, offset = _ambient_hyperplane(P, row[:-1], row[-1])

    return OptimizationResult(
        value=float(value), witness_normal=normal, witness_offset=offset,
        chamber=identity, log=tuple(log), certified=certified,
        exact_value=exact_value, exact_value_sq=exact_sq,
    )


# ---------------------------------------------------------------------------
# sweep drivers: combinatorial objectives

def _section_face_count(P, ch, k):
    """f_k of the section at the chamber representative; None for an empty
    cut.  The section counts as its own top-dimensional face, matching
    Polytope.face_count."""
    if not ch.edges and not ch.on_vertices:
        return None
    fv = slice_combinatorics(P, ch).f_vector
    sd = len(fv)
    if k < sd:
        return fv[k]
    return 1 if k == sd else 0


def _halfspace_face_count(P, ch, k):
    H = chamber_hyperplane_ambient(P, ch)
    S = halfspace_section(P, H, +1)
    if S is None:
        return None
    return S.face_count(k) if k <= S.dim else 0


def _combinatorial_sweep(P, objective, sense):
    A = sweep_arrangement(P)
    best = None
    best_ch = None
    log = []
    for cell in enumerate_cells(A, min_dim=1):
        u = qvec(cell.representative)
        for ch in parallel_chambers(P, u, mode="translational",
                                    include_slots=True):
            identity = (cell.signs, Q(ch.index))
            val = objective(ch)
            if val is None:
                continue
            log.append((identity, val, 0))
            if _better(sense, val, identity, best):
                best = (val, identity)
                best_ch = ch
    if best is None:
        raise InternalInvariantError("sweep found no admissible chamber")
    val, identity = best
    H = chamber_hyperplane_ambient(P, best_ch)
    return OptimizationResult(
        value=float(val), witness_normal=H.normal, witness_offset=H.offset,
        chamber=identity, log=tuple(log), certified=True, exact_value=Q(val),
    )


def optimize_face_count(P: Polytope, k: int, target: str = "section",
                        sense: str = "max") -> OptimizationResult:
    """Exact optimum of the k-face count of the cut over all affine
    hyperplanes, by enumerating every positive-dimension cell of the
    pairwise-difference fan crossed with every offset interval and
    breakpoint slot.

    Empty cuts never compete, so the minimum ranges over hyperplanes that
    actually meet the polytope."""
    if sense not in _SENSES:
        raise InputError("sense must be 'max' or 'min'", field="sense")
    if target not in ("section", "halfspace"):
        raise InputError(
            "face counts are defined for sections and halfspaces",
            field="target",
        )
    if not isinstance(k, int) or not 0 <= k < P.dim:
        raise InputError(
            "face dimension must satisfy 0 <= k < %d" % P.dim, field="k"
        )
    if target == "section":
        def objective(ch):
            return _section_face_count(P, ch, k)
    else:
        def objective(ch):
            return _halfspace_face_count(P, ch, k)
    return _combinatorial_sweep(P, objective, sense)


def optimize_weighted_faces(P: Polytope, k: int, weights,
                            sense: str = "max") -> OptimizationResult:
    """Exact optimum of the total weight of (k+1)-faces crossed by the
    hyperplane (endpoints strictly on both sides), over all affine
    hyperplanes.

    weights maps every (k+1)-face, given as any iterable of vertex indices,
    to a rational.  On chambers whose hyperplane misses all vertices this
    equals the k-face count of the section when all weights are one."""
    if sense not in _SENSES:
        raise InputError("sense must be 'max' or 'min'", field="sense")
    if not isinstance(k, int) or not 0 <= k < P.dim:
        raise InputError(
            "face dimension must satisfy 0 <= k < %d" % P.dim, field="k"
        )
    if k + 1 == P.dim:
        faces = [frozenset(range(len(P.vertices)))]
    else:
        faces = sorted(P.all_faces()[k + 1], key=sorted)
    table = {frozenset(key): Q(w) for key, w in weights.items()}
    if any(F not in table for F in faces):
        raise InputError(
            "missing weight for a %d-face" % (k + 1), field="weights"
        )

    def objective(ch):
        H = chamber_hyperplane(ch)
        vals = [H.value(v) for v in P.chart_vertices]
        total = Q(0)
        for F in faces:
            fv = [vals[i] for i in F]
            if min(fv) < 0 < max(fv):
                total += table[F]
        return total

    return _combinatorial_sweep(P, objective, sense)
