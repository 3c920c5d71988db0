"""Independent reference computations used to cross-check the package.

Everything here is deliberately written against third-party machinery (sympy,
scipy) or as brute force, never by calling back into the code under test.
"""

import itertools
from fractions import Fraction

import sympy

from slicekit.qmath import Q


def sympy_simplex_integral(vertices, exponent):
    """Exact integral of the monomial x^exponent over the simplex conv(vertices).

    Parametrizes by barycentric coordinates and integrates iteratively; works
    in any dimension but is only fast for small ones.
    """
    d = len(vertices[0])
    n = len(vertices)
    assert n == d + 1, "full-dimensional simplex required"
    lam = sympy.symbols(f"lam0:{n - 1}", positive=True)
    v0 = [sympy.Rational(Fraction(str(c))) for c in vertices[0]]
    x = list(v0)
    for i, l in enumerate(lam):
        vi = [sympy.Rational(Fraction(str(c))) for c in vertices[i + 1]]
        x = [xi + l * (a - b) for xi, a, b in zip(x, vi, v0)]
    jac = sympy.Matrix(
        [
            [
                sympy.Rational(Fraction(str(vertices[i + 1][j])))
                - sympy.Rational(Fraction(str(vertices[0][j])))
                for j in range(d)
            ]
            for i in range(d)
        ]
    )
    integrand = sympy.Integer(1)
    for xi, e in zip(x, exponent):
        integrand *= xi**e
    integrand = sympy.expand(integrand)
    # iterated integral over the standard simplex lam_i >= 0, sum <= 1
    upper = sympy.Integer(1)
    for i in range(n - 2, -1, -1):
        integrand = sympy.integrate(integrand, (lam[i], 0, upper - sum(lam[:i])))
    return sympy.Rational(integrand * abs(jac.det()))


def sympy_polytope_integral(vertices_of_simplices, poly_terms):
    """Sum of monomial integrals over a list of simplices; poly_terms is a
    list of (exponent tuple, rational coefficient)."""
    total = sympy.Integer(0)
    for simplex in vertices_of_simplices:
        for e, c in poly_terms:
            total += sympy.Rational(Fraction(str(c))) * sympy_simplex_integral(simplex, e)
    return total


def det_cofactor(M):
    """Recursive cofactor determinant over any commutative ring elements."""
    n = len(M)
    if n == 1:
        return M[0][0]
    total = None
    for j in range(n):
        minor = [row[:j] + row[j + 1 :] for row in M[1:]]
        term = M[0][j] * det_cofactor(minor)
        if j % 2 == 1:
            term = -term
        total = term if total is None else total + term
    return total


def brute_sign_vectors(normals, offsets, dim, samples=None, low=-6, high=6, steps=25):
    """Crude census of realizable strict sign vectors of an affine hyperplane
    family by dense rational grid sampling. Only for tiny instances; used to
    sanity-check chamber counts from below."""
    seen = set()
    grid = [Q(low) + Q(high - low) * Q(i, steps - 1) for i in range(steps)]
    pts = itertools.product(grid, repeat=dim)
    if samples is not None:
        pts = itertools.islice(pts, samples)
    for p in pts:
        sig = []
        ok = True
        for nrm, off in zip(normals, offsets):
            s = sum(a * x for a, x in zip(nrm, p)) - off
            if s == 0:
                ok = False
                break
            sig.append("+" if s > 0 else "-")
        if ok:
            seen.add("".join(sig))
    return seen


def fm_feasible(strict, eqs, dim):
    """Fourier-Motzkin feasibility test for {x : A x > b strictly, C x = d}.

    strict: list of (normal, offset) meaning <normal, x> > offset
    eqs: list of (normal, offset) meaning <normal, x> = offset
    Exact, exponential; fine for a handful of constraints in dim <= 4.
    Returns True iff the open region is nonempty.
    """
    rows = []  # (coeffs, offset, is_strict) encoding <c,x> >= off (strict flag)
    for n, off in strict:
        rows.append((list(map(Q, n)), Q(off), True))
    for n, off in eqs:
        rows.append((list(map(Q, n)), Q(off), False))
        rows.append(([-Q(c) for c in n], -Q(off), False))
    for k in range(dim - 1, -1, -1):
        pos, neg, rest = [], [], []
        for c, off, st in rows:
            if c[k] > 0:
                pos.append((c, off, st))
            elif c[k] < 0:
                neg.append((c, off, st))
            else:
                rest.append((c[:k] + c[k + 1 :], off, st))
        new = list(rest)
        for cp, op_, sp in pos:
            for cn, on_, sn in neg:
                lam = -cn[k] / cp[k]
                c = [lam * a + b for a, b in zip(cp, cn)]
                off = lam * op_ + on_
                new.append((c[:k] + c[k + 1 :], off, sp or sn))
        rows = new
    for c, off, st in rows:
        assert not c
        if st:
            if not (0 > off):
                return False
        else:
            if not (0 >= off):
                return False
    return True


def brute_cells(normals, offsets, dim, min_dim=0):
    """Enumerate all nonempty relatively-open cells of an affine arrangement
    by testing every sign vector in {-,0,+}^m with Fourier-Motzkin.

    Exponential in the number of hyperplanes; intended for <= 6 hyperplanes in
    dim <= 3. Returns a set of sign strings. Cells whose affine span has
    dimension < min_dim are filtered via exact rank computation.
    """
    m = len(normals)
    out = set()
    for signs in itertools.product("+-0", repeat=m):
        strict = []
        eqs = []
        for s, n, off in zip(signs, normals, offsets):
            if s == "+":
                strict.append((n, off))
            elif s == "-":
                strict.append(([-Q(c) for c in n], -Q(off)))
            else:
                eqs.append((n, off))
        if not fm_feasible(strict, eqs, dim):
            continue
        zero_rows = [[sympy.Rational(Fraction(str(c))) for c in n]
                     for s, n in zip(signs, normals) if s == "0"]
        cell_dim = dim - (sympy.Matrix(zero_rows).rank() if zero_rows else 0)
        if cell_dim >= min_dim:
            out.add("".join(signs))
    return out


def hull_volume(points):
    """Euclidean volume of conv(points) via scipy's qhull wrapper."""
    import numpy as np
    from scipy.spatial import ConvexHull

    pts = np.asarray([[float(Fraction(str(c))) for c in p] for p in points], dtype=float)
    return ConvexHull(pts).volume


def max_cut_value(weights):
    """Exhaustive maximum cut of a weighted graph given as dict edge->weight."""
    nodes = sorted({v for e in weights for v in e})
    best = 0
    for mask in range(1 << (len(nodes) - 1)):
        side = {v: (mask >> i) & 1 for i, v in enumerate(nodes[:-1])}
        side[nodes[-1]] = 0
        val = sum(w for (a, b), w in weights.items() if side[a] != side[b])
        best = max(best, val)
    return best


def delaunay_simplices(points):
    """Index triangulation of a convex full-dimensional rational point set via
    scipy's qhull wrapper (float coordinates; callers map the indices back to
    the exact points). Degenerate slivers come out with zero volume and drop
    out of any downstream integral. Dimension 1 is handled by sorting."""
    import numpy as np
    from scipy.spatial import Delaunay

    d = len(points[0])
    if d == 1:
        order = sorted(range(len(points)), key=lambda i: Fraction(str(points[i][0])))
        return [(order[k], order[k + 1]) for k in range(len(order) - 1)]
    arr = np.asarray(
        [[float(Fraction(str(c))) for c in p] for p in points], dtype=float
    )
    return [tuple(int(i) for i in s) for s in Delaunay(arr).simplices]
