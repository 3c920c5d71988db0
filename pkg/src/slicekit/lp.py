"""Exact rational linear programming (dense two-phase simplex, Bland's rule).

Small and deterministic: the cell-enumeration and representative-point code
needs exact feasibility answers on systems with tens of rows, nothing more.
Variables are free (internally split into positive parts).
"""

from __future__ import annotations

from .qmath import ONE, Q, ZERO, qvec

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


def _pivot(T, basis, row, col):
    piv = T[row][col]
    T[row] = [x / piv for x in T[row]]
    for i, tr in enumerate(T):
        if i != row and tr[col] != 0:
            f = tr[col]
            T[i] = [x - f * y for x, y in zip(tr, T[row])]
    basis[row] = col


def _run_simplex(T, basis, ncols):
    """Minimize the objective in the last tableau row; Bland's rule, so it terminates."""
    while True:
        obj = T[-1]
        col = next((j for j in range(ncols) if obj[j] < 0), None)
        if col is None:
            return OPTIMAL
        row = None
        best = None
        for i in range(len(T) - 1):
            if T[i][col] > 0:
                ratio = T[i][-1] / T[i][col]
                if best is None or ratio < best or (ratio == best and basis[i] < basis[row]):
                    best, row = ratio, i
        if row is None:
            return UNBOUNDED
        _pivot(T, basis, row, col)


def solve_lp(c, A, b, senses, maximize=False):
    """Optimize c.x subject to rows a.x (<=|>=|=) beta, x free.

    Returns (status, x, objective_value); x and the value are exact rationals
    when status == "optimal".
    """
    n = len(c)
    c = qvec(c)
    if maximize:
        c = tuple(-v for v in c)

    # free vars split as x_i = y_{2i} - y_{2i+1}; >= rows negated to <=
    rows = []
    for a, s, beta in zip(A, senses, b):
        a = qvec(a)
        beta = Q(beta)
        coeffs = [v for x in a for v in (x, -x)]
        if s == ">=":
            coeffs, beta, s = [-v for v in coeffs], -beta, "<="
        rows.append((coeffs, s, beta))

    cols = 2 * n
    nslack = sum(1 for _, s, _ in rows if s == "<=")
    total = cols + nslack

    T = []
    basis = []
    need_art = []
    si = 0
    for coeffs, s, beta in rows:
        row = coeffs + [ZERO] * nslack + [beta]
        bcol = None
        if s == "<=":
            row[cols + si] = ONE
            bcol = cols + si
            si += 1
        if row[-1] < 0:
            row = [-x for x in row]
            bcol = None  # flipped slack is -1, unusable as basis
        T.append(row)
        basis.append(bcol)
        need_art.append(bcol is None)

    if any(need_art):
        nart = sum(need_art)
        width = total + nart
        ai = 0
        art_set = set()
        for ri in range(len(T)):
            T[ri] = T[ri][:total] + [ZERO] * nart + [T[ri][-1]]
            if need_art[ri]:
                col = total + ai
                T[ri][col] = ONE
                basis[ri] = col
                art_set.add(col)
                ai += 1
        phase1 = [ZERO] * total + [ONE] * nart + [ZERO]
        T.append(phase1)
        for ri in range(len(T) - 1):
            if basis[ri] in art_set:
                T[-1] = [x - y for x, y in zip(T[-1], T[ri])]
        if _run_simplex(T, basis, width) != OPTIMAL or T[-1][-1] != 0:
            return INFEASIBLE, None, None
        T.pop()
        # pivot leftover zero-level artificials out; fully redundant rows get dropped
        drop = []
        for ri in range(len(T)):
            if basis[ri] in art_set:
                col = next((j for j in range(total) if T[ri][j] != 0), None)
                if col is None:
                    drop.append(ri)
                else:
                    _pivot(T, basis, ri, col)
        for ri in reversed(drop):
            del T[ri]
            del basis[ri]
        for ri in range(len(T)):
            T[ri] = T[ri][:total] + [T[ri][-1]]

    # phase 2
    obj = [ZERO] * (total + 1)
    for i in range(n):
        obj[2 * i] = c[i]
        obj[2 * i + 1] = -c[i]
    T.append(obj)
    for ri, bcol in enumerate(basis):
        if T[-1][bcol] != 0:
            f = T[-1][bcol]
            T[-1] = [x - f * y for x, y in zip(T[-1], T[ri])]
    if _run_simplex(T, basis, total) == UNBOUNDED:
        return UNBOUNDED, None, None
    x = [ZERO] * n
    for ri, bcol in enumerate(basis):
        if bcol < cols:
            if bcol % 2 == 0:
                x[bcol // 2] += T[ri][-1]
            else:
                x[bcol // 2] -= T[ri][-1]
    val = -T[-1][-1]
    if maximize:
        val = -val
    return OPTIMAL, tuple(x), val


def _seidel(cons, obj, lo, hi, rng):
    """max obj.x over {a.x <= b} intersected with the box lo <= x <= hi.

    Randomized incremental LP for the handful-of-variables systems cell
    enumeration produces: expected cost linear in len(cons) at fixed
    dimension, against the simplex tableau's quadratic-in-rows pivots.
    Returns an optimal x or None when infeasible.  Deterministic for a
    seeded rng.
    """
    d = len(obj)
    if d == 1:
        ilo, ihi = lo[0], hi[0]
        for (a,), b in cons:
            if a == 0:
                if b < 0:
                    return None
            elif a > 0:
                v = b / a
                if v < ihi:
                    ihi = v
            else:
                v = b / a
                if v > ilo:
                    ilo = v
        if ilo > ihi:
            return None
        if obj[0] > 0:
            return (ihi,)
        if obj[0] < 0:
            return (ilo,)
        return ((ilo + ihi) / 2,)

    x = [hi[i] if obj[i] > 0 else lo[i] if obj[i] < 0 else hi[i]
         for i in range(d)]
    order = list(range(len(cons)))
    rng.shuffle(order)
    for pos, ci in enumerate(order):
        a, b = cons[ci]
        if sum(ai * xi for ai, xi in zip(a, x)) <= b:
            continue
        # optimum of the prefix moved: it lies on a.x = b; eliminate the
        # variable with the largest coefficient and recurse
        j = max(range(d), key=lambda i: abs(a[i]))
        if a[j] == 0:
            return None  # 0 <= b violated
        sub = []
        for ck in order[:pos]:
            ak, bk = cons[ck]
            f = ak[j] / a[j]
            row = tuple(ak[i] - f * a[i] for i in range(d) if i != j)
            sub.append((row, bk - f * b))
        # the eliminated variable's own box bounds become constraints
        for sgn, bound in ((1, hi[j]), (-1, -lo[j])):
            f = Q(sgn) / a[j]
            row = tuple(-f * a[i] for i in range(d) if i != j)
            sub.append((row, bound - f * b))
        fo = obj[j] / a[j]
        pobj = tuple(obj[i] - fo * a[i] for i in range(d) if i != j)
        plo = tuple(lo[i] for i in range(d) if i != j)
        phi = tuple(hi[i] for i in range(d) if i != j)
        y = _seidel(sub, pobj, plo, phi, rng)
        if y is None:
            return None
        rest_idx = [i for i in range(d) if i != j]
        xj = (b - sum(a[i] * v for i, v in zip(rest_idx, y))) / a[j]
        x = list(y[:j]) + [xj] + list(y[j:])
    return tuple(x)


def strict_cell_point(strict, dim, seed=0):
    """Exact max-margin point of {s*(<n,x> - c) > 0}, or None when empty.

    Same contract as interior_point(strict, [], dim) but solved by the
    randomized fixed-dimension method; margins are l1-scaled and capped at 1
    the same way.  A coordinate box keeps the system bounded; it is grown
    twice before falling back to the unboxed simplex, except that
    homogeneous systems (all offsets zero, the cells of a central fan) are
    scale-invariant, so the first box already decides them.
    """
    import random

    rows = []
    maxc = ZERO
    homogeneous = True
    for n, c, s in strict:
        n = qvec(n)
        c = Q(c)
        s = Q(s)
        w = sum(abs(v) for v in n) or ONE
        rows.append((tuple(-s * v for v in n) + (w,), -s * c))
        if c != 0:
            homogeneous = False
        for v in n:
            if abs(v) > maxc:
                maxc = abs(v)
        if abs(c) > maxc:
            maxc = abs(c)
    obj = (ZERO,) * dim + (ONE,)
    box = ONE + maxc
    for _ in range(3):
        tfloor = -ONE
        for (row, rhs) in rows:
            w = row[-1]
            # margin reachable at x = 0 must stay inside [tfloor, 1]
            need = rhs / w
            if need < tfloor:
                tfloor = need
        lo = (-box,) * dim + (tfloor - 1,)
        hi = (box,) * dim + (ONE,)
        z = _seidel(rows, obj, lo, hi, random.Random(seed))
        if z is not None and z[-1] > 0:
            return z[:dim], z[-1]
        if homogeneous:
            return None
        box = (box + 1) ** 2
    got = interior_point(strict, [], dim)
    return got


def interior_point(strict, eqs, dim, box=None):
    """Max-margin point of {s*(<n,x> - c) > 0 for (n, c, s) in strict} inside a flat.

    eqs rows (n, c) hold exactly. Margins are scaled by the l1 norm of each
    normal so the margin variable is unit-comparable; the margin is capped at 1.
    Returns (x, margin) with margin > 0, or None if the open set is empty.
    Deterministic: fixed construction order and Bland pivoting.
    """
    nvars = dim + 1  # x plus the margin variable
    A, senses, b = [], [], []
    for n, c, s in strict:
        w = sum(abs(Q(v)) for v in n) or ONE
        A.append(tuple(Q(s) * Q(v) for v in n) + (-w,))
        senses.append(">=")
        b.append(Q(s) * Q(c))
    for n, c in eqs:
        A.append(tuple(Q(v) for v in n) + (ZERO,))
        senses.append("=")
        b.append(Q(c))
    A.append((ZERO,) * dim + (ONE,))
    senses.append("<=")
    b.append(ONE)
    if box is not None:
        for i in range(dim):
            e = [ZERO] * nvars
            e[i] = ONE
            A.append(tuple(e))
            senses.append("<=")
            b.append(Q(box))
            A.append(tuple(-v for v in e))
            senses.append("<=")
            b.append(Q(box))
    obj = [ZERO] * dim + [ONE]
    status, x, val = solve_lp(obj, A, b, senses, maximize=True)
    if status != OPTIMAL or val is None or val <= 0:
        return None
    return x[:dim], val
