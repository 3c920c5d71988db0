"""Exact rational scalars and dense exact linear algebra.

Everything downstream computes over Q. The scalar type is gmpy2.mpq when
available (C-speed rationals) and fractions.Fraction otherwise; both store
lowest terms with positive denominator and expose .numerator/.denominator.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

QNUM = (int, type(Q(0)))

ZERO = Q(0)
ONE = Q(1)


def is_rational(x) -> bool:
    return isinstance(x, QNUM)


def parse_rational(s) -> "Q":
    """Parse "p/q" or integer-string (also accepts int) into an exact rational."""
    if isinstance(s, int):
        return Q(s)
    if is_rational(s):
        return Q(s)
    if not isinstance(s, str):
        raise ValueError(f"not a rational: {s!r}")
    t = s.strip().replace("−", "-")  # unicode minus
    if "/" in t:
        num, den = t.split("/", 1)
        return Q(int(num.strip()), int(den.strip()))
    return Q(int(t))


def format_rational(x) -> str:
    x = Q(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------------------
# vectors (tuples of Q)


def qvec(xs) -> tuple:
    return tuple(Q(x) for x in xs)


def vadd(a, b) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a, b) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def vscale(c, a) -> tuple:
    return tuple(c * x for x in a)


def vdot(a, b):
    s = ZERO
    for x, y in zip(a, b):
        s += x * y
    return s


def vnormsq(a):
    return vdot(a, a)


def is_zero_vec(a) -> bool:
    return all(x == 0 for x in a)


def clear_denominators(a) -> tuple:
    """Scale a rational vector to coprime integers, sign of first nonzero fixed positive.

    Canonical key for hyperplane/direction dedup; zero vector maps to itself.
    """
    from math import gcd

    a = qvec(a)
    if is_zero_vec(a):
        return a
    lcm = 1
    for x in a:
        d = int(x.denominator)
        lcm = lcm // gcd(lcm, d) * d
    ints = [int(x.numerator) * (lcm // int(x.denominator)) for x in a]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    ints = [v // g for v in ints]
    for v in ints:
        if v != 0:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(Q(v) for v in ints)


# ---------------------------------------------------------------------------
# matrices (lists of row tuples)


def mat_vec(M, x) -> tuple:
    return tuple(vdot(row, x) for row in M)


def transpose(M) -> list:
    return [tuple(col) for col in zip(*M)]


def rref(M):
    """Reduced row echelon form. Returns (rows, pivot column indices)."""
    rows = [list(qvec(r)) for r in M]
    if not rows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        inv = ONE / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return [tuple(row) for row in rows[:r]], pivots


def rank(M) -> int:
    return len(rref(M)[0])


def nullspace(M) -> list:
    """Basis of {x : Mx = 0} from the RREF free-column construction (deterministic)."""
    if not M:
        return []
    ncols = len(M[0])
    red, pivots = rref(M)
    pivset = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivset:
            continue
        v = [ZERO] * ncols
        v[free] = ONE
        for i, p in enumerate(pivots):
            v[p] = -red[i][free]
        basis.append(tuple(v))
    return basis


def solve(M, b):
    """One exact solution of Mx = b, or None if inconsistent."""
    if not M:
        return None if any(x != 0 for x in b) else ()
    aug = [tuple(qvec(row)) + (Q(bb),) for row, bb in zip(M, b)]
    red, pivots = rref(aug)
    ncols = len(M[0])
    for row in red:
        if all(x == 0 for x in row[:-1]) and row[-1] != 0:
            return None
    x = [ZERO] * ncols
    for i, p in enumerate(pivots):
        if p == ncols:
            return None
        x[p] = red[i][-1]
    return tuple(x)


def det(M):
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    if n == 0:
        return ONE
    a = [list(qvec(r)) for r in M]
    sign = ONE
    prev = ONE
    for k in range(n - 1):
        if a[k][k] == 0:
            pr = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pr is None:
                return ZERO
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev
            a[i][k] = ZERO
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def gram_schmidt(vectors) -> list:
    """Exact orthogonalization (no normalization); drops dependent vectors."""
    basis = []
    for v in vectors:
        w = qvec(v)
        for q in basis:
            w = vsub(w, vscale(vdot(w, q) / vnormsq(q), q))
        if not is_zero_vec(w):
            basis.append(clear_denominators(w))
    return basis
