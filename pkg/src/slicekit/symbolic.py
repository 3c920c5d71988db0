"""Multivariate polynomials and rational functions over Q, plus the two
integration kernels: powers-of-linear-forms over a simplex and the
decomposition of a monomial into powers of linear forms.

Variable naming is fixed artifact-wide: t1..td, u1..ud, b. Terms are kept in
graded lexicographic order; rational functions are content-normalized on
construction and fully gcd-reduced only on demand (reduction cost dominates
otherwise).
"""

from __future__ import annotations

import math
import re
from functools import lru_cache

from .qmath import ONE, Q, ZERO, format_rational, is_rational, parse_rational


def var_sort_key(name: str):
    """Canonical variable order: t1..td, then u1..ud, then b."""
    m = re.fullmatch(r"([a-z]+)(\d*)", name)
    if not m:
        raise ValueError(f"bad variable name: {name}")
    kind, idx = m.group(1), int(m.group(2) or 0)
    order = {"t": 0, "u": 1, "b": 2}
    return (order.get(kind, 3), kind, idx)


def _term_key(exps):
    return (sum(exps), exps)


class MultiPoly:
    """Dict-backed multivariate polynomial: exponent tuple -> nonzero coefficient."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, vars, terms):
        self.vars = tuple(vars)
        self.terms = {e: Q(c) for e, c in terms.items() if c != 0}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(c, vars=()):
        vars = tuple(vars)
        c = Q(c)
        if c == 0:
            return MultiPoly(vars, {})
        return MultiPoly(vars, {(0,) * len(vars): c})

    @staticmethod
    def var(name, vars):
        vars = tuple(vars)
        e = [0] * len(vars)
        e[vars.index(name)] = 1
        return MultiPoly(vars, {tuple(e): ONE})

    @staticmethod
    def linear(coeffs, vars, constant=0):
        """c1*v1 + ... + ck*vk + constant over the given variables."""
        vars = tuple(vars)
        terms = {}
        for i, c in enumerate(coeffs):
            c = Q(c)
            if c != 0:
                e = [0] * len(vars)
                e[i] = 1
                terms[tuple(e)] = c
        constant = Q(constant)
        if constant != 0:
            terms[(0,) * len(vars)] = constant
        return MultiPoly(vars, terms)

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self):
        if not self.terms:
            return ZERO
        [(e, c)] = self.terms.items()
        if sum(e) != 0:
            raise ValueError("not a constant polynomial")
        return c

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self.vars.index(name)
        return max((e[i] for e in self.terms), default=0)

    def leading(self):
        """(exps, coeff) of the graded-lex leading term."""
        e = max(self.terms, key=_term_key)
        return e, self.terms[e]

    def content(self):
        """Positive rational c with self/c integer-coprime; sign from leading coeff."""
        if not self.terms:
            return ONE
        nums = 0
        dens = 1
        for c in self.terms.values():
            nums = math.gcd(nums, abs(int(c.numerator)))
            d = int(c.denominator)
            dens = dens // math.gcd(dens, d) * d
        c = Q(nums, dens)
        return c if self.leading()[1] > 0 else -c

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _term_key(t[0]), reverse=True)

    # -- arithmetic ---------------------------------------------------------

    def _aligned(self, other):
        if isinstance(other, MultiPoly):
            if other.vars == self.vars:
                return self, other
            return align_vars(self, other)
        if is_rational(other):
            return self, MultiPoly.const(other, self.vars)
        return NotImplemented, None

    def __add__(self, other):
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        terms = dict(a.terms)
        for e, c in b.terms.items():
            s = terms.get(e, ZERO) + c
            if s == 0:
                terms.pop(e, None)
            else:
                terms[e] = s
        return MultiPoly(a.vars, terms)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.vars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._aligned(other)
        if a is NotImplemented:
            return NotImplemented
        terms = {}
        for e1, c1 in a.terms.items():
            for e2, c2 in b.terms.items():
                e = tuple(x + y for x, y in zip(e1, e2))
                s = terms.get(e, ZERO) + c1 * c2
                if s == 0:
                    terms.pop(e, None)
                else:
                    terms[e] = s
        return MultiPoly(a.vars, terms)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power of a polynomial")
        result = MultiPoly.const(1, self.vars)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base if k > 1 else base
            k >>= 1
        return result

    def __eq__(self, other):
        if is_rational(other):
            other = MultiPoly.const(other, self.vars)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        a, b = align_vars(self, other)
        return a.terms == b.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.vars, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation / substitution ------------------------------------------

    def evaluate(self, assignment: dict):
        """Exact value with every variable bound to a rational."""
        total = ZERO
        point = [Q(assignment[v]) for v in self.vars]
        for e, c in self.terms.items():
            term = c
            for x, k in zip(point, e):
                if k:
                    term *= x**k
            total += term
        return total

    def substitute(self, binding: dict):
        """Replace variables by polynomials/rationals; unbound variables remain."""
        out = None
        for e, c in self.terms.items():
            term = None
            rest = [0] * len(self.vars)
            coeff = c
            for i, k in enumerate(e):
                if k == 0:
                    continue
                v = self.vars[i]
                if v in binding:
                    rep = binding[v]
                    rep = rep if isinstance(rep, MultiPoly) else MultiPoly.const(rep, ())
                    term = rep**k if term is None else term * rep**k
                else:
                    rest[i] = k
            base = MultiPoly(self.vars, {tuple(rest): coeff})
            piece = base if term is None else base * term
            out = piece if out is None else out + piece
        if out is None:
            out = MultiPoly(self.vars, {})
        # drop substituted-away variables, unless a replacement reintroduced one
        live = set()
        for e in out.terms:
            live.update(v for v, k in zip(out.vars, e) if k)
        keep = [v for v in out.vars if v not in binding or v in live]
        return restrict_vars(out, keep) if len(keep) != len(out.vars) else out

    def derivative(self, name: str):
        i = self.vars.index(name)
        terms = {}
        for e, c in self.terms.items():
            if e[i] == 0:
                continue
            ne = list(e)
            ne[i] -= 1
            terms[tuple(ne)] = c * e[i]
        return MultiPoly(self.vars, terms)

    # -- text form ----------------------------------------------------------

    def __str__(self):
        if not self.terms:
            return "0"
        items = self.sorted_terms()
        if items[0][1] < 0:
            return "-(" + str(-self) + ")"
        parts = []
        for e, c in items:
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self.vars, e) if k
            )
            ac = abs(c)
            if not mono:
                body = format_rational(ac)
            elif ac == 1:
                body = mono
            else:
                body = f"{format_rational(ac)}*{mono}"
            parts.append(("- " if c < 0 else "+ ") + body)
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]

    __repr__ = __str__


def align_vars(a: MultiPoly, b: MultiPoly):
    """Remap both polynomials onto the union variable set (canonical order)."""
    vars = tuple(sorted(set(a.vars) | set(b.vars), key=var_sort_key))

    def remap(p):
        if p.vars == vars:
            return p
        idx = [vars.index(v) for v in p.vars]
        terms = {}
        for e, c in p.terms.items():
            ne = [0] * len(vars)
            for i, k in zip(idx, e):
                ne[i] = k
            terms[tuple(ne)] = c
        return MultiPoly(vars, terms)

    return remap(a), remap(b)


def restrict_vars(p: MultiPoly, keep):
    """Project onto a variable subset; dropped variables must not occur."""
    keep = tuple(keep)
    idx = [p.vars.index(v) for v in keep]
    dropped = [i for i, v in enumerate(p.vars) if v not in keep]
    terms = {}
    for e, c in p.terms.items():
        if any(e[i] for i in dropped):
            raise ValueError("cannot drop a live variable")
        terms[tuple(e[i] for i in idx)] = c
    return MultiPoly(keep, terms)


def exact_div(a: MultiPoly, d: MultiPoly) -> MultiPoly:
    """Exact polynomial quotient a/d (raises if the division is not exact)."""
    a, d = align_vars(a, d)
    if d.is_zero():
        raise ZeroDivisionError("polynomial division by zero")
    q = MultiPoly(a.vars, {})
    r = a
    de, dc = d.leading()
    while not r.is_zero():
        re, rc = r.leading()
        qe = tuple(x - y for x, y in zip(re, de))
        if any(k < 0 for k in qe):
            raise ValueError("inexact polynomial division")
        qt = MultiPoly(r.vars, {qe: rc / dc})
        q = q + qt
        r = r - qt * d
    return q


def poly_determinant(M: list) -> MultiPoly:
    """Fraction-free Bareiss determinant of a square MultiPoly matrix."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    vars = M[0][0].vars
    a = [[x for x in row] for row in M]
    sign = 1
    prev = MultiPoly.const(1, vars)
    for k in range(n - 1):
        if a[k][k].is_zero():
            pr = next((i for i in range(k + 1, n) if not a[i][k].is_zero()), None)
            if pr is None:
                return MultiPoly.const(0, vars)
            a[k], a[pr] = a[pr], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = exact_div(a[i][j] * a[k][k] - a[i][k] * a[k][j], prev)
            a[i][k] = MultiPoly.const(0, vars)
        prev = a[k][k]
    out = a[n - 1][n - 1]
    return -out if sign < 0 else out


# ---------------------------------------------------------------------------


class RatFunc:
    """Quotient of MultiPolys, content-normalized; gcd reduction on demand."""

    __slots__ = ("num", "den", "_reduced")

    def __init__(self, num, den=None, _reduced=False):
        if not isinstance(num, MultiPoly):
            num = MultiPoly.const(num)
        if den is None:
            den = MultiPoly.const(1, num.vars)
        elif not isinstance(den, MultiPoly):
            den = MultiPoly.const(den, num.vars)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        num, den = align_vars(num, den)
        if num.is_zero():
            den = MultiPoly.const(1, num.vars)
            _reduced = True
        c = den.content()
        if c != 1:
            inv = ONE / c
            num = MultiPoly(num.vars, {e: x * inv for e, x in num.terms.items()})
            den = MultiPoly(den.vars, {e: x * inv for e, x in den.terms.items()})
        self.num = num
        self.den = den
        self._reduced = _reduced

    @property
    def vars(self):
        return self.num.vars

    @staticmethod
    def const(c, vars=()):
        return RatFunc(MultiPoly.const(c, vars))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __add__(self, other):
        other = _as_rf(other, self.vars)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den)
        return RatFunc(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(-self.num, self.den, _reduced=self._reduced)

    def __sub__(self, other):
        other = _as_rf(other, self.vars)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = _as_rf(other, self.vars)
        if other is NotImplemented:
            return NotImplemented
        return RatFunc(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rf(other, self.vars)
        if other is NotImplemented:
            return NotImplemented
        if other.num.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RatFunc(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _as_rf(other, self.vars) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunc(self.den, self.num) ** (-k)
        return RatFunc(self.num**k, self.den**k)

    def __eq__(self, other):
        other = _as_rf(other, self.vars)
        if other is NotImplemented:
            return NotImplemented
        return (self.num * other.den) == (other.num * self.den)

    def __hash__(self):
        r = self.reduce()
        return hash((r.num, r.den))

    def evaluate(self, assignment: dict):
        d = self.den.evaluate(assignment)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(assignment) / d

    def substitute(self, binding: dict):
        rb = {}
        for k, v in binding.items():
            rb[k] = v
        num = _poly_sub_rf(self.num, rb)
        den = _poly_sub_rf(self.den, rb)
        return num / den

    def derivative(self, name: str):
        if name not in self.vars:
            return RatFunc.const(0, self.vars)
        n, d = self.num, self.den
        return RatFunc(n.derivative(name) * d - n * d.derivative(name), d * d)

    def reduce(self) -> "RatFunc":
        """Cancel the full multivariate gcd (delegated to sympy), canonicalize."""
        if self._reduced:
            return self
        if self.den.is_constant() or not self.num.terms:
            out = RatFunc(self.num, self.den)
            out._reduced = True
            return out
        import sympy

        # stay in the Poly domain: building Expr trees term by term is
        # quadratic and dwarfs the actual gcd for large pieces
        syms = [sympy.Symbol(v) for v in self.vars]
        Pn = sympy.Poly.from_dict(_poly_dict(self.num), *syms, domain="QQ")
        Pd = sympy.Poly.from_dict(_poly_dict(self.den), *syms, domain="QQ")
        g = Pn.gcd(Pd)
        if not g.is_one:
            Pn = Pn.exquo(g)
            Pd = Pd.exquo(g)
        out = RatFunc(_poly_from_sympy(Pn, self.vars),
                      _poly_from_sympy(Pd, self.vars))
        out._reduced = True
        return out

    def __str__(self):
        if self.den.is_constant() and self.den.constant_value() == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    __repr__ = __str__


def _as_rf(x, vars):
    if isinstance(x, RatFunc):
        return x
    if isinstance(x, MultiPoly):
        return RatFunc(x)
    if is_rational(x):
        return RatFunc.const(x, vars)
    return NotImplemented


def _poly_sub_rf(p: MultiPoly, binding: dict) -> RatFunc:
    """Substitute where bindings may be RatFunc; returns a RatFunc."""
    simple = {k: v for k, v in binding.items() if not isinstance(v, RatFunc)}
    hard = {k: v for k, v in binding.items() if isinstance(v, RatFunc)}
    base = p.substitute(simple) if simple else p
    if not hard:
        return RatFunc(base)
    out = RatFunc.const(0, base.vars)
    for e, c in base.terms.items():
        term = RatFunc.const(c, base.vars)
        rest = [0] * len(base.vars)
        for i, k in enumerate(e):
            if k == 0:
                continue
            v = base.vars[i]
            if v in hard:
                term = term * hard[v] ** k
            else:
                rest[i] = k
        term = term * RatFunc(MultiPoly(base.vars, {tuple(rest): ONE}))
        out = out + term
    live = set()
    for e in out.num.terms:
        live.update(v for v, k in zip(out.num.vars, e) if k)
    for e in out.den.terms:
        live.update(v for v, k in zip(out.den.vars, e) if k)
    keep = [v for v in out.vars if v not in hard or v in live]
    if len(keep) != len(out.vars):
        out = RatFunc(restrict_vars(out.num, keep), restrict_vars(out.den, keep))
    return out


def _to_sympy(p: MultiPoly, syms: dict):
    import sympy

    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for v, k in zip(p.vars, e):
            if k:
                term *= syms[v] ** k
        expr += term
    return expr


def _poly_dict(p: MultiPoly) -> dict:
    import sympy

    return {
        e: sympy.Rational(int(c.numerator), int(c.denominator))
        for e, c in p.terms.items()
    }


def _poly_from_sympy(poly, vars) -> MultiPoly:
    terms = {}
    for e, c in poly.terms():
        terms[tuple(int(k) for k in e)] = Q(int(c.p), int(c.q))
    return MultiPoly(vars, terms)


def _from_sympy(expr, vars) -> MultiPoly:
    import sympy

    syms = [sympy.Symbol(v) for v in vars]
    poly = sympy.Poly(expr, *syms) if syms else None
    terms = {}
    if poly is None:
        return MultiPoly.const(Q(int(expr.p), int(expr.q)), vars)
    for e, c in poly.terms():
        c = sympy.Rational(c)
        terms[tuple(int(k) for k in e)] = Q(int(c.p), int(c.q))
    return MultiPoly(vars, terms)


def rf_determinant(M: list) -> RatFunc:
    """Determinant of a square RatFunc matrix via a common-denominator
    polynomial matrix and fraction-free elimination."""
    n = len(M)
    if n == 0:
        raise ValueError("empty matrix")
    if any(len(row) != n for row in M):
        raise ValueError("matrix not square")
    rows = []
    dens = []
    for row in M:
        row = [x if isinstance(x, RatFunc) else RatFunc(x) for x in row]
        rden = MultiPoly.const(1, row[0].vars)
        for x in row:
            rden = rden * x.den
        entries = []
        for j, x in enumerate(row):
            other = MultiPoly.const(1, x.vars)
            for jj, y in enumerate(row):
                if jj != j:
                    other = other * y.den
            entries.append(x.num * other)
        rows.append(entries)
        dens.append(rden)
    aligned = []
    allvars = rows[0][0].vars
    for r in rows:
        for x in r:
            if x.vars != allvars:
                _, x2 = align_vars(MultiPoly.const(0, allvars), x)
                allvars = x2.vars
    aligned = [[align_vars(MultiPoly.const(0, allvars), x)[1] for x in r] for r in rows]
    numdet = poly_determinant(aligned)
    den = MultiPoly.const(1, allvars)
    for d in dens:
        den = den * align_vars(MultiPoly.const(0, allvars), d)[1]
    return RatFunc(numdet, den)


# ---------------------------------------------------------------------------
# integration kernels


@lru_cache(maxsize=None)
def monomial_to_linear_powers(alpha: tuple):
    """Write x^alpha as sum coeff * <p, x>^|alpha| over integer vectors 0 <= p <= alpha.

    Returns a list of (coeff, p, D) with D = |alpha|. The p = 0 term is dropped
    unless alpha = 0 (it contributes nothing for D > 0).
    """
    import itertools

    D = sum(alpha)
    if D == 0:
        return [(ONE, tuple(0 for _ in alpha), 0)]
    fact = Q(1, math.factorial(D))
    out = []
    ranges = [range(a + 1) for a in alpha]
    for p in itertools.product(*ranges):
        if all(v == 0 for v in p):
            continue
        coeff = fact * (-1) ** (D - sum(p))
        for a, pv in zip(alpha, p):
            coeff *= math.comb(a, pv)
        out.append((coeff, p, D))
    return out


def complete_homogeneous(values: list, D: int):
    """h_D(values): sum over all degree-D monomials in the given quantities.

    Works for Q or RatFunc entries (anything with +, *).
    """
    if D == 0:
        return ONE if not values or is_rational(values[0]) else RatFunc.const(1, values[0].vars)
    if not values:
        return ZERO
    one = ONE if is_rational(values[0]) else RatFunc.const(1, values[0].vars)
    zero = ZERO if is_rational(values[0]) else RatFunc.const(0, values[0].vars)
    H = [one] + [zero] * D
    for a in values:
        for deg in range(1, D + 1):
            H[deg] = H[deg] + a * H[deg - 1]
    return H[D]


def simplex_integral_power(points: list, p, D: int, vol):
    """Integral of <p, x>^D over a simplex with the given vertices and volume.

    points may have rational or RatFunc coordinates; p is a rational vector.
    Evaluates (n-1)! * vol * D! / (D+n-1)! * h_D(<p, s_1>, ..., <p, s_n>).
    """
    n = len(points)
    if n < 1:
        raise ValueError("need at least one vertex")
    if D < 0:
        raise ValueError("negative degree")
    vals = []
    for s in points:
        acc = None
        for pc, sc in zip(p, s):
            term = Q(pc) * sc if not is_rational(sc) else Q(pc) * Q(sc)
            acc = term if acc is None else acc + term
        if acc is None:
            acc = ZERO
        vals.append(acc)
    scale = Q(math.factorial(n - 1) * math.factorial(D), math.factorial(D + n - 1))
    return vol * scale * complete_homogeneous(vals, D)


# ---------------------------------------------------------------------------
# text form parsing (round-trip for emitted formulas)

_TOKEN = re.compile(r"\s*(\d+/\d+|\d+|[a-z]+\d*|\*\*|[()+\-*/^])")


def _tokenize(text: str):
    pos = 0
    out = []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"cannot tokenize formula at: {text[pos:pos + 20]!r}")
        tok = m.group(1)
        out.append("^" if tok == "**" else tok)
        pos = m.end()
    return out


class _Parser:
    def __init__(self, tokens, vars):
        self.toks = tokens
        self.i = 0
        self.vars = tuple(vars)

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self):
        t = self.peek()
        self.i += 1
        return t

    def parse_expr(self):
        node = self.parse_term()
        while self.peek() in ("+", "-"):
            op = self.take()
            rhs = self.parse_term()
            node = node + rhs if op == "+" else node - rhs
        return node

    def parse_term(self):
        node = self.parse_power()
        while self.peek() in ("*", "/"):
            op = self.take()
            rhs = self.parse_power()
            node = node * rhs if op == "*" else node / rhs
        return node

    def parse_power(self):
        base = self.parse_atom()
        if self.peek() == "^":
            self.take()
            neg = False
            if self.peek() == "-":
                self.take()
                neg = True
            k = self.take()
            if not k or not k.isdigit():
                raise ValueError("exponent must be an integer")
            return base ** (-int(k) if neg else int(k))
        return base

    def parse_atom(self):
        t = self.peek()
        if t == "(":
            self.take()
            node = self.parse_expr()
            if self.take() != ")":
                raise ValueError("unbalanced parentheses")
            return node
        if t == "-":
            self.take()
            return -self.parse_power()
        if t == "+":
            self.take()
            return self.parse_power()
        t = self.take()
        if t is None:
            raise ValueError("unexpected end of formula")
        if re.fullmatch(r"\d+/\d+|\d+", t):
            return RatFunc.const(parse_rational(t), self.vars)
        if re.fullmatch(r"[a-z]+\d*", t):
            if t not in self.vars:
                raise ValueError(f"unknown variable {t!r}")
            return RatFunc(MultiPoly.var(t, self.vars))
        raise ValueError(f"unexpected token {t!r}")


def parse_formula(text: str, vars=None) -> RatFunc:
    """Parse +,-,*,/,^ arithmetic over rationals and named variables."""
    toks = _tokenize(text)
    if vars is None:
        names = sorted({t for t in toks if re.fullmatch(r"[a-z]+\d*", t)}, key=var_sort_key)
        vars = tuple(names)
    p = _Parser(toks, vars)
    node = p.parse_expr()
    if p.peek() is not None:
        raise ValueError(f"trailing tokens in formula: {p.toks[p.i:]}")
    return node


def formula_json(rf: RatFunc) -> dict:
    rf = rf.reduce()
    return {"num": str(rf.num), "den": str(rf.den)}


def formula_from_json(obj: dict, vars=None) -> RatFunc:
    num = parse_formula(obj["num"], vars)
    den = parse_formula(obj["den"], vars)
    return num / den
