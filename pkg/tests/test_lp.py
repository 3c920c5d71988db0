import random

import numpy as np
import pytest

from slicekit.lp import INFEASIBLE, OPTIMAL, UNBOUNDED, interior_point, solve_lp
from slicekit.qmath import Q, vdot

scipy_opt = pytest.importorskip("scipy.optimize")


def test_simple_box_max():
    status, x, val = solve_lp([1, 1], [[1, 0], [0, 1]], [1, 2], ["<=", "<="], maximize=True)
    assert status == OPTIMAL
    assert val == Q(3)
    assert x == (Q(1), Q(2))


def test_equality_rows():
    # max x+2y st x+y=1, y<=3/4, x,y free
    status, x, val = solve_lp([1, 2], [[1, 1], [0, 1]], [1, Q(3, 4)], ["=", "<="], maximize=True)
    assert status == OPTIMAL
    assert val == Q(7, 4)
    assert x == (Q(1, 4), Q(3, 4))


def test_infeasible():
    status, _, _ = solve_lp([1], [[1], [-1]], [-1, -1], ["<=", "<="])
    assert status == INFEASIBLE


def test_unbounded():
    status, _, _ = solve_lp([1], [[-1]], [0], ["<="], maximize=True)
    assert status == UNBOUNDED


def test_degenerate_terminates():
    # classic cycling-prone instance; Bland's rule must terminate
    A = [
        [Q(1, 4), -8, -1, 9],
        [Q(1, 2), -12, Q(-1, 2), 3],
        [0, 0, 1, 0],
    ]
    b = [0, 0, 1]
    c = [Q(-3, 4), 20, Q(-1, 2), 6]
    status, x, val = solve_lp(c, A, b, ["<="] * 3, maximize=False)
    assert status in (OPTIMAL, UNBOUNDED)


def test_negative_rhs_needs_artificials():
    # x >= 2 written as -x <= -2, minimize x
    status, x, val = solve_lp([1], [[-1]], [-2], ["<="])
    assert status == OPTIMAL and val == Q(2)


def test_matches_scipy_on_random_bounded_lps():
    rng = random.Random(23)
    for _ in range(60):
        n = rng.randint(1, 4)
        m = rng.randint(1, 5)
        A = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(m)]
        b = [rng.randint(-3, 6) for _ in range(m)]
        c = [rng.randint(-3, 3) for _ in range(n)]
        # box to force boundedness
        for i in range(n):
            e = [0] * n
            e[i] = 1
            A.append(list(e))
            b.append(10)
            A.append([-v for v in e])
            b.append(10)
        senses = ["<="] * len(A)
        status, x, val = solve_lp(c, A, b, senses, maximize=True)
        res = scipy_opt.linprog(
            [-v for v in c], A_ub=np.array(A, dtype=float), b_ub=np.array(b, dtype=float),
            bounds=[(None, None)] * n, method="highs",
        )
        if status == OPTIMAL:
            assert res.status == 0
            assert abs(float(val) - (-res.fun)) < 1e-7
            for row, beta in zip(A, b):
                assert vdot([Q(v) for v in row], x) <= Q(beta)
        else:
            assert res.status == 2


def test_interior_point_strict_triangle():
    strict = [((Q(1), Q(0)), Q(0), 1), ((Q(0), Q(1)), Q(0), 1), ((Q(-1), Q(-1)), Q(-1), 1)]
    got = interior_point(strict, [], 2, box=2)
    assert got is not None
    (x, y), margin = got
    assert x > 0 and y > 0 and x + y < 1 and margin > 0


def test_interior_point_empty():
    strict = [((Q(1),), Q(0), 1), ((Q(1),), Q(0), -1)]
    assert interior_point(strict, [], 1, box=2) is None


def test_interior_point_on_flat():
    # inside the flat x+y=1, require x>0 and y>0
    strict = [((Q(1), Q(0)), Q(0), 1), ((Q(0), Q(1)), Q(0), 1)]
    got = interior_point(strict, [((Q(1), Q(1)), Q(1))], 2, box=3)
    assert got is not None
    (x, y), _ = got
    assert x + y == Q(1) and x > 0 and y > 0


def test_interior_point_deterministic():
    strict = [((Q(1), Q(2)), Q(-1), 1), ((Q(-3), Q(1)), Q(0), 1), ((Q(0), Q(-1)), Q(-4), 1)]
    a = interior_point(strict, [], 2, box=5)
    b = interior_point(strict, [], 2, box=5)
    assert a == b
