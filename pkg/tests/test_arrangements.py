import itertools
import random

import pytest

from slicekit.hyperplanes import (
    central_arrangement,
    cocircuit_arrangement,
    enumerate_cells,
    parallel_arrangement,
    sweep_arrangement,
    Arrangement,
    Hyperplane,
)
from slicekit.polytope import hull_from_vertices
from slicekit.qmath import Q, vdot

import shapes
from oracles import brute_cells


def test_central_pentagon_three_lines():
    A = central_arrangement(shapes.pentagon())
    assert A.kind == "central" and len(A) == 3
    assert all(h.offset == 0 for h in A.hyperplanes)
    # every vertex appears in some provenance entry
    assert sorted(i for p in A.provenance for i in p) == [0, 1, 2, 3, 4]


def test_central_translated_pentagon_five_lines():
    # after this translation no two vertices are parallel, so every vertex
    # contributes its own line (5 is the maximum possible for a pentagon)
    P = shapes.pentagon().translate((Q(-1, 3), Q(-1, 2)))
    A = central_arrangement(P)
    assert len(A) == 5
    assert all(len(p) == 1 for p in A.provenance)


def test_central_cross_three_planes():
    A = central_arrangement(shapes.cross_polytope(3))
    assert len(A) == 3
    assert all(len(p) == 2 for p in A.provenance)


def test_central_skips_origin_vertex():
    P = hull_from_vertices([(0, 0), (1, 0), (0, 1)])
    A = central_arrangement(P)
    assert len(A) == 2


def test_parallel_pentagon_generic_direction():
    P = shapes.pentagon()
    A = parallel_arrangement(P, (1, 2))
    assert len(A) == 5
    assert A.breakpoints() == (-3, -1, 1, 3, 4)
    # vertex sweep order: sort vertices by <u, v>
    order = sorted(range(5), key=lambda i: vdot((1, 2), P.vertices[i]))
    assert [P.vertices[i] for i in order] == [
        (-1, -1),
        (1, -1),
        (-1, 1),
        (1, 1),
        (0, 2),
    ]


def test_parallel_pentagon_non_generic_direction():
    A = parallel_arrangement(shapes.pentagon(), (-1, -1))
    assert len(A) == 3
    assert A.breakpoints() == (-2, 0, 2)


def test_parallel_cube_diagonal():
    A = parallel_arrangement(shapes.cube(), (1, 1, 1))
    assert A.breakpoints() == (-3, -1, 1, 3)


def test_parallel_rejects_zero_direction():
    with pytest.raises(ValueError):
        parallel_arrangement(shapes.pentagon(), (0, 0))


def test_cocircuit_pentagon_ten_lines():
    A = cocircuit_arrangement(shapes.pentagon())
    assert len(A) == 10
    assert all(len(gen) == 2 for p in A.provenance for gen in p)


def test_cocircuit_triangle():
    A = cocircuit_arrangement(shapes.triangle())
    assert len(A) == 3
    # each line passes through two negated vertices
    verts = shapes.triangle().vertices
    for h, prov in zip(A.hyperplanes, A.provenance):
        for subset in prov:
            for i in subset:
                neg = tuple(-c for c in verts[i])
                assert vdot(h.normal, neg) == h.offset


def test_cocircuit_segment_two_points():
    A = cocircuit_arrangement(hull_from_vertices([(0,), (1,)]))
    assert len(A) == 2
    vals = sorted(h.offset / h.normal[0] for h in A.hyperplanes)
    assert vals == [-1, 0]


def test_sweep_pentagon_six_lines_twelve_regions():
    A = sweep_arrangement(shapes.pentagon())
    assert len(A) == 6
    cells = enumerate_cells(A, min_dim=2)
    assert len(cells) == 12
    assert all(c.maximal and c.dim == 2 for c in cells)


def test_sweep_pentagon_rays():
    A = sweep_arrangement(shapes.pentagon())
    cells = enumerate_cells(A, min_dim=1)
    assert len(cells) == 24
    assert sum(1 for c in cells if c.dim == 1) == 12
    # each representative reproduces its sign vector
    for c in cells:
        assert A.sign_vector(c.representative) == c.signs
    assert len({c.signs for c in cells}) == 24


def test_generic_central_fan():
    # m distinct lines through the origin cut the plane into 2m chambers
    lines = [Hyperplane((Q(1), Q(k)), Q(0)) for k in range(4)]
    A = Arrangement(2, "central", lines, [(i,) for i in range(4)])
    cells = enumerate_cells(A, min_dim=2)
    assert len(cells) == 8
    rays = [c for c in enumerate_cells(A, min_dim=1) if c.dim == 1]
    assert len(rays) == 8


def test_cocircuit_pentagon_regions_count():
    A = cocircuit_arrangement(shapes.pentagon())
    cells = enumerate_cells(A, min_dim=2)
    assert len(cells) == 37
    # bounded/unbounded split via recession cones; an arrangement of 10
    # lines admits at most 20 unbounded regions (two circle arcs per line),
    # and with no surviving parallel strips that bound is met exactly
    from slicekit.polytope import dd_cone

    bounded = 0
    for c in cells:
        rows = []
        for h, s in zip(A.hyperplanes, c.signs):
            sign = 1 if s == "+" else -1
            rows.append(tuple(-sign * x for x in h.normal))
        rays, lin = dd_cone(rows, 2)
        if not rays and not lin:
            bounded += 1
    assert bounded == 17 and len(cells) - bounded == 20


def test_representative_in_paper_region():
    # the cocircuit region holding t = (-1/3, -1/2) is found with correct signs
    A = cocircuit_arrangement(shapes.pentagon())
    t = (Q(-1, 3), Q(-1, 2))
    target = A.sign_vector(t)
    assert "0" not in target
    cells = enumerate_cells(A, min_dim=2)
    match = [c for c in cells if c.signs == target]
    assert len(match) == 1


def test_enumeration_matches_brute_force():
    rng = random.Random(211)
    arrangements = [
        central_arrangement(shapes.pentagon()),
        sweep_arrangement(shapes.pentagon()),
        cocircuit_arrangement(shapes.triangle()),
        central_arrangement(shapes.cross_polytope(3)),
    ]
    # plus a random affine arrangement in d=3
    hyps = []
    for i in range(5):
        n = tuple(Q(rng.randrange(-3, 4)) for _ in range(3))
        if all(c == 0 for c in n):
            n = (Q(1), Q(0), Q(0))
        hyps.append((n, Q(rng.randrange(-2, 3))))
    from slicekit.hyperplanes import _canonical

    canon = sorted({_canonical(n, c) for n, c in hyps})
    arrangements.append(
        Arrangement(3, "sweep", canon, [(i,) for i in range(len(canon))])
    )

    for A in arrangements:
        assert len(A) <= 6 and A.ambient_dim <= 3
        got = {(c.signs, c.dim) for c in enumerate_cells(A, min_dim=1)}
        normals = [h.normal for h in A.hyperplanes]
        offsets = [h.offset for h in A.hyperplanes]
        want = set()
        for signs in brute_cells(normals, offsets, A.ambient_dim, min_dim=1):
            zeros = [normals[i] for i, s in enumerate(signs) if s == "0"]
            from slicekit.qmath import rank

            want.add((signs, A.ambient_dim - rank(zeros)))
        assert got == want


def test_sweep_coherence_orderings():
    P = shapes.pentagon()
    A = sweep_arrangement(P)
    rng = random.Random(223)
    by_cell = {}
    for _ in range(150):
        x = (Q(rng.randrange(-60, 61), 7), Q(rng.randrange(-60, 61), 7))
        sig = A.sign_vector(x)
        if "0" in sig or all(c == 0 for c in x):
            continue
        order = tuple(sorted(range(5), key=lambda i: vdot(x, P.vertices[i])))
        by_cell.setdefault(sig, set()).add(order)
    assert by_cell
    for sig, orders in by_cell.items():
        assert len(orders) == 1, sig


def test_zaslavsky_bound_holds():
    import math

    for A in (
        sweep_arrangement(shapes.pentagon()),
        cocircuit_arrangement(shapes.pentagon()),
    ):
        cells = enumerate_cells(A, min_dim=A.ambient_dim)
        m = len(A)
        bound = sum(math.comb(m, i) for i in range(A.ambient_dim + 1))
        assert len(cells) <= bound


def test_min_dim_validation():
    A = central_arrangement(shapes.pentagon())
    with pytest.raises(ValueError):
        enumerate_cells(A, min_dim=0)


def test_sweep_cross4_counts():
    A = sweep_arrangement(shapes.cross_polytope(4))
    assert len(A) == 16
    cells = enumerate_cells(A, min_dim=1)
    assert len(cells) == 1696
    assert sum(1 for c in cells if c.maximal) == 384


def test_sweep_cross5_hyperplane_count():
    # e_i and e_i +- e_j directions; the full cell enumeration is covered
    # by the acceptance suite
    A = sweep_arrangement(shapes.cross_polytope(5))
    assert len(A) == 25
