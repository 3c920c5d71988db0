"""Standard test polytopes, built fresh on each call."""

import itertools

from slicekit.polytope import hull_from_vertices
from slicekit.qmath import Q


def pentagon():
    return hull_from_vertices([(-1, -1), (1, -1), (1, 1), (0, 2), (-1, 1)])


def cube(d=3, radius=1):
    return hull_from_vertices(list(itertools.product((-radius, radius), repeat=d)))


def cross_polytope(d=3):
    pts = []
    for i in range(d):
        for s in (1, -1):
            p = [0] * d
            p[i] = s
            pts.append(tuple(p))
    return hull_from_vertices(pts)


def permutahedron(values=(1, 2, 3, 4)):
    return hull_from_vertices(list(itertools.permutations(values)))


def triangle():
    return hull_from_vertices([(0, 0), (1, 0), (0, 1)])


def square(radius=1):
    return cube(d=2, radius=radius)


def random_point_cloud(rng, d, n, lo=-5, hi=5):
    return [
        tuple(Q(rng.randrange(lo * 6, hi * 6 + 1), rng.randrange(1, 7)) for _ in range(d))
        for _ in range(n)
    ]
