"""Catalog of section types: canonical forms, known counts, witnesses,
stability, checkpointing."""

import json
import random

import pytest

from slicekit.catalog import (
    CombinatorialType,
    canonical_incidence,
    enumerate_slice_types,
    slice_type,
    type_count_bound,
    _canonical_bits,
)
from slicekit.errors import InputError
from slicekit.hyperplanes import enumerate_cells, sweep_arrangement
from slicekit.polytope import hull_from_vertices
from slicekit.qmath import Q, vdot
from slicekit.sections import SlicingChamber, slice_combinatorics

from shapes import cross_polytope, cube, pentagon, square, triangle


def cyclic_polygon_matrix(n, rot=0, reflect=False):
    """Vertex-edge incidence of an n-gon with relabeled vertices."""
    rows = []
    for i in range(n):
        k = (n - i) % n if reflect else i
        k = (k + rot) % n
        rows.append(tuple(1 if j in (k, (k - 1) % n) else 0 for j in range(n)))
    return tuple(rows)


class TestCanonicalForm:
    def test_relabeled_hexagons_match(self):
        base = _canonical_bits(cyclic_polygon_matrix(6))
        for rot in range(6):
            for refl in (False, True):
                m = cyclic_polygon_matrix(6, rot, refl)
                assert _canonical_bits(m) == base

    def test_random_permutations_invariant(self):
        rng = random.Random(11)
        for _ in range(40):
            r, c = rng.randint(2, 7), rng.randint(2, 7)
            m = [tuple(rng.randint(0, 1) for _ in range(c)) for _ in range(r)]
            ref = _canonical_bits(tuple(m))
            rp = list(range(r))
            cp = list(range(c))
            rng.shuffle(rp)
            rng.shuffle(cp)
            shuffled = tuple(
                tuple(m[i][j] for j in cp) for i in rp
            )
            assert _canonical_bits(shuffled) == ref

    def test_regular_but_nonisomorphic_split(self):
        # one 6-cycle versus two disjoint 3-cycles: every row and column
        # sums to 2, so degree refinement alone cannot separate them
        hexagon = cyclic_polygon_matrix(6)
        tri = cyclic_polygon_matrix(3)
        two_triangles = tuple(
            tuple((tri[i % 3][j % 3] if (i < 3) == (j < 3) else 0)
                  for j in range(6))
            for i in range(6)
        )
        assert _canonical_bits(hexagon) != _canonical_bits(two_triangles)
        # and the disjoint union is itself relabeling-invariant
        perm = [0, 3, 1, 4, 2, 5]
        interleaved = tuple(
            tuple(two_triangles[perm[i]][perm[j]] for j in range(6))
            for i in range(6)
        )
        assert _canonical_bits(interleaved) == _canonical_bits(two_triangles)

    def test_public_wrapper_on_section_incidence(self):
        P = cube(3)
        ch = SlicingChamber("parallel", (), (), (Q(1), Q(0), Q(0)), Q(0))
        cut = [e for e, (i, j) in enumerate(P.edges)
               if P.vertices[i][0] * P.vertices[j][0] < 0]
        ch = ch._replace(edges=tuple(cut))
        inc = slice_combinatorics(P, ch)
        s = canonical_incidence(inc)
        assert s == _canonical_bits(inc.incidence)
        assert s.count("|") == len(inc.incidence) - 1


class TestSmallCatalogs:
    def test_square_single_segment_type(self):
        cat = enumerate_slice_types(square())
        assert len(cat) == 1
        assert cat[0].f_vector == (2,)
        assert cat[0].multiplicity > 0

    def test_pentagon_single_segment_type(self):
        cat = enumerate_slice_types(pentagon())
        assert len(cat) == 1
        assert cat[0].f_vector == (2,)

    def test_triangle_single_segment_type(self):
        cat = enumerate_slice_types(triangle())
        assert len(cat) == 1

    def test_cross3_four_polygon_types(self):
        cat = enumerate_slice_types(cross_polytope(3))
        assert [t.f_vector for t in cat] == [(3, 3), (4, 4), (5, 5), (6, 6)]
        assert len({t.canonical_incidence for t in cat}) == 4

    def test_cube3_polygon_types(self):
        cat = enumerate_slice_types(cube(3))
        assert [t.f_vector for t in cat] == [(3, 3), (4, 4), (5, 5), (6, 6)]

    def test_catalog_sorted_by_f_vector(self):
        cat = enumerate_slice_types(cross_polytope(3))
        assert list(cat) == sorted(cat, key=lambda t: (t.f_vector,
                                                       t.canonical_incidence))

    def test_pentagon_section_needs_a_vertex(self):
        # the five-vertex section of the 3-cross only occurs with a vertex
        # of the polytope on the cutting hyperplane
        P = cross_polytope(3)
        cat = enumerate_slice_types(P)
        t5 = [t for t in cat if t.f_vector == (5, 5)][0]
        n, c = t5.witness
        vals = [vdot(n, v) - c for v in P.vertices]
        assert any(v == 0 for v in vals)

    def test_degenerate_cuts_are_not_types(self):
        P = cross_polytope(3)
        # beyond the polytope: empty
        assert slice_type(P, (1, 0, 0), 2) is None
        # through one vertex only: a point
        assert slice_type(P, (1, 0, 0), 1) is None
        # containing the edge from e1 to e2 and nothing else: a segment,
        # dimension below dim(P) - 1
        assert slice_type(P, (1, 1, 0), 1) is None
        # a proper cut is a type
        assert slice_type(P, (1, 0, 0), Q(1, 2)) is not None


class TestWitnesses:
    @pytest.mark.parametrize("shape", [cross_polytope(3), cube(3), square()])
    def test_witness_reproduces_canonical_form(self, shape):
        for t in enumerate_slice_types(shape):
            got = slice_type(shape, t.witness[0], t.witness[1])
            assert got == (t.canonical_incidence, t.f_vector)


class TestStability:
    def test_identical_reruns(self):
        P = cross_polytope(3)
        assert enumerate_slice_types(P) == enumerate_slice_types(P)

    @pytest.mark.parametrize("seed", [3, 7])
    def test_vertex_relabeling(self, seed):
        ref = enumerate_slice_types(cross_polytope(3))
        verts = list(cross_polytope(3).vertices)
        random.Random(seed).shuffle(verts)
        assert enumerate_slice_types(hull_from_vertices(verts)) == ref

    def test_workers_do_not_change_the_catalog(self):
        P = cross_polytope(3)
        assert enumerate_slice_types(P, workers=3) == enumerate_slice_types(P)


def octahedron_symmetry_perms():
    """Vertex permutations of the 3-cross induced by coordinate swaps and a
    sign change."""
    P = cross_polytope(3)
    verts = list(P.vertices)
    maps = [
        lambda v: (v[1], v[0], v[2]),
        lambda v: (v[0], v[2], v[1]),
        lambda v: (-v[0], v[1], v[2]),
    ]
    perms = []
    for g in maps:
        perms.append(tuple(verts.index(g(v)) for v in verts))
    return perms


class TestSymmetry:
    def test_symmetry_mode_matches_plain_enumeration(self):
        P = cross_polytope(3)
        plain = enumerate_slice_types(P)
        sym = enumerate_slice_types(P, symmetry=octahedron_symmetry_perms())
        assert [(t.canonical_incidence, t.f_vector, t.multiplicity)
                for t in plain] == \
               [(t.canonical_incidence, t.f_vector, t.multiplicity)
                for t in sym]
        for t in sym:
            assert slice_type(P, *t.witness) == (t.canonical_incidence,
                                                 t.f_vector)

    def test_rejects_non_permutation(self):
        with pytest.raises(InputError):
            enumerate_slice_types(cross_polytope(3), symmetry=[(0, 0, 1, 2, 3, 4)])


class TestCrossValidation:
    def test_random_slices_of_cross3_stay_inside_catalog(self):
        P = cross_polytope(3)
        cat = enumerate_slice_types(P)
        known = {(t.canonical_incidence, t.f_vector) for t in cat}
        rng = random.Random(5)
        cache = {}
        seen = set()
        trials = 0
        while trials < 10_000:
            n = tuple(Q(rng.randint(-9, 9), rng.randint(1, 5))
                      for _ in range(3))
            if all(x == 0 for x in n):
                continue
            vals = sorted(vdot(n, v) for v in P.vertices)
            span = vals[-1] - vals[0]
            # one interior offset and one exact vertex-value offset, so the
            # sample also exercises vertex-touching sections
            offs = [vals[0] + Q(rng.randint(1, 99), 100) * span,
                    vals[rng.randrange(len(vals))]]
            for c in offs:
                trials += 1
                t = slice_type(P, n, c, _cache=cache)
                if t is not None:
                    seen.add(t)
        assert seen <= known
        assert seen == known  # sampling with vertex hits reaches every type

    def test_random_slices_of_cube3_stay_inside_catalog(self):
        P = cube(3)
        known = {(t.canonical_incidence, t.f_vector)
                 for t in enumerate_slice_types(P)}
        rng = random.Random(17)
        cache = {}
        for _ in range(2000):
            n = tuple(Q(rng.randint(-7, 7), rng.randint(1, 4))
                      for _ in range(3))
            if all(x == 0 for x in n):
                continue
            vals = sorted(vdot(n, v) for v in P.vertices)
            c = vals[0] + Q(rng.randint(1, 99), 100) * (vals[-1] - vals[0])
            t = slice_type(P, n, c, _cache=cache)
            if t is not None:
                assert t in known


class TestBound:
    def test_pentagon_cells_within_bound(self):
        P = pentagon()
        cells = enumerate_cells(sweep_arrangement(P), min_dim=1)
        assert len(cells) == 24
        assert type_count_bound(P) >= len(cells)
        assert len(cells) >= len(enumerate_slice_types(P))

    def test_one_dimensional_polytope(self):
        P = hull_from_vertices([(0,), (1,)])
        assert type_count_bound(P) >= 1
        # every section of a segment is a point, so nothing is cataloged
        assert enumerate_slice_types(P) == ()


class TestCheckpoint:
    def test_checkpoint_roundtrip(self, tmp_path):
        P = cross_polytope(3)
        ref = enumerate_slice_types(P)
        log = tmp_path / "cat.jsonl"
        first = enumerate_slice_types(P, checkpoint=str(log))
        assert first == ref
        size = log.stat().st_size
        again = enumerate_slice_types(P, checkpoint=str(log))
        assert again == ref
        assert log.stat().st_size == size  # fully resumed, nothing re-run

    def test_resume_from_partial_log(self, tmp_path):
        P = cross_polytope(3)
        ref = enumerate_slice_types(P)
        log = tmp_path / "cat.jsonl"
        enumerate_slice_types(P, checkpoint=str(log))
        lines = log.read_text().splitlines(keepends=True)
        cutoff = 1 + (len(lines) - 1) // 2
        partial = tmp_path / "partial.jsonl"
        # keep half the cells, then simulate a write torn mid-record
        partial.write_text("".join(lines[:cutoff]) + lines[cutoff][: len(lines[cutoff]) // 2])
        assert enumerate_slice_types(P, checkpoint=str(partial)) == ref

    def test_rejects_foreign_checkpoint(self, tmp_path):
        log = tmp_path / "cat.jsonl"
        enumerate_slice_types(square(), checkpoint=str(log))
        with pytest.raises(InputError):
            enumerate_slice_types(cross_polytope(3), checkpoint=str(log))

    def test_log_lines_are_json(self, tmp_path):
        log = tmp_path / "cat.jsonl"
        enumerate_slice_types(square(), checkpoint=str(log))
        lines = log.read_text().splitlines()
        head = json.loads(lines[0])
        assert head["kind"] == "slice-type-checkpoint"
        for ln in lines[1:]:
            rec = json.loads(ln)
            assert set(rec) == {"cell", "types"}


CROSS4_FVECTORS = [
    (4, 6, 4),
    (6, 12, 8),
    (8, 17, 11),
    (8, 18, 12),
    (9, 19, 12),
    (10, 20, 12),
    (10, 21, 13),
    (12, 24, 14),
    (12, 24, 14),
]


class TestCross4:
    def test_nine_types_with_expected_f_vectors(self, cross4_catalog):
        cat = cross4_catalog
        assert sorted(t.f_vector for t in cat) == sorted(CROSS4_FVECTORS)
        twins = [t for t in cat if t.f_vector == (12, 24, 14)]
        assert len(twins) == 2
        assert twins[0].canonical_incidence != twins[1].canonical_incidence
