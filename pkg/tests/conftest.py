"""Session-scoped fixtures for computations shared between module tests and
the acceptance gate, so multi-minute enumerations run once per session."""

import pytest

from shapes import cross_polytope, permutahedron


@pytest.fixture(scope="session")
def cross4_catalog():
    from slicekit.catalog import enumerate_slice_types

    return enumerate_slice_types(cross_polytope(4))


@pytest.fixture(scope="session")
def permutahedron_catalog():
    from slicekit.catalog import enumerate_slice_types

    return enumerate_slice_types(permutahedron())
