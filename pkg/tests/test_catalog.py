from math import comb

import pytest

from nilcc import catalog
from nilcc.algebra import layer_profile, validate_structure
from nilcc.catalog import CatalogError, CliffordData, curvature_forms, octonion_clifford, quaternion_clifford
from nilcc.cohomology import is_quadratically_presented
from nilcc.forms import d0, theta

NAMES = ["abelian,2", "heisenberg,1", "heisenberg,3", "engel", "engel_regraded", "free,2,3", "triangular,4",
         "triangular,5", "quaternionic_q7", "octonionic_15", "chen,2,2", "chen,3,2", "carlson_toledo", "g6"]


@pytest.mark.parametrize("spec", NAMES)
def test_builders_valid(spec):
    alg = catalog.parse_spec(spec)
    assert validate_structure(alg) == []
    assert list(alg.weights) == sorted(alg.weights)


def test_triangular_layers():
    t = catalog.triangular(4)
    assert t.dim == 6
    assert layer_profile(t).layer_dims == {1: 3, 2: 2, 3: 1}


def test_htype_shapes():
    q = catalog.quaternionic_q7()
    assert layer_profile(q).layer_dims == {1: 4, 2: 3}
    o = catalog.octonionic_15()
    assert layer_profile(o).layer_dims == {1: 8, 2: 7}
    assert layer_profile(o).filtered


def test_curvature_span_matches_clifford():
    data = quaternion_clifford()
    q = catalog.quaternionic_q7()
    want = []
    for f in curvature_forms(data):
        want.append({k: v for k, v in f.items()})
    got = []
    for t in q.layer(2):
        form = d0(q, theta(q, q.labels[t]))
        got.append({m: c for m, c in form.terms.items()})
    assert got == want


def test_clifford_validation():
    data = octonion_clifford()
    assert data.n == 8 and data.k == 7
    bad = [[0, 1], [-1, 0]]
    with pytest.raises(CatalogError, match=r"J_1, J_2"):
        CliffordData(2, 2, (bad, bad))


def test_chen_shape():
    for n, k in [(2, 2), (3, 2), (2, 3)]:
        c = catalog.chen(n, k)
        assert len(c.layer(1)) == n + comb(n + k - 1, k)
        assert c.rank == k + 1


def test_quadratic_catalog_entries():
    assert is_quadratically_presented(catalog.chen(2, 2))
    assert is_quadratically_presented(catalog.carlson_toledo())
    assert is_quadratically_presented(catalog.octonionic_15())


def test_unknown_name():
    with pytest.raises(CatalogError, match="unknown"):
        catalog.parse_spec("nope")
    with pytest.raises(CatalogError):
        catalog.parse_spec("heisenberg,x")


def test_catalog_list_headlines():
    names = {e.spec: e.expected for e in catalog.catalog_list()}
    assert names["heisenberg,1"]["alpha:1"] == ["2", "2"]
    assert names["engel"]["alpha:1"] == ["7/3", "7/2"]
    assert names["free,2,3"]["beta:1"] == ["3", "3"]
