from fractions import Fraction
from math import comb

import pytest

from nilcc import catalog
from nilcc.algebra import AlgebraError
from nilcc.cohomology import (cohomology_summary, e0_basis, extension_family_check, form_rank,
                              generic_weight_profile, h2_weights, is_quadratically_presented,
                              omega_regular_search, omega_regular_verify, pinching_entry, pinching_report,
                              rank2_in_span, weight_three_map)
from nilcc.forms import InvariantForm, d0, hodge_star, theta
from nilcc.freelie import relation_profile

F = Fraction
CATALOG = ["abelian,3", "heisenberg,1", "heisenberg,2", "heisenberg,3", "engel", "engel_regraded", "triangular,4",
           "triangular,5", "quaternionic_q7", "g6", "chen,2,2", "carlson_toledo", "free,2,3", "free,3,2"]


def _forms(alg, k):
    return sorted(f.pretty(alg) for f in e0_basis(alg, k).forms)


def test_engel_h2():
    e = catalog.engel()
    b = e0_basis(e, 2)
    assert sorted(b.weights) == [3, 4]
    assert _forms(e, 2) == ["θ_X^θ_T", "θ_Y^θ_Z"]


def test_abelian_and_heisenberg():
    a = catalog.abelian(4)
    for k in range(5):
        assert len(e0_basis(a, k)) == comb(4, k)
        assert set(e0_basis(a, k).weights) <= {k}
    h = catalog.heisenberg(1)
    assert _forms(h, 1) == ["θ_X", "θ_Y"]
    assert _forms(h, 2) == ["θ_X^θ_T", "θ_Y^θ_T"]
    assert e0_basis(h, 2).weights == (3, 3)


def test_basis_is_harmonic():
    q = catalog.quaternionic_q7()
    for k in range(q.dim + 1):
        for f in e0_basis(q, k).forms:
            assert d0(q, f).is_zero()


def test_regraded_engel_summary():
    s = cohomology_summary(catalog.engel_regraded())
    assert s[2].weights == (5, 5) and s[2].pure
    assert sorted(s[3].weights) == [8, 9]
    assert not s[3].pure


def test_q7_summary():
    q = catalog.quaternionic_q7()
    w2 = e0_basis(q, 2).weights
    assert (w2.count(2), w2.count(3)) == (3, 8)
    assert len(e0_basis(q, 3)) == 14
    assert set(e0_basis(q, 3).weights) == {4}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_heisenberg_primitive_dims(n):
    h = catalog.heisenberg(n)
    for k in range(n + 1):
        expected = comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0)
        assert len(e0_basis(h, k)) == expected


@pytest.mark.parametrize("spec", CATALOG)
def test_euler_and_duality(spec):
    alg = catalog.parse_spec(spec)
    s = cohomology_summary(alg)
    assert s.euler_characteristic == 0
    assert s.dims()[0] == s.dims()[-1] == 1
    n_g = sum(alg.weights)
    for k in range(alg.dim + 1):
        assert s.dims()[k] == s.dims()[alg.dim - k]
        assert sorted(n_g - w for w in s[k].weights) == sorted(s[alg.dim - k].weights)


def test_star_preserves_e0():
    q = catalog.quaternionic_q7()
    for k in range(q.dim + 1):
        for f in e0_basis(q, k).forms[:3]:
            g = hodge_star(q, f)
            assert d0(q, g).is_zero()


def test_pinching_examples():
    e = pinching_entry(catalog.engel(), 1)
    assert e.beta_algebraic == (F(2), F(3))
    assert e.alpha == (F(7, 3), F(7, 2))
    r = pinching_report(catalog.engel_regraded())
    e2 = r.degree(2)
    assert e2.applicable and e2.beta == (F(3), F(4)) and e2.alpha == (F(10, 4), F(10, 3))
    assert not r.degree(3).applicable and r.degree(3).reason == "mixed weight"
    for n in (2, 3):
        h = catalog.heisenberg(n)
        n_g = 2 * n + 2
        rep = pinching_report(h)
        for k in range(1, 2 * n + 1):
            beta = F(2) if k == n else F(1)
            assert rep.degree(k).beta == (beta, beta)
            assert rep.degree(k).alpha == (n_g / beta, n_g / beta)


def test_pinching_report_excludes_ends():
    rep = pinching_report(catalog.engel())
    assert [e.degree for e in rep.entries] == [1, 2, 3]


def test_pinching_json_shape():
    js = pinching_entry(catalog.engel(), 1).to_json()
    assert js["alpha"] == ["7/3", "7/2"] and js["beta"] == ["2", "3"]
    assert js["applicable"] is True and js["audible_lower_bound"] == 1


@pytest.mark.parametrize("k,r", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3)])
def test_free_beta(k, r):
    assert pinching_entry(catalog.free(k, r), 1).beta == (F(r), F(r))


def test_quadratic_predicate():
    assert is_quadratically_presented(catalog.heisenberg(2))
    assert is_quadratically_presented(catalog.heisenberg(3))
    assert is_quadratically_presented(catalog.carlson_toledo())
    for alg in (catalog.engel(), catalog.heisenberg(1), catalog.triangular(4), catalog.triangular(5)):
        assert not is_quadratically_presented(alg)
    with pytest.raises(AlgebraError):
        is_quadratically_presented(catalog.engel_regraded())


@pytest.mark.parametrize("spec", ["heisenberg,1", "heisenberg,2", "engel", "triangular,4", "carlson_toledo",
                                  "chen,2,2", "quaternionic_q7", "free,2,3"])
def test_quadratic_iff_relations_weight_two(spec):
    alg = catalog.parse_spec(spec)
    assert is_quadratically_presented(alg) == all(w == 2 for w in relation_profile(alg).weights)


def test_weight_three_map():
    m = weight_three_map(catalog.octonionic_15())
    assert (m.source_dim, m.target_dim, m.rank) == (56, 56, 56) and m.bijective
    m = weight_three_map(catalog.heisenberg(2))
    assert m.injective


def test_omega_verify():
    h = catalog.heisenberg(2)
    assert omega_regular_verify(h, "X1", "X2")
    assert not omega_regular_verify(h, "X1", "Y1")
    a = catalog.abelian(3)
    with pytest.raises(AlgebraError):
        omega_regular_verify(a, "X1", "X2")


def test_omega_search():
    h = catalog.heisenberg(2)
    found = omega_regular_search(h, seed=3, trials=100)
    assert found.status == "found"
    assert omega_regular_verify(h, *found.pair)
    assert is_quadratically_presented(h)
    assert omega_regular_search(catalog.quaternionic_q7(), seed=0, trials=50).status == "inconclusive"
    assert omega_regular_search(catalog.heisenberg(1), seed=0, trials=50).status == "inconclusive"
    assert omega_regular_search(h, seed=5).to_json(h) == omega_regular_search(h, seed=5).to_json(h)


def test_q7_commuting_pairs_are_collinear():
    q = catalog.quaternionic_q7()
    d = q.layer(1)
    import itertools
    for a, b in itertools.product(range(-1, 2), repeat=2):
        x1 = {d[0]: F(1), d[1]: F(a)}
        for c in range(-1, 2):
            x2 = {d[2]: F(1), d[3]: F(b), d[1]: F(c)}
            assert q.bracket_vectors(x1, x2)


def test_rank2_in_span():
    a = catalog.abelian(4)
    assert rank2_in_span(a, [theta(a, "X1", "X2")]).status == "found"
    w1 = theta(a, "X1", "X2") + theta(a, "X3", "X4")
    w2 = theta(a, "X1", "X3") - theta(a, "X2", "X4")
    assert rank2_in_span(a, [w1, w2]).status == "none_certified"
    q = catalog.quaternionic_q7()
    curv = [d0(q, theta(q, t)) for t in ("T1", "T2", "T3")]
    assert rank2_in_span(q, curv).status == "none_certified"
    found = rank2_in_span(a, [w1, theta(a, "X1", "X2")])
    assert found.status == "found" and (found.form ^ found.form).is_zero()


def test_extension_family():
    a = catalog.abelian(4)
    w1 = theta(a, "X1", "X2") + theta(a, "X3", "X4")
    steps = extension_family_check(4, [w1])
    assert steps[0].condition1 and steps[0].rank == 4
    w2 = w1 + theta(a, "X1", "X2")
    steps = extension_family_check(4, [w1, w2])
    assert steps[1].condition2 is False
    assert form_rank(w1, 4) == 4


def test_generic_weight_profile():
    assert generic_weight_profile(2, 4) == (3, (2, 3))
    assert generic_weight_profile(2, 3) == (3, (2, 3))
    assert generic_weight_profile(3, 3) == (1, (1, 1))
    with pytest.raises(ValueError):
        generic_weight_profile(1, 3)


def test_h2_weights_helper():
    assert sorted(h2_weights(catalog.engel())) == [3, 4]
