import itertools
from fractions import Fraction

import pytest

from nilcc import catalog
from nilcc.forms import (InvariantForm, d0, d0_matrix, d0_pinv, delta0_matrix, form_space, hodge_star,
                         star_matrix, theta, weight_split)
from nilcc.linalg import QMatrix

SMALL = [catalog.engel(), catalog.heisenberg(1), catalog.heisenberg(2), catalog.triangular(4),
         catalog.quaternionic_q7(), catalog.engel_regraded(), catalog.abelian(3)]


def test_engel_d0_theta():
    e = catalog.engel()
    assert d0(e, theta(e, "Z")) == -theta(e, "X", "Y")
    assert d0(e, theta(e, "T")) == -theta(e, "X", "Z")
    assert d0(e, theta(e, "X")).is_zero()
    assert d0(e, theta(e, "Y")).is_zero()


def test_abelian_d0_zero():
    a = catalog.abelian(4)
    for k in range(5):
        assert d0_matrix(a, k).is_zero()


def test_heisenberg_d0():
    h = catalog.heisenberg(1)
    assert d0(h, theta(h, "X", "T")).is_zero()
    assert d0_matrix(h, 1).nnz() == 1


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_d0_squared_and_homogeneous(alg):
    for k in range(alg.dim):
        m = d0_matrix(alg, k + 1) @ d0_matrix(alg, k)
        assert m.is_zero()
        src, dst = form_space(alg, k), form_space(alg, k + 1)
        for r, c, _ in d0_matrix(alg, k).entries():
            assert dst.weights[r] == src.weights[c]


def test_delta0_engel():
    e = catalog.engel()
    sp1, sp2 = form_space(e, 1), form_space(e, 2)
    col = sp2.index[(0, 1)]
    got = delta0_matrix(e, 2).apply({col: Fraction(1)})
    assert got == {sp1.index[(2,)]: Fraction(-1)}


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_delta0_is_transpose_and_squares_to_zero(alg):
    for k in range(1, alg.dim + 1):
        assert delta0_matrix(alg, k) == d0_matrix(alg, k - 1).transpose()
        if k >= 2:
            assert (delta0_matrix(alg, k - 1) @ delta0_matrix(alg, k)).is_zero()


def test_pinv_engel():
    e = catalog.engel()
    sp1, sp2 = form_space(e, 1), form_space(e, 2)
    got = d0_pinv(e, 1).apply({sp2.index[(0, 1)]: Fraction(1)})
    assert got == {sp1.index[(2,)]: Fraction(-1)}
    assert d0_pinv(catalog.abelian(3), 1).is_zero()


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_pinv_axioms(alg):
    for k in range(alg.dim):
        a, p = d0_matrix(alg, k), d0_pinv(alg, k)
        assert a @ p @ a == a
        assert p @ a @ p == p
        ap, pa = a @ p, p @ a
        assert ap == ap.transpose()
        assert pa == pa.transpose()


def test_star_examples():
    e = catalog.engel()
    assert hodge_star(e, theta(e, "X")) == theta(e, "Y", "Z", "T")
    assert hodge_star(e, InvariantForm(0, {(): 1})) == theta(e, "X", "Y", "Z", "T")
    assert hodge_star(e, theta(e, "X", "Y", "Z", "T")) == InvariantForm(0, {(): 1})
    # orientation X,Y,Z,T: theta_Y^theta_Z ^ theta_X^theta_T = +vol
    assert hodge_star(e, theta(e, "Y", "Z")) == theta(e, "X", "T")


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_star_involution_and_volume(alg):
    n = alg.dim
    vol = InvariantForm(n, {tuple(range(n)): 1})
    for k in range(n + 1):
        s = star_matrix(alg, n - k) @ star_matrix(alg, k)
        sign = (-1) ** (k * (n - k))
        assert s == QMatrix.identity(len(form_space(alg, k))).scale(sign)
        for mono in form_space(alg, k).monomials[:5]:
            f = InvariantForm(k, {mono: 1})
            assert (f ^ hodge_star(alg, f)) == vol


@pytest.mark.parametrize("alg", SMALL, ids=lambda a: a.name)
def test_star_conjugates_delta0(alg):
    # *delta0 = (-1)^k d0 * on k-forms, from delta = (-1)^(n(k+1)+1) * d * and ** = (-1)^(k(n-k))
    n = alg.dim
    for k in range(1, n + 1):
        lhs = star_matrix(alg, k - 1) @ delta0_matrix(alg, k)
        rhs = (d0_matrix(alg, n - k) @ star_matrix(alg, k)).scale((-1) ** k)
        assert lhs == rhs


def test_weight_split():
    e = catalog.engel()
    f = theta(e, "X", "Y") + theta(e, "X", "T")
    assert weight_split(e, f) == {2: theta(e, "X", "Y"), 4: theta(e, "X", "T")}
    assert weight_split(e, InvariantForm(2)) == {}
    h = catalog.heisenberg(1)
    assert weight_split(h, theta(h, "X", "T")) == {3: theta(h, "X", "T")}


def test_basis_is_lexicographic():
    sp = form_space(catalog.engel(), 2)
    assert list(sp.monomials) == list(itertools.combinations(range(4), 2))


def test_wedge_sign():
    e = catalog.engel()
    assert (theta(e, "Y") ^ theta(e, "X")) == -theta(e, "X", "Y")
    assert (theta(e, "X") ^ theta(e, "X")).is_zero()
