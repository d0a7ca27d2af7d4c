import numpy as np
import pytest

from catalog import ALGEBRAS, bimodules, left_unit_algebra
from compatop.algebra import (
    Algebra,
    Bimodule,
    CompatibleAlgebra,
    CompatibleBimodule,
    adjoint_compatible_bimodule,
    check_associative,
    check_bimodule,
    check_compatible_associative,
    check_compatible_bimodule,
    coadjoint_bimodule,
    dual_numbers,
)
from compatop.tensors import ShapeError, zeros


@pytest.mark.parametrize("name", sorted(ALGEBRAS))
def test_catalog_algebras_are_associative(name):
    alg = ALGEBRAS[name]()
    assert check_associative(alg).passed
    for bname, bim in bimodules(alg, name).items():
        assert check_bimodule(alg, bim).passed, bname


def test_unit_check_on_one_dim_algebra():
    alg = Algebra(1, [[["1"]]])
    assert check_associative(alg).passed
    assert alg.mul([1], [1]).tolist() == [1]


def test_nonassociative_defect_is_localised():
    mu = zeros((2, 2, 2))
    mu[0, 0, 1] = 1  # e0 e0 = e1
    mu[1, 0, 0] = 1  # e1 e0 = e0
    rep = check_associative(Algebra(2, mu))
    assert not rep.passed
    d = rep.defects[0]
    assert d.identity == "(ab)c = a(bc)"
    assert d.index == (0, 0, 0)
    assert [int(x) for x in d.vector] == [1, 0]  # (e0 e0) e0 = e0 while e0 (e0 e0) = 0


def test_coadjoint_convention():
    alg = left_unit_algebra()
    co = coadjoint_bimodule(alg)
    for i in range(2):
        for u in range(2):
            for v in range(2):
                assert co.left[i, u, v] == alg.mu[v, i, u]
                assert co.right[u, i, v] == alg.mu[i, v, u]


def test_bimodule_dimension_mismatch():
    alg = dual_numbers()
    with pytest.raises(ShapeError):
        check_bimodule(alg, Bimodule.zero(1, 2))


def test_compatible_algebra_from_scaled_copies():
    alg = dual_numbers()
    c = CompatibleAlgebra(2, alg.mu, alg.mu * 3)
    assert check_compatible_associative(c).passed
    assert check_compatible_bimodule(c, adjoint_compatible_bimodule(c)).passed


def test_incompatible_pair_of_products():
    # two associative products whose sum is not associative
    a = zeros((2, 2, 2))
    a[0, 0, 0] = 1
    b = zeros((2, 2, 2))
    b[1, 1, 0] = 1
    assert check_associative(Algebra(2, a)).passed and check_associative(Algebra(2, b)).passed
    rep = check_compatible_associative(CompatibleAlgebra(2, a, b))
    assert not rep.passed
    assert [s.passed for s in rep.subreports] == [True, True, False, False]


def test_compatible_bimodule_failure():
    alg = dual_numbers()
    c = CompatibleAlgebra(2, alg.mu, alg.mu)
    left = np.array(alg.mu, dtype=object)
    cb = CompatibleBimodule(2, 2, left, left, zeros((2, 2, 2)), left)
    assert not check_compatible_bimodule(c, cb).passed
