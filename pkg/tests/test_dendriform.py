import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from catalog import compatible_pairs, fixture_pair
from strategies import rng_of, seeds
from compatop.algebra import check_compatible_associative
from compatop.cohomology import check_square_zero, random_tuple_cochain
from compatop.dendriform import (
    CDendComplex,
    CompatibleDendriform,
    CompDendCochain,
    DendCochain,
    brace_bracket,
    check_compatible_dendriform,
    check_induced_naturality,
    check_square,
    check_triangle,
    delta_cdend,
    induced_dendriform,
    partial_composition,
    psi_map,
    r_map,
    random_comp_cochain,
    random_dend_cochain,
    s_map,
    structure_bracket_report,
    total_algebra,
    verify_phi,
    verify_psi,
)
from compatop.cohomology import delta_pair
from compatop.tensors import ShapeError, equal, random_tensor

arity = st.integers(1, 3)
dim = st.sampled_from([1, 2])


@given(seeds, dim, arity, arity, st.data())
@settings(max_examples=60)
def test_partial_composition_matches_pointwise(seed, d, m, n, data):
    rng = rng_of(seed)
    f, g = random_dend_cochain(rng, m, d), random_dend_cochain(rng, n, d)
    i = data.draw(st.integers(1, m))
    assert equal(partial_composition(f, i, g).labels, oracles.dendriform_compose(f.labels, i, g.labels))


@given(seeds, dim, arity, arity)
@settings(max_examples=40)
def test_brace_matches_pointwise(seed, d, m, n):
    rng = rng_of(seed)
    f, g = random_dend_cochain(rng, m, d), random_dend_cochain(rng, n, d)
    assert equal(brace_bracket(f, g).labels, oracles.brace(f.labels, g.labels))


@given(seeds, dim, arity, arity, st.integers(1, 2))
@settings(max_examples=40)
def test_brace_is_graded_lie(seed, d, m, n, k):
    rng = rng_of(seed)
    f, g, h = (random_dend_cochain(rng, a, d) for a in (m, n, k))
    sign = (-1) ** ((m - 1) * (n - 1))
    assert brace_bracket(f, g) == brace_bracket(g, f).scale(-sign)
    lhs = brace_bracket(f, brace_bracket(g, h))
    rhs = brace_bracket(brace_bracket(f, g), h) + brace_bracket(g, brace_bracket(f, h)).scale(sign)
    assert lhs == rhs


@given(seeds, dim, arity)
def test_identity_is_a_unit(seed, d, m):
    f = random_dend_cochain(rng_of(seed), m, d)
    e = DendCochain.identity(d)
    assert partial_composition(e, 1, f) == f
    for i in range(1, m + 1):
        assert partial_composition(f, i, e) == f


@given(seeds, dim, arity, arity, arity, st.data())
@settings(max_examples=40)
def test_sequential_associativity(seed, d, m, n, k, data):
    rng = rng_of(seed)
    f, g, h = (random_dend_cochain(rng, a, d) for a in (m, n, k))
    i = data.draw(st.integers(1, m))
    j = data.draw(st.integers(1, n))
    lhs = partial_composition(partial_composition(f, i, g), i + j - 1, h)
    rhs = partial_composition(f, i, partial_composition(g, j, h))
    assert lhs == rhs


def test_box_maps():
    assert [r_map(3, 2, 2, r) for r in range(1, 5)] == [1, 2, 2, 3]
    assert s_map(3, 2, 2, 1) == [1, 1]
    assert s_map(3, 2, 2, 3) == [0, 1]
    with pytest.raises(IndexError):
        r_map(2, 3, 1, 1)


def _random_products(rng, d):
    return [random_tensor(rng, (d, d, d)) for _ in range(4)]


@given(seeds, dim)
@settings(max_examples=40)
def test_structure_brackets_detect_axioms(seed, d):
    cd = CompatibleDendriform(d, *_random_products(rng_of(seed), d))
    assert check_compatible_dendriform(cd).passed == structure_bracket_report(cd).passed


@pytest.mark.parametrize("name", ["dual/adjoint", "leftunit/coadjoint", "leftunit/adjoint", "kxk/trivial", "zero1/adjoint"])
def test_induced_dendriform_triangle_and_square(name):
    for p in compatible_pairs(name)[:20]:
        cd = induced_dendriform(p)
        assert check_compatible_dendriform(cd).passed
        assert structure_bracket_report(cd).passed
        assert check_compatible_associative(total_algebra(cd)).passed
        assert check_triangle(p).passed
        assert check_square(cd).passed


@given(seeds, dim)
@settings(max_examples=20)
def test_square_holds_for_any_products(seed, d):
    cd = CompatibleDendriform(d, *_random_products(rng_of(seed), d))
    assert check_square(cd).passed


def test_naturality_under_automorphism():
    from fractions import Fraction

    p = fixture_pair()
    from compatop.operators import LinOp, OperatorPair

    phi = np.array([[1, 0], [0, 3]], dtype=object)
    inv = np.array([[1, 0], [0, Fraction(1, 3)]], dtype=object)
    q = OperatorPair(*(LinOp(p.ctx, phi.dot(t.matrix).dot(inv)) for t in (p.t1, p.t2)))
    assert check_induced_naturality(phi, phi, p, q).passed


def test_cdend_square_zero_on_fixture():
    spec = CDendComplex(induced_dendriform(fixture_pair()))
    for n in (1, 2):
        assert check_square_zero(spec, n)


@pytest.mark.parametrize("name", ["dual/adjoint", "leftunit/coadjoint", "zero1/adjoint"])
def test_phi_and_psi_chain_maps(name):
    for p in compatible_pairs(name)[:3]:
        assert verify_phi(induced_dendriform(p), rng_of(1), samples=2, max_degree=2).passed
        assert verify_psi(p, rng_of(2), samples=2, max_degree=2).passed


def test_raw_psi_anticommutes_in_odd_degrees():
    p = fixture_pair()
    cd = induced_dendriform(p)
    rng = rng_of(5)
    for n in (1, 2, 3):
        x = random_tuple_cochain(rng, n, 2, 2)
        lhs = delta_cdend(cd, psi_map(p, x, normalized=False))
        rhs = psi_map(p, delta_pair(p, x), normalized=False)
        sign = (-1) ** n
        assert all(a == b.scale(sign) for a, b in zip(lhs.parts, rhs.parts))


def test_cochain_shapes():
    with pytest.raises(ShapeError):
        DendCochain(2, np.zeros((1, 2, 2, 2), dtype=object))
    with pytest.raises(ShapeError):
        CompDendCochain(2, [DendCochain.zero(2, 2)])
    x = random_comp_cochain(rng_of(0), 2, 2)
    assert DendCochain.from_json(x.parts[0].to_json()) == x.parts[0]
