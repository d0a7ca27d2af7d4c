from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from catalog import ALGEBRAS, compatible_pairs, contexts, fixture_pair, matrices, ooperators
from strategies import rng_of, seeds
from compatop.algebra import check_bimodule, check_compatible_associative, check_compatible_bimodule, dual_numbers
from compatop.cochains import MMap, TupleCochain, derived_bracket, lifted_bracket
from compatop.deformation import delta_zero
from compatop.linfty import mc_defect, structure_element
from compatop.operators import (
    LinOp,
    OperatorPair,
    aybe_check,
    check_morphism,
    compatible_aybe_check,
    induced_compatible_algebra,
    induced_compatible_bimodule,
    is_compatible_pair,
    is_ooperator,
    is_skew,
    nijenhuis_check,
    rb_from_tensor,
    sharp,
)
from compatop.report import DomainError
from compatop.tensors import random_tensor

CONTEXTS = dict(contexts())
SMALL = [n for n, c in CONTEXTS.items() if c.dim_a == 1]
CURVED = ["dual/adjoint", "dual/coadjoint", "leftunit/adjoint", "leftunit/coadjoint", "kxk/adjoint"]


@pytest.mark.parametrize("name", SMALL + CURVED)
def test_ooperator_iff_bracket_square_vanishes(name):
    ctx = CONTEXTS[name]
    for m in matrices(ctx.dim_a, ctx.dim_m):
        t = LinOp(ctx, m)
        assert is_ooperator(t).passed == derived_bracket(ctx, t.mmap, t.mmap).is_zero()


@pytest.mark.parametrize("name", SMALL + CURVED)
def test_compatible_iff_lifted_square_vanishes(name):
    ctx = CONTEXTS[name]
    ops = ooperators(name)
    cands = [(a, b) for a in ops for b in ops]
    cands += [(m, next(matrices(ctx.dim_a, ctx.dim_m))) for m in list(matrices(ctx.dim_a, ctx.dim_m))[::7]]
    for a, b in cands[:120] if len(cands) > 120 else cands:
        p = OperatorPair(LinOp(ctx, a), LinOp(ctx, b))
        sq = lifted_bracket(ctx, p.cochain(), p.cochain()).is_zero()
        assert is_compatible_pair(p).passed == sq
        assert mc_defect(structure_element(ctx, [p.t1, p.t2])).is_zero() == sq


@pytest.mark.parametrize("name", CURVED)
def test_single_operator_mc(name):
    ctx = CONTEXTS[name]
    for m in list(matrices(ctx.dim_a, ctx.dim_m))[::5]:
        t = LinOp(ctx, m)
        assert mc_defect(structure_element(ctx, [t])).is_zero() == is_ooperator(t).passed


def test_compatible_pair_defects_are_named():
    alg = dual_numbers()
    from compatop.algebra import adjoint_bimodule
    from compatop.cochains import Context

    ctx = Context(alg, adjoint_bimodule(alg))
    p = OperatorPair(LinOp(ctx, [[1, 0], [0, 0]]), LinOp(ctx, [[0, 0], [1, 0]]))
    rep = is_compatible_pair(p)
    assert not rep.passed
    names = [s.name for s in rep.subreports if not s.passed]
    assert "T1 is an O-operator" in names


@pytest.mark.parametrize("name", CURVED + SMALL)
def test_induced_structures(name):
    ctx = CONTEXTS[name]
    for p in compatible_pairs(name)[:40]:
        c = induced_compatible_algebra(p)
        assert check_compatible_associative(c).passed
        assert check_compatible_bimodule(c, induced_compatible_bimodule(p)).passed
    del ctx


def test_induced_structures_reject_bad_pairs():
    p = fixture_pair()
    bad = OperatorPair(p.t1, LinOp(p.ctx, [[1, 0], [0, 0]]))
    with pytest.raises(DomainError):
        induced_compatible_algebra(bad)


def test_fixture_is_compatible_with_zero_sum():
    p = fixture_pair()
    assert is_compatible_pair(p).passed
    assert p.total == LinOp.zero(p.ctx)


def test_transport_along_automorphism():
    # x -> c x is an automorphism of the dual numbers; conjugating a pair by it gives a morphism
    p = fixture_pair()
    for c in (2, -1, Fraction(1, 3)):
        phi = np.array([[1, 0], [0, c]], dtype=object)
        inv = np.array([[1, 0], [0, Fraction(1) / c]], dtype=object)
        q = OperatorPair(*(LinOp(p.ctx, phi.dot(t.matrix).dot(inv)) for t in (p.t1, p.t2)))
        assert is_compatible_pair(q).passed
        assert check_morphism(phi, phi, p, q).passed
    assert not check_morphism(np.array([[1, 0], [0, 2]], dtype=object), np.eye(2, dtype=int), p, p).passed


# -- Yang-Baxter --------------------------------------------------------------------


@pytest.mark.parametrize("aname", ["dual", "kxk", "leftunit", "zero2"])
def test_aybe_solutions_give_ooperators(aname):
    alg = ALGEBRAS[aname]()
    sols = [r for r in matrices(2, 2) if aybe_check(alg, r).passed]
    assert sols
    for r in sols:
        assert is_ooperator(rb_from_tensor(alg, r)).passed
        if is_skew(r):
            assert is_ooperator(sharp(alg, r)).passed
    for r1 in sols:
        for r2 in sols[:12]:
            if compatible_aybe_check(alg, r1, r2).passed:
                p = OperatorPair(rb_from_tensor(alg, r1), rb_from_tensor(alg, r2))
                assert is_compatible_pair(p).passed


@pytest.mark.parametrize("aname", ["dual", "kxk", "leftunit"])
def test_negated_tensor_pairs(aname):
    alg = ALGEBRAS[aname]()
    for r in matrices(2, 2):
        if aybe_check(alg, r).passed:
            assert compatible_aybe_check(alg, r, -r).passed


def _aybe_pointwise(mu, r):
    """r13 r12 - r12 r23 + r23 r13 expanded on basis tensors."""
    d = r.shape[0]
    out = np.zeros((d, d, d), dtype=object)
    pairs = [(i, j, r[i, j]) for i in range(d) for j in range(d) if r[i, j]]
    for i, j, a in pairs:
        for k, l, b in pairs:
            for p in range(d):
                out[p, l, j] += a * b * mu[i, k, p]
                out[i, p, l] -= a * b * mu[j, k, p]
                out[k, i, p] += a * b * mu[j, l, p]
    return out


@given(seeds, st.sampled_from(["dual", "kxk", "leftunit"]))
@settings(max_examples=40)
def test_aybe_defect_matches_expansion(seed, aname):
    from compatop.operators import aybe_defect
    from compatop.tensors import equal

    alg = ALGEBRAS[aname]()
    r = random_tensor(rng_of(seed), (2, 2))
    assert equal(aybe_defect(alg, r), _aybe_pointwise(alg.mu, r))


# -- Nijenhuis elements --------------------------------------------------------------


def _is_trivial_deformation(p, a0) -> bool:
    d = delta_zero(p, a0)
    for t in (1, 2, Fraction(-1, 3)):
        q = OperatorPair(p.t1 + LinOp(p.ctx, d.parts[0].coeffs).scale(t), p.t2 + LinOp(p.ctx, d.parts[1].coeffs).scale(t))
        if not is_compatible_pair(q).passed:
            return False
    return True


@pytest.mark.parametrize("name", ["dual/adjoint", "leftunit/adjoint", "leftunit/coadjoint", "kxk/adjoint"])
def test_nijenhuis_elements_give_trivial_deformations(name):
    ctx = CONTEXTS[name]
    hits = 0
    for p in compatible_pairs(name)[:25]:
        for a0 in matrices(1, ctx.dim_a):
            a0 = a0.reshape(-1)
            if nijenhuis_check(a0, p).passed:
                hits += 1
                assert _is_trivial_deformation(p, a0)
    assert hits


@given(seeds)
@settings(max_examples=30)
def test_lifted_bracket_with_zero_cochain(seed):
    p = fixture_pair()
    rng = rng_of(seed)
    a = MMap(0, random_tensor(rng, (2,)))
    x = lifted_bracket(p.ctx, p.cochain(), TupleCochain(0, [a]))
    assert x == delta_zero(p, a.coeffs)
    assert lifted_bracket(p.ctx, p.cochain(), x).is_zero()


def test_bimodule_of_catalog_is_valid():
    for name, ctx in contexts():
        assert check_bimodule(ctx.algebra, ctx.bimodule).passed, name
