import json
from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from catalog import compatible_pairs, contexts, fixture_pair
from strategies import catalog_contexts, rng_of, seeds
from compatop.cohomology import (
    CAssComplex,
    OComplex,
    PairComplex,
    check_square_zero,
    cohomology,
    coboundary_matrix,
    hochschild_delta,
    induced_cass_complex,
    verify_induced_iso,
    verify_theta_chain_map,
)
from compatop.operators import LinOp, OperatorPair, induced_compatible_algebra, induced_compatible_bimodule
from compatop.report import DomainError
from compatop.tensors import equal, random_tensor

PINS = json.loads((Path(__file__).parent / "data" / "pins.json").read_text())
CONTEXTS = dict(contexts())


@given(catalog_contexts, seeds, st.integers(0, 3))
def test_hochschild_matches_pointwise(ctx, seed, n):
    f = random_tensor(rng_of(seed), (ctx.dim_m,) + (ctx.dim_a,) * n)
    got = hochschild_delta(ctx.algebra, ctx.bimodule, f)
    assert equal(got, oracles.hochschild(ctx.mu, ctx.left, ctx.right, f))


@given(catalog_contexts, seeds, st.integers(0, 2))
@settings(max_examples=40)
def test_hochschild_squares_to_zero(ctx, seed, n):
    f = random_tensor(rng_of(seed), (ctx.dim_m,) + (ctx.dim_a,) * n)
    d = hochschild_delta(ctx.algebra, ctx.bimodule, f)
    assert not hochschild_delta(ctx.algebra, ctx.bimodule, d).any()


def _sample_pairs(name, k=6):
    ps = compatible_pairs(name)
    step = max(1, len(ps) // k)
    return list(ps[::step])[:k]


@pytest.mark.parametrize("name", ["dual/adjoint", "leftunit/coadjoint", "leftunit/adjoint", "zero1/trivial", "k/adjoint"])
def test_square_zero_matrices(name):
    for p in _sample_pairs(name, 3):
        specs = [OComplex(p.t1), PairComplex(p), induced_cass_complex(p)]
        for spec in specs:
            for n in range(3):
                assert check_square_zero(spec, n), (spec.name, n)


@pytest.mark.parametrize("name", ["k/adjoint", "zero1/adjoint", "kxk/trivial", "dual/adjoint", "leftunit/coadjoint"])
def test_pair_dims_match_oracle(name):
    for p in _sample_pairs(name, 2):
        st_ = oracles.Structure.of(p.ctx)
        want = oracles.pair_cohomology_dims(st_, p.t1.matrix, p.t2.matrix, [0, 1])
        got = [cohomology(PairComplex(p), n).cohomology_dim for n in (0, 1)]
        assert got == want


@pytest.mark.parametrize("name", ["k/adjoint", "zero1/trivial", "dual/adjoint", "leftunit/coadjoint"])
def test_cass_dims_match_oracle(name):
    for p in _sample_pairs(name, 2):
        c, cb = induced_compatible_algebra(p), induced_compatible_bimodule(p)
        want = oracles.cass_cohomology_dims(c.mu1, c.mu2, cb.l1, cb.r1, cb.l2, cb.r2, [0, 1])
        got = [cohomology(CAssComplex(c, cb), n).cohomology_dim for n in (0, 1)]
        assert got == want


def test_fixture_pins():
    p = fixture_pair()
    want = PINS["cohomology_dims"]
    assert [cohomology(PairComplex(p), n).cohomology_dim for n in PINS["degrees"]] == want["co"]
    assert [cohomology(induced_cass_complex(p), n).cohomology_dim for n in PINS["degrees"]] == want["cass"]


def test_zero_pair_degree_zero_is_whole_algebra():
    for name, ctx in contexts():
        z = LinOp.zero(ctx)
        r = cohomology(PairComplex(OperatorPair(z, z)), 0)
        # with T = 0 the differential of a0 is ad-like: [pi, a0] restricted to M -> A vanishes
        assert r.dim_cocycles == ctx.dim_a, name


def test_results_are_consistent():
    p = fixture_pair()
    mats = {}
    rows = [cohomology(PairComplex(p), n, mats) for n in range(3)]
    assert [r.degree for r in rows] == [0, 1, 2]
    assert all(r.dim_coboundaries <= r.dim_cocycles for r in rows)
    assert rows[1].to_json()["cohomology_dim"] == rows[1].cohomology_dim
    assert set(mats) == {0, 1, 2}
    assert (mats[0].rows, mats[0].cols) == (PairComplex(p).dim(1), PairComplex(p).dim(0))
    assert coboundary_matrix(PairComplex(p), 1) == mats[1]


def test_complexes_reject_invalid_operators():
    p = fixture_pair()
    bad = LinOp(p.ctx, [[1, 0], [0, 0]])
    with pytest.raises(DomainError):
        OComplex(bad)
    with pytest.raises(DomainError):
        PairComplex(OperatorPair(bad, p.t2))


@pytest.mark.parametrize("name", ["dual/adjoint", "leftunit/coadjoint", "kxk/adjoint", "zero1/adjoint"])
def test_theta_chain_map_and_differential_identity(name):
    for p in _sample_pairs(name, 3):
        assert verify_theta_chain_map(p, samples=2, max_degree=2).passed
        rep = verify_induced_iso(p, samples=2, max_arity=2, dims_up_to=0)
        assert rep.subreports[0].passed


def test_pins_recomputed_by_reference_path():
    import make_pins

    assert make_pins.compute()["cohomology_dims"] == PINS["cohomology_dims"]
