"""Cochain complexes, their coboundary matrices and cohomology dimensions.

Every complex is described by a :class:`ComplexSpec` that knows the size of
each cochain space and how to apply the differential to a coordinate vector.
Coordinates are the concatenation, left to right, of the component tensors
flattened in C order (lexicographic multi-indices).
"""

from __future__ import annotations

import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .algebra import Algebra, Bimodule, CompatibleAlgebra, CompatibleBimodule
from .cochains import MMap, TupleCochain, derived_bracket, insert, lifted_bracket, theta
from .linalg import ContainmentError, Matrix, kernel_basis, rank
from .operators import (
    LinOp,
    OperatorPair,
    induced_compatible_algebra,
    induced_compatible_bimodule,
    is_compatible_pair,
    is_ooperator,
)
from .report import CheckReport, DomainError
from .tensors import ShapeError, equal, flatten, is_zero, random_tensor, unflatten, zeros

WORKERS_ENV = "COMPATOP_WORKERS"


# -- Hochschild ----------------------------------------------------------------


def hochschild_delta(alg: Algebra, bim: Bimodule, f) -> np.ndarray:
    """Hochschild coboundary of ``f[v, a_1, ..., a_n]`` (a map A^n -> M)."""
    f = np.asarray(f, dtype=object)
    n = f.ndim - 1
    if f.shape != (bim.module_dim,) + (alg.dim,) * n:
        raise ShapeError(f"cochain of shape {f.shape} over algebra dim {alg.dim}, module dim {bim.module_dim}")
    lmap = np.moveaxis(bim.left, 2, 0)  # [v, a, u]
    rmap = np.moveaxis(bim.right, 2, 0)  # [v, u, a]
    prod = np.moveaxis(alg.mu, 2, 0)  # [k, a, b]
    if n == 0:
        return insert(lmap, 1, f) - insert(rmap, 0, f)
    out = insert(lmap, 1, f)
    for i in range(1, n + 1):
        out = out + (-1) ** i * insert(f, i - 1, prod)
    out = out + (-1) ** (n + 1) * insert(rmap, 0, f)
    return out


# -- cochain containers ------------------------------------------------------------


@dataclass
class CAssCochain:
    """``degree`` maps A^n -> M (output axis first); degree 0 holds one element of M."""

    degree: int
    parts: list

    def __post_init__(self):
        want = 1 if self.degree == 0 else self.degree
        if len(self.parts) != want:
            raise ShapeError(f"degree-{self.degree} cochain needs {want} parts")
        self.parts = [np.asarray(p, dtype=object) for p in self.parts]

    def is_zero(self) -> bool:
        return all(is_zero(p) for p in self.parts)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CAssCochain)
            and self.degree == other.degree
            and all(equal(a, b) for a, b in zip(self.parts, other.parts))
        )


def _cass_degree0_defect(c: CompatibleAlgebra, cb: CompatibleBimodule, m) -> np.ndarray:
    return hochschild_delta(c.first, cb.first, m) - hochschild_delta(c.second, cb.second, m)


def delta_cass(c: CompatibleAlgebra, cb: CompatibleBimodule, x: CAssCochain) -> CAssCochain:
    if x.degree == 0:
        if not is_zero(_cass_degree0_defect(c, cb, x.parts[0])):
            raise DomainError("degree-0 cochain violates a.1m - m.1a = a.2m - m.2a")
        return CAssCochain(1, [hochschild_delta(c.first, cb.first, x.parts[0])])
    n = x.degree
    d1 = [hochschild_delta(c.first, cb.first, f) for f in x.parts]
    d2 = [hochschild_delta(c.second, cb.second, f) for f in x.parts]
    parts = []
    for i in range(n + 1):
        acc = zeros((cb.module_dim,) + (c.dim,) * (n + 1))
        if i < n:
            acc = acc + d1[i]
        if i >= 1:
            acc = acc + d2[i - 1]
        parts.append(acc)
    return CAssCochain(n + 1, parts)


def delta_T(t: LinOp, f: MMap) -> MMap:
    if not is_ooperator(t).passed:
        raise DomainError("delta_T needs an O-operator")
    return derived_bracket(t.ctx, t.mmap, f)


def delta_pair(p: OperatorPair, x: TupleCochain) -> TupleCochain:
    if not is_compatible_pair(p).passed:
        raise DomainError("delta_pair needs a compatible O-operator pair")
    return lifted_bracket(p.ctx, p.cochain(), x)


# -- complexes -------------------------------------------------------------------


class ComplexSpec:
    """A cochain complex given by coordinates.

    Subclasses provide :meth:`shapes` (component tensor shapes in degree n) and
    :meth:`apply` (the differential on a list of component tensors).
    """

    name = "complex"

    def shapes(self, n: int) -> list:
        raise NotImplementedError

    def apply(self, n: int, parts: list) -> list:
        raise NotImplementedError

    def degree0_constraint(self) -> Optional[Matrix]:
        """Matrix cutting out the degree-0 cochains, or None when all are allowed."""
        return None

    def dim(self, n: int) -> int:
        if n < 0:
            return 0
        return sum(int(np.prod(s)) if s else 1 for s in self.shapes(n))

    def unpack(self, n: int, vec: Sequence) -> list:
        parts, pos = [], 0
        for s in self.shapes(n):
            size = int(np.prod(s)) if s else 1
            parts.append(unflatten(vec[pos : pos + size], s))
            pos += size
        return parts

    def pack(self, parts: list) -> list:
        out = []
        for p in parts:
            out.extend(flatten(p))
        return out

    def differential(self, n: int, vec: Sequence) -> list:
        out = self.pack(self.apply(n, self.unpack(n, vec)))
        if len(out) != self.dim(n + 1):
            raise ShapeError(f"differential produced {len(out)} coordinates, expected {self.dim(n + 1)}")
        return out


class OComplex(ComplexSpec):
    name = "o"

    def __init__(self, t: LinOp):
        if not is_ooperator(t).passed:
            raise DomainError("not an O-operator")
        self.t = t
        self.ctx = t.ctx

    def shapes(self, n):
        return [(self.ctx.dim_a,) + (self.ctx.dim_m,) * n]

    def apply(self, n, parts):
        return [derived_bracket(self.ctx, self.t.mmap, MMap(n, parts[0])).coeffs]


class PairComplex(ComplexSpec):
    name = "co"

    def __init__(self, p: OperatorPair):
        if not is_compatible_pair(p).passed:
            raise DomainError("not a compatible O-operator pair")
        self.p = p
        self.ctx = p.ctx

    def shapes(self, n):
        k = 1 if n == 0 else n + 1
        return [(self.ctx.dim_a,) + (self.ctx.dim_m,) * n] * k

    def apply(self, n, parts):
        x = TupleCochain(n, [MMap(n, q) for q in parts])
        return [q.coeffs for q in lifted_bracket(self.ctx, self.p.cochain(), x).parts]


class CAssComplex(ComplexSpec):
    name = "cass"

    def __init__(self, c: CompatibleAlgebra, cb: CompatibleBimodule):
        if cb.algebra_dim != c.dim:
            raise ShapeError("compatible bimodule over an algebra of another dimension")
        self.c, self.cb = c, cb

    def shapes(self, n):
        if n == 0:
            return [(self.cb.module_dim,)]
        return [(self.cb.module_dim,) + (self.c.dim,) * n] * n

    def apply(self, n, parts):
        if n == 0:
            return [hochschild_delta(self.c.first, self.cb.first, parts[0])]
        return delta_cass(self.c, self.cb, CAssCochain(n, parts)).parts

    def degree0_constraint(self):
        cols = []
        for b in range(self.cb.module_dim):
            m = zeros(self.cb.module_dim)
            m[b] = 1
            cols.append(flatten(_cass_degree0_defect(self.c, self.cb, m)))
        return Matrix.from_columns(cols, self.c.dim * self.cb.module_dim)


# -- matrices and dimensions -------------------------------------------------------


def _workers() -> int:
    try:
        return max(1, int(os.environ.get(WORKERS_ENV, "1")))
    except ValueError:
        return 1


def _column(args) -> list:
    spec, n, b = args
    e = [0] * spec.dim(n)
    e[b] = 1
    return spec.differential(n, e)


def coboundary_matrix(spec: ComplexSpec, degree: int) -> Matrix:
    """Matrix of the differential C^degree -> C^(degree+1); column b is the image of basis vector b."""
    cols_n = spec.dim(degree)
    rows = spec.dim(degree + 1)
    if degree < 0 or cols_n == 0:
        return Matrix.zero(rows, max(cols_n, 0))
    workers = _workers()
    jobs = [(spec, degree, b) for b in range(cols_n)]
    if workers > 1 and cols_n > 8:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            columns = list(pool.map(_column, jobs, chunksize=max(1, cols_n // (4 * workers))))
    else:
        columns = [_column(j) for j in jobs]
    return Matrix.from_columns(columns, rows)


def _cycles_domain(spec: ComplexSpec, n: int) -> Optional[Matrix]:
    """Columns spanning the admissible degree-n cochains (None = everything)."""
    if n != 0:
        return None
    k = spec.degree0_constraint()
    if k is None:
        return None
    basis = kernel_basis(k).basis
    return Matrix.from_columns(basis, spec.dim(0)) if basis else Matrix.zero(spec.dim(0), 0)


@dataclass
class CohomologyResult:
    degree: int
    dim_cocycles: int
    dim_coboundaries: int

    @property
    def cohomology_dim(self) -> int:
        return self.dim_cocycles - self.dim_coboundaries

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "dim_cocycles": self.dim_cocycles,
            "dim_coboundaries": self.dim_coboundaries,
            "cohomology_dim": self.cohomology_dim,
        }


def cohomology(spec: ComplexSpec, degree: int, matrices: Optional[dict] = None) -> CohomologyResult:
    """Dimensions of cocycles, coboundaries and cohomology in one degree.

    ``matrices`` may carry already assembled coboundary matrices keyed by degree.
    """
    if degree < 0:
        raise ValueError("negative degree")
    matrices = {} if matrices is None else matrices

    def mat(k):
        if k not in matrices:
            matrices[k] = coboundary_matrix(spec, k)
        return matrices[k]

    d_n = mat(degree)
    dom = _cycles_domain(spec, degree)
    if dom is not None:
        # cocycles inside the admissible subspace
        stacked = d_n.vstack(spec.degree0_constraint())
        z = spec.dim(degree) - rank(stacked)
    else:
        z = spec.dim(degree) - rank(d_n)
    if degree == 0:
        b = 0
    else:
        d_prev = mat(degree - 1)
        dom_prev = _cycles_domain(spec, degree - 1)
        if dom_prev is not None:
            d_prev = d_prev @ dom_prev
        if not (d_n @ d_prev).is_zero():
            raise ContainmentError(f"d o d != 0 into degree {degree + 1} for complex {spec.name}")
        b = rank(d_prev)
    if b > z:
        raise ContainmentError("more coboundaries than cocycles")
    return CohomologyResult(degree, z, b)


def cohomology_dim(spec: ComplexSpec, degree: int) -> int:
    return cohomology(spec, degree).cohomology_dim


def check_square_zero(spec: ComplexSpec, degree: int) -> bool:
    """Matrix-level d_(n+1) o d_n = 0."""
    d0 = coboundary_matrix(spec, degree)
    dom = _cycles_domain(spec, degree)
    if dom is not None:
        d0 = d0 @ dom
    d1 = coboundary_matrix(spec, degree + 1)
    return (d1 @ d0).is_zero()


# -- consistency checks ------------------------------------------------------------


def induced_cass_complex(p: OperatorPair) -> CAssComplex:
    return CAssComplex(induced_compatible_algebra(p), induced_compatible_bimodule(p))


def verify_induced_iso(
    p: OperatorPair, rng: Optional[random.Random] = None, samples: int = 3, max_arity: int = 3, dims_up_to: int = 2
) -> CheckReport:
    """Differential identity between the operator and induced-algebra complexes,
    followed by a comparison of cohomology dimensions."""
    if not is_compatible_pair(p).passed:
        raise DomainError("not a compatible O-operator pair")
    rng = rng or random.Random(0)
    ctx = p.ctx
    c, cb = induced_compatible_algebra(p), induced_compatible_bimodule(p)
    rep = CheckReport("induced compatible associative cohomology")
    ident = CheckReport("differential identity")
    for n in range(max_arity + 1):
        for _ in range(samples):
            f = MMap(n, random_tensor(rng, (ctx.dim_a,) + (ctx.dim_m,) * n))
            for k, (t, alg, bim) in enumerate(((p.t1, c.first, cb.first), (p.t2, c.second, cb.second)), start=1):
                lhs = hochschild_delta(alg, bim, f.coeffs)
                rhs = derived_bracket(ctx, t.mmap, f).coeffs * (-1) ** n
                if not equal(lhs, rhs):
                    ident.fail(f"delta{k}_Ass(f) = (-1)^n [T{k}, f] at arity {n}", (n,), flatten(lhs - rhs))
    rep.add(ident)
    dims = CheckReport("cohomology dimensions agree")
    pair_spec, cass_spec = PairComplex(p), CAssComplex(c, cb)
    table = []
    for n in range(dims_up_to + 1):
        a = cohomology(pair_spec, n).cohomology_dim
        b = cohomology(cass_spec, n).cohomology_dim
        table.append({"degree": n, "operator": a, "induced": b})
        if a != b:
            dims.fail(f"dim H^{n} differs: {a} vs {b}", (n,), (a, b))
    dims.details["dimensions"] = table
    rep.add(dims)
    return rep


def random_tuple_cochain(rng: random.Random, degree: int, dim_a: int, dim_m: int) -> TupleCochain:
    k = 1 if degree == 0 else degree + 1
    return TupleCochain(
        degree, [MMap(degree, random_tensor(rng, (dim_a,) + (dim_m,) * degree)) for _ in range(k)]
    )


def verify_theta_chain_map(
    p: OperatorPair, rng: Optional[random.Random] = None, samples: int = 3, max_degree: int = 3
) -> CheckReport:
    if not is_compatible_pair(p).passed:
        raise DomainError("not a compatible O-operator pair")
    rng = rng or random.Random(0)
    ctx = p.ctx
    total = p.total.mmap
    rep = CheckReport("theta is a chain map")
    for n in range(max_degree + 1):
        for _ in range(samples):
            x = random_tuple_cochain(rng, n, ctx.dim_a, ctx.dim_m)
            lhs = theta(lifted_bracket(ctx, p.cochain(), x))
            rhs = derived_bracket(ctx, total, theta(x))
            if not lhs == rhs:
                rep.fail(f"theta(delta x) = delta_tot(theta x) in degree {n}", (n,), flatten((lhs - rhs).coeffs))
    return rep
