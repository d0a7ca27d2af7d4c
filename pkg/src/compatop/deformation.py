"""Finite-order deformations of compatible O-operators and of whole
compatible O-operator algebras.

A deformation of order N is a list of coefficients indexed 0..N; index 0 is
the undeformed structure.  Identities are checked order by order through
convolution sums, so an order-N object only constrains n <= N.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .algebra import Algebra, Bimodule
from .cochains import Context, MixedMap, MMap, TupleCochain, lifted_bracket
from .cohomology import PairComplex, coboundary_matrix
from .linalg import kernel_basis, rank, solve
from .linfty import COAComplex, LInftyElement, structure_element, twisted_differential
from .operators import LinOp, OperatorPair, _odefect, is_compatible_pair
from .report import CheckReport, DomainError
from .tensors import ShapeError, as_tensor, einsum, equal, flatten, zeros


# -- pair deformations -------------------------------------------------------------


@dataclass(eq=False)
class PairDeformation:
    """T1[i], T2[i] for i = 0..order, over a fixed algebra and bimodule."""

    t1: list
    t2: list

    def __post_init__(self):
        if not self.t1 or len(self.t1) != len(self.t2):
            raise ShapeError("T1 and T2 need the same nonzero number of coefficients")
        ctx = self.t1[0].ctx
        self.t1 = [t if isinstance(t, LinOp) else LinOp(ctx, t) for t in self.t1]
        self.t2 = [t if isinstance(t, LinOp) else LinOp(ctx, t) for t in self.t2]

    @classmethod
    def from_matrices(cls, ctx: Context, t1: Sequence, t2: Sequence) -> "PairDeformation":
        return cls([LinOp(ctx, m) for m in t1], [LinOp(ctx, m) for m in t2])

    @property
    def order(self) -> int:
        return len(self.t1) - 1

    @property
    def ctx(self) -> Context:
        return self.t1[0].ctx

    @property
    def base(self) -> OperatorPair:
        return OperatorPair(self.t1[0], self.t2[0])

    def term(self, i: int) -> TupleCochain:
        return TupleCochain.pair(self.t1[i].mmap, self.t2[i].mmap)

    def extended(self, t1_next, t2_next) -> "PairDeformation":
        ctx = self.ctx
        a = t1_next if isinstance(t1_next, LinOp) else LinOp(ctx, t1_next)
        b = t2_next if isinstance(t2_next, LinOp) else LinOp(ctx, t2_next)
        return PairDeformation(self.t1 + [a], self.t2 + [b])

    def to_full(self) -> "FullDeformation":
        ctx = self.ctx
        n = self.order
        pad = lambda base, shape: [base] + [zeros(shape)] * n  # noqa: E731
        return FullDeformation(
            mu=pad(ctx.mu, ctx.mu.shape),
            left=pad(ctx.left, ctx.left.shape),
            right=pad(ctx.right, ctx.right.shape),
            t1=[t.matrix for t in self.t1],
            t2=[t.matrix for t in self.t2],
        )

    def to_json(self) -> dict:
        return {"order": self.order, "T1": [t.to_json() for t in self.t1], "T2": [t.to_json() for t in self.t2]}


def _pair_families(d: PairDeformation, n: int) -> dict:
    ctx = d.ctx
    a = [t.matrix for t in d.t1]
    b = [t.matrix for t in d.t2]
    shape = (ctx.dim_m, ctx.dim_m, ctx.dim_a)
    f1, f2, f3 = zeros(shape), zeros(shape), zeros(shape)
    for i in range(n + 1):
        j = n - i
        f1 = f1 + _odefect(ctx, a[i], a[j])
        f2 = f2 + _odefect(ctx, b[i], b[j])
        f3 = f3 + _odefect(ctx, a[i], b[j]) + _odefect(ctx, b[i], a[j])
    return {"T1 convolution": f1, "T2 convolution": f2, "mixed convolution": f3}


def half_sum(d: PairDeformation, n: int) -> TupleCochain:
    """-1/2 sum over i + j = n, i, j >= 1 of [[(T1_i, T2_i), (T1_j, T2_j)]]."""
    ctx = d.ctx
    acc = TupleCochain.zero(2, ctx.dim_a, ctx.dim_m)
    for i in range(1, n):
        acc = acc + lifted_bracket(ctx, d.term(i), d.term(n - i))
    return acc.scale(Fraction(-1, 2))


def check_pair_deformation(d: PairDeformation) -> CheckReport:
    rep = CheckReport(f"order-{d.order} deformation of a compatible O-operator")
    rep.add(is_compatible_pair(d.base)).name = "base pair"
    ctx = d.ctx
    base = d.base.cochain()
    for n in range(d.order + 1):
        sub = CheckReport(f"order {n}")
        for name, t in _pair_families(d, n).items():
            sub.add_tensor_defects(name, t)
        # the same equations written with the lifted bracket
        if n == 0:
            lhs = lifted_bracket(ctx, base, base).scale(Fraction(1, 2))
        else:
            lhs = lifted_bracket(ctx, base, d.term(n))
        diff = lhs - half_sum(d, n)
        consistent = diff.is_zero() == (not sub.defects)
        sub.details["bracket form agrees"] = consistent
        if not consistent:
            sub.fail("convolution and bracket formulations disagree", (n,))
        rep.add(sub)
    return rep


@dataclass
class Infinitesimal:
    cochain: object
    is_cocycle: bool
    defect: object = None


def infinitesimal(d: PairDeformation) -> Infinitesimal:
    if d.order < 1:
        raise DomainError("an order-0 deformation has no infinitesimal")
    x = d.term(1)
    dx = lifted_bracket(d.ctx, d.base.cochain(), x)
    return Infinitesimal(x, dx.is_zero(), None if dx.is_zero() else dx)


def obstruction(d: PairDeformation) -> TupleCochain:
    """The 2-cochain -1/2 sum_(i+j=N+1, i,j>=1) [[T_i, T_j]]; asserted to be a cocycle."""
    rep = check_pair_deformation(d)
    if not rep.passed:
        raise DomainError("obstruction needs a valid deformation")
    ob = half_sum(d, d.order + 1)
    if not lifted_bracket(d.ctx, d.base.cochain(), ob).is_zero():
        raise ArithmeticError("obstruction is not a 2-cocycle; this is an implementation bug")
    return ob


@dataclass
class Extension:
    """Outcome of :func:`is_extensible`; ``witness`` is None when Ob is not a coboundary."""

    witness: Optional[PairDeformation]
    obstruction: TupleCochain
    rank_delta: int
    rank_augmented: int

    @property
    def extensible(self) -> bool:
        return self.witness is not None

    def to_json(self) -> dict:
        out = {
            "extensible": self.extensible,
            "obstruction": self.obstruction.to_json(),
            "rank_delta": self.rank_delta,
            "rank_augmented": self.rank_augmented,
        }
        if self.witness is not None:
            out["T1_next"] = self.witness.t1[-1].to_json()
            out["T2_next"] = self.witness.t2[-1].to_json()
        return out


_DELTA1_CACHE: dict = {}


def _delta1(p: OperatorPair) -> tuple:
    """(spec, delta_1 matrix, its rank), cached per base structure."""
    ctx = p.ctx
    key = tuple(tuple(flatten(t)) for t in (ctx.mu, ctx.left, ctx.right, p.t1.matrix, p.t2.matrix))
    key = (ctx.dim_a, ctx.dim_m) + key
    if key not in _DELTA1_CACHE:
        spec = PairComplex(p)
        m = coboundary_matrix(spec, 1)
        _DELTA1_CACHE[key] = (spec, m, rank(m))
    return _DELTA1_CACHE[key]


def is_extensible(d: PairDeformation) -> Extension:
    ob = obstruction(d)
    spec, delta, r0 = _delta1(d.base)
    rhs = spec.pack([q.coeffs for q in ob.parts])
    x = solve(delta, rhs)
    if x is None:
        col = delta.hstack(_column_matrix(rhs))
        return Extension(None, ob, r0, rank(col))
    t1n, t2n = spec.unpack(1, x)
    ext = d.extended(t1n, t2n)
    if not check_pair_deformation(ext).passed:
        raise ArithmeticError("solved extension failed the deformation check")
    return Extension(ext, ob, r0, r0)


def _column_matrix(vec):
    from .linalg import Matrix

    return Matrix.from_columns([list(vec)], len(vec))


@dataclass
class PreimageSpace:
    """All a0 with delta(a0) = z: ``particular`` + span(``kernel``)."""

    particular: list
    kernel: list

    def to_json(self) -> dict:
        from .tensors import format_scalar

        return {
            "particular": [format_scalar(x) for x in self.particular],
            "kernel": [[format_scalar(x) for x in v] for v in self.kernel],
        }


def coboundary_preimage(p: OperatorPair, z: TupleCochain) -> Optional[PreimageSpace]:
    if z.degree != 1:
        raise ShapeError("expected a degree-1 cochain")
    if not lifted_bracket(p.ctx, p.cochain(), z).is_zero():
        raise DomainError("not a 1-cocycle")
    spec = PairComplex(p)
    d0 = coboundary_matrix(spec, 0)
    x = solve(d0, spec.pack([q.coeffs for q in z.parts]))
    if x is None:
        return None
    return PreimageSpace(x, list(kernel_basis(d0).basis))


def delta_zero(p: OperatorPair, a0) -> TupleCochain:
    ctx = p.ctx
    a = MMap(0, as_tensor(a0, (ctx.dim_a,)))
    return lifted_bracket(ctx, p.cochain(), TupleCochain(0, [a]))


# -- equivalences ----------------------------------------------------------------


@dataclass(eq=False)
class EquivalenceData:
    """phi[i]: A -> A and psi[i]: M -> M for i >= 1 (matrices, output first).

    For pair deformations ``a0`` fixes phi[1] and psi[1]; missing higher
    terms are zero.
    """

    phi: dict = field(default_factory=dict)
    psi: dict = field(default_factory=dict)
    a0: Optional[object] = None

    def series(self, ctx: Context, order: int) -> tuple:
        ida = np.eye(ctx.dim_a, dtype=int).astype(object)
        idm = np.eye(ctx.dim_m, dtype=int).astype(object)
        phi = [as_tensor(ida)] + [zeros((ctx.dim_a, ctx.dim_a)) for _ in range(order)]
        psi = [as_tensor(idm)] + [zeros((ctx.dim_m, ctx.dim_m)) for _ in range(order)]
        for i, m in self.phi.items():
            if 1 <= int(i) <= order:
                phi[int(i)] = as_tensor(m, (ctx.dim_a, ctx.dim_a))
        for i, m in self.psi.items():
            if 1 <= int(i) <= order:
                psi[int(i)] = as_tensor(m, (ctx.dim_m, ctx.dim_m))
        if self.a0 is not None and order >= 1:
            a0 = as_tensor(self.a0, (ctx.dim_a,))
            phi[1] = einsum("i,iak->ka", a0, ctx.mu) - einsum("i,aik->ka", a0, ctx.mu)
            psi[1] = einsum("i,iuv->vu", a0, ctx.left) - einsum("i,uiv->vu", a0, ctx.right)
        return phi, psi


def _morphism_families(src: "FullDeformation", tgt: "FullDeformation", phi, psi, n: int) -> dict:
    """Order-n coefficients of the five morphism identities (lhs - rhs)."""
    mu, l, r = src.mu, src.left, src.right
    mu2, l2, r2 = tgt.mu, tgt.left, tgt.right
    out = {}
    hom = sum(einsum("abp,kp->abk", mu[j], phi[n - j]) for j in range(n + 1))
    hom = hom - sum(
        einsum("ka,lb,klc->abc", phi[j], phi[k], mu2[n - j - k]) for j in range(n + 1) for k in range(n + 1 - j)
    )
    out["phi(a.b) = phi(a).phi(b)"] = hom
    lft = sum(einsum("iup,vp->iuv", l[j], psi[n - j]) for j in range(n + 1))
    lft = lft - sum(
        einsum("ji,wu,jwv->iuv", phi[j], psi[k], l2[n - j - k]) for j in range(n + 1) for k in range(n + 1 - j)
    )
    out["psi(a.u) = phi(a).psi(u)"] = lft
    rgt = sum(einsum("uip,vp->uiv", r[j], psi[n - j]) for j in range(n + 1))
    rgt = rgt - sum(
        einsum("wu,ji,wjv->uiv", psi[j], phi[k], r2[n - j - k]) for j in range(n + 1) for k in range(n + 1 - j)
    )
    out["psi(u.a) = psi(u).phi(a)"] = rgt
    for name, s, t in (("T1", src.t1, tgt.t1), ("T2", src.t2, tgt.t2)):
        d = sum(einsum("ka,au->uk", phi[i], s[n - i]) for i in range(n + 1))
        d = d - sum(einsum("kv,vu->uk", t[i], psi[n - i]) for i in range(n + 1))
        out[f"phi o {name} = {name}' o psi"] = d
    return out


def _same_base(a: "FullDeformation", b: "FullDeformation") -> None:
    for x, y in ((a.mu[0], b.mu[0]), (a.left[0], b.left[0]), (a.right[0], b.right[0]), (a.t1[0], b.t1[0]), (a.t2[0], b.t2[0])):
        if x.shape != y.shape or not equal(x, y):
            raise ShapeError("deformations of different base structures")


def check_pair_equivalence(d: PairDeformation, d2: PairDeformation, e: EquivalenceData) -> CheckReport:
    if d.order < 1 or d2.order < 1:
        raise DomainError("equivalence needs deformations of order >= 1")
    if e.a0 is None:
        raise DomainError("pair equivalences are parametrised by a0")
    order = min(d.order, d2.order)
    rep = _equivalence_report(d.to_full(), d2.to_full(), e, order, d.ctx)
    rep.name = "equivalence of compatible O-operator deformations"
    first = CheckReport("order-1 consequence: infinitesimals differ by delta(a0)")
    diff = d.term(1) - d2.term(1) - delta_zero(d.base, e.a0)
    for k, q in enumerate(diff.parts):
        first.add_tensor_defects(f"part {k}", np.moveaxis(q.coeffs, 0, -1))
    rep.add(first)
    return rep


def _equivalence_report(src, tgt, e: EquivalenceData, order: int, ctx: Context) -> CheckReport:
    _same_base(src, tgt)
    phi, psi = e.series(ctx, order)
    rep = CheckReport("equivalence")
    for n in range(order + 1):
        sub = CheckReport(f"order {n}")
        for name, t in _morphism_families(src, tgt, phi, psi, n).items():
            sub.add_tensor_defects(name, t)
        rep.add(sub)
    return rep


# -- full deformations -----------------------------------------------------------


@dataclass(eq=False)
class FullDeformation:
    """mu[i], left[i], right[i], T1[i], T2[i] for i = 0..order (tensor conventions as in :mod:`algebra`)."""

    mu: list
    left: list
    right: list
    t1: list
    t2: list

    def __post_init__(self):
        n = len(self.mu)
        if n == 0 or any(len(x) != n for x in (self.left, self.right, self.t1, self.t2)):
            raise ShapeError("all coefficient lists need the same nonzero length")
        mu0 = as_tensor(self.mu[0])
        da = mu0.shape[0]
        dm = as_tensor(self.left[0]).shape[1]
        self.mu = [as_tensor(x, (da, da, da)) for x in self.mu]
        self.left = [as_tensor(x, (da, dm, dm)) for x in self.left]
        self.right = [as_tensor(x, (dm, da, dm)) for x in self.right]
        self.t1 = [as_tensor(x, (da, dm)) for x in self.t1]
        self.t2 = [as_tensor(x, (da, dm)) for x in self.t2]

    @property
    def order(self) -> int:
        return len(self.mu) - 1

    @property
    def ctx(self) -> Context:
        a = self.mu[0].shape[0]
        m = self.left[0].shape[1]
        return Context(Algebra(a, self.mu[0]), Bimodule(a, m, self.left[0], self.right[0]))

    @property
    def base(self) -> OperatorPair:
        ctx = self.ctx
        return OperatorPair(LinOp(ctx, self.t1[0]), LinOp(ctx, self.t2[0]))

    def to_json(self) -> dict:
        from .tensors import to_nested

        return {
            "order": self.order,
            "mu": [to_nested(x) for x in self.mu],
            "l": [to_nested(x) for x in self.left],
            "r": [to_nested(x) for x in self.right],
            "T1": [to_nested(x) for x in self.t1],
            "T2": [to_nested(x) for x in self.t2],
        }


def _op_family(mu, l, r, s, t, outer, inner, n: int):
    """sum_(i+j+k=n) mu_i(s_j u, t_k v) - outer_i(l_j(inner_k u, v) + r_j(u, inner_k v))."""
    total = 0
    for i in range(n + 1):
        for j in range(n + 1 - i):
            k = n - i - j
            total = total + einsum("au,bv,abk->uvk", s[j], t[k], mu[i])
            inner_term = einsum("au,avw->uvw", inner[k], l[j]) + einsum("uaw,av->uvw", r[j], inner[k])
            total = total - einsum("kw,uvw->uvk", outer[i], inner_term)
    return total


def _full_families(d: FullDeformation, n: int) -> dict:
    mu, l, r, t1, t2 = d.mu, d.left, d.right, d.t1, d.t2
    pairs = [(i, n - i) for i in range(n + 1)]
    out = {
        "(ab)c = a(bc)": sum(
            einsum("abp,pcq->abcq", mu[j], mu[i]) - einsum("bcp,apq->abcq", mu[j], mu[i]) for i, j in pairs
        ),
        "(ab)u = a(bu)": sum(
            einsum("abp,puv->abuv", mu[j], l[i]) - einsum("buw,awv->abuv", l[j], l[i]) for i, j in pairs
        ),
        "(au)b = a(ub)": sum(
            einsum("auw,wbv->aubv", l[j], r[i]) - einsum("ubw,awv->aubv", r[j], l[i]) for i, j in pairs
        ),
        "u(ab) = (ua)b": sum(
            einsum("abp,upv->uabv", mu[j], r[i]) - einsum("uaw,wbv->uabv", r[j], r[i]) for i, j in pairs
        ),
        "T1 O-operator": _op_family(mu, l, r, t1, t1, t1, t1, n),
        "T2 O-operator": _op_family(mu, l, r, t2, t2, t2, t2, n),
        "mixed": _op_family(mu, l, r, t1, t2, t1, t2, n) + _op_family(mu, l, r, t2, t1, t2, t1, n),
    }
    return out


def check_full_deformation(d: FullDeformation) -> CheckReport:
    rep = CheckReport(f"order-{d.order} deformation of a compatible O-operator algebra")
    for n in range(d.order + 1):
        sub = CheckReport(f"order {n}")
        for name, t in _full_families(d, n).items():
            sub.add_tensor_defects(name, t)
        rep.add(sub)
    return rep


def _coa_element(ctx: Context, mu, l, r, t1, t2) -> LInftyElement:
    v = MixedMap.from_blocks(
        ctx.dim_a, ctx.dim_m, 2,
        {"AA>A": np.moveaxis(mu, 2, 0), "AM>M": np.moveaxis(l, 2, 0), "MA>M": np.moveaxis(r, 2, 0)},
    )
    return LInftyElement(0, ctx.dim_a, ctx.dim_m, v, [MMap(1, t1), MMap(1, t2)])


def full_infinitesimal(d: FullDeformation) -> Infinitesimal:
    """((mu_1 + l_1 + r_1), (T1_1, T2_1)) as a degree-2 cochain of the cOA complex."""
    if d.order < 1:
        raise DomainError("an order-0 deformation has no infinitesimal")
    ctx = d.ctx
    x = _coa_element(ctx, d.mu[1], d.left[1], d.right[1], d.t1[1], d.t2[1])
    alpha = structure_element(ctx, [LinOp(ctx, d.t1[0]), LinOp(ctx, d.t2[0])])
    dx = twisted_differential(alpha, x, lifted=True)
    return Infinitesimal(x, dx.is_zero(), None if dx.is_zero() else dx)


def gauge_element(ctx: Context, phi1, psi1) -> LInftyElement:
    """(phi_1, psi_1) as a degree-1 cOA cochain."""
    v = MixedMap.from_blocks(ctx.dim_a, ctx.dim_m, 1, {"A>A": phi1, "M>M": psi1})
    return LInftyElement(-1, ctx.dim_a, ctx.dim_m, v, [])


def check_full_equivalence(d: FullDeformation, d2: FullDeformation, e: EquivalenceData) -> CheckReport:
    if d.order < 1 or d2.order < 1:
        raise DomainError("equivalence needs deformations of order >= 1")
    ctx = d.ctx
    order = min(d.order, d2.order)
    rep = _equivalence_report(d, d2, e, order, ctx)
    rep.name = "equivalence of compatible O-operator algebra deformations"
    phi, psi = e.series(ctx, 1)
    x = full_infinitesimal(d).cochain
    y = full_infinitesimal(d2).cochain
    alpha = structure_element(ctx, [LinOp(ctx, d.t1[0]), LinOp(ctx, d.t2[0])])
    img = twisted_differential(alpha, gauge_element(ctx, phi[1], psi[1]), lifted=True).scale(-1)
    spec = COAComplex(d.base)
    first = CheckReport("order-1 consequence: infinitesimals differ by delta_cOA(phi_1, psi_1)")
    for k, (p, q) in enumerate(zip(spec.from_element(x - y), spec.from_element(img))):
        flat = flatten(p - q)
        if any(c != 0 for c in flat):
            first.fail(f"component {k}", (k,), flat)
    rep.add(first)
    return rep


def coa_coordinates(x: LInftyElement, p: OperatorPair) -> list:
    spec = COAComplex(p)
    return spec.pack(spec.from_element(x))


def coa_from_coordinates(p: OperatorPair, degree: int, vec) -> LInftyElement:
    spec = COAComplex(p)
    return spec.to_element(degree, spec.unpack(degree, vec))


__all__ = [
    "PairDeformation",
    "FullDeformation",
    "EquivalenceData",
    "Infinitesimal",
    "Extension",
    "PreimageSpace",
    "check_pair_deformation",
    "half_sum",
    "infinitesimal",
    "obstruction",
    "is_extensible",
    "coboundary_preimage",
    "delta_zero",
    "check_pair_equivalence",
    "check_full_deformation",
    "full_infinitesimal",
    "gauge_element",
    "check_full_equivalence",
]
