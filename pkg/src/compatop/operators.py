"""O-operators, compatible pairs, Yang-Baxter tensors and Nijenhuis elements.

A linear map T: M -> A is stored as its matrix ``T[k, u]`` (coefficient of
``e_k`` in ``T(m_u)``).  A two-tensor ``r`` in A (x) A is the matrix
``r[i, j]`` of ``sum r[i, j] e_i (x) e_j``.
"""

from __future__ import annotations

import numpy as np

from .algebra import (
    Algebra,
    CompatibleAlgebra,
    CompatibleBimodule,
    adjoint_bimodule,
    coadjoint_bimodule,
)
from .cochains import Context, MMap, TupleCochain
from .report import CheckReport, DomainError
from .tensors import ShapeError, as_tensor, canon, einsum, equal, is_zero, to_nested


class LinOp:
    """A linear map M -> A over a fixed context."""

    __slots__ = ("ctx", "matrix")

    def __init__(self, ctx: Context, matrix):
        self.ctx = ctx
        self.matrix = as_tensor(matrix, (ctx.dim_a, ctx.dim_m))

    @classmethod
    def zero(cls, ctx: Context) -> "LinOp":
        return cls(ctx, np.zeros((ctx.dim_a, ctx.dim_m), dtype=int).tolist())

    @property
    def mmap(self) -> MMap:
        return MMap(1, self.matrix)

    def __call__(self, u) -> np.ndarray:
        return einsum("ku,u->k", self.matrix, u)

    def __add__(self, other: "LinOp") -> "LinOp":
        _same_ctx(self, other)
        return LinOp(self.ctx, self.matrix + other.matrix)

    def __sub__(self, other: "LinOp") -> "LinOp":
        _same_ctx(self, other)
        return LinOp(self.ctx, self.matrix - other.matrix)

    def __neg__(self) -> "LinOp":
        return LinOp(self.ctx, -self.matrix)

    def scale(self, c) -> "LinOp":
        return LinOp(self.ctx, self.matrix * canon(c))

    def __rmul__(self, c) -> "LinOp":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, LinOp) and equal(self.matrix, other.matrix)

    __hash__ = None

    def to_json(self) -> list:
        return to_nested(self.matrix)

    def __repr__(self) -> str:
        return f"LinOp({to_nested(self.matrix)})"


class OperatorPair:
    __slots__ = ("t1", "t2")

    def __init__(self, t1: LinOp, t2: LinOp):
        _same_ctx(t1, t2)
        self.t1, self.t2 = t1, t2

    @property
    def ctx(self) -> Context:
        return self.t1.ctx

    @property
    def total(self) -> LinOp:
        return self.t1 + self.t2

    def cochain(self) -> TupleCochain:
        return TupleCochain.pair(self.t1.mmap, self.t2.mmap)

    def __repr__(self) -> str:
        return f"OperatorPair({self.t1!r}, {self.t2!r})"


def _same_ctx(s: LinOp, t: LinOp) -> None:
    if s.ctx is not t.ctx and (
        (s.ctx.dim_a, s.ctx.dim_m) != (t.ctx.dim_a, t.ctx.dim_m)
        or not equal(s.ctx.mu, t.ctx.mu)
        or not equal(s.ctx.left, t.ctx.left)
        or not equal(s.ctx.right, t.ctx.right)
    ):
        raise ShapeError("operators live over different contexts")


# -- O-operator identities --------------------------------------------------------


def _odefect(ctx: Context, s, t) -> np.ndarray:
    """``(u, v) -> S(u).T(v) - S(T(u).v + u.T(v))`` as a tensor ``[u, v, k]``."""
    prod = einsum("au,bv,abk->uvk", s, t, ctx.mu)
    inner = einsum("au,avw->uvw", t, ctx.left) + einsum("uaw,av->uvw", ctx.right, t)
    return prod - einsum("kw,uvw->uvk", s, inner)


def ooperator_defect(t: LinOp) -> np.ndarray:
    return _odefect(t.ctx, t.matrix, t.matrix)


def mixed_defect(p: OperatorPair) -> np.ndarray:
    ctx = p.ctx
    return _odefect(ctx, p.t1.matrix, p.t2.matrix) + _odefect(ctx, p.t2.matrix, p.t1.matrix)


def is_ooperator(t: LinOp) -> CheckReport:
    rep = CheckReport("O-operator")
    rep.add_tensor_defects("T(u)T(v) = T(T(u)v + uT(v))", ooperator_defect(t))
    return rep


def is_compatible_pair(p: OperatorPair) -> CheckReport:
    rep = CheckReport("compatible O-operator pair")
    rep.add(is_ooperator(p.t1)).name = "T1 is an O-operator"
    rep.add(is_ooperator(p.t2)).name = "T2 is an O-operator"
    mixed = CheckReport("mixed identity")
    mixed.add_tensor_defects("T1(u)T2(v) + T2(u)T1(v) = T1(T2(u)v + uT2(v)) + T2(T1(u)v + uT1(v))", mixed_defect(p))
    rep.add(mixed)
    rep.add(is_ooperator(p.total)).name = "T1 + T2 is an O-operator"
    return rep


def _require_compatible(p: OperatorPair) -> None:
    rep = is_compatible_pair(p)
    if not rep.passed:
        raise DomainError(f"not a compatible O-operator pair ({len(rep.all_defects())} defects)")


# -- induced structures -----------------------------------------------------------


def _star(ctx: Context, t) -> np.ndarray:
    """u * v = T(u).v + u.T(v) on M, as ``[u, v, w]``."""
    return einsum("au,avw->uvw", t, ctx.left) + einsum("uaw,av->uvw", ctx.right, t)


def _induced_actions(ctx: Context, t) -> tuple:
    """Actions of (M, *) on A: ``u > a = T(u).a - T(u.a)`` and ``a < u = a.T(u) - T(a.u)``."""
    left = einsum("au,aij->uij", t, ctx.mu) - einsum("uiw,jw->uij", ctx.right, t)
    right = einsum("iaj,au->iuj", ctx.mu, t) - einsum("iuw,jw->iuj", ctx.left, t)
    return left, right


def induced_compatible_algebra(p: OperatorPair) -> CompatibleAlgebra:
    _require_compatible(p)
    ctx = p.ctx
    return CompatibleAlgebra(ctx.dim_m, _star(ctx, p.t1.matrix), _star(ctx, p.t2.matrix))


def induced_compatible_bimodule(p: OperatorPair) -> CompatibleBimodule:
    """A as a compatible bimodule over the induced algebra on M."""
    _require_compatible(p)
    ctx = p.ctx
    l1, r1 = _induced_actions(ctx, p.t1.matrix)
    l2, r2 = _induced_actions(ctx, p.t2.matrix)
    return CompatibleBimodule(ctx.dim_m, ctx.dim_a, l1, r1, l2, r2)


def check_morphism(phi, psi, source: OperatorPair, target: OperatorPair) -> CheckReport:
    """(phi, psi) with phi: A -> A and psi: M -> M, matrices acting on columns."""
    ctx = source.ctx
    _same_ctx(source.t1, target.t1)
    phi = as_tensor(phi, (ctx.dim_a, ctx.dim_a))
    psi = as_tensor(psi, (ctx.dim_m, ctx.dim_m))
    rep = CheckReport("morphism of compatible O-operators")
    hom = einsum("abp,kp->abk", ctx.mu, phi) - einsum("ka,lb,klc->abc", phi, phi, ctx.mu)
    rep.add_tensor_defects("phi(ab) = phi(a)phi(b)", hom)
    for name, s, t in (("T1", source.t1, target.t1), ("T2", source.t2, target.t2)):
        d = einsum("ka,au->uk", phi, s.matrix) - einsum("kv,vu->uk", t.matrix, psi)
        rep.add_tensor_defects(f"phi o {name} = {name}' o psi", d)
    lft = einsum("iup,vp->iuv", ctx.left, psi) - einsum("ji,wu,jwv->iuv", phi, psi, ctx.left)
    rep.add_tensor_defects("psi(a.u) = phi(a).psi(u)", lft)
    rgt = einsum("uip,vp->uiv", ctx.right, psi) - einsum("wu,ji,wjv->uiv", psi, phi, ctx.right)
    rep.add_tensor_defects("psi(u.a) = psi(u).phi(a)", rgt)
    return rep


# -- Yang-Baxter tensors ---------------------------------------------------------


def _aybe_terms(mu, r, s) -> np.ndarray:
    """Bilinear AYBE expression with ``r`` in the unmarked and ``s`` in the
    marked slots, as a tensor ``[p, q, s]`` on A (x) A (x) A."""
    t1 = einsum("is,kq,ikp->pqs", r, s, mu)
    t2 = einsum("pj,ks,jkq->pqs", r, s, mu)
    t3 = einsum("qj,pl,jls->pqs", r, s, mu)
    return t1 - t2 + t3


def _two_tensor(alg: Algebra, r) -> np.ndarray:
    return as_tensor(r, (alg.dim, alg.dim))


def aybe_defect(alg: Algebra, r) -> np.ndarray:
    r = _two_tensor(alg, r)
    return _aybe_terms(alg.mu, r, r)


def aybe_check(alg: Algebra, r) -> CheckReport:
    rep = CheckReport("associative Yang-Baxter equation")
    rep.add_tensor_defects("r13 r12 - r12 r23 + r23 r13 = 0", aybe_defect(alg, r).reshape(1, -1))
    rep.details["defect_tensor"] = to_nested(aybe_defect(alg, r))
    return rep


def compatible_aybe_check(alg: Algebra, r1, r2) -> CheckReport:
    r1, r2 = _two_tensor(alg, r1), _two_tensor(alg, r2)
    rep = CheckReport("compatible associative Yang-Baxter equation")
    rep.add(aybe_check(alg, r1)).name = "r1 solves AYBE"
    rep.add(aybe_check(alg, r2)).name = "r2 solves AYBE"
    mixed = _aybe_terms(alg.mu, r1, r2) + _aybe_terms(alg.mu, r2, r1)
    sub = CheckReport("mixed identity")
    sub.add_tensor_defects("six-term mixed identity", mixed.reshape(1, -1))
    rep.add(sub)
    return rep


def rb_from_tensor(alg: Algebra, r) -> LinOp:
    """a -> sum r[i, j] e_i . a . e_j on the adjoint bimodule."""
    r = _two_tensor(alg, r)
    mat = einsum("ij,iap,pjc->ca", r, alg.mu, alg.mu)
    return LinOp(Context(alg, adjoint_bimodule(alg)), mat)


def sharp(alg: Algebra, r) -> LinOp:
    """f -> sum f(r[2]) r[1] on the coadjoint bimodule (dual basis of A)."""
    r = _two_tensor(alg, r)
    return LinOp(Context(alg, coadjoint_bimodule(alg)), r.copy())


def is_skew(r) -> bool:
    r = as_tensor(r)
    return is_zero(r + r.T)


# -- Nijenhuis elements ------------------------------------------------------------


def _nijenhuis_single(a0, t: LinOp, common: bool = True) -> CheckReport:
    ctx = t.ctx
    a0 = as_tensor(a0, (ctx.dim_a,))
    rep = CheckReport("Nijenhuis element")
    ad_a = einsum("i,iak->ka", a0, ctx.mu) - einsum("i,aik->ka", a0, ctx.mu)  # a -> a0 a - a a0
    ad_m = einsum("i,iuv->vu", a0, ctx.left) - einsum("i,uiv->vu", a0, ctx.right)  # u -> a0 u - u a0
    if common:
        d1 = einsum("pa,qb,pqk->abk", ad_a, ad_a, ctx.mu)
        rep.add_tensor_defects("(a0 a - a a0)(a0 b - b a0) = 0", d1)
        d4 = einsum("pa,wu,pwv->auv", ad_a, ad_m, ctx.left)
        rep.add_tensor_defects("(a0 a - a a0).(a0 u - u a0) = 0", d4)
        d5 = einsum("wu,pa,wpv->uav", ad_m, ad_a, ctx.right)
        rep.add_tensor_defects("(a0 u - u a0).(a0 a - a a0) = 0", d5)
    # l_T(u, a0) - r_T(a0, u) = T(u) a0 - T(u a0) - a0 T(u) + T(a0 u) = -ad(T(u)) + T(ad_m u)
    x = -einsum("ka,au->ku", ad_a, t.matrix) + einsum("kw,wu->ku", t.matrix, ad_m)
    d2 = einsum("ka,au->uk", ad_a, x)
    rep.add_tensor_defects("a0 X(u) - X(u) a0 = 0, X(u) = l_T(u, a0) - r_T(a0, u)", d2)
    return rep


def nijenhuis_check(a0, p: OperatorPair) -> CheckReport:
    rep = CheckReport("Nijenhuis element of a compatible pair")
    rep.add(_nijenhuis_single(a0, p.t1, common=True)).name = "common identities and T1"
    rep.add(_nijenhuis_single(a0, p.t2, common=False)).name = "T2 identity"
    return rep


def nijenhuis_single_check(a0, t: LinOp) -> CheckReport:
    """The conditions for a single O-operator."""
    return _nijenhuis_single(a0, t, common=True)
