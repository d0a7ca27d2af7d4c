"""Associative algebras, bimodules and their compatible variants.

Conventions (basis-indexed, output index last for products):

* ``mu[i, j, k]``     coefficient of ``e_k`` in ``e_i . e_j``
* ``left[i, u, v]``   coefficient of ``m_v`` in ``e_i . m_u``
* ``right[u, i, v]``  coefficient of ``m_v`` in ``m_u . e_i``
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .report import CheckReport
from .tensors import ShapeError, as_tensor, einsum, zeros


@dataclass(frozen=True, eq=False)
class Algebra:
    dim: int
    mu: np.ndarray

    def __post_init__(self):
        mu = as_tensor(self.mu, (self.dim,) * 3)
        object.__setattr__(self, "mu", mu)

    @classmethod
    def zero(cls, dim: int) -> "Algebra":
        return cls(dim, zeros((dim,) * 3))

    def mul(self, a, b) -> np.ndarray:
        return einsum("i,j,ijk->k", a, b, self.mu)

    def __add__(self, other: "Algebra") -> "Algebra":
        return Algebra(self.dim, self.mu + other.mu)

    def scaled(self, c) -> "Algebra":
        return Algebra(self.dim, self.mu * c)

    def unit(self, i: int) -> np.ndarray:
        v = zeros(self.dim)
        v[i] = 1
        return v


@dataclass(frozen=True, eq=False)
class Bimodule:
    algebra_dim: int
    module_dim: int
    left: np.ndarray
    right: np.ndarray

    def __post_init__(self):
        a, m = self.algebra_dim, self.module_dim
        object.__setattr__(self, "left", as_tensor(self.left, (a, m, m)))
        object.__setattr__(self, "right", as_tensor(self.right, (m, a, m)))

    @classmethod
    def zero(cls, algebra_dim: int, module_dim: int) -> "Bimodule":
        a, m = algebra_dim, module_dim
        return cls(a, m, zeros((a, m, m)), zeros((m, a, m)))

    def act_left(self, a, u) -> np.ndarray:
        return einsum("i,u,iuv->v", a, u, self.left)

    def act_right(self, u, a) -> np.ndarray:
        return einsum("u,i,uiv->v", u, a, self.right)


@dataclass(frozen=True, eq=False)
class CompatibleAlgebra:
    dim: int
    mu1: np.ndarray
    mu2: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "mu1", as_tensor(self.mu1, (self.dim,) * 3))
        object.__setattr__(self, "mu2", as_tensor(self.mu2, (self.dim,) * 3))

    @property
    def first(self) -> Algebra:
        return Algebra(self.dim, self.mu1)

    @property
    def second(self) -> Algebra:
        return Algebra(self.dim, self.mu2)

    def combination(self, lam, eta) -> Algebra:
        return Algebra(self.dim, self.mu1 * lam + self.mu2 * eta)


@dataclass(frozen=True, eq=False)
class CompatibleBimodule:
    algebra_dim: int
    module_dim: int
    l1: np.ndarray
    r1: np.ndarray
    l2: np.ndarray
    r2: np.ndarray

    def __post_init__(self):
        a, m = self.algebra_dim, self.module_dim
        for name, shape in (("l1", (a, m, m)), ("r1", (m, a, m)), ("l2", (a, m, m)), ("r2", (m, a, m))):
            object.__setattr__(self, name, as_tensor(getattr(self, name), shape))

    @property
    def first(self) -> Bimodule:
        return Bimodule(self.algebra_dim, self.module_dim, self.l1, self.r1)

    @property
    def second(self) -> Bimodule:
        return Bimodule(self.algebra_dim, self.module_dim, self.l2, self.r2)

    def combination(self, lam, eta) -> Bimodule:
        return Bimodule(
            self.algebra_dim, self.module_dim, self.l1 * lam + self.l2 * eta, self.r1 * lam + self.r2 * eta
        )


# -- identity tensors --------------------------------------------------------
# Each returns a tensor indexed by the basis triple followed by the output
# coordinate; it vanishes exactly when the identity holds.


def associator(mu, nu=None) -> np.ndarray:
    """(a mu b) nu c - a mu (b nu c); with ``nu`` given, the polarised version
    (a mu b) nu c + (a nu b) mu c - a nu (b mu c) - a mu (b nu c)."""
    if nu is None:
        return einsum("ijp,pkq->ijkq", mu, mu) - einsum("jkp,ipq->ijkq", mu, mu)
    return (
        einsum("ijp,pkq->ijkq", mu, nu)
        + einsum("ijp,pkq->ijkq", nu, mu)
        - einsum("jkp,ipq->ijkq", mu, nu)
        - einsum("jkp,ipq->ijkq", nu, mu)
    )


def bimodule_defects(mu, left, right, mu2=None, left2=None, right2=None) -> dict:
    """Defect tensors of the three bimodule axioms.

    With the second structure supplied this returns the three mixed
    compatibility identities instead.
    """
    if mu2 is None:
        return {
            "left: (ab)u = a(bu)": einsum("ijp,puv->ijuv", mu, left) - einsum("jus,isv->ijuv", left, left),
            "mixed: (au)b = a(ub)": einsum("ius,sjv->iujv", left, right) - einsum("ujs,isv->iujv", right, left),
            "right: u(ab) = (ua)b": einsum("ijp,upv->uijv", mu, right) - einsum("uis,sjv->uijv", right, right),
        }
    return {
        "mixed-left compatibility": einsum("ijp,puv->ijuv", mu, left2)
        + einsum("ijp,puv->ijuv", mu2, left)
        - einsum("jus,isv->ijuv", left2, left)
        - einsum("jus,isv->ijuv", left, left2),
        "mixed-middle compatibility": einsum("ius,sjv->iujv", left, right2)
        + einsum("ius,sjv->iujv", left2, right)
        - einsum("ujs,isv->iujv", right2, left)
        - einsum("ujs,isv->iujv", right, left2),
        "mixed-right compatibility": einsum("uis,sjv->uijv", right, right2)
        + einsum("uis,sjv->uijv", right2, right)
        - einsum("ijp,upv->uijv", mu2, right)
        - einsum("ijp,upv->uijv", mu, right2),
    }


# -- checks ------------------------------------------------------------------


def check_associative(alg: Algebra) -> CheckReport:
    rep = CheckReport("associativity")
    rep.add_tensor_defects("(ab)c = a(bc)", associator(alg.mu))
    return rep


def _check_dims(alg_dim: int, bim) -> None:
    if bim.algebra_dim != alg_dim:
        raise ShapeError(f"bimodule is over a {bim.algebra_dim}-dim algebra, algebra has dim {alg_dim}")


def check_bimodule(alg: Algebra, bim: Bimodule) -> CheckReport:
    _check_dims(alg.dim, bim)
    rep = CheckReport("bimodule")
    for name, d in bimodule_defects(alg.mu, bim.left, bim.right).items():
        rep.add_tensor_defects(name, d)
    return rep


def check_compatible_associative(c: CompatibleAlgebra) -> CheckReport:
    rep = CheckReport("compatible associative algebra")
    rep.add(check_associative(c.first)).name = "associativity of mu1"
    rep.add(check_associative(c.second)).name = "associativity of mu2"
    comp = CheckReport("compatibility (ass-comp)")
    comp.add_tensor_defects("(a.1b).2c + (a.2b).1c = a.2(b.1c) + a.1(b.2c)", associator(c.mu1, c.mu2))
    rep.add(comp)
    total = rep.add(check_associative(c.combination(1, 1)))
    total.name = "associativity of mu1 + mu2"
    return rep


def check_compatible_bimodule(c: CompatibleAlgebra, cb: CompatibleBimodule) -> CheckReport:
    _check_dims(c.dim, cb)
    rep = CheckReport("compatible bimodule")
    rep.add(check_bimodule(c.first, cb.first)).name = "bimodule over mu1"
    rep.add(check_bimodule(c.second, cb.second)).name = "bimodule over mu2"
    mixed = CheckReport("mixed compatibility")
    for name, d in bimodule_defects(c.mu1, cb.l1, cb.r1, c.mu2, cb.l2, cb.r2).items():
        mixed.add_tensor_defects(name, d)
    rep.add(mixed)
    total = rep.add(check_bimodule(c.combination(1, 1), cb.combination(1, 1)))
    total.name = "sum bimodule over mu1 + mu2"
    return rep


# -- constructions -----------------------------------------------------------


def adjoint_bimodule(alg: Algebra) -> Bimodule:
    return Bimodule(alg.dim, alg.dim, alg.mu.copy(), alg.mu.copy())


def coadjoint_bimodule(alg: Algebra) -> Bimodule:
    """Actions on the dual basis: (a.f)(b) = f(b.a) and (f.a)(b) = f(a.b)."""
    n = alg.dim
    left = zeros((n, n, n))
    right = zeros((n, n, n))
    for i in range(n):
        for u in range(n):
            for v in range(n):
                left[i, u, v] = alg.mu[v, i, u]
                right[u, i, v] = alg.mu[i, v, u]
    return Bimodule(n, n, left, right)


def adjoint_compatible_bimodule(c: CompatibleAlgebra) -> CompatibleBimodule:
    return CompatibleBimodule(c.dim, c.dim, c.mu1.copy(), c.mu1.copy(), c.mu2.copy(), c.mu2.copy())


def dual_numbers() -> Algebra:
    """k[x]/(x^2) on the basis (1, x)."""
    mu = zeros((2, 2, 2))
    mu[0, 0, 0] = 1
    mu[0, 1, 1] = 1
    mu[1, 0, 1] = 1
    return Algebra(2, mu)


def ground_field() -> Algebra:
    mu = zeros((1, 1, 1))
    mu[0, 0, 0] = 1
    return Algebra(1, mu)


def diagonal_algebra(n: int = 2) -> Algebra:
    """k x ... x k with orthogonal idempotents."""
    mu = zeros((n, n, n))
    for i in range(n):
        mu[i, i, i] = 1
    return Algebra(n, mu)
