"""Compatible dendriform algebras and their labelled-operad cochain calculus.

Products follow the algebra convention ``prec[x, y, k]`` (output index last).
A labelled cochain of arity n is a tensor ``f[r, k, x_1, ..., x_n]``: label
axis first (0-based storage of the symbols [1]..[n]), then the output index,
then the inputs.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .algebra import CompatibleAlgebra, adjoint_compatible_bimodule, check_compatible_associative
from .cochains import TupleCochain, insert
from .cohomology import CAssCochain, ComplexSpec, delta_cass, delta_pair
from .operators import OperatorPair, _require_compatible, check_morphism
from .report import CheckReport, DomainError
from .tensors import ShapeError, as_tensor, einsum, equal, is_zero, random_tensor, zeros


# -- structures --------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DendriformAlgebra:
    dim: int
    prec: np.ndarray
    succ: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "prec", as_tensor(self.prec, (self.dim,) * 3))
        object.__setattr__(self, "succ", as_tensor(self.succ, (self.dim,) * 3))


@dataclass(frozen=True, eq=False)
class CompatibleDendriform:
    dim: int
    prec1: np.ndarray
    succ1: np.ndarray
    prec2: np.ndarray
    succ2: np.ndarray

    def __post_init__(self):
        for name in ("prec1", "succ1", "prec2", "succ2"):
            object.__setattr__(self, name, as_tensor(getattr(self, name), (self.dim,) * 3))

    @property
    def first(self) -> DendriformAlgebra:
        return DendriformAlgebra(self.dim, self.prec1, self.succ1)

    @property
    def second(self) -> DendriformAlgebra:
        return DendriformAlgebra(self.dim, self.prec2, self.succ2)

    def combination(self, lam, eta) -> DendriformAlgebra:
        return DendriformAlgebra(
            self.dim, self.prec1 * lam + self.prec2 * eta, self.succ1 * lam + self.succ2 * eta
        )

    def to_json(self) -> dict:
        from .tensors import to_nested

        return {
            "dim": self.dim,
            "prec1": to_nested(self.prec1),
            "succ1": to_nested(self.succ1),
            "prec2": to_nested(self.prec2),
            "succ2": to_nested(self.succ2),
        }


@dataclass(frozen=True, eq=False)
class CompatiblePreLie:
    dim: int
    diamond1: np.ndarray
    diamond2: np.ndarray


def _dend_terms(p, s, p2=None, s2=None) -> dict:
    """Defects of the three dendriform axioms; with a second structure, their
    polarisations (the compatibility identities)."""
    if p2 is None:
        p2, s2 = p, s
    star = s + p
    star2 = s2 + p2

    def comp(a, b):  # (x a y) b z
        return einsum("xyp,pzk->xyzk", a, b)

    def nest(a, b):  # x a (y b z)
        return einsum("yzp,xpk->xyzk", b, a)

    polar = p2 is not p
    out = {}
    if not polar:
        out["(x<y)<z = x<(y<z + y>z)"] = comp(p, p) - nest(p, star)
        out["(x>y)<z = x>(y<z)"] = comp(s, p) - nest(s, p)
        out["(x<y + x>y)>z = x>(y>z)"] = comp(star, s) - nest(s, s)
    else:
        out["(x<1y)<2z + (x<2y)<1z = x<2(y*1z) + x<1(y*2z)"] = (
            comp(p, p2) + comp(p2, p) - nest(p2, star) - nest(p, star2)
        )
        out["(x>1y)<2z + (x>2y)<1z = x>2(y<1z) + x>1(y<2z)"] = (
            comp(s, p2) + comp(s2, p) - nest(s2, p) - nest(s, p2)
        )
        out["(x*1y)>2z + (x*2y)>1z = x>2(y>1z) + x>1(y>2z)"] = (
            comp(star, s2) + comp(star2, s) - nest(s2, s) - nest(s, s2)
        )
    return out


def check_dendriform(d: DendriformAlgebra) -> CheckReport:
    rep = CheckReport("dendriform algebra")
    for name, t in _dend_terms(d.prec, d.succ).items():
        rep.add_tensor_defects(name, t)
    return rep


def check_compatible_dendriform(cd: CompatibleDendriform) -> CheckReport:
    rep = CheckReport("compatible dendriform algebra")
    rep.add(check_dendriform(cd.first)).name = "first structure"
    rep.add(check_dendriform(cd.second)).name = "second structure"
    mixed = CheckReport("compatibility")
    for name, t in _dend_terms(cd.prec1, cd.succ1, cd.prec2, cd.succ2).items():
        mixed.add_tensor_defects(name, t)
    rep.add(mixed)
    rep.add(check_dendriform(cd.combination(1, 1))).name = "sum structure"
    return rep


def check_dendriform_morphism(psi, source: CompatibleDendriform, target: CompatibleDendriform) -> CheckReport:
    """psi as a matrix ``psi[k, u]`` (output first)."""
    psi = as_tensor(psi, (target.dim, source.dim))
    rep = CheckReport("morphism of compatible dendriform algebras")
    for name, a, b in (
        ("<1", source.prec1, target.prec1),
        (">1", source.succ1, target.succ1),
        ("<2", source.prec2, target.prec2),
        (">2", source.succ2, target.succ2),
    ):
        d = einsum("xyp,kp->xyk", a, psi) - einsum("px,qy,pqk->xyk", psi, psi, b)
        rep.add_tensor_defects(f"psi(x {name} y) = psi(x) {name} psi(y)", d)
    return rep


# -- constructions -----------------------------------------------------------------


def total_algebra(cd: CompatibleDendriform) -> CompatibleAlgebra:
    return CompatibleAlgebra(cd.dim, cd.prec1 + cd.succ1, cd.prec2 + cd.succ2)


def _induced_pair(ctx, t) -> tuple:
    prec = einsum("uaw,av->uvw", ctx.right, t)  # u . T(v)
    succ = einsum("au,avw->uvw", t, ctx.left)  # T(u) . v
    return prec, succ


def induced_dendriform(p: OperatorPair) -> CompatibleDendriform:
    _require_compatible(p)
    ctx = p.ctx
    p1, s1 = _induced_pair(ctx, p.t1.matrix)
    p2, s2 = _induced_pair(ctx, p.t2.matrix)
    return CompatibleDendriform(ctx.dim_m, p1, s1, p2, s2)


def check_triangle(p: OperatorPair) -> CheckReport:
    """The total algebra of the induced dendriform structure is the induced compatible algebra."""
    from .operators import induced_compatible_algebra

    ca = induced_compatible_algebra(p)
    tot = total_algebra(induced_dendriform(p))
    rep = CheckReport("total algebra of the induced dendriform = induced compatible algebra")
    for k, (a, b) in enumerate(((tot.mu1, ca.mu1), (tot.mu2, ca.mu2)), start=1):
        rep.add_tensor_defects(f"product {k}", a - b)
    return rep


def check_induced_naturality(phi, psi, source: OperatorPair, target: OperatorPair) -> CheckReport:
    """A morphism of compatible O-operators gives a dendriform morphism psi."""
    rep = CheckReport("naturality of the induced dendriform structure")
    hyp = rep.add(check_morphism(phi, psi, source, target))
    if hyp.passed:
        rep.add(check_dendriform_morphism(psi, induced_dendriform(source), induced_dendriform(target)))
    return rep


def sub_adjacent_prelie(cd: CompatibleDendriform) -> CompatiblePreLie:
    """x <>_k y = x >_k y - y <_k x."""
    swap = lambda t: np.transpose(t, (1, 0, 2))  # noqa: E731
    return CompatiblePreLie(cd.dim, cd.succ1 - swap(cd.prec1), cd.succ2 - swap(cd.prec2))


def _commutator(t) -> np.ndarray:
    return t - np.transpose(t, (1, 0, 2))


def prelie_to_lie(p: CompatiblePreLie) -> tuple:
    return _commutator(p.diamond1), _commutator(p.diamond2)


def skew_symmetrization(c: CompatibleAlgebra) -> tuple:
    return _commutator(c.mu1), _commutator(c.mu2)


def _prelie_defect(d, d2=None) -> np.ndarray:
    """(x.y).z - x.(y.z) - (y.x).z + y.(x.z), polarised when ``d2`` is given."""
    def assoc(a, b):
        return einsum("xyp,pzk->xyzk", a, b) - einsum("yzp,xpk->xyzk", b, a)

    t = assoc(d, d) if d2 is None else assoc(d, d2) + assoc(d2, d)
    return t - np.transpose(t, (1, 0, 2, 3))


def check_compatible_prelie(p: CompatiblePreLie) -> CheckReport:
    rep = CheckReport("compatible pre-Lie algebra")
    rep.add_tensor_defects("pre-Lie <>1", _prelie_defect(p.diamond1))
    rep.add_tensor_defects("pre-Lie <>2", _prelie_defect(p.diamond2))
    rep.add_tensor_defects("compatibility", _prelie_defect(p.diamond1, p.diamond2))
    return rep


def _jacobi(b, b2=None) -> np.ndarray:
    def jac(a, c):
        t = einsum("yzp,xpk->xyzk", c, a)  # [x, [y, z]]
        return t + np.transpose(t, (1, 2, 0, 3)) + np.transpose(t, (2, 0, 1, 3))

    return jac(b, b) if b2 is None else jac(b, b2) + jac(b2, b)


def check_compatible_lie(b1, b2) -> CheckReport:
    rep = CheckReport("compatible Lie algebra")
    for name, b in (("[,]1", b1), ("[,]2", b2)):
        rep.add_tensor_defects(f"{name} skew", b + np.transpose(b, (1, 0, 2)))
        rep.add_tensor_defects(f"{name} Jacobi", _jacobi(b))
    rep.add_tensor_defects("mixed Jacobi", _jacobi(b1, b2))
    return rep


def check_square(cd: CompatibleDendriform) -> CheckReport:
    """dendriform -> pre-Lie -> Lie equals dendriform -> total -> skew-symmetrization."""
    rep = CheckReport("dendriform / pre-Lie / Lie square")
    via_prelie = prelie_to_lie(sub_adjacent_prelie(cd))
    via_total = skew_symmetrization(total_algebra(cd))
    for k, (a, b) in enumerate(zip(via_prelie, via_total), start=1):
        rep.add_tensor_defects(f"bracket {k}", a - b)
    return rep


# -- labelled cochains ---------------------------------------------------------------


class DendCochain:
    """f([r]; x_1, ..., x_n) for r = 1..n."""

    __slots__ = ("arity", "labels")

    def __init__(self, arity: int, labels):
        if arity < 1:
            raise ShapeError("labelled cochains have arity >= 1")
        t = as_tensor(labels)
        if t.ndim != arity + 2 or t.shape[0] != arity or len(set(t.shape[1:])) != 1:
            raise ShapeError(f"labelled cochain of arity {arity} cannot have shape {t.shape}")
        self.arity = arity
        self.labels = t

    @classmethod
    def _raw(cls, arity: int, labels: np.ndarray) -> "DendCochain":
        # internal results are already exact object arrays of the right shape
        out = cls.__new__(cls)
        out.arity, out.labels = arity, labels
        return out

    @property
    def dim(self) -> int:
        return self.labels.shape[1]

    @classmethod
    def zero(cls, arity: int, dim: int) -> "DendCochain":
        return cls._raw(arity, zeros((arity,) + (dim,) * (arity + 1)))

    @classmethod
    def identity(cls, dim: int) -> "DendCochain":
        return cls(1, np.eye(dim, dtype=int).astype(object).reshape(1, dim, dim))

    @classmethod
    def from_products(cls, prec, succ) -> "DendCochain":
        """pi with [1] -> prec and [2] -> succ."""
        p = np.moveaxis(as_tensor(prec), 2, 0)
        s = np.moveaxis(as_tensor(succ), 2, 0)
        return cls(2, np.stack([p, s]))

    def label(self, r: int) -> np.ndarray:
        """Component at the 1-based label r."""
        if not 1 <= r <= self.arity:
            raise IndexError(f"label [{r}] outside C_{self.arity}")
        return self.labels[r - 1]

    def __add__(self, other: "DendCochain") -> "DendCochain":
        self._same(other)
        return DendCochain._raw(self.arity, self.labels + other.labels)

    def __sub__(self, other: "DendCochain") -> "DendCochain":
        self._same(other)
        return DendCochain._raw(self.arity, self.labels - other.labels)

    def __neg__(self) -> "DendCochain":
        return DendCochain._raw(self.arity, -self.labels)

    def scale(self, c) -> "DendCochain":
        if type(c) is int:
            return DendCochain._raw(self.arity, self.labels * c)
        return DendCochain(self.arity, self.labels * c)

    def _same(self, other: "DendCochain") -> None:
        if self.labels.shape != other.labels.shape:
            raise ShapeError("labelled cochains of different shapes")

    def __eq__(self, other) -> bool:
        return isinstance(other, DendCochain) and self.labels.shape == other.labels.shape and equal(
            self.labels, other.labels
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return is_zero(self.labels)

    def to_json(self) -> dict:
        from .tensors import to_nested

        return {"arity": self.arity, "labels": [to_nested(x) for x in self.labels]}

    @classmethod
    def from_json(cls, doc: dict) -> "DendCochain":
        return cls(int(doc["arity"]), np.array([as_tensor(x) for x in doc["labels"]], dtype=object))

    def __repr__(self) -> str:
        return f"DendCochain(arity={self.arity}, dim={self.dim})"


def _check_box(m: int, i: int, n: int, r: int) -> None:
    if m < 1 or n < 1 or not 1 <= i <= m:
        raise IndexError(f"no box layout for m={m}, i={i}, n={n}")
    if not 1 <= r <= m + n - 1:
        raise IndexError(f"label [{r}] outside C_{m + n - 1}")


def r_map(m: int, i: int, n: int, r: int) -> int:
    """Index of the box holding [r] when C_(m+n-1) is split with n symbols in box i."""
    _check_box(m, i, n, r)
    if r < i:
        return r
    if r < i + n:
        return i
    return r - n + 1


def s_map(m: int, i: int, n: int, r: int) -> list:
    """Coefficients of S_(m;i,n)[r] on the symbols [1]..[n]."""
    _check_box(m, i, n, r)
    if i <= r < i + n:
        out = [0] * n
        out[r - i] = 1
        return out
    return [1] * n


def partial_composition(f: DendCochain, i: int, g: DendCochain) -> DendCochain:
    m, n = f.arity, g.arity
    if not 1 <= i <= m:
        raise IndexError(f"cannot compose in slot {i} of an arity-{m} cochain")
    if f.dim != g.dim:
        raise ShapeError("cochains on spaces of different dimension")
    labels = []
    for r in range(1, m + n):
        coeffs = s_map(m, i, n, r)
        inner = sum(c * g.label(s + 1) for s, c in enumerate(coeffs) if c)
        labels.append(insert(f.label(r_map(m, i, n, r)), i - 1, inner))
    return DendCochain._raw(m + n - 1, np.stack(labels))


def brace_bracket(f: DendCochain, g: DendCochain) -> DendCochain:
    m, n = f.arity, g.arity
    out = DendCochain.zero(m + n - 1, f.dim)
    for i in range(1, m + 1):
        out = out + partial_composition(f, i, g).scale((-1) ** ((i - 1) * (n - 1)))
    other = DendCochain.zero(m + n - 1, f.dim)
    for i in range(1, n + 1):
        other = other + partial_composition(g, i, f).scale((-1) ** ((i - 1) * (m - 1)))
    return out - other.scale((-1) ** ((m - 1) * (n - 1)))


def structure_cochains(cd: CompatibleDendriform) -> tuple:
    return DendCochain.from_products(cd.prec1, cd.succ1), DendCochain.from_products(cd.prec2, cd.succ2)


@dataclass(eq=False)
class CompDendCochain:
    degree: int
    parts: list

    def __post_init__(self):
        if self.degree < 1 or len(self.parts) != self.degree:
            raise ShapeError(f"degree-{self.degree} cochain needs {self.degree} parts")
        for p in self.parts:
            if p.arity != self.degree:
                raise ShapeError("parts must have arity equal to the degree")

    def __eq__(self, other) -> bool:
        return isinstance(other, CompDendCochain) and self.degree == other.degree and all(
            a == b for a, b in zip(self.parts, other.parts)
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.parts)


def delta_cdend(cd: CompatibleDendriform, x: CompDendCochain, check: bool = True) -> CompDendCochain:
    if check and not check_compatible_dendriform(cd).passed:
        raise DomainError("not a compatible dendriform algebra")
    pi1, pi2 = structure_cochains(cd)
    n = x.degree
    b1 = [brace_bracket(pi1, f) for f in x.parts]
    b2 = [brace_bracket(pi2, f) for f in x.parts]
    parts = []
    for i in range(n + 1):
        acc = DendCochain.zero(n + 1, cd.dim)
        if i < n:
            acc = acc + b1[i]
        if i >= 1:
            acc = acc + b2[i - 1]
        parts.append(acc.scale((-1) ** (n - 1)))
    return CompDendCochain(n + 1, parts)


class CDendComplex(ComplexSpec):
    name = "cdend"

    def __init__(self, cd: CompatibleDendriform):
        if not check_compatible_dendriform(cd).passed:
            raise DomainError("not a compatible dendriform algebra")
        self.cd = cd

    def shapes(self, n):
        if n < 1:
            return []
        return [(n,) + (self.cd.dim,) * (n + 1)] * n

    def apply(self, n, parts):
        if n < 1:
            return []
        x = CompDendCochain(n, [DendCochain(n, p) for p in parts])
        return [p.labels for p in delta_cdend(self.cd, x, check=False).parts]


def cohomology_dim_cdend(cd: CompatibleDendriform, degree: int) -> int:
    from .cohomology import cohomology

    return cohomology(CDendComplex(cd), degree).cohomology_dim


# -- chain maps ----------------------------------------------------------------------


def phi_map(x: CompDendCochain) -> CAssCochain:
    """Sum over labels, component by component."""
    return CAssCochain(x.degree, [p.labels.sum(axis=0) for p in x.parts])


def psi_map(p: OperatorPair, x: TupleCochain, normalized: bool = True) -> CompDendCochain:
    """Embed a degree-n cochain of the pair complex as a degree-(n+1) labelled cochain on M.

    The literal embedding satisfies delta_cDend Psi_n = (-1)^n Psi_(n+1) delta;
    ``normalized`` rescales Psi_n by (-1)^(n(n-1)/2) so that it commutes with
    the differentials on the nose.
    """
    n = x.degree
    if n < 1:
        raise ValueError("the embedding starts in degree 1")
    ctx = p.ctx
    dm = ctx.dim_m
    parts = []
    for f in x.parts:
        labels = zeros((n + 1,) + (dm,) * (n + 2))
        # u_1 . f(u_2, ..., u_(n+1)) with the right action, output index first
        first = np.tensordot(f.coeffs, ctx.right, axes=([0], [1]))  # [u_2.., u_1, v]
        first = np.moveaxis(first, (-2, -1), (0, 1))  # [u_1, v, u_2..]
        first = np.swapaxes(first, 0, 1)  # [v, u_1, u_2..]
        labels[0] = first * (-1) ** (n + 1)
        last = np.tensordot(f.coeffs, ctx.left, axes=([0], [0]))  # [u_1..u_n, u_(n+1), v]
        labels[n] = labels[n] + np.moveaxis(last, -1, 0)
        if normalized and (n * (n - 1) // 2) % 2:
            labels = -labels
        parts.append(DendCochain(n + 1, labels))
    return CompDendCochain(n + 1, parts)


def random_dend_cochain(rng: random.Random, arity: int, dim: int, density: float = 0.6) -> DendCochain:
    return DendCochain(arity, random_tensor(rng, (arity,) + (dim,) * (arity + 1), density=density))


def random_comp_cochain(rng: random.Random, degree: int, dim: int) -> CompDendCochain:
    return CompDendCochain(degree, [random_dend_cochain(rng, degree, dim) for _ in range(degree)])


def verify_phi(cd: CompatibleDendriform, rng: Optional[random.Random] = None, samples: int = 5,
               max_degree: int = 3) -> CheckReport:
    """delta_cAss o Phi = Phi o delta_cDend on random cochains."""
    rng = rng or random.Random(0)
    rep = CheckReport("Phi chain map")
    tot = total_algebra(cd)
    cb = adjoint_compatible_bimodule(tot)
    if not check_compatible_associative(tot).passed:
        rep.fail("total algebra is not compatible associative")
        return rep
    for n in range(1, max_degree + 1):
        for _ in range(samples):
            x = random_comp_cochain(rng, n, cd.dim)
            lhs = delta_cass(tot, cb, phi_map(x))
            rhs = phi_map(delta_cdend(cd, x, check=False))
            if not lhs == rhs:
                rep.fail(f"degree {n}", (n,))
    return rep


def verify_psi(p: OperatorPair, rng: Optional[random.Random] = None, samples: int = 5,
               max_degree: int = 2) -> CheckReport:
    """delta_cDend o Psi = Psi o delta_(T1,T2) on random cochains."""
    from .cohomology import random_tuple_cochain

    rng = rng or random.Random(0)
    rep = CheckReport("Psi chain map")
    cd = induced_dendriform(p)
    ctx = p.ctx
    for n in range(1, max_degree + 1):
        for _ in range(samples):
            x = random_tuple_cochain(rng, n, ctx.dim_a, ctx.dim_m)
            lhs = delta_cdend(cd, psi_map(p, x), check=False)
            rhs = psi_map(p, delta_pair(p, x))
            if not lhs == rhs:
                rep.fail(f"degree {n}", (n,))
    return rep


def structure_bracket_report(cd: CompatibleDendriform) -> CheckReport:
    """{{pi1, pi1}}, {{pi2, pi2}} and {{pi1, pi2}} vanish exactly for compatible structures."""
    pi1, pi2 = structure_cochains(cd)
    rep = CheckReport("structure brackets")
    for name, a, b in (("{{pi1,pi1}}", pi1, pi1), ("{{pi2,pi2}}", pi2, pi2), ("{{pi1,pi2}}", pi1, pi2)):
        t = brace_bracket(a, b).labels
        rep.add_tensor_defects(name, np.moveaxis(t, 1, -1))
    return rep


__all__ = [
    "DendriformAlgebra",
    "CompatibleDendriform",
    "CompatiblePreLie",
    "DendCochain",
    "CompDendCochain",
    "CDendComplex",
    "check_dendriform",
    "check_compatible_dendriform",
    "check_dendriform_morphism",
    "check_induced_naturality",
    "check_triangle",
    "check_compatible_prelie",
    "check_compatible_lie",
    "check_square",
    "total_algebra",
    "induced_dendriform",
    "sub_adjacent_prelie",
    "prelie_to_lie",
    "skew_symmetrization",
    "r_map",
    "s_map",
    "partial_composition",
    "brace_bracket",
    "structure_cochains",
    "delta_cdend",
    "cohomology_dim_cdend",
    "phi_map",
    "psi_map",
    "verify_phi",
    "verify_psi",
    "structure_bracket_report",
    "random_dend_cochain",
    "random_comp_cochain",
]
