"""L-infinity algebras from the V-data on maps of A + M, and their lifts.

Degrees follow the shifted convention in which every ``l_k`` has degree +1 and
is graded symmetric:

* a map ``f`` of bidegree k|0 (arity k + 1) sits in degree ``k - 1`` as ``f[1]``;
* a map M^(l+1) -> A sits in degree ``l``.

An :class:`LInftyElement` of degree ``i`` has an optional V'-part (arity
``i + 2``) and a list of maps M^(i+1) -> A.  In the plain algebra the list has
one entry; in the lifted algebra it has ``i + 2`` entries and behaves like the
coefficients of a homogeneous polynomial in two commuting variables, so an
operation outputs into slot ``j_1 + ... + j_k`` (0-based).  Degree -1 has no
map part, and lower degrees are zero spaces.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction
from typing import Optional, Sequence

from .cochains import Context, MixedMap, MMap, gerstenhaber
from .cohomology import ComplexSpec
from .operators import LinOp, OperatorPair
from .report import CheckReport, DomainError
from .tensors import ShapeError, random_tensor


class LInftyElement:
    """A homogeneous element of V'[1] + a (plain) or V'[1] + a_c (lifted)."""

    __slots__ = ("degree", "vprime", "a_parts", "dim_a", "dim_m")

    def __init__(self, degree: int, dim_a: int, dim_m: int, vprime: Optional[MixedMap] = None, a_parts=()):
        if degree < -1 and (vprime is not None and not vprime.is_zero() or list(a_parts)):
            raise ShapeError("the space is zero below degree -1")
        self.degree, self.dim_a, self.dim_m = degree, dim_a, dim_m
        if vprime is not None:
            if vprime.arity != degree + 2 or (vprime.dim_a, vprime.dim_m) != (dim_a, dim_m):
                raise ShapeError(f"V'-part of arity {vprime.arity} in degree {degree}")
            bad = set(vprime.components) - {(degree + 1, 0)}
            if bad:
                raise ShapeError(f"V'-part has components of bidegree {sorted(bad)}, expected {(degree + 1, 0)}")
            if vprime.is_zero():
                vprime = None
        self.vprime = vprime
        parts = list(a_parts)
        if degree < 0 and parts:
            raise ShapeError(f"degree {degree} elements have no map part")
        for q in parts:
            if q.arity != degree + 1 or q.coeffs.shape != (dim_a,) + (dim_m,) * (degree + 1):
                raise ShapeError(f"map part of shape {q.coeffs.shape} in degree {degree}")
        self.a_parts = parts

    @classmethod
    def zero(cls, degree: int, dim_a: int, dim_m: int, width: int) -> "LInftyElement":
        parts = [] if degree < 0 else [MMap.zero(degree + 1, dim_a, dim_m) for _ in range(width)]
        return cls(degree, dim_a, dim_m, None, parts)

    @property
    def width(self) -> int:
        return len(self.a_parts)

    def _like(self, other: "LInftyElement") -> None:
        if (self.degree, self.dim_a, self.dim_m, self.width) != (other.degree, other.dim_a, other.dim_m, other.width):
            raise ShapeError("elements of different shapes")

    def __add__(self, other: "LInftyElement") -> "LInftyElement":
        self._like(other)
        v = _vadd(self.vprime, other.vprime)
        return LInftyElement(
            self.degree, self.dim_a, self.dim_m, v, [a + b for a, b in zip(self.a_parts, other.a_parts)]
        )

    def __neg__(self) -> "LInftyElement":
        return self.scale(-1)

    def __sub__(self, other: "LInftyElement") -> "LInftyElement":
        return self + (-other)

    def scale(self, c) -> "LInftyElement":
        v = None if self.vprime is None else self.vprime.scale(c)
        return LInftyElement(self.degree, self.dim_a, self.dim_m, v, [a.scale(c) for a in self.a_parts])

    def __rmul__(self, c) -> "LInftyElement":
        return self.scale(c)

    def is_zero(self) -> bool:
        return self.vprime is None and all(a.is_zero() for a in self.a_parts)

    def __eq__(self, other) -> bool:
        return isinstance(other, LInftyElement) and (self - other).is_zero()

    __hash__ = None

    def __repr__(self) -> str:
        v = "-" if self.vprime is None else sorted(self.vprime.components)
        return f"LInftyElement(degree={self.degree}, vprime={v}, width={self.width})"


def _vadd(a: Optional[MixedMap], b: Optional[MixedMap]) -> Optional[MixedMap]:
    if a is None:
        return b
    if b is None:
        return a
    return a + b


# -- structure maps ------------------------------------------------------------


def _pieces(x: LInftyElement) -> list:
    """Homogeneous summands: ("v", f, degree) and ("a", j, map, degree)."""
    out = []
    if x.vprime is not None:
        out.append(("v", x.vprime, x.degree))
    for j, q in enumerate(x.a_parts):
        if not q.is_zero():
            out.append(("a", j, q, x.degree))
    return out


def _koszul_sort(items: list, key) -> tuple:
    """Stable sort of graded items by ``key`` with the Koszul sign of the permutation."""
    order = sorted(range(len(items)), key=lambda i: key(items[i]))
    sign = 1
    for a in range(len(order)):
        for b in range(a + 1, len(order)):
            if order[a] > order[b]:
                if (items[order[a]][-1] * items[order[b]][-1]) % 2:
                    sign = -sign
    return [items[i] for i in order], sign


def iterated_projection(f: MixedMap, maps: Sequence[MMap]) -> MMap:
    """P[...[[f, a_1], a_2], ..., a_k] as a map M^n -> A."""
    acc = f
    for q in maps:
        acc = gerstenhaber(acc, MixedMap.from_mmap(q, f.dim_m))
    bideg = (-1, acc.arity)
    return acc.component(bideg).to_mmap()


class _Evaluator:
    """Evaluates l_k on homogeneous summands with a cache keyed on canonical inputs."""

    def __init__(self, dim_a: int, dim_m: int):
        self.dim_a, self.dim_m = dim_a, dim_m
        self.cache: dict = {}
        self._alive: list = []  # keeps keyed objects alive so ids stay unique

    def bracket_term(self, f: MixedMap, fkey, amaps: list) -> MMap:
        key = (fkey,) + tuple(k for k, _ in amaps)
        if key not in self.cache:
            self._alive.append((f, amaps))
            self.cache[key] = iterated_projection(f, [q for _, q in amaps])
        return self.cache[key]


def _lk(args: Sequence[LInftyElement], lifted: bool, ev: Optional[_Evaluator] = None) -> LInftyElement:
    k = len(args)
    if k == 0:
        raise ValueError("l_k needs at least one argument")
    dim_a, dim_m = args[0].dim_a, args[0].dim_m
    for x in args:
        if (x.dim_a, x.dim_m) != (dim_a, dim_m):
            raise ShapeError("arguments over different spaces")
    out_deg = sum(x.degree for x in args) + 1
    width = (out_deg + 2 if lifted else 1) if out_deg >= 0 else 0
    for x in args:
        expect = (x.degree + 2 if lifted else 1) if x.degree >= 0 else 0
        if x.width != expect:
            raise ShapeError(f"degree-{x.degree} argument has {x.width} map parts, expected {expect}")
    result = LInftyElement.zero(out_deg, dim_a, dim_m, width)
    if k == 1 or out_deg < -1:
        return result  # the V-data has zero differential, so l_1 = 0
    ev = ev or _Evaluator(dim_a, dim_m)
    vout = None
    aout = [MMap.zero(out_deg + 1, dim_a, dim_m) for _ in range(width)] if out_deg >= 0 else []
    piece_lists = [[(pos, pc) for pc in _pieces(x)] for pos, x in enumerate(args)]
    for choice in itertools.product(*piece_lists):
        vs = [c for c in choice if c[1][0] == "v"]
        if len(vs) == 2 and k == 2:
            (_, (_, f, _)), (_, (_, g, _)) = choice
            vdeg = f.arity - 1
            term = gerstenhaber(f, g).scale(-1 if vdeg % 2 else 1)
            vout = _vadd(vout, term)
            continue
        if len(vs) != 1:
            continue
        (vpos, (_, f, fdeg)) = vs[0]
        if f.arity != k - 1:
            continue
        sign = 1
        if fdeg % 2:
            before = sum(c[1][3] for c in choice[:vpos])
            if before % 2:
                sign = -1
        graded = [(id(c[2]), c[2], c[1], c[3]) for _, c in choice if c[0] == "a"]
        ordered, ksign = _koszul_sort(graded, key=lambda it: it[0])
        term = ev.bracket_term(f, id(f), [(it[0], it[1]) for it in ordered])
        slot = sum(it[2] for it in graded) if lifted else 0
        aout[slot] = aout[slot] + term.scale(sign * ksign)
    return LInftyElement(out_deg, dim_a, dim_m, vout, aout)


def lk_base(*args: LInftyElement) -> LInftyElement:
    return _lk(args, lifted=False)


def lk_lifted(*args: LInftyElement) -> LInftyElement:
    return _lk(args, lifted=True)


# -- Maurer-Cartan elements --------------------------------------------------------


def structure_element(ctx: Context, operators: Sequence[LinOp]) -> LInftyElement:
    """(pi[1], (T_1, ..., T_k)); one operator gives the plain element, two the lifted one."""
    pi = MixedMap.structure(ctx)
    return LInftyElement(0, ctx.dim_a, ctx.dim_m, pi, [t.mmap for t in operators])


def _power_sum(alpha: LInftyElement, lifted: bool, kmax: int) -> tuple:
    total = None
    ev = _Evaluator(alpha.dim_a, alpha.dim_m)
    for k in range(1, kmax + 1):
        term = _lk([alpha] * k, lifted, ev).scale(Fraction(1, math.factorial(k)))
        total = term if total is None else total + term
    tail = _lk([alpha] * (kmax + 1), lifted, ev)
    return total, tail


def mc_defect(alpha: LInftyElement, lifted: Optional[bool] = None) -> LInftyElement:
    """sum_k l_k(alpha, ..., alpha) / k!; the series stops after k = 3."""
    if alpha.degree != 0:
        raise ValueError("Maurer-Cartan elements have degree 0")
    if lifted is None:
        lifted = alpha.width == 2
    total, tail = _power_sum(alpha, lifted, 3)
    if not tail.is_zero():
        raise ArithmeticError("Maurer-Cartan series did not terminate at k = 3")
    return total


def twisted_differential(alpha: LInftyElement, x: LInftyElement, lifted: Optional[bool] = None,
                         check_mc: bool = True) -> LInftyElement:
    """l_1^alpha(x) = sum_i l_(i+1)(alpha, ..., alpha, x) / i!.

    The sum is finite: a V'-summand of arity p absorbs exactly p map inputs,
    so terms with more than ``bound`` copies of ``alpha`` vanish; the term
    just past the bound is evaluated and asserted to be zero.
    """
    if lifted is None:
        lifted = alpha.width == 2
    if check_mc and not mc_defect(alpha, lifted).is_zero():
        raise DomainError("twisting element is not Maurer-Cartan")
    arities = [2 if alpha.vprime is not None else 0]
    if x.vprime is not None:
        arities.append(x.vprime.arity)
    bound = max(arities) + 1
    ev = _Evaluator(alpha.dim_a, alpha.dim_m)
    total = None
    for i in range(bound + 1):
        term = _lk([alpha] * i + [x], lifted, ev).scale(Fraction(1, math.factorial(i)))
        total = term if total is None else total + term
    if not _lk([alpha] * (bound + 1) + [x], lifted, ev).is_zero():
        raise ArithmeticError("twisted differential did not terminate")
    return total


def theta_i(x: LInftyElement) -> LInftyElement:
    """Sum of the map parts (evaluation of the polynomial at 1)."""
    parts = []
    if x.degree >= 0:
        acc = MMap.zero(x.degree + 1, x.dim_a, x.dim_m)
        for q in x.a_parts:
            acc = acc + q
        parts = [acc]
    return LInftyElement(x.degree, x.dim_a, x.dim_m, x.vprime, parts)


# -- the complexes ---------------------------------------------------------------


def _vprime_blocks(n: int) -> list:
    """Block patterns of a bidegree (n-1)|0 map of arity n, in coordinate order."""
    keys = ["A" * n + ">A"]
    for j in range(n):
        keys.append("A" * j + "M" + "A" * (n - 1 - j) + ">M")
    return keys


def _block_shape(key: str, dim_a: int, dim_m: int) -> tuple:
    inputs, output = key.split(">")
    d = {"A": dim_a, "M": dim_m}
    return (d[output],) + tuple(d[c] for c in inputs)


class _MCComplex(ComplexSpec):
    """Complex of an MC element: C^n = V'_(n-1) + (n or 1 copies of) Hom(M^(n-1), A)."""

    lifted = True

    def __init__(self, ctx: Context, operators: Sequence[LinOp]):
        self.ctx = ctx
        self.alpha = structure_element(ctx, operators)
        if not mc_defect(self.alpha, self.lifted).is_zero():
            raise DomainError("structure is not a (compatible) O-operator algebra")

    def copies(self, n: int) -> int:
        if n < 2:
            return 0
        return n if self.lifted else 1

    def shapes(self, n):
        if n < 1:
            return []
        dims = (self.ctx.dim_a, self.ctx.dim_m)
        out = [_block_shape(k, *dims) for k in _vprime_blocks(n)]
        out += [(self.ctx.dim_a,) + (self.ctx.dim_m,) * (n - 1)] * self.copies(n)
        return out

    def to_element(self, n: int, parts: list) -> LInftyElement:
        keys = _vprime_blocks(n)
        v = MixedMap.from_blocks(self.ctx.dim_a, self.ctx.dim_m, n, dict(zip(keys, parts[: len(keys)])))
        maps = [MMap(n - 1, q) for q in parts[len(keys):]]
        return LInftyElement(n - 2, self.ctx.dim_a, self.ctx.dim_m, v, maps)

    def from_element(self, x: LInftyElement) -> list:
        n = x.degree + 2
        dims = (self.ctx.dim_a, self.ctx.dim_m)
        v = x.vprime if x.vprime is not None else MixedMap.zero(*dims, n)
        out = [v.block(k) for k in _vprime_blocks(n)]
        out += [q.coeffs for q in x.a_parts]
        return out

    def apply(self, n, parts):
        if n < 1:
            return []
        x = self.to_element(n, parts)
        y = twisted_differential(self.alpha, x, self.lifted, check_mc=False)
        return self.from_element(y.scale((-1) ** n))


class COAComplex(_MCComplex):
    name = "coa"
    lifted = True

    def __init__(self, p: OperatorPair):
        self.pair = p
        super().__init__(p.ctx, [p.t1, p.t2])


class OAComplex(_MCComplex):
    name = "oa"
    lifted = False

    def __init__(self, t: LinOp):
        super().__init__(t.ctx, [t])


def delta_coa(p: OperatorPair, x: LInftyElement) -> LInftyElement:
    """(-1)^n l_1^(pi[1], (T1, T2)) on a degree-n cochain (an element of degree n - 2)."""
    alpha = structure_element(p.ctx, [p.t1, p.t2])
    if not mc_defect(alpha, True).is_zero():
        raise DomainError("not a compatible O-operator algebra")
    n = x.degree + 2
    return twisted_differential(alpha, x, True, check_mc=False).scale((-1) ** n)


def delta_oa(t: LinOp, x: LInftyElement) -> LInftyElement:
    alpha = structure_element(t.ctx, [t])
    if not mc_defect(alpha, False).is_zero():
        raise DomainError("not an O-operator algebra")
    n = x.degree + 2
    return twisted_differential(alpha, x, False, check_mc=False).scale((-1) ** n)


def cohomology_dim_coa(p: OperatorPair, degree: int) -> int:
    from .cohomology import cohomology

    return cohomology(COAComplex(p), degree).cohomology_dim


# -- random elements and checks ------------------------------------------------------


def random_vprime(rng: random.Random, dim_a: int, dim_m: int, arity: int, density: float = 0.6) -> MixedMap:
    full = random_tensor(rng, (dim_a + dim_m,) * (arity + 1), density=density)
    return MixedMap.from_full(dim_a, dim_m, full).component((arity - 1, 0))


def random_element(rng: random.Random, degree: int, dim_a: int, dim_m: int, lifted: bool,
                   with_vprime: bool = True, density: float = 0.6) -> LInftyElement:
    v = random_vprime(rng, dim_a, dim_m, degree + 2, density) if with_vprime else None
    width = (degree + 2 if lifted else 1) if degree >= 0 else 0
    maps = [MMap(degree + 1, random_tensor(rng, (dim_a,) + (dim_m,) * (degree + 1), density=density))
            for _ in range(width)]
    return LInftyElement(degree, dim_a, dim_m, v, maps)


def jacobi_defect(xs: Sequence[LInftyElement], lifted: bool) -> LInftyElement:
    """sum_(i+j=n+1) sum_(unshuffles) eps(sigma) l_j(l_i(x_sigma), x_rest)."""
    n = len(xs)
    total = None
    degs = [x.degree for x in xs]
    for i in range(1, n + 1):
        for first in itertools.combinations(range(n), i):
            rest = [q for q in range(n) if q not in first]
            perm = list(first) + rest
            sign = 1
            for a in range(n):
                for b in range(a + 1, n):
                    if perm[a] > perm[b] and (degs[perm[a]] * degs[perm[b]]) % 2:
                        sign = -sign
            inner = _lk([xs[q] for q in first], lifted)
            term = _lk([inner] + [xs[q] for q in rest], lifted).scale(sign)
            total = term if total is None else total + term
    return total


def symmetry_defect(xs: Sequence[LInftyElement], lifted: bool, swap: int) -> LInftyElement:
    """l_k(..., x_s, x_(s+1), ...) - (+/-) l_k(..., x_(s+1), x_s, ...)."""
    ys = list(xs)
    ys[swap], ys[swap + 1] = ys[swap + 1], ys[swap]
    sign = -1 if (xs[swap].degree * xs[swap + 1].degree) % 2 else 1
    return _lk(list(xs), lifted) - _lk(ys, lifted).scale(sign)


def verify_theta_i(p: OperatorPair, rng: Optional[random.Random] = None, samples: int = 2,
                   max_degree: int = 3) -> CheckReport:
    """Theta commutes with the structure maps, sends alpha to alpha^Tot, and
    intertwines the two twisted complexes."""
    rng = rng or random.Random(0)
    ctx = p.ctx
    rep = CheckReport("Theta_i morphism")
    alpha = structure_element(ctx, [p.t1, p.t2])
    tot = structure_element(ctx, [p.total])
    if not theta_i(alpha) == tot:
        rep.fail("Theta_0(alpha) = alpha^Tot")
    morph = CheckReport("Theta o l~_k = l_k o Theta")
    for k in (1, 2, 3):
        for _ in range(samples):
            degs = [rng.choice([-1, 0, 0, 1]) for _ in range(k)]
            xs = [random_element(rng, d, ctx.dim_a, ctx.dim_m, True) for d in degs]
            lhs = theta_i(_lk(xs, True))
            rhs = _lk([theta_i(x) for x in xs], False)
            if not lhs == rhs:
                morph.fail(f"k = {k}, degrees {degs}", (k,))
    rep.add(morph)
    chain = CheckReport("Theta o delta_cOA = delta_OA o Theta")
    if mc_defect(alpha, True).is_zero():
        for n in range(1, max_degree + 1):
            for _ in range(samples):
                x = random_element(rng, n - 2, ctx.dim_a, ctx.dim_m, True)
                lhs = theta_i(twisted_differential(alpha, x, True, check_mc=False))
                rhs = twisted_differential(tot, theta_i(x), False, check_mc=False)
                if not lhs == rhs:
                    chain.fail(f"degree {n}", (n,))
    else:
        chain.fail("structure is not a compatible O-operator algebra")
    rep.add(chain)
    return rep
