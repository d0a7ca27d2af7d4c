"""Multilinear maps and the brackets built on them.

* :class:`MMap`: an element of Hom(M^n, A), graded degree ``n``.
* :class:`TupleCochain`: a tuple of ``n + 1`` such maps (one map in degree 0),
  the compatible lift of the graded Lie algebra of :class:`MMap`.
* :class:`MixedMap`: a map (A + M)^n -> A + M split by bidegree, with the
  Gerstenhaber bracket.

Coefficient tensors keep the output on axis 0.  On A + M the basis is the
basis of A followed by the basis of M.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Algebra, Bimodule
from .tensors import ShapeError, as_tensor, canon, equal, is_zero, normalize, to_nested, zeros


@dataclass(frozen=True, eq=False)
class Context:
    """An algebra A together with an A-bimodule M."""

    algebra: Algebra
    bimodule: Bimodule

    def __post_init__(self):
        if self.bimodule.algebra_dim != self.algebra.dim:
            raise ShapeError("bimodule and algebra dimensions disagree")

    @property
    def dim_a(self) -> int:
        return self.algebra.dim

    @property
    def dim_m(self) -> int:
        return self.bimodule.module_dim

    @property
    def mu(self):
        return self.algebra.mu

    @property
    def left(self):
        return self.bimodule.left

    @property
    def right(self):
        return self.bimodule.right


# -- tensor plumbing -------------------------------------------------------------


def insert(f: np.ndarray, pos: int, g: np.ndarray) -> np.ndarray:
    """Plug the output of ``g`` into input ``pos`` (0-based) of ``f``."""
    nf = f.ndim - 1
    if not 0 <= pos < nf:
        raise IndexError(f"input slot {pos} out of range for arity {nf}")
    t = np.tensordot(f, g, axes=([1 + pos], [0]))
    ng = g.ndim - 1
    if ng:
        src = list(range(nf, nf + ng))
        dst = list(range(1 + pos, 1 + pos + ng))
        t = np.moveaxis(t, src, dst)
    if 0 in t.shape or 0 in f.shape or 0 in g.shape:
        return normalize(t) if t.size else zeros(t.shape)
    return np.asarray(t, dtype=object)


def _left_of(ctx: Context, q: np.ndarray) -> np.ndarray:
    """(u_1..u_n, u) -> q(u_1..u_n) . u as a map M^(n+1) -> M."""
    t = np.tensordot(q, ctx.left, axes=([0], [0]))  # (u1..un, u, v)
    return np.moveaxis(t, -1, 0)


def _right_of(ctx: Context, q: np.ndarray) -> np.ndarray:
    """(u, u_1..u_n) -> u . q(u_1..u_n) as a map M^(n+1) -> M."""
    t = np.tensordot(ctx.right, q, axes=([1], [0]))  # (u, v, u1..un)
    return np.moveaxis(t, 1, 0)


def _product(ctx: Context, p: np.ndarray, q: np.ndarray) -> np.ndarray:
    """(x, y) -> p(x) . q(y) in A."""
    t = np.tensordot(ctx.mu, p, axes=([0], [0]))  # (b, c, x..)
    t = np.tensordot(t, q, axes=([0], [0]))  # (c, x.., y..)
    return t


# -- MMap --------------------------------------------------------------------


class MMap:
    """A multilinear map M^arity -> A given by ``coeffs[k, u_1, ..., u_arity]``."""

    __slots__ = ("arity", "coeffs")

    def __init__(self, arity: int, coeffs):
        if arity < 0:
            raise ValueError("arity must be non-negative")
        coeffs = np.asarray(coeffs, dtype=object)
        if coeffs.ndim != arity + 1:
            raise ShapeError(f"arity-{arity} map needs a rank-{arity + 1} tensor, got shape {coeffs.shape}")
        if arity and len(set(coeffs.shape[1:])) > 1:
            raise ShapeError(f"input axes differ in size: {coeffs.shape}")
        self.arity = arity
        self.coeffs = normalize(coeffs)

    @classmethod
    def zero(cls, arity: int, dim_a: int, dim_m: int) -> "MMap":
        return cls(arity, zeros((dim_a,) + (dim_m,) * arity))

    @classmethod
    def from_data(cls, arity: int, data, dim_a: int, dim_m: int) -> "MMap":
        return cls(arity, as_tensor(data, (dim_a,) + (dim_m,) * arity))

    @classmethod
    def from_matrix(cls, matrix) -> "MMap":
        """An arity-1 map from its dim A x dim M matrix."""
        return cls(1, as_tensor(matrix))

    @property
    def dim_a(self) -> int:
        return self.coeffs.shape[0]

    @property
    def dim_m(self) -> Optional[int]:
        return self.coeffs.shape[1] if self.arity else None

    @property
    def degree(self) -> int:
        return self.arity

    def check_context(self, ctx: Context) -> None:
        want = (ctx.dim_a,) + (ctx.dim_m,) * self.arity
        if self.coeffs.shape != want:
            raise ShapeError(f"map of shape {self.coeffs.shape} does not live over context {want}")

    def __call__(self, *vectors) -> np.ndarray:
        if len(vectors) != self.arity:
            raise ValueError(f"expected {self.arity} arguments")
        out = self.coeffs
        for v in reversed(vectors):
            out = np.tensordot(out, np.asarray(v, dtype=object), axes=([-1], [0]))
        return out

    def _same(self, other: "MMap") -> None:
        if not isinstance(other, MMap) or other.coeffs.shape != self.coeffs.shape:
            raise ShapeError("maps of different shapes")

    def __add__(self, other: "MMap") -> "MMap":
        self._same(other)
        return MMap(self.arity, self.coeffs + other.coeffs)

    def __sub__(self, other: "MMap") -> "MMap":
        self._same(other)
        return MMap(self.arity, self.coeffs - other.coeffs)

    def __neg__(self) -> "MMap":
        return MMap(self.arity, -self.coeffs)

    def scale(self, c) -> "MMap":
        return MMap(self.arity, self.coeffs * canon(c))

    def __rmul__(self, c) -> "MMap":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        return isinstance(other, MMap) and self.arity == other.arity and equal(self.coeffs, other.coeffs)

    __hash__ = None

    def is_zero(self) -> bool:
        return is_zero(self.coeffs)

    def to_json(self) -> dict:
        return {"arity": self.arity, "coeffs": to_nested(self.coeffs)}

    @classmethod
    def from_json(cls, doc: dict) -> "MMap":
        return cls(int(doc["arity"]), as_tensor(doc["coeffs"]))

    def __repr__(self) -> str:
        return f"MMap(arity={self.arity}, shape={self.coeffs.shape})"


def derived_bracket(ctx: Context, p: MMap, q: MMap) -> MMap:
    """The graded Lie bracket on Hom(M^*, A) whose MC elements are O-operators.

    Implemented from the general insertion formula; arity-0 arguments (elements
    of A) are handled by the same formula with empty insertion blocks.
    """
    p.check_context(ctx)
    q.check_context(ctx)
    m, n = p.arity, q.arity
    P, Q = p.coeffs, q.coeffs
    out = zeros((ctx.dim_a,) + (ctx.dim_m,) * (m + n))
    sign_mn = -1 if (m * n) % 2 else 1

    if m:
        ql, qr = _left_of(ctx, Q), _right_of(ctx, Q)
        for i in range(1, m + 1):
            out = out + (-1) ** ((i - 1) * n) * insert(P, i - 1, ql)
            out = out - (-1) ** (i * n) * insert(P, i - 1, qr)
    if n:
        pl, pr = _left_of(ctx, P), _right_of(ctx, P)
        block = zeros(out.shape)
        for i in range(1, n + 1):
            block = block + (-1) ** ((i - 1) * m) * insert(Q, i - 1, pl)
            block = block - (-1) ** (i * m) * insert(Q, i - 1, pr)
        out = out - sign_mn * block
    pq = _product(ctx, P, Q)
    qp = _product(ctx, Q, P)
    out = out + sign_mn * (pq - sign_mn * qp)
    return MMap(m + n, out)


# -- TupleCochain --------------------------------------------------------------


class TupleCochain:
    """An element of the compatible lift: ``degree + 1`` maps of arity ``degree``
    (a single element of A in degree 0)."""

    __slots__ = ("degree", "parts")

    def __init__(self, degree: int, parts: Sequence[MMap]):
        parts = tuple(parts)
        want = 1 if degree == 0 else degree + 1
        if len(parts) != want:
            raise ShapeError(f"degree-{degree} cochain needs {want} parts, got {len(parts)}")
        shapes = {x.coeffs.shape for x in parts}
        if len(shapes) != 1 or any(x.arity != degree for x in parts):
            raise ShapeError("parts must share one arity equal to the degree")
        self.degree = degree
        self.parts = parts

    @classmethod
    def zero(cls, degree: int, dim_a: int, dim_m: int) -> "TupleCochain":
        n = 1 if degree == 0 else degree + 1
        return cls(degree, [MMap.zero(degree, dim_a, dim_m) for _ in range(n)])

    @classmethod
    def pair(cls, t1: MMap, t2: MMap) -> "TupleCochain":
        return cls(1, [t1, t2])

    def check_context(self, ctx: Context) -> None:
        for x in self.parts:
            x.check_context(ctx)

    def __add__(self, other: "TupleCochain") -> "TupleCochain":
        if self.degree != other.degree:
            raise ShapeError("degrees differ")
        return TupleCochain(self.degree, [a + b for a, b in zip(self.parts, other.parts)])

    def __sub__(self, other: "TupleCochain") -> "TupleCochain":
        return self + (-other)

    def __neg__(self) -> "TupleCochain":
        return TupleCochain(self.degree, [-a for a in self.parts])

    def scale(self, c) -> "TupleCochain":
        return TupleCochain(self.degree, [a.scale(c) for a in self.parts])

    def __rmul__(self, c) -> "TupleCochain":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, TupleCochain)
            and self.degree == other.degree
            and all(a == b for a, b in zip(self.parts, other.parts))
        )

    __hash__ = None

    def is_zero(self) -> bool:
        return all(a.is_zero() for a in self.parts)

    def to_json(self) -> dict:
        return {"degree": self.degree, "parts": [a.to_json() for a in self.parts]}

    @classmethod
    def from_json(cls, doc: dict) -> "TupleCochain":
        return cls(int(doc["degree"]), [MMap.from_json(p) for p in doc["parts"]])

    def __repr__(self) -> str:
        return f"TupleCochain(degree={self.degree}, parts={len(self.parts)})"


def lifted_bracket(ctx: Context, x: TupleCochain, y: TupleCochain) -> TupleCochain:
    """Convolution bracket: part ``i`` collects ``[x_p, y_q]`` over ``p + q = i``."""
    x.check_context(ctx)
    y.check_context(ctx)
    deg = x.degree + y.degree
    nparts = 1 if deg == 0 else deg + 1
    parts = [MMap.zero(deg, ctx.dim_a, ctx.dim_m) for _ in range(nparts)]
    for p, xp in enumerate(x.parts):
        for q, yq in enumerate(y.parts):
            parts[p + q] = parts[p + q] + derived_bracket(ctx, xp, yq)
    return TupleCochain(deg, parts)


def theta(x: TupleCochain) -> MMap:
    out = x.parts[0]
    for part in x.parts[1:]:
        out = out + part
    return out


# -- MixedMap ------------------------------------------------------------------


def block_bidegree(inputs: str, output: str) -> tuple:
    """Bidegree k|l of the block with the given input/output letters (A or M)."""
    n = len(inputs)
    l = inputs.count("M") - (1 if output == "M" else 0)
    return (n - 1 - l, l)


class MixedMap:
    """A map (A + M)^arity -> A + M stored as nonzero bidegree components.

    Each component is a full coefficient tensor on A + M of shape
    ``(N,) * (arity + 1)`` with ``N = dim A + dim M``, vanishing outside the
    blocks allowed by its bidegree.
    """

    __slots__ = ("dim_a", "dim_m", "arity", "components")

    def __init__(self, dim_a: int, dim_m: int, arity: int, components: Optional[dict] = None):
        if arity < 1:
            raise ValueError("mixed maps have arity >= 1")
        self.dim_a, self.dim_m, self.arity = dim_a, dim_m, arity
        n = dim_a + dim_m
        comps = {}
        for bideg, t in (components or {}).items():
            t = np.asarray(t, dtype=object)
            if t.shape != (n,) * (arity + 1):
                raise ShapeError(f"component shape {t.shape} on a {n}-dim space with arity {arity}")
            if tuple(bideg) not in self.allowed_bidegrees():
                raise ShapeError(f"bidegree {bideg} impossible in arity {arity}")
            if not _matches_bidegree(t, dim_a, tuple(bideg)):
                raise ShapeError(f"component stored under {bideg} has entries outside that bidegree")
            if not is_zero(t):
                comps[tuple(bideg)] = t
        self.components = comps

    # construction

    @property
    def dim(self) -> int:
        return self.dim_a + self.dim_m

    def allowed_bidegrees(self) -> list:
        return [(self.arity - 1 - l, l) for l in range(-1, self.arity + 1)]

    @classmethod
    def from_full(cls, dim_a: int, dim_m: int, tensor) -> "MixedMap":
        t = np.asarray(tensor, dtype=object)
        arity = t.ndim - 1
        comps: dict = {}
        for inputs, output in _patterns(arity):
            sl = _block_slices(dim_a, dim_a + dim_m, inputs, output)
            blk = t[sl]
            if blk.size == 0 or is_zero(blk):
                continue
            bideg = block_bidegree(inputs, output)
            if bideg not in comps:
                comps[bideg] = zeros(t.shape)
            comps[bideg][sl] = blk
        return cls(dim_a, dim_m, arity, comps)

    @classmethod
    def from_blocks(cls, dim_a: int, dim_m: int, arity: int, blocks: dict) -> "MixedMap":
        """Build from ``{"AM>M": tensor, ...}``; each block tensor has the
        output axis first and block-local indices."""
        n = dim_a + dim_m
        full = zeros((n,) * (arity + 1))
        for key, data in blocks.items():
            inputs, output = _split_pattern(key)
            if len(inputs) != arity:
                raise ShapeError(f"block {key!r} does not have arity {arity}")
            sl = _block_slices(dim_a, n, inputs, output)
            shape = full[sl].shape
            full[sl] = full[sl] + as_tensor(data, shape)
        return cls.from_full(dim_a, dim_m, full)

    @classmethod
    def from_mmap(cls, f: MMap, dim_m: int) -> "MixedMap":
        """Embed Hom(M^n, A) as the bidegree -1|n component."""
        if f.arity == 0:
            raise ValueError("elements of A are not mixed maps")
        return cls.from_blocks(f.dim_a, dim_m, f.arity, {"M" * f.arity + ">A": f.coeffs})

    @classmethod
    def structure(cls, ctx: Context) -> "MixedMap":
        """pi = mu + l + r, of bidegree 1|0."""
        left = np.moveaxis(ctx.left, 2, 0)  # (v, i, u)
        right = np.moveaxis(ctx.right, 2, 0)  # (v, u, i)
        return cls.from_blocks(
            ctx.dim_a, ctx.dim_m, 2, {"AA>A": np.moveaxis(ctx.mu, 2, 0), "AM>M": left, "MA>M": right}
        )

    @classmethod
    def zero(cls, dim_a: int, dim_m: int, arity: int) -> "MixedMap":
        return cls(dim_a, dim_m, arity, {})

    # access

    def full(self) -> np.ndarray:
        out = zeros((self.dim,) * (self.arity + 1))
        for t in self.components.values():
            out = out + t
        return out

    def block(self, key: str) -> np.ndarray:
        inputs, output = _split_pattern(key)
        if len(inputs) != self.arity:
            raise ShapeError(f"block {key!r} does not have arity {self.arity}")
        t = self.components.get(block_bidegree(inputs, output))
        sl = _block_slices(self.dim_a, self.dim, inputs, output)
        if t is None:
            return zeros(zeros((self.dim,) * (self.arity + 1))[sl].shape)
        return t[sl].copy()

    def component(self, bidegree) -> "MixedMap":
        t = self.components.get(tuple(bidegree))
        return MixedMap(self.dim_a, self.dim_m, self.arity, {} if t is None else {tuple(bidegree): t})

    def to_mmap(self) -> MMap:
        """The projection onto Hom(M^arity, A) (the -1|arity component)."""
        return MMap(self.arity, self.block("M" * self.arity + ">A"))

    # algebra

    def _same(self, other: "MixedMap") -> None:
        if (self.dim_a, self.dim_m, self.arity) != (other.dim_a, other.dim_m, other.arity):
            raise ShapeError("mixed maps over different spaces or arities")

    def __add__(self, other: "MixedMap") -> "MixedMap":
        self._same(other)
        comps = dict(self.components)
        for k, t in other.components.items():
            comps[k] = comps[k] + t if k in comps else t
        return MixedMap(self.dim_a, self.dim_m, self.arity, comps)

    def __neg__(self) -> "MixedMap":
        return MixedMap(self.dim_a, self.dim_m, self.arity, {k: -t for k, t in self.components.items()})

    def __sub__(self, other: "MixedMap") -> "MixedMap":
        return self + (-other)

    def scale(self, c) -> "MixedMap":
        c = canon(c)
        return MixedMap(self.dim_a, self.dim_m, self.arity, {k: t * c for k, t in self.components.items()})

    def __rmul__(self, c) -> "MixedMap":
        return self.scale(c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedMap):
            return False
        if (self.dim_a, self.dim_m, self.arity) != (other.dim_a, other.dim_m, other.arity):
            return False
        keys = set(self.components) | set(other.components)
        z = zeros((self.dim,) * (self.arity + 1))
        return all(equal(self.components.get(k, z), other.components.get(k, z)) for k in keys)

    __hash__ = None

    def is_zero(self) -> bool:
        return not self.components

    def __repr__(self) -> str:
        return f"MixedMap(arity={self.arity}, bidegrees={sorted(self.components)})"


def bidegree_of(f: MixedMap) -> Optional[tuple]:
    if len(f.components) == 1:
        return next(iter(f.components))
    return None


def compose(f: MixedMap, i: int, g: MixedMap) -> MixedMap:
    """The partial composition ``f o_i g`` (``i`` is 1-based)."""
    if (f.dim_a, f.dim_m) != (g.dim_a, g.dim_m):
        raise ShapeError("mixed maps over different spaces")
    return MixedMap.from_full(f.dim_a, f.dim_m, insert(f.full(), i - 1, g.full()))


def gerstenhaber(f: MixedMap, g: MixedMap) -> MixedMap:
    """[f, g] = sum_i (-1)^((i-1)n) f o_i g - (-1)^(mn) sum_i (-1)^((i-1)m) g o_i f
    for f of arity m + 1 and g of arity n + 1."""
    if (f.dim_a, f.dim_m) != (g.dim_a, g.dim_m):
        raise ShapeError("mixed maps over different spaces")
    m, n = f.arity - 1, g.arity - 1
    F, G = f.full(), g.full()
    out = zeros((f.dim,) * (m + n + 2))
    if not f.is_zero() and not g.is_zero():
        for i in range(1, m + 2):
            out = out + (-1) ** ((i - 1) * n) * insert(F, i - 1, G)
        rev = zeros(out.shape)
        for i in range(1, n + 2):
            rev = rev + (-1) ** ((i - 1) * m) * insert(G, i - 1, F)
        out = out - (-1) ** (m * n) * rev
    return MixedMap.from_full(f.dim_a, f.dim_m, out)


# -- pattern helpers -------------------------------------------------------------


def _patterns(arity: int):
    for inputs in itertools.product("AM", repeat=arity):
        for output in "AM":
            yield "".join(inputs), output


def block_keys(arity: int) -> list:
    """All block patterns of a given arity, e.g. ``"AM>M"``."""
    return [f"{inputs}>{output}" for inputs, output in _patterns(arity)]


def _split_pattern(key: str) -> tuple:
    if ">" not in key:
        raise ValueError(f"block pattern {key!r} must look like 'AM>M'")
    inputs, output = key.split(">")
    if set(inputs) - {"A", "M"} or output not in ("A", "M"):
        raise ValueError(f"bad block pattern {key!r}")
    return inputs, output


def _block_slices(dim_a: int, n: int, inputs: str, output: str) -> tuple:
    sl = {"A": slice(0, dim_a), "M": slice(dim_a, n)}
    return (sl[output],) + tuple(sl[c] for c in inputs)


def _matches_bidegree(t: np.ndarray, dim_a: int, bideg: tuple) -> bool:
    arity = t.ndim - 1
    n = t.shape[0]
    for inputs, output in _patterns(arity):
        if block_bidegree(inputs, output) == bideg:
            continue
        blk = t[_block_slices(dim_a, n, inputs, output)]
        if blk.size and not is_zero(blk):
            return False
    return True


def iter_basis_mmaps(arity: int, dim_a: int, dim_m: int) -> Iterable[MMap]:
    for idx in np.ndindex((dim_a,) + (dim_m,) * arity):
        t = zeros((dim_a,) + (dim_m,) * arity)
        t[idx] = 1
        yield MMap(arity, t)
