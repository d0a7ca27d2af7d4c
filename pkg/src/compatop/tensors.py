"""Dense coefficient tensors over the rationals.

Every structure constant, multilinear map and cochain in the package is a
numpy object array of exact scalars: plain ``int`` when integral, otherwise
:class:`fractions.Fraction` (the two mix exactly).  Axis 0 is always the output
index; the remaining axes are the inputs in order.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

import numpy as np

ZERO = 0
ONE = 1


class ShapeError(ValueError):
    """Tensor or matrix dimensions do not fit together."""


def parse_scalar(s) -> Fraction:
    """Parse ``"p/q"``, ``"p"``, an int or a Fraction into a reduced Fraction."""
    if isinstance(s, Fraction):
        return s
    if isinstance(s, bool):
        raise ValueError(f"not a rational scalar: {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if isinstance(s, str):
        text = s.strip()
        if "/" in text:
            p, q = text.split("/", 1)
            p, q = int(p), int(q)
            if q == 0:
                raise ValueError(f"zero denominator in {s!r}")
            return Fraction(p, q)
        return Fraction(int(text))
    raise ValueError(f"not a rational scalar: {s!r}")


def canon(x):
    """Exact scalar in canonical form: ``int`` when integral, else ``Fraction``.

    Python ints are much faster than Fractions and mix with them exactly.
    """
    t = type(x)
    if t is int:
        return x
    if t is not Fraction:
        if isinstance(x, bool):
            raise ValueError(f"not a rational scalar: {x!r}")
        if isinstance(x, int):
            return int(x)
        x = Fraction(x)
        x = Fraction(int(x.numerator), int(x.denominator))
    return x.numerator if x.denominator == 1 else x


def _entry(x):
    t = type(x)
    if t is int or t is Fraction:
        return canon(x)
    return canon(parse_scalar(x))


_canon_all = np.frompyfunc(canon, 1, 1)
_entry_all = np.frompyfunc(_entry, 1, 1)


def format_scalar(x) -> str:
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def zeros(shape) -> np.ndarray:
    if isinstance(shape, int):
        shape = (shape,)
    return np.full(tuple(shape), ZERO, dtype=object)


def as_tensor(data, shape=None) -> np.ndarray:
    """Nested lists of scalars (or strings) -> object array of exact scalars."""
    arr = np.array(data, dtype=object)
    if shape is not None:
        shape = tuple(shape)
        if arr.size == 0 and 0 in shape:
            return zeros(shape)
        if arr.shape != shape:
            raise ShapeError(f"expected shape {shape}, got {arr.shape}")
    if arr.size == 0:
        return np.empty(arr.shape, dtype=object)
    return np.asarray(_entry_all(arr), dtype=object).reshape(arr.shape)


def normalize(arr) -> np.ndarray:
    """Coerce every entry to canonical exact form."""
    arr = np.asarray(arr, dtype=object)
    if arr.size == 0:
        return np.empty(arr.shape, dtype=object)
    return np.asarray(_canon_all(arr), dtype=object).reshape(arr.shape)


def to_nested(arr) -> list:
    """Object array -> nested lists of ``"p/q"`` strings."""
    arr = np.asarray(arr, dtype=object)
    if arr.ndim == 0:
        return format_scalar(arr[()])
    return [to_nested(sub) for sub in arr]


def is_zero(arr) -> bool:
    arr = np.asarray(arr, dtype=object)
    return all(x == 0 for x in arr.flat)


def equal(a, b) -> bool:
    a = np.asarray(a, dtype=object)
    b = np.asarray(b, dtype=object)
    return a.shape == b.shape and all(x == y for x, y in zip(a.flat, b.flat))


def nonzero_entries(arr) -> list[tuple[tuple[int, ...], Fraction]]:
    arr = np.asarray(arr, dtype=object)
    return [(idx, Fraction(arr[idx])) for idx in np.ndindex(arr.shape) if arr[idx] != 0]


def einsum(subscripts: str, *operands) -> np.ndarray:
    """Exact einsum; always returns an object array (also for empty axes)."""
    ops = [np.asarray(op, dtype=object) for op in operands]
    out = np.einsum(subscripts, *ops, dtype=object, optimize=False)
    if not isinstance(out, np.ndarray):
        out = np.array(out, dtype=object)
    if any(0 in op.shape for op in ops):
        return normalize(out)
    return out


LETTERS = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"


class Letters:
    """Hands out fresh einsum index letters."""

    def __init__(self, start: int = 0):
        self._it = iter(LETTERS[start:])

    def take(self, n: int = 1) -> str:
        return "".join(next(self._it) for _ in range(n))


def basis_tensors(shape) -> Iterator[np.ndarray]:
    """Yield the standard basis of the tensor space of the given shape (C order)."""
    shape = tuple(shape)
    for idx in np.ndindex(shape):
        t = zeros(shape)
        t[idx] = ONE
        yield t


def flatten(arr) -> list:
    return [canon(x) for x in np.asarray(arr, dtype=object).flat]


def unflatten(vec: Sequence, shape) -> np.ndarray:
    shape = tuple(shape)
    out = zeros(shape)
    flat = out.reshape(-1)
    if len(vec) != flat.size:
        raise ShapeError(f"vector of length {len(vec)} does not fill shape {shape}")
    for i, x in enumerate(vec):
        flat[i] = canon(x)
    return out


def random_tensor(rng, shape, values: Iterable = (-2, -1, 0, 1, 2), density: float = 1.0) -> np.ndarray:
    """Random small-integer tensor; ``rng`` is a :class:`random.Random`."""
    values = list(values)
    out = zeros(shape)
    for idx in np.ndindex(tuple(shape)):
        if density >= 1.0 or rng.random() < density:
            out[idx] = canon(rng.choice(values))
    return out


def multi_indices(dims: Sequence[int]) -> Iterator[tuple[int, ...]]:
    return itertools.product(*[range(d) for d in dims])
