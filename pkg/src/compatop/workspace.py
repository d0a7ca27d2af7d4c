"""The workspace document: one JSON file describing an algebra, a bimodule and
whatever structures the commands act on.

Parsing is two-pass.  The bundled JSON schema checks the document layout,
then every tensor is checked against the dimensions it must have and every
scalar is parsed to an exact rational.  Problems are reported together, each
tagged with a JSON path such as ``$.algebra.mu[0][1]``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Optional

import jsonschema

from .algebra import Algebra, Bimodule, adjoint_bimodule
from .cochains import Context
from .deformation import FullDeformation, PairDeformation
from .dendriform import CompatibleDendriform
from .operators import LinOp, OperatorPair
from .tensors import as_tensor, canon, equal, parse_scalar, to_nested, zeros


@dataclass(frozen=True)
class SchemaError:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


class WorkspaceError(ValueError):
    """The document could not be turned into a workspace."""

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(str(e) for e in self.errors))


class MissingBlockError(KeyError):
    def __init__(self, block: str, command: str):
        self.block, self.command = block, command
        super().__init__(block)

    def __str__(self) -> str:
        return f"command {self.command!r} needs the {self.block!r} block in the workspace"


@lru_cache(maxsize=None)
def workspace_schema() -> dict:
    text = resources.files("compatop").joinpath("schemas/workspace.schema.json").read_text("utf-8")
    return json.loads(text)


def json_path(parts) -> str:
    out = "$"
    for p in parts:
        out += f"[{p}]" if isinstance(p, int) else f".{p}"
    return out


@dataclass(eq=False)
class WorkspaceDocument:
    algebra: Algebra
    bimodule: Optional[Bimodule] = None
    operators: Optional[tuple] = None
    dendriform: Optional[CompatibleDendriform] = None
    deformation: Optional[object] = None
    tensors: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    ground_field: str = "rational"

    @property
    def context(self) -> Context:
        """A with M; the adjoint bimodule stands in when none is given."""
        bim = self.bimodule if self.bimodule is not None else adjoint_bimodule(self.algebra)
        return Context(self.algebra, bim)

    @property
    def pair(self) -> Optional[OperatorPair]:
        if self.operators is None:
            return None
        ctx = self.context
        return OperatorPair(LinOp(ctx, self.operators[0]), LinOp(ctx, self.operators[1]))

    def require(self, block: str, command: str):
        value = {
            "operators": self.operators,
            "dendriform": self.dendriform,
            "deformation": self.deformation,
            "tensors": self.tensors or None,
        }[block]
        if value is None:
            raise MissingBlockError(block, command)
        return value

    def to_json(self) -> dict:
        out: dict = {
            "field": self.ground_field,
            "algebra": {"dim": self.algebra.dim, "mu": to_nested(self.algebra.mu)},
        }
        if self.bimodule is not None:
            b = self.bimodule
            out["bimodule"] = {"module_dim": b.module_dim, "left": to_nested(b.left), "right": to_nested(b.right)}
        if self.operators is not None:
            out["operators"] = {"T1": to_nested(self.operators[0]), "T2": to_nested(self.operators[1])}
        if self.dendriform is not None:
            out["dendriform"] = self.dendriform.to_json()
        if self.deformation is not None:
            out["deformation"] = self.deformation.to_json()
        if self.tensors:
            out["tensors"] = {k: to_nested(v) for k, v in sorted(self.tensors.items())}
        return out


def dump_workspace(doc: WorkspaceDocument) -> str:
    return json.dumps(doc.to_json(), indent=2, sort_keys=True) + "\n"


# -- validation ----------------------------------------------------------------------


def _unknown_keys(schema: dict, node, path: list, root: dict, out: list) -> None:
    if "$ref" in schema:
        name = schema["$ref"].rsplit("/", 1)[-1]
        schema = root["$defs"][name]
    props = schema.get("properties")
    if props is None or not isinstance(node, dict):
        return
    for key, value in node.items():
        if key in props:
            _unknown_keys(props[key], value, path + [key], root, out)
        else:
            out.append(SchemaError(json_path(path + [key]), "unknown key ignored"))


class _Reader:
    """Collects errors while converting validated JSON into exact tensors."""

    def __init__(self):
        self.errors: list = []

    def error(self, path, message: str) -> None:
        self.errors.append(SchemaError(json_path(path), message))

    def tensor(self, data, shape: tuple, path: list):
        before = len(self.errors)
        self._walk(data, shape, 0, path)
        if len(self.errors) > before:
            return None
        if 0 in shape:
            return zeros(shape)
        return as_tensor(_parsed(data), shape)

    def _walk(self, data, shape, depth, path) -> None:
        if depth == len(shape):
            if isinstance(data, list):
                self.error(path, "expected a scalar, found an array")
                return
            try:
                parse_scalar(data)
            except (ValueError, ZeroDivisionError) as exc:
                self.error(path, f"malformed scalar {data!r} ({exc})")
            return
        if not isinstance(data, list):
            self.error(path, f"expected an array of length {shape[depth]}, found a scalar")
            return
        if len(data) != shape[depth]:
            self.error(path, f"shape mismatch: expected length {shape[depth]} (shape {list(shape)}), found {len(data)}")
            return
        for i, sub in enumerate(data):
            self._walk(sub, shape, depth + 1, path + [i])

    def series(self, data, shape: tuple, length: int, path: list):
        if len(data) != length:
            self.error(path, f"expected {length} coefficients (orders 0..{length - 1}), found {len(data)}")
            return None
        out = [self.tensor(x, shape, path + [i]) for i, x in enumerate(data)]
        return None if any(x is None for x in out) else out


def _parsed(data):
    if isinstance(data, list):
        return [_parsed(x) for x in data]
    return canon(parse_scalar(data))


def parse_workspace(text) -> WorkspaceDocument:
    """Validate and parse a workspace document; raises :class:`WorkspaceError`."""
    if isinstance(text, bytes):
        try:
            text = text.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise WorkspaceError([SchemaError("$", f"not UTF-8: {exc}")]) from None
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise WorkspaceError([SchemaError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}")]) from None
    return workspace_from_json(raw)


def workspace_from_json(raw) -> WorkspaceDocument:
    schema = workspace_schema()
    validator = jsonschema.Draft202012Validator(schema)
    errors = [
        SchemaError(json_path(e.absolute_path), e.message)
        for e in sorted(validator.iter_errors(raw), key=lambda e: [str(p) for p in e.absolute_path])
    ]
    if errors:
        raise WorkspaceError(errors)
    warnings: list = []
    _unknown_keys(schema, raw, [], schema, warnings)

    rd = _Reader()
    da = raw["algebra"]["dim"]
    mu = rd.tensor(raw["algebra"]["mu"], (da,) * 3, ["algebra", "mu"])

    dm = da
    left = right = None
    if "bimodule" in raw:
        b = raw["bimodule"]
        dm = b["module_dim"]
        left = rd.tensor(b["left"], (da, dm, dm), ["bimodule", "left"])
        right = rd.tensor(b["right"], (dm, da, dm), ["bimodule", "right"])

    ops = None
    if "operators" in raw:
        o = raw["operators"]
        t1 = rd.tensor(o["T1"], (da, dm), ["operators", "T1"])
        t2 = rd.tensor(o["T2"], (da, dm), ["operators", "T2"])
        ops = (t1, t2)

    dend = None
    if "dendriform" in raw:
        blk = raw["dendriform"]
        dd = blk["dim"]
        parts = {k: rd.tensor(blk[k], (dd,) * 3, ["dendriform", k]) for k in ("prec1", "succ1", "prec2", "succ2")}
        dend = (dd, parts)

    deform = None
    if "deformation" in raw:
        blk = raw["deformation"]
        n = blk["order"] + 1
        series = {k: rd.series(blk[k], (da, dm), n, ["deformation", k]) for k in ("T1", "T2")}
        full_keys = [k for k in ("mu", "l", "r") if k in blk]
        if full_keys and len(full_keys) != 3:
            missing = sorted({"mu", "l", "r"} - set(full_keys))
            rd.error(["deformation"], f"a full deformation needs mu, l and r; missing {missing}")
        elif full_keys:
            shapes = {"mu": (da, da, da), "l": (da, dm, dm), "r": (dm, da, dm)}
            series.update({k: rd.series(blk[k], shapes[k], n, ["deformation", k]) for k in full_keys})
        deform = (full_keys, series)

    tens = {}
    if "tensors" in raw:
        for k in ("r1", "r2"):
            if k in raw["tensors"]:
                tens[k] = rd.tensor(raw["tensors"][k], (da, da), ["tensors", k])

    if rd.errors:
        raise WorkspaceError(rd.errors)

    alg = Algebra(da, mu)
    bim = Bimodule(da, dm, left, right) if left is not None else None
    base_bim = bim if bim is not None else adjoint_bimodule(alg)
    doc = WorkspaceDocument(alg, bim, warnings=warnings)
    if ops is not None:
        doc.operators = ops
    if dend is not None:
        dd, parts = dend
        doc.dendriform = CompatibleDendriform(dd, parts["prec1"], parts["succ1"], parts["prec2"], parts["succ2"])
    if deform is not None:
        doc.deformation = _build_deformation(doc, base_bim, *deform, rd)
    doc.tensors = tens
    if rd.errors:
        raise WorkspaceError(rd.errors)
    return doc


def _build_deformation(doc: WorkspaceDocument, bim: Bimodule, full_keys, series, rd: _Reader):
    """Coefficient 0 has to agree with the undeformed blocks of the document."""
    if doc.operators is not None:
        for k, base in zip(("T1", "T2"), doc.operators):
            if not equal(series[k][0], base):
                rd.error(["deformation", k, 0], f"order-0 coefficient differs from operators.{k}")
    if full_keys:
        for k, base in (("mu", doc.algebra.mu), ("l", bim.left), ("r", bim.right)):
            if not equal(series[k][0], base):
                rd.error(["deformation", k, 0], "order-0 coefficient differs from the algebra/bimodule blocks")
        return FullDeformation(series["mu"], series["l"], series["r"], series["T1"], series["T2"])
    ctx = Context(doc.algebra, bim)
    return PairDeformation.from_matrices(ctx, series["T1"], series["T2"])


def load_workspace(path) -> WorkspaceDocument:
    with open(path, "rb") as fh:
        return parse_workspace(fh.read())


__all__ = [
    "MissingBlockError",
    "SchemaError",
    "WorkspaceDocument",
    "WorkspaceError",
    "dump_workspace",
    "load_workspace",
    "parse_workspace",
    "workspace_from_json",
    "workspace_schema",
]
