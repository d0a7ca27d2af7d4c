"""Subcommands over a workspace and the report they produce.

A :class:`Report` is plain data: the echoed command, a list of check
verdicts, computed results and wall-clock timing.  Timing is kept out of the
emitted JSON unless asked for, so the same document and command always give
byte-identical output.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    check_associative,
    check_bimodule,
    check_compatible_associative,
    check_compatible_bimodule,
)
from .cochains import block_keys, lifted_bracket
from .cohomology import OComplex, PairComplex, check_square_zero, cohomology, induced_cass_complex
from .deformation import (
    FullDeformation,
    PairDeformation,
    check_full_deformation,
    check_pair_deformation,
    is_extensible,
    obstruction,
)
from .dendriform import (
    CDendComplex,
    check_compatible_dendriform,
    check_square,
    check_triangle,
    induced_dendriform,
)
from .linalg import ContainmentError
from .linfty import COAComplex, mc_defect, structure_element
from .operators import (
    OperatorPair,
    aybe_check,
    compatible_aybe_check,
    induced_compatible_algebra,
    induced_compatible_bimodule,
    is_compatible_pair,
    is_ooperator,
    is_skew,
    rb_from_tensor,
    sharp,
)
from .report import CheckReport
from .tensors import to_nested
from .workspace import MissingBlockError, WorkspaceDocument

COMMANDS = ("check", "cohomology", "mc", "obstruct", "extend", "aybe", "dendriform", "induce")
COMPLEXES = ("o", "co", "cass", "coa", "cdend")


class UsageError(ValueError):
    """The command cannot run on this document with these options."""


@dataclass
class Report:
    command: dict = field(default_factory=dict)
    checks: list = field(default_factory=list)
    results: dict = field(default_factory=dict)
    warnings: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckReport) -> CheckReport:
        self.checks.append(check)
        return check

    def to_json(self, include_timing: bool = False) -> dict:
        out: dict = {}
        if self.command:
            out["command"] = self.command
        if self.checks:
            out["passed"] = self.passed
            out["verdicts"] = [c.to_json() for c in self.checks]
        if self.results:
            out["results"] = self.results
        if self.warnings:
            out["warnings"] = list(self.warnings)
        if include_timing and self.timing:
            out["timing"] = {k: round(v, 6) for k, v in self.timing.items()}
        return out


# -- rendering ---------------------------------------------------------------------------


def emit_report(r: Report, fmt: str = "json", include_timing: bool = False) -> str:
    doc = r.to_json(include_timing)
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True) + "\n"
    if fmt == "text":
        return _text(doc)
    if fmt == "tsv":
        rows = ["key\tvalue"] + [f"{k}\t{v}" for k, v in _flatten(doc, "")]
        return "\n".join(rows) + "\n"
    raise ValueError(f"unknown report format {fmt!r}")


def _scalar_text(v) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, separators=(",", ":"))
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _flatten(node, prefix: str):
    if isinstance(node, dict):
        for k in sorted(node):
            yield from _flatten(node[k], f"{prefix}.{k}" if prefix else k)
    elif isinstance(node, list) and node and all(isinstance(x, dict) for x in node):
        for i, x in enumerate(node):
            yield from _flatten(x, f"{prefix}[{i}]")
    else:
        yield prefix, _scalar_text(node)


def _text(doc: dict) -> str:
    if not doc:
        return "(empty report)\n"
    lines = []
    cmd = doc.get("command")
    if cmd:
        opts = " ".join(f"{k}={_scalar_text(v)}" for k, v in sorted(cmd.get("options", {}).items()))
        lines.append(f"command: {cmd.get('name', '')} {opts}".rstrip())
        if "input" in cmd:
            lines.append(f"input: {cmd['input']}")
    if "passed" in doc:
        lines.append(f"overall: {'PASS' if doc['passed'] else 'FAIL'}")
        for v in doc["verdicts"]:
            _text_check(v, 1, lines)
    if "results" in doc:
        lines.append("results:")
        _text_tree(doc["results"], 1, lines)
    for w in doc.get("warnings", ()):
        lines.append(f"warning: {w}")
    if "timing" in doc:
        lines.append("timing (s):")
        _text_tree(doc["timing"], 1, lines)
    return "\n".join(lines) + "\n"


def _text_check(v: dict, depth: int, lines: list) -> None:
    pad = "  " * depth
    lines.append(f"{pad}[{'pass' if v['passed'] else 'FAIL'}] {v['check']}")
    for d in v.get("defects", ()):
        lines.append(f"{pad}    defect {d['identity']} at {tuple(d['index'])}: {_scalar_text(d['defect'])}")
    if "details" in v:
        _text_tree(v["details"], depth + 2, lines)
    for sub in v.get("subchecks", ()):
        _text_check(sub, depth + 1, lines)


def _text_tree(node, depth: int, lines: list) -> None:
    pad = "  " * depth
    for key, value in _flatten(node, ""):
        lines.append(f"{pad}{key}: {value}")


# -- commands ----------------------------------------------------------------------------


def run_command(cmd: str, doc: WorkspaceDocument, *, complex: Optional[str] = None,
                degrees: Optional[Sequence[int]] = None, order: Optional[int] = None,
                operator: int = 1, input_name: Optional[str] = None) -> Report:
    """Run one subcommand.  Raises :class:`UsageError` (or MissingBlockError)
    for requests the document cannot serve; mathematical failures end up as
    failing verdicts instead."""
    if cmd not in COMMANDS:
        raise UsageError(f"unknown command {cmd!r}; expected one of {', '.join(COMMANDS)}")
    options: dict = {}
    if cmd == "cohomology":
        if complex not in COMPLEXES:
            raise UsageError(f"--complex must be one of {', '.join(COMPLEXES)}")
        options["complex"] = complex
        if complex == "o":
            if operator not in (1, 2):
                raise UsageError("--operator must be 1 or 2")
            options["operator"] = operator
    if cmd in ("cohomology", "dendriform"):
        degrees = [0, 1, 2] if not degrees else sorted(set(int(n) for n in degrees))
        if degrees[0] < 0:
            raise UsageError("degrees must be non-negative")
        options["degrees"] = degrees
    if cmd in ("obstruct", "extend") and order is not None:
        if order < 0:
            raise UsageError("--order must be non-negative")
        options["order"] = order

    report = Report(command={"name": cmd, "options": options})
    if input_name is not None:
        report.command["input"] = input_name
    report.warnings = [str(w) for w in doc.warnings]
    start = time.perf_counter()
    _HANDLERS[cmd](doc, report, options)
    report.timing["total"] = time.perf_counter() - start
    return report


def _pair(doc: WorkspaceDocument, cmd: str) -> OperatorPair:
    doc.require("operators", cmd)
    return doc.pair


def _base_checks(doc: WorkspaceDocument, report: Report) -> bool:
    a = report.add(check_associative(doc.algebra))
    b = check_bimodule(doc.algebra, doc.context.bimodule)
    if doc.bimodule is None:
        b.name = "bimodule (adjoint, implied)"
    report.add(b)
    return a.passed and b.passed


def _cmd_check(doc, report, options):
    _base_checks(doc, report)
    blocks = ["algebra"] + (["bimodule"] if doc.bimodule is not None else [])
    if doc.operators is not None:
        blocks.append("operators")
        report.add(is_compatible_pair(doc.pair))
    if doc.dendriform is not None:
        blocks.append("dendriform")
        report.add(check_compatible_dendriform(doc.dendriform))
    if doc.deformation is not None:
        blocks.append("deformation")
        d = doc.deformation
        report.add(check_full_deformation(d) if isinstance(d, FullDeformation) else check_pair_deformation(d))
    if doc.tensors:
        blocks.append("tensors")
        _aybe_verdicts(doc, report)
    report.results["blocks"] = blocks


def _complex_spec(doc, report, options):
    name = options["complex"]
    if name == "cdend":
        if doc.dendriform is not None:
            cd, source = doc.dendriform, "dendriform block"
        else:
            p = _pair(doc, "cohomology --complex cdend")
            if not report.add(is_compatible_pair(p)).passed:
                return None
            cd, source = induced_dendriform(p), "induced from operators"
        report.results["source"] = source
        if not report.add(check_compatible_dendriform(cd)).passed:
            return None
        return CDendComplex(cd)
    p = _pair(doc, f"cohomology --complex {name}")
    if not _base_checks(doc, report):
        return None
    if name == "o":
        t = p.t1 if options["operator"] == 1 else p.t2
        ok = report.add(is_ooperator(t)).passed
        return OComplex(t) if ok else None
    if not report.add(is_compatible_pair(p)).passed:
        return None
    if name == "co":
        return PairComplex(p)
    if name == "cass":
        return induced_cass_complex(p)
    return COAComplex(p)


def _cohomology_rows(spec, degrees) -> list:
    matrices: dict = {}
    return [cohomology(spec, n, matrices).to_json() for n in degrees]


def _cmd_cohomology(doc, report, options):
    spec = _complex_spec(doc, report, options)
    if spec is None:
        return
    report.results["complex"] = options["complex"]
    report.results["cohomology"] = _cohomology_rows(spec, options["degrees"])


def _cmd_mc(doc, report, options):
    p = _pair(doc, "mc")
    ctx = p.ctx
    alpha = structure_element(ctx, [p.t1, p.t2])
    d = mc_defect(alpha, True)
    rep = CheckReport("Maurer-Cartan equation for (pi, (T1, T2))")
    nonzero: dict = {}
    if d.vprime is not None:
        for key in block_keys(d.vprime.arity):
            blk = d.vprime.block(key)
            if blk.size and any(x != 0 for x in blk.flat):
                rep.add_tensor_defects(f"V' block {key}", np.moveaxis(blk, 0, -1))
                nonzero[key] = to_nested(blk)
    parts = {}
    for j, q in enumerate(d.a_parts):
        if not q.is_zero():
            rep.add_tensor_defects(f"map part {j}", np.moveaxis(q.coeffs, 0, -1))
            parts[str(j)] = to_nested(q.coeffs)
    report.add(rep)
    report.results["defect"] = {"vprime_blocks": nonzero, "map_parts": parts}
    report.results["compatible_pair"] = is_compatible_pair(p).passed


def _pair_deformation(doc, cmd: str, options) -> PairDeformation:
    d = doc.require("deformation", cmd)
    if not isinstance(d, PairDeformation):
        raise UsageError(f"{cmd} works on deformations of the operator pair only (drop mu, l, r)")
    n = options.get("order", d.order)
    if n > d.order:
        raise UsageError(f"--order {n} exceeds the order {d.order} of the workspace deformation")
    return PairDeformation(d.t1[: n + 1], d.t2[: n + 1])


def _cmd_obstruct(doc, report, options):
    d = _pair_deformation(doc, "obstruct", options)
    report.results["order"] = d.order
    if not report.add(check_pair_deformation(d)).passed:
        return
    ob = obstruction(d)
    cocycle = CheckReport("obstruction is a 2-cocycle")
    dob = lifted_bracket(d.ctx, d.base.cochain(), ob)
    for j, q in enumerate(dob.parts):
        cocycle.add_tensor_defects(f"delta(Ob) part {j}", np.moveaxis(q.coeffs, 0, -1))
    if not cocycle.passed:
        raise ContainmentError("obstruction is not a cocycle")
    report.add(cocycle)
    report.results["obstruction"] = ob.to_json()
    report.results["obstruction_is_zero"] = ob.is_zero()


def _cmd_extend(doc, report, options):
    d = _pair_deformation(doc, "extend", options)
    report.results["order"] = d.order
    if not report.add(check_pair_deformation(d)).passed:
        return
    ext = is_extensible(d)
    rep = CheckReport(f"extension to order {d.order + 1}")
    if ext.extensible:
        rep.add(check_pair_deformation(ext.witness)).name = "witness passes the deformation check"
    else:
        rep.fail("obstruction is a coboundary", (), [ext.rank_augmented - ext.rank_delta])
        rep.details["verdict"] = "not extensible"
    report.add(rep)
    report.results["extension"] = ext.to_json()


def _aybe_verdicts(doc, report) -> dict:
    alg = doc.algebra
    rs = doc.tensors
    if "r2" in rs:
        rep = report.add(compatible_aybe_check(alg, rs["r1"], rs["r2"]))
        solved = {"r1": rep.subreports[0].passed, "r2": rep.subreports[1].passed}
        both = rep.passed
    else:
        rep = report.add(aybe_check(alg, rs["r1"]))
        rep.name = "r1 solves AYBE"
        solved = {"r1": rep.passed}
        both = False
    return {"solved": solved, "compatible": both}


def _cmd_aybe(doc, report, options):
    doc.require("tensors", "aybe")
    alg = doc.algebra
    status = _aybe_verdicts(doc, report)
    induced: dict = {}
    rb, sh = {}, {}
    for name, r in sorted(doc.tensors.items()):
        entry = {"skew": is_skew(r)}
        if status["solved"][name]:
            rb[name] = rb_from_tensor(alg, r)
            entry["rota_baxter"] = rb[name].to_json()
            report.add(is_ooperator(rb[name])).name = f"rb({name}) is an O-operator on the adjoint bimodule"
            if entry["skew"]:
                sh[name] = sharp(alg, r)
                entry["sharp"] = sh[name].to_json()
                report.add(is_ooperator(sh[name])).name = f"{name}# is an O-operator on the coadjoint bimodule"
        induced[name] = entry
    if status["compatible"]:
        rep = report.add(is_compatible_pair(OperatorPair(rb["r1"], rb["r2"])))
        rep.name = "(rb(r1), rb(r2)) is a compatible pair"
        if len(sh) == 2:
            rep = report.add(is_compatible_pair(OperatorPair(sh["r1"], sh["r2"])))
            rep.name = "(r1#, r2#) is a compatible pair"
    report.results["tensors"] = induced


def _cmd_dendriform(doc, report, options):
    if doc.dendriform is not None:
        cd, source = doc.dendriform, "dendriform block"
    else:
        p = _pair(doc, "dendriform")
        if not report.add(is_compatible_pair(p)).passed:
            return
        cd, source = induced_dendriform(p), "induced from operators"
    report.results["source"] = source
    axioms = report.add(check_compatible_dendriform(cd))
    report.add(check_square(cd))
    if not axioms.passed:
        return
    spec = CDendComplex(cd)
    sq = CheckReport("delta o delta = 0 (cdend)")
    for n in options["degrees"]:
        if not check_square_zero(spec, n):
            raise ContainmentError(f"delta_{n + 1} o delta_{n} != 0 on the dendriform complex")
    sq.details["degrees"] = list(options["degrees"])
    report.add(sq)
    report.results["cohomology"] = _cohomology_rows(spec, options["degrees"])


def induced_blocks(p: OperatorPair) -> dict:
    """Induced compatible algebra on M, compatible bimodule A and dendriform structure."""
    ca = induced_compatible_algebra(p)
    cb = induced_compatible_bimodule(p)
    cd = induced_dendriform(p)
    return {
        "compatible_algebra": {"dim": ca.dim, "mu1": to_nested(ca.mu1), "mu2": to_nested(ca.mu2)},
        "compatible_bimodule": {
            "algebra_dim": cb.algebra_dim,
            "module_dim": cb.module_dim,
            "l1": to_nested(cb.l1),
            "r1": to_nested(cb.r1),
            "l2": to_nested(cb.l2),
            "r2": to_nested(cb.r2),
        },
        "dendriform": cd.to_json(),
    }


def induced_workspace(doc: WorkspaceDocument) -> WorkspaceDocument:
    """The document with its dendriform block replaced by the induced one."""
    p = _pair(doc, "induce")
    out = WorkspaceDocument(doc.algebra, doc.bimodule, doc.operators, induced_dendriform(p),
                            doc.deformation, dict(doc.tensors))
    out.ground_field = doc.ground_field
    return out


def _cmd_induce(doc, report, options):
    p = _pair(doc, "induce")
    if not report.add(is_compatible_pair(p)).passed:
        return
    ca = induced_compatible_algebra(p)
    report.add(check_compatible_associative(ca))
    report.add(check_compatible_bimodule(ca, induced_compatible_bimodule(p)))
    cd = induced_dendriform(p)
    report.add(check_compatible_dendriform(cd))
    report.add(check_triangle(p))
    report.results["induced"] = induced_blocks(p)


_HANDLERS = {
    "check": _cmd_check,
    "cohomology": _cmd_cohomology,
    "mc": _cmd_mc,
    "obstruct": _cmd_obstruct,
    "extend": _cmd_extend,
    "aybe": _cmd_aybe,
    "dendriform": _cmd_dendriform,
    "induce": _cmd_induce,
}

__all__ = [
    "COMMANDS",
    "COMPLEXES",
    "MissingBlockError",
    "Report",
    "UsageError",
    "emit_report",
    "induced_blocks",
    "induced_workspace",
    "run_command",
]
