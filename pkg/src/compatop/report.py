"""Structured verdicts returned by every ``check_*`` routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .tensors import format_scalar


@dataclass(frozen=True)
class Defect:
    identity: str
    index: tuple
    vector: tuple

    def to_json(self) -> dict:
        return {
            "identity": self.identity,
            "index": list(self.index),
            "defect": [format_scalar(x) for x in self.vector],
        }


@dataclass
class CheckReport:
    name: str
    defects: list = field(default_factory=list)
    details: dict = field(default_factory=dict)
    subreports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.defects and all(r.passed for r in self.subreports)

    def __bool__(self) -> bool:
        return self.passed

    def add_tensor_defects(self, identity: str, defect: np.ndarray, out_axes: int = 1) -> None:
        """Record nonzero slices of ``defect``; the last ``out_axes`` axes hold the defect vector."""
        defect = np.asarray(defect, dtype=object)
        if defect.ndim < out_axes:
            raise ValueError("defect tensor has too few axes")
        lead = defect.shape[: defect.ndim - out_axes]
        for idx in np.ndindex(lead):
            vec = defect[idx].reshape(-1) if out_axes else np.array([defect[idx]], dtype=object)
            if any(x != 0 for x in vec):
                self.defects.append(Defect(identity, tuple(int(i) for i in idx), tuple(Fraction(x) for x in vec)))

    def add(self, sub: "CheckReport") -> "CheckReport":
        self.subreports.append(sub)
        return sub

    def fail(self, identity: str, index: Sequence = (), vector: Iterable = ()) -> None:
        self.defects.append(Defect(identity, tuple(index), tuple(Fraction(x) for x in vector)))

    def all_defects(self) -> list:
        out = list(self.defects)
        for sub in self.subreports:
            out.extend(sub.all_defects())
        return out

    def to_json(self) -> dict:
        out = {"check": self.name, "passed": self.passed}
        if self.defects:
            out["defects"] = [d.to_json() for d in self.defects]
        if self.details:
            out["details"] = self.details
        if self.subreports:
            out["subchecks"] = [r.to_json() for r in self.subreports]
        return out

    def __repr__(self) -> str:
        verdict = "pass" if self.passed else f"FAIL ({len(self.all_defects())} defects)"
        return f"<CheckReport {self.name}: {verdict}>"


class DomainError(ValueError):
    """A construction was asked to run on data violating its hypotheses."""
