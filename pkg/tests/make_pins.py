"""Regenerate tests/data/pins.json through the slow reference path.

    python tests/make_pins.py

co and cass use the pointwise formulas in ``oracles``; coa and cdend build
their matrices column by column from the element-level differentials and
take ranks with sympy.  None of this goes through ``coboundary_matrix`` or
the fraction-free elimination.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

import oracles  # noqa: E402
from catalog import fixture_pair  # noqa: E402

from compatop.dendriform import CDendComplex, CompDendCochain, DendCochain, delta_cdend, induced_dendriform  # noqa: E402
from compatop.linfty import COAComplex, delta_coa  # noqa: E402
from compatop.operators import induced_compatible_algebra, induced_compatible_bimodule  # noqa: E402

PINS = Path(__file__).parent / "data" / "pins.json"
DEGREES = (0, 1, 2)


def _element_matrix(shapes, image):
    cols = []
    for c, shape in enumerate(shapes):
        for b in oracles.basis_tensors(shape):
            parts = [np.zeros(s, dtype=object) for s in shapes]
            parts[c] = b
            cols.append(oracles.flat(image(parts)))
    return cols


def _dims_from_matrices(mats) -> list:
    """mats[n] = (columns, rows) of d_n; H^n = (dim C^n - rank d_n) - rank d_(n-1)."""
    out = []
    for n in DEGREES:
        cols, rows = mats[n]
        dim_n = len(cols)
        z = dim_n - oracles.sympy_rank(cols, rows)
        b = oracles.sympy_rank(*mats[n - 1]) if n >= 1 else 0
        out.append(z - b)
    return out


def coa_dims(p) -> list:
    spec = COAComplex(p)
    mats = {}
    for n in range(DEGREES[-1] + 1):
        shapes = spec.shapes(n)
        cols = _element_matrix(shapes, lambda parts, n=n: spec.from_element(delta_coa(p, spec.to_element(n, parts))))
        mats[n] = (cols, sum(int(np.prod(s)) for s in spec.shapes(n + 1)))
    return _dims_from_matrices(mats)


def cdend_dims(cd) -> list:
    def shapes(n):
        return [(n,) + (cd.dim,) * (n + 1)] * n if n >= 1 else []

    def image(n, parts):
        x = CompDendCochain(n, [DendCochain(n, q) for q in parts])
        return [q.labels for q in delta_cdend(cd, x).parts]

    mats = {}
    for n in range(DEGREES[-1] + 1):
        cols = _element_matrix(shapes(n), lambda parts, n=n: image(n, parts))
        mats[n] = (cols, sum(int(np.prod(s)) for s in shapes(n + 1)))
    return _dims_from_matrices(mats)


def compute() -> dict:
    p = fixture_pair()
    ctx = p.ctx
    st = oracles.Structure.of(ctx)
    c, cb = induced_compatible_algebra(p), induced_compatible_bimodule(p)
    cd = induced_dendriform(p)
    CDendComplex(cd)  # validates the axioms
    dims = {
        "co": oracles.pair_cohomology_dims(st, p.t1.matrix, p.t2.matrix, DEGREES),
        "cass": oracles.cass_cohomology_dims(c.mu1, c.mu2, cb.l1, cb.r1, cb.l2, cb.r2, DEGREES),
        "coa": coa_dims(p),
        "cdend": cdend_dims(cd),
    }
    return {
        "fixture": "k[x]/(x^2), adjoint bimodule, T = [[0,0],[1,0]], pair (T, -T)",
        "degrees": list(DEGREES),
        "cohomology_dims": dims,
    }


if __name__ == "__main__":
    doc = compute()
    PINS.parent.mkdir(exist_ok=True)
    PINS.write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    print(json.dumps(doc["cohomology_dims"]))
