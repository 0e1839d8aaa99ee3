"""JSON wire format shared by every module.

Scalars are ``"a/b"`` strings (integers as ``"a"``), or ``{"re": ..., "im": ...}``
objects when the imaginary part is nonzero.  Matrices are row-major nested
arrays.  Documents are written with sorted keys so output is byte-stable.
"""

from __future__ import annotations

import json

from .builders import MatSeq
from .errors import ValidationError
from .matrix import CMatrix, GaussRational


def scalar_to_wire(x):
    g = GaussRational.coerce(x)
    if g.is_real:
        return str(g.re)
    return {"re": str(g.re), "im": str(g.im)}


def scalar_from_wire(obj):
    try:
        if isinstance(obj, dict):
            if set(obj) - {"re", "im"}:
                raise ValidationError(f"unexpected scalar keys {sorted(obj)}")
            return GaussRational(_rational(obj.get("re", "0")), _rational(obj.get("im", "0")))
        return GaussRational(_rational(obj))
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad scalar {obj!r}: {exc}") from exc


def _rational(obj):
    if isinstance(obj, bool) or not isinstance(obj, (str, int)):
        raise ValidationError(f"rationals are strings 'a/b' or integers, got {obj!r}")
    return obj


def matrix_to_wire(A: CMatrix):
    return [[scalar_to_wire(x) for x in row] for row in A.tolist()]


def matrix_from_wire(obj, rows=None, cols=None) -> CMatrix:
    if not isinstance(obj, list) or not obj or not all(isinstance(r, list) for r in obj):
        raise ValidationError("a matrix is a non-empty list of rows")
    width = len(obj[0])
    if width == 0 or any(len(r) != width for r in obj):
        raise ValidationError("matrix rows must be non-empty and of equal length")
    if rows is not None and (len(obj), width) != (rows, cols):
        raise ValidationError(f"expected a {rows}x{cols} matrix, got {len(obj)}x{width}")
    return CMatrix(len(obj), width, [scalar_from_wire(x) for r in obj for x in r])


def _positive_int(doc, key):
    v = doc.get(key)
    if isinstance(v, bool) or not isinstance(v, int) or v < 1:
        raise ValidationError(f"{key!r} must be a positive integer")
    return v


def seq_to_wire(s: MatSeq) -> dict:
    return {"p": s.p, "q": s.q, "alpha": scalar_to_wire(s.alpha),
            "matrices": [matrix_to_wire(m) for m in s.mats]}


def seq_from_wire(doc, alpha=None) -> MatSeq:
    if not isinstance(doc, dict):
        raise ValidationError("a sequence document is a JSON object")
    missing = {"p", "q", "matrices"} - set(doc)
    if missing:
        raise ValidationError(f"sequence document lacks {sorted(missing)}")
    p, q = _positive_int(doc, "p"), _positive_int(doc, "q")
    if not isinstance(doc["matrices"], list):
        raise ValidationError("'matrices' must be a list")
    mats = tuple(matrix_from_wire(m, p, q) for m in doc["matrices"])
    if alpha is None:
        alpha = scalar_from_wire(doc.get("alpha", "0"))
    return MatSeq(p, q, alpha, mats)


def param_to_wire(P) -> dict:
    return {"kind": "parametrization", "p": P.p, "q": P.q, "alpha": scalar_to_wire(P.alpha),
            "Q": [matrix_to_wire(m) for m in P.Q], "provenance": list(P.provenance)}


def param_from_wire(doc):
    from .parametrize import Parametrization

    if not isinstance(doc, dict) or "Q" not in doc:
        raise ValidationError("a parametrization document needs a 'Q' list")
    p, q = _positive_int(doc, "p"), _positive_int(doc, "q")
    if not isinstance(doc["Q"], list):
        raise ValidationError("'Q' must be a list")
    Q = tuple(matrix_from_wire(m, p, q) for m in doc["Q"])
    try:
        return Parametrization(p, q, scalar_from_wire(doc.get("alpha", "0")), Q,
                               tuple(doc.get("provenance", ())))
    except ValueError as exc:
        raise ValidationError(str(exc)) from exc


def measure_to_wire(mu) -> dict:
    return {"alpha": scalar_to_wire(mu.alpha),
            "atoms": [{"point": scalar_to_wire(t), "weight": matrix_to_wire(W)}
                      for t, W in mu.atoms]}


def measure_from_wire(doc):
    from .gen import DiscreteMeasure

    try:
        atoms = tuple((scalar_from_wire(a["point"]), matrix_from_wire(a["weight"]))
                      for a in doc["atoms"])
        return DiscreteMeasure(scalar_from_wire(doc.get("alpha", "0")), atoms)
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"bad measure document: {exc}") from exc
    except ValueError as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(str(exc)) from exc


def to_plain(obj):
    """Convert nested results (matrices, scalars, sequences) into JSON-ready values."""
    if isinstance(obj, CMatrix):
        return matrix_to_wire(obj)
    if isinstance(obj, GaussRational):
        return scalar_to_wire(obj)
    if isinstance(obj, MatSeq):
        return seq_to_wire(obj)
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def dumps(doc, pretty=False) -> str:
    if pretty:
        return json.dumps(to_plain(doc), sort_keys=True, indent=2, ensure_ascii=False) + "\n"
    return json.dumps(to_plain(doc), sort_keys=True, separators=(",", ":"), ensure_ascii=False) + "\n"
