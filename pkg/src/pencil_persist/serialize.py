"""JSON formats: matrix files and analysis reports.

Matrix file::

    {"n": 2, "entries": [[re, im], [re, im], [re, im], [re, im]]}

entries are row-major. Floats are written with Python's shortest
round-trip ``repr``, so parse(serialize(M)) reproduces M bit for bit.
"""

import json
import math
import sys

import numpy as np

from .errors import ValidationError


def matrix_to_obj(m):
    a = np.asarray(m, dtype=np.complex128)
    return {"n": int(a.shape[0]), "entries": [[float(z.real), float(z.imag)] for z in a.ravel()]}


def _number(x):
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"matrix entry component {x!r} is not a number")
    if not math.isfinite(x):
        raise ValidationError("matrix entries must be finite")
    return float(x)


def matrix_from_obj(obj):
    if not isinstance(obj, dict) or "n" not in obj or "entries" not in obj:
        raise ValidationError('matrix JSON must be an object with keys "n" and "entries"')
    n = obj["n"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ValidationError(f"n must be a positive integer, got {n!r}")
    entries = obj["entries"]
    if not isinstance(entries, list) or len(entries) != n * n:
        raise ValidationError(f"expected {n * n} entries for n={n}")
    out = np.empty(n * n, dtype=np.complex128)
    for k, pair in enumerate(entries):
        if not isinstance(pair, (list, tuple)) or len(pair) != 2:
            raise ValidationError(f"entry {k} must be a [re, im] pair")
        out[k] = complex(_number(pair[0]), _number(pair[1]))
    return out.reshape(n, n)


def dumps_matrix(m):
    return json.dumps(matrix_to_obj(m))


def loads_matrix(text):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"invalid JSON: {exc}") from exc
    return matrix_from_obj(obj)


def read_matrix(path):
    """Load a matrix file; ``-`` reads stdin."""
    if path == "-":
        return loads_matrix(sys.stdin.read())
    try:
        with open(path) as fh:
            return loads_matrix(fh.read())
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from exc


def write_matrix(path, m):
    with open(path, "w") as fh:
        fh.write(dumps_matrix(m) + "\n")


def _root(t, mult):
    return {"re": float(t.real), "im": float(t.imag), "multiplicity": int(mult)}


def exceptional_to_obj(ex):
    return {
        "kind": ex.kind.value,
        "roots": [_root(t, m) for t, m in ex.roots],
        "real_roots_unit_interval": [_root(t, m) for t, m in ex.real_roots_in_unit_interval],
    }


def _vector(v):
    return [[float(z.real), float(z.imag)] for z in np.asarray(v, dtype=np.complex128)]


def report_to_obj(report):
    return {
        "lambda0": float(report.lambda0),
        "lambda0_in_spectrum": bool(report.lambda0_in_spectrum),
        "exceptional": exceptional_to_obj(report.exceptional),
        "cyclic": bool(report.cyclicity.cyclic),
        "krylov_rank": int(report.cyclicity.krylov_rank),
        "v_class": {
            "psd": bool(report.v_class.psd),
            "nsd": bool(report.v_class.nsd),
            "indefinite": bool(report.v_class.indefinite),
            "rank_plus": int(report.v_class.rank_plus),
            "rank_minus": int(report.v_class.rank_minus),
            "kernel_dim": int(report.v_class.kernel_dim),
        },
        "generic_kernel_dimension": int(report.generic_kernel_dim),
        "theorem_checks": [
            {
                "name": c.name,
                "applicable": bool(c.applicable),
                "predicted": c.predicted,
                "observed": c.observed,
                "consistent": bool(c.consistent),
            }
            for c in report.theorem_checks
        ],
        "measure_estimate": float(report.measure_estimate),
        "witnesses": [{"t": float(t), "vector": _vector(w)} for t, w in report.witnesses],
        "diagnosis": report.diagnosis,
        "notes": list(report.notes),
    }


def dumps(obj):
    return json.dumps(obj, indent=2)
