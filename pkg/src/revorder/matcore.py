"""Dense real/complex matrices: products, adjoints, norms, tolerant comparison, text I/O.

Matrices are plain 2-D numpy arrays of dtype float64 (field "real") or
complex128 (field "complex"). Every function here is pure.
"""
import csv
import io
import json
import math

import numpy as np

from .errors import DimensionMismatch, MatrixFormatError

DEFAULT_TOL = 1e-10

REAL = "real"
COMPLEX = "complex"


def as_matrix(A, field=None):
    """Coerce `A` to a 2-D float64 or complex128 array.

    Real input stays real unless ``field="complex"`` is requested; complex input
    with ``field="real"`` is rejected if any imaginary part is nonzero.
    """
    A = np.asarray(A)
    if A.ndim == 0:
        A = A.reshape(1, 1)
    elif A.ndim == 1:
        A = A.reshape(1, -1)
    elif A.ndim != 2:
        raise DimensionMismatch(f"expected a 2-D matrix, got shape {A.shape}")
    if field is None:
        field = COMPLEX if np.iscomplexobj(A) else REAL
    if field == REAL:
        if np.iscomplexobj(A):
            if np.any(A.imag != 0):
                raise MatrixFormatError("complex entries in a real-tagged matrix")
            A = A.real
        return np.asarray(A, dtype=np.float64)
    if field == COMPLEX:
        return np.asarray(A, dtype=np.complex128)
    raise MatrixFormatError(f"unknown field {field!r}")


def field_of(A):
    return COMPLEX if np.iscomplexobj(A) else REAL


def mul(A, B):
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[1] != B.shape[0]:
        raise DimensionMismatch(f"cannot multiply {A.shape} by {B.shape}")
    return A @ B


def adjoint(A):
    """Conjugate transpose; plain transpose for real matrices."""
    A = np.asarray(A)
    if np.iscomplexobj(A):
        return A.conj().T
    return A.T


def fro_norm(A):
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    return math.sqrt(np.vdot(A, A).real)


def approx_eq(A, B, tol=DEFAULT_TOL):
    """True iff ||A - B||_F <= tol * (1 + max(||A||_F, ||B||_F))."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    return fro_norm(A - B) <= tol * (1.0 + max(fro_norm(A), fro_norm(B)))


def rel_diff(A, B):
    """||A - B||_F divided by the larger of the two norms (0 when both vanish)."""
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape != B.shape:
        raise DimensionMismatch(f"shapes differ: {A.shape} vs {B.shape}")
    scale = max(fro_norm(A), fro_norm(B))
    if scale == 0.0:
        return 0.0
    return fro_norm(A - B) / scale


# -- text formats ---------------------------------------------------------


def matrix_to_dict(A):
    A = np.asarray(A)
    m, n = A.shape
    if np.iscomplexobj(A):
        data = [[[float(z.real), float(z.imag)] for z in row] for row in A]
        field = COMPLEX
    else:
        data = [[float(x) for x in row] for row in A]
        field = REAL
    return {"rows": m, "cols": n, "field": field, "data": data}


def matrix_from_dict(obj):
    try:
        m = int(obj["rows"])
        n = int(obj["cols"])
        field = obj.get("field", REAL)
        data = obj["data"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"malformed matrix object: {exc}") from exc
    if field not in (REAL, COMPLEX):
        raise MatrixFormatError(f"unknown field {field!r}")
    if len(data) != m or any(len(row) != n for row in data):
        raise MatrixFormatError(f"data does not have shape ({m}, {n})")
    if field == COMPLEX:
        out = np.empty((m, n), dtype=np.complex128)
        for i, row in enumerate(data):
            for j, z in enumerate(row):
                if isinstance(z, (list, tuple)):
                    if len(z) != 2:
                        raise MatrixFormatError("complex entry must be [re, im]")
                    out[i, j] = complex(float(z[0]), float(z[1]))
                else:
                    out[i, j] = float(z)
        return out
    try:
        return np.array(data, dtype=np.float64).reshape(m, n)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"non-numeric entry in real matrix: {exc}") from exc


def dumps_matrix(A, fmt="json"):
    A = np.asarray(A)
    if fmt == "json":
        return json.dumps(matrix_to_dict(A)) + "\n"
    if fmt == "csv":
        if np.iscomplexobj(A):
            raise MatrixFormatError("CSV is only available for real matrices")
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        for row in A:
            writer.writerow([repr(float(x)) for x in row])
        return buf.getvalue()
    raise MatrixFormatError(f"unknown format {fmt!r}")


def loads_matrix(text):
    """Parse a matrix from JSON (object form) or CSV (real, one row per line)."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MatrixFormatError(f"invalid JSON: {exc}") from exc
        return matrix_from_dict(obj)
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise MatrixFormatError("empty CSV matrix")
    if len({len(r) for r in rows}) != 1:
        raise MatrixFormatError("ragged CSV rows")
    try:
        return np.array([[float(c) for c in r] for r in rows], dtype=np.float64)
    except ValueError as exc:
        raise MatrixFormatError(f"non-numeric CSV entry: {exc}") from exc


def read_matrix(path, field=None):
    with open(path, encoding="utf-8") as fh:
        A = loads_matrix(fh.read())
    return as_matrix(A, field)


def write_matrix(path, A, fmt="json"):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_matrix(A, fmt))
