"""Dense complex matrix primitives used throughout the package.

All state matrices are square ``numpy`` arrays of dtype ``complex128``.
Every function is pure; nothing here mutates its arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import ConvergenceError, DimensionError

__all__ = [
    "as_matrix",
    "commutator",
    "conj_transpose",
    "frobenius_inner",
    "frobenius_norm",
    "trace_powers",
    "eigenvalues",
    "matrix_to_json",
    "matrix_from_json",
]


def as_matrix(data) -> np.ndarray:
    """Coerce input to a 2-d complex128 array (copying if needed)."""
    w = np.asarray(data, dtype=np.complex128)
    if w.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got shape {w.shape}")
    return w


def _check_same_shape(a: np.ndarray, b: np.ndarray) -> None:
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")


def _check_square(a: np.ndarray) -> None:
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")


def commutator(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix commutator ``a @ b - b @ a``.

    The result is traceless up to rounding.
    """
    a = as_matrix(a)
    b = as_matrix(b)
    _check_square(a)
    _check_same_shape(a, b)
    return a @ b - b @ a


def conj_transpose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose (an involution)."""
    return np.conj(np.transpose(as_matrix(a)))


def frobenius_inner(a: np.ndarray, b: np.ndarray) -> complex:
    """Frobenius inner product ``trace(a^H b)``, sesquilinear in the first slot."""
    a = as_matrix(a)
    b = as_matrix(b)
    _check_same_shape(a, b)
    return complex(np.sum(np.conj(a) * b))


def frobenius_norm(a) -> float:
    """Frobenius norm; accepts matrices or tuples of matrices."""
    if isinstance(a, (tuple, list)):
        return float(np.sqrt(sum(frobenius_norm(x) ** 2 for x in a)))
    return float(np.linalg.norm(np.asarray(a)))


def trace_powers(w: np.ndarray, pmax: int) -> np.ndarray:
    """Traces of ``w^p`` for p = 1..pmax, computed by repeated multiplication.

    These are the power sums of the eigenvalues, so the vector is invariant
    under conjugation ``w -> g w g^-1``.
    """
    w = as_matrix(w)
    _check_square(w)
    if pmax < 1:
        raise ValueError("pmax must be >= 1")
    out = np.empty(pmax, dtype=np.complex128)
    acc = w
    out[0] = np.trace(acc)
    for p in range(1, pmax):
        acc = acc @ w
        out[p] = np.trace(acc)
    return out


def eigenvalues(w: np.ndarray) -> np.ndarray:
    """Eigenvalues sorted lexicographically by (real, imag).

    Diagnostic use only; trace_powers is the primary spectral monitor since
    it carries the same isospectrality information without an iterative solve.
    """
    w = as_matrix(w)
    _check_square(w)
    try:
        vals = np.linalg.eigvals(w)
    except np.linalg.LinAlgError as exc:
        raise ConvergenceError(f"eigenvalue iteration failed: {exc}") from exc
    # quantise the primary key so round-off in the real part cannot flip the
    # order of values whose real parts coincide
    scale = max(1.0, float(np.max(np.abs(vals))) if vals.size else 1.0)
    key = np.round(vals.real / (1e-10 * scale))
    order = np.lexsort((vals.imag, key))
    return vals[order]


def matrix_to_json(a: np.ndarray) -> list:
    """Encode a matrix as nested lists of [re, im] pairs."""
    a = as_matrix(a)
    return [[[float(v.real), float(v.imag)] for v in row] for row in a]


def matrix_from_json(obj) -> np.ndarray:
    """Decode the [re, im] pair format produced by :func:`matrix_to_json`.

    Bare numbers are accepted as a convenience for real matrices.
    """
    rows = []
    for row in obj:
        vals = []
        for v in row:
            if isinstance(v, (int, float)):
                vals.append(complex(v, 0.0))
            else:
                re, im = v
                vals.append(complex(re, im))
        rows.append(vals)
    mat = np.array(rows, dtype=np.complex128)
    if mat.ndim != 2:
        raise DimensionError("matrix JSON must be a list of equal-length rows")
    return mat
