"""Dense complex Hermitian matrices: validation, inner products, spectra.

Operators are plain ``complex128`` numpy arrays of shape ``(d, d)``; stacks of
operators have shape ``(n, d, d)``.
"""
from typing import NamedTuple

import numpy as np

from ._jacobi import ConvergenceError, eigh_stack

__all__ = [
    "ConvergenceError",
    "Spectrum",
    "hermitian",
    "hs_inner",
    "hs_gram",
    "eig",
    "eigvals",
    "min_eigenvalue",
    "is_psd",
    "op_to_json",
    "op_from_json",
]

SYMMETRIZE_TOL = 1e-12
IMAG_TOL = 1e-13


class Spectrum(NamedTuple):
    eigenvalues: np.ndarray  # descending
    eigenvectors: np.ndarray  # columns


def hermitian(a, tol=SYMMETRIZE_TOL):
    """Return ``a`` (or a stack of matrices) as an exactly Hermitian array.

    The input is replaced by ``(A + A^dagger)/2``. A correction larger than
    ``tol`` in any entry is treated as a non-Hermitian input and rejected.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim < 2 or a.shape[-1] != a.shape[-2]:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    if a.shape[-1] < 2:
        raise ValueError("dimension must be at least 2")
    sym = 0.5 * (a + np.swapaxes(a, -1, -2).conj())
    drift = np.abs(sym - a).max()
    if drift > tol:
        raise ValueError(f"matrix is not Hermitian (asymmetry {drift:.3e} > {tol:.1e})")
    return sym


def hs_inner(a, b):
    """Hilbert-Schmidt inner product ``Tr(AB)`` of two Hermitian matrices."""
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    z = np.einsum("ij,ji->", a, b)
    scale = max(1.0, float(np.linalg.norm(a) * np.linalg.norm(b)))
    if abs(z.imag) > IMAG_TOL * scale:
        raise ValueError(f"Tr(AB) has imaginary part {z.imag:.3e}; inputs not Hermitian")
    return float(z.real)


def hs_gram(ops, others=None):
    """Matrix of ``Tr(A_j B_k)`` over two stacks (real part)."""
    ops = np.asarray(ops)
    others = ops if others is None else np.asarray(others)
    return np.einsum("aij,bji->ab", ops, others).real


def eig(a):
    """Full spectral decomposition, eigenvalues descending."""
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError("eig takes a single matrix; use eigvals for stacks")
    w, v, _ = eigh_stack(a[None])
    return Spectrum(w[0], v[0])


def eigvals(ops):
    """Descending eigenvalues of one matrix ``(d,)`` or of a stack ``(n, d)``."""
    ops = np.asarray(ops, dtype=np.complex128)
    if ops.ndim == 2:
        return eigh_stack(ops[None])[0][0]
    return eigh_stack(ops)[0]


def min_eigenvalue(a):
    return float(eigvals(a)[-1])


def is_psd(a, tol=0.0):
    if tol < 0:
        raise ValueError("tol must be non-negative")
    return min_eigenvalue(a) >= -tol


def op_to_json(a):
    a = np.asarray(a)
    return {
        "dim": int(a.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in a],
    }


def op_from_json(obj):
    entries = np.asarray(obj["entries"], dtype=np.float64)
    d = int(obj["dim"])
    if entries.shape != (d, d, 2):
        raise ValueError(f"entries shape {entries.shape} does not match dim {d}")
    return hermitian(entries[..., 0] + 1j * entries[..., 1])
