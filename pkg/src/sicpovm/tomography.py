"""Measurement statistics and linear-inversion state estimates for SIC POVMs.

Sampling uses numpy's Philox4x64 counter-based generator keyed directly by
``(seed, stream)`` with no seed hashing, so counts are reproducible bit for bit.
Outcomes are drawn by inverse CDF on the cumulative probabilities.
"""
from dataclasses import dataclass

import numpy as np

from .hermitian import eigvals, hermitian

__all__ = [
    "density_matrix",
    "random_density_matrix",
    "born_probabilities",
    "reconstruct",
    "philox",
    "simulate_shots",
    "estimate_state",
    "TomographyEstimate",
    "counts_to_json",
    "counts_from_json",
]


def density_matrix(op, tol=1e-12):
    rho = hermitian(op)
    tr = np.trace(rho).real
    if abs(tr - 1) > tol:
        raise ValueError(f"trace {tr!r} != 1")
    lo = eigvals(rho)[-1]
    if lo < -tol:
        raise ValueError(f"state has negative eigenvalue {lo:.3e}")
    return rho


def random_density_matrix(d, rng, rank=None):
    """Ginibre-distributed density matrix of the given rank (full by default)."""
    k = d if rank is None else rank
    g = rng.normal(size=(d, k)) + 1j * rng.normal(size=(d, k))
    rho = g @ g.conj().T
    return hermitian(rho / np.trace(rho).real)


def _check_dims(sic_dim, d):
    if sic_dim != d:
        raise ValueError(f"dimension mismatch: SIC POVM has d={sic_dim}, state has d={d}")


def born_probabilities(sic, rho):
    """``p_a = Tr(P_a rho)``."""
    rho = np.asarray(rho)
    _check_dims(sic.dim, rho.shape[0])
    return np.einsum("aij,ji->a", sic.ops, rho).real


def reconstruct(dual, p):
    """``rho = sum_a p_a Q_a``."""
    p = np.asarray(p, dtype=np.float64)
    if p.shape != (dual.ops.shape[0],):
        raise ValueError(f"dimension mismatch: {p.shape[0]} probabilities for {dual.ops.shape[0]} dual operators")
    return np.einsum("a,aij->ij", p, dual.ops)


def philox(seed, stream=0):
    return np.random.Generator(np.random.Philox(key=np.array([seed, stream], dtype=np.uint64)))


def simulate_shots(sic, rho, shots, seed, streams=1):
    """Counts of ``shots`` independent outcomes, split across ``streams`` substreams."""
    if shots < 1:
        raise ValueError("shots must be at least 1")
    p = np.clip(born_probabilities(sic, rho), 0.0, None)
    cdf = np.cumsum(p)
    last = len(p) - 1
    counts = np.zeros(len(p), dtype=np.int64)
    per = np.full(streams, shots // streams)
    per[: shots % streams] += 1
    for s, n in enumerate(per):
        u = philox(seed, s).random(int(n)) * cdf[-1]
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), last)
        counts += np.bincount(idx, minlength=len(p))
    return counts


@dataclass
class TomographyEstimate:
    estimate: np.ndarray
    shots: int
    frobenius_error: float = None


def estimate_state(dual, counts, true_state=None):
    """Linear inversion from empirical frequencies; not projected onto states."""
    counts = np.asarray(counts)
    total = int(counts.sum())
    if total < 1:
        raise ValueError("need at least one count")
    est = reconstruct(dual, counts / total)
    err = None
    if true_state is not None:
        err = float(np.linalg.norm(est - np.asarray(true_state)))
    return TomographyEstimate(est, total, err)


def counts_to_json(counts):
    counts = np.asarray(counts)
    return {"shots": int(counts.sum()), "counts": [int(c) for c in counts]}


def counts_from_json(obj):
    counts = np.asarray(obj["counts"], dtype=np.int64)
    if int(counts.sum()) != int(obj["shots"]):
        raise ValueError("counts do not add up to shots")
    return counts
