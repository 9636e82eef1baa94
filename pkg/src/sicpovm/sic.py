"""General SIC POVMs built from orthonormal bases of the traceless subspace.

For a basis ``{F_a}`` with ``F = sum_a F_a`` the elements are

    P_a   = I/d^2 + t (F - d(d+1) F_a),   a = 1 .. d^2-1
    P_d^2 = I/d^2 + t (d+1) F

and they form a SIC POVM for every nonzero ``t`` in ``[t0, t1]``, the interval
fixed by the extreme eigenvalues of the ``R_a`` operators in parentheses.
"""
from dataclasses import dataclass

import numpy as np

from .basis import TracelessBasis
from .hermitian import eigvals, hermitian, hs_gram, op_from_json, op_to_json

__all__ = [
    "NotPositiveError",
    "SicFamily",
    "SicPovm",
    "DualFrame",
    "VerificationReport",
    "Rank1Report",
    "PSD_TOL",
    "r_operators",
    "make_family",
    "sic_elements",
    "construct_sic",
    "max_sic",
    "purity",
    "overlap_b",
    "dual_frame",
    "recover_basis",
    "symmetric_from_r",
    "omega_solutions",
    "plus_branch_basis",
    "verify_sic",
    "rank1_check",
    "rank1_spectrum",
    "sic_to_json",
    "sic_from_json",
]

PSD_TOL = 1e-10
DEGENERATE_TOL = 1e-13
WEAK_T = 1e-7


class NotPositiveError(ValueError):
    """A constructed element has a negative eigenvalue: ``t`` is outside ``[t0, t1]``."""

    def __init__(self, index, eigenvalue, t, interval):
        self.index = index
        self.eigenvalue = eigenvalue
        self.t = t
        self.interval = tuple(interval)
        super().__init__(
            f"P_{index + 1} has eigenvalue {eigenvalue:.6e} < -{PSD_TOL:g}: "
            f"t={t!r} lies outside [{interval[0]!r}, {interval[1]!r}]"
        )


def r_operators(basis):
    d = basis.dim
    f = basis.sum_f
    r = np.empty((d * d,) + f.shape, dtype=np.complex128)
    r[:-1] = f[None] - d * (d + 1) * basis.elements
    r[-1] = (d + 1) * f
    return r


@dataclass(frozen=True, eq=False)
class SicFamily:
    basis: TracelessBasis
    r_ops: np.ndarray
    lam: np.ndarray  # largest eigenvalue of each R_a, > 0
    mu: np.ndarray  # smallest eigenvalue of each R_a, < 0
    t0: float
    t1: float

    @property
    def dim(self):
        return self.basis.dim

    @property
    def per_op_extremes(self):
        return list(zip(self.lam.tolist(), self.mu.tolist()))

    @property
    def t_m(self):
        return max(abs(self.t0), self.t1)


def make_family(basis):
    """Eigensolve every ``R_a`` and fix the admissible interval ``[t0, t1]``."""
    d = basis.dim
    r = r_operators(basis)
    w = eigvals(r)
    lam, mu = w[:, 0].copy(), w[:, -1].copy()
    if (lam <= 0).any() or (mu >= 0).any():
        raise ValueError("some R_a has a one-signed spectrum; basis is not traceless/orthonormal")
    t0 = -np.min(1.0 / lam) / d**2
    t1 = -np.max(1.0 / mu) / d**2
    return SicFamily(basis, r, lam, mu, float(t0), float(t1))


def purity(t, d):
    """``a(t) = 1/d^3 + t^2 (d-1)(d+1)^3``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return 1.0 / d**3 + t * t * (d - 1) * (d + 1) ** 3


def overlap_b(a, d):
    """Pairwise overlap ``b = (1 - d a) / (d (d^2 - 1))`` for purity ``a``."""
    if not 1.0 / d**3 < a <= 1.0 / d**2 * (1 + 1e-12):
        raise ValueError(f"a={a!r} outside (1/d^3, 1/d^2] for d={d}")
    return (1.0 - d * a) / (d * (d * d - 1))


@dataclass(frozen=True, eq=False)
class SicPovm:
    ops: np.ndarray
    t: float
    basis_label: str = ""
    # P_a - I/d^2 kept unrounded when known; the dual frame and the inverse
    # maps scale it by up to 1/(a - 1/d^3), so the I/d^2 round-off would dominate
    deviation: np.ndarray = None

    @property
    def dim(self):
        return self.ops.shape[1]

    @property
    def dev(self):
        if self.deviation is not None:
            return self.deviation
        return self.ops - np.eye(self.dim) / self.dim**2

    @property
    def excess(self):
        """``a - 1/d^3``, evaluated without cancellation."""
        d = self.dim
        return self.t * self.t * (d - 1) * (d + 1) ** 3

    @property
    def a(self):
        return purity(self.t, self.dim)

    @property
    def b(self):
        d = self.dim
        return 1.0 / d**3 - self.t * self.t * (d + 1) ** 2

    @property
    def weak(self):
        return abs(self.t) < WEAK_T / self.dim**3


def sic_elements(family, t):
    """Raw ``P_a = I/d^2 + t R_a`` with no positivity check."""
    d = family.dim
    return hermitian(np.eye(d) / d**2 + t * family.r_ops)


def construct_sic(family, t):
    if t == 0:
        raise ValueError("t must be nonzero")
    ops = sic_elements(family, float(t))
    lo = eigvals(ops)[:, -1]
    k = int(np.argmin(lo))
    if lo[k] < -PSD_TOL:
        raise NotPositiveError(k, float(lo[k]), t, (family.t0, family.t1))
    dev = hermitian(float(t) * family.r_ops)
    ops.setflags(write=False)
    dev.setflags(write=False)
    return SicPovm(ops, float(t), family.basis.label, dev)


def max_sic(basis):
    """The SIC POVM at ``t_m`` with ``t`` made positive by negating the basis if needed.

    Returns ``(family, sic)`` where ``family`` belongs to the (possibly negated) basis.
    """
    fam = make_family(basis)
    if abs(fam.t0) > fam.t1:
        fam = make_family(basis.negated())
    return fam, construct_sic(fam, fam.t1)


@dataclass(frozen=True, eq=False)
class DualFrame:
    ops: np.ndarray
    source_a: float

    @property
    def dim(self):
        return self.ops.shape[1]


def dual_frame(sic):
    """``Q_a = d/(a d^3 - 1) [(d^2 - 1) P_a - (1 - d a) I]``.

    With ``P_a = I/d^2 + D_a`` the identity terms collapse and
    ``Q_a = I/d + (d^2 - 1) D_a / ((a - 1/d^3) d^2)``, which is how it is evaluated.
    """
    d = sic.dim
    excess = sic.excess
    if excess < DEGENERATE_TOL:
        raise ValueError(f"a - 1/d^3 = {excess:.3e}: dual frame is singular for this weak SIC POVM")
    q = np.eye(d) / d + ((d * d - 1) / (excess * d * d)) * sic.dev
    return DualFrame(hermitian(q), sic.a)


def recover_basis(sic, t=None):
    """Invert the construction: ``F_a = ((1/d) I + P_d^2 - (d+1) P_a) / (t d (d+1)^2)``."""
    t = sic.t if t is None else t
    if t == 0:
        raise ValueError("t must be nonzero")
    d = sic.dim
    dev = sic.dev  # the identity parts cancel exactly
    f = (dev[-1] - (d + 1) * dev[:-1]) / (t * d * (d + 1) ** 2)
    return TracelessBasis(f, label=f"recovered({sic.basis_label})")


def plus_branch_basis(sic, t=None):
    """Second orthonormal basis attached to the same SIC POVM (``omega_+`` branch).

    ``F_{a,+} = ((1/d) I - P_d^2 - (d-1) P_a) / (t d (d^2 - 1))``, so that
    ``P_a = I/d^2 + t_+ (F_+ - d(d-1) F_{a,+})`` with ``t_+ = t (d+1)/(d-1)``.
    """
    t = sic.t if t is None else t
    if t == 0:
        raise ValueError("t must be nonzero")
    d = sic.dim
    dev = sic.dev
    f = (-dev[-1] - (d - 1) * dev[:-1]) / (t * d * (d * d - 1))
    return TracelessBasis(f, label=f"plus({sic.basis_label})")


def omega_solutions(d):
    """Roots ``(omega_+, omega_-) = 1 - d^2 +/- d`` of the overlap-ratio condition."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return float(1 - d * d + d), float(1 - d * d - d)


def symmetric_from_r(r_ops, t, tol=1e-9):
    """``P_a = I/d^2 + t R_a`` and ``P_d^2 = I/d^2 - t sum_a R_a``.

    ``r_ops`` must satisfy ``Tr(R_a R_b) = r`` on the diagonal and
    ``-r/(d^2-1)`` off it, for some ``r > 0``.
    """
    if t == 0:
        raise ValueError("t must be nonzero")
    r_ops = hermitian(r_ops)
    n, d = r_ops.shape[0], r_ops.shape[1]
    if n != d * d - 1:
        raise ValueError(f"need {d * d - 1} operators, got {n}")
    gram = hs_gram(r_ops)
    r = float(np.mean(np.diag(gram)))
    if r <= 0:
        raise ValueError("operators have non-positive norm")
    target = np.full((n, n), -r / (n))
    np.fill_diagonal(target, r)
    err = np.abs(gram - target).max() / r
    if err > tol:
        raise ValueError(f"Gram matrix of R deviates from the required form by {err:.3e} (relative)")
    traces = np.abs(np.trace(r_ops, axis1=1, axis2=2)).max()
    if traces > tol * np.sqrt(r):
        raise ValueError("R operators are not traceless")
    out = np.empty((d * d, d, d), dtype=np.complex128)
    out[:-1] = np.eye(d) / d**2 + t * r_ops
    out[-1] = np.eye(d) / d**2 - t * r_ops.sum(axis=0)
    return out


@dataclass
class VerificationReport:
    dim: int
    t: float
    a: float
    b: float
    povm_sum: float
    trace: float
    gram_diag: float
    gram_offdiag: float
    min_eig: float
    duality: float = None
    weak: bool = False

    @property
    def passed(self):
        ok = (
            self.povm_sum < 1e-11
            and self.trace < 1e-11
            and self.gram_diag < 1e-10
            and self.gram_offdiag < 1e-10
            and self.min_eig >= -PSD_TOL
        )
        if self.duality is not None:
            ok = ok and self.duality < 1e-9
        return bool(ok)

    def to_dict(self):
        return {
            "passed": self.passed,
            "weak": self.weak,
            "dim": self.dim,
            "t": self.t,
            "a": self.a,
            "b": self.b,
            "povm_sum": self.povm_sum,
            "trace": self.trace,
            "gram_diag": self.gram_diag,
            "gram_offdiag": self.gram_offdiag,
            "min_eig": self.min_eig,
            "duality": self.duality,
        }


def verify_sic(sic):
    """Measure every defining property of a SIC POVM against its nominal ``a``, ``b``."""
    d = sic.dim
    p = sic.ops
    gram = hs_gram(p)
    off = ~np.eye(len(p), dtype=bool)
    duality = None
    if sic.excess >= DEGENERATE_TOL:
        q = dual_frame(sic).ops
        duality = float(np.abs(hs_gram(p, q) - np.eye(len(p))).max())
    return VerificationReport(
        dim=d,
        t=sic.t,
        a=sic.a,
        b=sic.b,
        povm_sum=float(np.abs(p.sum(axis=0) - np.eye(d)).max()),
        trace=float(np.abs(np.trace(p, axis1=1, axis2=2) - 1.0 / d).max()),
        gram_diag=float(np.abs(np.diag(gram) - sic.a).max()),
        gram_offdiag=float(np.abs(gram[off] - sic.b).max()),
        min_eig=float(eigvals(p)[:, -1].min()),
        duality=duality,
        weak=sic.weak,
    )


def rank1_spectrum(d):
    """Common spectrum of every recovered basis element of a rank-1 SIC POVM (descending)."""
    root = np.sqrt(d * d + 4 * d)
    norm = 2 * np.sqrt(d * (d + 1))
    g = [(2 - d + root) / norm, (2 - d - root) / norm] + [1 / np.sqrt(d * (d + 1))] * (d - 2)
    return np.sort(np.array(g))[::-1]


@dataclass
class Rank1Report:
    is_rank1: bool
    purity_gap: float  # 1/d^2 - a
    ranks: list
    spectrum_distance: float  # max over a of |spec(F_a) - gamma|
    projector_overlap: float  # max |Tr(Pi_a Pi_d^2) - 1/(d+1)|


def rank1_check(sic):
    d = sic.dim
    p = sic.ops
    w = eigvals(p)
    traces = np.trace(p, axis1=1, axis2=2).real
    ranks = (w > 1e-9 * traces[:, None]).sum(axis=1).tolist()
    gap = 1.0 / d**2 - float(np.mean(np.einsum("aij,aji->a", p, p).real))
    f = recover_basis(sic).elements
    spec = eigvals(f)
    dist = float(np.abs(spec - rank1_spectrum(d)[None]).max())
    overlaps = d * d * np.einsum("aij,ji->a", p[:-1], p[-1]).real
    return Rank1Report(
        is_rank1=bool(abs(gap) <= 1e-10 and all(k == 1 for k in ranks)),
        purity_gap=gap,
        ranks=ranks,
        spectrum_distance=dist,
        projector_overlap=float(np.abs(overlaps - 1.0 / (d + 1)).max()),
    )


def sic_to_json(sic):
    return {
        "dim": sic.dim,
        "t": sic.t,
        "a": sic.a,
        "b": sic.b,
        "basis_label": sic.basis_label,
        "ops": [op_to_json(p) for p in sic.ops],
    }


def sic_from_json(obj):
    ops = np.array([op_from_json(p) for p in obj["ops"]])
    d = int(obj["dim"])
    if ops.shape != (d * d, d, d):
        raise ValueError(f"expected {d * d} operators of size {d}, got shape {ops.shape}")
    ops.setflags(write=False)
    return SicPovm(ops, float(obj["t"]), obj.get("basis_label", ""))
