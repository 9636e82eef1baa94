"""Orthonormal bases of the traceless Hermitian matrices.

Gell-Mann ordering (1-indexed labels ``(n, m)``): symmetric pairs ``n < m``
lexicographically, then antisymmetric pairs ``m < n`` lexicographically, then
the diagonal elements ``n = 1 .. d-1``.
"""
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .hermitian import hermitian, hs_gram, op_from_json, op_to_json

__all__ = [
    "TracelessBasis",
    "GellMannIndex",
    "Givens",
    "OrthogonalParam",
    "ValidationReport",
    "gell_mann_indices",
    "gell_mann_basis",
    "pauli_basis",
    "rotate_basis",
    "random_rotation",
    "rotated_basis",
    "validate_basis",
    "orthonormalize",
    "basis_to_json",
    "basis_from_json",
]


@dataclass(frozen=True, eq=False)
class TracelessBasis:
    elements: np.ndarray
    label: str = ""
    sum_f: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        els = hermitian(self.elements)
        if els.ndim != 3:
            raise ValueError("elements must be a (d^2-1, d, d) stack")
        d = els.shape[1]
        if els.shape[0] != d * d - 1:
            raise ValueError(f"need {d * d - 1} elements for d={d}, got {els.shape[0]}")
        els.setflags(write=False)
        total = els.sum(axis=0)
        total.setflags(write=False)
        object.__setattr__(self, "elements", els)
        object.__setattr__(self, "sum_f", total)

    @property
    def dim(self):
        return self.elements.shape[1]

    def __len__(self):
        return self.elements.shape[0]

    def negated(self):
        return TracelessBasis(-self.elements, label=f"neg({self.label})")


class GellMannIndex(NamedTuple):
    n: int
    m: int
    flat: int


def gell_mann_indices(d):
    """All ``(n, m, flat)`` labels in basis order; ``flat`` runs from 1."""
    pairs = [(n, m) for n in range(1, d + 1) for m in range(n + 1, d + 1)]
    pairs += [(n, m) for n in range(1, d + 1) for m in range(1, n)]
    pairs += [(n, n) for n in range(1, d)]
    return [GellMannIndex(n, m, k) for k, (n, m) in enumerate(pairs, start=1)]


def _gell_mann(n, m, d):
    g = np.zeros((d, d), dtype=np.complex128)
    i, j = n - 1, m - 1
    if n < m:
        g[i, j] = g[j, i] = 1 / np.sqrt(2)
    elif m < n:
        g[i, j] = 1j / np.sqrt(2)
        g[j, i] = -1j / np.sqrt(2)
    else:
        g[np.arange(n), np.arange(n)] = 1.0
        g[n, n] = -n
        g /= np.sqrt(n * (n + 1))
    return g


def gell_mann_basis(d):
    if d < 2:
        raise ValueError("d must be at least 2")
    els = np.array([_gell_mann(ix.n, ix.m, d) for ix in gell_mann_indices(d)])
    return TracelessBasis(els, label="gellmann")


def pauli_basis():
    """Normalized ``X, -Y, Z`` (the sign of ``Y`` gives ``F = (1/sqrt2)[[1, 1+i], [1-i, -1]]``)."""
    els = np.array(
        [
            [[0, 1], [1, 0]],
            [[0, 1j], [-1j, 0]],
            [[1, 0], [0, -1]],
        ],
        dtype=np.complex128,
    ) / np.sqrt(2)
    return TracelessBasis(els, label="pauli")


class Givens(NamedTuple):
    i: int
    j: int
    theta: float


@dataclass(frozen=True)
class OrthogonalParam:
    """Orthogonal matrix ``D G_k ... G_1`` on ``n`` axes.

    Each Givens factor acts on axes ``(i, j)`` as ``[[c, -s], [s, c]]``;
    ``reflect`` optionally flips the sign of one axis afterwards.
    """

    n: int
    rotations: tuple = ()
    reflect: int = None

    def __post_init__(self):
        rots = tuple(Givens(int(i), int(j), float(th)) for i, j, th in self.rotations)
        for g in rots:
            if not (0 <= g.i < self.n and 0 <= g.j < self.n) or g.i == g.j:
                raise ValueError(f"bad Givens plane ({g.i}, {g.j}) for n={self.n}")
        if self.reflect is not None and not 0 <= self.reflect < self.n:
            raise ValueError(f"reflection axis {self.reflect} out of range")
        object.__setattr__(self, "rotations", rots)

    def apply(self, x):
        """Left-multiply the leading axis of ``x`` by the orthogonal matrix."""
        x = np.array(x, copy=True)
        for i, j, th in self.rotations:
            c, s = np.cos(th), np.sin(th)
            xi = x[i].copy()
            x[i] = c * xi - s * x[j]
            x[j] = s * xi + c * x[j]
        if self.reflect is not None:
            x[self.reflect] = -x[self.reflect]
        return x

    def matrix(self):
        return self.apply(np.eye(self.n))


def rotate_basis(basis, rotation):
    """``F'_a = sum_b A_ab F_b`` for an :class:`OrthogonalParam` or dense orthogonal ``A``."""
    n = len(basis)
    if isinstance(rotation, OrthogonalParam):
        if rotation.n != n:
            raise ValueError(f"rotation acts on {rotation.n} axes, basis has {n} elements")
        new = rotation.apply(basis.elements)
    else:
        a = np.asarray(rotation, dtype=np.float64)
        if a.shape != (n, n):
            raise ValueError(f"rotation matrix shape {a.shape} does not match basis size {n}")
        if np.abs(a @ a.T - np.eye(n)).max() > 1e-10:
            raise ValueError("rotation matrix is not orthogonal")
        new = np.einsum("ab,bij->aij", a, basis.elements)
    return TracelessBasis(new, label=basis.label)


def random_rotation(n, seed, steps, rng=None):
    """``steps`` Givens factors on uniformly drawn planes with uniform angles."""
    rng = rng or np.random.default_rng(seed)
    rots = []
    for _ in range(steps):
        i, j = rng.choice(n, size=2, replace=False)
        rots.append((int(i), int(j), float(rng.uniform(-np.pi, np.pi))))
    return OrthogonalParam(n, tuple(rots))


def rotated_basis(d, seed, steps, start=None):
    start = start or gell_mann_basis(d)
    rot = random_rotation(len(start), seed, steps)
    out = rotate_basis(start, rot)
    return TracelessBasis(out.elements, label=f"rotated({seed},{steps})")


@dataclass
class ValidationReport:
    trace_residuals: np.ndarray
    gram: np.ndarray
    max_violation: float
    tol: float

    @property
    def passed(self):
        return bool(self.max_violation <= self.tol)

    def to_dict(self):
        return {
            "passed": self.passed,
            "tol": self.tol,
            "max_violation": self.max_violation,
            "max_trace_residual": float(np.abs(self.trace_residuals).max()),
            "max_gram_residual": float(np.abs(self.gram - np.eye(len(self.gram))).max()),
        }


def validate_basis(elements, tol=1e-10):
    """Check tracelessness and orthonormality of a list of operators.

    Failures are reported, not raised.
    """
    if isinstance(elements, TracelessBasis):
        elements = elements.elements
    els = np.asarray(elements, dtype=np.complex128)
    if els.ndim != 3 or len(els) == 0:
        raise ValueError("expected a nonempty stack of square matrices")
    traces = np.trace(els, axis1=1, axis2=2)
    gram = hs_gram(els)
    viol = max(
        float(np.abs(traces).max()),
        float(np.abs(gram - np.eye(len(els))).max()),
    )
    # a full basis of the traceless subspace has exactly d^2-1 members
    d = els.shape[1]
    if len(els) != d * d - 1:
        viol = max(viol, 1.0)
    return ValidationReport(traces, gram, viol, tol)


def orthonormalize(elements):
    """Modified Gram-Schmidt in the Hilbert-Schmidt inner product."""
    out = np.array(elements, dtype=np.complex128, copy=True)
    for k in range(len(out)):
        for j in range(k):
            out[k] -= np.einsum("ij,ji->", out[j], out[k]).real * out[j]
        out[k] /= np.sqrt(np.einsum("ij,ji->", out[k], out[k]).real)
    return out


def basis_to_json(basis):
    return {
        "dim": basis.dim,
        "label": basis.label,
        "elements": [op_to_json(f) for f in basis.elements],
    }


def basis_from_json(obj):
    els = np.array([op_from_json(e) for e in obj["elements"]])
    basis = TracelessBasis(els, label=obj.get("label", ""))
    if basis.dim != int(obj["dim"]):
        raise ValueError("dim field does not match element size")
    return basis
