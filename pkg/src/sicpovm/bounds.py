"""Eigenvalue bounds for SIC POVMs built on the generalized Gell-Mann basis.

``F = N + V`` with ``N`` the diagonal part and ``V`` the constant border matrix
``(1/sqrt2)(1 -/+ i)`` above/below the diagonal. Extreme eigenvalues of ``V``
and of ``W = V - d(d+1) G_12`` come from a Schur-complement recursion for
``Det(sqrt2 (V - v I))``; Weyl's inequality turns them into intervals for the
spectra of ``F``, ``R_nn`` and ``R_nm``.
"""
from dataclasses import asdict, dataclass

import numpy as np

from .basis import gell_mann_basis, gell_mann_indices
from .hermitian import eigvals
from .sic import make_family, purity

__all__ = [
    "SingularBlockError",
    "RootFindingError",
    "BoundsReport",
    "ScanRow",
    "border_matrix_v",
    "border_matrix_w",
    "v_tilde",
    "w_tilde",
    "block_det",
    "char_poly_v",
    "char_poly_w",
    "extreme_roots",
    "weyl_bounds",
    "scan_row",
    "dimension_scan",
    "write_scan_csv",
]

ROOT_TOL = 1e-10
SQRT2 = np.sqrt(2.0)


class SingularBlockError(ArithmeticError):
    """An inner block of the recursion is singular at the evaluation point."""


class RootFindingError(RuntimeError):
    pass


def _upper(d):
    return np.triu(np.ones((d, d), dtype=bool), 1)


def border_matrix_v(d):
    if d < 2:
        raise ValueError("d must be at least 2")
    up = _upper(d)
    v = np.zeros((d, d), dtype=np.complex128)
    v[up] = 1 - 1j
    v[up.T] = 1 + 1j
    return v / SQRT2


def border_matrix_w(d):
    """``W = V - d(d+1) G_12``: the border matrix of ``R_12``."""
    w = border_matrix_v(d)
    td = d * (d + 1)
    w[0, 1] -= td / SQRT2
    w[1, 0] -= td / SQRT2
    return w


def v_tilde(k, v):
    """``sqrt2 (V_k - v I)``: ``-sqrt2 v`` on the diagonal, ``1 -/+ i`` off it."""
    return SQRT2 * (border_matrix_v(k) - v * np.eye(k)) if k >= 2 else np.array([[-SQRT2 * v]], dtype=np.complex128)


def w_tilde(d, w):
    return SQRT2 * (border_matrix_w(d) - w * np.eye(d))


def block_det(a, b, c, dblock):
    """``Det([[A, B], [C, D]]) = Det(D) Det(A - B D^-1 C)`` for invertible ``D``."""
    a = np.atleast_2d(a)
    dblock = np.atleast_2d(dblock)
    b = np.atleast_2d(b)
    c = np.atleast_2d(c)
    if b.shape[0] != a.shape[0]:
        b = b.T
    if c.shape[1] != a.shape[1]:
        c = c.T
    x = np.linalg.solve(dblock, c)
    return np.linalg.det(dblock) * np.linalg.det(a - b @ x)


def _schur_step(det_k, diag, border, inner):
    # inner block is only inverted implicitly through a linear solve
    cond = np.linalg.cond(inner)
    if not np.isfinite(cond) or cond > 1e13:
        raise SingularBlockError("inner block is singular at this point")
    quad = border @ np.linalg.solve(inner, border.conj())
    # B V~^-1 B^dagger is a Hermitian quadratic form, so the factor is real
    rel = max(1e-10, 1e3 * np.finfo(float).eps * cond)
    if abs(quad.imag) > rel * max(1.0, abs(quad)):
        raise ArithmeticError(f"Schur complement has imaginary residue {quad.imag:.3e}")
    return det_k * (diag - quad.real)


def _det_v_chain(k, v):
    """``Det(V~_k)`` from the base ``Det(V~_2) = 2 v^2 - 2`` upward."""
    if k == 1:
        return -SQRT2 * v
    det = 2.0 * v * v - 2.0
    for j in range(2, k):
        border = np.full(j, 1 - 1j)
        det = _schur_step(det, -SQRT2 * v, border, v_tilde(j, v))
    return det


def char_poly_v(d, v):
    """``Det(V~_d)`` at real ``v`` via ``Det(V~_{k+1}) = Det(V~_k)(-sqrt2 v - B_k V~_k^{-1} C_k)``."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return float(_det_v_chain(d, float(v)))


def char_poly_w(d, w):
    """``Det(W~)`` at real ``w``: the ``V~_{d-1}`` recursion plus one final bordered step."""
    if d < 2:
        raise ValueError("d must be at least 2")
    w = float(w)
    corner = 1 - d * (d + 1) - 1j
    if d == 2:
        return float(2.0 * w * w - abs(corner) ** 2)
    inner_det = _det_v_chain(d - 1, w)
    border = np.full(d - 1, 1 - 1j)
    border[0] = corner
    return float(_schur_step(inner_det, -SQRT2 * w, border, v_tilde(d - 1, w)))


def _gershgorin(m):
    m = np.asarray(m)
    centers = np.diag(m).real
    radii = np.abs(m).sum(axis=1) - np.abs(np.diag(m))
    return float((centers - radii).min()), float((centers + radii).max())


def _safe_eval(poly, x):
    try:
        return poly(x)
    except SingularBlockError:
        for dx in (1e-12, -1e-12, 1e-9, -1e-9):
            try:
                return poly(x + dx * max(1.0, abs(x)))
            except SingularBlockError:
                continue
        raise


def _bisect(poly, lo, hi, flo, tol):
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = _safe_eval(poly, mid)
        if fm == 0.0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def extreme_roots(poly, bracket, n_grid=16, expected=None, max_refine=6, tol=ROOT_TOL):
    """Largest and smallest real roots of ``poly`` inside ``bracket``.

    Sign changes are located on a uniform grid, refined 4x at a time until
    ``expected`` roots are seen (when given) or the refinement cap is hit, then
    each outermost bracket is bisected to ``tol``.
    """
    lo, hi = map(float, bracket)
    if not lo < hi:
        raise ValueError("bracket must satisfy lo < hi")
    n = int(n_grid)
    for _ in range(max_refine + 1):
        xs = np.linspace(lo, hi, n + 1)
        fs = np.array([_safe_eval(poly, x) for x in xs])
        sgn = np.sign(fs)
        exact = np.flatnonzero(sgn == 0)
        changes = np.flatnonzero(sgn[:-1] * sgn[1:] < 0)
        found = len(changes) + len(exact)
        if found and (expected is None or found >= expected):
            break
        n *= 4
    else:
        if not found:
            raise RootFindingError(f"no sign change on {n} grid cells in [{lo}, {hi}]")
    roots = [float(xs[k]) for k in exact]
    for k in (changes[:1].tolist() + changes[-1:].tolist()) if len(changes) else []:
        roots.append(_bisect(poly, xs[k], xs[k + 1], fs[k], tol))
    return max(roots), min(roots)


def _padded(interval):
    lo, hi = interval
    pad = 1e-3 * max(1.0, hi - lo)
    return lo - pad, hi + pad


@dataclass
class BoundsReport:
    dim: int
    n1: float
    nd: float
    v1: float
    vd: float
    w1: float
    wd: float
    f_bounds: tuple
    rnn_bounds: tuple
    rnm_bounds: tuple
    lambda_max: float
    lambda_min: float
    t0_bound: float
    t1_bound: float
    t0_numeric: float
    t1_numeric: float
    t_m_numeric: float
    # eigensolver cross-checks of the recursion roots
    v_eig: tuple
    w_eig: tuple
    # numerically exact spectral extremes that the intervals must contain
    f_extremes: tuple
    rnn_extremes: tuple
    rnm_extremes: tuple

    @property
    def recursion_discrepancy(self):
        return max(abs(self.v1 - self.v_eig[0]), abs(self.vd - self.v_eig[1]),
                   abs(self.w1 - self.w_eig[0]), abs(self.wd - self.w_eig[1]))

    def contains_all(self, tol=1e-9):
        def inside(ext, iv):
            return iv[0] - tol <= ext[1] and ext[0] <= iv[1] + tol

        return (inside(self.f_extremes, self.f_bounds)
                and inside(self.rnn_extremes, self.rnn_bounds)
                and inside(self.rnm_extremes, self.rnm_bounds))

    @property
    def conservative(self):
        return abs(self.t0_bound) <= abs(self.t0_numeric) and self.t1_bound <= self.t1_numeric

    def to_dict(self):
        out = asdict(self)
        for k, v in out.items():
            if isinstance(v, tuple):
                out[k] = list(v)
        out["recursion_discrepancy"] = self.recursion_discrepancy
        out["contains_all"] = self.contains_all()
        out["conservative"] = self.conservative
        out["t1_gap"] = self.t1_numeric - self.t1_bound
        out["t0_gap"] = abs(self.t0_numeric) - abs(self.t0_bound)
        return out


def weyl_bounds(d):
    if d < 2:
        raise ValueError("d must be at least 2")
    td = d * (d + 1)
    n1 = float(sum(1 / np.sqrt(n * (n + 1)) for n in range(1, d)))
    nd = -np.sqrt((d - 1) / d)

    v_mat, w_mat = border_matrix_v(d), border_matrix_w(d)
    v1, vd = extreme_roots(lambda x: char_poly_v(d, x), _padded(_gershgorin(v_mat)), n_grid=8 * d, expected=d)
    w1, wd = extreme_roots(lambda x: char_poly_w(d, x), _padded(_gershgorin(w_mat)), n_grid=8 * d, expected=d)

    f_bounds = (nd + vd, n1 + v1)
    rnn_bounds = (nd - td * n1 + vd, n1 + td * np.sqrt((d - 1) / d) + v1)
    rnm_bounds = (nd + wd, n1 + w1)
    lambda_max = max((d + 1) * f_bounds[1], rnn_bounds[1], rnm_bounds[1])
    lambda_min = min((d + 1) * f_bounds[0], rnm_bounds[0], rnn_bounds[0])

    basis = gell_mann_basis(d)
    fam = make_family(basis)
    spec_f = eigvals(basis.sum_f)
    ve, we = eigvals(v_mat), eigvals(w_mat)
    diag = np.array([ix.n == ix.m for ix in gell_mann_indices(d)])
    r_spec = eigvals(fam.r_ops[:-1])
    rnn, rnm = r_spec[diag], r_spec[~diag]

    return BoundsReport(
        dim=d, n1=n1, nd=float(nd), v1=v1, vd=vd, w1=w1, wd=wd,
        f_bounds=tuple(map(float, f_bounds)),
        rnn_bounds=tuple(map(float, rnn_bounds)),
        rnm_bounds=tuple(map(float, rnm_bounds)),
        lambda_max=float(lambda_max), lambda_min=float(lambda_min),
        t0_bound=float(-1 / (d * d * lambda_max)), t1_bound=float(-1 / (d * d * lambda_min)),
        t0_numeric=fam.t0, t1_numeric=fam.t1, t_m_numeric=fam.t_m,
        v_eig=(float(ve[0]), float(ve[-1])), w_eig=(float(we[0]), float(we[-1])),
        f_extremes=(float(spec_f[0]), float(spec_f[-1])),
        rnn_extremes=(float(rnn[:, 0].max()), float(rnn[:, -1].min())),
        rnm_extremes=(float(rnm[:, 0].max()), float(rnm[:, -1].min())),
    )


@dataclass
class ScanRow:
    d: int
    t0: float
    t1: float
    t_m: float
    ratio: float
    a_tm: float


def scan_row(d):
    fam = make_family(gell_mann_basis(d))
    tm = fam.t_m
    return ScanRow(d, fam.t0, fam.t1, tm, tm * (d * (d + 1)) ** 1.5, purity(tm, d))


def dimension_scan(d_min, d_max):
    """``t_m`` of the Gell-Mann basis and its ratio to the rank-one value, per dimension."""
    if not 2 <= d_min <= d_max:
        raise ValueError(f"need 2 <= d_min <= d_max, got {d_min}, {d_max}")
    return [scan_row(d) for d in range(d_min, d_max + 1)]


SCAN_HEADER = ("d", "t0", "t1", "t_m", "ratio", "a_tm")


def write_scan_csv(rows, fh):
    fh.write(",".join(SCAN_HEADER) + "\n")
    for r in rows:
        vals = [str(r.d)] + [format(x, ".17g") for x in (r.t0, r.t1, r.t_m, r.ratio, r.a_tm)]
        fh.write(",".join(vals) + "\n")
