"""Cyclic Jacobi eigensolver for stacks of complex Hermitian matrices.

Two interchangeable kernels implement the same rotation sequence:

* ``_sweeps_numba``: scalar loops compiled with numba ``@njit``.
* ``_sweeps_numpy``: the same sweeps vectorized over the batch axis.

``SICPOVM_BACKEND=numpy`` forces the numpy path; otherwise numba is used
when it can be imported.
"""
import os

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is an optional accelerator
    numba = None

OFF_TOL = 1e-13
MAX_SWEEPS = 100


class ConvergenceError(RuntimeError):
    """Jacobi sweeps hit the cap before the off-diagonal mass vanished."""


def _want_numba():
    choice = os.environ.get("SICPOVM_BACKEND", "numba").strip().lower()
    if choice not in ("numba", "numpy"):
        raise ValueError(f"SICPOVM_BACKEND must be 'numba' or 'numpy', got {choice!r}")
    return choice == "numba" and numba is not None


BACKEND = "numba" if _want_numba() else "numpy"


def _sweeps_python(a, v, tol, max_sweeps):
    nb, d, _ = a.shape
    status = np.zeros(nb, dtype=np.int64)
    for b in range(nb):
        fro = 0.0
        for i in range(d):
            for j in range(d):
                z = a[b, i, j]
                fro += z.real * z.real + z.imag * z.imag
        thresh = tol * np.sqrt(fro)
        sweep = 0
        while True:
            off = 0.0
            for i in range(d):
                for j in range(d):
                    if i != j:
                        z = a[b, i, j]
                        off += z.real * z.real + z.imag * z.imag
            if np.sqrt(off) <= thresh:
                status[b] = sweep
                break
            if sweep == max_sweeps:
                status[b] = -1
                break
            sweep += 1
            for p in range(d - 1):
                for q in range(p + 1, d):
                    apq = a[b, p, q]
                    mag = abs(apq)
                    if mag == 0.0:
                        continue
                    e = apq / mag
                    app = a[b, p, p].real
                    aqq = a[b, q, q].real
                    theta = (aqq - app) / (2.0 * mag)
                    t = 1.0 / (abs(theta) + np.hypot(theta, 1.0))
                    if theta < 0.0:
                        t = -t
                    c = 1.0 / np.sqrt(t * t + 1.0)
                    s = t * c
                    ec = e * c
                    es = e * s
                    for k in range(d):
                        akp = a[b, k, p]
                        akq = a[b, k, q]
                        a[b, k, p] = akp * ec - akq * s
                        a[b, k, q] = akp * es + akq * c
                    ecc = ec.conjugate()
                    esc = es.conjugate()
                    for k in range(d):
                        apk = a[b, p, k]
                        aqk = a[b, q, k]
                        a[b, p, k] = ecc * apk - s * aqk
                        a[b, q, k] = esc * apk + c * aqk
                    a[b, p, q] = 0.0
                    a[b, q, p] = 0.0
                    a[b, p, p] = app - t * mag
                    a[b, q, q] = aqq + t * mag
                    for k in range(d):
                        vkp = v[b, k, p]
                        vkq = v[b, k, q]
                        v[b, k, p] = vkp * ec - vkq * s
                        v[b, k, q] = vkp * es + vkq * c
    return status


_sweeps_numba = numba.njit(cache=True)(_sweeps_python) if numba is not None else None


def _sweeps_numpy(a, v, tol, max_sweeps):
    nb, d, _ = a.shape
    status = np.full(nb, -1, dtype=np.int64)
    offmask = ~np.eye(d, dtype=bool)
    thresh = tol * np.sqrt(np.einsum("bij,bij->b", a.real, a.real) + np.einsum("bij,bij->b", a.imag, a.imag))
    active = np.arange(nb)
    for sweep in range(max_sweeps + 1):
        sub = a[active]
        off = np.sqrt((np.abs(sub[:, offmask]) ** 2).sum(axis=1))
        done = off <= thresh[active]
        status[active[done]] = sweep
        active = active[~done]
        if active.size == 0 or sweep == max_sweeps:
            break
        x = a[active]
        y = v[active]
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = x[:, p, q]
                mag = np.abs(apq)
                live = mag > 0.0
                safe = np.where(live, mag, 1.0)
                e = np.where(live, apq / safe, 1.0)
                app = x[:, p, p].real.copy()
                aqq = x[:, q, q].real.copy()
                theta = (aqq - app) / (2.0 * safe)
                t = 1.0 / (np.abs(theta) + np.hypot(theta, 1.0))
                t = np.where(live, np.where(theta < 0.0, -t, t), 0.0)
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                ec = (e * c)[:, None]
                es = (e * s)[:, None]
                cc = c[:, None]
                ss = s[:, None]
                xp = x[:, :, p].copy()
                xq = x[:, :, q]
                x[:, :, p] = xp * ec - xq * ss
                x[:, :, q] = xp * es + xq * cc
                rp = x[:, p, :].copy()
                rq = x[:, q, :]
                x[:, p, :] = ec.conj() * rp - ss * rq
                x[:, q, :] = es.conj() * rp + cc * rq
                # skipped rotations are exact identities; only overwrite live ones
                x[live, p, q] = 0.0
                x[live, q, p] = 0.0
                x[live, p, p] = (app - t * mag)[live]
                x[live, q, q] = (aqq + t * mag)[live]
                yp = y[:, :, p].copy()
                yq = y[:, :, q]
                y[:, :, p] = yp * ec - yq * ss
                y[:, :, q] = yp * es + yq * cc
        a[active] = x
        v[active] = y
    return status


def eigh_stack(a, tol=OFF_TOL, max_sweeps=MAX_SWEEPS, backend=None):
    """Eigendecompose a ``(n, d, d)`` stack of Hermitian matrices.

    Returns ``(w, v, sweeps)`` with eigenvalues sorted descending per matrix,
    eigenvectors as the columns of ``v[k]`` and the sweep count used for each.
    """
    a = np.array(a, dtype=np.complex128, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ValueError(f"expected a (n, d, d) stack, got shape {a.shape}")
    n, d, _ = a.shape
    v = np.broadcast_to(np.eye(d, dtype=np.complex128), (n, d, d)).copy()
    kernel = backend or BACKEND
    if kernel == "numba":
        if _sweeps_numba is None:
            raise RuntimeError("numba backend requested but numba is not installed")
        status = _sweeps_numba(a, v, tol, max_sweeps)
    elif kernel == "numpy":
        status = _sweeps_numpy(a, v, tol, max_sweeps)
    else:
        raise ValueError(f"unknown backend {kernel!r}")
    if (status < 0).any():
        bad = int(np.flatnonzero(status < 0)[0])
        raise ConvergenceError(f"Jacobi did not converge within {max_sweeps} sweeps (matrix {bad})")
    w = np.diagonal(a, axis1=1, axis2=2).real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    return w, v, status
