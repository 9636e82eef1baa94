"""Stochastic hill climbing over orthogonal rotations of a traceless basis.

The objective is the largest purity ``a(t_m)`` reachable by the SIC POVM
family of a basis. Proposals are single Givens rotations on a uniformly drawn
plane with a normally distributed angle; a proposal is kept whenever it does
not lower the objective, so plateaus can be crossed.
"""
from dataclasses import dataclass, field

import numpy as np

from .basis import TracelessBasis, basis_to_json, orthonormalize, validate_basis
from .sic import make_family, purity
from .tomography import philox

__all__ = ["SearchState", "objective", "hill_climb", "anneal_schedule", "multi_start", "search_to_json"]

DRIFT_TOL = 1e-9
DRIFT_CHECK_EVERY = 100


def objective(basis):
    """``a(t_m)`` with ``t_m = max(|t0|, t1)``."""
    fam = make_family(basis)
    return purity(fam.t_m, basis.dim)


@dataclass
class SearchState:
    current: TracelessBasis
    objective: float
    seed: int
    step_scale: float
    history: list = field(default_factory=list)
    rejections: int = 0  # consecutive rejected proposals
    rng_state: dict = None

    @property
    def dim(self):
        return self.current.dim

    @property
    def ceiling(self):
        return 1.0 / self.dim**2


def _givens(elements, i, j, theta):
    out = elements.copy()
    c, s = np.cos(theta), np.sin(theta)
    out[i] = c * elements[i] - s * elements[j]
    out[j] = s * elements[i] + c * elements[j]
    return out


def _climb(state, iterations, shrink=None, patience=200):
    rng = philox(state.seed)
    if state.rng_state is not None:
        rng.bit_generator.state = state.rng_state
    els = np.array(state.current.elements)
    n = len(els)
    best = state.objective
    start = state.history[-1][0] if state.history else 0
    if not state.history:
        state.history.append((0, best))
    label = state.current.label
    for it in range(start + 1, start + iterations + 1):
        i, j = rng.choice(n, size=2, replace=False)
        theta = rng.normal(0.0, state.step_scale)
        trial = _givens(els, int(i), int(j), theta)
        value = objective(TracelessBasis(trial))
        if value >= best:
            els, best = trial, value
            state.rejections = 0
        else:
            state.rejections += 1
            if shrink is not None and state.rejections >= patience:
                state.step_scale *= shrink
                state.rejections = 0
        if it % DRIFT_CHECK_EVERY == 0 and validate_basis(els).max_violation > DRIFT_TOL:
            els = orthonormalize(els)
        state.history.append((it, best))
    if validate_basis(els).max_violation > DRIFT_TOL:
        els = orthonormalize(els)
    state.current = TracelessBasis(els, label=label)
    state.objective = best
    state.rng_state = rng.bit_generator.state
    return state


def hill_climb(start, iterations, seed, step_scale):
    if iterations < 1:
        raise ValueError("iterations must be at least 1")
    if step_scale <= 0:
        raise ValueError("step_scale must be positive")
    state = SearchState(start, objective(start), int(seed), float(step_scale))
    return _climb(state, iterations)


def anneal_schedule(state, shrink, iterations, patience=200):
    """Continue a search, shrinking ``step_scale`` after ``patience`` straight rejections."""
    if not 0 < shrink < 1:
        raise ValueError("shrink must lie in (0, 1)")
    return _climb(state, iterations, shrink=shrink, patience=patience)


def multi_start(start, iterations, seeds, step_scale, shrink=None):
    """Independent searches per seed; best objective wins, lowest seed breaks ties."""
    runs = []
    for seed in seeds:
        st = hill_climb(start, iterations, seed, step_scale)
        if shrink is not None:
            st = anneal_schedule(st, shrink, iterations)
        runs.append(st)
    best = max(runs, key=lambda s: (s.objective, -s.seed))
    return best, runs


def search_to_json(state, iterations):
    return {
        "dim": state.dim,
        "seed": state.seed,
        "iterations": int(iterations),
        "best_objective": state.objective,
        "ceiling": state.ceiling,
        "step_scale": state.step_scale,
        "history": [[int(i), float(v)] for i, v in state.history],
        "best_basis": basis_to_json(state.current),
    }
