"""Shannon-family entropies, von Neumann entropy, Holevo chi and majorization.

All logarithms are base 2 and ``0 log 0 = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .operators import POSITIVITY_TOL, OperatorError, check_density, eigvalsh_desc

PROB_TOL = 1e-10


class DistributionError(ValueError):
    pass


def prob_vector(p, tol: float = PROB_TOL) -> np.ndarray:
    p = np.asarray(p, dtype=float).reshape(-1)
    if p.size == 0 or not np.all(np.isfinite(p)):
        raise DistributionError("probability vector must be finite and non-empty")
    if np.any(p < -tol):
        raise DistributionError(f"negative probability {p.min():.3g}")
    if abs(p.sum() - 1.0) > tol:
        raise DistributionError(f"probabilities sum to {p.sum()!r}")
    return np.clip(p, 0.0, None)


def joint_distribution(j, tol: float = PROB_TOL) -> np.ndarray:
    j = np.asarray(j, dtype=float)
    if j.ndim != 2:
        raise DistributionError("joint distribution must be a 2-d table")
    prob_vector(j.reshape(-1), tol)
    return np.clip(j, 0.0, None)


def _h(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz))) + 0.0


def shannon_entropy(p) -> float:
    return _h(prob_vector(p))


def marginals(j) -> tuple[np.ndarray, np.ndarray]:
    """(p(x), p(y)) for a table with rows indexed by x and columns by y."""
    j = joint_distribution(j)
    return j.sum(axis=1), j.sum(axis=0)


def joint_entropy(j) -> float:
    return _h(joint_distribution(j).reshape(-1))


def conditional_slice_entropy(j, col: int) -> float:
    """H(X | y = y_col); raises if that column has zero weight."""
    j = joint_distribution(j)
    py = j[:, col].sum()
    if py <= 0:
        raise DistributionError(f"column {col} has zero probability")
    return _h(j[:, col] / py)


def conditional_entropy(j) -> float:
    """H(X|Y) = sum_y p(y) H(X | y); zero-weight columns contribute nothing."""
    j = joint_distribution(j)
    total = 0.0
    for col in range(j.shape[1]):
        py = j[:, col].sum()
        if py > 0:
            total += py * _h(j[:, col] / py)
    return total


def mutual_information(j) -> float:
    px, _ = marginals(j)
    return _h(px) - conditional_entropy(j)


def grouping_residual(p, merge: tuple[int, int], measure: Callable[[np.ndarray], float] | None = None) -> float:
    """|H(p) - [H(p merged) + p_merged H(conditional pair)]| for the chosen pair.

    ``measure`` defaults to the Shannon entropy. The merged outcome takes the
    position of the lower index.
    """
    p = prob_vector(p)
    i, k = merge
    if p.size < 2 or i == k or not (0 <= i < p.size and 0 <= k < p.size):
        raise DistributionError(f"invalid merge pair {merge} for {p.size} outcomes")
    f = shannon_entropy if measure is None else measure
    pm = p[i] + p[k]
    if pm == 0:
        return 0.0
    lo, hi = sorted((i, k))
    merged = np.delete(p, hi)
    merged[lo] = pm
    cond = np.array([p[i], p[k]]) / pm
    return abs(f(p) - (f(merged) + pm * f(cond)))


def dretske_measure(p_x, conditional, i: int) -> float:
    """Information a single event x_i carries about a source: -log2 p(x_i) - H(conditional)."""
    p_x = prob_vector(p_x)
    if p_x[i] <= 0:
        raise DistributionError(f"event {i} has zero probability")
    return float(-np.log2(p_x[i])) - shannon_entropy(conditional)


def spectrum(rho, tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Descending eigenvalues with entries in [-tol, 0) clipped to zero."""
    ev = eigvalsh_desc(rho)
    if ev[-1] < -tol:
        raise OperatorError(f"matrix has eigenvalue {ev[-1]:.3g} below -{tol}")
    return np.clip(ev, 0.0, None)


def von_neumann_entropy(rho) -> float:
    rho = check_density(rho)
    return _h(spectrum(rho))


@dataclass(frozen=True)
class Ensemble:
    states: tuple[np.ndarray, ...]
    probs: np.ndarray

    def __post_init__(self):
        states = tuple(check_density(s) for s in self.states)
        probs = prob_vector(self.probs)
        if len(states) != probs.size or not states:
            raise DistributionError("ensemble states and probabilities differ in length")
        if len({s.shape for s in states}) != 1:
            raise OperatorError("ensemble states have mismatched dimensions")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", probs)

    @classmethod
    def of_pure(cls, kets: Sequence, probs) -> "Ensemble":
        vs = [np.asarray(k, dtype=complex).reshape(-1) for k in kets]
        return cls(tuple(np.outer(v, v.conj()) for v in vs), np.asarray(probs, dtype=float))

    def average(self) -> np.ndarray:
        return sum(p * s for p, s in zip(self.probs, self.states))


def holevo_chi(e: Ensemble) -> float:
    return von_neumann_entropy(e.average()) - float(
        sum(p * von_neumann_entropy(s) for p, s in zip(e.probs, e.states))
    )


def states_commute(e: Ensemble, tol: float = 1e-10) -> bool:
    """Diagnostic for the Holevo equality condition; not a numerical guarantee."""
    for i, a in enumerate(e.states):
        for b in e.states[i + 1 :]:
            if np.max(np.abs(a @ b - b @ a)) > tol:
                return False
    return True


def check_projective_measurement(projectors: Sequence, tol: float = 1e-10) -> list[np.ndarray]:
    ps = [np.asarray(p, dtype=complex) for p in projectors]
    if not ps:
        raise OperatorError("empty measurement")
    d = ps[0].shape[0]
    if np.max(np.abs(sum(ps) - np.eye(d))) > tol:
        raise OperatorError("projectors do not sum to the identity")
    for i, a in enumerate(ps):
        if np.max(np.abs(a @ a - a)) > tol or np.max(np.abs(a - a.conj().T)) > tol:
            raise OperatorError(f"element {i} is not an orthogonal projector")
        for b in ps[i + 1 :]:
            if np.max(np.abs(a @ b)) > tol:
                raise OperatorError("projectors are not mutually orthogonal")
    return ps


def basis_projectors(basis) -> list[np.ndarray]:
    """Rank-one projectors onto the columns of a unitary (or a list of kets)."""
    b = np.asarray(basis, dtype=complex)
    cols = [b[:, k] for k in range(b.shape[1])] if b.ndim == 2 else [np.asarray(v) for v in basis]
    return [np.outer(v, v.conj()) for v in cols]


def measurement_distribution(rho, projectors: Sequence) -> np.ndarray:
    rho = check_density(rho)
    ps = check_projective_measurement(projectors)
    p = np.array([np.trace(rho @ P).real for P in ps])
    p = np.clip(p, 0.0, None)
    return p / p.sum()


def induced_joint(e: Ensemble, projectors: Sequence) -> np.ndarray:
    """Joint table p(a_i, b_k) = p_i Tr(rho_i P_k) for ensemble index a and outcome b."""
    ps = check_projective_measurement(projectors)
    j = np.array([[p * np.trace(s @ P).real for P in ps] for p, s in zip(e.probs, e.states)])
    j = np.clip(j, 0.0, None)
    return j / j.sum()


def _padded_sorted(p, q) -> tuple[np.ndarray, np.ndarray]:
    p = np.sort(np.asarray(p, dtype=float))[::-1]
    q = np.sort(np.asarray(q, dtype=float))[::-1]
    n = max(p.size, q.size)
    return np.pad(p, (0, n - p.size)), np.pad(q, (0, n - q.size))


def majorizes(p, q, tol: float = 1e-12) -> bool:
    """True iff q is majorized by p (q < p): every descending partial sum of p dominates."""
    p, q = _padded_sorted(p, q)
    return bool(np.all(np.cumsum(p) >= np.cumsum(q) - tol))
