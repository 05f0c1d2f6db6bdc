"""Complete sets of mutually unbiased bases (d = 2, 3), Brukner-Zeilinger
information, and linear state reconstruction from MUB statistics."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .measures import basis_projectors, measurement_distribution, prob_vector, shannon_entropy
from .operators import OperatorError, check_density, min_eigenvalue

SUPPORTED_DIMS = (2, 3)


@dataclass(frozen=True)
class MubSet:
    """``bases[j]`` is a d x d unitary whose columns form basis j."""

    dim: int
    bases: tuple[np.ndarray, ...]

    def projectors(self, j: int) -> list[np.ndarray]:
        return basis_projectors(self.bases[j])

    def max_overlap_error(self) -> float:
        d = self.dim
        err = 0.0
        for j, b in enumerate(self.bases):
            err = max(err, float(np.max(np.abs(b.conj().T @ b - np.eye(d)))))
            for c in self.bases[j + 1 :]:
                err = max(err, float(np.max(np.abs(np.abs(b.conj().T @ c) ** 2 - 1 / d))))
        return err


@dataclass(frozen=True)
class MubStatistics:
    dim: int
    table: np.ndarray  # (d+1, d); row j is the outcome distribution in basis j

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.shape != (self.dim + 1, self.dim):
            raise OperatorError(f"statistics table must be {(self.dim + 1, self.dim)}, got {t.shape}")
        for row in t:
            prob_vector(row)
        object.__setattr__(self, "table", t)


def mub_bases(d: int) -> MubSet:
    """Computational basis plus the Fourier-type bases.

    For d = 2 these are the z, x and y eigenbases. For d = 3 basis b + 1
    (b = 0, 1, 2) has vectors v_m[k] = omega**(b k**2 + m k) / sqrt(3) with
    omega the primitive cube root of unity.
    """
    if d == 2:
        s = 1 / np.sqrt(2)
        z = np.eye(2, dtype=complex)
        x = np.array([[s, s], [s, -s]], dtype=complex)
        y = np.array([[s, s], [1j * s, -1j * s]], dtype=complex)
        return MubSet(2, (z, x, y))
    if d == 3:
        w = np.exp(2j * np.pi / 3)
        k = np.arange(3)
        bases = [np.eye(3, dtype=complex)]
        for b in range(3):
            cols = [w ** (b * k**2 + m * k) / np.sqrt(3) for m in range(3)]
            bases.append(np.stack(cols, axis=1))
        return MubSet(3, tuple(bases))
    raise OperatorError(f"MUB construction only provided for d in {SUPPORTED_DIMS}, not {d}")


def bz_measure(p, normalization: float = 1.0) -> float:
    """Brukner-Zeilinger information N * sum_i (p_i - 1/n)**2."""
    p = prob_vector(p)
    return float(normalization * np.sum((p - 1 / p.size) ** 2))


def itot(rho) -> float:
    """Tr(rho - 1/d)**2, the squared HS distance from the maximally mixed state."""
    rho = check_density(rho)
    a = rho - np.eye(rho.shape[0]) / rho.shape[0]
    return float(np.sum(np.abs(a) ** 2))


def mub_statistics(rho, m: MubSet) -> MubStatistics:
    rho = check_density(rho)
    if rho.shape[0] != m.dim:
        raise OperatorError(f"state of dim {rho.shape[0]} vs MUB set of dim {m.dim}")
    rows = [measurement_distribution(rho, m.projectors(j)) for j in range(len(m.bases))]
    return MubStatistics(m.dim, np.array(rows))


def bz_sum(s: MubStatistics, normalization: float = 1.0) -> float:
    return float(sum(bz_measure(row, normalization) for row in s.table))


def shannon_sum(s: MubStatistics) -> float:
    """The Shannon analogue of the BZ sum; not unitarily invariant."""
    return float(sum(shannon_entropy(row) for row in s.table))


def reconstruct_from_mub(s: MubStatistics, m: MubSet, tol: float = 1e-9) -> np.ndarray:
    """rho = 1/d + sum_j sum_i (p_i^j - 1/d) P_i^j.

    Statistics that do not come from a state surface as an error; the result
    is never projected back onto the state space.
    """
    if s.dim != m.dim:
        raise OperatorError("statistics and MUB set dimensions differ")
    d = m.dim
    rho = np.eye(d, dtype=complex) / d
    for j in range(len(m.bases)):
        for p, proj in zip(s.table[j], m.projectors(j)):
            rho = rho + (p - 1 / d) * proj
    lam = min_eigenvalue(rho)
    if lam < -tol:
        raise OperatorError(f"statistics are inconsistent with any state (min eigenvalue {lam:.3g})")
    return rho
