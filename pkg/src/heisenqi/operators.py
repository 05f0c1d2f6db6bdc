"""Dense operator algebra on qubit registers.

Matrices are plain ``numpy`` complex arrays. Qubit 1 is the leftmost
(most significant) tensor factor and ``|0>`` is spin-up along z.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-10
POSITIVITY_TOL = 1e-9

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = np.stack([I2, SX, SY, SZ])

PauliIndexString = tuple[int, ...]


class OperatorError(ValueError):
    """Raised when an operator violates a structural precondition."""


def as_matrix(a) -> np.ndarray:
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
        raise OperatorError(f"expected a non-empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise OperatorError("matrix has non-finite entries")
    return m


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(a)
    return bool(np.max(np.abs(m - m.conj().T)) <= tol)


def check_hermitian(a, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = as_matrix(a)
    err = np.max(np.abs(m - m.conj().T))
    if err > tol:
        raise OperatorError(f"operator is not Hermitian (max asymmetry {err:.3g})")
    return m


def check_density(rho, tol: float = POSITIVITY_TOL) -> np.ndarray:
    """Validate a density matrix and return it as a complex array.

    Checks Hermiticity, unit trace (1e-10), an eigenvalue floor of ``-tol``
    and purity at most one.
    """
    m = check_hermitian(rho, tol=max(HERMITIAN_TOL, 1e-10))
    tr = np.trace(m).real
    if abs(tr - 1.0) > TRACE_TOL:
        raise OperatorError(f"trace is {tr!r}, not 1")
    evals = np.linalg.eigvalsh(m)
    if evals[0] < -tol:
        raise OperatorError(f"matrix is not positive (min eigenvalue {evals[0]:.3g})")
    if float(np.sum(evals**2)) > 1 + TRACE_TOL:
        raise OperatorError("purity exceeds 1")
    return m


def num_qubits(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 1 << n != dim:
        raise OperatorError(f"dimension {dim} is not a power of two")
    return n


def tensor_product(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(factors: Sequence[np.ndarray]) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for f in factors:
        out = np.kron(out, f)
    return out


def hs_inner(a, b) -> float:
    """Hilbert-Schmidt inner product Tr(ab) of two Hermitian operators."""
    a, b = as_matrix(a), as_matrix(b)
    if a.shape != b.shape:
        raise OperatorError(f"dimension mismatch: {a.shape} vs {b.shape}")
    check_hermitian(a)
    check_hermitian(b)
    return float(np.sum(a.T * b).real)


def hs_norm(a) -> float:
    return float(np.linalg.norm(as_matrix(a)))


def pauli_string(s: Sequence[int], normalized: bool = True) -> np.ndarray:
    s = tuple(int(i) for i in s)
    if not s or any(i not in (0, 1, 2, 3) for i in s):
        raise OperatorError(f"invalid Pauli index string {s}")
    m = kron_all([PAULIS[i] for i in s])
    if normalized:
        m = m / np.sqrt(2.0 ** len(s))
    return m


def pauli_strings(n: int) -> list[PauliIndexString]:
    """All 4**n index strings in lexicographic (base-4, qubit 1 most significant) order."""
    return list(itertools.product(range(4), repeat=n))


def _coeff_tensor_to_matrix(c: np.ndarray, n: int) -> np.ndarray:
    # c has shape (4,)*n; contract one qubit axis at a time into (i_k, j_k) pairs
    t = c
    for _ in range(n):
        t = np.tensordot(t, PAULIS, axes=([0], [0]))
    # axes now (i1, j1, i2, j2, ...)
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    d = 1 << n
    return t.transpose(order).reshape(d, d)


def _matrix_to_coeff_tensor(a: np.ndarray, n: int) -> np.ndarray:
    # Tr(a Γ) = sum a[i, j] Γ[j, i]; Γ factorises, so contract factor by factor
    t = a.reshape((2,) * (2 * n))
    # interleave to (i1, j1, i2, j2, ...)
    order = list(itertools.chain.from_iterable((k, n + k) for k in range(n)))
    t = t.transpose(order)
    for _ in range(n):
        t = np.tensordot(t, PAULIS, axes=([0, 1], [2, 1]))
    return t


@dataclass(frozen=True)
class HSCoefficients:
    """Real coefficients of an operator in the normalized Pauli-string basis.

    ``coeffs`` is indexed by the base-4 integer whose digits are the Pauli
    indices, qubit 1 most significant.
    """

    n: int
    coeffs: np.ndarray

    def __getitem__(self, s: Sequence[int]) -> float:
        idx = 0
        for i in s:
            idx = 4 * idx + int(i)
        return float(self.coeffs[idx])

    def reconstruct(self) -> np.ndarray:
        return hs_reconstruct(self)


def hs_expand(a) -> HSCoefficients:
    m = check_hermitian(a, tol=1e-10)
    n = num_qubits(m.shape[0])
    t = _matrix_to_coeff_tensor(m, n) / np.sqrt(2.0**n)
    return HSCoefficients(n=n, coeffs=t.real.reshape(-1).copy())


def hs_reconstruct(c: HSCoefficients) -> np.ndarray:
    t = np.asarray(c.coeffs, dtype=complex).reshape((4,) * c.n)
    return _coeff_tensor_to_matrix(t, c.n) / np.sqrt(2.0**c.n)


def pauli_expand_complex(a) -> np.ndarray:
    """Complex coefficients g with a = sum_s g[s] * sigma_s (unnormalized strings).

    Works for any (non-Hermitian) operator on qubits; result has shape (4,)*n.
    """
    m = as_matrix(a)
    n = num_qubits(m.shape[0])
    return _matrix_to_coeff_tensor(m, n) / 2.0**n


def from_pauli_coefficients(c: np.ndarray) -> np.ndarray:
    """Inverse of :func:`pauli_expand_complex`; accepts shape (4,)*n."""
    c = np.asarray(c, dtype=complex)
    return _coeff_tensor_to_matrix(c, c.ndim)


def hermitian_eigensystem(a) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues in descending order with matching orthonormal eigenvector columns."""
    m = check_hermitian(a, tol=1e-10)
    w, v = np.linalg.eigh((m + m.conj().T) / 2)
    return w[::-1].copy(), v[:, ::-1].copy()


def eigvalsh_desc(a) -> np.ndarray:
    m = as_matrix(a)
    return np.linalg.eigvalsh((m + m.conj().T) / 2)[::-1]


def min_eigenvalue(a) -> float:
    m = as_matrix(a)
    return float(np.linalg.eigvalsh((m + m.conj().T) / 2)[0])


def is_positive(a, tol: float = POSITIVITY_TOL) -> bool:
    return min_eigenvalue(check_hermitian(a, tol=1e-10)) >= -tol


def embed_operator(local, targets: Sequence[int], n: int) -> np.ndarray:
    """Lift a k-qubit operator onto qubits ``targets`` (1-based) of an n-qubit register.

    ``targets[0]`` corresponds to the most significant factor of ``local``.
    """
    local = as_matrix(local)
    k = len(targets)
    if local.shape[0] != 1 << k:
        raise OperatorError(f"operator of dim {local.shape[0]} cannot act on {k} qubits")
    if len(set(targets)) != k or any(not 1 <= t <= n for t in targets):
        raise OperatorError(f"invalid targets {tuple(targets)} for {n} qubits")
    axes = [t - 1 for t in targets]
    rest = [q for q in range(n) if q not in axes]
    full = np.kron(local, np.eye(1 << (n - k), dtype=complex))
    # full acts on qubit order axes + rest; permute back to 0..n-1
    perm = axes + rest
    inv = np.argsort(perm)
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(list(inv) + [n + i for i in inv])
    d = 1 << n
    return t.reshape(d, d)


def partial_trace(rho, keep: Sequence[int], dims: Sequence[int]) -> np.ndarray:
    """Trace out every subsystem not listed in ``keep`` (0-based, order preserved)."""
    rho = as_matrix(rho)
    dims = list(dims)
    if int(np.prod(dims)) != rho.shape[0]:
        raise OperatorError(f"dims {dims} do not match matrix of dim {rho.shape[0]}")
    keep = sorted(keep)
    n = len(dims)
    t = rho.reshape(dims + dims)
    letters = "abcdefghijklmnopqrstuvwxyz"
    ins = list(letters[:n])
    outs = list(letters[n : 2 * n])
    for q in range(n):
        if q not in keep:
            outs[q] = ins[q]
    res = "".join(ins[q] for q in keep) + "".join(outs[q] for q in keep)
    t = np.einsum("".join(ins) + "".join(outs) + "->" + res, t)
    d = int(np.prod([dims[q] for q in keep])) if keep else 1
    return t.reshape(d, d)


def ket(bits: str) -> np.ndarray:
    """Computational basis ket from a bit string, e.g. ``ket("01")``."""
    v = np.zeros(1 << len(bits), dtype=complex)
    v[int(bits, 2)] = 1.0
    return v


def projector(psi) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    return np.outer(psi, psi.conj())


def random_unitary(dim: int, seed: int | np.random.Generator | None = None) -> np.ndarray:
    """Haar unitary from QR of a complex Ginibre matrix (numpy PCG64 when seeded by int)."""
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_density_matrix(dim: int, rank: int | None = None, seed=None) -> np.ndarray:
    """Trace-normalized G G^dagger with G a dim x rank complex Gaussian matrix."""
    rank = dim if rank is None else rank
    if not 1 <= rank <= dim:
        raise OperatorError(f"rank {rank} outside [1, {dim}]")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, rank)) + 1j * rng.standard_normal((dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.trace(rho).real


def random_pure_state(dim: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def random_hermitian(dim: int, seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2
