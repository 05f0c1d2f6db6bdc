"""Heisenberg-picture simulation of qubit networks via per-qubit operator descriptors.

Each qubit ``i`` carries a triple ``(q_x, q_y, q_z)`` of 2**n x 2**n
operators. At time zero ``q_{i,m}`` is ``sigma_m`` on factor ``i`` and the
identity elsewhere. A gate G on qubits T updates only the descriptors of T:
the Pauli expansion of ``G^dag sigma_{i,m} G`` is evaluated with every
``sigma_{j,k}`` replaced by the current ``q_{j,k}(t)``, which equals
``U(t)^dag G^dag sigma_{i,m} G U(t)``. The state is never evolved; it is
fixed once and paired with the descriptors on readout.
"""

from __future__ import annotations

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .operators import (
    PAULIS,
    OperatorError,
    as_matrix,
    check_density,
    embed_operator,
    from_pauli_coefficients,
    hs_norm,
    pauli_expand_complex,
    pauli_string,
)

log = logging.getLogger(__name__)

ALL_ZERO = "all-zero"
DEFAULT_MAX_QUBITS = 8

ONE_QUBIT = {"H", "X", "Y", "Z", "RX", "RY", "RZ"}
TWO_QUBIT = {"CNOT", "CZ"}
GATE_KINDS = ONE_QUBIT | TWO_QUBIT | {"U"}
ROTATIONS = {"RX", "RY", "RZ"}

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)
_CZ = np.diag([1, 1, 1, -1]).astype(complex)


def rotation(axis: int, theta: float) -> np.ndarray:
    """exp(-i theta sigma_axis / 2); this fixes the phase lift of every rotation gate."""
    return math.cos(theta / 2) * PAULIS[0] - 1j * math.sin(theta / 2) * PAULIS[axis]


@dataclass(frozen=True)
class Gate:
    """A gate acting on 1-based qubit indices.

    ``kind`` is one of H, X, Y, Z, RX, RY, RZ, CNOT, CZ or U (custom unitary,
    supplied as ``matrix``). For CNOT the targets are ``(control, target)``.
    """

    kind: str
    targets: tuple[int, ...]
    theta: float | None = None
    matrix: np.ndarray | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        kind = self.kind.upper()
        object.__setattr__(self, "kind", kind)
        object.__setattr__(self, "targets", tuple(int(t) for t in self.targets))
        if kind not in GATE_KINDS:
            raise OperatorError(f"unknown gate kind {self.kind!r}")
        if len(set(self.targets)) != len(self.targets) or not self.targets:
            raise OperatorError(f"gate targets must be distinct and non-empty: {self.targets}")
        want = 1 if kind in ONE_QUBIT else 2 if kind in TWO_QUBIT else None
        if want is not None and len(self.targets) != want:
            raise OperatorError(f"{kind} takes {want} target(s), got {len(self.targets)}")
        if kind in ROTATIONS and self.theta is None:
            raise OperatorError(f"{kind} requires an angle theta")
        if kind == "U":
            if self.matrix is None:
                raise OperatorError("custom gate requires a matrix")
            m = as_matrix(self.matrix)
            if m.shape[0] != 1 << len(self.targets):
                raise OperatorError("custom gate matrix does not match its target count")
            if np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))) > 1e-10:
                raise OperatorError("custom gate matrix is not unitary")
            object.__setattr__(self, "matrix", m)

    def local_matrix(self) -> np.ndarray:
        k = self.kind
        if k == "H":
            return _H
        if k in ("X", "Y", "Z"):
            return PAULIS["XYZ".index(k) + 1]
        if k in ROTATIONS:
            return rotation("XYZ".index(k[1]) + 1, float(self.theta))
        if k == "CNOT":
            return _CNOT
        if k == "CZ":
            return _CZ
        return self.matrix

    def unitary(self, n: int) -> np.ndarray:
        """Embedding of the gate into the full 2**n space."""
        return embed_operator(self.local_matrix(), self.targets, n)

    def check(self, n: int) -> None:
        if any(not 1 <= t <= n for t in self.targets):
            raise OperatorError(f"gate {self.kind} targets {self.targets} out of range for {n} qubits")


def H(q):
    return Gate("H", (q,))


def X(q):
    return Gate("X", (q,))


def Y(q):
    return Gate("Y", (q,))


def Z(q):
    return Gate("Z", (q,))


def RX(q, theta):
    return Gate("RX", (q,), theta)


def RY(q, theta):
    return Gate("RY", (q,), theta)


def RZ(q, theta):
    return Gate("RZ", (q,), theta)


def CNOT(c, t):
    return Gate("CNOT", (c, t))


def CZ(a, b):
    return Gate("CZ", (a, b))


@dataclass(frozen=True)
class Descriptor:
    qubit_index: int
    components: tuple[np.ndarray, np.ndarray, np.ndarray]

    @property
    def x(self):
        return self.components[0]

    @property
    def y(self):
        return self.components[1]

    @property
    def z(self):
        return self.components[2]

    def operator(self, m: int) -> np.ndarray:
        """q_{i,m}; index 0 gives the identity."""
        if m == 0:
            return np.eye(self.components[0].shape[0], dtype=complex)
        return self.components[m - 1]

    def algebra_residual(self) -> float:
        """Largest deviation from the Pauli relations q_x q_y = i q_z (cyclic) and q_m^2 = 1."""
        qx, qy, qz = self.components
        eye = np.eye(qx.shape[0])
        res = [
            qx @ qy - 1j * qz,
            qy @ qz - 1j * qx,
            qz @ qx - 1j * qy,
            qx @ qx - eye,
            qy @ qy - eye,
            qz @ qz - eye,
        ]
        return max(float(np.max(np.abs(r))) for r in res)


@dataclass(frozen=True)
class QubitNetwork:
    n: int
    descriptors: tuple[Descriptor, ...]
    history: tuple[Gate, ...] = ()

    @property
    def dim(self) -> int:
        return 1 << self.n

    def descriptor(self, i: int) -> Descriptor:
        return self.descriptors[i - 1]

    def operator(self, i: int, m: int) -> np.ndarray:
        return self.descriptors[i - 1].operator(m)

    def apply(self, gates: Gate | Iterable[Gate]) -> "QubitNetwork":
        gates = [gates] if isinstance(gates, Gate) else gates
        net = self
        for g in gates:
            net = apply_gate(net, g)
        return net


def init_network(n: int, max_qubits: int = DEFAULT_MAX_QUBITS) -> QubitNetwork:
    if not 1 <= n <= max_qubits:
        raise OperatorError(f"qubit count {n} outside [1, {max_qubits}]")
    if n > DEFAULT_MAX_QUBITS:
        log.warning("descriptor storage for %d qubits: %d complex entries", n, 3 * n * 4**n)
    descs = []
    for i in range(1, n + 1):
        comps = []
        for m in (1, 2, 3):
            s = [0] * n
            s[i - 1] = m
            comps.append(pauli_string(s, normalized=False))
        descs.append(Descriptor(i, tuple(comps)))
    return QubitNetwork(n, tuple(descs))


def heisenberg_gate(net: QubitNetwork, g: Gate) -> np.ndarray:
    """The gate written in terms of the current descriptors of its targets (= U^dag G U)."""
    coeffs = pauli_expand_complex(g.local_matrix())
    dim = net.dim
    out = np.zeros((dim, dim), dtype=complex)
    for s in itertools.product(range(4), repeat=len(g.targets)):
        c = coeffs[s]
        if abs(c) < 1e-15:
            continue
        term = np.eye(dim, dtype=complex)
        for q, m in zip(g.targets, s):
            if m:
                term = term @ net.operator(q, m)
        out += c * term
    return out


def update_rule(g: Gate) -> dict[tuple[int, int], np.ndarray]:
    """Real Pauli coefficients of G^dag sigma_{pos,m} G on the gate's own qubits.

    Keyed by (target position, component m); each value has shape (4,)*k.
    """
    u = g.local_matrix()
    k = len(g.targets)
    rule = {}
    for pos in range(k):
        for m in (1, 2, 3):
            s = [0] * k
            s[pos] = m
            rule[pos, m] = pauli_expand_complex(u.conj().T @ pauli_string(s, normalized=False) @ u).real
    return rule


def _product(net: QubitNetwork, targets: Sequence[int], idx: Sequence[int]) -> np.ndarray | None:
    term = None
    for q, m in zip(targets, idx):
        if m:
            op = net.operator(q, m)
            term = op if term is None else term @ op
    return term


def apply_gate(net: QubitNetwork, g: Gate) -> QubitNetwork:
    """Evolve one time step: q_{i,m} -> U(t)^dag G^dag sigma_{i,m} G U(t).

    Only the target qubits' descriptors change. Each new component is the
    real Pauli polynomial of G^dag sigma G evaluated on the current
    descriptors of the targets, which keeps rounding error from compounding
    the way conjugating by a reassembled gate operator does.
    """
    g.check(net.n)
    rule = update_rule(g)
    k = len(g.targets)
    dim = net.dim
    eye = np.eye(dim, dtype=complex)
    descs = list(net.descriptors)
    for pos, q in enumerate(g.targets):
        comps = []
        for m in (1, 2, 3):
            coeffs = rule[pos, m]
            out = np.zeros((dim, dim), dtype=complex)
            for idx in itertools.product(range(4), repeat=k):
                c = coeffs[idx]
                if abs(c) < 1e-14:
                    continue
                term = _product(net, g.targets, idx)
                out += c * (eye if term is None else term)
            comps.append(out)
        descs[q - 1] = Descriptor(q, tuple(comps))
    return QubitNetwork(net.n, tuple(descs), net.history + (g,))


def run_circuit(n: int, circuit: Sequence[Gate], max_qubits: int = DEFAULT_MAX_QUBITS) -> QubitNetwork:
    return init_network(n, max_qubits).apply(circuit)


def initial_density(init, n: int) -> np.ndarray:
    dim = 1 << n
    if init is None or (isinstance(init, str) and init == ALL_ZERO):
        rho = np.zeros((dim, dim), dtype=complex)
        rho[0, 0] = 1.0
        return rho
    if isinstance(init, str):
        raise OperatorError(f"unknown symbolic initial state {init!r}")
    rho = check_density(init)
    if rho.shape[0] != dim:
        raise OperatorError(f"initial state has dim {rho.shape[0]}, network needs {dim}")
    return rho


def _low_rank_factor(rho: np.ndarray) -> np.ndarray:
    # rho = L L^dag, dropping numerically null directions
    w, v = np.linalg.eigh(rho)
    keep = w > 1e-15
    return v[:, keep] * np.sqrt(w[keep])


_BATCH_LIMIT = 1 << 22


def _string_expectations(ops: list[np.ndarray], factor: np.ndarray, bra: np.ndarray | None = None) -> np.ndarray:
    """Tr(rho * prod_k ops[k][m_k]) for every index tuple m, rho = factor factor^dag.

    ``ops[k]`` is a (4, D, D) stack for the k-th participating qubit. The
    descriptors of distinct qubits commute, so product order is immaterial.
    Returns a real array of shape (4,)*len(ops).
    """
    bra = factor if bra is None else bra
    k = len(ops)
    d, r = factor.shape
    if k == 0:
        return np.array(np.sum(bra.conj() * factor).real)
    if 4**k * d * r > _BATCH_LIMIT and k > 1:
        head, tail = ops[0], ops[1:]
        return np.stack([_string_expectations(tail, head[m] @ factor, bra) for m in range(4)])
    y = factor[None]
    for stack in ops:
        y = np.einsum("mij,bjr->bmir", stack, y).reshape(-1, d, r)
    vals = np.einsum("ir,bir->b", bra.conj(), y)
    return vals.real.reshape((4,) * k)


def _descriptor_stack(net: QubitNetwork, i: int) -> np.ndarray:
    d = net.descriptor(i)
    return np.stack([np.eye(net.dim, dtype=complex), *d.components])




def reconstruct_density(net: QubitNetwork, init=ALL_ZERO) -> np.ndarray:
    """rho(t) = 2**-n sum_m <prod_k q_{k,m_k}(t)>_rho prod_k q_{k,m_k}(0)."""
    rho0 = initial_density(init, net.n)
    ex = _string_expectations([_descriptor_stack(net, i) for i in range(1, net.n + 1)], _low_rank_factor(rho0))
    return from_pauli_coefficients(ex) / net.dim


def reduced_density(net: QubitNetwork, init=ALL_ZERO, subset: Sequence[int] = (1,)) -> np.ndarray:
    """Reduced state of the qubits in ``subset``, as an operator on them in ascending index order."""
    subset = list(subset)
    if not subset or len(set(subset)) != len(subset) or any(not 1 <= i <= net.n for i in subset):
        raise OperatorError(f"invalid subset {subset} for {net.n} qubits")
    subset = sorted(subset)
    rho0 = initial_density(init, net.n)
    ex = _string_expectations([_descriptor_stack(net, i) for i in subset], _low_rank_factor(rho0))
    return from_pauli_coefficients(ex) / 2 ** len(subset)


def expectation(net: QubitNetwork, init, string: dict[int, int]) -> float:
    """<prod_i q_{i,m_i}(t)>_rho for a sparse assignment {qubit: pauli index}."""
    rho0 = initial_density(init, net.n)
    op = np.eye(net.dim, dtype=complex)
    for i, m in string.items():
        op = op @ net.operator(i, m)
    return float(np.trace(rho0 @ op).real)


def schrodinger_reference(circuit: Sequence[Gate], init=ALL_ZERO, n: int | None = None) -> np.ndarray:
    """Independent oracle: evolve the state forward, rho <- U rho U^dag, gate by gate."""
    if n is None:
        if isinstance(init, str) or init is None:
            if not circuit:
                raise OperatorError("qubit count required for an empty circuit with symbolic init")
            n = max(max(g.targets) for g in circuit)
        else:
            n = (np.asarray(init).shape[0]).bit_length() - 1
    rho = initial_density(init, n)
    for g in circuit:
        g.check(n)
        u = g.unitary(n)
        rho = u @ rho @ u.conj().T
    return rho


def descriptor_distance(a: Descriptor, b: Descriptor) -> float:
    if a.components[0].shape != b.components[0].shape:
        raise OperatorError("descriptor dimensions differ")
    return max(hs_norm(x - y) for x, y in zip(a.components, b.components))


def network_unitary(circuit: Sequence[Gate], n: int) -> np.ndarray:
    u = np.eye(1 << n, dtype=complex)
    for g in circuit:
        u = g.unitary(n) @ u
    return u


def random_circuit(n: int, depth: int, seed=None) -> list[Gate]:
    """Random gate list over the full gate set (custom unitaries included)."""
    from .operators import random_unitary

    rng = np.random.default_rng(seed)
    kinds = ["H", "X", "Y", "Z", "RX", "RY", "RZ"] + (["CNOT", "CZ", "U2"] if n > 1 else []) + ["U1"]
    out = []
    for _ in range(depth):
        k = kinds[rng.integers(len(kinds))]
        if k in ("CNOT", "CZ", "U2"):
            a, b = rng.choice(n, size=2, replace=False) + 1
            if k == "U2":
                out.append(Gate("U", (a, b), matrix=random_unitary(4, rng)))
            else:
                out.append(Gate(k, (a, b)))
        else:
            q = int(rng.integers(n)) + 1
            if k == "U1":
                out.append(Gate("U", (q,), matrix=random_unitary(2, rng)))
            elif k in ROTATIONS:
                out.append(Gate(k, (q,), float(rng.uniform(-np.pi, np.pi))))
            else:
                out.append(Gate(k, (q,)))
    return out
