"""Separability criteria and Bloch-vector geometry for bipartite states.

Two-qubit states are handled in the form

    rho = 1/4 (1 + a.sigma x 1 + 1 x b.sigma + sum_ij c_ij sigma_i x sigma_j)

where a, b are the local Bloch vectors and C = (c_ij) the correlation matrix.
Every criterion returns a :class:`Verdict`; a criterion that is only
necessary for separability never reports ``SEPARABLE``.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field

import numpy as np

from .measures import majorizes, spectrum
from .operators import (
    PAULIS,
    POSITIVITY_TOL,
    SY,
    OperatorError,
    as_matrix,
    check_density,
    min_eigenvalue,
    pauli_expand_complex,
    partial_trace,
    random_density_matrix,
    random_pure_state,
    random_unitary,
)

CONCLUSIVE_PPT_DIMS = {(2, 2), (2, 3), (3, 2)}

# c-vectors of the Bell projectors phi+, phi-, psi+, psi-
BELL_C = {
    "phi+": np.array([1.0, -1.0, 1.0]),
    "phi-": np.array([-1.0, 1.0, 1.0]),
    "psi+": np.array([1.0, 1.0, -1.0]),
    "psi-": np.array([-1.0, -1.0, -1.0]),
}

_S2 = 1 / np.sqrt(2)
BELL_KETS = {
    "phi+": np.array([_S2, 0, 0, _S2], dtype=complex),
    "phi-": np.array([_S2, 0, 0, -_S2], dtype=complex),
    "psi+": np.array([0, _S2, _S2, 0], dtype=complex),
    "psi-": np.array([0, _S2, -_S2, 0], dtype=complex),
}


class Status(str, enum.Enum):
    SEPARABLE = "Separable"
    ENTANGLED = "Entangled"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Verdict:
    status: Status
    criterion: str
    witness_value: float | None = None

    @property
    def entangled(self) -> bool:
        return self.status is Status.ENTANGLED

    @property
    def separable(self) -> bool:
        return self.status is Status.SEPARABLE


def _dims(rho: np.ndarray, dims) -> tuple[int, int]:
    d1, d2 = (int(x) for x in dims)
    if d1 < 1 or d2 < 1 or d1 * d2 != rho.shape[0]:
        raise OperatorError(f"dims {dims} do not factor a matrix of dim {rho.shape[0]}")
    return d1, d2


@dataclass(frozen=True)
class TwoQubitForm:
    a: np.ndarray
    b: np.ndarray
    C: np.ndarray

    @property
    def a2(self) -> float:
        return float(self.a @ self.a)

    @property
    def b2(self) -> float:
        return float(self.b @ self.b)

    @property
    def sum_c2(self) -> float:
        return float(np.sum(self.C**2))


def two_qubit_form(rho) -> TwoQubitForm:
    rho = check_density(rho)
    if rho.shape != (4, 4):
        raise OperatorError("two_qubit_form needs a 4x4 state")
    t = 4 * pauli_expand_complex(rho).real  # t[i, j] = Tr(rho sigma_i x sigma_j)
    return TwoQubitForm(a=t[1:, 0].copy(), b=t[0, 1:].copy(), C=t[1:, 1:].copy())


def form_operator(f: TwoQubitForm) -> np.ndarray:
    """The operator described by (a, b, C); positivity not checked."""
    t = np.zeros((4, 4))
    t[0, 0] = 1.0
    t[1:, 0] = f.a
    t[0, 1:] = f.b
    t[1:, 1:] = f.C
    return np.einsum("ij,iab,jcd->acbd", t, PAULIS, PAULIS).reshape(4, 4) / 4


def from_two_qubit_form(f: TwoQubitForm, tol: float = POSITIVITY_TOL) -> np.ndarray:
    rho = form_operator(f)
    lam = min_eigenvalue(rho)
    if lam < -tol:
        raise OperatorError(f"(a, b, C) is not a state: min eigenvalue {lam:.3g}")
    return rho


def partial_transpose(rho, subsystem: int = 2, dims=(2, 2)) -> np.ndarray:
    rho = as_matrix(rho)
    d1, d2 = _dims(rho, dims)
    t = rho.reshape(d1, d2, d1, d2)
    if subsystem == 1:
        t = t.transpose(2, 1, 0, 3)
    elif subsystem == 2:
        t = t.transpose(0, 3, 2, 1)
    else:
        raise OperatorError("subsystem must be 1 or 2")
    return t.reshape(d1 * d2, d1 * d2)


def reduced_states(rho, dims=(2, 2)) -> tuple[np.ndarray, np.ndarray]:
    rho = as_matrix(rho)
    d1, d2 = _dims(rho, dims)
    return partial_trace(rho, [0], [d1, d2]), partial_trace(rho, [1], [d1, d2])


def ppt_verdict(rho, dims=(2, 2), tol: float = POSITIVITY_TOL) -> Verdict:
    """Peres-Horodecki test; conclusive in both directions for 2x2 and 2x3."""
    rho = check_density(rho)
    d = _dims(rho, dims)
    lam = min_eigenvalue(partial_transpose(rho, 2, d))
    if lam < -tol:
        return Verdict(Status.ENTANGLED, "ppt", lam)
    status = Status.SEPARABLE if d in CONCLUSIVE_PPT_DIMS else Status.UNDETERMINED
    return Verdict(status, "ppt", lam)


def reduction_verdict(rho, dims=(2, 2), tol: float = POSITIVITY_TOL) -> Verdict:
    """Reduction criterion: rho_1 x 1 - rho >= 0 and 1 x rho_2 - rho >= 0."""
    rho = check_density(rho)
    d1, d2 = _dims(rho, dims)
    if (d1, d2) not in CONCLUSIVE_PPT_DIMS:
        raise OperatorError(f"reduction criterion only decides 2x2 and 2x3 systems, not {d1}x{d2}")
    r1, r2 = reduced_states(rho, (d1, d2))
    lam = min(
        min_eigenvalue(np.kron(r1, np.eye(d2)) - rho),
        min_eigenvalue(np.kron(np.eye(d1), r2) - rho),
    )
    status = Status.ENTANGLED if lam < -tol else Status.SEPARABLE
    return Verdict(status, "reduction", lam)


@dataclass(frozen=True)
class SchmidtDecomposition:
    coefficients: np.ndarray  # descending sqrt(p_i)
    left: np.ndarray  # columns are the first-factor basis vectors
    right: np.ndarray  # columns are the second-factor basis vectors

    @property
    def probabilities(self) -> np.ndarray:
        return self.coefficients**2

    def rank(self, tol: float = POSITIVITY_TOL) -> int:
        return int(np.sum(self.coefficients > tol))

    def state(self) -> np.ndarray:
        return sum(
            c * np.kron(self.left[:, k], self.right[:, k]) for k, c in enumerate(self.coefficients)
        )


def schmidt_decompose(psi, dims=(2, 2)) -> SchmidtDecomposition:
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise OperatorError("Schmidt decomposition needs a unit vector")
    d1, d2 = (int(x) for x in dims)
    if d1 * d2 != psi.size:
        raise OperatorError(f"dims {dims} do not match vector of length {psi.size}")
    u, s, vh = np.linalg.svd(psi.reshape(d1, d2))
    return SchmidtDecomposition(coefficients=s, left=u[:, : s.size], right=vh[: s.size].T)


def majorization_verdict(rho, dims=(2, 2), tol: float = POSITIVITY_TOL) -> Verdict:
    """Entangled when the global spectrum is not majorized by both local spectra.

    witness_value is the smallest partial-sum margin over the two local
    comparisons (negative on violation).
    """
    rho = check_density(rho)
    d = _dims(rho, dims)
    glob = spectrum(rho)
    margin = np.inf
    ok = True
    for r in reduced_states(rho, d):
        loc = spectrum(r)
        n = max(loc.size, glob.size)
        gap = np.cumsum(np.pad(loc, (0, n - loc.size))) - np.cumsum(np.pad(glob, (0, n - glob.size)))
        margin = min(margin, float(gap.min()))
        ok = ok and majorizes(loc, glob, tol)
    return Verdict(Status.UNDETERMINED if ok else Status.ENTANGLED, "majorization", margin)


@dataclass(frozen=True)
class GeometricReport:
    sum_c2: float
    a2: float
    b2: float
    thresholds: dict = field(default_factory=dict)
    verdict: Verdict | None = None


def geometric_report(f: TwoQubitForm, tol: float = POSITIVITY_TOL) -> GeometricReport:
    """Correlation-length tests: separable states have sum c_ij^2 <= 1 and <= 1 - |a^2 - b^2|."""
    s, a2, b2 = f.sum_c2, f.a2, f.b2
    inner = 1 - abs(a2 - b2)
    thresholds = {"correlation_sphere": 1.0, "inner_sphere": inner, "outer_sphere": 1 + abs(a2 - b2)}
    if s > 1 + tol:
        v = Verdict(Status.ENTANGLED, "geometric:correlation_sphere", s - 1)
    elif s > inner + tol:
        v = Verdict(Status.ENTANGLED, "geometric:inner_sphere", s - inner)
    else:
        v = Verdict(Status.UNDETERMINED, "geometric", s - inner)
    return GeometricReport(s, a2, b2, thresholds, v)


def _proper_svd(c: np.ndarray):
    u, s, vt = np.linalg.svd(c)
    v = vt.T
    s = s.astype(float).copy()
    if np.linalg.det(u) < 0:
        u[:, 2] *= -1
        s[2] *= -1
    if np.linalg.det(v) < 0:
        v[:, 2] *= -1
        s[2] *= -1
    return u, s, v


@dataclass(frozen=True)
class DiagonalizedForm:
    R1: np.ndarray
    R2: np.ndarray
    c: np.ndarray
    form: TwoQubitForm


def diagonalize_correlation(f: TwoQubitForm) -> DiagonalizedForm:
    """Proper rotations with R1 C R2^T = diag(c); signs pushed into the last entry."""
    u, s, v = _proper_svd(np.asarray(f.C, dtype=float))
    r1, r2 = u.T, v.T
    diag = TwoQubitForm(a=r1 @ f.a, b=r2 @ f.b, C=np.diag(s))
    return DiagonalizedForm(R1=r1, R2=r2, c=s, form=diag)


def su2_from_rotation(r: np.ndarray) -> np.ndarray:
    """A unitary U with U (n.sigma) U^dag = (R n).sigma for a proper rotation R."""
    r = np.asarray(r, dtype=float)
    w = np.sqrt(max(1 + np.trace(r), 0.0)) / 2
    if w > 1e-8:
        x = (r[2, 1] - r[1, 2]) / (4 * w)
        y = (r[0, 2] - r[2, 0]) / (4 * w)
        z = (r[1, 0] - r[0, 1]) / (4 * w)
    else:
        # rotation by pi: axis from the symmetric part
        k = int(np.argmax(np.diag(r)))
        axis = np.zeros(3)
        axis[k] = np.sqrt(max((r[k, k] + 1) / 2, 0.0))
        for j in range(3):
            if j != k:
                axis[j] = r[k, j] / (2 * axis[k])
        w, (x, y, z) = 0.0, axis
    return w * PAULIS[0] - 1j * (x * PAULIS[1] + y * PAULIS[2] + z * PAULIS[3])


@dataclass(frozen=True)
class TetraMembership:
    in_tetrahedron: bool
    in_octohedron: bool


def tetra_membership(c, tol: float = POSITIVITY_TOL) -> TetraMembership:
    c = np.asarray(c, dtype=float)
    reflected = c * np.array([1.0, -1.0, 1.0])

    def inside(v):
        return all(1 + cb @ v >= -tol for cb in BELL_C.values())

    in_t = inside(c)
    return TetraMembership(in_t, in_t and inside(reflected))


def bell_diagonal_state(c) -> np.ndarray:
    c = np.asarray(c, dtype=float)
    return form_operator(TwoQubitForm(np.zeros(3), np.zeros(3), np.diag(c)))


def is_bell_diagonal(f: TwoQubitForm, tol: float = 1e-10) -> bool:
    off = f.C - np.diag(np.diag(f.C))
    return bool(max(np.abs(f.a).max(), np.abs(f.b).max(), np.abs(off).max()) <= tol)


@dataclass(frozen=True)
class WitnessReport:
    witness: np.ndarray
    violating_state: np.ndarray
    expectation: float
    predicted: float
    min_separable_expectation: float
    separable_check: str = "sampled"


def witness_from_pt(rho, samples: int = 1000, seed: int = 0, tol: float = POSITIVITY_TOL) -> WitnessReport | None:
    """Partial transpose as a witness for rho rotated by pi about y on qubit 2.

    Returned only when (b^2 - a^2) + sum c^2 > 1. The separable side is
    checked on ``samples`` random product states, not proven.
    """
    rho = check_density(rho)
    f = two_qubit_form(rho)
    if (f.b2 - f.a2) + f.sum_c2 <= 1 + tol:
        return None
    w = partial_transpose(rho, 2, (2, 2))
    rot = np.kron(PAULIS[0], SY)
    v = rot @ rho @ rot.conj().T
    expectation = float(np.trace(w @ v).real)
    predicted = (1 + f.a2 - f.b2 - f.sum_c2) / 4
    rng = np.random.default_rng(seed)
    worst = np.inf
    for _ in range(samples):
        sigma = np.kron(random_density_matrix(2, 1, rng), random_density_matrix(2, 1, rng))
        worst = min(worst, float(np.trace(w @ sigma).real))
    return WitnessReport(w, v, expectation, predicted, worst)


CUTS = {1: "1|23", 2: "2|13", 3: "3|12"}


@dataclass(frozen=True)
class TripartiteClass:
    kind: str  # "GenuineTripartite", "Bipartite" or "Product"
    pair: tuple[int, int] | None
    violated_cuts: tuple[str, ...]
    pair_verdicts: dict
    ghz_w_hint: str | None  # advisory only


def correlation_tensor(rho) -> np.ndarray:
    """T[m1, .., mn] = Tr(rho sigma_m1 x .. x sigma_mn)."""
    rho = as_matrix(rho)
    return (rho.shape[0] * pauli_expand_complex(rho)).real


def tripartite_classify(psi, tol: float = POSITIVITY_TOL) -> TripartiteClass:
    """Classify a pure three-qubit state by which correlator factorisations fail.

    For each single-qubit cut k|rest the test is whether
    <s_1 s_2 s_3> = <s_k><s_rest> for every choice of Pauli or identity
    factors. Failure across all three cuts means genuine tripartite
    entanglement; failure across two identifies the entangled pair as the
    complement of the factorising qubit.
    """
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    if psi.size != 8 or abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise OperatorError("tripartite_classify needs a unit vector of length 8")
    rho = np.outer(psi, psi.conj())
    t = correlation_tensor(rho)
    factorised = {
        1: np.einsum("i,jk->ijk", t[:, 0, 0], t[0]),
        2: np.einsum("j,ik->ijk", t[0, :, 0], t[:, 0, :]),
        3: np.einsum("ij,k->ijk", t[:, :, 0], t[0, 0, :]),
    }
    violated = [k for k in (1, 2, 3) if np.max(np.abs(t - factorised[k])) > tol]

    pair_verdicts = {}
    for pair in itertools.combinations((1, 2, 3), 2):
        r = partial_trace(rho, [p - 1 for p in pair], [2, 2, 2])
        pair_verdicts[pair] = ppt_verdict(r).status

    hint = None
    if len(violated) == 3:
        kind, pair = "GenuineTripartite", None
        statuses = set(pair_verdicts.values())
        if statuses == {Status.SEPARABLE}:
            hint = "GHZ-like"
        elif statuses == {Status.ENTANGLED}:
            hint = "W-like"
    elif len(violated) == 2:
        (single,) = {1, 2, 3} - set(violated)
        kind, pair = "Bipartite", tuple(sorted({1, 2, 3} - {single}))
    elif not violated:
        kind, pair = "Product", None
    else:
        raise OperatorError("inconsistent factorisation pattern; is the state pure?")
    return TripartiteClass(kind, pair, tuple(CUTS[k] for k in violated), pair_verdicts, hint)


def random_product_state(seed=None, dims=(2, 2), pure: bool = True) -> np.ndarray:
    rng = np.random.default_rng(seed)
    rank = (lambda d: 1) if pure else (lambda d: int(rng.integers(1, d + 1)))
    return np.kron(*(random_density_matrix(d, rank(d), rng) for d in dims))


def random_separable_state(seed=None, dims=(2, 2), terms: int | None = None) -> np.ndarray:
    """Convex mixture of random product states with Dirichlet weights."""
    rng = np.random.default_rng(seed)
    k = int(rng.integers(1, 6)) if terms is None else terms
    w = rng.dirichlet(np.ones(k))
    return sum(wi * random_product_state(rng, dims, pure=bool(rng.integers(2))) for wi in w)


def random_tetrahedron_point(seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    w = rng.dirichlet(np.ones(4))
    return sum(wi * c for wi, c in zip(w, BELL_C.values()))


def werner_state(p: float) -> np.ndarray:
    psi = BELL_KETS["psi-"]
    return p * np.outer(psi, psi.conj()) + (1 - p) * np.eye(4) / 4


def local_unitary(u1, u2) -> np.ndarray:
    return np.kron(u1, u2)


def random_local_unitary(seed=None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return np.kron(random_unitary(2, rng), random_unitary(2, rng))


def random_pure_two_qubit(seed=None, product: bool = False) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if product:
        return np.kron(random_pure_state(2, rng), random_pure_state(2, rng))
    return random_pure_state(4, rng)



def ppt_flip_point(family, lo: float, hi: float, xtol: float = 1e-9, tol: float = POSITIVITY_TOL) -> float:
    """Bisect for the parameter where ``family(p)`` stops being PPT.

    ``family(lo)`` must be PPT and ``family(hi)`` not.
    """
    if ppt_verdict(family(lo), tol=tol).entangled or not ppt_verdict(family(hi), tol=tol).entangled:
        raise OperatorError("bracket does not straddle the PPT boundary")
    while hi - lo > xtol:
        mid = 0.5 * (lo + hi)
        if ppt_verdict(family(mid), tol=tol).entangled:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)
