"""Dense quantum-state containers, Pauli algebra and distance primitives.

Conventions used throughout the package:
  * qubit 0 is the most significant bit of a computational basis index,
  * the logical block occupies qubits 0..k-1, ancillas sit at the end,
  * all matrices are dense row-major complex128 arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

HERMITICITY_TOL = 1e-10
TRACE_TOL = 1e-10
PSD_FLOOR = -1e-9


class QsimError(Exception):
    """Base class for all package errors."""


class InvalidStateError(QsimError):
    """A matrix or vector fails density-matrix / state validation."""


class DimensionError(QsimError):
    """Operands have incompatible dimensions or qubit counts."""


class PostselectionImpossibleError(QsimError):
    """The requested postselection branch has (numerically) zero weight."""


class CapacityError(QsimError):
    """The requested system size exceeds what this code path supports."""


PAULI_1Q = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
PAULI_LETTERS = "IXYZ"


def _as_matrix(rho) -> np.ndarray:
    """Accept a DensityMatrix or a bare ndarray and return the ndarray."""
    if isinstance(rho, DensityMatrix):
        return rho.mat
    return np.asarray(rho, dtype=complex)


def _n_qubits_of(mat: np.ndarray) -> int:
    dim = mat.shape[0]
    n = int(round(np.log2(dim)))
    if mat.ndim != 2 or mat.shape != (dim, dim) or 2**n != dim:
        raise DimensionError(f"matrix shape {mat.shape} is not 2^N x 2^N")
    return n


def validate_density_matrix(mat: np.ndarray) -> None:
    """Raise InvalidStateError unless mat is Hermitian, unit-trace and PSD.

    PSD is enforced only down to the floor -1e-9 to absorb accumulated
    floating-point error from gate and channel applications.
    """
    mat = np.asarray(mat)
    if not np.all(np.isfinite(mat.real)) or not np.all(np.isfinite(mat.imag)):
        raise InvalidStateError("non-finite entries")
    herm = np.max(np.abs(mat - mat.conj().T))
    if herm > HERMITICITY_TOL:
        raise InvalidStateError(f"not Hermitian: residue {herm:.3e}")
    tr = np.trace(mat)
    if abs(tr - 1.0) > TRACE_TOL:
        raise InvalidStateError(f"trace {tr} differs from 1")
    lo = float(np.linalg.eigvalsh(mat)[0])
    if lo < PSD_FLOOR:
        raise InvalidStateError(f"negative eigenvalue {lo:.3e} below floor")


@dataclass(frozen=True)
class DensityMatrix:
    """A validated Hermitian, unit-trace, PSD 2^N x 2^N matrix."""

    mat: np.ndarray
    n_qubits: int = field(default=-1)

    def __post_init__(self):
        mat = np.ascontiguousarray(np.asarray(self.mat, dtype=complex))
        object.__setattr__(self, "mat", mat)
        n = _n_qubits_of(mat)
        if self.n_qubits == -1:
            object.__setattr__(self, "n_qubits", n)
        elif self.n_qubits != n:
            raise DimensionError(
                f"n_qubits={self.n_qubits} but matrix is {mat.shape[0]}-dimensional"
            )
        validate_density_matrix(mat)

    @classmethod
    def from_state_vector(cls, psi) -> "DensityMatrix":
        psi = np.asarray(psi, dtype=complex).ravel()
        norm = np.linalg.norm(psi)
        if abs(norm - 1.0) > 1e-9:
            raise InvalidStateError(f"state vector norm {norm} differs from 1")
        return cls(np.outer(psi, psi.conj()))

    @classmethod
    def maximally_mixed(cls, n_qubits: int) -> "DensityMatrix":
        d = 2**n_qubits
        return cls(np.eye(d, dtype=complex) / d)


@dataclass(frozen=True)
class BlochVector:
    rx: float
    ry: float
    rz: float

    def __post_init__(self):
        if self.norm() > 1.0 + 1e-9:
            raise InvalidStateError(f"Bloch vector norm {self.norm()} exceeds 1")

    def norm(self) -> float:
        return float(np.sqrt(self.rx**2 + self.ry**2 + self.rz**2))


@dataclass(frozen=True)
class PauliString:
    """A tensor product of I/X/Y/Z with +1 phase, qubit 0 most significant."""

    n_qubits: int
    letters: str

    def __post_init__(self):
        if len(self.letters) != self.n_qubits:
            raise DimensionError("letters length must equal n_qubits")
        if any(ch not in PAULI_LETTERS for ch in self.letters):
            raise ValueError(f"invalid Pauli letters {self.letters!r}")

    @property
    def index(self) -> int:
        """Base-4 encoding with qubit 0 as the most significant digit."""
        idx = 0
        for ch in self.letters:
            idx = 4 * idx + PAULI_LETTERS.index(ch)
        return idx

    @classmethod
    def from_index(cls, n_qubits: int, index: int) -> "PauliString":
        if not 0 <= index < 4**n_qubits:
            raise ValueError(f"index {index} out of range for {n_qubits} qubits")
        letters = []
        for q in range(n_qubits):
            digit = (index >> (2 * (n_qubits - 1 - q))) & 3
            letters.append(PAULI_LETTERS[digit])
        return cls(n_qubits, "".join(letters))


def pauli_matrix(p) -> np.ndarray:
    """Dense matrix of a PauliString (or plain letter string like "XZ")."""
    letters = p.letters if isinstance(p, PauliString) else str(p)
    mat = PAULI_1Q[letters[0]]
    for ch in letters[1:]:
        mat = np.kron(mat, PAULI_1Q[ch])
    return mat


def _pauli_basis_tensor() -> np.ndarray:
    # B[a, c, r] = P_a[c, r]; contraction with rho[r, c] yields tr(rho P_a)
    return np.stack([PAULI_1Q[ch] for ch in PAULI_LETTERS])


_B_TENSOR = _pauli_basis_tensor()


def pauli_expectations(rho) -> np.ndarray:
    """All 4^N Pauli expectation values tr(rho P_j), ordered by Pauli index.

    The transform factorizes over qubits, so the cost is O(N 4^N) rather
    than one dense trace per Pauli string.
    """
    mat = _as_matrix(rho)
    n = _n_qubits_of(mat)
    if np.max(np.abs(mat - mat.conj().T)) > HERMITICITY_TOL:
        raise InvalidStateError("pauli_expectations requires a Hermitian input")
    expec = batched_pauli_expectations(mat[np.newaxis, :, :], n)[0]
    return expec


def batched_pauli_expectations(mats: np.ndarray, n: int) -> np.ndarray:
    """Pauli expectations for a batch of density matrices, shape (M, 4^N)."""
    m = mats.shape[0]
    t = mats.reshape((m,) + (2,) * (2 * n))
    # contract qubit q's (row, col) index pair against the Pauli basis tensor;
    # after step q the axes are (batch, r_rest..., c_rest..., labels 0..q)
    for q in range(n):
        t = np.tensordot(t, _B_TENSOR, axes=([1, 1 + (n - q)], [2, 1]))
    out = t.reshape(m, 4**n)
    resid = np.max(np.abs(out.imag)) if out.size else 0.0
    if resid > 1e-10:
        raise InvalidStateError(f"imaginary residue {resid:.3e} in Pauli expectations")
    return np.ascontiguousarray(out.real)


def bloch_vector(rho) -> BlochVector:
    """Bloch components (tr rho X, tr rho Y, tr rho Z) of a 1-qubit state."""
    mat = _as_matrix(rho)
    if _n_qubits_of(mat) != 1:
        raise DimensionError("bloch_vector is defined for single-qubit states")
    e = pauli_expectations(mat)
    return BlochVector(float(e[1]), float(e[2]), float(e[3]))


def from_bloch(v: BlochVector) -> DensityMatrix:
    mat = 0.5 * (
        PAULI_1Q["I"] + v.rx * PAULI_1Q["X"] + v.ry * PAULI_1Q["Y"] + v.rz * PAULI_1Q["Z"]
    )
    return DensityMatrix(mat)


def trace_norm(mat: np.ndarray) -> float:
    """Unhalved trace norm (sum of singular values) of a Hermitian matrix."""
    return float(np.sum(np.abs(np.linalg.eigvalsh(mat))))


def trace_distance(a, b) -> float:
    """(1/2) * trace norm of a - b."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return 0.5 * trace_norm(ma - mb)


def hs_distance(a, b) -> float:
    """Hilbert-Schmidt (Frobenius) distance."""
    ma, mb = _as_matrix(a), _as_matrix(b)
    if ma.shape != mb.shape:
        raise DimensionError(f"shape mismatch {ma.shape} vs {mb.shape}")
    return float(np.linalg.norm(ma - mb))


def purity(rho) -> float:
    mat = _as_matrix(rho)
    return float(np.trace(mat @ mat).real)


def fidelity_with_pure(rho, psi) -> float:
    """<psi| rho |psi> for a pure reference vector psi."""
    mat = _as_matrix(rho)
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != mat.shape[0]:
        raise DimensionError("state vector dimension mismatch")
    return float(np.real(psi.conj() @ mat @ psi))


def postselect_ancillas(rho, n_logical: int):
    """Project the trailing N-k ancilla qubits onto |0...0> and renormalize.

    Returns (logical DensityMatrix on 2^k, success probability s).
    The logical block occupies qubits 0..k-1 (most significant bits), so the
    surviving basis indices are multiples of 2^(N-k).
    """
    mat = _as_matrix(rho)
    n = _n_qubits_of(mat)
    if not 0 < n_logical <= n:
        raise DimensionError(f"n_logical={n_logical} invalid for N={n}")
    stride = 2 ** (n - n_logical)
    idx = np.arange(2**n_logical) * stride
    block = mat[np.ix_(idx, idx)]
    s = float(np.trace(block).real)
    if s < 1e-14:
        raise PostselectionImpossibleError(
            f"trivial-syndrome probability {s:.3e} is numerically zero"
        )
    return DensityMatrix(block / s), s


def random_pure_state(n_qubits: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random state vector via normalized complex Gaussians."""
    d = 2**n_qubits
    psi = rng.normal(size=d) + 1j * rng.normal(size=d)
    return psi / np.linalg.norm(psi)


def random_density_matrix(
    n_qubits: int, rng: np.random.Generator, rank: int | None = None
) -> DensityMatrix:
    """Random mixed state rho = G G^dag / tr(G G^dag) from a Ginibre block."""
    d = 2**n_qubits
    r = d if rank is None else rank
    g = rng.normal(size=(d, r)) + 1j * rng.normal(size=(d, r))
    mat = g @ g.conj().T
    return DensityMatrix(mat / np.trace(mat).real)
