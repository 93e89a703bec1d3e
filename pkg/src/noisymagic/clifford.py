"""Clifford gate set, random layered encoders, and stabilizer-state tests."""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .qstate import (
    CapacityError,
    DimensionError,
    InvalidStateError,
    PAULI_1Q,
    PauliString,
    batched_pauli_expectations,
    pauli_matrix,
)
from .seeding import make_generator

# The 24 single-qubit Cliffords as H/S words, leftmost letter applied first.
# Ordering: breadth-first by word length, then lexicographic with H < S,
# keeping the first word that reaches each new unitary (up to global phase).
# This enumeration is frozen so that encoder seeds are portable.
CLIFFORD_WORDS = (
    "", "H", "S", "HS", "SH", "SS", "HSH", "HSS", "SHS", "SSH", "SSS",
    "HSHS", "HSSH", "HSSS", "SHSS", "SSHS", "HSHSS", "HSSHS", "SHSSH",
    "SHSSS", "SSHSS", "HSHSSH", "HSHSSS", "HSSHSS",
)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.array([[1, 0], [0, 1j]], dtype=complex)


def _word_to_matrix(word: str) -> np.ndarray:
    u = np.eye(2, dtype=complex)
    for ch in word:
        u = (_H if ch == "H" else _S) @ u
    return u


_CLIFFORD_1Q = tuple(_word_to_matrix(w) for w in CLIFFORD_WORDS)


def single_qubit_clifford(index: int) -> np.ndarray:
    """One of the 24 single-qubit Clifford unitaries, by canonical index."""
    if not 0 <= index < 24:
        raise ValueError(f"Clifford index {index} out of range [0, 24)")
    return _CLIFFORD_1Q[index].copy()


def xx_rotation() -> np.ndarray:
    """The two-qubit Clifford entangler exp(-i (pi/4) X (x) X).

    The quarter-angle convention is the unique Clifford reading: the
    half-angle alternative exp(-i (pi/8) XX) maps Paulis outside the
    Pauli group.
    """
    xx = np.kron(PAULI_1Q["X"], PAULI_1Q["X"])
    return (np.eye(4, dtype=complex) - 1j * xx) / np.sqrt(2)


def embed_one_qubit(gate: np.ndarray, target: int, n: int) -> np.ndarray:
    """Promote a 2x2 gate on `target` to the full 2^N-dimensional unitary."""
    u = np.eye(1, dtype=complex)
    for q in range(n):
        u = np.kron(u, gate if q == target else np.eye(2))
    return u


def embed_two_qubit(gate: np.ndarray, q1: int, q2: int, n: int) -> np.ndarray:
    """Promote a 4x4 gate on qubits (q1, q2) to the full unitary."""
    if q1 == q2 or not (0 <= q1 < n and 0 <= q2 < n):
        raise DimensionError(f"invalid qubit pair ({q1}, {q2}) for N={n}")
    full = np.kron(gate, np.eye(2 ** (n - 2), dtype=complex))
    # tensor axes currently ordered (q1, q2, rest...); permute into place
    others = [q for q in range(n) if q not in (q1, q2)]
    src_order = [q1, q2] + others
    perm = [src_order.index(q) for q in range(n)]
    t = full.reshape((2,) * (2 * n))
    t = t.transpose(perm + [n + p for p in perm])
    return np.ascontiguousarray(t.reshape(2**n, 2**n))


@dataclass(frozen=True)
class EncoderSpec:
    """A seeded layered Clifford circuit: the random encoder.

    Odd layers hold one Clifford index per qubit; even layers hold
    floor(N/2) disjoint qubit pairs acted on by XX(pi/4).  Depth is 4N
    layers for the standard protocol.
    """

    n_qubits: int
    depth: int
    layers: tuple
    seed: int

    def to_json(self) -> str:
        payload = {
            "n_qubits": self.n_qubits,
            "depth": self.depth,
            "seed": self.seed,
            "layers": [
                {"type": kind, "data": [list(x) if isinstance(x, tuple) else x for x in data]}
                if kind == "xx"
                else {"type": kind, "data": list(data)}
                for kind, data in self.layers
            ],
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "EncoderSpec":
        payload = json.loads(text)
        layers = []
        for layer in payload["layers"]:
            if layer["type"] == "xx":
                layers.append(("xx", tuple(tuple(p) for p in layer["data"])))
            else:
                layers.append(("sq", tuple(layer["data"])))
        return cls(payload["n_qubits"], payload["depth"], tuple(layers), payload["seed"])


def sample_encoder(n: int, seed: int) -> EncoderSpec:
    """Sample the depth-4N alternating random circuit.

    Odd layers draw an independent uniform Clifford index per qubit; even
    layers draw a fresh random pairing (seeded shuffle, consecutive pairs).
    Odd N leaves one idle qubit per pairing layer.
    """
    if n < 2:
        raise DimensionError("encoder needs at least 2 qubits")
    if n > 6:
        raise CapacityError(f"dense encoder path supports N <= 6, got {n}")
    rng = make_generator(seed)
    layers = []
    for layer_index in range(4 * n):
        if layer_index % 2 == 0:
            layers.append(("sq", tuple(int(c) for c in rng.integers(0, 24, size=n))))
        else:
            order = [int(q) for q in rng.permutation(n)]
            pairs = tuple(
                (order[2 * i], order[2 * i + 1]) for i in range(n // 2)
            )
            layers.append(("xx", pairs))
    return EncoderSpec(n, 4 * n, tuple(layers), seed)


def encoder_unitary(spec: EncoderSpec) -> np.ndarray:
    """Dense unitary of the layered circuit (layer 0 applied first)."""
    n = spec.n_qubits
    u = np.eye(2**n, dtype=complex)
    xx = xx_rotation()
    for kind, data in spec.layers:
        if kind == "sq":
            layer = np.eye(1, dtype=complex)
            for c in data:
                layer = np.kron(layer, single_qubit_clifford(c))
        else:
            layer = np.eye(2**n, dtype=complex)
            for a, b in data:
                layer = embed_two_qubit(xx, a, b, n) @ layer
        u = layer @ u
    return u


def pauli_conjugation_residue(u: np.ndarray) -> float:
    """Max residue of U P U^dag against its nearest signed Pauli, over all P.

    Zero (to rounding) iff U is Clifford.  Uses the fact that a signed
    Pauli has Pauli expansion with a single +-1 coefficient.
    """
    n = int(round(np.log2(u.shape[0])))
    d = 2**n
    worst = 0.0
    for j in range(4**n):
        p = pauli_matrix(PauliString.from_index(n, j))
        m = u @ p @ u.conj().T
        # Pauli expansion c_k = tr(m P_k) / d; a signed Pauli has one +-1 entry
        coeffs = batched_pauli_expectations(m[np.newaxis].astype(complex), n)[0] / d
        top = np.max(np.abs(coeffs))
        resid = max(abs(top - 1.0), float(np.sqrt(max(np.sum(coeffs**2) - top**2, 0.0))))
        worst = max(worst, resid)
    return worst


def is_stabilizer_state(psi, tol: float = 1e-8) -> bool:
    """True iff the Pauli-expectation vector looks like a stabilizer group.

    Exactly 2^N expectations of magnitude 1 (the stabilizer group) and the
    remaining 4^N - 2^N within tol of zero.
    """
    psi = np.asarray(psi, dtype=complex).ravel()
    norm = np.linalg.norm(psi)
    if abs(norm - 1.0) > 1e-9:
        raise InvalidStateError(f"state vector norm {norm} differs from 1")
    n = int(round(np.log2(psi.shape[0])))
    if 2**n != psi.shape[0]:
        raise DimensionError("state vector length is not a power of 2")
    rho = np.outer(psi, psi.conj())
    e = batched_pauli_expectations(rho[np.newaxis], n)[0]
    near_unit = np.abs(np.abs(e) - 1.0) < tol
    near_zero = np.abs(e) < tol
    return bool(np.sum(near_unit) == 2**n and np.all(near_unit | near_zero))
