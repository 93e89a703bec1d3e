"""Exhaustive enumeration of pure stabilizer states and their Pauli columns.

Every pure stabilizer state has amplitudes supported on an affine subspace
A = {Rx + t} of F_2^N with phases i^(c.x) (-1)^(x^T Q x), where Q ranges
over strictly-upper-triangular binary forms and c over Z_4^d.  Enumerating
(subspace, coset, Q, c) once each is exact and collision-free, and the
per-dimension counts reproduce the closed-form total
|S_N| = 2^N * prod_{i=1..N} (2^i + 1).

Enumeration order (frozen; the cache file and LP column indices rely on it):
dimension d ascending; pivot columns lexicographic; remaining basis bits
ascending; coset representative ascending; quadratic bits major, Z_4 linear
digits minor.  Qubit 0 is the most significant bit throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from pathlib import Path

import numpy as np

from .qstate import CapacityError, InvalidStateError, batched_pauli_expectations

CACHE_MAGIC = "noisymagic-stabilizer-table v1"


def stabilizer_count(n: int) -> int:
    total = 2**n
    for i in range(1, n + 1):
        total *= 2**i + 1
    return total


def gaussian_binomial(n: int, d: int) -> int:
    num, den = 1, 1
    for i in range(d):
        num *= 2 ** (n - i) - 1
        den *= 2 ** (d - i) - 1
    return num // den


@dataclass(frozen=True)
class StabilizerTable:
    """All pure stabilizer states of N qubits plus integer Pauli columns.

    states: (M, 2^N) complex, unit norm, first nonzero amplitude real > 0.
    pauli_columns: (M, 4^N) int8 with entries in {-1, 0, +1}; row j is the
    signed stabilizer group of state j in Pauli-index order.
    """

    n_qubits: int
    states: np.ndarray
    pauli_columns: np.ndarray


def _rref_bases(n: int, d: int):
    """Yield (basis matrix R (d x n), pivot tuple) for every d-dim subspace."""
    if d == 0:
        yield np.zeros((0, n), dtype=np.uint8), ()
        return
    for pivots in combinations(range(n), d):
        free_slots = []
        for i, p in enumerate(pivots):
            for j in range(p + 1, n):
                if j not in pivots:
                    free_slots.append((i, j))
        base = np.zeros((d, n), dtype=np.uint8)
        for i, p in enumerate(pivots):
            base[i, p] = 1
        for bits in range(2 ** len(free_slots)):
            mat = base.copy()
            for b, (i, j) in enumerate(free_slots):
                mat[i, j] = (bits >> (len(free_slots) - 1 - b)) & 1
            yield mat, pivots


def _coset_reps(n: int, pivots) -> np.ndarray:
    """Integer basis indices of the canonical transversal (zeros at pivots)."""
    free_cols = [j for j in range(n) if j not in pivots]
    reps = np.zeros(2 ** len(free_cols), dtype=np.int64)
    for m in range(len(reps)):
        t = 0
        for b, j in enumerate(free_cols):
            if (m >> (len(free_cols) - 1 - b)) & 1:
                t |= 1 << (n - 1 - j)
        reps[m] = t
    return np.sort(reps)


def _x_vectors(d: int) -> np.ndarray:
    """All vectors of F_2^d as rows, x_0 most significant, ascending order."""
    xs = np.arange(2**d, dtype=np.int64)
    return ((xs[:, None] >> np.arange(d - 1, -1, -1)) & 1).astype(np.uint8)


def _phase_block(d: int, phase_indices: np.ndarray, x_all: np.ndarray) -> np.ndarray:
    """Amplitude phases for a slice of the 2^(d(d+3)/2) phase assignments.

    phase index = q_bits * 4^d + c_digits; returns (len, 2^d) complex with
    entry [m, x] = i^(c_m . x mod 4) * (-1)^(x^T Q_m x).
    """
    if d == 0:
        return np.ones((len(phase_indices), 1), dtype=complex)
    pairs = list(combinations(range(d), 2))
    n_c = 4**d
    q_idx = phase_indices // n_c
    c_idx = phase_indices % n_c
    c_digits = (c_idx[:, None] >> (2 * np.arange(d - 1, -1, -1))) & 3
    lin = (c_digits @ x_all.T.astype(np.int64)) % 4
    if pairs:
        q_bits = (q_idx[:, None] >> np.arange(len(pairs) - 1, -1, -1)) & 1
        xx = (x_all[:, [i for i, _ in pairs]] * x_all[:, [j for _, j in pairs]]).astype(
            np.int64
        )
        quad = (q_bits @ xx.T) % 2
    else:
        quad = np.zeros_like(lin)
    return (1j**lin) * ((-1.0) ** quad)


def _phase_count(d: int) -> int:
    return 2 ** (d * (d + 3) // 2)


def iter_stabilizer_state_blocks(n: int, max_block: int = 8192):
    """Stream all stabilizer states as (start_index, block) in frozen order.

    Supports n <= 5; memory stays bounded by max_block states per yield.
    """
    if n > 5:
        raise CapacityError(f"stabilizer streaming supports N <= 5, got {n}")
    dim = 2**n
    start = 0
    for d in range(n + 1):
        x_all = _x_vectors(d)
        n_phase = _phase_count(d)
        scale = 2 ** (-d / 2)
        for basis, pivots in _rref_bases(n, d):
            # basis indices of R x over all x, before the coset shift
            weights = 1 << (n - 1 - np.arange(n, dtype=np.int64))
            points = (x_all.astype(np.int64) @ basis.astype(np.int64)) % 2
            base_idx = points @ weights
            for t in _coset_reps(n, pivots):
                support = base_idx ^ t
                anchor = int(np.argmin(support))
                for lo in range(0, n_phase, max_block):
                    idx = np.arange(lo, min(lo + max_block, n_phase), dtype=np.int64)
                    phases = _phase_block(d, idx, x_all)
                    # canonicalize: smallest-index amplitude made real positive
                    phases = phases * phases[:, anchor].conj()[:, None]
                    block = np.zeros((len(idx), dim), dtype=complex)
                    block[:, support] = scale * phases
                    yield start, block
                    start += len(idx)


def pauli_expectation_columns(states: np.ndarray, n: int, chunk: int = 4096) -> np.ndarray:
    """Integer Pauli-expectation rows for a batch of pure stabilizer states."""
    m = states.shape[0]
    cols = np.empty((m, 4**n), dtype=np.int8)
    for lo in range(0, m, chunk):
        v = states[lo : lo + chunk]
        rhos = np.einsum("mi,mj->mij", v, v.conj())
        e = batched_pauli_expectations(rhos, n)
        r = np.rint(e)
        if np.max(np.abs(e - r)) > 1e-9:
            raise InvalidStateError("non-integer Pauli expectation in stabilizer table")
        cols[lo : lo + chunk] = r.astype(np.int8)
    counts = np.count_nonzero(cols, axis=1)
    if not np.all(counts == 2**n):
        raise InvalidStateError("stabilizer group size mismatch in Pauli columns")
    if not np.all(cols[:, 0] == 1):
        raise InvalidStateError("identity Pauli entry must be +1")
    return cols


def enumerate_stabilizer_states(n: int, with_columns: bool = True) -> StabilizerTable:
    """The complete stabilizer table for n <= 4 qubits.

    Larger systems have too many states to tabulate densely; callers should
    use column generation with the streaming enumerator instead.
    """
    if n > 4:
        raise CapacityError(
            f"full enumeration supports N <= 4 (use column generation), got {n}"
        )
    if n < 1:
        raise ValueError("n must be >= 1")
    total = stabilizer_count(n)
    states = np.empty((total, 2**n), dtype=complex)
    for start, block in iter_stabilizer_state_blocks(n):
        states[start : start + block.shape[0]] = block
    cols = pauli_expectation_columns(states, n) if with_columns else np.empty(
        (total, 0), dtype=np.int8
    )
    return StabilizerTable(n, states, cols)


_SINGLE_QUBIT_STABILIZERS = np.array(
    [
        [1, 0],
        [0, 1],
        [2**-0.5, 2**-0.5],
        [2**-0.5, -(2**-0.5)],
        [2**-0.5, 1j * 2**-0.5],
        [2**-0.5, -1j * 2**-0.5],
    ],
    dtype=complex,
)


def product_stabilizer_states(n: int) -> np.ndarray:
    """The 6^n products of single-qubit stabilizer states (octahedron vertices).

    These span the Hermitian operator space, so they make a feasible warm
    start for restricted LPs.
    """
    out = _SINGLE_QUBIT_STABILIZERS
    for _ in range(n - 1):
        out = np.einsum("ma,kb->mkab", out, _SINGLE_QUBIT_STABILIZERS).reshape(
            out.shape[0] * 6, out.shape[1] * 2
        )
    return out


def save_table(table: StabilizerTable, path) -> None:
    """Text dump: header, integrity line, one amplitude row per state."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write(f"{CACHE_MAGIC}\n")
        fh.write(f"n_qubits={table.n_qubits},count={table.states.shape[0]}\n")
        for row in table.states:
            parts = []
            for z in row:
                parts.append(repr(float(z.real)))
                parts.append(repr(float(z.imag)))
            fh.write(",".join(parts) + "\n")


def load_table(path) -> StabilizerTable:
    """Load a cached table; raises InvalidStateError on any integrity failure."""
    path = Path(path)
    with path.open("r", encoding="utf-8") as fh:
        magic = fh.readline().strip()
        if magic != CACHE_MAGIC:
            raise InvalidStateError(f"unrecognized cache header {magic!r}")
        meta = dict(kv.split("=") for kv in fh.readline().strip().split(","))
        n = int(meta["n_qubits"])
        count = int(meta["count"])
        if count != stabilizer_count(n):
            raise InvalidStateError("cache count does not match the closed formula")
        states = np.empty((count, 2**n), dtype=complex)
        for i in range(count):
            parts = fh.readline().strip().split(",")
            if len(parts) != 2 ** (n + 1):
                raise InvalidStateError(f"malformed amplitude row {i}")
            vals = np.array([float(x) for x in parts])
            states[i] = vals[0::2] + 1j * vals[1::2]
    cols = pauli_expectation_columns(states, n)
    return StabilizerTable(n, states, cols)


def load_or_build(n: int, path=None) -> StabilizerTable:
    """Load the cache if valid, else enumerate from scratch and rewrite it."""
    if path is None:
        return enumerate_stabilizer_states(n)
    path = Path(path)
    if path.exists():
        try:
            return load_table(path)
        except (InvalidStateError, ValueError, KeyError, OSError):
            pass
    table = enumerate_stabilizer_states(n)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_table(table, path)
    return table


_TABLE_MEMO: dict[int, StabilizerTable] = {}


def get_table(n: int) -> StabilizerTable:
    """Process-wide memoized table (immutable, safe to share)."""
    if n not in _TABLE_MEMO:
        _TABLE_MEMO[n] = enumerate_stabilizer_states(n)
    return _TABLE_MEMO[n]
