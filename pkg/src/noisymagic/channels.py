"""Noise models as Kraus channels, plus composition and local application."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .qstate import (
    DimensionError,
    InvalidStateError,
    _as_matrix,
    _n_qubits_of,
    validate_density_matrix,
)

COMPLETENESS_TOL = 1e-12
PRUNE_NORM = 1e-14


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name}={value} must lie in [0, 1]")
    return value


@dataclass(frozen=True)
class KrausChannel:
    """A CPTP map given by Kraus operators with a completeness certificate."""

    n_qubits_acted: int
    kraus_ops: tuple
    label: str = ""
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        ops = tuple(np.asarray(k, dtype=complex) for k in self.kraus_ops)
        object.__setattr__(self, "kraus_ops", ops)
        d = 2**self.n_qubits_acted
        total = np.zeros((d, d), dtype=complex)
        for k in ops:
            if k.shape != (d, d):
                raise DimensionError(f"Kraus operator shape {k.shape}, expected {(d, d)}")
            if not np.all(np.isfinite(k.real)) or not np.all(np.isfinite(k.imag)):
                raise InvalidStateError("non-finite Kraus operator")
            total += k.conj().T @ k
        resid = np.max(np.abs(total - np.eye(d)))
        if resid > COMPLETENESS_TOL:
            raise InvalidStateError(
                f"channel {self.label!r} violates completeness by {resid:.3e}"
            )

    def apply(self, rho) -> np.ndarray:
        """Full-dimension application sum_i K_i rho K_i^dag."""
        mat = _as_matrix(rho)
        if mat.shape[0] != 2**self.n_qubits_acted:
            raise DimensionError("state dimension does not match channel")
        out = np.zeros_like(mat)
        for k in self.kraus_ops:
            out += k @ mat @ k.conj().T
        return out


@dataclass(frozen=True)
class DepolarizingMap:
    """Global depolarizing noise stored as an affine map, not a Kraus set.

    D_p(rho) = (1-p) rho + (p/2^N) I.  A 4^N-element Kraus representation
    would be pointlessly large; the map is defined algebraically.
    """

    p: float
    n_qubits: int

    def __post_init__(self):
        _check_prob("p", self.p)

    def apply(self, rho) -> np.ndarray:
        mat = _as_matrix(rho)
        d = 2**self.n_qubits
        if mat.shape[0] != d:
            raise DimensionError("state dimension does not match map")
        return (1.0 - self.p) * mat + (self.p / d) * np.eye(d)


def depolarizing_global(p: float, n: int) -> DepolarizingMap:
    return DepolarizingMap(_check_prob("p", p), n)


def depolarizing_local(p: float) -> KrausChannel:
    """Single-qubit depolarizing Kraus set {sqrt(1-3p/4) I, sqrt(p/4) X/Y/Z}.

    Matches the global form only at N=1; the product of local channels is
    not the global depolarizing map for N > 1.
    """
    p = _check_prob("p", p)
    ident = np.eye(2, dtype=complex)
    x = np.array([[0, 1], [1, 0]], dtype=complex)
    y = np.array([[0, -1j], [1j, 0]], dtype=complex)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    ops = (
        np.sqrt(1 - 3 * p / 4) * ident,
        np.sqrt(p / 4) * x,
        np.sqrt(p / 4) * y,
        np.sqrt(p / 4) * z,
    )
    return KrausChannel(1, ops, "depolarizing_local", {"p": p})


def amplitude_damping(p: float) -> KrausChannel:
    """Zero-temperature relaxation toward |0> with strength p.

    K0 = diag(1, sqrt(1-p)),  K1 = sqrt(p)|0><1|.
    Bloch action: (rx sqrt(1-p), ry sqrt(1-p), p + rz (1-p)).
    """
    p = _check_prob("p", p)
    k0 = np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    k1 = np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    return KrausChannel(1, (k0, k1), "amplitude_damping", {"p": p})


def gadc(p: float, eta: float) -> KrausChannel:
    """Generalized amplitude damping: finite-temperature relaxation.

    eta = 1 reduces to amplitude_damping (zero temperature); the Bloch
    sphere collapses to an ellipsoid centered at (0, 0, 2 eta - 1) * p / p.
    """
    p = _check_prob("p", p)
    eta = _check_prob("eta", eta)
    se, sc = np.sqrt(eta), np.sqrt(1 - eta)
    k0 = se * np.array([[1, 0], [0, np.sqrt(1 - p)]], dtype=complex)
    k1 = se * np.array([[0, np.sqrt(p)], [0, 0]], dtype=complex)
    k2 = sc * np.array([[np.sqrt(1 - p), 0], [0, 1]], dtype=complex)
    k3 = sc * np.array([[0, 0], [np.sqrt(p), 0]], dtype=complex)
    ops = tuple(k for k in (k0, k1, k2, k3) if np.linalg.norm(k) > PRUNE_NORM)
    return KrausChannel(1, ops, "gadc", {"p": p, "eta": eta})


def z_rotation(alpha: float) -> KrausChannel:
    """Coherent error exp(-i alpha Z / 2) as a single-Kraus channel."""
    k = np.array(
        [[np.exp(-0.5j * alpha), 0], [0, np.exp(0.5j * alpha)]], dtype=complex
    )
    return KrausChannel(1, (k,), "z_rotation", {"alpha": float(alpha)})


def mixed_error(p: float, alpha: float) -> KrausChannel:
    """Amplitude damping followed by a coherent Z rotation.

    Kraus operators are exp(-i alpha Z/2) K_i with K_i the damping set,
    so mixed_error(p, 0) is amplitude_damping(p) operator-by-operator.
    """
    p = _check_prob("p", p)
    rot = z_rotation(alpha).kraus_ops[0]
    ad = amplitude_damping(p)
    ops = tuple(rot @ k for k in ad.kraus_ops)
    return KrausChannel(1, ops, "mixed_error", {"p": p, "alpha": float(alpha)})


def compose(outer: KrausChannel, inner: KrausChannel) -> KrausChannel:
    """Channel composition outer(inner(rho)) with eager Kraus products.

    Products with Frobenius norm below 1e-14 are pruned to bound growth.
    """
    if outer.n_qubits_acted != inner.n_qubits_acted:
        raise DimensionError("cannot compose channels of different arity")
    ops = []
    for a in outer.kraus_ops:
        for b in inner.kraus_ops:
            k = a @ b
            if np.linalg.norm(k) > PRUNE_NORM:
                ops.append(k)
    return KrausChannel(
        outer.n_qubits_acted,
        tuple(ops),
        f"{outer.label}*{inner.label}",
        {**inner.params, **outer.params},
    )


def _apply_kraus_on_target(mat: np.ndarray, ops, target: int, n: int) -> np.ndarray:
    """sum_i K_i rho K_i^dag with 2x2 K_i acting on one qubit of an N-qubit rho."""
    left = 2**target
    mid = 2
    right = 2 ** (n - 1 - target)
    t = mat.reshape(left, mid, right, left, mid, right)
    out = np.zeros_like(t)
    for k in ops:
        kc = k.conj()
        # out[l,a,r,m,d,s] += K[a,b] rho[l,b,r,m,c,s] K*[d,c]
        tmp = np.tensordot(k, t, axes=([1], [1]))         # (a, l, r, m, c, s)
        tmp = np.tensordot(tmp, kc, axes=([4], [1]))      # (a, l, r, m, s, d)
        out += tmp.transpose(1, 0, 2, 3, 5, 4)
    return out.reshape(mat.shape)


def apply_local(channel: KrausChannel, rho, targets) -> np.ndarray:
    """Apply a single-qubit channel independently to each target qubit."""
    if channel.n_qubits_acted != 1:
        raise DimensionError("apply_local requires a single-qubit channel")
    mat = np.array(_as_matrix(rho))
    n = _n_qubits_of(mat)
    targets = list(targets)
    if len(set(targets)) != len(targets):
        raise ValueError("targets must be distinct")
    for t in targets:
        if not 0 <= t < n:
            raise DimensionError(f"target {t} out of range for N={n}")
        mat = _apply_kraus_on_target(mat, channel.kraus_ops, t, n)
    validate_density_matrix(mat)
    return mat


def selective_apply(channel: KrausChannel, rho, targets, kraus_indices) -> np.ndarray:
    """Unnormalized branch K_j rho K_j^dag for one Kraus index per target.

    The trace of the result is the branch probability.
    """
    if channel.n_qubits_acted != 1:
        raise DimensionError("selective_apply requires a single-qubit channel")
    mat = np.array(_as_matrix(rho))
    n = _n_qubits_of(mat)
    targets = list(targets)
    kraus_indices = list(kraus_indices)
    if len(targets) != len(kraus_indices):
        raise ValueError("one Kraus index required per target")
    for t, j in zip(targets, kraus_indices):
        if not 0 <= j < len(channel.kraus_ops):
            raise ValueError(f"Kraus index {j} out of range")
        mat = _apply_kraus_on_target(mat, (channel.kraus_ops[j],), t, n)
    return mat
