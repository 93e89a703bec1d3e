"""Closed-form decoding fidelities, critical lines, and effective-channel
parameters for the encode-noise-decode-postselect protocol.

All formulas are evaluated in overflow-safe form: the exponentials 2^N and
lambda^N are handled in log space once N exceeds 30, which keeps the
large-N asymptotics checks honest in double precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import KrausChannel
from .qstate import DimensionError

_LOG_SPACE_N = 30


def _check_prob(p: float) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} must lie in [0, 1]")
    return p


@dataclass(frozen=True)
class CodeParams:
    """Physical size N, logical size k, code rate r = k/N, d_L = 2^k."""

    n_qubits: int
    n_logical: int

    def __post_init__(self):
        if not 0 < self.n_logical < self.n_qubits:
            raise ValueError(f"need 0 < k < N, got k={self.n_logical}, N={self.n_qubits}")

    @property
    def rate(self) -> float:
        return self.n_logical / self.n_qubits

    @property
    def d_logical(self) -> int:
        return 2**self.n_logical


def lambda_ad(p: float) -> float:
    """Single-site transfer factor 1 + sqrt(1-p) - p/2 of amplitude damping.

    Monotone decreasing from 2 at p=0 to 1/2 at p=1; equals (1+sqrt(1-p))^2/2.
    """
    p = _check_prob(p)
    return 1.0 + math.sqrt(1.0 - p) - p / 2.0


def transfer_factor_mixed(p: float, alpha: float) -> float:
    """B(p, alpha) = 2 - p + 2 sqrt(1-p) cos(alpha); B(p, 0) = 2 lambda(p)."""
    p = _check_prob(p)
    return 2.0 - p + 2.0 * math.sqrt(1.0 - p) * math.cos(alpha)


def _fidelity_from_transfer(big_lambda: float, params: CodeParams) -> float:
    """F = (2^N - 1)(2^N + L^N) / (2^N (2^(k+N) - 1) + (2^N - 2^k) L^N).

    L is the full single-site transfer trace (L = 2 lambda for damping).
    """
    n, k = params.n_qubits, params.n_logical
    if big_lambda < 0.0:
        raise ValueError("transfer trace must be nonnegative")
    if big_lambda == 0.0:
        # only hit by the transfer factor's zero at (p=0, alpha=pi)
        return (2.0**n - 1.0) / (2.0 ** (k + n) - 1.0)
    if n <= _LOG_SPACE_N:
        two_n = 2.0**n
        ln_pow = big_lambda**n
        num = (two_n - 1.0) * (two_n + ln_pow)
        den = two_n * (2.0 ** (k + n) - 1.0) + (two_n - 2.0**k) * ln_pow
        return num / den
    # log-space: den = 2^(2N+k) + 2^N L^N - 2^N - 2^k L^N, split into +/- pieces
    la = n * math.log(2.0)
    lb = n * math.log(big_lambda)
    ln_num = la + math.log1p(-(2.0**-n)) + np.logaddexp(la, lb)
    pos = np.logaddexp(la + (k + n) * math.log(2.0), la + lb)
    neg = np.logaddexp(la, k * math.log(2.0) + lb)
    ln_den = pos + math.log1p(-math.exp(neg - pos))
    return float(math.exp(ln_num - ln_den))


def fidelity_ad(p: float, params: CodeParams) -> float:
    """Annealed decoding fidelity under amplitude damping of strength p."""
    return _fidelity_from_transfer(2.0 * lambda_ad(p), params)


def fidelity_mixed(p: float, alpha: float, params: CodeParams) -> float:
    """Annealed decoding fidelity for damping followed by a Z rotation."""
    return _fidelity_from_transfer(transfer_factor_mixed(p, alpha), params)


def p_critical(r: float) -> float:
    """Critical damping p_c = 2^((3+r)/2) - 2^(r+1) of the fidelity transition.

    Equivalently lambda(p_c) = 2^r: the point where the transfer factor
    stops beating the entropic 2^r per site.
    """
    if not 0.0 < r < 1.0:
        raise ValueError(f"code rate r={r} must lie in (0, 1)")
    return 2.0 ** ((3.0 + r) / 2.0) - 2.0 ** (r + 1.0)


def alpha_boundary(p: float, r: float):
    """Rotation angle alpha on the phase boundary at damping p, or None.

    Solves 2 - p + 2 sqrt(1-p) cos(alpha) = 2^(1+r).  Returns None when no
    real angle satisfies it (the resilient phase is a bounded region).
    """
    p = _check_prob(p)
    if not 0.0 < r < 1.0:
        raise ValueError(f"code rate r={r} must lie in (0, 1)")
    denom = 2.0 * math.sqrt(1.0 - p)
    if denom == 0.0:
        return None
    cos_alpha = (2.0 ** (1.0 + r) - 2.0 + p) / denom
    if abs(cos_alpha) > 1.0:
        return None
    return float(math.acos(cos_alpha))


def tau_effective(p: float, params: CodeParams) -> float:
    """Depolarizing survival weight tau = (d_L F_AD - 1) / (d_L - 1)."""
    d_l = params.d_logical
    return (d_l * fidelity_ad(p, params) - 1.0) / (d_l - 1.0)


def purity_mean(tau: float, params: CodeParams, logical_purity: float = 1.0) -> float:
    """Purity of the encoder-averaged logical state.

    tr(rho_bar^2) = tau^2 tr(rho_L^2) + (1 - tau^2)/d_L, assuming the
    averaged conditional channel is depolarizing with weight tau.
    """
    d_l = params.d_logical
    return tau**2 * logical_purity + (1.0 - tau**2) / d_l


def replica_transfer_trace(channel: KrausChannel) -> float:
    """tr(sum_i K_i (x) K_i^dag) = sum_i |tr K_i|^2 for a 1-qubit channel.

    Equals 2 lambda(p) for amplitude damping and B(p, alpha) for the
    damping-plus-rotation channel.
    """
    if channel.n_qubits_acted != 1:
        raise DimensionError("transfer trace is defined for single-qubit channels")
    total = 0.0
    for k in channel.kraus_ops:
        total += abs(np.trace(k)) ** 2
    return float(total)
