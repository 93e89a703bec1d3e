"""The encode -> noise -> decode -> postselect trajectory engine, ensemble
statistics over random encoders, concentration diagnostics, and the
no-click distillation protocol.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import channels as ch
from .clifford import encoder_unitary, sample_encoder
from .magic import rom_exact, sre, witness_w2
from .qstate import (
    CapacityError,
    DensityMatrix,
    DimensionError,
    QsimError,
    _as_matrix,
    hs_distance,
    trace_norm,
    validate_density_matrix,
)
from .seeding import derive_seed
from .stabilizers import get_table

MEASURE_FLAGS = ("fidelity", "rom", "sre", "witness", "distances", "alpha_beta_xi")


@dataclass(frozen=True)
class ChannelSpec:
    """Labeled single-qubit channel family applied iid to every qubit."""

    kind: str
    p: float = 0.0
    alpha: float = 0.0
    eta: float = 1.0

    def build(self) -> ch.KrausChannel:
        if self.kind == "amplitude_damping":
            return ch.amplitude_damping(self.p)
        if self.kind == "mixed":
            return ch.mixed_error(self.p, self.alpha)
        if self.kind == "coherent":
            return ch.z_rotation(self.alpha)
        if self.kind == "gadc":
            return ch.gadc(self.p, self.eta)
        if self.kind == "depolarizing":
            return ch.depolarizing_local(self.p)
        raise ValueError(f"unknown channel kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "alpha": self.alpha, "eta": self.eta}


@dataclass(frozen=True)
class ProtocolConfig:
    n_qubits: int
    n_logical: int
    channel: ChannelSpec
    n_samples: int
    master_seed: int
    measures: tuple = ("fidelity",)

    def __post_init__(self):
        if not 1 <= self.n_logical < self.n_qubits:
            raise ValueError(f"need 1 <= k < N, got k={self.n_logical}, N={self.n_qubits}")
        if self.n_qubits > 6:
            raise CapacityError("dense protocol supports N <= 6")
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        unknown = set(self.measures) - set(MEASURE_FLAGS)
        if unknown:
            raise ValueError(f"unknown measures {unknown}")
        if "rom" in self.measures and self.n_logical > 3:
            raise CapacityError("logical ROM supports k <= 3 (table limit)")

    def to_dict(self) -> dict:
        return {
            "n_qubits": self.n_qubits,
            "n_logical": self.n_logical,
            "channel": self.channel.to_dict(),
            "n_samples": self.n_samples,
            "master_seed": self.master_seed,
            "measures": list(self.measures),
        }


@dataclass
class TrajectoryRecord:
    seed: int
    excluded: bool = False
    s_u: float = 0.0
    rho_l: np.ndarray | None = None
    fidelity: float = 0.0
    rom: float | None = None
    sre2: float | None = None
    w2: float | None = None
    alpha_u: float | None = None
    beta_u: float | None = None
    xi_trace_norm: float | None = None


@dataclass
class EnsembleSummary:
    """Aggregated quenched statistics over encoder samples.

    mean_state is the equal-weight mean of normalized post-selected states;
    weighted_mean_state reweights by the trivial-syndrome probability s_U,
    which is the object the per-trajectory concentration bound is algebra
    for (see master_inequality_check).
    """

    config: ProtocolConfig
    n_effective: int
    excluded: int
    fidelity_mean: float
    fidelity_stderr: float
    mean_state: np.ndarray
    weighted_mean_state: np.ndarray
    mean_state_purity: float
    mean_state_purity_unbiased: float
    mean_state_purity_stderr: float
    s_mean: float = 0.0
    s_stderr: float = 0.0
    rom_mean: float | None = None
    rom_stderr: float | None = None
    rom_of_mean: float | None = None
    sre_mean: float | None = None
    sre_stderr: float | None = None
    w2_mean: float | None = None
    w2_stderr: float | None = None
    hs_mean: float | None = None
    hs_stderr: float | None = None
    trace_mean: float | None = None
    trace_stderr: float | None = None
    alpha_mean: float | None = None
    alpha_stderr: float | None = None
    beta_mean: float | None = None
    beta_stderr: float | None = None
    xi_trace_mean: float | None = None
    xi_trace_stderr: float | None = None
    master_violations: int = 0
    records: list = field(default_factory=list, repr=False)


def _mean_stderr(values) -> tuple[float, float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        return math.nan, math.nan
    if arr.size == 1:
        return float(arr[0]), 0.0
    return float(arr.mean()), float(arr.std(ddof=1) / math.sqrt(arr.size))


def decompose_alpha_beta_xi(lambda_out: np.ndarray, rho_ideal) -> tuple[float, float, np.ndarray]:
    """Split the unnormalized logical output into alpha I/d + beta rho + xi.

    alpha and beta follow from the trace and the overlap with the ideal
    state; xi is the remainder, traceless and orthogonal to rho_ideal.
    """
    ideal = _as_matrix(rho_ideal)
    lam = np.asarray(lambda_out, dtype=complex)
    if lam.shape != ideal.shape:
        raise DimensionError("shape mismatch between output and ideal state")
    d_l = ideal.shape[0]
    if d_l < 2:
        raise DimensionError("decomposition needs d_L >= 2")
    if abs(np.trace(ideal @ ideal).real - 1.0) > 1e-9:
        raise QsimError("rho_ideal must be pure")
    s = float(np.trace(lam).real)
    t = float(np.trace(ideal @ lam).real)
    alpha = d_l * (s - t) / (d_l - 1)
    beta = (d_l * t - s) / (d_l - 1)
    xi = lam - alpha * np.eye(d_l) / d_l - beta * ideal
    return alpha, beta, xi


def master_inequality_check(
    record: TrajectoryRecord,
    alpha_mean: float,
    beta_mean: float,
    weighted_mean_state: np.ndarray,
    tol: float = 1e-9,
) -> tuple[float, float, bool]:
    """Per-trajectory concentration bound audit.

    lhs = || rho~_U - rho_bar ||_1 (unhalved), with rho_bar the s-weighted
    mean; rhs = (2(|a_U - a| + |b_U - b|) + ||xi_U||_1) / s_U.  The bound
    is pure algebra (triangle inequality), so it must hold sample by sample.
    """
    lhs = trace_norm(record.rho_l - weighted_mean_state)
    rhs = (
        2.0 * (abs(record.alpha_u - alpha_mean) + abs(record.beta_u - beta_mean))
        + record.xi_trace_norm
    ) / record.s_u
    return lhs, rhs, lhs <= rhs + tol


def run_trajectory(config: ProtocolConfig, seed: int, table=None) -> TrajectoryRecord:
    """One encode/noise/decode/postselect pass for a fixed encoder seed."""
    n, k = config.n_qubits, config.n_logical
    channel = config.channel.build()
    spec = sample_encoder(n, seed)
    u = encoder_unitary(spec)
    psi = u[:, 0]  # U |0...0>
    rho_noisy = ch.apply_local(channel, np.outer(psi, psi.conj()), range(n))
    rho_dec = u.conj().T @ rho_noisy @ u

    stride = 2 ** (n - k)
    idx = np.arange(2**k) * stride
    block = rho_dec[np.ix_(idx, idx)]  # unnormalized Lambda_U(rho_0)
    s_u = float(np.trace(block).real)
    if s_u < 1e-14:
        return TrajectoryRecord(seed=seed, excluded=True)
    rho_l = block / s_u
    validate_density_matrix(rho_l)

    rec = TrajectoryRecord(seed=seed, s_u=s_u, rho_l=rho_l, fidelity=float(rho_l[0, 0].real))
    if "rom" in config.measures:
        rec.rom = rom_exact(rho_l, table if table is not None else get_table(k)).value
    if "sre" in config.measures:
        rec.sre2 = sre(rho_l, 2.0)
    if "witness" in config.measures:
        rec.w2 = witness_w2(rho_l)
    if "alpha_beta_xi" in config.measures:
        ideal = np.zeros((2**k, 2**k), dtype=complex)
        ideal[0, 0] = 1.0
        alpha_u, beta_u, xi = decompose_alpha_beta_xi(block, ideal)
        rec.alpha_u, rec.beta_u = alpha_u, beta_u
        rec.xi_trace_norm = trace_norm(xi)
    return rec


def ensemble_run(config: ProtocolConfig, threads: int = 1) -> EnsembleSummary:
    """Deterministic ensemble over encoder seeds derived from the master seed.

    Trajectory i uses seed hash(master_seed, i); aggregation is by index,
    so the summary is identical for any worker count.
    """
    table = get_table(config.n_logical) if "rom" in config.measures else None
    seeds = [derive_seed(config.master_seed, i) for i in range(config.n_samples)]

    def one(seed):
        return run_trajectory(config, seed, table)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(one, seeds))
    else:
        records = [one(s) for s in seeds]

    kept = [r for r in records if not r.excluded]
    excluded = len(records) - len(kept)
    if not kept:
        raise QsimError("all trajectories failed postselection")

    fid_mean, fid_err = _mean_stderr([r.fidelity for r in kept])
    states = np.stack([r.rho_l for r in kept])
    s_vals = np.array([r.s_u for r in kept])
    mean_state = states.mean(axis=0)
    weighted_mean_state = np.tensordot(s_vals, states, axes=1) / s_vals.sum()

    purity, purity_unbiased, purity_err = _jackknife_mean_purity(states, mean_state)
    s_mean, s_err = _mean_stderr(s_vals)

    summary = EnsembleSummary(
        config=config,
        n_effective=len(kept),
        excluded=excluded,
        fidelity_mean=fid_mean,
        fidelity_stderr=fid_err,
        mean_state=mean_state,
        weighted_mean_state=weighted_mean_state,
        mean_state_purity=purity,
        mean_state_purity_unbiased=purity_unbiased,
        mean_state_purity_stderr=purity_err,
        s_mean=s_mean,
        s_stderr=s_err,
        records=records,
    )

    if "rom" in config.measures:
        summary.rom_mean, summary.rom_stderr = _mean_stderr([r.rom for r in kept])
        summary.rom_of_mean = rom_exact(DensityMatrix(mean_state), table).value
        if summary.rom_of_mean > summary.rom_mean + 1e-6:
            raise QsimError("convexity violated: R(mean) > mean(R)")
    if "sre" in config.measures:
        summary.sre_mean, summary.sre_stderr = _mean_stderr([r.sre2 for r in kept])
    if "witness" in config.measures:
        summary.w2_mean, summary.w2_stderr = _mean_stderr([r.w2 for r in kept])
    if "distances" in config.measures:
        hs = [hs_distance(r.rho_l, mean_state) for r in kept]
        tr = [trace_norm(r.rho_l - mean_state) for r in kept]
        summary.hs_mean, summary.hs_stderr = _mean_stderr(hs)
        summary.trace_mean, summary.trace_stderr = _mean_stderr(tr)
    if "alpha_beta_xi" in config.measures:
        summary.alpha_mean, summary.alpha_stderr = _mean_stderr([r.alpha_u for r in kept])
        summary.beta_mean, summary.beta_stderr = _mean_stderr([r.beta_u for r in kept])
        summary.xi_trace_mean, summary.xi_trace_stderr = _mean_stderr(
            [r.xi_trace_norm for r in kept]
        )
        w_mean = np.tensordot(s_vals, states, axes=1) / s_vals.sum()
        violations = 0
        for r in kept:
            _, _, ok = master_inequality_check(
                r, summary.alpha_mean, summary.beta_mean, w_mean
            )
            violations += 0 if ok else 1
        summary.master_violations = violations
    return summary


def _jackknife_mean_purity(states: np.ndarray, mean_state: np.ndarray):
    """Mean-state purity: plugin value, unbiased estimate, jackknife stderr.

    The plugin tr(rho_bar_sample^2) overshoots the population value by
    roughly (E tr rho_U^2 - tr rho_bar^2)/n, which dominates the standard
    error for spread ensembles; the pairwise (U-statistic) estimator
    mean_{i != j} tr(rho_i rho_j) removes that bias.  The stderr is the
    jackknife over the unbiased estimator.
    """
    n = states.shape[0]
    plugin = float(np.trace(mean_state @ mean_state).real)
    if n == 1:
        return plugin, plugin, 0.0
    cross = np.einsum("mij,ji->m", states, mean_state).real  # tr(rho_i rho_bar)
    self_p = np.einsum("mij,mji->m", states, states).real
    pair_sum = n * n * plugin - float(self_p.sum())  # sum_{i != j} tr(rho_i rho_j)
    unbiased = pair_sum / (n * (n - 1))
    loo = (pair_sum - 2 * (n * cross - self_p)) / ((n - 1) * (n - 2)) if n > 2 else (
        np.full(n, unbiased))
    theta = loo.mean()
    stderr = math.sqrt((n - 1) / n * float(np.sum((loo - theta) ** 2)))
    return plugin, unbiased, stderr


def post_error_layer_rom(
    n_qubits: int, channel: ChannelSpec, n_samples: int, master_seed: int
):
    """Mean full-system robustness right after the error layer, before any
    decoding or measurement.

    Heavy at N = 4 (one dense LP over 36720 columns per sample); capacity
    error beyond that.
    """
    if n_qubits > 4:
        raise CapacityError("post-error-layer ROM supports N <= 4")
    table = get_table(n_qubits)
    kraus = channel.build()
    values = []
    for i in range(n_samples):
        seed = derive_seed(master_seed, i)
        u = encoder_unitary(sample_encoder(n_qubits, seed))
        psi = u[:, 0]
        rho = ch.apply_local(kraus, np.outer(psi, psi.conj()), range(n_qubits))
        values.append(rom_exact(rho, table).value)
    mean, stderr = _mean_stderr(values)
    return mean, stderr, values


def no_click_distill(p: float):
    """Bell pair + no-click damping branch + X measurement with correction.

    Returns (single-qubit pure state vector, no-click probability).  Both
    measurement outcomes give the same state after the conditional Z, and
    the no-click probability is 1 - p/2.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} must lie in [0, 1]")
    bell = np.zeros(4, dtype=complex)
    bell[0] = bell[3] = 2**-0.5  # H then CNOT on |00>
    rho = np.outer(bell, bell.conj())
    branch = ch.selective_apply(ch.amplitude_damping(p), rho, [0], [0])
    prob = float(np.trace(branch).real)
    cond = branch / prob

    plus = np.array([1, 1], dtype=complex) / np.sqrt(2)
    minus = np.array([1, -1], dtype=complex) / np.sqrt(2)
    z = np.array([[1, 0], [0, -1]], dtype=complex)
    outcomes = []
    for vec, correct in ((plus, False), (minus, True)):
        proj = np.kron(np.outer(vec, vec.conj()), np.eye(2))
        post = proj @ cond @ proj
        w = np.trace(post).real
        # reduced ancilla state after measuring the system qubit
        red = post.reshape(2, 2, 2, 2)
        anc = np.einsum("iaib->ab", red) / w
        if correct:
            anc = z @ anc @ z
        outcomes.append(anc)
    if np.max(np.abs(outcomes[0] - outcomes[1])) > 1e-12:
        raise QsimError("measurement branches disagree after correction")
    evals, evecs = np.linalg.eigh(outcomes[0])
    state = evecs[:, -1]
    nz = np.nonzero(np.abs(state) > 1e-12)[0][0]
    state = state * (abs(state[nz]) / state[nz])
    return state, prob
