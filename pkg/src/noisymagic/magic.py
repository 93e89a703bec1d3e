"""Nonstabilizerness measures: exact LP robustness, column generation,
the single-qubit closed form, stabilizer Renyi entropy and the W2 witness.

The robustness LP lives in the real Pauli-expectation basis: a state is
feasible iff its 4^N expectation vector is a signed combination of the
integer stabilizer columns, and the minimal total weight of signs is the
robustness.  Solves go through the HiGHS dual simplex, which returns exact
vertex solutions and equality duals for the pricing step.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .qstate import (
    DimensionError,
    QsimError,
    _as_matrix,
    _n_qubits_of,
    pauli_expectations,
)
from .stabilizers import (
    StabilizerTable,
    iter_stabilizer_state_blocks,
    pauli_expectation_columns,
    product_stabilizer_states,
)

LP_OPTIONS = {
    "primal_feasibility_tolerance": 1e-10,
    "dual_feasibility_tolerance": 1e-10,
}
PRICING_TOL = 1e-9
WEIGHT_PRUNE = 1e-12


@dataclass(frozen=True)
class LpProblem:
    """Equality-form robustness LP: columns are signed stabilizer rows."""

    columns: np.ndarray  # (M, 4^N) int8
    rhs: np.ndarray  # (4^N,) float

    def __post_init__(self):
        if self.rhs[0] != 1.0 and abs(self.rhs[0] - 1.0) > 1e-10:
            raise QsimError("rhs entry at the identity Pauli must be 1")


@dataclass(frozen=True)
class RomResult:
    """Robustness value with its optimal signed decomposition.

    decomposition holds (stabilizer index, weight) pairs; indices refer to
    the backing StabilizerTable when one was supplied, otherwise they index
    support_states.  status is "optimal" or "tolerance-limited".
    """

    value: float
    decomposition: tuple
    status: str
    residual: float
    support_states: np.ndarray | None = field(default=None, repr=False)


def build_lp_problem(rho, table: StabilizerTable) -> LpProblem:
    mat = _as_matrix(rho)
    n = _n_qubits_of(mat)
    if table.n_qubits != n:
        raise DimensionError(
            f"table is for N={table.n_qubits}, state has N={n}"
        )
    return LpProblem(table.pauli_columns, pauli_expectations(mat))


def _solve_rom_lp(columns: np.ndarray, rhs: np.ndarray):
    """Solve min sum(x+ + x-) s.t. C^T (x+ - x-) = rhs, x >= 0.

    Returns (value, weights, duals, status, residual).
    """
    m = columns.shape[0]
    ct = sparse.csc_matrix(columns.T.astype(np.float64))
    a_eq = sparse.hstack([ct, -ct], format="csc")
    res = linprog(
        np.ones(2 * m),
        A_eq=a_eq,
        b_eq=rhs,
        bounds=(0, None),
        method="highs-ds",
        options=LP_OPTIONS,
    )
    if res.status == 2:
        # stabilizer columns span operator space, so this cannot legitimately occur
        raise QsimError("robustness LP reported infeasible for a valid state")
    status = "optimal" if res.status == 0 else "tolerance-limited"
    x = res.x if res.x is not None else np.zeros(2 * m)
    weights = x[:m] - x[m:]
    value = float(np.sum(np.abs(weights)))
    duals = res.eqlin.marginals if res.eqlin is not None else np.zeros_like(rhs)
    residual = float(np.max(np.abs(columns.T.astype(np.float64) @ weights - rhs)))
    return value, weights, np.asarray(duals, dtype=float), status, residual


def _make_result(value, weights, status, residual, indices, states) -> RomResult:
    keep = np.nonzero(np.abs(weights) > WEIGHT_PRUNE)[0]
    support = states[keep] if states is not None else None
    if indices is None:
        decomposition = tuple((j, float(weights[i])) for j, i in enumerate(keep))
    else:
        decomposition = tuple((int(indices[i]), float(weights[i])) for i in keep)
    return RomResult(value, decomposition, status, residual, support)


def rom_exact(rho, table: StabilizerTable) -> RomResult:
    """Exact robustness of magic via the dense LP over all table columns."""
    problem = build_lp_problem(rho, table)
    value, weights, _, status, residual = _solve_rom_lp(problem.columns, problem.rhs)
    return _make_result(
        value, weights, status, residual, np.arange(len(weights)), table.states
    )


def rom_single_qubit_oracle(rho) -> float:
    """Closed-form single-qubit robustness max(1, |rx| + |ry| + |rz|).

    The single-qubit stabilizer polytope is the Bloch octahedron, whose
    l1 gauge is the coordinate sum; used as an independent check on the LP.
    """
    mat = _as_matrix(rho)
    if _n_qubits_of(mat) != 1:
        raise DimensionError("oracle is defined for single-qubit states")
    e = pauli_expectations(mat)
    return max(1.0, float(np.sum(np.abs(e[1:]))))


def _product_warm_start(n: int, table: StabilizerTable | None):
    states = product_stabilizer_states(n)
    cols = pauli_expectation_columns(states, n)
    if table is None:
        return states, cols, -np.ones(len(states), dtype=np.int64)
    lut = {table.pauli_columns[i].tobytes(): i for i in range(table.pauli_columns.shape[0])}
    idx = np.array([lut[cols[i].tobytes()] for i in range(cols.shape[0])], dtype=np.int64)
    return table.states[idx], table.pauli_columns[idx], idx


def _price_violators(duals, table, table_cols_f, n, working, batch, pricing_tol):
    """Best stabilizer columns violating dual feasibility, minus the working set.

    Returns (max_score, states, cols, ids); ids are table indices with the
    table backend and enumeration-order positions with the streaming one.
    """
    if table is not None:
        scores = np.abs(table_cols_f @ duals)
        sigma = float(scores.max())
        violators = np.nonzero(scores > 1.0 + pricing_tol)[0]
        order = violators[np.argsort(scores[violators])[::-1]]
        picked = [int(i) for i in order if int(i) not in working][:batch]
        if not picked:
            return sigma, None, None, None
        return sigma, table.states[picked], table.pauli_columns[picked], np.asarray(
            picked, dtype=np.int64
        )
    sigma = 0.0
    best = []
    for start, block in iter_stabilizer_state_blocks(n):
        bcols = pauli_expectation_columns(block, n)
        scores = np.abs(bcols.astype(np.float64) @ duals)
        sigma = max(sigma, float(scores.max()))
        for i in np.nonzero(scores > 1.0 + pricing_tol)[0]:
            if start + int(i) not in working:
                best.append((float(scores[i]), start + int(i), block[i], bcols[i]))
        best.sort(key=lambda item: -item[0])
        best = best[:batch]
    if not best:
        return sigma, None, None, None
    states = np.stack([b[2] for b in best])
    cols = np.stack([b[3] for b in best])
    ids = np.array([b[1] for b in best], dtype=np.int64)
    return sigma, states, cols, ids


def rom_column_generation(
    rho,
    table: StabilizerTable | None = None,
    n_qubits: int | None = None,
    max_rounds: int = 200,
    batch: int = 1024,
    pricing_tol: float = PRICING_TOL,
    gap_tol: float = 1e-8,
    stable_stop: int | None = 6,
) -> RomResult:
    """Robustness via restricted LPs with dual pricing over stabilizer columns.

    Starts from the product-state (octahedron-vertex) columns, which span
    operator space, then repeatedly adds stabilizer states whose column has
    |dual inner product| > 1.  Termination, in order of preference:
      * no violators at all -> certified optimum, status "optimal";
      * weak-duality gap (restricted value minus y.rhs / max score) below
        gap_tol -> certified to that gap, status "optimal";
      * value unchanged for stable_stop consecutive rounds -> heuristic
        stop, status "tolerance-limited" (highly degenerate instances keep
        producing violators long after the value has converged; pass
        stable_stop=None to insist on certification);
      * max_rounds exhausted -> status "tolerance-limited".
    With a table the pricing scan is one mat-vec; without one (N = 5) the
    enumeration streams in blocks.
    """
    mat = _as_matrix(rho)
    n = _n_qubits_of(mat)
    if table is not None and table.n_qubits != n:
        raise DimensionError("table dimension mismatch")
    if table is None and n > 5:
        raise QsimError("column generation without a table supports N <= 5")
    if n_qubits is not None and n_qubits != n:
        raise DimensionError("n_qubits does not match the state")
    rhs = pauli_expectations(mat)

    states, cols, ids = _product_warm_start(n, table)
    if table is None:
        # tag warm-start columns with negative surrogates; renumbered at the end
        ids = -np.arange(1, len(states) + 1, dtype=np.int64)
    table_cols_f = table.pauli_columns.astype(np.float64) if table is not None else None

    best_lb = -math.inf
    last_value = math.inf
    stall = 0
    converged = False
    for _ in range(max_rounds):
        value, weights, duals, lp_status, residual = _solve_rom_lp(cols, rhs)
        working = set(int(i) for i in ids)
        sigma, new_states, new_cols, new_ids = _price_violators(
            duals, table, table_cols_f, n, working, batch, pricing_tol
        )
        best_lb = max(best_lb, float(duals @ rhs) / max(sigma, 1.0))
        if new_cols is None or value - best_lb < gap_tol:
            converged = lp_status == "optimal"
            break
        if value > last_value - 1e-9:
            stall += 1
            if stable_stop is not None and stall >= stable_stop:
                break
        else:
            stall = 0
        last_value = value
        states = np.concatenate([states, new_states])
        cols = np.concatenate([cols, new_cols])
        ids = np.concatenate([ids, new_ids])
    else:
        value, weights, duals, lp_status, residual = _solve_rom_lp(cols, rhs)

    status = "optimal" if converged else "tolerance-limited"
    return _make_result(
        value, weights, status, residual, ids if table is not None else None, states
    )


def sre(rho, alpha: float = 2.0) -> float:
    """Stabilizer Renyi entropy of order alpha (purity-normalized form).

    (1/(1-alpha)) [ ln( sum_P |tr(rho P)|^(2 alpha) / 2^N ) - ln tr(rho^2) ].
    Zero on pure stabilizer states and on the maximally mixed state.
    """
    if alpha == 1:
        raise ValueError("alpha = 1 is not implemented")
    mat = _as_matrix(rho)
    n = _n_qubits_of(mat)
    e = pauli_expectations(mat)
    moment = float(np.sum(np.abs(e) ** (2.0 * alpha))) / 2**n
    pur = float(np.trace(mat @ mat).real)
    return (math.log(moment) - math.log(pur)) / (1.0 - alpha)


def witness_w2(rho) -> float:
    """Magic witness W2 = M2 - 2 S2; positive certifies magic.

    S2 = -ln tr(rho^2) is the log-purity; a negative witness is inconclusive.
    """
    mat = _as_matrix(rho)
    pur = float(np.trace(mat @ mat).real)
    return sre(mat, 2.0) - 2.0 * (-math.log(pur))


def sre_depolarizing_analytic(p: float, n: int) -> float:
    """Order-2 SRE of a depolarized pure stabilizer state, in closed form.

    -ln[ (1 + (1-p)^4 (2^N - 1)) / (1 + (1-p)^2 (2^N - 1)) ]; vanishes at
    p = 0 and p = 1 and is positive in between, although the robustness of
    the same state stays exactly 1 -- the mismatch that disqualifies the
    SRE as a mixed-state magic measure.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p={p} must lie in [0, 1]")
    d1 = 2**n - 1
    q = 1.0 - p
    return -math.log((1.0 + q**4 * d1) / (1.0 + q**2 * d1))


def write_lp(problem: LpProblem, path) -> None:
    """Dump the robustness LP in CPLEX LP text format for external solvers.

    Intended for debugging small instances; the file grows with M * 4^N.
    """
    cols = problem.columns
    m, r = cols.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\\ robustness-of-magic LP in the Pauli-expectation basis\n")
        fh.write("Minimize\n obj: ")
        fh.write(" + ".join(f"xp{i} + xm{i}" for i in range(m)))
        fh.write("\nSubject To\n")
        for j in range(r):
            terms = []
            for i in np.nonzero(cols[:, j])[0]:
                s = int(cols[i, j])
                sign = "+" if s > 0 else "-"
                terms.append(f"{sign} xp{i} {'-' if s > 0 else '+'} xm{i}")
            row = " ".join(terms) if terms else "0 xp0"
            fh.write(f" c{j}: {row} = {repr(float(problem.rhs[j]))}\n")
        fh.write("Bounds\n")
        fh.write("End\n")
