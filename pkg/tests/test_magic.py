import numpy as np
import pytest

from noisymagic.channels import amplitude_damping, depolarizing_global
from noisymagic.clifford import single_qubit_clifford
from noisymagic.magic import (
    LpProblem,
    build_lp_problem,
    rom_column_generation,
    rom_exact,
    rom_single_qubit_oracle,
    sre,
    sre_depolarizing_analytic,
    witness_w2,
    write_lp,
)
from noisymagic.qstate import (
    DensityMatrix,
    DimensionError,
    QsimError,
    random_density_matrix,
)

SQ2 = np.sqrt(2)
SRE_H = 0.2876820724517809  # -ln(3/4)


# ---------------------------------------------------------------- exact ROM

def test_rom_stabilizer_states_are_one(table2):
    for i in range(0, 60, 9):
        rho = DensityMatrix.from_state_vector(table2.states[i])
        res = rom_exact(rho, table2)
        assert abs(res.value - 1.0) < 1e-9
        assert res.status == "optimal"


def test_rom_maximally_mixed(table1, table2):
    assert abs(rom_exact(DensityMatrix.maximally_mixed(1), table1).value - 1.0) < 1e-9
    assert abs(rom_exact(DensityMatrix.maximally_mixed(2), table2).value - 1.0) < 1e-9


def test_rom_h_state(table1, h_state):
    res = rom_exact(h_state, table1)
    assert abs(res.value - SQ2) < 1e-9


def test_rom_result_invariants(table1, h_state):
    res = rom_exact(h_state, table1)
    weights = [w for _, w in res.decomposition]
    assert abs(sum(weights) - 1.0) < 1e-8
    assert abs(sum(abs(w) for w in weights) - res.value) < 1e-8
    assert res.residual <= 1e-7
    rebuilt = sum(
        w * np.outer(table1.states[i], table1.states[i].conj())
        for i, w in res.decomposition
    )
    assert np.max(np.abs(rebuilt - h_state.mat)) < 1e-7
    assert res.value >= 1.0 - 1e-9


def test_rom_oracle_equivalence(table1, rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density_matrix(1, rng)
        worst = max(worst, abs(rom_exact(rho, table1).value - rom_single_qubit_oracle(rho)))
    assert worst < 1e-7


def test_oracle_examples(h_state):
    zero = DensityMatrix.from_state_vector([1, 0])
    assert rom_single_qubit_oracle(zero) == 1.0
    assert abs(rom_single_qubit_oracle(h_state) - SQ2) < 1e-12
    plus = DensityMatrix.from_state_vector(np.array([1, 1]) / SQ2)
    noisy = DensityMatrix(amplitude_damping(0.75).apply(plus))
    assert abs(rom_single_qubit_oracle(noisy) - 1.25) < 1e-12


def test_oracle_rejects_multiqubit(rng):
    with pytest.raises(DimensionError):
        rom_single_qubit_oracle(random_density_matrix(2, rng))


def test_rom_table_dimension_guard(table1, rng):
    with pytest.raises(DimensionError):
        rom_exact(random_density_matrix(2, rng), table1)


# ---------------------------------------------------------------- column generation

def test_colgen_matches_exact_n2(table2, rng):
    worst = 0.0
    for _ in range(40):
        rho = random_density_matrix(2, rng)
        worst = max(worst, abs(
            rom_column_generation(rho, table2).value - rom_exact(rho, table2).value))
    assert worst < 1e-6


def test_colgen_matches_oracle_n1(table1, rng):
    worst = 0.0
    for _ in range(200):
        rho = random_density_matrix(1, rng)
        worst = max(worst, abs(
            rom_column_generation(rho, table1).value - rom_single_qubit_oracle(rho)))
    assert worst < 1e-7


def test_colgen_stabilizer_converges_immediately(table2):
    rho = DensityMatrix.from_state_vector(table2.states[13])
    res = rom_column_generation(rho, table2)
    assert abs(res.value - 1.0) < 1e-9
    assert res.status == "optimal"


def test_colgen_streaming_backend(table2, rng):
    rho = random_density_matrix(2, rng)
    res = rom_column_generation(rho, table=None)
    assert abs(res.value - rom_exact(rho, table2).value) < 1e-6
    rebuilt = sum(
        w * np.outer(res.support_states[j], res.support_states[j].conj())
        for j, (_, w) in enumerate(res.decomposition)
    )
    assert np.max(np.abs(rebuilt - rho.mat)) < 1e-7


def test_colgen_capacity_guard(rng):
    with pytest.raises(QsimError):
        rom_column_generation(random_density_matrix(6, rng), table=None)


# ---------------------------------------------------------------- ROM properties

def test_rom_clifford_invariance(table1, h_state, rng):
    base = rom_exact(h_state, table1).value
    for idx in rng.integers(0, 24, size=8):
        u = single_qubit_clifford(int(idx))
        rot = DensityMatrix(u @ h_state.mat @ u.conj().T)
        assert abs(rom_exact(rot, table1).value - base) < 1e-6


def test_rom_and_sre_two_qubit_clifford_invariance(table2, rng):
    from noisymagic.clifford import encoder_unitary, sample_encoder

    rho = random_density_matrix(2, rng)
    base_rom = rom_exact(rho, table2).value
    base_sre = sre(rho, 2.0)
    for seed in (3, 17, 99):
        u = encoder_unitary(sample_encoder(2, seed))
        rot = DensityMatrix(u @ rho.mat @ u.conj().T)
        assert abs(rom_exact(rot, table2).value - base_rom) < 1e-6
        assert abs(sre(rot, 2.0) - base_sre) < 1e-10


def test_rom_convexity(table1, rng):
    for _ in range(10):
        a = random_density_matrix(1, rng)
        b = random_density_matrix(1, rng)
        lam = rng.uniform(0.1, 0.9)
        mix = DensityMatrix(lam * a.mat + (1 - lam) * b.mat)
        ra, rb = rom_exact(a, table1).value, rom_exact(b, table1).value
        assert rom_exact(mix, table1).value <= lam * ra + (1 - lam) * rb + 1e-6


def test_depolarizing_rom_bound(table1, h_state):
    base = rom_exact(h_state, table1).value
    for p in np.linspace(0, 1, 11):
        noisy = DensityMatrix(depolarizing_global(float(p), 1).apply(h_state))
        val = rom_exact(noisy, table1).value
        assert val <= (1 - p) * base + p + 1e-6


def test_depolarizing_generates_no_magic_n1(table1):
    # exhaustive over the 6 single-qubit stabilizer states and a p grid
    for i in range(6):
        rho = DensityMatrix.from_state_vector(table1.states[i])
        for p in np.linspace(0, 1, 21):
            noisy = DensityMatrix(depolarizing_global(float(p), 1).apply(rho))
            assert abs(rom_exact(noisy, table1).value - 1.0) < 1e-7


def test_rom_faithfulness(table1, rng):
    # value 1 iff the optimal decomposition is a true convex mixture
    inside = DensityMatrix(0.5 * np.outer([1, 0], [1, 0]) + 0.25 * np.eye(2))
    res = rom_exact(inside, table1)
    assert abs(res.value - 1.0) < 1e-7
    assert all(w >= -1e-9 for _, w in res.decomposition)
    h = DensityMatrix.from_state_vector(np.array([1, np.exp(1j * np.pi / 4)]) / SQ2)
    res_h = rom_exact(h, table1)
    assert res_h.value > 1 + 1e-6
    assert any(w < -1e-9 for _, w in res_h.decomposition)


# ---------------------------------------------------------------- SRE and witness

def test_sre_examples(table2, h_state):
    assert abs(sre(h_state, 2.0) - SRE_H) < 1e-12
    for i in (0, 21, 44):
        rho = DensityMatrix.from_state_vector(table2.states[i])
        assert abs(sre(rho, 2.0)) < 1e-10
    # purity-normalized form vanishes on the maximally mixed state
    for n in (1, 2, 3):
        assert abs(sre(DensityMatrix.maximally_mixed(n), 2.0)) < 1e-10


def test_sre_clifford_invariance(h_state, rng):
    base = sre(h_state, 2.0)
    for idx in rng.integers(0, 24, size=8):
        u = single_qubit_clifford(int(idx))
        rot = DensityMatrix(u @ h_state.mat @ u.conj().T)
        assert abs(sre(rot, 2.0) - base) < 1e-10


def test_sre_alpha_one_rejected(h_state):
    with pytest.raises(ValueError):
        sre(h_state, 1.0)


def test_witness_examples(h_state):
    zero = DensityMatrix.from_state_vector([1, 0])
    assert abs(witness_w2(zero)) < 1e-10
    assert abs(witness_w2(h_state) - SRE_H) < 1e-12
    val = witness_w2(DensityMatrix.maximally_mixed(1))
    assert abs(val - (-2 * np.log(2))) < 1e-12


def test_depolarizing_sre_analytic():
    assert sre_depolarizing_analytic(0.0, 3) == 0.0
    assert abs(sre_depolarizing_analytic(1.0, 3)) < 1e-15
    expect = -np.log(1.0625 / 1.25)
    assert abs(sre_depolarizing_analytic(0.5, 1) - expect) < 1e-12


def test_depolarizing_sre_matches_numeric(table2):
    for n, table in ((1, None), (2, table2)):
        states = table.states if table is not None else np.eye(2, dtype=complex)
        for p in np.linspace(0, 1, 11):
            chan = depolarizing_global(float(p), n)
            for i in (0, len(states) - 1):
                rho = chan.apply(np.outer(states[i], states[i].conj()))
                assert abs(sre(rho, 2.0) - sre_depolarizing_analytic(float(p), n)) < 1e-10


# ---------------------------------------------------------------- LP plumbing

def test_lp_problem_identity_guard(table1, h_state):
    problem = build_lp_problem(h_state, table1)
    assert abs(problem.rhs[0] - 1.0) < 1e-10
    with pytest.raises(QsimError):
        LpProblem(table1.pauli_columns, np.array([0.5, 0, 0, 0]))


def test_write_lp_format(tmp_path, table1, h_state):
    problem = build_lp_problem(h_state, table1)
    path = tmp_path / "rom.lp"
    write_lp(problem, path)
    text = path.read_text()
    assert text.startswith("\\ robustness")
    assert "Minimize" in text and "Subject To" in text and text.rstrip().endswith("End")
    assert "xp0" in text and "xm0" in text
    assert f"c0:" in text
