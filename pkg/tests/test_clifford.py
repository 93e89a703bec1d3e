import numpy as np
import pytest

from noisymagic.clifford import (
    CLIFFORD_WORDS,
    EncoderSpec,
    encoder_unitary,
    embed_two_qubit,
    is_stabilizer_state,
    pauli_conjugation_residue,
    sample_encoder,
    single_qubit_clifford,
    xx_rotation,
)
from noisymagic.qstate import CapacityError, DimensionError, pauli_matrix
from noisymagic.seeding import derive_seed


def canon(u):
    for z in u.flatten():
        if abs(z) > 1e-10:
            return u * (abs(z) / z)
    raise AssertionError("zero matrix")


def test_clifford_word_list_is_frozen():
    assert len(CLIFFORD_WORDS) == 24
    assert CLIFFORD_WORDS[0] == ""
    assert CLIFFORD_WORDS[1] == "H"


def test_single_qubit_cliffords_distinct_and_closed():
    mats = [canon(single_qubit_clifford(i)) for i in range(24)]

    def find(u):
        cu = canon(u)
        return [i for i, m in enumerate(mats) if np.allclose(m, cu, atol=1e-9)]

    for i, a in enumerate(mats):
        assert find(a) == [i]
    for a in mats:
        for b in mats:
            assert len(find(a @ b)) == 1


def test_hadamard_element():
    h = single_qubit_clifford(1)
    assert np.allclose(h @ pauli_matrix("X") @ h.conj().T, pauli_matrix("Z"))


def test_clifford_index_range():
    with pytest.raises(ValueError):
        single_qubit_clifford(24)
    with pytest.raises(ValueError):
        single_qubit_clifford(-1)


# ---------------------------------------------------------------- XX rotation

def test_xx_rotation_unitary_and_square():
    u = xx_rotation()
    assert np.max(np.abs(u @ u.conj().T - np.eye(4))) < 1e-14
    assert np.allclose(u @ u, -1j * pauli_matrix("XX"), atol=1e-14)


def test_xx_rotation_is_clifford():
    assert pauli_conjugation_residue(xx_rotation()) < 1e-12


def test_xx_rotation_conjugation_signs():
    u = xx_rotation()
    ud = u.conj().T
    assert np.allclose(u @ pauli_matrix("ZI") @ ud, -pauli_matrix("YX"), atol=1e-14)
    assert np.allclose(u @ pauli_matrix("IZ") @ ud, -pauli_matrix("XY"), atol=1e-14)
    assert np.allclose(u @ pauli_matrix("XI") @ ud, pauli_matrix("XI"), atol=1e-14)


def test_embed_two_qubit_positions():
    g = xx_rotation()
    assert np.allclose(embed_two_qubit(g, 0, 1, 3), np.kron(g, np.eye(2)))
    swap = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex)
    assert np.allclose(embed_two_qubit(g, 1, 0, 2), swap @ g @ swap)
    with pytest.raises(DimensionError):
        embed_two_qubit(g, 0, 0, 2)


# ---------------------------------------------------------------- encoders

def test_sample_encoder_structure():
    spec = sample_encoder(4, 99)
    assert spec.depth == 16 and len(spec.layers) == 16
    for i, (kind, data) in enumerate(spec.layers):
        if i % 2 == 0:
            assert kind == "sq" and len(data) == 4
            assert all(0 <= c < 24 for c in data)
        else:
            assert kind == "xx" and len(data) == 2
            flat = [q for pair in data for q in pair]
            assert sorted(flat) == [0, 1, 2, 3]  # perfect matching


def test_sample_encoder_odd_n_leaves_idle_qubit():
    spec = sample_encoder(3, 5)
    assert spec.depth == 12
    for i, (kind, data) in enumerate(spec.layers):
        if i % 2 == 1:
            assert len(data) == 1
            a, b = data[0]
            assert a != b


def test_encoder_determinism_and_roundtrip():
    a = sample_encoder(4, 123)
    b = sample_encoder(4, 123)
    assert a.to_json() == b.to_json()
    assert EncoderSpec.from_json(a.to_json()) == a
    assert sample_encoder(4, 124).to_json() != a.to_json()


def test_encoder_capacity_and_small_n():
    with pytest.raises(CapacityError):
        sample_encoder(7, 0)
    with pytest.raises(DimensionError):
        sample_encoder(1, 0)


def test_depth_zero_spec_gives_identity():
    spec = EncoderSpec(2, 0, (), 0)
    assert np.allclose(encoder_unitary(spec), np.eye(4))


@pytest.mark.parametrize("n", [2, 3, 4])
def test_encoder_unitarity_and_stabilizer_output(n):
    u = encoder_unitary(sample_encoder(n, 7 * n + 1))
    assert np.max(np.abs(u @ u.conj().T - np.eye(2**n))) < 1e-10
    assert is_stabilizer_state(u[:, 0])


def test_encoder_clifford_invariance_harness():
    # 50 random encoders at N=2 and N=3: U P U^dag stays a signed Pauli
    for n, count in ((2, 50), (3, 50)):
        worst = 0.0
        for i in range(count):
            u = encoder_unitary(sample_encoder(n, derive_seed(555, n * 1000 + i)))
            worst = max(worst, pauli_conjugation_residue(u))
        assert worst < 1e-9


def test_encoder_output_pauli_signature():
    # U|00> has exactly 4 unit-magnitude Pauli expectations and 12 zeros
    from noisymagic.qstate import batched_pauli_expectations

    u = encoder_unitary(sample_encoder(2, 31))
    psi = u[:, 0]
    e = batched_pauli_expectations(np.outer(psi, psi.conj())[np.newaxis], 2)[0]
    assert np.sum(np.abs(np.abs(e) - 1) < 1e-8) == 4
    assert np.sum(np.abs(e) < 1e-8) == 12


# ---------------------------------------------------------------- recognizer

def test_is_stabilizer_state_basics(table2):
    assert is_stabilizer_state(np.array([1, 0, 0, 0], dtype=complex))
    h = np.array([1, np.exp(1j * np.pi / 4)]) / np.sqrt(2)
    assert not is_stabilizer_state(h)
    for i in range(0, 60, 5):
        assert is_stabilizer_state(table2.states[i])
    with pytest.raises(Exception):
        is_stabilizer_state(np.array([1.0, 1.0]))
