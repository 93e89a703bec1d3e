import numpy as np
import pytest

from noisymagic.qstate import CapacityError, pauli_expectations
from noisymagic.stabilizers import (
    enumerate_stabilizer_states,
    gaussian_binomial,
    get_table,
    iter_stabilizer_state_blocks,
    load_or_build,
    load_table,
    pauli_expectation_columns,
    product_stabilizer_states,
    save_table,
    stabilizer_count,
)

KNOWN_COUNTS = {1: 6, 2: 60, 3: 1080, 4: 36720}


def test_count_formula():
    for n, count in KNOWN_COUNTS.items():
        assert stabilizer_count(n) == count
    assert stabilizer_count(5) == 2423520


def test_gaussian_binomials():
    assert gaussian_binomial(4, 2) == 35
    assert gaussian_binomial(3, 1) == 7
    assert gaussian_binomial(5, 0) == 1


@pytest.mark.parametrize("n", [1, 2, 3])
def test_enumeration_complete_and_distinct(n):
    table = enumerate_stabilizer_states(n)
    m = table.states.shape[0]
    assert m == KNOWN_COUNTS[n]
    # canonical phase makes byte-level dedupe exact
    assert len({table.states[i].tobytes() for i in range(m)}) == m
    norms = np.linalg.norm(table.states, axis=1)
    assert np.max(np.abs(norms - 1)) < 1e-12
    for row in table.states[:: max(m // 50, 1)]:
        first = row[np.nonzero(np.abs(row) > 1e-12)[0][0]]
        assert abs(first.imag) < 1e-12 and first.real > 0


def test_single_qubit_table_is_octahedron(table1):
    s = 2**-0.5
    expected = {
        (1, 0),
        (0, 1),
        (s, s),
        (s, -s),
        (s, s * 1j),
        (s, -s * 1j),
    }
    got = {tuple(np.round(rows, 12)) for rows in table1.states}
    assert {tuple(r) for r in got} == {tuple(np.round(np.array(e), 12)) for e in expected}


def test_pairwise_overlaps_below_one(table2):
    gram = np.abs(table2.states @ table2.states.conj().T)
    np.fill_diagonal(gram, 0.0)
    assert gram.max() < 1 - 1e-9


def test_pauli_columns_structure(table2):
    cols = table2.pauli_columns
    assert cols.shape == (60, 16)
    assert set(np.unique(cols)) <= {-1, 0, 1}
    assert np.all(np.count_nonzero(cols, axis=1) == 4)
    assert np.all(cols[:, 0] == 1)
    # spot-check against the dense expectation computation
    for i in (0, 17, 59):
        rho = np.outer(table2.states[i], table2.states[i].conj())
        assert np.max(np.abs(pauli_expectations(rho) - cols[i])) < 1e-12


def test_enumeration_capacity_guard():
    with pytest.raises(CapacityError):
        enumerate_stabilizer_states(5)
    with pytest.raises(CapacityError):
        list(iter_stabilizer_state_blocks(6))


def test_streaming_blocks_match_table(table2):
    parts = []
    for start, block in iter_stabilizer_state_blocks(2, max_block=7):
        assert start == sum(p.shape[0] for p in parts)
        parts.append(block)
    streamed = np.concatenate(parts)
    assert streamed.shape == table2.states.shape
    assert np.max(np.abs(streamed - table2.states)) == 0.0


def test_product_states_are_table_members(table2):
    prod = product_stabilizer_states(2)
    assert prod.shape == (36, 4)
    cols = pauli_expectation_columns(prod, 2)
    lut = {table2.pauli_columns[i].tobytes() for i in range(60)}
    assert all(cols[i].tobytes() in lut for i in range(36))


def test_cache_roundtrip(tmp_path, table2):
    path = tmp_path / "table2.cache"
    save_table(table2, path)
    loaded = load_table(path)
    assert np.array_equal(loaded.states, table2.states)
    assert np.array_equal(loaded.pauli_columns, table2.pauli_columns)


def test_cache_regenerated_on_corruption(tmp_path):
    path = tmp_path / "table1.cache"
    table = load_or_build(1, path)
    assert table.states.shape[0] == 6
    path.write_text("garbage\nn_qubits=1,count=5\n", encoding="utf-8")
    rebuilt = load_or_build(1, path)
    assert rebuilt.states.shape[0] == 6
    # the cache file was rewritten with the correct contents
    assert load_table(path).states.shape[0] == 6


def test_get_table_memoized():
    assert get_table(2) is get_table(2)


def test_enumeration_n4_counts():
    table = get_table(4)
    m = table.states.shape[0]
    assert m == 36720
    assert len({table.states[i].tobytes() for i in range(m)}) == m
    assert np.all(np.count_nonzero(table.pauli_columns, axis=1) == 16)
