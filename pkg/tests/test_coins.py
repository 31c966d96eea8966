"""Coin constructors: exact entries, unitarity, and algebraic identities."""

import numpy as np
import pytest

from qwcarbon.coins import (
    COIN_NAMES,
    CoinOperator,
    coin_by_name,
    fourier,
    grover,
    hadamard,
    hadamard_symmetric,
    identity,
    tensor,
)

S2 = 1.0 / np.sqrt(2.0)


def unitarity_defect(c: CoinOperator) -> float:
    return float(np.max(np.abs(c.entries.conj().T @ c.entries - np.eye(c.dim))))


def test_hadamard_entries():
    H = hadamard()
    assert np.allclose(H.entries, np.array([[S2, S2], [S2, -S2]]), atol=1e-15)
    assert np.allclose(H.entries @ H.entries, np.eye(2), atol=1e-15)


def test_hadamard_symmetric_entries():
    Hi = hadamard_symmetric()
    assert np.allclose(Hi.entries, np.array([[S2, 1j * S2], [1j * S2, S2]]), atol=1e-15)
    # same magnitudes as H: the pi phase is just redistributed
    assert np.allclose(np.abs(Hi.entries), np.abs(hadamard().entries), atol=1e-15)


def test_hadamard_symmetric_fourth_power():
    Hi = hadamard_symmetric().entries
    assert np.allclose(np.linalg.matrix_power(Hi, 4), -np.eye(2), atol=1e-14)


def test_grover_three():
    G3 = grover(3)
    assert np.allclose(
        G3.entries, np.array([[-1, 2, 2], [2, -1, 2], [2, 2, -1]]) / 3.0, atol=1e-15
    )


def test_grover_two_is_pauli_x():
    assert np.allclose(grover(2).entries, np.array([[0, 1], [1, 0]]), atol=1e-15)


@pytest.mark.parametrize("d", range(2, 17))
def test_grover_symmetric_unitary_fixes_uniform(d):
    G = grover(d)
    assert unitarity_defect(G) < 1e-12
    assert np.allclose(G.entries, G.entries.T, atol=1e-15)
    u = np.ones(d) / np.sqrt(d)
    assert np.allclose(G.entries @ u, u, atol=1e-13)


def test_fourier_two_is_hadamard():
    assert np.allclose(fourier(2).entries, hadamard().entries, atol=1e-14)


@pytest.mark.parametrize("d", range(2, 17))
def test_fourier_unbiased_orthonormal(d):
    F = fourier(d)
    assert unitarity_defect(F) < 1e-12
    assert np.allclose(np.abs(F.entries), 1.0 / np.sqrt(d), atol=1e-13)
    e0 = np.zeros(d)
    e0[0] = 1.0
    assert np.allclose(F.entries @ e0, np.ones(d) / np.sqrt(d), atol=1e-13)


def test_tensor_dimensions_and_identity():
    assert tensor(hadamard(), hadamard()).dim == 4
    I2 = identity(2)
    assert np.allclose(tensor(I2, I2).entries, np.eye(4), atol=1e-15)


def test_tensor_matches_kronecker_oracle():
    a, b = grover(2), grover(2)
    expected = np.kron(a.entries, b.entries)
    got = tensor(a, b).entries
    assert np.allclose(got, expected, atol=1e-15)
    assert set(np.round(got.real.reshape(-1), 12)) == {0.0, 1.0}


def test_named_coins_all_unitary():
    for name in COIN_NAMES:
        assert unitarity_defect(coin_by_name(name)) < 1e-12


def test_invalid_parameters():
    with pytest.raises(ValueError):
        grover(1)
    with pytest.raises(ValueError):
        fourier(1)
    with pytest.raises(ValueError):
        coin_by_name("G17")
