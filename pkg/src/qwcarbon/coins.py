"""Coin operators for the walk: Hadamard variants, Grover and Fourier
families, and tensor products.  All constructors return verified unitaries."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CoinOperator",
    "hadamard",
    "hadamard_symmetric",
    "grover",
    "fourier",
    "identity",
    "tensor",
    "coin_by_name",
    "COIN_NAMES",
]

UNITARITY_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """A c-dimensional unitary acting on the coin degrees of freedom."""

    dim: int
    entries: np.ndarray

    def __matmul__(self, other: "CoinOperator") -> "CoinOperator":
        return _coin(self.entries @ other.entries)


def _coin(entries: np.ndarray) -> CoinOperator:
    entries = np.asarray(entries, dtype=np.complex128)
    d = entries.shape[0]
    if entries.shape != (d, d):
        raise ValueError("coin must be square")
    dev = np.max(np.abs(entries.conj().T @ entries - np.eye(d)))
    if dev > UNITARITY_TOL:
        raise ValueError(f"coin is not unitary (deviation {dev:.2e})")
    entries.setflags(write=False)
    return CoinOperator(dim=d, entries=entries)


def hadamard() -> CoinOperator:
    """The 2x2 Hadamard coin, entries +-1/sqrt(2)."""
    return _coin(np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0))


def hadamard_symmetric() -> CoinOperator:
    """Symmetric Hadamard variant: 1/sqrt(2) on the diagonal, i/sqrt(2) off it."""
    return _coin(np.array([[1.0, 1.0j], [1.0j, 1.0]]) / np.sqrt(2.0))


def grover(d: int) -> CoinOperator:
    """Grover coin G_d: (2-d)/d on the diagonal, 2/d elsewhere.

    The reflection about the uniform coin vector; the most symmetric unitary
    choice.  G_2 reduces to the Pauli sigma_x.
    """
    if d < 2:
        raise ValueError(f"Grover coin needs dimension >= 2, got {d}")
    return _coin(np.full((d, d), 2.0 / d) - np.eye(d))


def fourier(d: int) -> CoinOperator:
    """Fourier coin F_d: entry (j, k) = omega^(j*k)/sqrt(d), omega = e^(2*pi*i/d).

    Unbiased in magnitude for every direction; F_2 reduces to the Hadamard.
    """
    if d < 2:
        raise ValueError(f"Fourier coin needs dimension >= 2, got {d}")
    j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
    return _coin(np.exp(2.0j * np.pi * j * k / d) / np.sqrt(d))


def identity(d: int) -> CoinOperator:
    if d < 1:
        raise ValueError(f"identity coin needs dimension >= 1, got {d}")
    return _coin(np.eye(d))


def tensor(a: CoinOperator, b: CoinOperator) -> CoinOperator:
    """Kronecker product of two coins."""
    return _coin(np.kron(a.entries, b.entries))


_REGISTRY = {
    "H": hadamard,
    "Hi": hadamard_symmetric,
    "G3": lambda: grover(3),
    "G4": lambda: grover(4),
    "F3": lambda: fourier(3),
    "F4": lambda: fourier(4),
    "HxH": lambda: tensor(hadamard(), hadamard()),
}

COIN_NAMES = tuple(_REGISTRY)


def coin_by_name(name: str) -> CoinOperator:
    """Coin selection by the CLI/config names: H, Hi, G3, G4, F3, F4, HxH."""
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise ValueError(
            f"unknown coin {name!r}; available: {', '.join(COIN_NAMES)}"
        ) from None
