"""Deterministic random generators shared by the test modules.

Everything is driven by an explicit numpy Generator so any failing case is
reproducible from the seed in the test.
"""

from __future__ import annotations

import numpy as np

from effectdyn import Effect, State, validate_effect, validate_state
from effectdyn.observables import Observable, validate_observable


def random_hermitian(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    return (g + g.conj().T) / 2.0


def random_effect(dim: int, rng: np.random.Generator) -> Effect:
    """Spectrum-uniform effect: random eigenbasis, eigenvalues ~ U[0, 1]."""
    u = random_unitary(dim, rng)
    w = rng.uniform(0.0, 1.0, dim)
    return validate_effect((u * w) @ u.conj().T)


def random_state(dim: int, rng: np.random.Generator) -> State:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    rho = g @ g.conj().T
    return validate_state(rho / np.trace(rho).real)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g)
    return q * (np.diagonal(r) / np.abs(np.diagonal(r)))


def random_projection(dim: int, rank: int, rng: np.random.Generator) -> Effect:
    u = random_unitary(dim, rng)
    cols = u[:, :rank]
    return validate_effect(cols @ cols.conj().T)


def random_commuting_pair(dim: int, rng: np.random.Generator) -> tuple[Effect, Effect]:
    """Two effects sharing a random eigenbasis (so [a, b] = 0 exactly-ish)."""
    u = random_unitary(dim, rng)
    wa = rng.uniform(0.0, 1.0, dim)
    wb = rng.uniform(0.0, 1.0, dim)
    return (
        validate_effect((u * wa) @ u.conj().T),
        validate_effect((u * wb) @ u.conj().T),
    )


def random_scaled_projection(dim: int, rng: np.random.Generator) -> tuple[float, Effect, Effect]:
    """(scale, p, scale*p) with p a random projection of random rank."""
    rank = int(rng.integers(1, dim + 1))
    p = random_projection(dim, rank, rng)
    scale = float(rng.uniform(0.05, 1.0))
    return scale, p, validate_effect(scale * p.matrix)


def random_observable(dim: int, n_outcomes: int, rng: np.random.Generator) -> Observable:
    """Random POVM: normalize positive blocks G_i G_i† by the inverse root of their sum."""
    blocks = []
    for _ in range(n_outcomes):
        g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
        blocks.append(g @ g.conj().T)
    total = np.sum(blocks, axis=0)
    w, v = np.linalg.eigh(total)
    inv_root = (v / np.sqrt(w)) @ v.conj().T
    return validate_observable([inv_root @ blk @ inv_root for blk in blocks])
