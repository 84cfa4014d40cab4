"""Random instance generators for property checks.

All generators take an explicit ``numpy.random.Generator`` so that every
instance is reproducible from a seed.
"""

from __future__ import annotations

import numpy as np

from .numkernel import Subspace


def random_complex(rng: np.random.Generator, *shape) -> np.ndarray:
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def random_unitary(rng: np.random.Generator, n: int) -> np.ndarray:
    Q, R = np.linalg.qr(random_complex(rng, n, n))
    return Q * (np.diag(R) / np.abs(np.diag(R)))


def random_psd(rng: np.random.Generator, n: int, rank: int | None = None,
               low: float = 0.1, high: float = 3.0) -> np.ndarray:
    """PSD matrix with ``rank`` eigenvalues in ``[low, high]`` and exact zeros."""
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    V = random_unitary(rng, n)
    lam = np.zeros(n)
    lam[:rank] = rng.uniform(low, high, rank)
    A = (V * lam) @ V.conj().T
    return (A + A.conj().T) / 2


def random_invertible_psd(rng: np.random.Generator, n: int) -> np.ndarray:
    return random_psd(rng, n, rank=n)


def random_subspace(rng: np.random.Generator, n: int, k: int | None = None) -> Subspace:
    if k is None:
        k = int(rng.integers(0, n + 1))
    if k == 0:
        return Subspace.zero(n)
    Q, _ = np.linalg.qr(random_complex(rng, n, k))
    return Subspace(Q)


def random_matrix(rng: np.random.Generator, m: int, n: int, rank: int | None = None) -> np.ndarray:
    """``m x n`` complex matrix of the given rank (random rank by default)."""
    if rank is None:
        rank = int(rng.integers(0, min(m, n) + 1))
    return random_complex(rng, m, rank) @ random_complex(rng, rank, n) / np.sqrt(max(rank, 1))


def random_degenerate_pair(rng: np.random.Generator, n: int, inside_kernel: bool | None = False):
    """``(A, S)`` with ``N = S & N(A)`` nontrivial (requires ``n >= 2``).

    ``inside_kernel=False`` makes ``S`` stick out of ``N(A)``, ``True`` puts
    ``S`` entirely inside ``N(A)``, ``None`` leaves it to chance.
    """
    rank = int(rng.integers(1, n))
    A = random_psd(rng, n, rank)
    w, V = np.linalg.eigh(A)
    kernel = V[:, : n - rank]
    j = int(rng.integers(1, n - rank + 1))
    if inside_kernel is None:
        extra = int(rng.integers(0, n - j + 1))
    else:
        extra = 0 if inside_kernel else int(rng.integers(1, n - j + 1))
    cols = [kernel @ random_complex(rng, n - rank, j)]
    if extra:
        cols.append(random_complex(rng, n, extra))
    Q, _ = np.linalg.qr(np.hstack(cols))
    return A, Subspace(Q)


def random_s_idempotent(rng: np.random.Generator, S: Subspace, block=None) -> np.ndarray:
    """Idempotent with range ``S``: ``[[1, y], [0, 0]]`` in the ``(S, S^perp)`` frame.

    ``y`` is random unless ``block`` supplies it.
    """
    U = S.basis
    W = S.complement().basis
    y = random_complex(rng, U.shape[1], W.shape[1]) if block is None else block
    return U @ U.conj().T + U @ y @ W.conj().T
