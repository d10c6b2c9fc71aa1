"""Shared generators for random Slater states."""

import numpy as np

from psesk.states import SlaterState


def random_unitary_rows(rng, n_rows: int, dim: int) -> np.ndarray:
    """First n_rows of a Haar-ish unitary on C^dim (QR of a Gaussian)."""
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    q, r = np.linalg.qr(g)
    q = q * (np.diag(r) / np.abs(np.diag(r))).conj()
    return q[:, :n_rows].T.conj()


def random_slater(rng, n: int, m: int) -> SlaterState:
    return SlaterState(random_unitary_rows(rng, n, m))


def negation_asymmetry(eps) -> float:
    """L-infinity optimal-matching distance between {eps} and {-eps}.

    Infinite entries pair off by sign count; the finite part of a
    negation-symmetric multiset satisfies sorted[i] = -sorted[N-1-i].
    """
    eps = np.asarray(eps, dtype=float)
    if np.sum(np.isposinf(eps)) != np.sum(np.isneginf(eps)):
        return np.inf
    finite = np.sort(eps[np.isfinite(eps)])
    if finite.size == 0:
        return 0.0
    return float(np.max(np.abs(finite + finite[::-1])))


def random_symmetric_slater(rng, n_even: int, n_odd: int, m: int) -> SlaterState:
    """Inversion-symmetric state: rows supported on one basis parity each."""
    even_idx = np.arange(0, m, 2)
    odd_idx = np.arange(1, m, 2)
    if n_even > len(even_idx) or n_odd > len(odd_idx):
        raise ValueError("basis too small for the requested sector sizes")
    rows = np.zeros((n_even + n_odd, m), dtype=complex)
    if n_even:
        rows[:n_even][:, even_idx] = random_unitary_rows(rng, n_even, len(even_idx))
    if n_odd:
        rows[n_even:][:, odd_idx] = random_unitary_rows(rng, n_odd, len(odd_idx))
    return SlaterState(rows)
