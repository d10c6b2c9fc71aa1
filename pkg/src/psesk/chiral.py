"""Inversion-symmetry analysis of the rotated entanglement cut.

For an inversion-symmetric Slater state the orbitals can be rotated into
parity eigenstates; the cut Gramian then takes the form
O(theta) = (1 + M(theta))/2 with M strictly off-diagonal in the parity
grading, so the single-particle entanglement spectrum is symmetric about
zero (a chiral symmetry).  With equal even/odd counts the off-diagonal
block m(theta) is square and generically invertible, and the integer

    nu = (1/pi) * [phase of det m accumulated over theta in [0, pi]]

classifies the gapped spectra; unequal counts force |N_e - N_o| exact
zero-energy flat bands instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import qr

from .overlap import ho_overlap_table, rotated_overlap
from .states import SlaterState

__all__ = [
    "NotInversionSymmetric",
    "GapClosed",
    "GridTooCoarse",
    "EmptyBlock",
    "ParitySortedState",
    "ChiralBlock",
    "inversion_matrix",
    "parity_sort",
    "chiral_block",
    "winding_number",
    "winding_scan",
    "flat_band_count",
    "detect_gap_closings",
    "minimum_block_gap",
    "block_determinants",
]

PARITY_TOL = 1e-8
DET_FLOOR = 1e-10
DIP_THRESHOLD = 1e-6
DEFAULT_GRID = 256
GRID_CAP = 16384


class NotInversionSymmetric(Exception):
    """The orbital span is not closed under inversion."""


class GapClosed(Exception):
    """det m vanished somewhere on the winding grid."""


class GridTooCoarse(Exception):
    """Phase steps stayed >= pi/2 after reaching the refinement cap."""


class EmptyBlock(Exception):
    """No even-odd block exists (one parity sector is empty)."""


@dataclass(frozen=True)
class ParitySortedState:
    """Orthonormal parity-eigenstate rows, even-parity rows first."""

    coeffs: np.ndarray
    parity: np.ndarray
    n_even: int
    n_odd: int

    def as_state(self) -> SlaterState:
        return SlaterState(self.coeffs)


@dataclass(frozen=True)
class ChiralBlock:
    """The N_e x N_o block of the cut Gramian between parity sectors."""

    m_theta: np.ndarray
    theta: float


def inversion_matrix(state: SlaterState) -> np.ndarray:
    """Matrix elements of the inversion operator between occupied orbitals.

    Inversion acts diagonally on the oscillator basis with signs (-1)^n, so
    entry (a, b) is sum_n (-1)^n conj(A_an) A_bn.
    """
    signs = np.where(np.arange(state.basis_size) % 2, -1.0, 1.0)
    mat = (state.coeffs.conj() * signs) @ state.coeffs.T
    return 0.5 * (mat + mat.conj().T)


def _pivoted_orthonormal_rows(block: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the row space of ``block``.

    Column-pivoted QR of block^H with the R diagonal made real positive, so
    degenerate parity eigenspaces come out reproducibly ordered and phased.
    """
    q, r, _ = qr(block.conj().T, mode="economic", pivoting=True)
    d = np.diag(r).copy()
    d[d == 0] = 1.0
    q = q * (np.abs(d) / d).conj()
    return q.conj().T


def parity_sort(state: SlaterState, tol: float = PARITY_TOL) -> ParitySortedState:
    """Rotate the orbitals into inversion eigenstates and sort even first.

    Raises NotInversionSymmetric when any eigenvalue of the inversion matrix
    is farther than ``tol`` from +-1 (the span mixes parities, e.g. bound
    states of an asymmetric well); callers then skip the chiral analysis.
    """
    inv = inversion_matrix(state)
    lam, vecs = np.linalg.eigh(inv)
    if np.max(np.abs(np.abs(lam) - 1.0)) > tol:
        raise NotInversionSymmetric(
            f"inversion eigenvalues {np.sort(lam)} are not within {tol:.0e} of +-1"
        )
    rotated = vecs.conj().T @ state.coeffs
    parity = np.where(lam > 0.0, 1, -1)

    even = rotated[parity > 0]
    odd = rotated[parity < 0]
    # clean residual cross-parity leakage and re-orthonormalize deterministically
    basis_parity = np.arange(state.basis_size) % 2
    if even.size:
        even = even.copy()
        even[:, basis_parity == 1] = 0.0
        even = _pivoted_orthonormal_rows(even)
    if odd.size:
        odd = odd.copy()
        odd[:, basis_parity == 0] = 0.0
        odd = _pivoted_orthonormal_rows(odd)

    n_even, n_odd = len(even), len(odd)
    coeffs = np.vstack([b for b in (even, odd) if b.size]) if n_even + n_odd else rotated
    out_parity = np.array([1] * n_even + [-1] * n_odd)
    return ParitySortedState(coeffs=coeffs, parity=out_parity, n_even=n_even, n_odd=n_odd)


def chiral_block(ps: ParitySortedState, theta: float) -> ChiralBlock:
    """Extract the even-odd block of the rotated cut Gramian."""
    if ps.n_even == 0 or ps.n_odd == 0:
        raise EmptyBlock("both parity sectors must be occupied")
    o = rotated_overlap(ps.as_state(), theta).entries
    return ChiralBlock(m_theta=o[: ps.n_even, ps.n_even :], theta=float(theta))


def block_determinants(ps: ParitySortedState, thetas: Sequence[float]) -> np.ndarray:
    """det m(theta) on a grid, sharing the phase-free part across angles."""
    if ps.n_even == 0 or ps.n_odd == 0:
        raise EmptyBlock("both parity sectors must be occupied")
    table = ho_overlap_table(ps.coeffs.shape[1]).entries
    a_even = ps.coeffs[: ps.n_even].conj()
    a_odd = ps.coeffs[ps.n_even :]
    narr = np.arange(ps.coeffs.shape[1])
    dets = np.empty(len(thetas), dtype=complex)
    for k, theta in enumerate(thetas):
        ph = np.exp(1j * narr * theta)
        block = (a_even * ph.conj()) @ table @ (a_odd * ph).T
        dets[k] = np.linalg.det(block)
    return dets


def _abs_det(ps: ParitySortedState, theta: float) -> float:
    return float(np.abs(block_determinants(ps, [theta])[0]))


def winding_scan(
    ps: ParitySortedState,
    grid_size: int = DEFAULT_GRID,
    grid_cap: int = GRID_CAP,
) -> tuple[int, int, float]:
    """(winding, grid size used, min |det m| seen) over theta in [0, pi].

    Phase-unwraps det m on a uniform grid; any wrapped step >= pi/2 doubles
    the grid (up to ``grid_cap``).  The total is an exact multiple of pi
    because m(pi) = -m(0), so rounding to an integer is safe once the steps
    are small.
    """
    if ps.n_even != ps.n_odd:
        raise EmptyBlock("winding requires equally many even and odd orbitals")
    k = grid_size
    while True:
        thetas = np.linspace(0.0, math.pi, k + 1)
        dets = block_determinants(ps, thetas)
        min_det = float(np.min(np.abs(dets)))
        if min_det < DET_FLOOR:
            raise GapClosed(
                f"|det m| < {DET_FLOOR:.0e} on the grid; winding undefined"
            )
        steps = np.angle(dets[1:] / dets[:-1])
        if np.max(np.abs(steps)) < math.pi / 2.0:
            return int(round(float(np.sum(steps)) / math.pi)), k, min_det
        if k >= grid_cap:
            # a zero between grid points masquerades as an unresolvable step
            j = int(np.argmax(np.abs(steps)))
            theta_star = _golden_minimize(
                lambda t: _abs_det(ps, t), thetas[j], thetas[j + 1], 1e-12
            )
            if _abs_det(ps, theta_star) < DET_FLOOR:
                raise GapClosed(
                    f"|det m| < {DET_FLOOR:.0e} near theta = {theta_star:.6f}"
                )
            raise GridTooCoarse(f"phase steps still >= pi/2 at grid size {k}")
        k *= 2


def winding_number(
    ps: ParitySortedState,
    grid_size: int = DEFAULT_GRID,
    grid_cap: int = GRID_CAP,
) -> int:
    """Winding of det m(theta) over theta in [0, pi] (see winding_scan)."""
    return winding_scan(ps, grid_size, grid_cap)[0]


def flat_band_count(ps: ParitySortedState) -> int:
    """Number of inversion-protected zero-energy flat bands: |N_e - N_o|."""
    return abs(ps.n_even - ps.n_odd)


def _golden_minimize(f, lo: float, hi: float, resolution: float) -> float:
    g = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c, d = b - g * (b - a), a + g * (b - a)
    fc, fd = f(c), f(d)
    while b - a > resolution:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - g * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + g * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def minimum_block_gap(ps: ParitySortedState, n_theta: int = DEFAULT_GRID) -> tuple[float, float]:
    """(theta*, min |det m|) over the fundamental domain [0, pi).

    Grid scan followed by golden-section refinement around the best point.
    """
    thetas = np.linspace(0.0, math.pi, n_theta, endpoint=False)
    dets = np.abs(block_determinants(ps, thetas))
    i = int(np.argmin(dets))
    step = math.pi / n_theta
    theta_star = _golden_minimize(
        lambda t: _abs_det(ps, t), thetas[i] - step, thetas[i] + step, 1e-10
    )
    return theta_star % math.pi, _abs_det(ps, theta_star)


def detect_gap_closings(
    ps: ParitySortedState,
    thetas: Sequence[float] | None = None,
    dip: float = DIP_THRESHOLD,
    resolution: float = 1e-10,
) -> list[float]:
    """Angles in [0, pi) where |det m| dips below ``dip``.

    |det m| is pi-periodic (m picks up a global sign under a half turn), so
    the grid is treated circularly; every strict local minimum is refined to
    ``resolution`` by golden section and kept if the refined value is below
    the threshold.  A zero never lands on a grid point, which is why the
    grid values alone cannot be compared against ``dip``.  Returns an empty
    list for gapped states.
    """
    if thetas is None:
        thetas = np.linspace(0.0, math.pi, DEFAULT_GRID, endpoint=False)
    thetas = np.asarray(thetas, dtype=float)
    dets = np.abs(block_determinants(ps, thetas))
    n = len(thetas)
    closings: list[float] = []
    for i in range(n):
        left = dets[(i - 1) % n]
        right = dets[(i + 1) % n]
        is_min = dets[i] <= left and dets[i] <= right and (dets[i] < left or dets[i] < right)
        if not is_min:
            continue
        lo = thetas[i - 1] if i > 0 else thetas[0] - (thetas[1] - thetas[0])
        hi = thetas[i + 1] if i + 1 < n else thetas[-1] + (thetas[-1] - thetas[-2])
        theta_star = _golden_minimize(lambda t: _abs_det(ps, t), lo, hi, resolution)
        if _abs_det(ps, theta_star) < dip:
            closings.append(theta_star % math.pi)
    closings.sort()
    merged: list[float] = []
    for c in closings:
        if not merged or (c - merged[-1]) > 1e-6:
            merged.append(c)
    if len(merged) > 1 and (merged[0] + math.pi - merged[-1]) <= 1e-6:
        merged.pop()
    return merged
