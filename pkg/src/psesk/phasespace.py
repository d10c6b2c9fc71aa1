"""Fractional Fourier transform and Wigner quasiprobability fields.

The phase-space rotation by theta acts on the oscillator basis as
phi_n -> e^{i n theta} phi_n (the production path, exact); the equivalent
integral kernel

    U_theta(x, y) = [pi (1 - e^{2 i theta})]^{-1/2}
                    * exp(-(i/2) cot(theta) (x^2 + y^2) + i x y / sin(theta))

(principal branch) reproduces those eigenphases for every theta not a
multiple of pi and carries the phase convention pi/4 - theta/2 on (0, pi).
It exists as the brute-force oracle and for states supplied as raw samples.

Wigner functions of basis-state pairs have the closed form (z = (x+ip)/sqrt2)

    W_mn(x, p) = 2 (-1)^m sqrt(m!/n!) (2 conj(z))^{n-m}
                 * exp(-2|z|^2) L_m^{n-m}(4 |z|^2),     n >= m,

the conjugate power being fixed by rotation covariance W -> W o g^{-1}
(equivalently by the wavefunction-integral form below, which is the oracle):

    W(x, p) = integral dx' e^{-i p x'} psi*(x - x'/2) psi(x + x'/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .hobasis import HOExpansion, ho_stack
from .specfun import assoc_laguerre

__all__ = [
    "DegenerateAngle",
    "EdgeLeakage",
    "WignerField",
    "default_grid",
    "frft_kernel",
    "frft_ho",
    "frft_direct",
    "compose_kernels_quadrature",
    "wigner_mn",
    "wigner_of_state",
    "wigner_pure",
    "coherent_wigner",
    "coherent_expansion",
    "marginal_position",
]

ANGLE_EPS = 1e-6
EDGE_DECAY = 1e-10
GRID_HALF_WIDTH = 8.0
GRID_POINTS = 161


class DegenerateAngle(Exception):
    """The kernel degenerates to a distribution at multiples of pi."""


class EdgeLeakage(Exception):
    """Samples do not decay at the grid edges; quadrature would alias."""


@dataclass(frozen=True)
class WignerField:
    """Samples W(x_i, p_j) on a rectangular grid, values shape (len x, len p).

    is_diagonal marks fields of Hermitian operators (real up to roundoff).
    """

    x: np.ndarray
    p: np.ndarray
    values: np.ndarray
    is_diagonal: bool


def default_grid() -> tuple[np.ndarray, np.ndarray]:
    """The default square phase-space grid, [-8, 8] at 161 points per axis."""
    axis = np.linspace(-GRID_HALF_WIDTH, GRID_HALF_WIDTH, GRID_POINTS)
    return axis, axis.copy()


def _angle_defect(theta: float) -> float:
    return abs(theta / math.pi - round(theta / math.pi))


def frft_kernel(theta: float, x, y):
    """Rotation kernel U_theta(x, y); broadcasts over array x, y.

    Raises DegenerateAngle within 1e-6 of a multiple of pi, where the kernel
    is a delta distribution rather than a function.
    """
    if _angle_defect(theta) * math.pi < ANGLE_EPS:
        raise DegenerateAngle(f"theta={theta} is within {ANGLE_EPS} of a multiple of pi")
    x = np.asarray(x)
    y = np.asarray(y)
    pref = 1.0 / np.sqrt(math.pi * (1.0 - np.exp(2j * theta)))
    cot = 1.0 / math.tan(theta)
    csc = 1.0 / math.sin(theta)
    return pref * np.exp(-0.5j * cot * (x * x + y * y) + 1j * csc * x * y)


def frft_ho(expansion: HOExpansion, theta: float) -> HOExpansion:
    """Rotate in the oscillator basis: alpha_n -> e^{i n theta} alpha_n."""
    n = np.arange(expansion.truncation)
    return HOExpansion(coeffs=expansion.coeffs * np.exp(1j * n * theta), tail=expansion.tail)


def frft_direct(values: np.ndarray, x: np.ndarray, theta: float) -> np.ndarray:
    """Rotate sampled wavefunction values by kernel quadrature (the oracle).

    The samples must decay below 1e-10 at the grid edges.  Angles within
    1e-6 of a multiple of pi route to the exact limits: identity at even
    multiples, inversion psi(x) -> psi(-x) at odd multiples (which needs a
    symmetric grid).
    """
    values = np.asarray(values, dtype=complex)
    x = np.asarray(x, dtype=float)
    if max(abs(values[0]), abs(values[-1])) > EDGE_DECAY:
        raise EdgeLeakage("samples exceed 1e-10 at the grid edges")
    if _angle_defect(theta) * math.pi < ANGLE_EPS:
        half_turns = round(theta / math.pi)
        if half_turns % 2 == 0:
            return values.copy()
        if abs(x[0] + x[-1]) > 1e-9:
            raise ValueError("inversion limit requires a symmetric grid")
        return values[::-1].copy()
    dx = x[1] - x[0]
    w = np.full(len(x), dx)
    w[0] = w[-1] = dx / 2.0
    return frft_kernel(theta, x[:, None], x[None, :]) @ (values * w)


def compose_kernels_quadrature(
    theta1: float, theta2: float, x: float, y: float, order: int = 96
) -> complex:
    """Quadrature of integral dz U_theta1(x, z) U_theta2(z, y).

    The integrand is a pure chirp in z whose tails never decay on the real
    line, so the path is rotated through the stationary point
    z_s = (x csc theta1 + y csc theta2) / (cot theta1 + cot theta2) by
    e^{-i sign(c) pi/4}; along that line the modulus decays as a Gaussian
    and Gauss-Hermite quadrature converges at machine precision.  The path
    choice cannot bias the value (the integrand is entire), only the rate.
    """
    from .hobasis import reweighted_rule

    c = 1.0 / math.tan(theta1) + 1.0 / math.tan(theta2)
    if abs(c) < 1e-12:
        raise DegenerateAngle("composed angle is a multiple of pi")
    b = x / math.sin(theta1) + y / math.sin(theta2)
    z_star = b / c
    rho = np.exp(-1j * np.sign(c) * math.pi / 4.0) * math.sqrt(2.0 / abs(c))
    u, w = reweighted_rule(order)
    z = z_star + rho * u
    vals = frft_kernel(theta1, x, z) * frft_kernel(theta2, z, y)
    return complex(rho * np.sum(w * vals))


def _log_fact(n: int) -> float:
    return math.lgamma(n + 1)


def wigner_mn(m: int, n: int, x, p):
    """Wigner function of the basis-state pair |phi_n><phi_m|.

    Real for m = n; for n < m uses W_mn = conj(W_nm).  Broadcasts over
    arrays x, p.
    """
    if m < 0 or n < 0:
        raise ValueError("indices must be nonnegative")
    if n < m:
        return np.conj(wigner_mn(n, m, x, p))
    x = np.asarray(x, dtype=float)
    p = np.asarray(p, dtype=float)
    nu = n - m
    r2 = 0.5 * (x * x + p * p)  # |z|^2
    pref = 2.0 * (-1.0) ** m * math.exp(0.5 * (_log_fact(m) - _log_fact(n)))
    body = pref * np.exp(-2.0 * r2) * assoc_laguerre(m, nu, 4.0 * r2)
    if nu == 0:
        return body
    zbar = (x - 1j * p) / math.sqrt(2.0)
    return (2.0 * zbar) ** nu * body


def _operator_matrix(op) -> np.ndarray:
    if isinstance(op, HOExpansion):
        c = op.coeffs
        return np.outer(c, c.conj())
    arr = np.asarray(op, dtype=complex)
    if arr.ndim == 1:
        return np.outer(arr, arr.conj())
    if arr.ndim == 2 and arr.shape[0] == arr.shape[1]:
        return arr
    raise ValueError("expected coefficients or a square operator matrix")


def wigner_of_state(
    op,
    x: Optional[np.ndarray] = None,
    p: Optional[np.ndarray] = None,
) -> WignerField:
    """Assemble the Wigner field of a state or basis-space operator.

    ``op`` may be an HOExpansion, a 1-D coefficient vector (pure state), or
    a square matrix rho in the oscillator basis (e.g. a one-particle density
    matrix, or |psi><phi| for a cross field).  Hermitian input yields a real
    field and sets is_diagonal.
    """
    rho = _operator_matrix(op)
    if x is None or p is None:
        gx, gp = default_grid()
        x = gx if x is None else np.asarray(x, dtype=float)
        p = gp if p is None else np.asarray(p, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    hermitian = bool(np.max(np.abs(rho - rho.conj().T)) <= 1e-12)
    size = rho.shape[0]
    xg = x[:, None]
    pg = p[None, :]
    r2 = 0.5 * (xg * xg + pg * pg)
    arg = 4.0 * r2
    gauss = np.exp(-2.0 * r2)
    two_zbar = math.sqrt(2.0) * (xg - 1j * pg)
    log_fact = np.array([_log_fact(k) for k in range(size)])

    # W = sum_{mn} rho_mn W_nm, grouped by the index offset nu = n - m; one
    # Laguerre recurrence sweep per offset covers every m on that diagonal.
    values = np.zeros((len(x), len(p)), dtype=complex)
    power = np.ones_like(two_zbar)  # (2 conj z)^nu
    for nu in range(size):
        lower = np.asarray(np.diagonal(rho, -nu))  # rho[m+nu, m]
        upper = np.conj(np.asarray(np.diagonal(rho, nu)))  # conj(rho[m, m+nu])
        if np.any(lower) or np.any(upper):
            pref = 2.0 * (-1.0) ** np.arange(size - nu) * np.exp(
                0.5 * (log_fact[: size - nu] - log_fact[nu:])
            )
            acc_low = np.zeros_like(values)
            acc_up = np.zeros_like(values)
            l_prev = np.ones_like(arg)
            l_cur = 1.0 + nu - arg
            for m in range(size - nu):
                l_m = l_prev if m == 0 else l_cur
                if m >= 2:
                    l_prev, l_cur = l_cur, (
                        (2.0 * (m - 1) + 1.0 + nu - arg) * l_cur
                        - (m - 1 + nu) * l_prev
                    ) / m
                    l_m = l_cur
                if lower[m] != 0.0:
                    acc_low += (pref[m] * lower[m]) * l_m
                if nu > 0 and upper[m] != 0.0:
                    acc_up += (pref[m] * upper[m]) * l_m
            block = power * gauss
            values += block * acc_low
            if nu > 0:
                values += np.conj(block * acc_up)
        power = power * two_zbar
    return WignerField(x=x, p=p, values=values, is_diagonal=hermitian)


def wigner_pure(
    samples: np.ndarray,
    sample_x: np.ndarray,
    x: Optional[np.ndarray] = None,
    p: Optional[np.ndarray] = None,
    bra_samples: Optional[np.ndarray] = None,
) -> WignerField:
    """Brute-force Wigner field from position-space samples (the oracle).

    W(x, p) = integral dx' e^{-i p x'} psi*(x - x'/2) psi(x + x'/2) on the
    uniform sample grid, with x' restricted to even multiples of the sample
    spacing so both shifted arguments stay on-grid.  Evaluation points must
    coincide with sample points.  ``bra_samples`` switches to the cross
    field of |psi><phi| with phi the bra.
    """
    samples = np.asarray(samples, dtype=complex)
    sample_x = np.asarray(sample_x, dtype=float)
    bra = samples if bra_samples is None else np.asarray(bra_samples, dtype=complex)
    for arr in (samples, bra):
        if max(abs(arr[0]), abs(arr[-1])) > EDGE_DECAY:
            raise EdgeLeakage("samples exceed 1e-10 at the grid edges")
    if x is None or p is None:
        gx, gp = default_grid()
        x = gx if x is None else np.asarray(x, dtype=float)
        p = gp if p is None else np.asarray(p, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    dx = sample_x[1] - sample_x[0]
    idx = np.rint((x - sample_x[0]) / dx).astype(int)
    if np.max(np.abs(sample_x[np.clip(idx, 0, len(sample_x) - 1)] - x)) > 1e-9:
        raise ValueError("evaluation points must lie on the sample grid")
    n_samp = len(sample_x)
    k_max = n_samp - 1
    k = np.arange(-k_max, k_max + 1)
    phase = np.exp(-2j * np.outer(p, k * dx))  # x' = 2 k dx
    padded_ket = np.zeros(3 * n_samp, dtype=complex)
    padded_ket[n_samp : 2 * n_samp] = samples
    padded_bra = np.zeros(3 * n_samp, dtype=complex)
    padded_bra[n_samp : 2 * n_samp] = bra
    values = np.empty((len(x), len(p)), dtype=complex)
    for row, i in enumerate(idx):
        center = n_samp + i
        corr = np.conj(padded_bra[center - k_max : center + k_max + 1][::-1])
        corr = corr * padded_ket[center - k_max : center + k_max + 1]
        values[row] = 2.0 * dx * (phase @ corr)
    diagonal = bra_samples is None
    return WignerField(x=x, p=p, values=values, is_diagonal=diagonal)


def coherent_wigner(
    w: complex,
    x: Optional[np.ndarray] = None,
    p: Optional[np.ndarray] = None,
) -> WignerField:
    """Wigner field of the coherent state centered at z = w: 2 e^{-2|z-w|^2}."""
    if x is None or p is None:
        gx, gp = default_grid()
        x = gx if x is None else np.asarray(x, dtype=float)
        p = gp if p is None else np.asarray(p, dtype=float)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    p = np.atleast_1d(np.asarray(p, dtype=float))
    z = (x[:, None] + 1j * p[None, :]) / math.sqrt(2.0)
    values = 2.0 * np.exp(-2.0 * np.abs(z - w) ** 2)
    return WignerField(x=x, p=p, values=values.astype(complex), is_diagonal=True)


def coherent_expansion(w: complex, basis_size: int) -> HOExpansion:
    """Coherent-state coefficients alpha_n = e^{-|w|^2/2} w^n / sqrt(n!)."""
    n = np.arange(basis_size)
    mod = abs(w)
    if mod == 0.0:
        coeffs = np.zeros(basis_size, dtype=complex)
        coeffs[0] = 1.0
        return HOExpansion(coeffs=coeffs)
    log_mod = n * math.log(mod) - 0.5 * np.array([_log_fact(int(k)) for k in n]) - 0.5 * mod**2
    phases = np.exp(1j * n * np.angle(w))
    return HOExpansion(coeffs=np.exp(log_mod) * phases)


def marginal_position(field: WignerField) -> np.ndarray:
    """integral dp/(2 pi) W(x, p) per x row (trapezoid).

    Equals |psi(x)|^2 for diagonal fields (returned real) and phi*(x) psi(x)
    for cross fields (returned complex).
    """
    marg = np.trapezoid(field.values, field.p, axis=1) / (2.0 * math.pi)
    if field.is_diagonal:
        if np.max(np.abs(marg.imag)) > 1e-10:
            raise ValueError("diagonal field has a non-negligible imaginary marginal")
        return marg.real
    return marg
