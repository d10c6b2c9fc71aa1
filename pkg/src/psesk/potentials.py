"""Spectral (Galerkin) bound-state solver for 1D wells in the oscillator basis.

H = p^2/2 + V(x) with hbar = m = 1.  The kinetic part is pentadiagonal and
assembled from ladder operators (exact); the potential matrix uses
Gauss-Hermite quadrature with the exp(+x^2) reweighting, exact for
polynomial potentials up to the rule's degree and spectrally accurate for
sech^2 / tanh wells.  Eigenvectors feed straight into SlaterState.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np
from scipy.linalg import eigh

from .hobasis import DEFAULT_BASIS_SIZE, ho_stack, reweighted_rule
from .states import SlaterState

__all__ = [
    "QuadratureOverflow",
    "NotEnoughBoundStates",
    "PotentialSpec",
    "BoundStateSet",
    "potential",
    "parse_potential_expression",
    "hamiltonian_matrix",
    "bound_states",
    "parity_check",
    "kinetic_matrix",
]

BUILTIN_KINDS = ("sho", "anharmonic", "double_well", "poschl_teller", "rosen_morse")

# edge used both for growth screening and the continuum threshold
X_EDGE = 25.0
PARITY_SUPPORT_TOL = 1e-10


class QuadratureOverflow(Exception):
    """Potential grows at least as fast as exp(x^2); matrix elements diverge."""


class NotEnoughBoundStates(Exception):
    """Fewer genuine bound levels below the continuum than requested."""


@dataclass(frozen=True)
class PotentialSpec:
    """A 1D potential: a named kind, its parameters, and a sampler."""

    kind: str
    params: dict = field(default_factory=dict)
    sampler: Callable[[np.ndarray], np.ndarray] = None  # type: ignore[assignment]


def _builtin_sampler(kind: str) -> Callable[[np.ndarray], np.ndarray]:
    if kind == "sho":
        return lambda x: 0.5 * x * x
    if kind == "anharmonic":
        return lambda x: 0.5 * x * x + 0.25 * x**4
    if kind == "double_well":
        return lambda x: -2.0 * x * x + 0.25 * x**4
    if kind == "poschl_teller":
        return lambda x: -45.0 / np.cosh(x) ** 2
    if kind == "rosen_morse":
        return lambda x: -45.0 / np.cosh(x) ** 2 - 2.0 * np.tanh(x)
    raise ValueError(f"unknown potential kind {kind!r}")


def potential(kind: str, expression: Optional[str] = None) -> PotentialSpec:
    """Build a PotentialSpec for a built-in kind or a custom expression."""
    if kind == "custom":
        if not expression:
            raise ValueError("custom potential requires an expression")
        return PotentialSpec(
            kind="custom",
            params={"expression": expression},
            sampler=parse_potential_expression(expression),
        )
    if kind not in BUILTIN_KINDS:
        raise ValueError(f"unknown potential kind {kind!r}")
    return PotentialSpec(kind=kind, sampler=_builtin_sampler(kind))


_TOKEN = re.compile(r"\s*(\d+\.?\d*(?:[eE][+-]?\d+)?|sech|tanh|exp|x|[()+\-*/^])")
_FUNCS = {"sech": lambda v: 1.0 / np.cosh(v), "tanh": np.tanh, "exp": np.exp}


def parse_potential_expression(text: str) -> Callable[[np.ndarray], np.ndarray]:
    """Compile an expression over +, -, *, /, ^, sech, tanh, exp, x, literals.

    Standard precedence, right-associative ^; returns a vectorized sampler.
    """
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            if text[pos:].strip():
                raise ValueError(f"bad token at {text[pos:]!r}")
            break
        tokens.append(m.group(1))
        pos = m.end()
    tokens.append(None)  # sentinel

    cursor = [0]

    def peek():
        return tokens[cursor[0]]

    def advance():
        cursor[0] += 1
        return tokens[cursor[0] - 1]

    def expect(tok):
        if peek() != tok:
            raise ValueError(f"expected {tok!r}, got {peek()!r} in {text!r}")
        advance()

    def parse_expr():
        node = parse_term()
        while peek() in ("+", "-"):
            op = advance()
            rhs = parse_term()
            node = (lambda a, b: (lambda x: a(x) + b(x)))(node, rhs) if op == "+" else (
                lambda a, b: (lambda x: a(x) - b(x))
            )(node, rhs)
        return node

    def parse_term():
        node = parse_unary()
        while peek() in ("*", "/"):
            op = advance()
            rhs = parse_unary()
            node = (lambda a, b: (lambda x: a(x) * b(x)))(node, rhs) if op == "*" else (
                lambda a, b: (lambda x: a(x) / b(x))
            )(node, rhs)
        return node

    def parse_unary():
        # '^' binds tighter than unary minus: -x^2 is -(x^2)
        if peek() == "-":
            advance()
            inner = parse_unary()
            return lambda x, a=inner: -a(x)
        return parse_power()

    def parse_power():
        base = parse_atom()
        if peek() == "^":
            advance()
            expo = parse_unary()
            return lambda x, a=base, b=expo: a(x) ** b(x)
        return base

    def parse_atom():
        tok = peek()
        if tok is None:
            raise ValueError(f"unexpected end of expression in {text!r}")
        if tok == "(":
            advance()
            inner = parse_expr()
            expect(")")
            return inner
        if tok in _FUNCS:
            advance()
            expect("(")
            inner = parse_expr()
            expect(")")
            return lambda x, f=_FUNCS[tok], a=inner: f(a(x))
        if tok == "x":
            advance()
            return lambda x: np.asarray(x, dtype=float)
        advance()
        value = float(tok)
        return lambda x, v=value: np.full_like(np.asarray(x, dtype=float), v)

    fn = parse_expr()
    if peek() is not None:
        raise ValueError(f"trailing input {peek()!r} in {text!r}")
    return fn


def kinetic_matrix(basis_size: int) -> np.ndarray:
    """<phi_m| p^2/2 |phi_n>: pentadiagonal from p^2 = -(a - a^dag)^2 / 2."""
    n = np.arange(basis_size)
    t = np.diag((2.0 * n + 1.0) / 4.0)
    off = -np.sqrt((n[:-2] + 1.0) * (n[:-2] + 2.0)) / 4.0
    t += np.diag(off, 2) + np.diag(off, -2)
    return t


def _screen_growth(spec: PotentialSpec, nodes: np.ndarray) -> None:
    vals = np.asarray(spec.sampler(nodes), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureOverflow("potential is not finite at the quadrature nodes")
    outer = np.abs(nodes) >= 0.8 * np.max(np.abs(nodes))
    big = outer & (np.abs(vals) > 1.0)
    if np.any(big):
        growth = np.log(np.abs(vals[big])) / nodes[big] ** 2
        if np.min(growth) >= 0.95:
            raise QuadratureOverflow("potential grows at least as fast as exp(x^2)")


def hamiltonian_matrix(
    spec: PotentialSpec,
    basis_size: int = DEFAULT_BASIS_SIZE,
    order: Optional[int] = None,
) -> np.ndarray:
    """Galerkin matrix of p^2/2 + V in the truncated oscillator basis."""
    if order is None:
        order = 2 * basis_size + 32
    if order < 2 * basis_size:
        raise ValueError("quadrature order must be >= 2 * basis_size")
    nodes, w = reweighted_rule(order)
    _screen_growth(spec, nodes)
    phi = ho_stack(basis_size - 1, nodes)
    v = (phi * (w * np.asarray(spec.sampler(nodes), dtype=float))) @ phi.T
    v = 0.5 * (v + v.T)
    return kinetic_matrix(basis_size) + v


@dataclass(frozen=True)
class BoundStateSet:
    """Lowest bound levels of a well: ascending energies and coefficient rows."""

    energies: np.ndarray
    states: np.ndarray
    basis_size: int
    quadrature_order: int

    def as_slater(self, count: Optional[int] = None) -> SlaterState:
        n = len(self.energies) if count is None else count
        return SlaterState(self.states[:n].astype(complex))


def _continuum_threshold(spec: PotentialSpec) -> float:
    edge = np.asarray(spec.sampler(np.array([-X_EDGE, X_EDGE])), dtype=float)
    return float(np.min(edge))


def bound_states(
    spec: PotentialSpec,
    count: int,
    basis_size: int = DEFAULT_BASIS_SIZE,
    order: Optional[int] = None,
    convergence_tol: Optional[float] = None,
) -> BoundStateSet:
    """Lowest ``count`` bound eigenpairs of the well.

    Levels must lie below the potential's asymptotic value (continuum edge);
    eigenvector phases are fixed by making the largest-modulus coefficient
    real positive (ties to the lowest index) so coefficient matrices are
    reproducible.  ``convergence_tol``, if given, rejects the set when any
    requested level moves by more than that between basis sizes
    basis_size - 20 and basis_size.
    """
    if order is None:
        order = 2 * basis_size + 32
    h = hamiltonian_matrix(spec, basis_size, order)
    energies, vecs = eigh(h)
    threshold = _continuum_threshold(spec)
    n_bound = int(np.sum(energies < threshold)) if np.isfinite(threshold) else basis_size
    if count > n_bound:
        raise NotEnoughBoundStates(
            f"requested {count} levels but only {n_bound} lie below the continuum at {threshold:.3g}"
        )
    if convergence_tol is not None:
        smaller = bound_states(spec, count, basis_size - 20, None, None)
        drift = np.max(np.abs(energies[:count] - smaller.energies))
        if drift > convergence_tol:
            raise NotEnoughBoundStates(
                f"levels not converged: max drift {drift:.3e} exceeds {convergence_tol:.1e}"
            )
    rows = vecs[:, :count].T.copy()
    for row in rows:
        k = int(np.argmax(np.abs(row)))
        if row[k] < 0:
            row *= -1.0
    return BoundStateSet(
        energies=energies[:count].copy(),
        states=rows,
        basis_size=basis_size,
        quadrature_order=order,
    )


def parity_check(bset: BoundStateSet, tol: float = PARITY_SUPPORT_TOL) -> list[Optional[int]]:
    """Per-state inversion parity: +1, -1, or None for asymmetric states.

    A state is a parity eigenstate when its coefficient weight on the
    opposite-parity basis indices is below ``tol``.
    """
    odd_index = np.arange(bset.basis_size) % 2 == 1
    out: list[Optional[int]] = []
    for row in bset.states:
        w_odd = float(np.sum(np.abs(row[odd_index]) ** 2))
        w_even = float(np.sum(np.abs(row[~odd_index]) ** 2))
        if w_odd <= tol:
            out.append(1)
        elif w_even <= tol:
            out.append(-1)
        else:
            out.append(None)
    return out
