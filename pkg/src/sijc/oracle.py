"""Independent brute-force references.

Everything closed-form elsewhere in the package is checked against this
module and nothing else: Hermitian eigendecomposition, spectral matrix
exponentials, exact Heisenberg conjugation, adaptive quadrature, and
finite-difference derivative estimates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import IntegrationWarning, quad

from .models import LadderSpectrum
from .twochannel import TwoChannelOperator, build_hamiltonian, sigma3_operator


class QuadratureError(RuntimeError):
    def __init__(self, message, achieved):
        super().__init__(message)
        self.achieved = achieved


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray  # ascending
    eigenvectors: np.ndarray  # unitary, columns
    reconstruction_residual: float


def diagonalize(op: TwoChannelOperator, hermiticity_rtol=1e-13) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian two-channel operator; rejects non-Hermitian input."""
    scale = max(float(np.max(np.abs(op.matrix))), 1.0)
    if op.hermiticity_residual() >= hermiticity_rtol * scale:
        raise ValueError(
            f"operator is not Hermitian within {hermiticity_rtol:g} relative "
            f"(residual {op.hermiticity_residual():.3e}, scale {scale:.3e})"
        )
    h = 0.5 * (op.matrix + op.matrix.conj().T)
    eigenvalues, eigenvectors = np.linalg.eigh(h)
    recon = eigenvectors @ np.diag(eigenvalues) @ eigenvectors.conj().T
    residual = float(np.max(np.abs(op.matrix - recon)))
    return EigenDecomposition(eigenvalues, eigenvectors, residual)


def expm_prop(op: TwoChannelOperator, t: float, hbar=1.0) -> TwoChannelOperator:
    """exp(-i H t / hbar) for Hermitian H, via the spectral decomposition."""
    dec = diagonalize(op)
    phases = np.exp(-1j * dec.eigenvalues * t / hbar)
    u = (dec.eigenvectors * phases) @ dec.eigenvectors.conj().T
    return TwoChannelOperator(op.upper_dim, op.lower_dim, u)


def heisenberg_sigma3(ladder: LadderSpectrum, Omega, Delta, hbar, t) -> TwoChannelOperator:
    """Exact Heisenberg-picture population operator U^dag sigma3 U.

    The conjugation uses the coupling part of the Hamiltonian only, which is
    legitimate because the free part commutes with sigma3.
    """
    parts = build_hamiltonian(ladder, Omega, Delta, hbar)
    u = expm_prop(parts.h_coupling, t, hbar)
    sigma3 = sigma3_operator(ladder.levels)
    m = u.matrix.conj().T @ sigma3.matrix @ u.matrix
    return TwoChannelOperator(u.upper_dim, u.lower_dim, m)


def quadrature(func, a: float, b: float, tol=1e-12) -> float:
    """Adaptive quadrature of a smooth scalar integrand on [a, b].

    Raises QuadratureError (carrying the achieved estimate) when the
    requested tolerance is not met.
    """
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        # roundoff-limited refinement is fine; the achieved estimate is checked below
        warnings.simplefilter("ignore", IntegrationWarning)
        value, estimate = quad(func, a, b, epsabs=tol * 1e-2, epsrel=tol * 1e-2, limit=400)
    if estimate > tol * max(1.0, abs(value)):
        raise QuadratureError(
            f"quadrature tolerance {tol:g} not met (achieved {estimate:.3e})", estimate
        )
    return value


_TRIG = {"C": math.cos, "S": math.sin}


def trig_product_integral(kind: str, t: float, x: float, w: float, tol=1e-12) -> float:
    """Oracle for the auxiliary integrals: int_0^t trig(x s) trig(w s) ds.

    kind is two letters from {C, S}, naming the x-factor and w-factor.
    """
    if len(kind) != 2 or any(c not in _TRIG for c in kind):
        raise ValueError(f"kind must be two letters from {{C, S}}, got {kind!r}")
    fx, fw = _TRIG[kind[0]], _TRIG[kind[1]]
    return quadrature(lambda s: fx(x * s) * fw(w * s), 0.0, t, tol=tol)


def green_kernel_integral(kind: str, t: float, a: float, r: float, tol=1e-12) -> float:
    """Oracle for the resonance kernels: int_0^t sin(r (t - s)) trig(a s) ds."""
    if kind not in _TRIG:
        raise ValueError(f"kind must be 'S' or 'C', got {kind!r}")
    fa = _TRIG[kind]
    return quadrature(lambda s: math.sin(r * (t - s)) * fa(a * s), 0.0, t, tol=tol)


def fd_derivative(func, t: float, step: float, order=1):
    """Central-difference derivative estimate of an array-valued function.

    order 1: (f(t+h) - f(t-h)) / 2h;  order 2: (f(t+h) - 2 f(t) + f(t-h)) / h^2.
    Both carry O(h^2) truncation error.
    """
    if step <= 0:
        raise ValueError(f"step must be > 0, got {step}")
    if order == 1:
        return (np.asarray(func(t + step)) - np.asarray(func(t - step))) / (2.0 * step)
    if order == 2:
        return (
            np.asarray(func(t + step)) - 2.0 * np.asarray(func(t)) + np.asarray(func(t - step))
        ) / step**2
    raise ValueError(f"order must be 1 or 2, got {order}")
