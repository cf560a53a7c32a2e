"""Closed-form eigenvalues, mixing amplitudes and eigenstates of the coupled system.

Each invariant pair m reduces the Hamiltonian to the 2x2 block

    E_{m+1} * 1 + alpha * [[beta, s], [s, -beta]],   s = sqrt(E_{m+1}),

whose eigenvalues are E_{m+1} +- alpha*sqrt(E_{m+1} + beta^2) and whose
normalized eigenvectors give the mixing amplitudes.  The uncoupled lower
ground state sits at energy -hbar*Delta.  Amplitudes are stored as the
positive coefficient pairs (phase fixed by C_up >= 0); the lower-channel
sign of the minus branch is applied when assembling eigenvectors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import oracle
from .models import LadderSpectrum, build_ladder, harmonic
from .twochannel import HamiltonianParts, build_hamiltonian


@dataclass(frozen=True)
class SpectrumTable:
    """Per-pair closed-form spectral data; row m covers the pair (upper m, lower m+1)."""

    levels: int
    Omega: float
    Delta: float
    hbar: float
    pair_energies: np.ndarray  # E_{m+1}
    energies_plus: np.ndarray
    energies_minus: np.ndarray
    lambda_plus: np.ndarray
    lambda_minus: np.ndarray
    c_up_plus: np.ndarray
    c_low_plus: np.ndarray
    c_up_minus: np.ndarray
    c_low_minus: np.ndarray
    singlet_energy: float

    @property
    def pair_count(self) -> int:
        return self.levels - 1

    def all_energies(self) -> np.ndarray:
        """Multiset of every closed-form eigenvalue, singlet included (unsorted)."""
        return np.concatenate([self.energies_plus, self.energies_minus, [self.singlet_energy]])

    def eigenvector(self, m: int, branch: str) -> np.ndarray:
        """Two-channel eigenvector for pair m, branch '+' or '-'.

        The minus branch carries the -1 channel-block sign on its lower
        component.
        """
        if branch not in ("+", "-"):
            raise ValueError(f"branch must be '+' or '-', got {branch!r}")
        vec = np.zeros(2 * self.levels - 1, dtype=complex)
        if branch == "+":
            vec[m] = self.c_up_plus[m]
            vec[self.levels - 1 + m + 1] = self.c_low_plus[m]
        else:
            vec[m] = self.c_up_minus[m]
            vec[self.levels - 1 + m + 1] = -self.c_low_minus[m]
        return vec


def analytic_spectrum(ladder: LadderSpectrum, Omega, Delta, hbar=1.0) -> SpectrumTable:
    """Closed-form spectrum table for a valid ladder."""
    alpha = math.sqrt(hbar * Omega)
    beta = hbar * Delta / alpha
    ep = ladder.paired_energies
    root = np.sqrt(hbar * Omega * ep + (hbar * Delta) ** 2)  # = alpha * rho
    rho = np.sqrt(ep + beta**2)
    c_up_plus = np.sqrt((rho + beta) / (2.0 * rho))
    c_low_plus = np.sqrt((rho - beta) / (2.0 * rho))
    return SpectrumTable(
        levels=ladder.levels,
        Omega=Omega,
        Delta=Delta,
        hbar=hbar,
        pair_energies=ep,
        energies_plus=ep + root,
        energies_minus=ep - root,
        lambda_plus=alpha * rho,
        lambda_minus=-alpha * rho,
        c_up_plus=c_up_plus,
        c_low_plus=c_low_plus,
        c_up_minus=c_low_plus.copy(),
        c_low_minus=c_up_plus.copy(),
        singlet_energy=-hbar * Delta,
    )


def resonant_limits(ladder: LadderSpectrum, Omega, hbar=1.0) -> SpectrumTable:
    """Resonant (Delta = 0) table: same code path, all amplitudes 1/sqrt(2)."""
    return analytic_spectrum(ladder, Omega, 0.0, hbar)


@dataclass(frozen=True)
class StandardJCCoefficients:
    """Dimensionless mixing data of the single-mode harmonic limit."""

    omega: float
    omega_o: float
    delta_m: np.ndarray
    gamma_plus: np.ndarray
    gamma_minus: np.ndarray


def standard_jc_spectrum(omega, omega_o, Omega, m_max, hbar=1.0):
    """Harmonic-limit spectrum through pair index m_max.

    Returns (SpectrumTable, StandardJCCoefficients); equal to the general
    path on a harmonic ladder with Delta = omega - omega_o.
    """
    if not omega > 0:
        raise ValueError(f"omega must be > 0, got {omega}")
    if not Omega > 0:
        raise ValueError(f"Omega must be > 0, got {Omega}")
    if m_max < 0:
        raise ValueError(f"m_max must be >= 0, got {m_max}")
    detuning = omega - omega_o
    m = np.arange(m_max + 1)
    ep = (m + 1) * hbar * omega
    root = hbar * np.sqrt(Omega * omega * (m + 1) + detuning**2)
    delta_m = detuning / np.sqrt((m + 1) * Omega * omega)
    gamma_plus = np.sqrt(1.0 + delta_m**2) - delta_m
    gamma_minus = np.sqrt(1.0 + delta_m**2) + delta_m
    c_plus = 1.0 / np.sqrt(1.0 + gamma_plus**2)
    c_minus = 1.0 / np.sqrt(1.0 + gamma_minus**2)
    table = SpectrumTable(
        levels=m_max + 2,
        Omega=Omega,
        Delta=detuning,
        hbar=hbar,
        pair_energies=ep,
        energies_plus=ep + root,
        energies_minus=ep - root,
        lambda_plus=root,
        lambda_minus=-root,
        c_up_plus=c_plus,
        c_low_plus=c_minus,
        c_up_minus=c_minus.copy(),
        c_low_minus=c_plus.copy(),
        singlet_energy=-hbar * detuning,
    )
    coeffs = StandardJCCoefficients(omega, omega_o, delta_m, gamma_plus, gamma_minus)
    return table, coeffs


@dataclass(frozen=True)
class OracleComparison:
    """Pairing of the closed-form eigenvalue multiset against brute force."""

    oracle_plus: np.ndarray
    oracle_minus: np.ndarray
    oracle_singlet: float
    pairing_residual: float
    eigenvector_residual: float


def oracle_comparison(table: SpectrumTable, parts: HamiltonianParts) -> OracleComparison:
    """Match the analytic multiset to eigh eigenvalues and check eigenvectors.

    Both multisets are sorted and aligned; the back-pointers recover which
    oracle value belongs to which (m, branch) row.
    """
    analytic = table.all_energies()
    order = np.argsort(analytic, kind="stable")
    dec = oracle.diagonalize(parts.total)
    paired = np.empty_like(analytic)
    paired[order] = dec.eigenvalues  # both ascending after the permutation
    pairing_residual = float(np.max(np.abs(analytic - paired)))

    n_pairs = table.pair_count
    h = parts.total.matrix
    vec_res = 0.0
    for m in range(n_pairs):
        for branch, energy in (("+", table.energies_plus[m]), ("-", table.energies_minus[m])):
            v = table.eigenvector(m, branch)
            vec_res = max(vec_res, float(np.max(np.abs(h @ v - energy * v))))
    return OracleComparison(
        oracle_plus=paired[:n_pairs],
        oracle_minus=paired[n_pairs : 2 * n_pairs],
        oracle_singlet=float(paired[-1]),
        pairing_residual=pairing_residual,
        eigenvector_residual=vec_res,
    )


def spectrum_invariant_residuals(table: SpectrumTable) -> dict:
    """Closed-form self-consistency residuals (orthonormality, ratio relation, gaps)."""
    res = {}
    res["orthonormality"] = float(
        max(
            np.max(np.abs(table.c_up_plus**2 + table.c_low_plus**2 - 1.0)),
            np.max(np.abs(table.c_up_minus**2 + table.c_low_minus**2 - 1.0)),
        )
    )
    # cross-branch combination with the minus-branch lower sign applied
    res["cross_branch"] = float(
        np.max(np.abs(table.c_up_plus * table.c_up_minus - table.c_low_plus * table.c_low_minus))
    )
    alpha = math.sqrt(table.hbar * table.Omega)
    beta = table.hbar * table.Delta / alpha
    s = np.sqrt(table.pair_energies)
    rho = np.sqrt(table.pair_energies + beta**2)
    res["ratio_relation"] = float(
        max(
            np.max(np.abs(table.c_low_plus * s - (rho - beta) * table.c_up_plus)),
            np.max(np.abs(table.c_low_minus * s - (rho + beta) * table.c_up_minus)),
        )
    )
    res["lambda_consistency"] = float(
        max(
            np.max(np.abs(table.lambda_plus - alpha * rho)),
            np.max(np.abs(table.energies_plus - table.pair_energies - table.lambda_plus)),
            np.max(np.abs(table.energies_minus - table.pair_energies - table.lambda_minus)),
        )
    )
    res["branch_gap"] = float(
        np.max(
            np.abs(
                (table.energies_plus - table.energies_minus)
                - 2.0 * np.sqrt(table.hbar * table.Omega * table.pair_energies + (table.hbar * table.Delta) ** 2)
            )
        )
    )
    return res


def standard_jc_consistency(omega, omega_o, Omega, m_max, hbar=1.0) -> float:
    """Max deviation between the harmonic-limit path and the general path."""
    jc_table, _ = standard_jc_spectrum(omega, omega_o, Omega, m_max, hbar)
    model = harmonic(omega=omega, Omega=Omega, Delta=omega - omega_o, hbar=hbar)
    ladder = build_ladder(model, m_max + 2)
    general = analytic_spectrum(ladder, Omega, omega - omega_o, hbar)
    deviations = [
        np.max(np.abs(jc_table.energies_plus - general.energies_plus)),
        np.max(np.abs(jc_table.energies_minus - general.energies_minus)),
        np.max(np.abs(jc_table.lambda_plus - general.lambda_plus)),
        np.max(np.abs(jc_table.c_up_plus - general.c_up_plus)),
        np.max(np.abs(jc_table.c_low_plus - general.c_low_plus)),
        np.max(np.abs(jc_table.c_up_minus - general.c_up_minus)),
        np.max(np.abs(jc_table.c_low_minus - general.c_low_minus)),
        abs(jc_table.singlet_energy - general.singlet_energy),
    ]
    return float(max(deviations))
