"""Exact finite two-channel matrix representation of the ladder algebra.

Basis and layout
----------------
For a ladder with N levels the two-channel space has dimension 2N - 1:

* upper channel (spin-up), indices 0..N-2, basis vectors paired with ladder
  levels 1..N-1 (upper index m carries energy E_{m+1});
* lower channel (spin-down), indices 0..N-1, basis vectors at ladder levels
  0..N-1 (lower index n carries energy E_n).

Global index order is upper block first, then lower block.  The Hamiltonian
decomposes exactly into N-1 invariant 2-dim pairs {upper m, lower m+1} plus
the uncoupled lower ground state (the "singlet"), so truncation introduces
no error anywhere.

The shift L maps lower -> upper with weights sqrt(E_{m+1}); its weight-root
W carries E_{m+1}**(1/4) on the same pattern.  Appendix-style operator
strings are realized per pair: upper-channel diagonals evaluate at pair
index m, lower-channel diagonals at m+1, and each weight-root factor
contributes one quarter power of the pair energy.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .models import LadderSpectrum

PHASE_PLUS_I = "plus_i"
PHASE_MINUS_I = "minus_i"
_PHASES = {PHASE_PLUS_I: 1j, PHASE_MINUS_I: -1j}


def phase_value(phase: str) -> complex:
    try:
        return _PHASES[phase]
    except KeyError:
        raise ValueError(f"phase must be one of {sorted(_PHASES)}, got {phase!r}") from None


class DomainError(ValueError):
    """A scalar function was applied outside its domain on a diagonal entry."""


@dataclass
class TwoChannelOperator:
    """Dense complex operator on the (2N-1)-dimensional two-channel space."""

    upper_dim: int
    lower_dim: int
    matrix: np.ndarray

    def __post_init__(self):
        dim = self.upper_dim + self.lower_dim
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (dim, dim):
            raise ValueError(
                f"matrix shape {self.matrix.shape} inconsistent with "
                f"(upper_dim, lower_dim) = ({self.upper_dim}, {self.lower_dim})"
            )

    @property
    def dim(self) -> int:
        return self.upper_dim + self.lower_dim

    # block views (uu: upper->upper, ul: lower->upper, lu: upper->lower, ll: lower->lower)
    @property
    def uu(self) -> np.ndarray:
        return self.matrix[: self.upper_dim, : self.upper_dim]

    @property
    def ul(self) -> np.ndarray:
        return self.matrix[: self.upper_dim, self.upper_dim :]

    @property
    def lu(self) -> np.ndarray:
        return self.matrix[self.upper_dim :, : self.upper_dim]

    @property
    def ll(self) -> np.ndarray:
        return self.matrix[self.upper_dim :, self.upper_dim :]

    def dagger(self) -> "TwoChannelOperator":
        return TwoChannelOperator(self.upper_dim, self.lower_dim, self.matrix.conj().T)

    def hermiticity_residual(self) -> float:
        return float(np.max(np.abs(self.matrix - self.matrix.conj().T)))

    def is_hermitian(self, rtol=1e-13) -> bool:
        scale = max(float(np.max(np.abs(self.matrix))), 1.0)
        return self.hermiticity_residual() < rtol * scale

    def __add__(self, other):
        return TwoChannelOperator(self.upper_dim, self.lower_dim, self.matrix + other.matrix)

    def __sub__(self, other):
        return TwoChannelOperator(self.upper_dim, self.lower_dim, self.matrix - other.matrix)

    def __matmul__(self, other):
        if isinstance(other, TwoChannelOperator):
            return TwoChannelOperator(self.upper_dim, self.lower_dim, self.matrix @ other.matrix)
        return self.matrix @ other

    def __rmul__(self, scalar):
        return TwoChannelOperator(self.upper_dim, self.lower_dim, scalar * self.matrix)


def from_blocks(uu, ul, lu, ll) -> TwoChannelOperator:
    upper_dim, lower_dim = np.shape(uu)[0], np.shape(ll)[0]
    m = np.zeros((upper_dim + lower_dim, upper_dim + lower_dim), dtype=complex)
    m[:upper_dim, :upper_dim] = uu
    m[:upper_dim, upper_dim:] = ul
    m[upper_dim:, :upper_dim] = lu
    m[upper_dim:, upper_dim:] = ll
    return TwoChannelOperator(upper_dim, lower_dim, m)


def zero_operator(levels: int) -> TwoChannelOperator:
    dim = 2 * levels - 1
    return TwoChannelOperator(levels - 1, levels, np.zeros((dim, dim), dtype=complex))


def identity_operator(levels: int) -> TwoChannelOperator:
    dim = 2 * levels - 1
    return TwoChannelOperator(levels - 1, levels, np.eye(dim, dtype=complex))


def channel_diagonal(upper_values, lower_values) -> TwoChannelOperator:
    """Block-diagonal operator from per-channel diagonal value arrays."""
    values = np.concatenate([np.asarray(upper_values), np.asarray(lower_values)])
    n_up = len(np.asarray(upper_values))
    return TwoChannelOperator(n_up, len(values) - n_up, np.diag(values.astype(complex)))


def lower_basis_state(levels: int, n: int) -> np.ndarray:
    """Amplitude vector for spin-down, ladder level n."""
    if not 0 <= n <= levels - 1:
        raise ValueError(f"lower level must be in 0..{levels - 1}, got {n}")
    vec = np.zeros(2 * levels - 1, dtype=complex)
    vec[levels - 1 + n] = 1.0
    return vec


def upper_basis_state(levels: int, m: int) -> np.ndarray:
    """Amplitude vector for spin-up, shifted-basis index m (pair m)."""
    if not 0 <= m <= levels - 2:
        raise ValueError(f"upper index must be in 0..{levels - 2}, got {m}")
    vec = np.zeros(2 * levels - 1, dtype=complex)
    vec[m] = 1.0
    return vec


def singlet_index(levels: int) -> int:
    """Global index of the uncoupled lower ground state."""
    return levels - 1


def paired_indices(levels: int) -> np.ndarray:
    """All global indices except the singlet."""
    return np.array([i for i in range(2 * levels - 1) if i != singlet_index(levels)])


@dataclass(frozen=True)
class ShiftOperator:
    """Weighted shift lower -> upper: |m+1>_2 -> weights[m] * (T|m>)_1.

    weights[m] = sqrt(E_{m+1}); annihilates the lower ground state by
    construction (its block has no column * n = 0 entry).
    """

    weights: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        self.weights.setflags(write=False)

    @property
    def upper_dim(self) -> int:
        return len(self.weights)

    @property
    def lower_dim(self) -> int:
        return len(self.weights) + 1

    def block(self) -> np.ndarray:
        """(N-1) x N matrix with weights on the (m, m+1) diagonal."""
        b = np.zeros((self.upper_dim, self.lower_dim))
        b[np.arange(self.upper_dim), np.arange(1, self.lower_dim)] = self.weights
        return b

    def as_operator(self) -> TwoChannelOperator:
        """Embed as the lower->upper block of a full two-channel operator."""
        up, low = self.upper_dim, self.lower_dim
        return from_blocks(
            np.zeros((up, up)), self.block(), np.zeros((low, up)), np.zeros((low, low))
        )


def build_shift(ladder: LadderSpectrum) -> ShiftOperator:
    """Shift with weights sqrt(E_{m+1}) from a valid ladder."""
    return ShiftOperator(np.sqrt(ladder.paired_energies))


def shift_block(ladder: LadderSpectrum, exponent=0.5) -> np.ndarray:
    """(N-1) x N shift-pattern block with weights E_{m+1}**exponent.

    exponent 0.5 gives the shift itself, 0.25 its weight-root.
    """
    n_up = ladder.levels - 1
    b = np.zeros((n_up, ladder.levels))
    b[np.arange(n_up), np.arange(1, ladder.levels)] = ladder.paired_energies**exponent
    return b


def weight_root_shift(ladder: LadderSpectrum) -> TwoChannelOperator:
    """Weight-root of the shift: same pattern, weights E_{m+1}**(1/4)."""
    n_up, n_low = ladder.levels - 1, ladder.levels
    return from_blocks(
        np.zeros((n_up, n_up)),
        shift_block(ladder, 0.25),
        np.zeros((n_low, n_up)),
        np.zeros((n_low, n_low)),
    )


def sigma3_operator(levels: int) -> TwoChannelOperator:
    """Population-difference operator: +1 on the upper channel, -1 on the lower."""
    return channel_diagonal(np.ones(levels - 1), -np.ones(levels))


def coupling_operator(ladder: LadderSpectrum) -> TwoChannelOperator:
    """The off-diagonal channel coupling: shift in the ul block, its adjoint in lu."""
    L = shift_block(ladder, 0.5)
    n_up, n_low = ladder.levels - 1, ladder.levels
    return from_blocks(np.zeros((n_up, n_up)), L, L.T, np.zeros((n_low, n_low)))


@dataclass(frozen=True)
class HamiltonianParts:
    """Full Hamiltonian and its commuting split H = h_free + h_coupling.

    h_free is the squared coupling operator (block-diagonal with the paired
    energies); h_coupling = alpha * S + hbar*Delta * sigma3.
    """

    total: TwoChannelOperator
    h_free: TwoChannelOperator
    h_coupling: TwoChannelOperator
    s_op: TwoChannelOperator
    shift: ShiftOperator
    alpha: float
    beta: float
    hbar: float


def build_hamiltonian(ladder: LadderSpectrum, Omega, Delta, hbar=1.0) -> HamiltonianParts:
    """Assemble the two-channel Hamiltonian and its parts.

    uu block: diag(E_{m+1}) + hbar*Delta; ll block: diag(E_n) - hbar*Delta;
    off-diagonal blocks alpha*L and alpha*L^dag.
    """
    if not Omega > 0:
        raise ValueError(f"Omega must be > 0, got {Omega}")
    if not hbar > 0:
        raise ValueError(f"hbar must be > 0, got {hbar}")
    alpha = float(np.sqrt(hbar * Omega))
    beta = hbar * Delta / alpha
    shift = build_shift(ladder)
    s_op = coupling_operator(ladder)
    h_free = channel_diagonal(ladder.paired_energies, ladder.energies)
    sigma3 = sigma3_operator(ladder.levels)
    h_coupling = TwoChannelOperator(
        ladder.levels - 1,
        ladder.levels,
        alpha * s_op.matrix + hbar * Delta * sigma3.matrix,
    )
    total = h_free + h_coupling
    return HamiltonianParts(total, h_free, h_coupling, s_op, shift, alpha, beta, hbar)


def op_function(op: TwoChannelOperator, func, name=None) -> TwoChannelOperator:
    """Apply a scalar function entrywise to a diagonal two-channel operator.

    The operator must be diagonal in the channel basis with real entries;
    a non-finite result names the offending global index.
    """
    off = op.matrix - np.diag(np.diag(op.matrix))
    if np.max(np.abs(off)) != 0.0:
        raise DomainError("op_function requires a diagonal operator")
    d = np.diag(op.matrix)
    if np.max(np.abs(d.imag)) != 0.0:
        raise DomainError("op_function requires real diagonal entries")
    with np.errstate(invalid="ignore", divide="ignore"):
        values = np.asarray(func(d.real), dtype=complex)
    bad = np.where(~np.isfinite(values))[0]
    if bad.size:
        label = name or getattr(func, "__name__", "function")
        raise DomainError(f"{label} undefined at diagonal index {int(bad[0])} (value {d.real[bad[0]]})")
    return TwoChannelOperator(op.upper_dim, op.lower_dim, np.diag(values))


def build_cd(ladder: LadderSpectrum, phase: str = PHASE_PLUS_I):
    """The unitarity-fixed off-diagonal evolution operators (C, D = -C^dag).

    C = phase * H2**(-1/4) @ weight-root shift; the quarter powers cancel,
    leaving the pure shift times the phase.
    """
    p = phase_value(phase)
    n_up, n_low = ladder.levels - 1, ladder.levels
    inv_quarter = np.diag(ladder.paired_energies**-0.25)
    c_block = p * inv_quarter @ shift_block(ladder, 0.25)
    C = from_blocks(np.zeros((n_up, n_up)), c_block, np.zeros((n_low, n_up)), np.zeros((n_low, n_low)))
    D = TwoChannelOperator(n_up, n_low, -C.matrix.conj().T)
    return C, D


def pair_place(values, block: tuple, levels: int) -> np.ndarray:
    """Scatter per-pair scalars into a full matrix at the pair positions.

    block is (row_channel, col_channel) with 1 = upper, 2 = lower; pair m
    couples upper index m with lower index m+1.
    """
    values = np.asarray(values, dtype=complex)
    if values.shape != (levels - 1,):
        raise ValueError(f"expected {levels - 1} pair values, got shape {values.shape}")
    dim = 2 * levels - 1
    out = np.zeros((dim, dim), dtype=complex)
    m = np.arange(levels - 1)
    upper, lower = m, (levels - 1) + m + 1
    rows = {1: upper, 2: lower}[block[0]]
    cols = {1: upper, 2: lower}[block[1]]
    out[rows, cols] = values
    return out


@dataclass(frozen=True)
class IdentityReport:
    """Max-abs residuals of the operator-identity suite, plus known deviations."""

    residuals: dict
    informational: dict

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def identity_suite(ladder: LadderSpectrum, Omega, Delta, hbar=1.0) -> IdentityReport:
    """Evaluate the intertwining/product/commutator identities as finite matrices.

    All residuals are exact-zero candidates; the lower ground-state defect of
    C^dag C (which no faithful lowest-weight representation can avoid) is
    reported separately, not folded into the pass/fail residuals.
    """
    parts = build_hamiltonian(ladder, Omega, Delta, hbar)
    alpha, beta = parts.alpha, parts.beta
    N = ladder.levels
    E = ladder.energies
    Ep = ladder.paired_energies

    W = shift_block(ladder, 0.25)  # weight-root, lower -> upper
    Wd = W.T
    omega1 = np.sqrt(hbar * Omega * Ep + (hbar * Delta) ** 2) / hbar
    omega2 = np.sqrt(hbar * Omega * E + (hbar * Delta) ** 2) / hbar
    nu1 = 2.0 * np.sqrt(hbar * Omega * Ep) / hbar
    nu2 = 2.0 * np.sqrt(hbar * Omega * E) / hbar

    res = {}

    def maxabs(a):
        return float(np.max(np.abs(a))) if np.size(a) else 0.0

    # intertwining: W f(omega2) = f(omega1) W and the adjoint version, n = 1..4
    for n in range(1, 5):
        res[f"intertwine_lower_to_upper_n{n}"] = maxabs(W @ np.diag(omega2**n) - np.diag(omega1**n) @ W)
        res[f"intertwine_upper_to_lower_n{n}"] = maxabs(Wd @ np.diag(omega1**n) - np.diag(omega2**n) @ Wd)

    # weight-root products against quarter powers of the channel Hamiltonians
    C, D = build_cd(ladder, PHASE_PLUS_I)
    c_ul = C.ul
    h2_quarter = np.diag(Ep**0.25)
    h1_quarter = np.diag(E**0.25)
    res["root_product_upper"] = maxabs(c_ul @ Wd - 1j * h2_quarter)
    res["root_product_upper_alt"] = maxabs(-W @ c_ul.conj().T - 1j * h2_quarter)
    res["root_product_lower"] = maxabs(Wd @ c_ul - 1j * h1_quarter)
    res["root_product_lower_alt"] = maxabs(-c_ul.conj().T @ W - 1j * h1_quarter)

    # diagonal commutators (exact zeros by construction)
    res["commutator_nu1_h2"] = maxabs(np.diag(nu1) @ np.diag(Ep) - np.diag(Ep) @ np.diag(nu1))
    res["commutator_omega1_h2"] = maxabs(np.diag(omega1) @ np.diag(Ep) - np.diag(Ep) @ np.diag(omega1))
    res["commutator_nu2_h1"] = maxabs(np.diag(nu2) @ np.diag(E) - np.diag(E) @ np.diag(nu2))
    res["commutator_omega2_h1"] = maxabs(np.diag(omega2) @ np.diag(E) - np.diag(E) @ np.diag(omega2))

    # [sigma3, H] = -2 alpha S sigma3 and [S, H] = 2 alpha beta S sigma3
    sigma3 = sigma3_operator(N).matrix
    H = parts.total.matrix
    S = parts.s_op.matrix
    res["sigma3_h_commutator"] = maxabs((sigma3 @ H - H @ sigma3) + 2.0 * alpha * (S @ sigma3))
    res["s_h_commutator"] = maxabs((S @ H - H @ S) - 2.0 * alpha * beta * (S @ sigma3))

    # shape-invariance commutator on the lower-channel interior
    b_plus = np.zeros((N, N))
    b_plus[np.arange(1, N), np.arange(N - 1)] = np.sqrt(Ep)
    comm = b_plus.T @ b_plus - b_plus @ b_plus.T
    interior = np.ix_(range(N - 1), range(N - 1))
    res["ladder_commutator_interior"] = maxabs(comm[interior] - np.diag(ladder.remainders))

    # block structure of the squared coupling and the shift products
    s_sq = parts.s_op.matrix @ parts.s_op.matrix
    res["s_squared_blockdiag"] = maxabs(s_sq - parts.h_free.matrix)
    L = parts.shift.block()
    scale = max(float(E[-1]), 1.0)
    res["shift_product_lower"] = maxabs(L.T @ L - np.diag(E)) / scale
    res["shift_product_upper"] = maxabs(L @ L.T - np.diag(Ep)) / scale

    # unitarity of C/D on their natural domains
    res["cc_dagger_upper"] = maxabs(c_ul @ c_ul.conj().T - np.eye(N - 1))
    cdc = c_ul.conj().T @ c_ul
    res["cdagc_lower_excited"] = maxabs(cdc[1:, 1:] - np.eye(N - 1))
    res["c_annihilates_ground"] = maxabs(cdc[:, 0]) + maxabs(cdc[0, :])

    info = {
        "cdagc_ground_deviation": float(abs(cdc[0, 0] - 1.0)),  # = 1 in any faithful rep
        "hermiticity_residual": parts.total.hermiticity_residual(),
    }
    return IdentityReport(res, info)
