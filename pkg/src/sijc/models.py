"""Shape-invariant models as remainder sequences, and their energy ladders.

A model is specified purely algebraically: a catalog formula for the
remainder sequence R_k plus the coupling constants (Omega, Delta, hbar).
Partial sums of R_k give the bound-state ladder E_0 = 0, E_n = sum_{k<=n} R_k.
Everything downstream takes square roots of ladder energies, so validity
(R_k > 0 over the requested range) is enforced eagerly here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping

import numpy as np

MODEL_KINDS = ("harmonic", "morse_class", "scaling_class")

_REQUIRED_PARAMS = {
    "harmonic": ("omega",),
    "morse_class": ("c1", "c2"),
    "scaling_class": ("r1", "q"),
}


class ModelValidityError(ValueError):
    """A remainder R_k <= 0 inside the requested truncation range.

    Attributes carry the first offending index and the largest admissible
    level count so callers can retry with a smaller truncation.
    """

    def __init__(self, message, first_invalid_k=None, max_levels=None):
        super().__init__(message)
        self.first_invalid_k = first_invalid_k
        self.max_levels = max_levels


@dataclass(frozen=True)
class ShapeInvariantModel:
    """A catalog remainder sequence plus couplings.

    kind:   one of "harmonic" (R_k = hbar*omega), "morse_class"
            (R_k = c1 - c2*(2k - 1)) or "scaling_class" (R_k = r1 * q**(k-1)).
    params: catalog parameters for the chosen kind.
    Omega:  coupling strength, > 0 (energy/hbar units).
    Delta:  detuning, any real (energy/hbar units); 0 is the resonant limit.
    hbar:   action constant, > 0.
    """

    kind: str
    params: Mapping[str, float]
    Omega: float
    Delta: float = 0.0
    hbar: float = 1.0

    def __post_init__(self):
        if self.kind not in MODEL_KINDS:
            raise ValueError(f"unknown model kind {self.kind!r}; expected one of {MODEL_KINDS}")
        missing = [p for p in _REQUIRED_PARAMS[self.kind] if p not in self.params]
        if missing:
            raise ValueError(f"model kind {self.kind!r} missing params {missing}")
        object.__setattr__(self, "params", MappingProxyType(dict(self.params)))
        if not self.Omega > 0:
            raise ValueError(f"Omega must be > 0, got {self.Omega}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be > 0, got {self.hbar}")
        p = self.params
        if self.kind == "harmonic" and not p["omega"] > 0:
            raise ValueError(f"harmonic omega must be > 0, got {p['omega']}")
        if self.kind == "morse_class":
            if not p["c1"] > 0:
                raise ValueError(f"morse_class c1 must be > 0, got {p['c1']}")
            if p["c2"] < 0:
                raise ValueError(f"morse_class c2 must be >= 0, got {p['c2']}")
        if self.kind == "scaling_class":
            if not p["r1"] > 0:
                raise ValueError(f"scaling_class r1 must be > 0, got {p['r1']}")
            if not 0 < p["q"] < 1:
                raise ValueError(f"scaling_class q must be in (0, 1), got {p['q']}")

    @property
    def alpha(self) -> float:
        """sqrt(hbar * Omega), the off-diagonal coupling scale."""
        return math.sqrt(self.hbar * self.Omega)

    @property
    def beta(self) -> float:
        """hbar * Delta / alpha, the dimensionless detuning."""
        return self.hbar * self.Delta / self.alpha


def harmonic(omega=1.0, Omega=1.0, Delta=0.0, hbar=1.0) -> ShapeInvariantModel:
    return ShapeInvariantModel("harmonic", {"omega": omega}, Omega, Delta, hbar)


def morse_class(c1, c2, Omega=1.0, Delta=0.0, hbar=1.0) -> ShapeInvariantModel:
    return ShapeInvariantModel("morse_class", {"c1": c1, "c2": c2}, Omega, Delta, hbar)


def scaling_class(r1, q, Omega=1.0, Delta=0.0, hbar=1.0) -> ShapeInvariantModel:
    return ShapeInvariantModel("scaling_class", {"r1": r1, "q": q}, Omega, Delta, hbar)


def remainder(model: ShapeInvariantModel, k: int) -> float:
    """Catalog remainder R_k, k >= 1.

    Raises ModelValidityError if R_k <= 0 (the ladder stops being real there).
    """
    if k < 1:
        raise ValueError(f"remainder index must be >= 1, got {k}")
    p = model.params
    if model.kind == "harmonic":
        value = model.hbar * p["omega"]
    elif model.kind == "morse_class":
        value = p["c1"] - p["c2"] * (2 * k - 1)
    else:
        value = p["r1"] * p["q"] ** (k - 1)
    if value <= 0:
        raise ModelValidityError(
            f"{model.kind} remainder R_{k} = {value} is not positive",
            first_invalid_k=k,
            max_levels=max_level_count(model),
        )
    return value


def _max_remainder_index(model: ShapeInvariantModel):
    """Largest k with R_k > 0, or None if unbounded."""
    if model.kind != "morse_class" or model.params["c2"] == 0:
        return None
    c1, c2 = model.params["c1"], model.params["c2"]
    k = math.floor((c1 + c2) / (2 * c2))
    # boundary case R_k == 0 exactly
    while k >= 1 and c1 - c2 * (2 * k - 1) <= 0:
        k -= 1
    return k


def max_level_count(model: ShapeInvariantModel):
    """Largest admissible ladder size N (needs R_1..R_{N-1} > 0); None if unlimited."""
    k = _max_remainder_index(model)
    return None if k is None else k + 1


@dataclass(frozen=True)
class ValidityReport:
    """Outcome of validate_model: report-valued, never raises."""

    valid: bool
    requested_levels: int
    first_invalid_k: int | None
    max_levels: int | None  # None means unlimited

    def __str__(self):
        if self.valid:
            bound = "unlimited" if self.max_levels is None else f"N <= {self.max_levels}"
            return f"valid for N = {self.requested_levels} ({bound})"
        return (
            f"invalid beyond k = {self.first_invalid_k - 1}: R_{self.first_invalid_k} <= 0; "
            f"max admissible N = {self.max_levels}"
        )


def validate_model(model: ShapeInvariantModel, levels: int) -> ValidityReport:
    """Check R_1..R_{levels-1} > 0 and report the first failure, if any."""
    max_n = max_level_count(model)
    if max_n is None or levels <= max_n:
        return ValidityReport(True, levels, None, max_n)
    return ValidityReport(False, levels, first_invalid_k=max_n, max_levels=max_n)


@dataclass(frozen=True)
class LadderSpectrum:
    """Truncated exact ladder: energies[0] = 0 and energies[n] - energies[n-1] = remainders[n-1].

    Built by cumulative summation, so the difference identity holds bit-exactly.
    """

    levels: int
    energies: np.ndarray  # shape (levels,)
    remainders: np.ndarray  # shape (levels - 1,), R_1..R_{levels-1}

    def __post_init__(self):
        object.__setattr__(self, "energies", np.asarray(self.energies, dtype=float))
        object.__setattr__(self, "remainders", np.asarray(self.remainders, dtype=float))
        self.energies.setflags(write=False)
        self.remainders.setflags(write=False)

    @property
    def paired_energies(self) -> np.ndarray:
        """E_1..E_{levels-1}: the energies carried by the two-channel pairs."""
        return self.energies[1:]


def build_ladder(model: ShapeInvariantModel, levels: int) -> LadderSpectrum:
    """Exact ladder E_0..E_{levels-1}; raises ModelValidityError if the range is invalid."""
    if levels < 2:
        raise ValueError(f"need at least 2 levels, got {levels}")
    report = validate_model(model, levels)
    if not report.valid:
        raise ModelValidityError(
            f"{model.kind} ladder invalid at k = {report.first_invalid_k} "
            f"(max admissible N = {report.max_levels}, requested {levels})",
            first_invalid_k=report.first_invalid_k,
            max_levels=report.max_levels,
        )
    rem = np.array([remainder(model, k) for k in range(1, levels)])
    energies = np.concatenate(([0.0], np.cumsum(rem)))
    return LadderSpectrum(levels, energies, rem)
