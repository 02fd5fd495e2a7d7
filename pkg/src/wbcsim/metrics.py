"""Fidelity metrics against the ideal four-qubit singlet state.

Classical fidelity compares a measured bitstring distribution with the
ideal one via the Bhattacharyya coefficient; quantum fidelity evaluates the
overlap of a reconstructed density matrix with the pure target state. Bit
order: qubit 1 is the leftmost character of a bitstring key.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import IO, Mapping

import numpy as np

from .source import OUTCOMES, ideal_distribution

ALL_BITSTRINGS: tuple[str, ...] = tuple(format(i, "04b") for i in range(16))
_TOL = 1e-9

# Target-state amplitudes (2, -1, -1, -1, -1, 2)/(2*sqrt(3)) on the six
# support bitstrings, zero elsewhere. The unnormalized integer vector keeps
# overlap arithmetic exact (squared norm 12); the normalized copy is exported
# for constructing reference density matrices.
_RAW_AMPLITUDES = {s: a for s, a in zip(OUTCOMES, (2, -1, -1, -1, -1, 2))}
_TARGET_RAW: np.ndarray = np.array([_RAW_AMPLITUDES.get(s, 0) for s in ALL_BITSTRINGS], dtype=float)
TARGET_STATE: np.ndarray = _TARGET_RAW / (2 * math.sqrt(3))


class InputFormatError(ValueError):
    """A counts or density-matrix file violates its format contract."""


@dataclass(frozen=True)
class BitstringDistribution:
    """Probability distribution over the 16 four-bit strings."""

    probs: tuple[float, ...]

    def __post_init__(self):
        if len(self.probs) != 16:
            raise ValueError("a bitstring distribution has 16 entries")
        if any(p < 0 for p in self.probs):
            raise ValueError("probabilities must be non-negative")
        if abs(sum(self.probs) - 1) > _TOL:
            raise ValueError(f"probabilities sum to {sum(self.probs)}, not 1")

    @classmethod
    def from_mapping(cls, weights: Mapping[str, float]) -> "BitstringDistribution":
        """Normalize non-negative weights keyed by four-bit strings."""
        for key in weights:
            if key not in ALL_BITSTRINGS:
                raise InputFormatError(f"unknown bitstring key {key!r}")
        total = float(sum(weights.values()))
        if total <= 0:
            raise InputFormatError("total weight must be positive")
        return cls(tuple(float(weights.get(s, 0)) / total for s in ALL_BITSTRINGS))

    @classmethod
    def ideal(cls) -> "BitstringDistribution":
        ref = ideal_distribution()
        return cls(tuple(float(ref[s]) for s in ALL_BITSTRINGS))

    @classmethod
    def uniform(cls) -> "BitstringDistribution":
        return cls((1 / 16,) * 16)


def classical_fidelity(p: BitstringDistribution, q: BitstringDistribution) -> float:
    """Bhattacharyya coefficient sum(sqrt(p_s * q_s)); symmetric, in [0, 1],
    1 iff the distributions coincide, 0 iff their supports are disjoint."""
    return float(sum(math.sqrt(a * b) for a, b in zip(p.probs, q.probs)))


@dataclass(frozen=True)
class DensityMatrix16:
    """16x16 density matrix: Hermitian, unit trace, positive semidefinite
    (all within 1e-9); violations are rejected naming the failed check."""

    matrix: np.ndarray

    def __post_init__(self):
        rho = np.asarray(self.matrix, dtype=complex)
        if rho.shape != (16, 16):
            raise ValueError(f"shape check failed: {rho.shape} != (16, 16)")
        if np.max(np.abs(rho - rho.conj().T)) > _TOL:
            raise ValueError("hermiticity check failed")
        if abs(np.trace(rho) - 1) > _TOL:
            raise ValueError(f"trace check failed: trace = {np.trace(rho)}")
        if np.min(np.linalg.eigvalsh(rho)) < -_TOL:
            raise ValueError("positivity check failed: negative eigenvalue")
        object.__setattr__(self, "matrix", rho)


def quantum_fidelity_pure_target(rho: DensityMatrix16) -> float:
    """Overlap <psi|rho|psi> with the pure singlet target state; the general
    Uhlmann fidelity reduces to this when the reference is pure."""
    value = _TARGET_RAW @ rho.matrix @ _TARGET_RAW / 12
    return float(value.real)


def ingest_counts(fh: IO[str]) -> BitstringDistribution:
    """Read a JSON object mapping four-bit strings to non-negative counts
    and return the normalized distribution."""
    try:
        raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"counts file is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise InputFormatError("counts file must be a JSON object of bitstring -> count")
    for key, value in raw.items():
        if key not in ALL_BITSTRINGS:
            raise InputFormatError(f"unknown bitstring key {key!r}")
        if not isinstance(value, (int, float)) or value < 0:
            raise InputFormatError(f"count for {key!r} must be a non-negative number")
    try:
        return BitstringDistribution.from_mapping(raw)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from exc


def ingest_density_matrix(fh: IO[str]) -> DensityMatrix16:
    """Read a JSON array of 16 rows x 16 [re, im] pairs."""
    try:
        raw = json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"density-matrix file is not valid JSON: {exc}") from exc
    try:
        arr = np.asarray(raw, dtype=float)
    except (TypeError, ValueError) as exc:
        raise InputFormatError(f"density-matrix file is not a numeric array: {exc}") from exc
    if arr.shape != (16, 16, 2):
        raise InputFormatError(f"density matrix must be 16 rows x 16 [re, im] pairs, got shape {arr.shape}")
    rho = arr[..., 0] + 1j * arr[..., 1]
    try:
        return DensityMatrix16(rho)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from exc
