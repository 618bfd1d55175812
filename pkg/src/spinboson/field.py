"""Discretized single-particle space: dispersion grid, form factors, cutoffs.

The continuum measure space is replaced by a finite quadrature grid
(mode labels, positive weights). Dispersion values live on the grid and
are bounded below by a positive mass gap. Form factors are complex
amplitudes per mode; their natural topology is the family of
omega-weighted scale norms, with the s = -1 member controlling both the
coupling-operator bounds and ultraviolet-cutoff convergence rates.

All containers are immutable after construction and all functions are
pure, so concurrent evaluation needs no synchronization.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError

__all__ = [
    "DispersionGrid",
    "FormFactor",
    "CutoffFamily",
    "GridReport",
    "scale_norm",
    "validate_grid",
    "cutoff_member",
    "truncate_form_factor",
]


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class DispersionGrid:
    """Finite quadrature realization of the single-particle space.

    Parameters
    ----------
    modes : array_like
        Mode labels ``k_i`` (real scalars, arbitrary units).
    weights : array_like
        Quadrature weights ``w_i``; expected positive (see
        :func:`validate_grid`).
    omega : array_like
        Dispersion values per mode; expected ``>= mass_gap``.
    mass_gap : float
        Lower bound ``m > 0`` for the dispersion (massive field).

    Notes
    -----
    Construction only enforces shape and finiteness so that defective
    grids can still be constructed and then diagnosed by
    :func:`validate_grid`, which reports every violating index.
    """

    modes: np.ndarray
    weights: np.ndarray
    omega: np.ndarray
    mass_gap: float

    def __post_init__(self):
        for name in ("modes", "weights", "omega"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.ndim != 1:
                raise ConfigError(f"{name} must be one-dimensional")
            if not np.all(np.isfinite(arr)):
                raise ConfigError(f"{name} contains non-finite entries")
            object.__setattr__(self, name, _readonly(arr))
        if not (len(self.modes) == len(self.weights) == len(self.omega)):
            raise ConfigError(
                "modes, weights and omega must have equal length; got "
                f"{len(self.modes)}, {len(self.weights)}, {len(self.omega)}"
            )
        if len(self.modes) < 1:
            raise ConfigError("grid needs at least one mode")
        if not np.isfinite(self.mass_gap):
            raise ConfigError("mass_gap must be finite")

    @property
    def mode_count(self) -> int:
        return len(self.modes)


@dataclass(frozen=True)
class FormFactor:
    """Complex coupling amplitudes, one per grid mode."""

    amplitudes: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.amplitudes, dtype=complex)
        if arr.ndim != 1:
            raise ConfigError("amplitudes must be one-dimensional")
        if not np.all(np.isfinite(arr)):
            raise ConfigError("amplitudes contain non-finite entries")
        object.__setattr__(self, "amplitudes", _readonly(arr))

    def __len__(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True)
class CutoffFamily:
    """Family of regularized form factors indexed by a cutoff threshold.

    ``profile`` maps an array of mode labels to complex amplitudes; the
    member at threshold ``lam`` keeps the profile on modes with
    dispersion ``<= lam`` and zeroes the rest. The thresholds must be
    strictly ascending.
    """

    profile: Callable[[np.ndarray], np.ndarray]
    cutoffs: tuple = dc_field(default=())

    def __post_init__(self):
        cuts = tuple(float(c) for c in self.cutoffs)
        if any(not np.isfinite(c) for c in cuts):
            raise ConfigError("cutoffs must be finite")
        if any(b <= a for a, b in zip(cuts, cuts[1:])):
            raise ConfigError("cutoffs must be strictly ascending")
        object.__setattr__(self, "cutoffs", cuts)


@dataclass(frozen=True)
class GridReport:
    """Outcome of :func:`validate_grid`; failures carry the violating indices."""

    passed: bool
    bad_omega: tuple
    bad_weights: tuple
    messages: tuple


def _check_compatible(f: FormFactor, grid: DispersionGrid):
    if len(f) != grid.mode_count:
        raise ConfigError(
            f"form factor has {len(f)} amplitudes but grid has "
            f"{grid.mode_count} modes"
        )


def scale_norm(f: FormFactor, grid: DispersionGrid, s: float) -> float:
    """Omega-weighted norm ``sqrt(sum_i w_i * omega_i**s * |f_i|**2)``.

    ``s = 0`` is the plain weighted L2 norm; ``s = -1`` is the norm
    controlling coupling-operator bounds and cutoff convergence.

    Raises
    ------
    ConfigError
        If the form factor length does not match the grid.
    """
    _check_compatible(f, grid)
    val = np.sum(grid.weights * grid.omega ** s * np.abs(f.amplitudes) ** 2)
    return float(np.sqrt(val))


def validate_grid(grid: DispersionGrid) -> GridReport:
    """Check positivity of weights and the dispersion lower bound.

    Passes iff every ``omega_i >= mass_gap > 0`` and every weight is
    positive. Violations are collected, never raised.
    """
    bad_omega = []
    bad_weights = []
    messages = []
    if not grid.mass_gap > 0:
        messages.append(f"mass_gap must be positive, got {grid.mass_gap}")
        bad_omega = list(range(grid.mode_count))
    else:
        bad_omega = [int(i) for i in np.nonzero(grid.omega < grid.mass_gap)[0]]
        for i in bad_omega:
            messages.append(
                f"omega[{i}] = {grid.omega[i]} is below the mass gap "
                f"{grid.mass_gap}; the dispersion must satisfy "
                "omega >= mass_gap > 0"
            )
    bad_weights = [int(i) for i in np.nonzero(grid.weights <= 0)[0]]
    for i in bad_weights:
        messages.append(f"weights[{i}] = {grid.weights[i]} is not positive")
    passed = not messages
    return GridReport(passed, tuple(bad_omega), tuple(bad_weights), tuple(messages))


def truncate_form_factor(f: FormFactor, grid: DispersionGrid, lam: float) -> FormFactor:
    """Ultraviolet truncation: zero every amplitude at modes with ``omega > lam``."""
    if not lam > 0:
        raise ConfigError(f"cutoff threshold must be positive, got {lam}")
    _check_compatible(f, grid)
    amps = np.where(grid.omega <= lam, f.amplitudes, 0.0 + 0.0j)
    return FormFactor(amps)


def cutoff_member(family: CutoffFamily, grid: DispersionGrid, lam: float) -> FormFactor:
    """Evaluate the family member at threshold ``lam`` on the grid.

    The member equals ``profile(k_i)`` where ``omega_i <= lam`` and zero
    elsewhere.
    """
    if not lam > 0:
        raise ConfigError(f"cutoff threshold must be positive, got {lam}")
    amps = np.asarray(family.profile(grid.modes), dtype=complex)
    if amps.shape != grid.modes.shape:
        raise ConfigError("profile must return one amplitude per mode")
    return truncate_form_factor(FormFactor(amps), grid, lam)
