"""Truncated bosonic Fock space over the discretized single-particle space.

Basis states are occupation vectors with total photon number up to a
cap, ordered by grade (total photon number) and, inside a grade, by
descending occupation of the earliest modes. Grades are therefore
contiguous index ranges, which downstream block slicing relies on.

Annihilation is antilinear in the form factor (conjugated amplitudes);
creation is defined as the matrix adjoint of annihilation, so the two
are exactly mutually adjoint on the truncated space. The top grade maps
partially out of the space under creation and is clipped; identities
that truncation would otherwise break are exact again on total-excitation
sectors below the cap (see :mod:`spinboson.model`).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError
from .field import DispersionGrid, FormFactor

__all__ = [
    "FockBasis",
    "enumerate_basis",
    "number_diagonal",
    "number_operator",
    "annihilation",
    "creation",
    "fock_scale_norm",
]


@dataclass(frozen=True)
class FockBasis:
    """Ordered occupation-vector basis with total photon number ``<= n_max``."""

    mode_count: int
    max_total_photons: int
    states: tuple
    index: dict
    grade_offsets: tuple

    @property
    def dimension(self) -> int:
        return len(self.states)

    def grade_slice(self, n: int) -> slice:
        """Index range of the grade with exactly ``n`` photons."""
        return slice(self.grade_offsets[n], self.grade_offsets[n + 1])

    def grades(self) -> np.ndarray:
        """Total photon number of every basis state, in basis order."""
        return np.array([sum(s) for s in self.states])


def _grade_states(modes: int, total: int):
    # first-mode occupation descending; recursion keeps each grade contiguous
    if modes == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for tail in _grade_states(modes - 1, total - head):
            yield (head,) + tail


def enumerate_basis(mode_count: int, n_max: int) -> FockBasis:
    """Enumerate all occupation vectors with total photon number ``<= n_max``.

    The dimension is ``comb(mode_count + n_max, n_max)``. State lookup by
    occupation tuple is O(1) through the stored index map.
    """
    if mode_count < 1:
        raise ConfigError("mode_count must be at least 1")
    if n_max < 0:
        raise ConfigError("n_max must be nonnegative")
    states = []
    offsets = [0]
    for total in range(n_max + 1):
        states.extend(_grade_states(mode_count, total))
        offsets.append(len(states))
    states = tuple(states)
    assert len(states) == comb(mode_count + n_max, n_max)
    index = {s: i for i, s in enumerate(states)}
    return FockBasis(mode_count, n_max, states, index, tuple(offsets))


def _check_modes(grid: DispersionGrid, basis: FockBasis):
    if grid.mode_count != basis.mode_count:
        raise ConfigError(
            f"grid has {grid.mode_count} modes but basis has {basis.mode_count}"
        )


def number_diagonal(grid: DispersionGrid, basis: FockBasis) -> np.ndarray:
    """Diagonal of the second-quantized dispersion: ``sum_i omega_i n_i`` per state."""
    _check_modes(grid, basis)
    occ = np.array(basis.states, dtype=float)
    return occ @ grid.omega


def number_operator(grid: DispersionGrid, basis: FockBasis) -> sp.csr_matrix:
    """Second quantization of the dispersion as a diagonal sparse matrix.

    Hermitian and nonnegative; the vacuum entry is 0 and every nonzero
    entry is at least the mass gap when the grid validates.
    """
    return sp.diags(number_diagonal(grid, basis), format="csr", dtype=complex)


def annihilation(f: FormFactor, grid: DispersionGrid, basis: FockBasis) -> sp.csr_matrix:
    """Matrix of the smeared annihilator ``sum_i sqrt(w_i) conj(f_i) a_i``.

    Each single-mode ``a_i`` lowers mode ``i`` with amplitude
    ``sqrt(n_i)``, so the operator maps grade n into grade n-1 and kills
    the vacuum. Antilinear in ``f``; :func:`creation` is the matrix
    adjoint, hence exactly mutually adjoint to this one.
    """
    _check_modes(grid, basis)
    if len(f) != grid.mode_count:
        raise ConfigError(
            f"form factor has {len(f)} amplitudes but grid has "
            f"{grid.mode_count} modes"
        )
    coeff = np.sqrt(grid.weights) * np.conj(f.amplitudes)
    rows, cols, vals = [], [], []
    for col, state in enumerate(basis.states):
        for i in range(basis.mode_count):
            n_i = state[i]
            if n_i == 0 or coeff[i] == 0:
                continue
            lowered = state[:i] + (n_i - 1,) + state[i + 1:]
            rows.append(basis.index[lowered])
            cols.append(col)
            vals.append(coeff[i] * np.sqrt(n_i))
    mat = sp.csr_matrix(
        (vals, (rows, cols)),
        shape=(basis.dimension, basis.dimension),
        dtype=complex,
    )
    mat.sum_duplicates()
    return mat


def creation(f: FormFactor, grid: DispersionGrid, basis: FockBasis) -> sp.csr_matrix:
    """Matrix adjoint of :func:`annihilation`; linear in ``f``.

    Transitions out of the top grade are clipped by the truncation.
    """
    return annihilation(f, grid, basis).getH().tocsr()


def fock_scale_norm(psi: np.ndarray, grid: DispersionGrid, basis: FockBasis,
                    s: float) -> float:
    """Scale norm ``|| (dGamma(omega) + 1)^(s/2) psi ||`` on the truncated space."""
    psi = np.asarray(psi)
    if psi.shape != (basis.dimension,):
        raise ConfigError(f"state must have shape ({basis.dimension},)")
    weights = (number_diagonal(grid, basis) + 1.0) ** (s / 2.0)
    return float(np.linalg.norm(weights * psi))
