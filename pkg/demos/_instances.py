"""Model instances shared by the demo scripts."""

import numpy as np

from spinboson import DispersionGrid, FormFactor, ModelSpec, SpinParams


def single_spin_spec() -> ModelSpec:
    """One spin at gap 1, one mode at frequency 2, unit coupling."""
    grid = DispersionGrid(np.array([1.0]), np.array([1.0]), np.array([2.0]), 1.0)
    spin = SpinParams(np.array([1.0]), np.array([0.0]), np.zeros((1, 1), dtype=complex))
    return ModelSpec(spin, grid, (FormFactor(np.array([1.0 + 0.0j])),), 2)


def two_spin_spec() -> ModelSpec:
    grid = DispersionGrid(np.array([1.0, 2.0]), np.array([1.0, 0.5]),
                          np.array([2.0, 3.0]), 1.5)
    spin = SpinParams(np.array([1.0, 1.3]), np.array([0.1, 0.0]),
                      np.zeros((2, 2), dtype=complex))
    f1 = FormFactor(np.array([0.7 + 0.1j, -0.2 + 0.0j]))
    f2 = FormFactor(np.array([0.3 - 0.4j, 0.5 + 0.2j]))
    return ModelSpec(spin, grid, (f1, f2), 2)
