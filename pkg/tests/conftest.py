"""Shared builders for fixed and randomized model instances."""

import numpy as np
import pytest

from spinboson import DispersionGrid, FormFactor, ModelSpec, SpinParams, assemble


def random_model_spec(rng, n_spins=None, n_modes=None, n_max=None):
    """Hermitian-valid random instance at desk scale.

    Magnitudes are kept order-one (dispersion in [1, 3], couplings below
    1) so entrywise identity checks at 1e-13 sit far above rounding.
    """
    N = int(rng.integers(1, 4)) if n_spins is None else n_spins
    M = int(rng.integers(1, 4)) if n_modes is None else n_modes
    nm = int(rng.integers(1, 4)) if n_max is None else n_max
    omega = np.sort(rng.uniform(1.0, 3.0, M))
    grid = DispersionGrid(np.arange(M, dtype=float),
                          rng.uniform(0.5, 1.5, M), omega, 1.0)
    e = rng.uniform(0.0, 2.0, N)
    g = rng.uniform(0.0, 2.0, N)
    v = rng.uniform(-0.5, 0.5, (N, N)) + 1j * rng.uniform(-0.5, 0.5, (N, N))
    v = (v + v.conj().T) / 2.0
    np.fill_diagonal(v, 0.0)
    ffs = tuple(FormFactor(rng.uniform(-1.0, 1.0, M) + 1j * rng.uniform(-1.0, 1.0, M))
                for _ in range(N))
    return ModelSpec(SpinParams(e, g, v), grid, ffs, nm)


def inst_a_spec():
    """Single spin, single mode at frequency 2, unit weight and coupling."""
    grid = DispersionGrid(np.array([1.0]), np.array([1.0]), np.array([2.0]), 1.0)
    spin = SpinParams(np.array([1.0]), np.array([0.0]), np.zeros((1, 1), dtype=complex))
    return ModelSpec(spin, grid, (FormFactor(np.array([1.0 + 0.0j])),), 2)


def two_spin_spec(v_entry=0.0 + 0.0j, n_max=2):
    """Two spins over two modes; optional hopping between the spins."""
    grid = DispersionGrid(np.array([1.0, 2.0]), np.array([1.0, 0.5]),
                          np.array([2.0, 3.0]), 1.5)
    v = np.array([[0.0, v_entry], [np.conj(v_entry), 0.0]], dtype=complex)
    spin = SpinParams(np.array([1.0, 1.3]), np.array([0.1, 0.0]), v)
    f1 = FormFactor(np.array([0.7 + 0.1j, -0.2 + 0.0j]))
    f2 = FormFactor(np.array([0.3 - 0.4j, 0.5 + 0.2j]))
    return ModelSpec(spin, grid, (f1, f2), n_max)


@pytest.fixture
def inst_a():
    return assemble(inst_a_spec())


@pytest.fixture
def two_spin():
    return assemble(two_spin_spec())
