"""Spin register: excitation-graded basis and excitation-preserving Hamiltonians.

Configurations of N two-level systems are bitmasks; bit j-1 set means
spin j is excited. The basis is grouped by the number of excited spins
(popcount), ascending bitmask inside each group, so the groups are
contiguous and block slicing is deterministic.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from math import comb

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, StructureError

__all__ = [
    "SpinBasis",
    "spin_basis",
    "SpinParams",
    "SpinHamiltonian",
    "build_spin_hamiltonian",
    "excitation_number",
    "decompose_blocks",
]


@dataclass(frozen=True)
class SpinBasis:
    """All 2**N configurations grouped by excited-spin count."""

    N: int
    configs: tuple          # bitmasks, grouped order
    position: dict          # bitmask -> basis position
    group_offsets: tuple    # offsets of the popcount groups, len N+2

    @property
    def dimension(self) -> int:
        return len(self.configs)

    def group_slice(self, nu: int) -> slice:
        return slice(self.group_offsets[nu], self.group_offsets[nu + 1])

    def group_size(self, nu: int) -> int:
        return self.group_offsets[nu + 1] - self.group_offsets[nu]


def spin_basis(N: int) -> SpinBasis:
    if N < 1:
        raise ConfigError("need at least one spin")
    configs = sorted(range(2 ** N), key=lambda c: (c.bit_count(), c))
    offsets = [0]
    for nu in range(N + 1):
        offsets.append(offsets[-1] + comb(N, nu))
    position = {c: i for i, c in enumerate(configs)}
    return SpinBasis(N, tuple(configs), position, tuple(offsets))


@dataclass(frozen=True)
class SpinParams:
    """Excited/ground energies per spin and a Hermitian hopping matrix.

    ``v[j, l]`` multiplies the transition that de-excites spin l+1 and
    excites spin j+1; the diagonal must vanish and ``v`` must be
    Hermitian so the Hamiltonian is symmetric.
    """

    e: np.ndarray
    g: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        e = np.asarray(self.e, dtype=float)
        g = np.asarray(self.g, dtype=float)
        v = np.asarray(self.v, dtype=complex)
        N = len(e)
        if N < 1 or g.shape != (N,) or v.shape != (N, N):
            raise ConfigError(
                "need e and g of equal length N >= 1 and an N x N matrix v"
            )
        if not (np.all(np.isfinite(e)) and np.all(np.isfinite(g))
                and np.all(np.isfinite(v))):
            raise ConfigError("spin parameters contain non-finite entries")
        if np.any(np.diagonal(v) != 0):
            raise ConfigError("the hopping matrix v must have zero diagonal")
        if not np.array_equal(v, v.conj().T):
            raise ConfigError(
                "the hopping matrix v must be Hermitian: v[l, j] == conj(v[j, l])"
            )
        for name, arr in (("e", e), ("g", g), ("v", v)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def N(self) -> int:
        return len(self.e)


@dataclass(frozen=True)
class SpinHamiltonian:
    """Full 2**N matrix in grouped order plus its per-group blocks."""

    basis: SpinBasis
    full: np.ndarray
    blocks: tuple
    nonnegative: bool


def build_spin_hamiltonian(params: SpinParams) -> SpinHamiltonian:
    """Assemble the excitation-preserving spin Hamiltonian.

    Diagonal terms pay the excited energy for every set bit and the
    ground energy for every clear bit; the hopping term moves one
    excitation between spins, so the excited-spin count is conserved by
    construction. Nonnegativity is reported (a warning), not enforced:
    no identity downstream needs it.
    """
    basis = spin_basis(params.N)
    N, dim = params.N, basis.dimension
    full = np.zeros((dim, dim), dtype=complex)
    for pos, c in enumerate(basis.configs):
        diag = 0.0
        for j in range(N):
            diag += params.e[j] if c >> j & 1 else params.g[j]
        full[pos, pos] = diag
    for j in range(N):
        for l in range(N):
            if j == l or params.v[j, l] == 0:
                continue
            # v[j, l] sigma+_{j+1} sigma-_{l+1}: needs spin l+1 excited, j+1 ground
            for c in basis.configs:
                if c >> l & 1 and not c >> j & 1:
                    c2 = (c & ~(1 << l)) | (1 << j)
                    full[basis.position[c2], basis.position[c]] += params.v[j, l]
    blocks = decompose_blocks(full, basis)
    eigs = np.linalg.eigvalsh(full)
    nonnegative = bool(eigs.min() >= -1e-12 * max(1.0, abs(eigs).max()))
    if not nonnegative:
        warnings.warn(
            "spin Hamiltonian is not nonnegative definite "
            f"(lowest eigenvalue {eigs.min():.3g}); identities are unaffected",
            stacklevel=2,
        )
    return SpinHamiltonian(basis, full, blocks, nonnegative)


def excitation_number(N: int) -> sp.csr_matrix:
    """Diagonal matrix counting excited spins, in grouped order."""
    basis = spin_basis(N)
    counts = [c.bit_count() for c in basis.configs]
    return sp.diags(np.array(counts, dtype=float), format="csr", dtype=complex)


def decompose_blocks(full: np.ndarray, basis: SpinBasis) -> tuple:
    """Slice a 2**N matrix into its popcount-group diagonal blocks.

    The matrix must vanish exactly outside those blocks (entries linking
    different excited-spin counts are rejected, naming the first
    offending entry).
    """
    full = np.asarray(full)
    dim = basis.dimension
    if full.shape != (dim, dim):
        raise ConfigError(f"matrix must be {dim} x {dim} for N = {basis.N}")
    mask = np.ones((dim, dim), dtype=bool)
    for nu in range(basis.N + 1):
        s = basis.group_slice(nu)
        mask[s, s] = False
    offenders = np.argwhere(mask & (full != 0))
    if len(offenders):
        i, j = offenders[0]
        raise StructureError(
            f"entry ({i}, {j}) = {full[i, j]} links different excited-spin "
            "counts; the matrix must be block-diagonal over popcount groups"
        )
    return tuple(full[basis.group_slice(nu), basis.group_slice(nu)].copy()
                 for nu in range(basis.N + 1))
