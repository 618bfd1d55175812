"""Assembly of the coupled model on the truncated joint space.

The joint space is (spin register) tensor (truncated Fock space), with
the spin-major index ``spin_position * fock_dimension + fock_index``.
Because the spin basis is grouped by excited-spin count, the joint basis
splits into contiguous sectors, one per count nu, and the rotating-wave
coupling only links neighbouring sectors: the Hamiltonian is block
tridiagonal. The coupling block out of sector nu annihilates one photon
while exciting one spin, so the total excitation count (excited spins
plus photons) commutes with the Hamiltonian exactly, truncation
included.

Identities that involve creating photons (canonical commutators, for
instance) hold only where creation cannot leave the truncated space;
each sector carries a mask of that exact region.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ConfigError, StructureError
from .field import DispersionGrid, FormFactor
from .fock import FockBasis, annihilation, enumerate_basis, number_diagonal
from .spin import SpinBasis, SpinParams, build_spin_hamiltonian, spin_basis

__all__ = [
    "ModelSpec",
    "BlockedHamiltonian",
    "assemble",
    "StructureReport",
    "verify_structure",
    "total_excitation_operator",
]


@dataclass(frozen=True)
class ModelSpec:
    """Everything needed to assemble one model instance.

    One form factor per spin; each must live on the dispersion grid.
    """

    spin: SpinParams
    grid: DispersionGrid
    form_factors: tuple
    n_max: int

    def __post_init__(self):
        ff = tuple(self.form_factors)
        object.__setattr__(self, "form_factors", ff)
        if len(ff) != self.spin.N:
            raise ConfigError(
                f"need exactly one form factor per spin: got {len(ff)} "
                f"form factors for {self.spin.N} spins"
            )
        M = len(self.grid.omega)
        for j, f in enumerate(ff):
            if not isinstance(f, FormFactor):
                raise ConfigError(f"form factor {j} is not a FormFactor")
            if len(f.amplitudes) != M:
                raise ConfigError(
                    f"form factor {j} has {len(f.amplitudes)} amplitudes "
                    f"but the grid has {M} modes"
                )
        try:
            n_max = int(operator.index(self.n_max))
        except TypeError:
            raise ConfigError("n_max must be a nonnegative integer") from None
        if n_max < 0:
            raise ConfigError("n_max must be a nonnegative integer")
        object.__setattr__(self, "n_max", n_max)


@dataclass(frozen=True)
class BlockedHamiltonian:
    """Assembled Hamiltonian with its sector blocks.

    ``diagonal_blocks[nu]`` is the restriction to sector nu (spin part
    plus field energy). ``coupling_blocks[nu]`` maps sector nu into
    sector nu + 1 (it is the (nu + 1, nu) block of the full coupling).
    ``full`` = ``free`` + coupling + adjoint of coupling.
    """

    spec: ModelSpec
    spin_basis: SpinBasis
    fock_basis: FockBasis
    sector_dims: tuple
    sector_offsets: tuple
    diagonal_blocks: tuple      # csr, sector nu -> sector nu
    coupling_blocks: tuple      # csr, sector nu -> sector nu + 1; length N
    full: sp.csr_matrix
    free: sp.csr_matrix
    coupling: sp.csr_matrix     # strictly lower block part
    exact_region: tuple         # boolean mask per sector

    @property
    def n_sectors(self) -> int:
        return self.spin_basis.N + 1

    @property
    def dimension(self) -> int:
        return self.sector_offsets[-1]

    def sector_slice(self, nu: int) -> slice:
        return slice(self.sector_offsets[nu], self.sector_offsets[nu + 1])


def assemble(spec: ModelSpec) -> BlockedHamiltonian:
    sb = spin_basis(spec.spin.N)
    fb = enumerate_basis(len(spec.grid.omega), spec.n_max)
    dimF = fb.dimension
    N = spec.spin.N

    spin_h = build_spin_hamiltonian(spec.spin)
    field_diag = number_diagonal(spec.grid, fb)
    field_op = sp.diags(field_diag, format="csr", dtype=complex)

    sector_dims = tuple(sb.group_size(nu) * dimF for nu in range(N + 1))
    offsets = (0,) + tuple(np.cumsum(sector_dims).tolist())

    diagonal_blocks = []
    for nu in range(N + 1):
        g = sb.group_size(nu)
        blk = sp.kron(sp.csr_matrix(spin_h.blocks[nu]), sp.identity(dimF, format="csr"))
        blk = blk + sp.kron(sp.identity(g, format="csr"), field_op)
        diagonal_blocks.append(sp.csr_matrix(blk, dtype=complex))

    ann = [annihilation(f, spec.grid, fb) for f in spec.form_factors]

    coupling_blocks = []
    for nu in range(N):
        g_lo = sb.group_size(nu)
        g_hi = sb.group_size(nu + 1)
        lo = sb.group_offsets[nu]
        hi = sb.group_offsets[nu + 1]
        block = sp.csr_matrix((g_hi * dimF, g_lo * dimF), dtype=complex)
        for j in range(N):
            hop = sp.lil_matrix((g_hi, g_lo), dtype=complex)
            for col, c in enumerate(sb.configs[lo:hi]):
                if not c >> j & 1:
                    c2 = c | (1 << j)
                    hop[sb.position[c2] - hi, col] = 1.0
            if hop.nnz:
                block = block + sp.kron(hop.tocsr(), ann[j])
        coupling_blocks.append(sp.csr_matrix(block))

    free = sp.kron(sp.csr_matrix(spin_h.full), sp.identity(dimF, format="csr"))
    free = sp.csr_matrix(free + sp.kron(sp.identity(2 ** N, format="csr"), field_op))

    dim = offsets[-1]
    coupling = sp.lil_matrix((dim, dim), dtype=complex)
    for nu in range(N):
        rows = slice(offsets[nu + 1], offsets[nu + 2])
        cols = slice(offsets[nu], offsets[nu + 1])
        coupling[rows, cols] = coupling_blocks[nu]
    coupling = coupling.tocsr()

    full = sp.csr_matrix(free + coupling + coupling.conj().T)

    exact_region = []
    for nu in range(N + 1):
        mask_f = np.zeros(dimF, dtype=bool)
        for k, occ in enumerate(fb.states):
            mask_f[k] = nu + sum(occ) <= spec.n_max
        exact_region.append(np.tile(mask_f, sb.group_size(nu)))

    return BlockedHamiltonian(
        spec=spec,
        spin_basis=sb,
        fock_basis=fb,
        sector_dims=sector_dims,
        sector_offsets=offsets,
        diagonal_blocks=tuple(diagonal_blocks),
        coupling_blocks=tuple(coupling_blocks),
        full=full,
        free=free,
        coupling=coupling,
        exact_region=tuple(exact_region),
    )


def total_excitation_operator(blocked: BlockedHamiltonian) -> sp.csr_matrix:
    """Excited-spin count plus photon count on the joint space."""
    sb, fb = blocked.spin_basis, blocked.fock_basis
    spin_counts = np.array([c.bit_count() for c in sb.configs], dtype=float)
    photon_counts = np.array([sum(occ) for occ in fb.states], dtype=float)
    diag = (spin_counts[:, None] + photon_counts[None, :]).ravel()
    return sp.diags(diag, format="csr", dtype=complex)


@dataclass(frozen=True)
class StructureReport:
    passed: bool
    hermitian: bool
    block_tridiagonal: bool
    blocks_consistent: bool
    excitation_commutes: bool
    messages: tuple


def verify_structure(blocked: BlockedHamiltonian, atol: float = 0.0) -> StructureReport:
    """Audit the assembled matrix against its advertised block structure.

    All four checks are exact by construction, so the default tolerance
    is zero; violations name the offending block. The audit re-reads the
    stored full matrix rather than trusting the assembly path, so a
    corrupted instance is caught.
    """
    msgs = []
    H = blocked.full.toarray()
    n = blocked.n_sectors

    hermitian = True
    gap = np.abs(H - H.conj().T).max()
    if gap > atol:
        hermitian = False
        msgs.append(f"full matrix is not Hermitian: max deviation {gap:.3g}")

    block_tridiagonal = True
    for a in range(n):
        for b in range(n):
            if abs(a - b) <= 1:
                continue
            blk = H[blocked.sector_slice(a), blocked.sector_slice(b)]
            worst = np.abs(blk).max() if blk.size else 0.0
            if worst > atol:
                block_tridiagonal = False
                msgs.append(
                    f"block ({a}, {b}) should vanish but has max magnitude {worst:.3g}"
                )

    blocks_consistent = True
    for nu in range(n):
        s = blocked.sector_slice(nu)
        gap = np.abs(H[s, s] - blocked.diagonal_blocks[nu].toarray()).max()
        if gap > atol:
            blocks_consistent = False
            msgs.append(f"diagonal block ({nu}, {nu}) deviates by {gap:.3g}")
    for nu in range(n - 1):
        lo = blocked.sector_slice(nu)
        hi = blocked.sector_slice(nu + 1)
        blk = blocked.coupling_blocks[nu].toarray()
        gap = np.abs(H[hi, lo] - blk).max()
        if gap > atol:
            blocks_consistent = False
            msgs.append(f"coupling block ({nu + 1}, {nu}) deviates by {gap:.3g}")
        gap = np.abs(H[lo, hi] - blk.conj().T).max()
        if gap > atol:
            blocks_consistent = False
            msgs.append(
                f"block ({nu}, {nu + 1}) is not the adjoint of block "
                f"({nu + 1}, {nu}): max deviation {gap:.3g}"
            )

    excitation_commutes = True
    Nop = total_excitation_operator(blocked).toarray()
    comm = H @ Nop - Nop @ H
    worst = np.abs(comm).max()
    if worst > atol:
        excitation_commutes = False
        msgs.append(
            f"total excitation count does not commute: max magnitude {worst:.3g}"
        )

    passed = hermitian and block_tridiagonal and blocks_consistent and excitation_commutes
    return StructureReport(
        passed=passed,
        hermitian=hermitian,
        block_tridiagonal=block_tridiagonal,
        blocks_consistent=blocks_consistent,
        excitation_commutes=excitation_commutes,
        messages=tuple(msgs),
    )
