"""Walk through the sector layout of two small instances.

The joint space splits by the number of excited spins. Within a sector
the index runs spin-configuration major, Fock minor, and the coupling
only bridges neighboring sectors, which is what every later routine
exploits.
"""

import numpy as np

from spinboson import assemble, verify_structure
from _instances import single_spin_spec, two_spin_spec


def describe(name, blocked):
    print(f"== {name} ==")
    print(f"dimension {blocked.dimension}, sectors {blocked.sector_dims}")
    for nu in range(blocked.n_sectors):
        configs = [f"{c:0{blocked.spin_basis.N}b}"
                   for c in blocked.spin_basis.configs[blocked.spin_basis.group_slice(nu)]]
        print(f"  sector {nu}: spin configs {configs}, "
              f"block {blocked.diagonal_blocks[nu].shape}")
    report = verify_structure(blocked)
    print(f"structure audit: hermitian {report.hermitian}, "
          f"block tridiagonal {report.block_tridiagonal}, "
          f"blocks consistent {report.blocks_consistent}, "
          f"excitation commutes {report.excitation_commutes}")
    print()


def main():
    single = assemble(single_spin_spec())
    describe("single spin, one mode at frequency 2", single)
    print("sector 0 diagonal block (ground spin + photon energies):")
    print(single.diagonal_blocks[0].toarray().real)
    print("coupling block between the sectors (the mode ladder):")
    print(np.round(single.coupling_blocks[0].toarray().real, 6))
    print()

    two = assemble(two_spin_spec())
    describe("two spins, two modes", two)
    # the first coupling block stacks the two annihilators vertically,
    # the second swaps them side by side
    c0 = two.coupling_blocks[0].toarray()
    c1 = two.coupling_blocks[1].toarray()
    print(f"coupling shapes: {c0.shape} then {c1.shape}")
    half = two.fock_basis.dimension
    print(f"upper half of the first block = annihilator of spin 1: "
          f"{np.abs(c0[:half]).max():.3f} max magnitude")
    print(f"left half of the second block = annihilator of spin 2: "
          f"{np.abs(c1[:, :half]).max():.3f} max magnitude")


if __name__ == "__main__":
    main()
