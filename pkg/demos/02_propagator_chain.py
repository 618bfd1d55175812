"""The sector recursion, spelled out on the smallest instance.

Sector 0 has no self-energy. Each higher sector sees the one below it
through coupling @ inverse @ adjoint-coupling, and the dressed block is
the sector Hamiltonian minus z minus that feedback. For one spin and
one mode everything is diagonal, so the numbers can be read off by
hand.
"""

import numpy as np

from spinboson import assemble, propagator_chain
from _instances import single_spin_spec


def main():
    blocked = assemble(single_spin_spec())
    z = 1j
    chain = propagator_chain(blocked, z)

    print(f"z = {z}")
    print("sector 0 self-energy (always zero):")
    print(chain.self_energy[0].real)

    print("\nsector 1 self-energy, fed back through sector 0:")
    S1 = chain.self_energy[1]
    print(np.round(S1, 6))
    print("closed forms: 1/(2-z) =", 1 / (2 - z), " and 2/(4-z) =", 2 / (4 - z))

    print("\nsector 1 dressed block: H_1 - z - S_1")
    print(np.round(chain.propagator[1], 6))
    print("top-left entry should be 1 - i - 1/(2-i) =", 1 - z - 1 / (2 - z))

    # the dressed inverse is bounded by 1/|Im z| sector by sector
    for nu in range(chain.n_sectors):
        top = np.linalg.svd(chain.propagator_inv[nu], compute_uv=False)[0]
        print(f"\n||inverse of dressed block {nu}|| = {top:.6f} "
              f"(bound 1/|Im z| = {1 / abs(z.imag):.1f})")


if __name__ == "__main__":
    main()
