"""Sector recursion, triangular transfer operators, and the factorized resolvent.

Everything here works at one fixed off-axis point z. The recursion runs
up the excitation sectors:

    self_energy[0] = 0
    propagator[nu] = (sector block nu) - z - self_energy[nu]
    self_energy[nu] = C[nu-1] @ inverse(propagator[nu-1]) @ adjoint(C[nu-1])

with C[nu] the coupling block mapping sector nu into sector nu + 1. The
propagators assemble triangular factors: lower @ block_diag @ upper
reproduces the shifted Hamiltonian exactly, and the resolvent is the
reversed product of inverses. The strictly triangular parts of those
inverses are the concatenated transfer operators; they also lift
arbitrary sector data into domain-compatible vectors.

Spectral points are plain complex numbers. Operations refuse points
whose imaginary part is below ``MIN_IMAG_PART`` instead of attempting
any regularization: every bound used here degrades like 1 / |Im z|, so
near-real points are out of scope.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import ConfigError, NumericalError
from .model import BlockedHamiltonian

__all__ = [
    "MIN_IMAG_PART",
    "spectral_point",
    "PropagatorChain",
    "propagator_chain",
    "ResolventFactors",
    "resolvent_factors",
    "resolvent_lu",
    "resolvent_apply",
    "resolvent_direct",
    "domain_lift",
    "implicit_domain_residual",
    "second_resolvent_residuals",
]

MIN_IMAG_PART = 1e-8


def spectral_point(z) -> complex:
    """Validate a spectral point: finite, with |Im z| >= MIN_IMAG_PART."""
    try:
        z = complex(z)
    except (TypeError, ValueError):
        raise ConfigError(f"spectral point must be a complex number, got {z!r}") from None
    if not (np.isfinite(z.real) and np.isfinite(z.imag)):
        raise ConfigError(f"spectral point must be finite, got {z!r}")
    if abs(z.imag) < MIN_IMAG_PART:
        raise ConfigError(
            f"Im z too small: need |Im z| >= {MIN_IMAG_PART:g}, got z = {z}"
        )
    return z


@dataclass
class PropagatorChain:
    """The recursion's output at one spectral point.

    ``self_energy[nu]`` and ``propagator[nu]`` are dense square matrices
    of the sector dimension; ``propagator_inv[nu]`` is the dense inverse
    and ``factorizations[nu]`` the reusable LU decomposition behind
    :meth:`solve`.
    """

    z: complex
    self_energy: tuple
    propagator: tuple
    propagator_inv: tuple
    factorizations: tuple = field(repr=False)

    def solve(self, nu: int, rhs: np.ndarray) -> np.ndarray:
        """Apply inverse(propagator[nu]) to rhs via the stored factorization."""
        return scipy.linalg.lu_solve(self.factorizations[nu], rhs)

    @property
    def n_sectors(self) -> int:
        return len(self.propagator)


def propagator_chain(blocked: BlockedHamiltonian, z) -> PropagatorChain:
    """Run the sector recursion bottom-up at the spectral point z."""
    z = spectral_point(z)
    self_energy, propagator, inverses, lus = [], [], [], []
    prev_inv = None
    for nu in range(blocked.n_sectors):
        H_nu = blocked.diagonal_blocks[nu].toarray()
        d = H_nu.shape[0]
        if nu == 0:
            S = np.zeros((d, d), dtype=complex)
        else:
            C = blocked.coupling_blocks[nu - 1].toarray()
            S = C @ prev_inv @ C.conj().T
        G = H_nu - z * np.eye(d) - S
        try:
            lu = scipy.linalg.lu_factor(G)
            inv = scipy.linalg.lu_solve(lu, np.eye(d, dtype=complex))
        except (ValueError, scipy.linalg.LinAlgError) as exc:
            raise NumericalError(
                f"failed to invert the dressed block of sector {nu} at z = {z}: {exc}"
            ) from exc
        if not np.all(np.isfinite(inv)):
            raise NumericalError(
                f"inverse of the dressed block of sector {nu} at z = {z} is not "
                f"finite (condition estimate {np.linalg.cond(G):.3g})"
            )
        self_energy.append(S)
        propagator.append(G)
        inverses.append(inv)
        lus.append(lu)
        prev_inv = inv
    return PropagatorChain(
        z=z,
        self_energy=tuple(self_energy),
        propagator=tuple(propagator),
        propagator_inv=tuple(inverses),
        factorizations=tuple(lus),
    )


@dataclass
class ResolventFactors:
    """Triangular factorization of the shifted Hamiltonian and its inverse.

    ``lower @ block_diag @ upper`` equals H - z. ``lower_inv`` is
    identity plus the concatenated transfer operators below the
    diagonal, ``upper_inv`` identity plus their adjoint-side partners
    above it, and ``resolvent`` the product
    ``upper_inv @ block_inv @ lower_inv``.

    ``transfer[(lo, hi)]`` maps sector lo into sector hi (it is the
    (hi, lo) block of ``lower_inv``); ``transfer_adj[(lo, hi)]`` maps hi
    into lo (the (lo, hi) block of ``upper_inv``). At a fixed z,
    ``transfer_adj`` equals the conjugate transpose of ``transfer``
    evaluated at conj(z).
    """

    z: complex
    chain: PropagatorChain = field(repr=False)
    lower: np.ndarray = field(repr=False)
    block_diag: np.ndarray = field(repr=False)
    upper: np.ndarray = field(repr=False)
    lower_inv: np.ndarray = field(repr=False)
    block_inv: np.ndarray = field(repr=False)
    upper_inv: np.ndarray = field(repr=False)
    transfer: dict = field(repr=False)
    transfer_adj: dict = field(repr=False)
    resolvent: np.ndarray = field(repr=False)


def resolvent_factors(blocked: BlockedHamiltonian, z, chain: PropagatorChain | None = None) -> ResolventFactors:
    """Assemble the triangular factors and the full resolvent at z."""
    if chain is None:
        chain = propagator_chain(blocked, z)
    z = chain.z
    n = blocked.n_sectors
    dim = blocked.dimension

    step = []       # one-step transfer, sector nu -> nu + 1
    step_adj = []   # its adjoint-side partner, sector nu + 1 -> nu
    for nu in range(n - 1):
        C = blocked.coupling_blocks[nu].toarray()
        step.append(-(C @ chain.propagator_inv[nu]))
        step_adj.append(-(chain.propagator_inv[nu] @ C.conj().T))

    transfer, transfer_adj = {}, {}
    for lo in range(n - 1):
        acc = step[lo]
        acc_adj = step_adj[lo]
        transfer[(lo, lo + 1)] = acc
        transfer_adj[(lo, lo + 1)] = acc_adj
        for hi in range(lo + 2, n):
            acc = step[hi - 1] @ acc
            acc_adj = acc_adj @ step_adj[hi - 1]
            transfer[(lo, hi)] = acc
            transfer_adj[(lo, hi)] = acc_adj

    lower = np.eye(dim, dtype=complex)
    upper = np.eye(dim, dtype=complex)
    lower_inv = np.eye(dim, dtype=complex)
    upper_inv = np.eye(dim, dtype=complex)
    block_diag = np.zeros((dim, dim), dtype=complex)
    block_inv = np.zeros((dim, dim), dtype=complex)

    for nu in range(n):
        s = blocked.sector_slice(nu)
        block_diag[s, s] = chain.propagator[nu]
        block_inv[s, s] = chain.propagator_inv[nu]
    for nu in range(n - 1):
        lo = blocked.sector_slice(nu)
        hi = blocked.sector_slice(nu + 1)
        lower[hi, lo] = -step[nu]
        upper[lo, hi] = -step_adj[nu]
    for (lo, hi), mat in transfer.items():
        lower_inv[blocked.sector_slice(hi), blocked.sector_slice(lo)] = mat
    for (lo, hi), mat in transfer_adj.items():
        upper_inv[blocked.sector_slice(lo), blocked.sector_slice(hi)] = mat

    resolvent = upper_inv @ block_inv @ lower_inv
    return ResolventFactors(
        z=z,
        chain=chain,
        lower=lower,
        block_diag=block_diag,
        upper=upper,
        lower_inv=lower_inv,
        block_inv=block_inv,
        upper_inv=upper_inv,
        transfer=transfer,
        transfer_adj=transfer_adj,
        resolvent=resolvent,
    )


def resolvent_lu(blocked: BlockedHamiltonian, z, chain: PropagatorChain | None = None) -> np.ndarray:
    """Full resolvent matrix assembled from the triangular factors."""
    return resolvent_factors(blocked, z, chain=chain).resolvent


def _split(blocked: BlockedHamiltonian, vec: np.ndarray) -> list:
    return [vec[blocked.sector_slice(nu)] for nu in range(blocked.n_sectors)]


def resolvent_apply(blocked: BlockedHamiltonian, z, psi: np.ndarray, chain: PropagatorChain | None = None) -> np.ndarray:
    """Apply the resolvent to a vector (or to columns of a matrix).

    Three sequential block-triangular sweeps: forward substitution
    through the lower factor, sector solves, backward substitution
    through the upper factor. The dense resolvent is never formed.
    """
    if chain is None:
        chain = propagator_chain(blocked, z)
    psi = np.asarray(psi, dtype=complex)
    one_d = psi.ndim == 1
    if one_d:
        psi = psi[:, None]
    if psi.ndim != 2 or psi.shape[0] != blocked.dimension:
        raise ConfigError(
            f"vector must have leading dimension {blocked.dimension}, "
            f"got shape {psi.shape}"
        )
    n = blocked.n_sectors
    parts = _split(blocked, psi)

    fwd = []
    for nu in range(n):
        cur = parts[nu]
        if nu:
            cur = cur - blocked.coupling_blocks[nu - 1] @ chain.solve(nu - 1, fwd[nu - 1])
        fwd.append(cur)

    mid = [chain.solve(nu, fwd[nu]) for nu in range(n)]

    out = [None] * n
    out[n - 1] = mid[n - 1]
    for nu in range(n - 2, -1, -1):
        lifted = blocked.coupling_blocks[nu].conj().T @ out[nu + 1]
        out[nu] = mid[nu] - chain.solve(nu, np.asarray(lifted))

    result = np.concatenate(out, axis=0)
    return result[:, 0] if one_d else result


def resolvent_direct(blocked: BlockedHamiltonian, z) -> tuple:
    """Oracle resolvent: dense factorization of (H - z), residual reported.

    Independent of the sector recursion on purpose; returns the inverse
    and the Frobenius norm of (H - z) @ X - I.
    """
    z = spectral_point(z)
    dim = blocked.dimension
    shifted = blocked.full.toarray() - z * np.eye(dim)
    try:
        lu = scipy.linalg.lu_factor(shifted)
        X = scipy.linalg.lu_solve(lu, np.eye(dim, dtype=complex))
    except (ValueError, scipy.linalg.LinAlgError) as exc:
        raise NumericalError(f"direct solve failed at z = {z}: {exc}") from exc
    if not np.all(np.isfinite(X)):
        raise NumericalError(
            f"direct inverse at z = {z} is not finite "
            f"(condition estimate {np.linalg.cond(shifted):.3g})"
        )
    residual = float(np.linalg.norm(shifted @ X - np.eye(dim)))
    return X, residual


def domain_lift(blocked: BlockedHamiltonian, z0, phi_tilde: np.ndarray, chain: PropagatorChain | None = None) -> np.ndarray:
    """Lift free sector data into a domain-compatible vector at anchor z0.

    Backward sweep applying the inverse upper factor: component nu of
    the output is the input component plus the adjoint-side transfer
    operators applied to all higher input components. Different anchors
    give different lifts of the same data but the same overall range.
    """
    if chain is None:
        chain = propagator_chain(blocked, z0)
    phi_tilde = np.asarray(phi_tilde, dtype=complex)
    squeeze = phi_tilde.ndim == 1
    if squeeze:
        phi_tilde = phi_tilde[:, None]
    if phi_tilde.shape[0] != blocked.dimension:
        raise ConfigError(
            f"vector must have leading dimension {blocked.dimension}, "
            f"got shape {phi_tilde.shape}"
        )
    n = blocked.n_sectors
    parts = _split(blocked, phi_tilde)
    out = [None] * n
    out[n - 1] = parts[n - 1]
    for nu in range(n - 2, -1, -1):
        lifted = blocked.coupling_blocks[nu].conj().T @ out[nu + 1]
        out[nu] = parts[nu] - chain.solve(nu, np.asarray(lifted))
    result = np.concatenate(out, axis=0)
    return result[:, 0] if squeeze else result


def _sector_free_solves(blocked: BlockedHamiltonian, z0: complex) -> list:
    """LU factorizations of the uncoupled sector blocks minus z0."""
    lus = []
    for nu in range(blocked.n_sectors):
        H_nu = blocked.diagonal_blocks[nu].toarray()
        lus.append(scipy.linalg.lu_factor(H_nu - z0 * np.eye(H_nu.shape[0])))
    return lus


def second_resolvent_residuals(blocked: BlockedHamiltonian, z0, chain: PropagatorChain | None = None) -> tuple:
    """Max entrywise residual, per sector, of the correction identity.

    The dressed inverse differs from the uncoupled sector inverse by
    (dressed inverse) @ (self-energy) @ (uncoupled inverse): the
    uncoupled term feeds through the self-energy once and the dressed
    inverse resums the rest. The identity is pure finite-dimensional
    algebra and must sit at rounding level; this returns its per-sector
    deviation.
    """
    if chain is None:
        chain = propagator_chain(blocked, z0)
    z0 = chain.z
    out = []
    for nu in range(blocked.n_sectors):
        H_nu = blocked.diagonal_blocks[nu].toarray()
        d = H_nu.shape[0]
        free_inv = scipy.linalg.solve(H_nu - z0 * np.eye(d), np.eye(d, dtype=complex))
        lhs = chain.propagator_inv[nu] - free_inv
        rhs = chain.propagator_inv[nu] @ chain.self_energy[nu] @ free_inv
        out.append(float(np.abs(lhs - rhs).max()))
    return tuple(out)


def implicit_domain_residual(blocked: BlockedHamiltonian, z0, phi: np.ndarray, chain: PropagatorChain | None = None, identity_tol: float = 1e-11) -> tuple:
    """Both implicit images of a vector: dressed-solve form and free-solve form.

    Component nu of the first image is phi_nu minus the dressed sector
    inverse applied to (adjoint coupling) @ phi_{nu+1}; the second uses
    the uncoupled sector inverse instead. A vector is domain-compatible
    at the anchor exactly when the first image has free sector data; the
    two images differ by the correction identity, which is re-verified
    here (a violation beyond ``identity_tol`` raises, since it would
    mean the instance is corrupted).
    """
    if chain is None:
        chain = propagator_chain(blocked, z0)
    z0 = chain.z
    worst = max(second_resolvent_residuals(blocked, z0, chain=chain))
    if worst > identity_tol:
        raise NumericalError(
            "correction identity between dressed and uncoupled sector inverses "
            f"fails at z0 = {z0}: max residual {worst:.3g} > {identity_tol:g}"
        )
    phi = np.asarray(phi, dtype=complex)
    squeeze = phi.ndim == 1
    if squeeze:
        phi = phi[:, None]
    if phi.shape[0] != blocked.dimension:
        raise ConfigError(
            f"vector must have leading dimension {blocked.dimension}, "
            f"got shape {phi.shape}"
        )
    n = blocked.n_sectors
    parts = _split(blocked, phi)
    free_lus = _sector_free_solves(blocked, z0)

    image_chain = [p.copy() for p in parts]
    image_free = [p.copy() for p in parts]
    for nu in range(n - 1):
        lifted = np.asarray(blocked.coupling_blocks[nu].conj().T @ parts[nu + 1])
        image_chain[nu] = parts[nu] - chain.solve(nu, lifted)
        image_free[nu] = parts[nu] - scipy.linalg.lu_solve(free_lus[nu], lifted)

    a = np.concatenate(image_chain, axis=0)
    b = np.concatenate(image_free, axis=0)
    if squeeze:
        a, b = a[:, 0], b[:, 0]
    return a, b
