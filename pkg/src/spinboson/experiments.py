"""Study runner: config ingestion, verification suites, cutoff-convergence studies.

Configs are strict JSON (unknown keys rejected, every number finite);
reports are JSON plus, for convergence studies, a CSV table with the
fixed column order ``lambda, norm0_gap, norm_minus1_gap,
resolvent_gap_opnorm, ratio, z_re, z_im``. Reports are deterministic:
the same config produces byte-identical output except for the
``generated_at`` timestamp.

The convergence study truncates the configured form factors at each
threshold and measures resolvent distance to the finest member. There
is no singular limit on a finite grid, so the finest member stands in
for it; the report header says so.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import scipy.linalg

from .errors import ConfigError, NumericalError
from .field import DispersionGrid, FormFactor, scale_norm, truncate_form_factor, validate_grid
from .model import BlockedHamiltonian, ModelSpec, assemble, verify_structure
from .propagators import (
    propagator_chain,
    resolvent_apply,
    resolvent_direct,
    resolvent_factors,
    resolvent_lu,
    second_resolvent_residuals,
    spectral_point,
)
from .spin import SpinParams

__all__ = [
    "DEFAULT_TOLERANCES",
    "StudyConfig",
    "parse_config",
    "config_jsonable",
    "operator_norm",
    "verification_report",
    "run_verification",
    "run_convergence",
    "summarize_verification",
    "summarize_convergence",
    "CSV_COLUMNS",
]

DEFAULT_TOLERANCES = {
    "oracle_rel": 1e-10,
    "lu_reconstruction_rel": 1e-11,
    "inequality_slack": 1e-12,
    "symmetry_abs": 1e-13,
    "resolvent_identity_rel": 1e-10,
    "second_resolvent_abs": 1e-11,
    "monotonicity_slack": 1e-12,
    "opnorm_rel": 1e-8,
    "direct_residual_per_dim": 1e-12,
}

CSV_COLUMNS = (
    "lambda",
    "norm0_gap",
    "norm_minus1_gap",
    "resolvent_gap_opnorm",
    "ratio",
    "z_re",
    "z_im",
)


@dataclass(frozen=True)
class StudyConfig:
    """Parsed study input: model, evaluation points, thresholds, tolerances."""

    model: ModelSpec
    z_points: tuple
    cutoffs: tuple | None
    tolerances: dict


# ---------------------------------------------------------------- parsing

def _reject_unknown(obj: dict, ptr: str, allowed: set):
    extra = sorted(set(obj) - allowed)
    if extra:
        raise ConfigError(f"at {ptr}: unknown key(s) {extra}; allowed keys are {sorted(allowed)}")


def _require(obj: dict, ptr: str, key: str):
    if key not in obj:
        raise ConfigError(f"at {ptr}: missing required key {key!r}")
    return obj[key]


def _as_dict(obj, ptr: str) -> dict:
    if not isinstance(obj, dict):
        raise ConfigError(f"at {ptr}: expected an object, got {type(obj).__name__}")
    return obj


def _as_list(obj, ptr: str) -> list:
    if not isinstance(obj, list):
        raise ConfigError(f"at {ptr}: expected a list, got {type(obj).__name__}")
    return obj


def _as_number(obj, ptr: str) -> float:
    if isinstance(obj, bool) or not isinstance(obj, (int, float)):
        raise ConfigError(f"at {ptr}: expected a number, got {obj!r}")
    val = float(obj)
    if not math.isfinite(val):
        raise ConfigError(f"at {ptr}: number must be finite, got {obj!r}")
    return val


def _number_list(obj, ptr: str) -> list:
    return [_as_number(x, f"{ptr}[{i}]") for i, x in enumerate(_as_list(obj, ptr))]


def _as_pair(obj, ptr: str) -> complex:
    lst = _as_list(obj, ptr)
    if len(lst) != 2:
        raise ConfigError(f"at {ptr}: expected a [re, im] pair, got {obj!r}")
    return complex(_as_number(lst[0], f"{ptr}[0]"), _as_number(lst[1], f"{ptr}[1]"))


def _pair_list(obj, ptr: str) -> list:
    return [_as_pair(x, f"{ptr}[{i}]") for i, x in enumerate(_as_list(obj, ptr))]


def parse_config(path) -> StudyConfig:
    """Load and strictly validate a JSON study config.

    Diagnostics carry a JSON-pointer-style location. Every numeric field
    must be finite, unknown keys anywhere are rejected, and semantic
    constraints (dispersion bounds, Hermitian hopping, off-axis z) are
    enforced here so later stages can assume a sound model.
    """
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"config file not found: {path}")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc

    top = _as_dict(raw, "/")
    _reject_unknown(top, "/", {"spins", "field", "form_factors", "n_max",
                               "z_points", "cutoffs", "tolerances"})

    spins = _as_dict(_require(top, "/", "spins"), "/spins")
    _reject_unknown(spins, "/spins", {"e", "g", "v"})
    e = _number_list(_require(spins, "/spins", "e"), "/spins/e")
    g = _number_list(_require(spins, "/spins", "g"), "/spins/g")
    n_spins = len(e)
    if n_spins < 1:
        raise ConfigError("at /spins/e: need at least one spin")
    if len(g) != n_spins:
        raise ConfigError(
            f"at /spins/g: length {len(g)} does not match /spins/e length {n_spins}"
        )
    v_rows = _as_list(_require(spins, "/spins", "v"), "/spins/v")
    if len(v_rows) != n_spins:
        raise ConfigError(f"at /spins/v: need {n_spins} rows, got {len(v_rows)}")
    v = np.zeros((n_spins, n_spins), dtype=complex)
    for i, row in enumerate(v_rows):
        entries = _pair_list(row, f"/spins/v[{i}]")
        if len(entries) != n_spins:
            raise ConfigError(
                f"at /spins/v[{i}]: need {n_spins} entries, got {len(entries)}"
            )
        v[i] = entries
    try:
        spin_params = SpinParams(np.array(e), np.array(g), v)
    except ConfigError as exc:
        raise ConfigError(f"at /spins/v: {exc}") from exc

    fld = _as_dict(_require(top, "/", "field"), "/field")
    _reject_unknown(fld, "/field", {"k", "omega", "weights", "mass_gap"})
    k = _number_list(_require(fld, "/field", "k"), "/field/k")
    omega = _number_list(_require(fld, "/field", "omega"), "/field/omega")
    weights = _number_list(_require(fld, "/field", "weights"), "/field/weights")
    mass_gap = _as_number(_require(fld, "/field", "mass_gap"), "/field/mass_gap")
    if not (len(k) == len(omega) == len(weights)):
        raise ConfigError(
            f"at /field: k, omega, weights must have equal length, got "
            f"{len(k)}, {len(omega)}, {len(weights)}"
        )
    try:
        grid = DispersionGrid(np.array(k), np.array(weights), np.array(omega), mass_gap)
    except ConfigError as exc:
        raise ConfigError(f"at /field: {exc}") from exc
    report = validate_grid(grid)
    if not report.passed:
        raise ConfigError("at /field: " + "; ".join(report.messages))

    ff_raw = _as_list(_require(top, "/", "form_factors"), "/form_factors")
    if len(ff_raw) != n_spins:
        raise ConfigError(
            f"at /form_factors: need one form factor per spin "
            f"({n_spins}), got {len(ff_raw)}"
        )
    form_factors = []
    for j, amps in enumerate(ff_raw):
        entries = _pair_list(amps, f"/form_factors[{j}]")
        if len(entries) != len(omega):
            raise ConfigError(
                f"at /form_factors[{j}]: need {len(omega)} amplitudes "
                f"(one per mode), got {len(entries)}"
            )
        form_factors.append(FormFactor(np.array(entries, dtype=complex)))

    n_max_raw = _require(top, "/", "n_max")
    if isinstance(n_max_raw, bool) or not isinstance(n_max_raw, int):
        raise ConfigError(f"at /n_max: expected an integer, got {n_max_raw!r}")
    if n_max_raw < 0:
        raise ConfigError(f"at /n_max: must be nonnegative, got {n_max_raw}")

    z_raw = _pair_list(_require(top, "/", "z_points"), "/z_points")
    if not z_raw:
        raise ConfigError("at /z_points: need at least one evaluation point")
    z_points = []
    for i, z in enumerate(z_raw):
        try:
            z_points.append(spectral_point(z))
        except ConfigError as exc:
            raise ConfigError(f"at /z_points[{i}]: {exc}") from exc

    cutoffs = None
    if "cutoffs" in top:
        vals = _number_list(top["cutoffs"], "/cutoffs")
        if not vals:
            raise ConfigError("at /cutoffs: list must be nonempty when present")
        for i, lam in enumerate(vals):
            if lam <= 0:
                raise ConfigError(f"at /cutoffs[{i}]: thresholds must be positive, got {lam}")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigError("at /cutoffs: thresholds must be strictly ascending")
        cutoffs = tuple(vals)

    tolerances = dict(DEFAULT_TOLERANCES)
    if "tolerances" in top:
        overrides = _as_dict(top["tolerances"], "/tolerances")
        for name, val in overrides.items():
            if name not in DEFAULT_TOLERANCES:
                raise ConfigError(
                    f"at /tolerances: unknown tolerance {name!r}; known names are "
                    f"{sorted(DEFAULT_TOLERANCES)}"
                )
            num = _as_number(val, f"/tolerances/{name}")
            if num <= 0:
                raise ConfigError(f"at /tolerances/{name}: must be positive, got {val!r}")
            tolerances[name] = num

    try:
        model = ModelSpec(spin_params, grid, tuple(form_factors), n_max_raw)
    except ConfigError as exc:
        raise ConfigError(f"at /: {exc}") from exc
    return StudyConfig(model=model, z_points=tuple(z_points),
                       cutoffs=cutoffs, tolerances=tolerances)


def config_jsonable(cfg: StudyConfig) -> dict:
    """Round-trip a StudyConfig back to the JSON schema shape (for report echo)."""
    model = cfg.model
    out = {
        "spins": {
            "e": [float(x) for x in model.spin.e],
            "g": [float(x) for x in model.spin.g],
            "v": [[[float(x.real), float(x.imag)] for x in row] for row in model.spin.v],
        },
        "field": {
            "k": [float(x) for x in model.grid.modes],
            "omega": [float(x) for x in model.grid.omega],
            "weights": [float(x) for x in model.grid.weights],
            "mass_gap": float(model.grid.mass_gap),
        },
        "form_factors": [
            [[float(a.real), float(a.imag)] for a in f.amplitudes]
            for f in model.form_factors
        ],
        "n_max": model.n_max,
        "z_points": [[z.real, z.imag] for z in cfg.z_points],
        "tolerances": {k: float(v) for k, v in sorted(cfg.tolerances.items())},
    }
    if cfg.cutoffs is not None:
        out["cutoffs"] = [float(x) for x in cfg.cutoffs]
    return out


# ---------------------------------------------------------------- numerics

def operator_norm(mat: np.ndarray, rtol: float = 1e-8, maxiter: int = 10000) -> float:
    """Largest singular value by power iteration on the normal matrix.

    Deterministic start vector; converges when the estimate moves by
    less than ``rtol`` relatively between iterations.
    """
    mat = np.asarray(mat)
    if mat.size == 0:
        return 0.0
    rng = np.random.default_rng(1234567)
    v = rng.standard_normal(mat.shape[1]) + 1j * rng.standard_normal(mat.shape[1])
    v /= np.linalg.norm(v)
    adj = mat.conj().T
    est = 0.0
    for _ in range(maxiter):
        w = adj @ (mat @ v)
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            return 0.0
        new_est = math.sqrt(norm_w)
        v = w / norm_w
        if abs(new_est - est) <= rtol * max(new_est, 1e-300):
            return float(new_est)
        est = new_est
    raise NumericalError(
        f"operator norm power iteration did not converge in {maxiter} iterations"
    )


def _unit_vectors(rng: np.random.Generator, dim: int, count: int) -> np.ndarray:
    psi = rng.standard_normal((dim, count)) + 1j * rng.standard_normal((dim, count))
    return psi / np.linalg.norm(psi, axis=0)


# ---------------------------------------------------------------- verification

def _check(value: float, tol: float, mode: str = "le") -> dict:
    passed = value <= tol if mode == "le" else value >= tol
    return {"value": float(value), "tolerance": float(tol), "passed": bool(passed)}


def _verify_at_z(blocked: BlockedHamiltonian, z: complex, tol: dict,
                 z_index: int, seed: int, n_vectors: int):
    chain = propagator_chain(blocked, z)
    conj_chain = propagator_chain(blocked, z.conjugate())
    factors = resolvent_factors(blocked, z, chain=chain)
    R = factors.resolvent
    R_conj = resolvent_lu(blocked, z.conjugate(), chain=conj_chain)
    X, residual = resolvent_direct(blocked, z)

    slack = tol["inequality_slack"]
    worst_herglotz = math.inf
    worst_dissipative = -math.inf
    worst_norm_excess = -math.inf
    worst_sym_self = 0.0
    worst_sym_prop = 0.0
    for nu in range(blocked.n_sectors):
        d = blocked.sector_dims[nu]
        rng = np.random.default_rng([seed, z_index, nu])
        psi = _unit_vectors(rng, d, n_vectors)
        s_vals = np.einsum("ij,ij->j", psi.conj(), chain.self_energy[nu] @ psi)
        worst_herglotz = min(worst_herglotz, float((s_vals.imag / z.imag).min()))
        g_vals = np.einsum("ij,ij->j", psi.conj(), chain.propagator[nu] @ psi)
        worst_dissipative = max(worst_dissipative, float((g_vals.imag / z.imag + 1.0).max()))
        opn = float(scipy.linalg.svdvals(chain.propagator_inv[nu])[0])
        worst_norm_excess = max(worst_norm_excess, opn - 1.0 / abs(z.imag))
        worst_sym_self = max(worst_sym_self, float(np.abs(
            chain.self_energy[nu].conj().T - conj_chain.self_energy[nu]).max()))
        worst_sym_prop = max(worst_sym_prop, float(np.abs(
            chain.propagator[nu].conj().T - conj_chain.propagator[nu]).max()))

    dim = blocked.dimension
    shifted = blocked.full.toarray() - z * np.eye(dim)
    reconstruction = factors.lower @ factors.block_diag @ factors.upper
    lu_rel = float(np.abs(reconstruction - shifted).max() / np.abs(shifted).max())

    oracle_rel = float(np.linalg.norm(R - X) / np.linalg.norm(X))

    rng = np.random.default_rng([seed, z_index, 777])
    cols = _unit_vectors(rng, dim, 5)
    applied = resolvent_apply(blocked, z, cols, chain=chain)
    apply_rel = float(np.linalg.norm(applied - R @ cols) / np.linalg.norm(R @ cols))

    conj_rel = float(np.linalg.norm(R.conj().T - R_conj) / np.linalg.norm(R_conj))

    second_worst = max(second_resolvent_residuals(blocked, z, chain=chain))

    checks = {
        "herglotz_sign": _check(worst_herglotz, -slack, mode="ge"),
        "dissipative_bound": _check(worst_dissipative, slack),
        "inverse_norm_bound": _check(worst_norm_excess, slack),
        "self_energy_conjugate_symmetry": _check(worst_sym_self, tol["symmetry_abs"]),
        "propagator_conjugate_symmetry": _check(worst_sym_prop, tol["symmetry_abs"]),
        "lu_reconstruction": _check(lu_rel, tol["lu_reconstruction_rel"]),
        "oracle_equivalence": _check(oracle_rel, tol["oracle_rel"]),
        "direct_residual": _check(residual, tol["direct_residual_per_dim"] * dim),
        "apply_matches_product": _check(apply_rel, tol["oracle_rel"]),
        "resolvent_conjugate_symmetry": _check(conj_rel, tol["resolvent_identity_rel"]),
        "second_resolvent_identity": _check(second_worst, tol["second_resolvent_abs"]),
    }
    return checks, R


def verification_report(blocked: BlockedHamiltonian, z_points, tolerances=None,
                        n_vectors: int = 1000, seed: int = 0, threads: int = 1) -> dict:
    """Run the full invariant suite on one assembled model.

    Returns a JSON-ready dict with one block per evaluation point, the
    cross-point resolvent identities, and the structural audit. The
    random probe vectors are seeded per (point, sector), so the report
    does not depend on the thread count.
    """
    tol = dict(DEFAULT_TOLERANCES)
    tol.update(tolerances or {})
    z_points = [spectral_point(z) for z in z_points]

    structure = verify_structure(blocked)

    def worker(iz):
        return _verify_at_z(blocked, z_points[iz], tol, iz, seed, n_vectors)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(worker, range(len(z_points))))
    else:
        results = [worker(iz) for iz in range(len(z_points))]

    per_z = []
    resolvents = []
    for z, (checks, R) in zip(z_points, results):
        per_z.append({"z": [z.real, z.imag], "checks": checks})
        resolvents.append(R)

    worst_pair = 0.0
    for i in range(len(z_points)):
        for j in range(i + 1, len(z_points)):
            zi, zj = z_points[i], z_points[j]
            lhs = resolvents[i] - resolvents[j]
            rhs = (zi - zj) * resolvents[i] @ resolvents[j]
            rel = float(np.linalg.norm(lhs - rhs) / np.linalg.norm(rhs))
            worst_pair = max(worst_pair, rel)
    cross = {
        "first_resolvent_identity": _check(worst_pair, tol["resolvent_identity_rel"]),
        "pairs": len(z_points) * (len(z_points) - 1) // 2,
    }

    passed = (structure.passed
              and cross["first_resolvent_identity"]["passed"]
              and all(c["passed"] for blk in per_z for c in blk["checks"].values()))
    return {
        "kind": "verification",
        "dimension": blocked.dimension,
        "sector_dims": list(blocked.sector_dims),
        "structure": {
            "passed": structure.passed,
            "hermitian": structure.hermitian,
            "block_tridiagonal": structure.block_tridiagonal,
            "blocks_consistent": structure.blocks_consistent,
            "excitation_commutes": structure.excitation_commutes,
            "messages": list(structure.messages),
        },
        "per_z": per_z,
        "cross_z": cross,
        "n_vectors": n_vectors,
        "seed": seed,
        "tolerances": {k: float(v) for k, v in sorted(tol.items())},
        "passed": bool(passed),
    }


def summarize_verification(report: dict) -> str:
    lines = [f"verification: dimension {report['dimension']}, "
             f"sectors {report['sector_dims']}"]
    st = report["structure"]
    lines.append(f"[{'PASS' if st['passed'] else 'FAIL'}] structure audit")
    for msg in st["messages"]:
        lines.append(f"    {msg}")
    for blk in report["per_z"]:
        z = complex(blk["z"][0], blk["z"][1])
        lines.append(f"z = {z}:")
        for name, c in blk["checks"].items():
            lines.append(
                f"  [{'PASS' if c['passed'] else 'FAIL'}] {name} "
                f"(value {c['value']:.3e}, tolerance {c['tolerance']:.1e})"
            )
    c = report["cross_z"]["first_resolvent_identity"]
    lines.append(
        f"[{'PASS' if c['passed'] else 'FAIL'}] first_resolvent_identity over "
        f"{report['cross_z']['pairs']} pair(s) (value {c['value']:.3e})"
    )
    lines.append("overall: " + ("PASS" if report["passed"] else "FAIL"))
    return "\n".join(lines)


def run_verification(cfg: StudyConfig, out_dir=None, threads: int = 1,
                     n_vectors: int = 1000, seed: int = 0) -> dict:
    """Assemble the configured model, run the suite, optionally write reports."""
    blocked = assemble(cfg.model)
    report = verification_report(blocked, cfg.z_points, cfg.tolerances,
                                 n_vectors=n_vectors, seed=seed, threads=threads)
    report["config"] = config_jsonable(cfg)
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(report, out / "verification.json")
        (out / "verification.txt").write_text(summarize_verification(report) + "\n")
    return report


# ---------------------------------------------------------------- convergence

def _gap_form_factors(members, reference):
    """Per-spin differences member - reference, as FormFactors."""
    return [FormFactor(m.amplitudes - r.amplitudes)
            for m, r in zip(members, reference)]


def run_convergence(cfg: StudyConfig, out_dir=None, threads: int = 1) -> dict:
    """Cutoff-family convergence study against the finest member.

    For every threshold the configured form factors are truncated and
    the resolvent distance to the finest member is measured at every
    evaluation point, together with the plain-norm and inverse-scale
    gaps driving it. Needs at least three thresholds to say anything
    about a trend.
    """
    if cfg.cutoffs is None or len(cfg.cutoffs) < 3:
        raise ConfigError("convergence study needs at least 3 cutoffs in the config")
    tol = cfg.tolerances
    model = cfg.model
    grid = model.grid

    member_ffs = []
    for lam in cfg.cutoffs:
        member_ffs.append(tuple(truncate_form_factor(f, grid, lam)
                                for f in model.form_factors))
    ref_ffs = member_ffs[-1]
    specs = [ModelSpec(model.spin, grid, ffs, model.n_max) for ffs in member_ffs]
    blocked_members = [assemble(s) for s in specs]
    blocked_ref = blocked_members[-1]

    n_z = len(cfg.z_points)
    n_cut = len(cfg.cutoffs)

    def resolvent_task(task):
        iz, ic = divmod(task, n_cut)
        return resolvent_lu(blocked_members[ic], cfg.z_points[iz])

    tasks = range(n_z * n_cut)
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            flat = list(pool.map(resolvent_task, tasks))
    else:
        flat = [resolvent_task(t) for t in tasks]

    rows = []
    per_z = []
    for iz, z in enumerate(cfg.z_points):
        members_R = flat[iz * n_cut:(iz + 1) * n_cut]
        R_ref = members_R[-1]
        gaps = []
        for ic, lam in enumerate(cfg.cutoffs):
            diff_ffs = _gap_form_factors(member_ffs[ic], ref_ffs)
            norm0_gap = max(scale_norm(f, grid, 0.0) for f in diff_ffs)
            norm_m1_gap = max(scale_norm(f, grid, -1.0) for f in diff_ffs)
            gap_op = operator_norm(members_R[ic] - R_ref,
                                   rtol=tol["opnorm_rel"], maxiter=10000)
            ratio = gap_op / norm_m1_gap if norm_m1_gap > 0 else 0.0
            member_norm0 = max(scale_norm(f, grid, 0.0) for f in member_ffs[ic])
            gaps.append(gap_op)
            rows.append({
                "lambda": float(lam),
                "norm0_gap": norm0_gap,
                "norm_minus1_gap": norm_m1_gap,
                "resolvent_gap_opnorm": gap_op,
                "ratio": ratio,
                "z_re": z.real,
                "z_im": z.imag,
                "member_norm0": member_norm0,
            })

        mono = all(b <= a + tol["monotonicity_slack"] for a, b in zip(gaps, gaps[1:]))
        strict = all(b < a for a, b in zip(gaps, gaps[1:]))
        cauchy = 0.0
        for i in range(n_cut):
            for j in range(i + 1, n_cut):
                diff_ffs = _gap_form_factors(member_ffs[i], member_ffs[j])
                denom = max(scale_norm(f, grid, -1.0) for f in diff_ffs)
                if denom == 0:
                    continue
                pair_gap = operator_norm(members_R[i] - members_R[j],
                                         rtol=tol["opnorm_rel"], maxiter=10000)
                cauchy = max(cauchy, pair_gap / denom)
        per_z.append({
            "z": [z.real, z.imag],
            "monotone_nonincreasing": bool(mono),
            "strictly_decreasing": bool(strict),
            "cauchy_constant": float(cauchy),
        })

    report = {
        "kind": "convergence",
        "reference": "finest cutoff member (largest threshold); a finite grid has "
                     "no singular limit, so the finest member stands in for it",
        "rows": rows,
        "per_z": per_z,
        "cutoffs": [float(x) for x in cfg.cutoffs],
        "tolerances": {k: float(v) for k, v in sorted(tol.items())},
        "config": config_jsonable(cfg),
    }
    if out_dir is not None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_json(report, out / "convergence.json")
        _write_csv(rows, out / "convergence.csv")
        (out / "convergence.txt").write_text(summarize_convergence(report) + "\n")
    return report


def summarize_convergence(report: dict) -> str:
    lines = [f"convergence study, reference = {report['reference']}"]
    for blk in report["per_z"]:
        z = complex(blk["z"][0], blk["z"][1])
        lines.append(
            f"z = {z}: non-increasing {blk['monotone_nonincreasing']}, "
            f"strictly decreasing {blk['strictly_decreasing']}, "
            f"observed control constant {blk['cauchy_constant']:.4g}"
        )
    lines.append(f"{len(report['rows'])} rows over cutoffs {report['cutoffs']}")
    return "\n".join(lines)


# ---------------------------------------------------------------- reports

def _write_json(report: dict, path: Path):
    stamped = dict(report)
    stamped["generated_at"] = datetime.now(timezone.utc).isoformat()
    path.write_text(json.dumps(stamped, sort_keys=True, indent=2) + "\n")


def _write_csv(rows, path: Path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for row in rows:
            writer.writerow([repr(float(row[c])) for c in CSV_COLUMNS])
