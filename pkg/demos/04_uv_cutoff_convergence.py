"""Cutoff family on a geometric frequency grid: what controls the resolvent.

Truncating the coupling at a threshold and raising that threshold gives
a family of models. The resolvent distance to the finest member shrinks
in step with the inverse-scale norm of the discarded tail, while the
plain norm of the kept coupling keeps growing. That split is the whole
point of measuring convergence in the weaker norm.
"""

from pathlib import Path

from spinboson import parse_config, run_convergence

CONFIG = Path(__file__).parent / "configs" / "uv_study.json"


def main():
    cfg = parse_config(CONFIG)
    print(f"thresholds: {[int(c) for c in cfg.cutoffs]}")
    print(f"evaluation point: {cfg.z_points[0]}")
    report = run_convergence(cfg)

    header = f"{'threshold':>10} {'tail norm(-1)':>14} {'resolvent gap':>14} " \
             f"{'ratio':>10} {'kept norm(0)':>13}"
    print("\n" + header)
    print("-" * len(header))
    for row in report["rows"]:
        print(f"{row['lambda']:>10.0f} {row['norm_minus1_gap']:>14.6f} "
              f"{row['resolvent_gap_opnorm']:>14.6f} {row['ratio']:>10.4f} "
              f"{row['member_norm0']:>13.4f}")

    blk = report["per_z"][0]
    print(f"\nstrictly decreasing gap column: {blk['strictly_decreasing']}")
    print(f"observed control constant over all member pairs: "
          f"{blk['cauchy_constant']:.4f}")
    first, last = report["rows"][0], report["rows"][-1]
    print(f"plain norm grew {last['member_norm0'] / first['member_norm0']:.1f}x "
          f"while the gaps fell to zero: the inverse-scale norm is the one "
          f"doing the controlling")


if __name__ == "__main__":
    main()
