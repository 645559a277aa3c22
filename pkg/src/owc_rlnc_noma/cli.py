"""Command line front end for the alpha-sweep runner.

Exit code 0 means the run completed (infeasible physics is data, not an
error); config and I/O problems exit nonzero with a diagnostic on
stderr. The machine-readable run summary is the final JSON line on
stdout.
"""

from __future__ import annotations

import argparse
import sys

from .config import ConfigError, dump_config, load_config
from .sweep import emit_csv, run_sweep, summary_line


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="owc-rlnc-noma",
        description=(
            "Evaluate packet success probabilities and sum rates of NOMA, OMA "
            "and their network-coded variants over an indoor optical downlink, "
            "sweeping the power allocation coefficient."
        ),
    )
    p.add_argument("--config", metavar="PATH", help="key = value scenario file")
    p.add_argument(
        "--profile",
        choices=("table1", "paper-adjusted"),
        help="built-in parameter profile used for unset keys",
    )
    p.add_argument("--alpha-start", type=float, metavar="X")
    p.add_argument("--alpha-stop", type=float, metavar="X")
    p.add_argument("--alpha-steps", type=int, metavar="N")
    p.add_argument("--trials", type=int, metavar="N", help="Monte-Carlo trials per point (0 disables)")
    p.add_argument("--seed", type=int, metavar="N")
    p.add_argument("--formula-mode", choices=("literal", "corrected"))
    p.add_argument("--output", metavar="PATH", help="write the sweep CSV here")
    p.add_argument(
        "--dump-config",
        action="store_true",
        help="print the fully resolved config and exit",
    )
    return p


def _flag_overrides(args: argparse.Namespace) -> dict[str, str]:
    mapping = {
        "profile": args.profile,
        "alpha_start": args.alpha_start,
        "alpha_stop": args.alpha_stop,
        "alpha_steps": args.alpha_steps,
        "trials": args.trials,
        "seed": args.seed,
        "formula_mode": args.formula_mode,
    }
    return {k: str(v) for k, v in mapping.items() if v is not None}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config, _flag_overrides(args))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.dump_config:
        sys.stdout.write(dump_config(cfg))
        return 0

    result = run_sweep(cfg)

    out_of_view = result.summary["users_out_of_view"]
    if out_of_view:
        print(
            f"note: users outside the field of view (gain 0): {', '.join(out_of_view)}",
            file=sys.stderr,
        )
    n_violating = sum(1 for a in cfg.alphas() if a >= 0.5)
    if n_violating:
        print(
            f"note: {n_violating} of {cfg.alpha_steps} grid points have alpha >= 0.5 "
            "(power ordering of the weak group is violated there)",
            file=sys.stderr,
        )

    if args.output:
        try:
            emit_csv(result, args.output)
        except OSError as exc:
            print(f"output error: {exc}", file=sys.stderr)
            return 3
        print(f"wrote {args.output}", file=sys.stderr)

    print(summary_line(result))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
