"""Command-line driver: kernel checks, identity suite, experiments."""
from __future__ import annotations

import argparse
import os
import sys

from . import __version__
from .admissibility import check_maximal_control
from .experiments import EXPERIMENTS
from .identities import run_identity_suite
from .kernels import load_kernel_spec


def _cmd_check(args: argparse.Namespace) -> int:
    kernel = load_kernel_spec(args.kernelfile)
    report = check_maximal_control(kernel, max_depth=args.depth)
    print(report.format_text())
    if args.kv:
        print()
        print(report.format_kv())
    if report.verdict == "PASS":
        return 0
    if args.allow_fail and report.verdict.startswith("FAIL"):
        return 0
    return 1


def _cmd_identities(args: argparse.Namespace) -> int:
    results = run_identity_suite(n_max=args.n_max, N_max=args.N_max)
    failures = 0
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        print(f"{status} {r.name} [{r.params}]")
        failures += 0 if r.ok else 1
    print(f"{len(results) - failures}/{len(results)} identities verified")
    return 0 if failures == 0 else 1


def _cmd_exp(args: argparse.Namespace) -> int:
    fn = EXPERIMENTS[args.name]
    kwargs = {}
    if args.name == "pointwise-ratios":
        kwargs["kernel"] = args.kernel
        if args.mesh:
            kwargs["mesh"] = args.mesh
    elif args.name == "beurling-composition" and args.mesh:
        kwargs["mesh_src"] = args.mesh
        kwargs["mesh_tgt"] = 2 * args.mesh
    elif args.name in ("counterexample-growth",) and args.window:
        kwargs["cells"] = int(args.window)
    result = fn(**kwargs)
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, f"{result.name}.csv")
    result.to_csv(path)
    print(result.summary_text())
    print(f"rows written to {path}")
    ok = all(bool(v) for k, v in result.summary.items() if isinstance(v, bool))
    return 0 if ok else 1


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="czkit",
        description="Exact admissibility checks and numerical experiments for "
        "smooth homogeneous singular-integral kernels.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_check = sub.add_parser("check", help="run the divisor/non-vanishing check on a kernel file")
    p_check.add_argument("kernelfile")
    p_check.add_argument("--depth", type=int, default=14, help="maximum grid depth")
    p_check.add_argument("--kv", action="store_true", help="also print a key=value block")
    p_check.add_argument("--allow-fail", action="store_true", help="exit 0 on a decisive FAIL verdict")
    p_check.set_defaults(fn=_cmd_check)

    p_id = sub.add_parser("identities", help="verify the exact identity suite")
    p_id.add_argument("--n-max", type=int, default=5)
    p_id.add_argument("--N-max", type=int, default=6)
    p_id.set_defaults(fn=_cmd_identities)

    p_exp = sub.add_parser("exp", help="run a numerical experiment")
    p_exp.add_argument("name", choices=sorted(EXPERIMENTS))
    p_exp.add_argument("--out", default="out", help="output directory for CSV tables")
    p_exp.add_argument("--mesh", type=float, default=None, help="grid mesh override")
    p_exp.add_argument("--window", type=float, default=None, help="window/cells override")
    p_exp.add_argument("--kernel", choices=("hilbert", "beurling"), default="hilbert")
    p_exp.set_defaults(fn=_cmd_exp)

    p_ver = sub.add_parser("version", help="print the package version")
    p_ver.set_defaults(fn=lambda a: (print(f"czkit {__version__}"), 0)[1])

    args = parser.parse_args(argv)
    return args.fn(args)


if __name__ == "__main__":
    sys.exit(main())
