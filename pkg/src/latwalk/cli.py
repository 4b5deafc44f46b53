"""Command line interface: ``latwalk <subcommand> ...``.

Exit codes: 0 success, 1 validation or configuration error, 2 resource
error, 3 failed ``study --assert`` check.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import asymptotics, exact
from .decomposition import joint_via_decomposition, occupation_via_decomposition
from .errors import LatwalkError, ResourceError
from .montecarlo import estimate_joint
from .plot import emit_plot
from .studies import assert_study, load_config, run_study
from .walk import load_walk

EXIT_OK, EXIT_INVALID, EXIT_RESOURCE, EXIT_ASSERT = 0, 1, 2, 3

ASYMPTOTIC_FNS = {
    "phi": (asymptotics.phi, "nu a x ell"),
    "psi": (asymptotics.psi, "nu a ell"),
    "gaussian": (asymptotics.gaussian_density, "nu x"),
    "rayleigh": (asymptotics.rayleigh_two_sided, "nu x"),
    "kaigh": (asymptotics.kaigh_hitting_density, "nu n a"),
    "uchiyama": (asymptotics.uchiyama_avoid, "nu n x a"),
    "omega": (asymptotics.stable_omega_density, "nu n ell m"),
    "survival": (asymptotics.survival_limit, "nu"),
    "avoid-prob": (asymptotics.avoid_prob_limit, "nu n a"),
    "kaigh-tail": (asymptotics.kaigh_tail, "nu z"),
    "erf": (asymptotics.erf, "x"),
    "erfc": (asymptotics.erfc, "x"),
}


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_validate(args) -> int:
    spec = load_walk(args.walk)
    print(f"support  {spec.step.support()}")
    print(f"variance {spec.variance:.17g}")
    print(f"max_step {spec.max_step}")
    return EXIT_OK


def cmd_exact(args) -> int:
    spec = load_walk(args.walk)
    what = args.what or ("marginal" if args.a is None else "joint")
    a = 0 if args.a is None else args.a
    if what == "marginal":
        text = exact.marginal_pmf(spec, args.n).to_csv()
    elif what == "first-passage":
        text = exact.first_passage_pmf(spec, a, args.n).to_csv()
    elif what == "avoid":
        text = exact.avoid_pmf(spec, a, args.n).to_csv()
    elif what == "occupation":
        text = exact.occupation_pmf(spec, a, args.n, cap=args.cap).to_csv()
    elif what == "survival":
        tail = exact.survival_tail(spec, args.n)
        text = "index,probability\n" + "".join(f"{k},{v:.17g}\n" for k, v in enumerate(tail))
    else:
        text = exact.joint_pmf(spec, a, args.n, cap=args.cap).to_csv()
    _emit(text, args.out)
    return EXIT_OK


def cmd_decompose(args) -> int:
    spec = load_walk(args.walk)
    joint = joint_via_decomposition(spec, args.n, args.x, args.a, args.ell)
    occ = occupation_via_decomposition(spec, args.n, args.a, args.ell)
    print(f"joint      {joint:.17g}")
    print(f"occupation {occ:.17g}")
    return EXIT_OK


def cmd_asymptotic(args) -> int:
    fn, signature = ASYMPTOTIC_FNS[args.fn]
    names = signature.split()
    if len(args.args) != len(names):
        print(f"{args.fn} expects {len(names)} arguments: {signature}", file=sys.stderr)
        return EXIT_INVALID
    print(f"{float(fn(*args.args)):.17g}")
    return EXIT_OK


def cmd_study(args) -> int:
    config = load_config(args.config)
    result = run_study(config)
    out_csv = args.out_csv or config.out_csv
    out_svg = args.out_svg or config.out_svg
    text = result.to_csv(out_csv)
    if not out_csv:
        sys.stdout.write(text)
    if out_svg:
        if not out_csv:
            print("--out-svg needs --out-csv (the chart is drawn from the CSV)", file=sys.stderr)
            return EXIT_INVALID
        emit_plot(out_csv, out_svg)
    for n, e in zip(*result.error_curve()):
        print(f"# {config.kind} n={n} sup_error={e:.6e}", file=sys.stderr)
    if args.check:
        ok, msg = assert_study(result)
        print(f"# assert {'PASS' if ok else 'FAIL'}: {msg}", file=sys.stderr)
        if not ok:
            return EXIT_ASSERT
    return EXIT_OK


def cmd_mc(args) -> int:
    spec = load_walk(args.walk)
    est = estimate_joint(spec, args.n, args.a, args.trials, args.seed, workers=args.workers)
    _emit(est.to_csv(), args.out)
    return EXIT_OK


def cmd_identities(args) -> int:
    print("which,y,z,t,lhs,rhs,abs_error")
    worst = 0.0
    for which, y, z, t in asymptotics.identity_grid():
        lhs, rhs = asymptotics.integral_identity_check(which, y, z, t)
        worst = max(worst, abs(lhs - rhs))
        print(f"{which},{y:g},{z:g},{t:g},{lhs:.17g},{rhs:.17g},{abs(lhs - rhs):.3e}")
    return EXIT_OK if worst <= 1e-8 else EXIT_ASSERT


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="latwalk", description="Exact laws and local limits of lattice walks with occupation counts.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check a walk file")
    s.add_argument("--walk", required=True, help="walk file, or builtin:w3 / builtin:lazy / builtin:five")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("exact", help="exact laws as CSV")
    s.add_argument("--walk", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int)
    s.add_argument("--what", choices=["marginal", "first-passage", "survival", "avoid", "joint", "occupation"])
    s.add_argument("--cap", type=int, help="override the horizon cap of the 2-d tables")
    s.add_argument("--out")
    s.set_defaults(func=cmd_exact)

    s = sub.add_parser("decompose", help="P[S_n=x, Lambda^a_n=ell] and P[Lambda^a_n=ell] from first-passage laws")
    s.add_argument("--walk", required=True)
    for name in ("n", "a", "x", "ell"):
        s.add_argument(f"--{name}", type=int, required=True)
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser("asymptotic", help="evaluate a limit density")
    s.add_argument("--fn", required=True, choices=sorted(ASYMPTOTIC_FNS))
    s.add_argument("--args", nargs="*", type=float, default=[])
    s.set_defaults(func=cmd_asymptotic)

    s = sub.add_parser("study", help="run a convergence study from a config file")
    s.add_argument("--config", required=True)
    s.add_argument("--out-csv")
    s.add_argument("--out-svg")
    s.add_argument("--assert", dest="check", action="store_true", help="exit 3 unless the convergence check passes")
    s.set_defaults(func=cmd_study)

    s = sub.add_parser("mc", help="Monte Carlo estimate of the joint law")
    s.add_argument("--walk", required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--a", type=int, required=True)
    s.add_argument("--trials", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out")
    s.set_defaults(func=cmd_mc)

    s = sub.add_parser("identities", help="check the hitting-time convolution identities")
    s.set_defaults(func=cmd_identities)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ResourceError as exc:
        print(f"resource error: {exc}", file=sys.stderr)
        return EXIT_RESOURCE
    except (LatwalkError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
