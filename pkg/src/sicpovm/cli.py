"""``sicpovm`` command line: basis, sic, scan, bounds, tomo, optimize.

Exit codes: 0 success, 2 usage error, 3 verification failure, 4 numerical failure.
"""
import argparse
import json
import sys


from . import basis as bas
from . import bounds, optimize, sic, tomography
from ._jacobi import ConvergenceError
from .hermitian import hermitian, op_from_json, op_to_json

EXIT_USAGE = 2
EXIT_VERIFY = 3
EXIT_NUMERIC = 4


class UsageError(Exception):
    pass


class VerificationFailed(Exception):
    pass


def _write(path, text):
    if path in (None, "-"):
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from exc


def _dump(obj):
    return json.dumps(obj, indent=1) + "\n"


def _load(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from exc


def cmd_basis(args):
    if args.kind == "pauli":
        if args.d != 2:
            raise UsageError("--kind pauli requires --d 2")
        b = bas.pauli_basis()
    elif args.kind == "gellmann":
        b = bas.gell_mann_basis(args.d)
    else:
        b = bas.rotated_basis(args.d, args.seed, args.steps)
    _write(args.out, _dump(bas.basis_to_json(b)))


def _pick_t(fam, spec):
    if spec == "max":
        return fam.t1
    if spec == "min":
        return fam.t0
    try:
        t = float(spec)
    except ValueError:
        raise UsageError(f"--t must be max, min or a number, got {spec!r}") from None
    if t == 0:
        raise UsageError("t must be nonzero")
    return t


def cmd_sic(args):
    b = bas.basis_from_json(_load(args.basis))
    fam = sic.make_family(b)
    if args.t == "max" and abs(fam.t0) > fam.t1:
        fam = sic.make_family(b.negated())
    t = _pick_t(fam, args.t)
    try:
        povm = sic.construct_sic(fam, t)
    except sic.NotPositiveError as exc:
        raise VerificationFailed(str(exc)) from exc
    report = sic.verify_sic(povm)
    _write(args.out, _dump(sic.sic_to_json(povm)))
    text = _dump(report.to_dict())
    if args.report:
        _write(args.report, text)
    else:
        sys.stderr.write(text)
    if not report.passed:
        raise VerificationFailed("SIC POVM verification failed")


def cmd_scan(args):
    if args.dmin < 2 or args.dmax < args.dmin:
        raise UsageError(f"need 2 <= dmin <= dmax, got dmin={args.dmin}, dmax={args.dmax}")
    rows = bounds.dimension_scan(args.dmin, args.dmax)
    if args.csv in (None, "-"):
        bounds.write_scan_csv(rows, sys.stdout)
    else:
        with open(args.csv, "w", encoding="utf-8", newline="\n") as fh:
            bounds.write_scan_csv(rows, fh)
    if args.json:
        _write(args.json, _dump([vars(r) for r in rows]))


def cmd_bounds(args):
    if args.d < 2:
        raise UsageError("--d must be at least 2")
    _write(args.out, _dump(bounds.weyl_bounds(args.d).to_dict()))


def cmd_tomo(args):
    povm = sic.sic_from_json(_load(args.sic))
    rho = tomography.density_matrix(op_from_json(_load(args.state)), tol=1e-9)
    if rho.shape[0] != povm.dim:
        raise UsageError(f"dimension mismatch: SIC POVM d={povm.dim}, state d={rho.shape[0]}")
    if args.shots < 1:
        raise UsageError("--shots must be at least 1")
    try:
        dual = sic.dual_frame(povm)
    except ValueError as exc:
        raise ArithmeticError(str(exc)) from exc
    counts = tomography.simulate_shots(povm, rho, args.shots, args.seed)
    est = tomography.estimate_state(dual, counts, rho)
    out = tomography.counts_to_json(counts)
    out["seed"] = args.seed
    out["estimate"] = op_to_json(hermitian(est.estimate))
    out["frobenius_error"] = est.frobenius_error
    _write(args.out, _dump(out))


def _parse_seeds(text):
    try:
        return [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise UsageError(f"--seeds must be a comma-separated list of integers, got {text!r}") from None


def cmd_optimize(args):
    if args.d < 2 or args.iters < 1 or args.step <= 0:
        raise UsageError("need --d >= 2, --iters >= 1 and --step > 0")
    seeds = _parse_seeds(args.seeds)
    if not seeds:
        raise UsageError("--seeds is empty")
    start = bas.pauli_basis() if args.d == 2 else bas.gell_mann_basis(args.d)
    best, _ = optimize.multi_start(start, args.iters, seeds, args.step, shrink=args.shrink)
    _write(args.out, _dump(optimize.search_to_json(best, args.iters)))


def build_parser():
    p = argparse.ArgumentParser(prog="sicpovm", description="General SIC POVM construction and analysis.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("basis", help="write an orthonormal traceless basis")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--kind", choices=("gellmann", "pauli", "rotated"), default="gellmann")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--steps", type=int, default=50)
    s.add_argument("--out")
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("sic", help="build and verify a SIC POVM from a basis file")
    s.add_argument("--basis", required=True)
    s.add_argument("--t", default="max", help="max, min or a nonzero number")
    s.add_argument("--out")
    s.add_argument("--report", help="verification report path (default: stderr)")
    s.set_defaults(func=cmd_sic)

    s = sub.add_parser("scan", help="Gell-Mann t_m scan over dimensions (CSV)")
    s.add_argument("--dmin", type=int, default=2)
    s.add_argument("--dmax", type=int, required=True)
    s.add_argument("--csv")
    s.add_argument("--json", help="optional JSON mirror of the table")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("bounds", help="Weyl-inequality bounds report for the Gell-Mann basis")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--out")
    s.set_defaults(func=cmd_bounds)

    s = sub.add_parser("tomo", help="simulate SIC tomography of a state")
    s.add_argument("--sic", required=True)
    s.add_argument("--state", required=True)
    s.add_argument("--shots", type=int, required=True)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--out")
    s.set_defaults(func=cmd_tomo)

    s = sub.add_parser("optimize", help="multi-start search for bases with larger a(t_m)")
    s.add_argument("--d", type=int, required=True)
    s.add_argument("--iters", type=int, default=2000)
    s.add_argument("--seeds", default="0")
    s.add_argument("--step", type=float, default=0.1)
    s.add_argument("--shrink", type=float, default=None)
    s.add_argument("--out")
    s.set_defaults(func=cmd_optimize)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"sicpovm {args.command}: error: {exc}\n")
        return EXIT_USAGE
    except VerificationFailed as exc:
        sys.stderr.write(f"sicpovm {args.command}: verification failed: {exc}\n")
        return EXIT_VERIFY
    except (ConvergenceError, bounds.SingularBlockError, bounds.RootFindingError, ArithmeticError) as exc:
        sys.stderr.write(f"sicpovm {args.command}: numerical failure: {exc}\n")
        return EXIT_NUMERIC
    except ValueError as exc:
        sys.stderr.write(f"sicpovm {args.command}: error: {exc}\n")
        return EXIT_USAGE
    return 0


if __name__ == "__main__":
    sys.exit(main())
