"""Command-line front end.

Exit codes: 0 certified / all bounds pass, 1 mathematical failure,
2 input or usage error.  Input errors print one line to stderr, never a
traceback.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bounds import BOUND_TOL, ErrorCertificate, certify_bounds
from .errors import SaddleCertError, UncertifiedCoarseSystem
from .infsup import gamma_asymmetric
from .manifest import load_manifest, load_pair, write_pair, write_system
from .problems import GeneratorSpec, gen_poisson1d, gen_random, manufactured_load
from .saddle import CHECK_TOL, StabilityCertificate, certify
from .selftest import run_suites
from .spaces import RANK_TOL, is_vacuous

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(f"usage error: {message}")


def _num(x):
    if x is None or is_vacuous(x):
        return None
    return float(x)


def stability_report(cert: StabilityCertificate) -> dict:
    return {
        "alpha": _num(cert.alpha),
        "alpha_vacuous": cert.alpha_vacuous,
        "beta": _num(cert.beta),
        "delta": _num(cert.delta),
        "nu": _num(cert.nu),
        "gamma": _num(cert.gamma),
        "gamma_true": _num(cert.gamma_true),
        "norm_a": _num(cert.norm_a),
        "norm_b": _num(cert.norm_b),
        "norm_d": _num(cert.norm_d),
        "norm_c": _num(cert.norm_c),
        "dim_R": cert.dim_R,
        "dim_S": cert.dim_S,
        "dim_M": cert.dim_M,
        "dim_N": cert.dim_N,
        "certified": cert.certified,
        "reasons": list(cert.reasons),
        "rank_tol": cert.rank_tol,
        "check_tol": cert.check_tol,
    }


def bound_report(cert: ErrorCertificate, rank_tol: float) -> dict:
    keys = (
        "err_primal", "err_mult", "err_global", "best_primal", "best_mult", "best_global",
        "norm_a", "norm_b", "norm_d", "norm_c", "alpha", "beta", "delta", "gamma", "gamma_true",
        "angle_RRt", "bound_global", "bound_global_true", "bound_primal", "bound_primal_mult_term",
        "bound_mult",
    )
    out = {k: _num(getattr(cert, k)) for k in keys}
    out.update(
        angle_vacuous=cert.angle_vacuous,
        pass_global=cert.pass_global,
        pass_global_true=cert.pass_global_true,
        pass_primal=cert.pass_primal,
        pass_mult=cert.pass_mult,
        all_pass=cert.all_pass,
        rank_tol=rank_tol,
        check_tol=cert.check_tol,
    )
    return out


def format_text(report: dict) -> str:
    width = max(len(k) for k in report)
    lines = []
    for k, v in report.items():
        if isinstance(v, float):
            v = f"{v:.10g}"
        elif isinstance(v, list):
            v = ", ".join(v) if v else "-"
        elif v is None:
            v = "n/a"
        lines.append(f"{k:<{width}}  {v}")
    return "\n".join(lines)


def emit(report: dict, fmt: str, out=None) -> None:
    out = out or sys.stdout
    if fmt == "json":
        # repr-based float serialization round-trips exactly
        out.write(json.dumps(report, indent=2, ensure_ascii=False) + "\n")
    else:
        out.write(format_text(report) + "\n")


def _tols(args, manifest):
    rank_tol = args.rank_tol if args.rank_tol is not None else (manifest.rank_tol or RANK_TOL)
    check_tol = args.check_tol if args.check_tol is not None else manifest.check_tol
    return rank_tol, check_tol


def cmd_certify(args) -> int:
    m = load_manifest(args.manifest)
    rank_tol, check_tol = _tols(args, m)
    cert = certify(m.system, rank_tol=rank_tol, check_tol=check_tol if check_tol is not None else CHECK_TOL)
    emit(stability_report(cert), args.format)
    return EXIT_OK if cert.certified else EXIT_FAIL


def cmd_bound(args) -> int:
    coarse = load_manifest(args.coarse_manifest)
    if args.fine_manifest is not None:
        fine_path = Path(args.fine_manifest)
    elif coarse.fine_manifest_path is not None:
        fine_path = coarse.fine_manifest_path
    else:
        raise InputError(f"{coarse.path}: no fine manifest given and none referenced in 'pair'")
    fine = load_manifest(fine_path)
    if fine.load is None:
        raise InputError(f"{fine.path}: fine manifest has no 'load' section")
    pair = load_pair(coarse, fine)
    rank_tol, check_tol = _tols(args, coarse)
    try:
        cert = certify_bounds(pair, fine.load, rank_tol=rank_tol,
                              check_tol=check_tol if check_tol is not None else BOUND_TOL)
    except UncertifiedCoarseSystem as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_FAIL
    emit(bound_report(cert, rank_tol), args.format)
    return EXIT_OK if cert.all_pass else EXIT_FAIL


def cmd_generate(args) -> int:
    out = Path(args.out)
    if args.kind == "random":
        spec = GeneratorSpec(kind="random", seed=args.seed, n_P=args.nP, n_U=args.nU,
                             spectrum=tuple(args.spectrum))
        write_system(out, gen_random(spec), extra={"generator": spec.to_dict()})
        print(f"wrote {out / 'manifest.json'}")
    else:
        spec = GeneratorSpec(kind="poisson1d", seed=args.seed, n_coarse=args.n,
                             n_fine=args.n * args.refine, eps=args.eps)
        pair = gen_poisson1d(spec)
        extra = {"generator": {**spec.to_dict(), "profile": args.profile}}
        coarse_path, fine_path = write_pair(out, pair, manufactured_load(pair, args.profile), extra)
        print(f"wrote {coarse_path}\nwrote {fine_path}")
    return EXIT_OK


def cmd_selftest(args, gamma_fn=gamma_asymmetric) -> int:
    results = run_suites(seed=args.seed, count=args.count, dupire_count=args.dupire_count, gamma_fn=gamma_fn)
    for r in results:
        status = "PASS" if r.ok else "FAIL"
        line = f"{status}  {r.name:<22} {r.passed}/{r.total}"
        if not r.ok:
            line += f"  reproducer seed {r.failing_seed}: {r.detail}"
        print(line)
    failed = [r.name for r in results if not r.ok]
    if failed:
        print("failing suites: " + ", ".join(failed))
        return EXIT_FAIL
    print(f"all {len(results)} suites passed")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="saddlecert", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def tol_flags(sp):
        sp.add_argument("--format", choices=("text", "json"), default="text")
        sp.add_argument("--rank-tol", type=float, default=None, help=f"kernel rank tolerance (default {RANK_TOL})")
        sp.add_argument("--check-tol", type=float, default=None,
                        help=f"inequality slack (default {CHECK_TOL} for certify, {BOUND_TOL} for bound)")

    sp = sub.add_parser("certify", help="inf-sup constants and weak-coercivity certificate")
    sp.add_argument("manifest")
    tol_flags(sp)
    sp.set_defaults(func=cmd_certify)

    sp = sub.add_parser("bound", help="check a-priori error bounds of a coarse system against a fine one")
    sp.add_argument("coarse_manifest")
    sp.add_argument("fine_manifest", nargs="?", default=None)
    tol_flags(sp)
    sp.set_defaults(func=cmd_bound)

    sp = sub.add_parser("generate", help="write a generated test problem to disk")
    sp.add_argument("kind", choices=("random", "poisson1d"))
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--nP", type=int, default=4)
    sp.add_argument("--nU", type=int, default=2)
    sp.add_argument("--spectrum", type=float, nargs=2, default=(0.5, 2.0))
    sp.add_argument("--n", type=int, default=8, help="coarse cell count")
    sp.add_argument("--refine", type=int, default=16, help="fine cells per coarse cell")
    sp.add_argument("--eps", type=float, default=0.0)
    sp.add_argument("--profile", choices=("sine", "poly"), default="sine")
    sp.set_defaults(func=cmd_generate)

    sp = sub.add_parser("selftest", help="run the seeded property suites")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--count", type=int, default=20)
    sp.add_argument("--dupire-count", type=int, default=1000)
    sp.set_defaults(func=cmd_selftest)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except InputError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except (SaddleCertError, ValueError, OSError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return EXIT_INPUT
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_INPUT
    except Exception as exc:  # exit-code contract is total
        sys.stderr.write(f"error: unexpected {type(exc).__name__}: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
