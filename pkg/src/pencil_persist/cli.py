"""Command line interface: ``pencil-persist <command> ...``.

Exit codes: 0 success, 2 internal inconsistency, 3 invalid input,
4 numerical failure (non-convergence, exhausted search).
"""

import argparse
import json
import sys

import numpy as np

from . import serialize
from .birman_schwinger import bs_reduce, count_in_unit_interval
from .config import ToleranceConfig
from .corpus import corpus_list, corpus_run, hunt
from .errors import InternalInconsistency, NumericalError, ValidationError
from .persistence import PerturbationFamily, analyze, cyclicity_check

EXIT_OK = 0
EXIT_INCONSISTENT = 2
EXIT_INPUT = 3
EXIT_NUMERICAL = 4

_TOL_FIELDS = ("rank", "eig", "herm", "zero_poly", "real", "cluster")


def _add_tol_flags(p):
    g = p.add_argument_group("tolerances (override PENCIL_PERSIST_TOL_* variables)")
    for name in _TOL_FIELDS:
        g.add_argument(f"--tol-{name.replace('_', '-')}", type=float, default=None, dest=f"tol_{name}")


def _cfg(args):
    return ToleranceConfig.from_env(**{f"tol_{k}": getattr(args, f"tol_{k}", None) for k in _TOL_FIELDS})


def _family(args):
    return PerturbationFamily(serialize.read_matrix(args.h0), serialize.read_matrix(args.v))


def _fmt_t(t):
    t = complex(t)
    if abs(t.imag) < 1e-14:
        return f"{t.real:.12g}"
    return f"{t.real:.12g}{t.imag:+.12g}i"


def _print_report(rep):
    ex = rep.exceptional
    print(f"lambda0 = {rep.lambda0:g}  (eigenvalue of H0: {'yes' if rep.lambda0_in_spectrum else 'no'})")
    print(f"exceptional set: {ex.kind.value}")
    for t, m in ex.roots:
        print(f"  t = {_fmt_t(t)}  (multiplicity {m})")
    if ex.roots:
        print(f"  real roots in [0, 1]: {[_fmt_t(t) for t, _ in ex.real_roots_in_unit_interval]}")
    c, v = rep.cyclicity, rep.v_class
    print(f"cyclic: {c.cyclic} (Krylov rank {c.krylov_rank}/{c.generator_count})")
    sign = "indefinite" if v.indefinite else ("zero" if v.psd and v.nsd else ("psd" if v.psd else "nsd"))
    print(f"V: {sign}, rank+ {v.rank_plus}, rank- {v.rank_minus}, kernel {v.kernel_dim}")
    print(f"generic kernel dimension: {rep.generic_kernel_dim}")
    print(f"measure estimate: {rep.measure_estimate:g}")
    print("checks:")
    for ch in rep.theorem_checks:
        status = "ok" if ch.consistent else "FAIL"
        if not ch.applicable:
            status = "n/a"
        print(f"  [{status:>4}] {ch.name}: predicted {ch.predicted}; observed {ch.observed}")
    for t, w in rep.witnesses:
        print(f"witness at t = {t:.6g}: {np.array2string(w, precision=6)}")
    print(f"diagnosis: {rep.diagnosis}")
    for note in rep.notes:
        print(f"note: {note}")


def cmd_analyze(args):
    rep = analyze(_family(args), args.lambda0, _cfg(args), seed=args.seed)
    if args.json:
        print(serialize.dumps(serialize.report_to_obj(rep)))
    else:
        _print_report(rep)
    return EXIT_OK


def cmd_bs(args):
    cfg = _cfg(args)
    fam = _family(args)
    r = bs_reduce(fam.H0, fam.V, args.e0, cfg)
    count = count_in_unit_interval(r, cfg)
    if args.json:
        print(serialize.dumps({
            "e0": r.E0,
            "mu": [{"re": float(m.real), "im": float(m.imag)} for m in r.mu],
            "exceptional_t": [{"re": float(t.real), "im": float(t.imag)} for t in r.exceptional_t],
            "count_in_unit_interval": count,
            "note": r.note,
        }))
    else:
        print(f"E0 = {r.E0:g}")
        print("eigenvalues of V (H0 - E0)^-1: " + ", ".join(_fmt_t(m) for m in r.mu))
        print("exceptional t: " + (", ".join(_fmt_t(t) for t in r.exceptional_t) or "none"))
        print(f"in [0, 1]: {count}")
        print(f"note: {r.note}")
    return EXIT_OK


def cmd_cyclicity(args):
    v = cyclicity_check(_family(args), _cfg(args))
    if args.json:
        print(serialize.dumps({"cyclic": v.cyclic, "krylov_rank": v.krylov_rank,
                               "generator_count": v.generator_count}))
    else:
        print(f"cyclic: {v.cyclic} (Krylov rank {v.krylov_rank} of {v.generator_count})")
    return EXIT_OK


def cmd_corpus(args):
    if args.action == "list":
        items = corpus_list()
        if args.json:
            print(serialize.dumps([{"id": i, "provenance": p} for i, p in items]))
        else:
            for i, p in items:
                print(f"{i:28s} {p}")
        return EXIT_OK
    if not args.id:
        raise ValidationError("corpus run needs an instance id")
    res = corpus_run(args.id, _cfg(args), seed=args.seed)
    if args.json:
        obj = {
            "id": res.id,
            "passed": res.passed,
            "checks": [{"name": n, "expected": str(e), "observed": str(o), "ok": ok}
                       for n, e, o, ok in res.checks],
            "exceptional": serialize.exceptional_to_obj(res.exceptional),
        }
        if res.report is not None:
            obj["report"] = serialize.report_to_obj(res.report)
        print(serialize.dumps(obj))
    else:
        print(f"{res.id}: {'PASS' if res.passed else 'FAIL'}")
        for n, e, o, ok in res.checks:
            print(f"  [{'ok' if ok else 'FAIL'}] {n}: expected {e}; observed {o}")
        if res.report is not None:
            print()
            _print_report(res.report)
    return EXIT_OK if res.passed else EXIT_INCONSISTENT


def cmd_hunt(args):
    res = hunt(args.dim, args.trials, args.seed, _cfg(args))
    obj = res.to_obj()
    if args.out:
        with open(args.out, "w") as fh:
            json.dump(obj, fh, indent=2)
    if args.json:
        print(serialize.dumps(obj))
    else:
        print(f"n = {res.n}: {res.successes}/{res.trials} trials produced verified families "
              f"(success rate {res.success_rate:.2f})")
        for fam in res.families:
            print(f"  trial {fam['trial']} seed {fam['seed']}: residuals "
                  + ", ".join(f"{r:.1e}" for r in fam["residuals"]))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="pencil-persist",
                                     description="Exceptional sets of H0 + tV at a fixed eigenvalue.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="full persistence report")
    p.add_argument("--h0", required=True, help="matrix JSON file ('-' for stdin)")
    p.add_argument("--v", required=True, help="matrix JSON file")
    p.add_argument("--lambda0", type=float, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("bs", help="Birman-Schwinger reduction at E0 outside sigma(H0)")
    p.add_argument("--h0", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--e0", type=float, required=True)
    p.add_argument("--json", action="store_true")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_bs)

    p = sub.add_parser("cyclicity", help="is ran(V) cyclic for H0")
    p.add_argument("--h0", required=True)
    p.add_argument("--v", required=True)
    p.add_argument("--json", action="store_true")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_cyclicity)

    p = sub.add_parser("corpus", help="built-in fixtures")
    p.add_argument("action", choices=("list", "run"))
    p.add_argument("id", nargs="?")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--json", action="store_true")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_corpus)

    p = sub.add_parser("hunt", help="search for persistent counterexample families")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="also write the JSON result here")
    p.add_argument("--json", action="store_true")
    _add_tol_flags(p)
    p.set_defaults(func=cmd_hunt)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalInconsistency as exc:
        print(f"internal inconsistency: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except ValidationError as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
