"""Command-line interface: every experiment as a subcommand.

Reports go to stdout as deterministic JSON (or CSV with --csv); --out DIR
additionally writes <cmd>.json, <cmd>.csv and a rendered <cmd>.png.

Exit codes: 0 all run-level assertions hold, 1 an assertion failed,
2 schema violation, 3 theory invariant failure at load, 4 size cap exceeded.
"""

from __future__ import annotations

import argparse
import os
import random
import sys
from fractions import Fraction

from . import advice as advice_mod
from . import commcc as commcc_mod
from .boxworld import (
    TruthTable,
    gbit_theory,
    is_no_signalling,
    make_f_box,
    parity,
    sample_local_measurement,
)
from .exactmath import format_rational
from .gptcore import (
    TheoryInstance,
    TheorySchemaError,
    TheoryValidationError,
    check_bit_symmetry,
    check_causality,
    check_tomographic_locality,
    load_theory_file,
)
from .reporting import to_csv, to_json, write_report
from .zoo import classical_bit_theory, qubit_sampled_theory, rebit_theory

EXIT_ASSERTION = 1
EXIT_SCHEMA = 2
EXIT_INVARIANT = 3
EXIT_SIZE_CAP = 4

BUILTIN_THEORIES = {
    "classical": classical_bit_theory,
    "boxworld": gbit_theory,
    "rebit": rebit_theory,
    "qubit": qubit_sampled_theory,
}


def _default_seed() -> int:
    return int(os.environ.get("GPTLAB_SEED", "0"))


def _emit(args, kind: str, report: dict) -> None:
    if args.out:
        write_report(kind, report, args.out)
    if args.csv:
        sys.stdout.write(to_csv(report))
    else:
        print(to_json(report))


def _load_theory(spec: str) -> TheoryInstance:
    if spec in BUILTIN_THEORIES:
        return BUILTIN_THEORIES[spec]()
    return load_theory_file(spec)


def cmd_check_theory(args) -> int:
    try:
        theory = _load_theory(args.theory)
        theory.validate()
    except TheorySchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FileNotFoundError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except TheoryValidationError as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    certificates = []
    causal, cert = check_causality(theory)
    if cert:
        certificates.append({"check": "causality", **cert})
    sys_t = theory.systems[0]
    tl, cert = check_tomographic_locality(theory, sys_t, sys_t)
    certificates.append({"check": "tomographic_locality", **cert})
    bsym, cert = check_bit_symmetry(theory, sys_t)
    certificates.append({"check": "bit_symmetry", **cert})
    report = {
        "causality": causal,
        "tomographic_locality": tl,
        "bit_symmetry": bsym,
        "mode": "sampled-evidence" if theory.sampled else "exact",
        "certificates": certificates,
    }
    _emit(args, "check-theory", report)
    return 0


def _truth_table(spec: str, n: int, rng: random.Random) -> TruthTable:
    if spec == "random":
        return TruthTable.random(n, rng)
    if os.path.exists(spec):
        tt = TruthTable.from_file(spec)
    else:
        tt = TruthTable.from_string(spec)
    if tt.n != n:
        raise ValueError(f"truth table is on {tt.n} bits, expected {n}")
    return tt


def cmd_fbox(args) -> int:
    seed = args.seed
    rng = random.Random(seed)
    try:
        f = _truth_table(args.f, args.n, rng)
        box = make_f_box(f)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP if "outside" in str(exc) else EXIT_SCHEMA
    n = args.n
    weight = Fraction(1, 1 << (n - 1))
    entries_ok = all(
        p == weight for col in box.table.values() for p in col.values()
    ) and all(len(box.column(x)) == 1 << (n - 1) for x in range(1 << n))
    normalized = box.is_normalized()
    no_sig, witness = is_no_signalling(box)
    violations = 0
    for i in range(args.samples):
        x = rng.randrange(1 << n)
        a = sample_local_measurement(box, x, seed + 1 + i)
        if parity(a) != f(x):
            violations += 1
    report = {
        "n": n,
        "f": f.to_string(),
        "nonzero_weight": format_rational(weight),
        "entries_ok": entries_ok,
        "normalized": normalized,
        "no_signalling": no_sig,
        "samples": args.samples,
        "parity_violations": violations,
        "seed": seed,
    }
    if witness:
        report["signalling_witness"] = witness
    _emit(args, "fbox", report)
    ok = entries_ok and normalized and no_sig and violations == 0
    return 0 if ok else EXIT_ASSERTION


def _comm_task(spec: str, n: int) -> commcc_mod.CommTask:
    if spec == "ip":
        return commcc_mod.inner_product_task(n)
    if spec == "eq":
        return commcc_mod.equality_task(n)
    return commcc_mod.CommTask.from_file(spec)


def cmd_commcc(args) -> int:
    try:
        task = _comm_task(args.task, args.n)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    report: dict = {"task": args.task, "n": args.n, "mode": args.mode}
    if args.mode == "vandam":
        try:
            report.update(commcc_mod.verify_van_dam_all(task, args.seed))
        except ValueError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_SIZE_CAP
        report["seed"] = args.seed
        ok = report["correct"] == report["total"] and report["max_messages"] == 1
    else:
        report["one_way_cc"] = commcc_mod.one_way_cc(task)
        report["det_cc"] = (
            commcc_mod.det_cc(task) if task.n <= commcc_mod.DET_CC_MAX_N else None
        )
        ok = True
    _emit(args, "commcc", report)
    return 0 if ok else EXIT_ASSERTION


def cmd_advice(args) -> int:
    rng = random.Random(args.seed)
    try:
        f = _truth_table(args.f, args.n, rng)
        slice_ = advice_mod.LanguageSlice(args.n, f)
        report = advice_mod.decide_slice(slice_)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SIZE_CAP if "capped" in str(exc) else EXIT_SCHEMA
    report["f"] = f.to_string()
    report["seed"] = args.seed
    _emit(args, "advice", report)
    return 0 if report["agreement"] == report["total"] else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gptlab",
        description="simulations of operational theories, shared-box "
        "protocols, and advice circuits",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--csv", action="store_true", help="emit flat CSV")
        p.add_argument("--out", help="directory for JSON/CSV/figure files")
        p.add_argument(
            "--seed", type=int, default=_default_seed(),
            help="RNG seed (default: $GPTLAB_SEED or 0)",
        )

    p = sub.add_parser("check-theory", help="run the three principle checkers")
    p.add_argument("theory", help="classical|boxworld|rebit|qubit or JSON path")
    common(p)
    p.set_defaults(func=cmd_check_theory)

    p = sub.add_parser("fbox", help="build and test a parity box")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", default="random", help="truth-table file, bits, or 'random'")
    p.add_argument("--samples", type=int, default=1000)
    common(p)
    p.set_defaults(func=cmd_fbox)

    p = sub.add_parser("commcc", help="communication-complexity experiments")
    p.add_argument("--task", default="ip", help="task file, 'ip', or 'eq'")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=("vandam", "oracle"), default="vandam")
    common(p)
    p.set_defaults(func=cmd_commcc)

    p = sub.add_parser("advice", help="decide a language slice via box advice")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--f", default="random", help="truth-table file, bits, or 'random'")
    common(p)
    p.set_defaults(func=cmd_advice)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
