"""Command-line entry point.

Exit codes: 0 every checked instance passed, 2 a mathematical violation was
found, 1 operational error (bad arguments, gates, I/O).
"""

from __future__ import annotations

import argparse
import itertools
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from decimal import Decimal, InvalidOperation
from pathlib import Path

import numpy as np

from . import reports
from .chargroup import DirichletCharacter, PrimePowerModulus, compose_tuple
from .charsum import CharsumError, composite_bound_check, prop1_audit, VIOLATED
from .families import (FamilyError, NiceFamily, check_nice, is_good_prime, load_family_tokens,
                       parse_poly_token)
from .multfun import (PRESET_RULES, MultiplicativeFunction, PrimePowerRule, ProductFunction,
                      semismooth_count)
from .polynomials import discriminant
from .primes import (DEFAULT_SEGMENT_WIDTH, MemoryBudgetError, factorize_small, primes_in_range,
                     sieve_primes)
from .lab import equidist, lemmas, vm

EXIT_OK, EXIT_ERROR, EXIT_VIOLATION = 0, 1, 2
SAMPLE_SEED = 20240101


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


# -- argument parsing helpers -----------------------------------------------------------


def parse_int(text: str) -> int:
    """Exact integer from '12', '1e7' or '2.5e3'."""
    try:
        d = Decimal(str(text).strip().replace("_", ""))
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if d != d.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(d)


def parse_int_list(text: str) -> list[int]:
    return [parse_int(t) for t in text.split(",") if t.strip()]


def parse_range(text: str) -> tuple[int, int]:
    """'7..23' (inclusive) or a single value."""
    if ".." in text:
        a, b = text.split("..", 1)
        return parse_int(a), parse_int(b)
    v = parse_int(text)
    return v, v


def parse_function(token) -> MultiplicativeFunction:
    if isinstance(token, str) and token.strip() in PRESET_RULES:
        return MultiplicativeFunction.preset(token.strip())
    if isinstance(token, dict) and "rule" in token:
        poly, _ = parse_poly_token(token)
        return MultiplicativeFunction(poly, PrimePowerRule(token["rule"]), token.get("name", ""))
    poly, name = parse_poly_token(token)
    return MultiplicativeFunction.completely_multiplicative(poly, name or str(poly))


def _family_arg(args) -> str:
    text = getattr(args, "family", None) or getattr(args, "polys", None)
    if not text:
        raise UsageError("a family is required (--family or --polys)")
    return text


def functions_from_args(args) -> tuple[MultiplicativeFunction, ...]:
    return tuple(parse_function(t) for t in load_family_tokens(_family_arg(args)))


def polys_from_args(args):
    parsed = [parse_poly_token(t.get("poly", t) if isinstance(t, dict) else t)
              for t in load_family_tokens(_family_arg(args))]
    return tuple(p for p, _ in parsed), tuple(n for _, n in parsed)


def nice_family(args) -> NiceFamily:
    polys, names = polys_from_args(args)
    return NiceFamily(polys, names)


# -- subcommands ------------------------------------------------------------------------
# Each returns (exit code, report dict, csv rows or None, summary line).


def cmd_check_family(args):
    polys, names = polys_from_args(args)
    chk = check_nice(polys, names)
    prod = chk.family.product if chk.nice else None
    report = {
        "command": "check-family",
        "polys": [P.to_list() for P in polys],
        "nice": chk.nice,
        "violations": chk.violations,
    }
    if chk.nice:
        report.update(degree_sum=chk.family.degree_sum, D_main=chk.family.D_main,
                      discriminant=str(discriminant(prod)))
    code = EXIT_OK if chk.nice else EXIT_VIOLATION
    summary = "nice family" if chk.nice else "not nice: " + "; ".join(chk.violations)
    return code, report, None, summary


def cmd_good_primes(args):
    fam = nice_family(args)
    lo, hi = parse_range(args.p_range)
    disc = discriminant(fam.product)
    rows = []
    for p in primes_in_range(lo, hi + 1):
        r = is_good_prime(fam, p, disc)
        rows.append({"p": p, "good": r.good, "failed": r.failed()})
    good = [r["p"] for r in rows if r["good"]]
    report = {
        "command": "good-primes", "family": fam.to_json(), "p_range": [lo, hi],
        "discriminant": str(disc), "D_main": fam.D_main, "good": good, "primes": rows,
    }
    csv_rows = [["p", "good", "failed"]] + [[r["p"], r["good"], "".join(r["failed"])] for r in rows]
    return EXIT_OK, report, csv_rows, f"{len(good)} good primes of {len(rows)} in [{lo}, {hi}]"


def _sample_tuples(orders: list[int], K: int, n: int):
    rng = np.random.default_rng(SAMPLE_SEED)
    seen = []
    for _ in range(n):
        seen.append(tuple(tuple(int(rng.integers(1, o + 1)) for o in orders) for _ in range(K)))
    return seen


def cmd_charsum_audit(args):
    polys, _ = polys_from_args(args)
    K = len(polys)
    if args.q is not None:
        return _composite_audit(args, polys)
    if not args.p_range:
        raise UsageError("--p-range or --q is required")
    lo, hi = parse_range(args.p_range)
    m = args.m
    primes = [p for p in primes_in_range(max(lo, 3), hi + 1)]
    if not primes:
        raise UsageError(f"no odd primes in [{lo}, {hi}]")
    audits = []
    for p in primes:
        if args.exhaustive and p**m * (p ** (m - 1) * (p - 1)) ** K > 10**9:
            raise UsageError(f"exhaustive audit at p={p}, m={m} exceeds the work gate; drop --exhaustive")
        tuples = None
        if not args.exhaustive:
            order = p ** (m - 1) * (p - 1)
            tuples = [tuple(t[0] for t in s) for s in _sample_tuples([order], K, args.samples)]
        audits.append(prop1_audit(p, m, polys, tuples))
    violations = sum(a.violations for a in audits)
    checked = sum(a.checked for a in audits)
    report = {
        "command": "charsum-audit", "polys": [P.to_list() for P in polys], "m": m,
        "exhaustive": bool(args.exhaustive), "checked": checked, "violations": violations,
        "audits": [a.to_json() for a in audits],
    }
    csv_rows = [["p", "m", "checked", "violations", "max_ratio", "skipped"]] + [
        [a.p, a.m, a.checked, a.violations, a.max_ratio, a.skipped or ""] for a in audits]
    code = EXIT_VIOLATION if violations else EXIT_OK
    return code, report, csv_rows, f"{checked} sums checked, {violations} violations"


def _composite_audit(args, polys):
    q = args.q
    fact = dict(sorted(factorize_small(q).items()))
    K = len(polys)
    orders = [p ** (e - 1) * (p - 1) for p, e in fact.items()]
    n_tuples = 1
    for o in orders:
        n_tuples *= o**K
    if args.exhaustive:
        if n_tuples * q > 10**9:
            raise UsageError(f"{n_tuples} tuples x q={q} exceeds the work gate; drop --exhaustive")
        per = itertools.product(*[range(1, o + 1) for o in orders])
        combos = itertools.product(list(per), repeat=K)
    else:
        combos = _sample_tuples(orders, K, args.samples)
    results, skipped = [], 0
    for combo in combos:
        local = [{p: DirichletCharacter(PrimePowerModulus(p, e), combo[k][i])
                  for i, (p, e) in enumerate(fact.items())} for k in range(K)]
        tup = compose_tuple(q, local)
        if tup.all_trivial():
            skipped += 1
            continue
        results.append(composite_bound_check(q, polys, tup))
    violations = sum(r.status == VIOLATED for r in results)
    worst = max(results, key=lambda r: (r.abs_value / r.bound) if r.bound else 0.0, default=None)
    report = {
        "command": "charsum-audit", "q": q, "polys": [P.to_list() for P in polys],
        "exhaustive": bool(args.exhaustive), "checked": len(results), "violations": violations,
        "skipped_trivial": skipped,
        "crt_exact": all(r.details.get("crt_exact", True) for r in results),
        "status_counts": {s: sum(r.status == s for r in results) for s in sorted({r.status for r in results})},
        "worst": worst.to_json() if worst is not None else None,
    }
    code = EXIT_VIOLATION if violations or not report["crt_exact"] else EXIT_OK
    return code, report, None, f"q={q}: {len(results)} tuples checked, {violations} violations"


def cmd_vm(args):
    q, J = args.q, args.J
    fam = nice_family(args)
    if args.u is None:
        raise UsageError("--u is required")
    u = args.u * fam.K if len(args.u) == 1 else args.u  # one value broadcasts to every k
    report = {"command": "vm", "q": q, "J": J, "u": list(u), "family": fam.to_json(), "method": args.method}
    code = EXIT_OK
    brute = None
    if args.method in ("brute", "both"):
        brute = vm.vm_bruteforce(q, fam, u, J)
        report["bruteforce"] = brute
    if args.method in ("chars", "both"):
        audit = vm.vm_claim_audit(q, fam, u, J, threads=args.threads)
        report["characters"] = {"count": audit.count, "rounding_budget": audit.rounding_budget}
        report["claim"] = audit.to_json()
        if audit.bound_respected is False:
            code = EXIT_VIOLATION
        if brute is not None:
            diff = abs(audit.count - brute)
            agree = diff <= audit.rounding_budget + 1e-6
            report["agreement"] = {"abs_difference": diff, "agree": agree}
            if not agree:
                code = EXIT_VIOLATION
    parts = []
    if brute is not None:
        parts.append(f"bruteforce={brute}")
    if "characters" in report:
        parts.append(f"characters={report['characters']['count']:.6f}")
        parts.append(f"ratio={report['claim']['ratio']:.6f}")
    return code, report, None, ", ".join(parts)


def cmd_equidist(args):
    fs = functions_from_args(args)
    targets = None
    if args.a and args.a.upper() != "ALL":
        targets = tuple(parse_int_list(args.a))
        if len(targets) == 1 and len(fs) > 1:
            targets = targets * len(fs)
    cfg = equidist.ExperimentConfig(args.x, args.q, fs, targets, args.segment_width, args.threads)
    rep = equidist.joint_distribution(cfg)
    report = {"command": "equidist", **rep.to_json()}
    code = EXIT_OK if rep.class_sum_conserved() else EXIT_VIOLATION
    s = rep.stats
    summary = (f"{len(rep.counts)} classes, rhs_count={rep.rhs_count}, max_rel_dev={s['max_rel_dev']:.4f}, "
               f"tv={s['tv_distance']:.4f}")
    return code, report, rep.csv_rows(), summary


def cmd_semismooth(args):
    if args.y is None:
        raise UsageError("--y is required")
    if args.threads > 1:
        with ThreadPoolExecutor(args.threads) as pool:
            r = semismooth_count(args.x, args.y, args.J, args.segment_width, pool)
    else:
        r = semismooth_count(args.x, args.y, args.J, args.segment_width)
    return EXIT_OK, {"command": "semismooth", **r.to_json()}, None, f"count={r.count}, ratio={r.ratio:.4f}"


def cmd_sift(args):
    X = args.x
    u = args.u
    primes = sieve_primes(args.z).tolist()
    r = lemmas.sifted_interval_count(u, u + X, {p: args.a for p in primes}, Z=max(args.z, 3),
                                     segment_width=args.segment_width)
    ok = abs(r.relative_error) <= args.tol
    report = {"command": "sift", "primes": len(primes), "a": args.a, "tolerance": args.tol,
              "pass": ok, **r.to_json()}
    code = EXIT_OK if ok else EXIT_VIOLATION
    return code, report, None, f"count={r.count}, main={r.main_term:.2f}, rel_err={r.relative_error:.5f}"


def cmd_coprime_lower(args):
    f = ProductFunction(functions_from_args(args))
    r = lemmas.coprime_lower_bound_check(args.x, args.q, f, args.segment_width, args.threads)
    report = {"command": "coprime-lower", **r.to_json()}
    # a shortfall is only a flag: the lower bound is promised for large x
    return EXIT_OK, report, None, f"count={r.count}, bound={float(r.bound):.2f}, {r.status}"


def cmd_range_limit(args):
    fam = nice_family(args)
    r = lemmas.range_limit_demo(args.x, fam, args.p0, args.p)
    report = {"command": "range-limit", **r.to_json()}
    code = EXIT_OK if r.passed else EXIT_VIOLATION
    return code, report, None, f"p={r.p}: {r.lower_count} primes vs threshold {float(r.threshold):.2f}"


COMMANDS = {
    "check-family": cmd_check_family,
    "good-primes": cmd_good_primes,
    "charsum-audit": cmd_charsum_audit,
    "vm": cmd_vm,
    "equidist": cmd_equidist,
    "semismooth": cmd_semismooth,
    "sift": cmd_sift,
    "coprime-lower": cmd_coprime_lower,
    "range-limit": cmd_range_limit,
}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="equilab", description="Verification lab for joint equidistribution of "
                     "polynomial-like multiplicative functions.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def common(sp, family=True, out=True):
        if family:
            sp.add_argument("--family", help="comma list of presets (id, phi, sigma), JSON coefficient "
                            "lists, or a .json family file")
            sp.add_argument("--polys", help="alias of --family")
        if out:
            sp.add_argument("--out", type=Path, help="report path (default: print to stdout)")
            sp.add_argument("--format", choices=("json", "csv"), default="json")
            sp.add_argument("--threads", type=parse_int, default=1)
            sp.add_argument("--segment-width", type=parse_int, default=DEFAULT_SEGMENT_WIDTH)
        return sp

    common(sub.add_parser("check-family", help="check that polynomials form a nice family"))
    sp = common(sub.add_parser("good-primes", help="list good primes for a family"))
    sp.add_argument("--p-range", required=True)

    sp = common(sub.add_parser("charsum-audit", help="audit the combined character-sum bound"))
    sp.add_argument("--p-range")
    sp.add_argument("--m", type=parse_int, default=1)
    sp.add_argument("--q", type=parse_int, help="audit the composite-modulus bound at this q instead")
    sp.add_argument("--exhaustive", action="store_true", help="every tuple instead of a fixed sample")
    sp.add_argument("--samples", type=parse_int, default=200)

    sp = common(sub.add_parser("vm", help="count V by fibre convolution and/or characters"))
    sp.add_argument("--q", type=parse_int, required=True)
    sp.add_argument("--J", type=parse_int, required=True)
    sp.add_argument("--u", type=parse_int_list)
    sp.add_argument("--method", choices=("brute", "chars", "both"), default="both")

    sp = common(sub.add_parser("equidist", help="joint distribution of f_k(n) mod q for n <= x"))
    sp.add_argument("--x", type=parse_int, required=True)
    sp.add_argument("--q", type=parse_int, required=True)
    sp.add_argument("--a", help="target classes a_1,..,a_K or ALL")

    sp = common(sub.add_parser("semismooth", help="count n <= x with P_J^+(n) <= y"), family=False)
    sp.add_argument("--x", type=parse_int, required=True)
    sp.add_argument("--y", type=parse_int)
    sp.add_argument("--J", type=parse_int, default=2)

    sp = common(sub.add_parser("sift", help="sifted interval count against its main term"), family=False)
    sp.add_argument("--x", type=parse_int, required=True, help="interval length X")
    sp.add_argument("--u", type=parse_int, default=0, help="interval is (u, u + X]")
    sp.add_argument("--z", type=parse_int, required=True, help="sift by all primes <= z")
    sp.add_argument("--a", type=parse_int, default=0, help="forbidden residue for every prime")
    sp.add_argument("--tol", type=float, default=0.25)

    sp = common(sub.add_parser("coprime-lower", help="count n <= x with gcd(f(n), q) = 1"))
    sp.add_argument("--x", type=parse_int, required=True)
    sp.add_argument("--q", type=parse_int, required=True)

    sp = common(sub.add_parser("range-limit", help="primes piling into one class mod a small p"))
    sp.add_argument("--x", type=parse_int, required=True)
    sp.add_argument("--p0", type=parse_int, required=True)
    sp.add_argument("--p", type=parse_int)

    sp = sub.add_parser("rerun", help="re-run a command from its manifest")
    sp.add_argument("--manifest", type=Path, required=True)
    sp.add_argument("--out", type=Path, help="write the report here instead of the recorded path")
    return parser


def _rerun(args) -> int:
    data = reports.load_manifest(args.manifest)
    argv = list(data["argv"])
    if args.out is not None:
        if "--out" in argv:
            argv[argv.index("--out") + 1] = str(args.out)
        else:
            argv += ["--out", str(args.out)]
    return main(argv)


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return int(exc.code or 0)
    if args.command is None:
        parser.print_usage(sys.stderr)
        return EXIT_ERROR
    started = time.perf_counter()
    try:
        if args.command == "rerun":
            return _rerun(args)
        code, report, rows, summary = COMMANDS[args.command](args)
    except (UsageError, FamilyError, CharsumError, vm.VmError, equidist.ExperimentError,
            lemmas.LemmaError, ValueError, ArithmeticError, MemoryError, MemoryBudgetError, OSError, KeyError) as exc:
        print(f"equilab {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.format == "csv":
        text = reports.csv_text(rows if rows is not None else reports.flat_rows(report))
    else:
        text = reports.dumps(report)
    if args.out is None:
        sys.stdout.write(text)
        print(f"{args.command}: {summary}", file=sys.stderr)
        return code
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(text, encoding="utf-8")
    params = {k: (str(v) if isinstance(v, Path) else v) for k, v in vars(args).items()}
    manifest = reports.RunManifest(args.command, argv, params, [str(args.out)],
                                   round(time.perf_counter() - started, 3), code)
    mpath = manifest.write(args.out)
    print(f"{args.command}: {summary} -> {args.out} (manifest {mpath.name})")
    return code


if __name__ == "__main__":
    sys.exit(main())
