"""``slp`` command line: evaluate, decide, reduce, verify, scan, gen.

Exit codes: 0 success (or "yes"), 1 a "no" from ``decide``, 2 a failed
campaign or trace check, 3 usage or input errors.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from slptools import numtheory
from slptools.deciders import ProblemInstance, decide, decide_squ_poly_rand
from slptools.evaluate import BudgetExceeded, EvalBudget, PrecisionViolation, eval_exact, eval_mod
from slptools.harness import CAMPAIGNS, CampaignConfig, gen_random_slp, run_campaign
from slptools.reductions import REDUCTIONS, ReductionRecord, run_reduction
from slptools.slp import SlpSyntaxError, SlpValidationError, parse, serialize, validate

EXIT_OK, EXIT_NO, EXIT_FAIL, EXIT_USAGE = 0, 1, 2, 3

PROBLEM_NAMES = {
    "posslp": "PosSLP",
    "equslp": "EquSLP",
    "bitslp": "BitSLP",
    "div2slp": "Div2SLP",
    "3sosslp": "ThreeSoSSLP",
    "2sosslp": "TwoSoSSLP",
    "squslp": "SquSLP",
    "degslp": "DegSLP",
    "ordslp": "OrdSLP",
    "pospolyslp": "PosPolySLP",
    "squpolyslp": "SquPolySLP",
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _read_slp(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    return parse(text)


def _write(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_eval(args) -> int:
    slp = _read_slp(args.file)
    values = [int(v) for v in args.vars.split(",")] if args.vars else []
    if args.mod is not None:
        print(eval_mod(slp, values, args.mod))
    else:
        print(eval_exact(slp, values, EvalBudget(max_bits=args.max_bits)))
    return EXIT_OK


def cmd_decide(args) -> int:
    problem = PROBLEM_NAMES[args.problem]
    slp = _read_slp(args.file)
    aux = {"BitSLP": {"n": args.n, "i": args.i}, "Div2SLP": {"l": args.l},
           "DegSLP": {"d": args.d}, "OrdSLP": {"l": args.l}}.get(problem, {})
    missing = [k for k, v in aux.items() if v is None]
    if missing:
        if problem == "BitSLP" and missing == ["n"]:
            aux["n"] = (1 << slp.size) + 1
        else:
            raise UsageError(f"{args.problem} needs " + ", ".join(f"--{k}" for k in missing))
    instance = ProblemInstance(problem, slp, aux)
    if problem == "SquPolySLP" and args.sample_exp is not None:
        verdict = decide_squ_poly_rand(slp, args.sample_exp, args.seed)
    else:
        verdict = decide(instance, seed=args.seed)
    print("yes" if verdict.answer else "no")
    print(f"# provenance: {verdict.provenance}", file=sys.stderr)
    return EXIT_OK if verdict.answer else EXIT_NO


def cmd_reduce(args) -> int:
    slp = _read_slp(args.file)
    rec = run_reduction(args.name, slp, l=args.l, d=args.d,
                        exponent_override=args.override_exp, seed=args.seed)
    if args.trace:
        with open(args.trace, "a") as fh:
            fh.write(rec.to_json() + "\n")
    if rec.answer is not None:
        print("yes" if rec.answer else "no")
        return EXIT_OK
    out = rec.outputs[0]
    params = {k: v for k, v in out.items() if k != "slp"}
    header = "".join(f"# {k} = {v}\n" for k, v in sorted(params.items()))
    _write(header + out["slp"], args.output)
    return EXIT_OK


def _check_trace(path: str) -> int:
    bad = 0
    with open(path) as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            rec = ReductionRecord.from_json(line)
            problems = []
            for out in rec.outputs:
                if validate(parse(out["slp"])):
                    problems.append("invalid output program")
            if not rec.within_bound():
                problems.append(f"size {rec.output_size} over bound {rec.size_bound}")
            if problems:
                bad += 1
                print(f"line {lineno} ({rec.name}): " + "; ".join(problems))
    print("ok" if not bad else f"{bad} bad records")
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_verify(args) -> int:
    if args.trace:
        return _check_trace(args.trace)
    if not args.campaign:
        raise UsageError("verify needs a campaign name or --trace")
    if args.exhaustive and args.random:
        raise UsageError("--exhaustive and --random are exclusive")
    cfg = CampaignConfig(
        campaign=args.campaign,
        exhaustive=args.exhaustive or 0,
        count=args.random or 100,
        size=args.size,
        seed=args.seed,
        workers=args.workers,
    )
    report = run_campaign(cfg)
    text = report.to_jsonl()
    if args.report:
        Path(args.report).write_text(text)
    summary = report.summary
    print(f"{cfg.campaign}: {summary['pass']} pass, {summary['fail']} fail, "
          f"{summary['inconclusive']} inconclusive of {summary['total']}")
    for rec in report.failures()[:5]:
        print(f"FAIL #{rec['index']} seed={rec['seed']}\n{rec['instance']}", end="")
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_scan(args) -> int:
    count, ratio = numtheory.density_scan(args.kind.split("-")[1], args.limit)
    print(f"count {count}")
    print(f"ratio {ratio:.6f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    sys.stdout.write(serialize(gen_random_slp(args.size, args.vars, args.seed, profile=args.profile)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="slp", description="Straight-line program toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", help="evaluate a program")
    e.add_argument("file")
    e.add_argument("--vars", help="comma-separated variable values")
    e.add_argument("--mod", type=int)
    e.add_argument("--max-bits", type=int, default=1 << 20)
    e.set_defaults(func=cmd_eval)

    d = sub.add_parser("decide", help="decide a problem on a program")
    d.add_argument("problem", choices=sorted(PROBLEM_NAMES))
    d.add_argument("file")
    for flag in ("--l", "--d", "--n", "--i", "--sample-exp"):
        d.add_argument(flag, type=int)
    d.add_argument("--seed", type=int, default=0)
    d.set_defaults(func=cmd_decide)

    r = sub.add_parser("reduce", help="apply a reduction")
    r.add_argument("name", choices=REDUCTIONS)
    r.add_argument("file")
    r.add_argument("--l", type=int)
    r.add_argument("--d", type=int)
    r.add_argument("--override-exp", type=int)
    r.add_argument("--seed", type=int, default=0)
    r.add_argument("-o", "--output")
    r.add_argument("--trace", help="append the reduction record (JSON line) to this file")
    r.set_defaults(func=cmd_reduce)

    v = sub.add_parser("verify", help="run a verification campaign")
    v.add_argument("campaign", nargs="?", choices=sorted(CAMPAIGNS))
    v.add_argument("--exhaustive", type=int)
    v.add_argument("--random", type=int)
    v.add_argument("--size", type=int, default=6)
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--workers", type=int, default=1)
    v.add_argument("--report")
    v.add_argument("--trace", help="check a file of reduction records instead")
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("scan", help="density scan")
    s.add_argument("kind", choices=("density-3sos", "density-2sos"))
    s.add_argument("--limit", type=int, required=True)
    s.set_defaults(func=cmd_scan)

    g = sub.add_parser("gen", help="print a random program")
    g.add_argument("--size", type=int, required=True)
    g.add_argument("--vars", type=int, default=0)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--profile", choices=("uniform", "grow"), default="uniform")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (UsageError, SlpSyntaxError, SlpValidationError, PrecisionViolation,
            BudgetExceeded, ValueError) as exc:
        print(f"slp: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
