"""Command-line front end: solve, check, construct, compare, gen.

Exit codes: 0 = yes/agreement, 1 = no/violation/disagreement, 2 = input or
resource error, 3 = internal invariant violation.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
from fractions import Fraction

from . import formats, generators, relax, theory
from .core import (
    GAP,
    Instance,
    PromiseTemplate,
    ValuedStructure,
    pvcsp_oracle,
    YES,
)
from .errors import FormatError, PvcspError, ResourceGuard
from .theory import BlockPartition, PromiseFpol
from .values import format_value

EXIT_YES = 0
EXIT_NO = 1
EXIT_ERROR = 2
EXIT_INTERNAL = 3


def _cap(args) -> int:
    if args.cap is not None:
        return args.cap
    env = os.environ.get("PVCSP_CAP")
    return int(env) if env else theory.DEFAULT_CAP


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_structure(path: str) -> ValuedStructure:
    return formats.parse_structure(_read(path))


def _load_instance(path: str) -> Instance:
    return formats.parse_instance(_read(path))


def _parse_partition(spec: str) -> BlockPartition:
    if not spec.startswith("sizes:"):
        raise FormatError("partition spec must look like 'sizes:2,1'")
    sizes = [int(s) for s in spec[len("sizes:") :].split(",")]
    return BlockPartition.from_sizes(sizes)


def _emit(args, payload: dict, human: str) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def cmd_solve(args) -> int:
    delta = _load_structure(args.structure)
    instance = _load_instance(args.instance)
    if args.algorithm == "combined":
        answer = relax.combined_solve(delta, instance)
    elif args.algorithm == "blp":
        answer = relax.blp_only_solve(delta, instance)
    elif args.algorithm == "aip":
        aip = relax.build_aip(delta, instance)
        value = relax.aip_value(aip)
        verdict = YES if value <= instance.threshold else "no"
        answer = relax.SolveAnswer(verdict, value)
    elif args.algorithm == "oracle":
        gamma = _load_structure(args.gamma) if args.gamma else delta
        cls = pvcsp_oracle(PromiseTemplate(delta, gamma), instance)
        print(cls)
        return EXIT_YES if cls in (YES, GAP) else EXIT_NO
    else:
        raise FormatError(f"unknown algorithm {args.algorithm!r}")
    _emit(
        args,
        {
            "verdict": answer.verdict,
            "blp_value": format_value(answer.blp_value),
            "star": answer.star_provenance,
            "aff_value": (
                format_value(answer.aff_value)
                if answer.aff_value is not None
                else None
            ),
        },
        answer.trace(),
    )
    return EXIT_YES if answer.verdict == YES else EXIT_NO


def cmd_check(args) -> int:
    measure = formats.parse_measure(_read(args.measure))
    delta = _load_structure(args.structure)
    gamma = _load_structure(args.gamma) if args.gamma else delta
    if isinstance(measure, PromiseFpol):
        ok, violator = theory.check_promise_fpol(
            measure, PromiseTemplate(delta, gamma), cap=_cap(args)
        )
    else:
        ok, violator = theory.check_fractional_homomorphism(
            measure, delta, gamma
        )
    if ok:
        _emit(args, {"ok": True}, "ok")
        return EXIT_YES
    _emit(
        args,
        {"ok": False, "violator": repr(violator)},
        f"violated at {violator}",
    )
    return EXIT_NO


def cmd_construct(args) -> int:
    delta = _load_structure(args.structure)
    partition = _parse_partition(args.partition)
    built = theory.block_multiset_structure(delta, partition, cap=_cap(args))
    text = formats.print_structure(built)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_YES


FAMILIES = {
    "xor": lambda rng: (generators.xor_structure(), None),
    "horn": lambda rng: (generators.horn_structure(), None),
    "submodular": lambda rng: (generators.submodular_structure(rng), None),
    "random": lambda rng: _random_template(rng),
}


def _random_template(rng):
    delta = generators.random_structure(rng, domain_size=rng.randint(2, 3))
    gamma = generators.weaken_structure(rng, delta)
    return delta, gamma


def _family_bounds(family: str) -> tuple[int, int]:
    return {"xor": (6, 6), "horn": (6, 6), "submodular": (5, 5), "random": (4, 4)}[
        family
    ]


def cmd_compare(args) -> int:
    rng = random.Random(args.seed)
    engines = args.engines.split(",")
    records = []
    flagged = 0
    max_vars, max_terms = _family_bounds(args.family)
    for i in range(args.count):
        delta, gamma = FAMILIES[args.family](rng)
        gamma = gamma or delta
        instance = generators.random_instance(rng, delta, max_vars, max_terms)
        oracle_class = pvcsp_oracle(PromiseTemplate(delta, gamma), instance)
        verdicts = {}
        agree = True
        for engine in engines:
            solver = (
                relax.combined_solve if engine == "combined" else relax.blp_only_solve
            )
            verdict = solver(delta, instance).verdict
            verdicts[engine] = verdict
            if oracle_class != GAP and verdict != oracle_class:
                agree = False
        if not agree:
            flagged += 1
        records.append(
            {
                "index": i,
                "oracle": oracle_class,
                "verdicts": verdicts,
                "agree": agree,
            }
        )
    report = {
        "family": args.family,
        "count": args.count,
        "seed": args.seed,
        "flagged": flagged,
        "records": records,
    }
    if args.json:
        print(json.dumps(report, sort_keys=True))
    else:
        for r in records:
            line = " ".join(
                f"{k}={v}" for k, v in sorted(r["verdicts"].items())
            )
            print(f"[{r['index']:04d}] oracle={r['oracle']} {line} "
                  f"{'ok' if r['agree'] else 'DISAGREE'}")
        print(f"flagged disagreements: {flagged}/{args.count}")
    if flagged and not args.expect_weak:
        return EXIT_NO
    return EXIT_YES


def cmd_gen(args) -> int:
    rng = random.Random(args.seed)
    delta, gamma = FAMILIES[args.family](rng)
    max_vars, max_terms = _family_bounds(args.family)
    instance = generators.random_instance(rng, delta, max_vars, max_terms)
    os.makedirs(args.output, exist_ok=True)
    with open(os.path.join(args.output, "structure.pvcsp"), "w") as fh:
        fh.write(formats.print_structure(delta))
    if gamma is not None:
        with open(os.path.join(args.output, "gamma.pvcsp"), "w") as fh:
            fh.write(formats.print_structure(gamma))
    with open(os.path.join(args.output, "instance.pvcsp"), "w") as fh:
        fh.write(formats.print_instance(instance))
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pvcsp",
        description="Exact PVCSP relaxation solver and verification workbench",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run a relaxation algorithm on an instance")
    p.add_argument("--structure", required=True)
    p.add_argument("--gamma")
    p.add_argument("--instance", required=True)
    p.add_argument(
        "--algorithm",
        default="combined",
        choices=["combined", "blp", "aip", "oracle"],
    )
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap", type=int)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("check", help="verify a measure against structures")
    p.add_argument("--measure", required=True)
    p.add_argument("--structure", required=True)
    p.add_argument("--gamma")
    p.add_argument("--json", action="store_true")
    p.add_argument("--cap", type=int)
    p.set_defaults(fn=cmd_check)

    p = sub.add_parser("construct", help="build a block-multiset structure")
    p.add_argument("--structure", required=True)
    p.add_argument("--partition", required=True, help="e.g. sizes:2,1")
    p.add_argument("--output")
    p.add_argument("--cap", type=int)
    p.set_defaults(fn=cmd_construct)

    p = sub.add_parser("compare", help="differential harness vs the oracle")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--count", type=int, default=50)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--engines", default="combined")
    p.add_argument("--expect-weak", action="store_true")
    p.add_argument("--json", action="store_true")
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("gen", help="write a generated fixture to a directory")
    p.add_argument("--family", required=True, choices=sorted(FAMILIES))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--output", required=True)
    p.set_defaults(fn=cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except (FormatError, ResourceGuard, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except PvcspError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except AssertionError as exc:
        print(f"internal invariant violation: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
