"""Command-line interface: ``houghton {eval,recover,adversary,certify,selftest}``.

Exit codes: 0 success, 2 invalid input, 3 a check failed (internal
postcondition, rejected certificate or failing self-test).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Optional, Sequence

from .adversary import SamplerParams, Scenario, make_scenario
from .errors import HoughtonError, InternalCheckFailed
from .groups import Family, GeneratingSetSpec, named_element
from .perm import check_point
from .recovery import ConjugateTuple, check_certificate, recover
from .words import GenerationCertificate, Word, evaluate_word

EXIT_OK, EXIT_INVALID, EXIT_FAILED = 0, 2, 3


class CliError(Exception):
    """Bad flags or unreadable files; reported with exit code 2."""


def _point(text: str):
    try:
        i, m = (int(p) for p in text.split(","))
    except ValueError:
        raise CliError(f"point must look like i,m: {text!r}") from None
    return i, m


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from None


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _spec(args) -> GeneratingSetSpec:
    if args.family is None or args.n is None:
        raise CliError("--family and --n are required")
    return GeneratingSetSpec(Family(args.family), args.n, args.v or 0)


def _params(args) -> SamplerParams:
    return SamplerParams(args.max_word_length, args.window, args.seed)


def cmd_eval(args) -> int:
    word = Word.parse(args.word)
    assignment = {label: named_element(label, args.n, args.v or 0) for label in word.labels()}
    g = evaluate_word(word, assignment, args.n)
    i, m = g.image(check_point(args.n, _point(args.point)))
    print(f"{i},{m}")
    return EXIT_OK


def _scenario(args) -> Scenario:
    if args.scenario:
        sc = Scenario.from_json(_read_json(args.scenario))
        if args.family is not None and (args.family, args.n, args.v or 0) != (
                sc.spec.family.value, sc.spec.n, sc.spec.v):
            raise CliError("flags disagree with the scenario file")
        return sc
    if args.seed is None:
        raise CliError("give --seed or --scenario")
    spec = _spec(args)
    return make_scenario(spec, args.seed, _params(args))


def cmd_recover(args) -> int:
    sc = _scenario(args)
    ct = ConjugateTuple(sc.spec, sc.assignment)
    cert = recover(ct)
    report = check_certificate(cert, ct)
    _emit(cert.dumps(include_trace=args.trace), args.out)
    if not report.passed:
        print(f"certificate rejected at {report.first_failure}", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def cmd_adversary(args) -> int:
    if args.seed is None:
        raise CliError("--seed is required")
    sc = make_scenario(_spec(args), args.seed, _params(args))
    _emit(sc.dumps(), args.out)
    return EXIT_OK


def cmd_certify(args) -> int:
    sc = Scenario.from_json(_read_json(args.scenario))
    try:
        cert = GenerationCertificate.from_json(_read_json(args.cert))
    except (KeyError, TypeError) as exc:
        raise CliError(f"malformed certificate: {exc}") from None
    report = check_certificate(cert, ConjugateTuple(sc.spec, sc.assignment))
    print(json.dumps(report.to_json(), sort_keys=True))
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_selftest(args) -> int:
    from .acceptance import run_all

    results = run_all(args.scale, print)
    passed = sum(r.passed for r in results)
    print(f"{passed}/{len(results)} criteria passed")
    return EXIT_OK if passed == len(results) else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="houghton", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def group_flags(p, required=False):
        p.add_argument("--family", choices=[f.value for f in Family], required=required)
        p.add_argument("--n", type=int, required=required)
        p.add_argument("--v", type=int, default=0)

    def sampler_flags(p):
        p.add_argument("--seed", type=int)
        p.add_argument("--max-word-length", type=int, default=SamplerParams.max_word_length)
        p.add_argument("--window", type=int, default=SamplerParams.window)

    p = sub.add_parser("eval", help="apply a word in the standard generators to a point")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--v", type=int, default=0)
    p.add_argument("--word", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("recover", help="recover generators from a conjugated set and certify")
    group_flags(p)
    sampler_flags(p)
    p.add_argument("--scenario")
    p.add_argument("--trace", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_recover)

    p = sub.add_parser("adversary", help="write a seeded scenario of conjugates")
    group_flags(p, required=True)
    sampler_flags(p)
    p.add_argument("--out")
    p.set_defaults(func=cmd_adversary)

    p = sub.add_parser("certify", help="re-check a certificate against a scenario")
    p.add_argument("--cert", required=True)
    p.add_argument("--scenario", required=True)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("selftest", help="run the acceptance criteria")
    p.add_argument("--scale", type=float, default=1.0, help="fraction of the full sample counts")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InternalCheckFailed as exc:
        print(f"error: internal check failed: {exc}", file=sys.stderr)
        return EXIT_FAILED
    except (CliError, HoughtonError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
