"""Command line front end.

Exit codes: 0 for success or an affirmative answer, 1 for a negative
answer, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import agreement, broker, configurations
from .model import ContractError, load_contract, validate
from .pcl import DEFAULT_BUDGET, encode, parse_formula, prove, says_atom


def _events(text: str | None) -> list[str]:
    if not text or text.strip() == "-":
        return []
    return [e.strip() for e in text.split(",") if e.strip()]


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, indent=2))
    else:
        print(text, end="" if text.endswith("\n") or not text else "\n")


def _fmt(events) -> str:
    return "{" + ",".join(sorted(events)) + "}"


def cmd_check(args) -> int:
    c = load_contract(args.file)
    state = _events(args.state)
    witness = configurations.is_configuration(c, state)
    data = {
        "configuration": witness is not None,
        "witness": witness.as_json() if witness else [],
    }
    if witness is None:
        text = f"{_fmt(state)} is not a configuration"
    else:
        text = f"{_fmt(state)} is a configuration\nwitness: {witness}"
    _emit(args, data, text)
    return 0 if witness is not None else 1


def cmd_reach(args) -> int:
    c = load_contract(args.file)
    reach = sorted(configurations.reachable_with_credit(c, _events(args.credit)))
    _emit(args, {"reachable": reach}, "\n".join(reach))
    return 0


def cmd_agree(args) -> int:
    c = load_contract(args.file)
    result = agreement.find_agreement(c)
    lines = [f"agreed: {'yes' if result.agreed else 'no'}"]
    if result.agreed:
        lines.append(f"configuration: {_fmt(result.configuration)}")
    for p, g in sorted(result.witnesses.items()):
        lines.append(f"  {p}: {'-' if g is None else _fmt(g.goal)}")
    _emit(args, result.as_json(), "\n".join(lines))
    return 0 if result.agreed else 1


def cmd_duties(args) -> int:
    c = load_contract(args.file)
    state = _events(args.state)
    report = agreement.duty_report(c, state)
    data = report.as_json()
    if args.participant:
        duties = agreement.duties(c, args.participant, state)
        data = {"participant": args.participant, "duties": sorted(duties)}
        text = f"duties of {args.participant} in {_fmt(state)}: {_fmt(duties)}"
    else:
        lines = [f"state: {_fmt(state)}"]
        lines += [f"  {p}: {_fmt(d)}" for p, d in sorted(report.duties.items())]
        lines.append(f"culpable: {_fmt(report.culpable)}")
        lines.append(f"fulfilled: {_fmt(report.fulfilled)}")
        text = "\n".join(lines)
    _emit(args, data, text)
    return 0


def cmd_theorem3(args) -> int:
    c = load_contract(args.file)
    witness = agreement.check_theorem3(c)
    data = {"counterexample": None if witness is None else sorted(witness)}
    _emit(args, data, "ok" if witness is None else f"counterexample: {_fmt(witness)}")
    return 0 if witness is None else 1


def cmd_encode(args) -> int:
    c = load_contract(args.file)
    f = encode(c)
    _emit(args, {"formula": str(f)}, str(f))
    return 0


def cmd_prove(args) -> int:
    context = []
    c = None
    if args.file:
        c = load_contract(args.file)
        context.append(encode(c))
    context += [parse_formula(a) for a in args.assume]
    if args.formula:
        goal = parse_formula(args.formula)
    elif args.goal:
        if c is None:
            raise ContractError("--goal needs a contract file")
        if args.goal not in c.events:
            raise ContractError(f"unknown event {args.goal!r}")
        goal = says_atom(c, args.goal)
    else:
        raise ContractError("one of --goal or --formula is required")
    for h in _events(args.hyp):
        if c is None or h not in c.events:
            raise ContractError(f"unknown hypothesis event {h!r}")
        context.append(says_atom(c, h))
    result = prove(context, goal, args.budget)
    data = {"goal": str(goal), "status": result.status.value, "visited": result.visited}
    lines = [f"{goal}: {result.status.value} ({result.visited} sequents visited)"]
    if result.diagnostic:
        data["diagnostic"] = result.diagnostic
        lines.append(result.diagnostic)
    if args.print_proof and result.proof is not None:
        data["proof"] = result.proof.pretty()
        lines.append(result.proof.pretty())
    _emit(args, data, "\n".join(lines))
    return 0 if result.proved else 1


def cmd_validate(args) -> int:
    c = load_contract(args.file)
    diags = validate(c)
    _emit(args, {"warnings": [{"code": d.code, "message": d.message} for d in diags]},
          "\n".join(map(str, diags)) or "no warnings")
    return 0


def cmd_session(args) -> int:
    contracts = [load_contract(f) for f in args.files]
    strategies = {}
    for spec in args.strategy:
        for item in spec.split(","):
            p, sep, s = item.partition("=")
            if not sep:
                raise ContractError(f"malformed strategy {item!r}, expected P=policy")
            try:
                strategies[p.strip()] = broker.Strategy.parse(s)
            except ValueError as exc:
                raise ContractError(str(exc)) from None
    log = broker.run_session(contracts, strategies, args.max_rounds)
    if args.json:
        print(log.to_json())
    else:
        print(log.to_text(), end="")
    return 0 if log.verdict is broker.Verdict.ALL_FULFILLED else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contract-es",
        description="Contracts with circular enablings: configurations, agreements, duties, PCL proofs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help, file=True):
        p = sub.add_parser(name, help=help)
        if file:
            p.add_argument("file")
        p.add_argument("--json", action="store_true", help="machine-readable output")
        p.set_defaults(func=func)
        return p

    p = add("check", cmd_check, "is a state a configuration?")
    p.add_argument("--state", default="", help="comma-separated events")
    p = add("reach", cmd_reach, "list reachable events")
    p.add_argument("--credit", default="", help="events taken on credit")
    add("agree", cmd_agree, "decide whether an agreement exists")
    p = add("duties", cmd_duties, "duties and culpability in a state")
    p.add_argument("--state", default="")
    p.add_argument("--participant")
    add("theorem3", cmd_theorem3, "scan all states for unfulfilled-yet-blameless ones")
    add("encode", cmd_encode, "print the logic encoding")
    add("validate", cmd_validate, "print contract warnings")
    p = add("prove", cmd_prove, "prove a goal in contract logic", file=False)
    p.add_argument("file", nargs="?")
    p.add_argument("--goal", help="event e; proves owner(e) says e")
    p.add_argument("--hyp", default="", help="events assumed as owner(d) says d")
    p.add_argument("--formula", help="goal formula in linear syntax")
    p.add_argument("--assume", action="append", default=[], help="extra context formula")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--print-proof", action="store_true")
    p = add("session", cmd_session, "simulate a broker session", file=False)
    p.add_argument("files", nargs="+")
    p.add_argument("--strategy", action="append", default=[],
                   help="P=honest|lazy|dishonest-after:K (repeatable)")
    p.add_argument("--max-rounds", type=int, default=broker.DEFAULT_MAX_ROUNDS)
    return parser


def cli_main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())
