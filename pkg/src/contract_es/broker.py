"""In-process contract broker: agreement search and duty-notification sessions."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from itertools import combinations
from typing import Mapping, Sequence

from .agreement import AgreementResult, Classification, DutyReport, duty_report, find_agreement, perform
from .model import Contract, ContractError, UndeclaredError, compose_all

DEFAULT_SUBSET_CAP = 12
DEFAULT_MAX_ROUNDS = 100


class Policy(enum.Enum):
    HONEST = "honest"
    LAZY = "lazy"
    DISHONEST_AFTER = "dishonest-after"


@dataclass(frozen=True)
class Strategy:
    policy: Policy = Policy.HONEST
    rounds: int = 0  # honest rounds before going silent, dishonest-after only

    @classmethod
    def parse(cls, text: str) -> Strategy:
        """Parse ``honest``, ``lazy``/``lazy-honest`` or ``dishonest-after:K``."""
        text = text.strip()
        if text == "honest":
            return cls(Policy.HONEST)
        if text in ("lazy", "lazy-honest"):
            return cls(Policy.LAZY)
        name, _, k = text.partition(":")
        if name == "dishonest-after" and k.isdigit():
            return cls(Policy.DISHONEST_AFTER, int(k))
        raise ValueError(f"unknown strategy {text!r}")

    def choose(self, round_no: int, duties: frozenset[str]) -> list[str]:
        """Events to perform in round ``round_no`` (numbered from 1)."""
        if self.policy is Policy.DISHONEST_AFTER and round_no > self.rounds:
            return []
        ordered = sorted(duties)
        if self.policy is Policy.LAZY:
            return ordered[:1]
        return ordered

    def __str__(self) -> str:
        if self.policy is Policy.DISHONEST_AFTER:
            return f"dishonest-after:{self.rounds}"
        return self.policy.value


class Verdict(enum.Enum):
    ALL_FULFILLED = "all-fulfilled"
    STALLED = "stalled"


@dataclass(frozen=True)
class Action:
    participant: str
    event: str
    classification: Classification


@dataclass(frozen=True)
class Round:
    number: int
    state_before: frozenset[str]
    notifications: Mapping[str, frozenset[str]] = field(hash=False)
    actions: tuple[Action, ...]

    def as_json(self) -> dict:
        return {
            "round": self.number,
            "state_before": sorted(self.state_before),
            "notifications": {p: sorted(d) for p, d in sorted(self.notifications.items())},
            "actions": [
                {"participant": a.participant, "event": a.event, "classification": a.classification.value}
                for a in self.actions
            ],
        }


@dataclass(frozen=True)
class SessionLog:
    rounds: tuple[Round, ...]
    final_state: frozenset[str]
    verdict: Verdict
    culpable: frozenset[str] = frozenset()

    @property
    def performed(self) -> list[str]:
        return [a.event for r in self.rounds for a in r.actions]

    def as_json(self) -> dict:
        return {
            "rounds": [r.as_json() for r in self.rounds],
            "final_state": sorted(self.final_state),
            "verdict": self.verdict.value,
            "culpable": sorted(self.culpable),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_json(), indent=2)

    def to_text(self) -> str:
        lines = []
        for r in self.rounds:
            state = ",".join(sorted(r.state_before))
            lines.append(f"round {r.number}: state {{{state}}}")
            for p, d in sorted(r.notifications.items()):
                lines.append(f"  notify {p}: {','.join(sorted(d))}")
            for a in r.actions:
                lines.append(f"  {a.participant} performs {a.event} ({a.classification.value})")
            if not r.actions:
                lines.append("  no action")
        verdict = self.verdict.value
        if self.verdict is Verdict.STALLED:
            verdict += f", culpable {{{','.join(sorted(self.culpable))}}}"
        lines.append(f"verdict: {verdict}")
        return "\n".join(lines) + "\n"


def find_agreeing_subset(
    contracts: Sequence[Contract], cap: int = DEFAULT_SUBSET_CAP
) -> tuple[tuple[int, ...], AgreementResult] | None:
    """Largest subset (lexicographic among equal sizes) whose composition agrees."""
    if len(contracts) > cap:
        raise ContractError(f"{len(contracts)} contracts exceed the subset cap {cap}")
    compose_all(contracts)  # surfaces ownership clashes up front
    for size in range(len(contracts), 0, -1):
        for subset in combinations(range(len(contracts)), size):
            result = find_agreement(compose_all(contracts[i] for i in subset))
            if result.agreed:
                return subset, result
    return None


def run_session(
    contracts: Sequence[Contract] | Contract,
    strategies: Mapping[str, Strategy] | None = None,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
) -> SessionLog:
    """Drive an execution: notify duties each round and let culpable parties act.

    Participants without an explicit strategy are honest.
    """
    c = contracts if isinstance(contracts, Contract) else compose_all(contracts)
    strategies = dict(strategies or {})
    unknown = set(strategies) - c.participants
    if unknown:
        raise UndeclaredError(f"strategies given for unknown participants {sorted(unknown)}")
    if not find_agreement(c).agreed:
        raise ContractError("the composed contract admits no agreement")

    state: frozenset[str] = frozenset()
    rounds: list[Round] = []
    report: DutyReport = duty_report(c, state)
    for number in range(1, max_rounds + 1):
        if report.fulfilled == c.participants:
            return SessionLog(tuple(rounds), state, Verdict.ALL_FULFILLED)
        notifications = {p: report.duties[p] for p in sorted(report.culpable)}
        before = state
        actions = []
        for p, todo in notifications.items():
            for e in strategies.get(p, Strategy()).choose(number, todo):
                state, kind = perform(c, state, e)
                actions.append(Action(p, e, kind))
        rounds.append(Round(number, before, notifications, tuple(actions)))
        if not actions:
            return SessionLog(tuple(rounds), state, Verdict.STALLED, report.culpable)
        report = duty_report(c, state)
    if report.fulfilled == c.participants:
        return SessionLog(tuple(rounds), state, Verdict.ALL_FULFILLED)
    return SessionLog(tuple(rounds), state, Verdict.STALLED, report.culpable)
