"""Agreements, duties and culpability, and classified execution steps."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .configurations import CapExceededError, DEFAULT_CAP, maximal_configuration, reachable_events
from .model import Contract, ContractError, GoalSet, Kind, UndeclaredError, enables, ok


class Classification(enum.Enum):
    STANDARD = "standard-justified"
    CREDIT = "circular-credit"
    UNJUSTIFIED = "unjustified"


class PreconditionError(ContractError):
    pass


@dataclass(frozen=True)
class AgreementResult:
    agreed: bool
    configuration: frozenset[str] | None
    witnesses: Mapping[str, GoalSet | None] = field(default_factory=dict, hash=False)

    def as_json(self) -> dict:
        return {
            "agreed": self.agreed,
            "configuration": None if self.configuration is None else sorted(self.configuration),
            "witnesses": {
                p: None if g is None else sorted(g.goal)
                for p, g in sorted(self.witnesses.items())
            },
        }


@dataclass(frozen=True)
class DutyReport:
    state: frozenset[str]
    duties: Mapping[str, frozenset[str]] = field(hash=False)
    culpable: frozenset[str]
    fulfilled: frozenset[str]

    def as_json(self) -> dict:
        return {
            "state": sorted(self.state),
            "duties": {p: sorted(d) for p, d in sorted(self.duties.items())},
            "culpable": sorted(self.culpable),
            "fulfilled": sorted(self.fulfilled),
        }


def find_agreement(c: Contract) -> AgreementResult:
    """Decide whether ``c`` admits an agreement.

    Every participant needs a goal set made of reachable events; the
    agreement offered is then the maximal configuration.
    """
    reach = reachable_events(c)
    witnesses: dict[str, GoalSet | None] = {}
    for p in sorted(c.participants):
        witnesses[p] = next((g for g in c.goals_of(p) if g.goal <= reach), None)
    agreed = all(g is not None for g in witnesses.values())
    return AgreementResult(agreed, maximal_configuration(c) if agreed else None, witnesses)


def _check_state(c: Contract, state: Iterable[str]) -> frozenset[str]:
    state = frozenset(state)
    if not state <= c.events:
        raise UndeclaredError(f"unknown events {sorted(state - c.events)}")
    return state


def _duties(c: Contract, participant: str, state: frozenset[str], maximal: frozenset[str]) -> frozenset[str]:
    # Standard enablings take priority: credit is only an option when no
    # event of the maximal configuration is standard-enabled by the state.
    stuck = not any(enables(c, Kind.STANDARD, state, e) for e in maximal - state)
    result = set()
    for e in c.owned_by(participant):
        if e in state or e not in maximal:
            continue
        if enables(c, Kind.STANDARD, state, e) or (
            stuck and enables(c, Kind.CIRCULAR, maximal | state, e)
        ):
            result.add(e)
    return frozenset(result)


def duties(c: Contract, participant: str, state: Iterable[str]) -> frozenset[str]:
    """Events ``participant`` is obliged to perform once ``state`` has happened."""
    if participant not in c.participants:
        raise UndeclaredError(f"unknown participant {participant!r}")
    return _duties(c, participant, _check_state(c, state), maximal_configuration(c))


def duty_report(c: Contract, state: Iterable[str]) -> DutyReport:
    state = _check_state(c, state)
    maximal = maximal_configuration(c)
    table = {p: _duties(c, p, state, maximal) for p in sorted(c.participants)}
    return DutyReport(
        state=state,
        duties=table,
        culpable=frozenset(p for p, d in table.items() if d),
        fulfilled=frozenset(p for p in c.participants if ok(c, p, state)),
    )


def perform(c: Contract, state: Iterable[str], event: str) -> tuple[frozenset[str], Classification]:
    """Add ``event`` to ``state`` and classify how the contract justifies it.

    Unjustified events are accepted: a dishonest participant may ignore
    its contract, and the model has to be able to record that.
    """
    state = _check_state(c, state)
    if event not in c.events:
        raise UndeclaredError(f"unknown event {event!r}")
    if event in state:
        raise ContractError(f"event {event!r} already performed")
    after = state | {event}
    if enables(c, Kind.STANDARD, state, event):
        kind = Classification.STANDARD
    elif enables(c, Kind.CIRCULAR, maximal_configuration(c) | after, event):
        kind = Classification.CREDIT
    else:
        kind = Classification.UNJUSTIFIED
    return after, kind


def check_theorem3(c: Contract, cap: int = DEFAULT_CAP) -> frozenset[str] | None:
    """Scan every state for one where somebody is unfulfilled but nobody is culpable.

    Requires an agreement on ``c``.  Returns the first such state in
    size-then-lexicographic order, or ``None``.
    """
    if not find_agreement(c).agreed:
        raise PreconditionError("contract admits no agreement")
    if len(c.events) > cap:
        raise CapExceededError(f"{len(c.events)} events exceed the enumeration cap {cap}")
    maximal = maximal_configuration(c)
    participants = sorted(c.participants)
    events = c.sorted_events()
    for k in range(len(events) + 1):
        for subset in combinations(events, k):
            state = frozenset(subset)
            if all(ok(c, p, state) for p in participants):
                continue
            if not any(_duties(c, p, state, maximal) for p in participants):
                return state
    return None
