"""Configurations, credit-tracking reachability and the maximal configuration."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .model import Contract, ContractError, Kind, UndeclaredError, enables

DEFAULT_CAP = 20


class Justification(enum.Enum):
    STANDARD = "standard-enabled"
    CIRCULAR = "circular-enabled"
    CREDIT = "credit"


@dataclass(frozen=True)
class OrderingWitness:
    """An ordering of a configuration, one justification per position."""

    steps: tuple[tuple[str, Justification], ...] = ()

    @property
    def sequence(self) -> tuple[str, ...]:
        return tuple(e for e, _ in self.steps)

    def as_json(self) -> list[dict]:
        return [{"event": e, "justification": j.value} for e, j in self.steps]

    def __str__(self) -> str:
        return " ".join(f"{e}[{j.value}]" for e, j in self.steps)


class CapExceededError(ContractError):
    pass


def _subset(c: Contract, events: Iterable[str], what: str) -> frozenset[str]:
    events = frozenset(events)
    unknown = events - c.events
    if unknown:
        raise UndeclaredError(f"{what} mentions unknown events {sorted(unknown)}")
    return events


def _greedy(c: Contract, target: frozenset[str], credit: frozenset[str]) -> OrderingWitness | None:
    # Both enabling tests are monotone in the performed set, so appending any
    # legal event never blocks another one: the greedy order is complete.
    prefix: set[str] = set()
    steps: list[tuple[str, Justification]] = []
    remaining = sorted(target)
    while remaining:
        for e in remaining:
            if enables(c, Kind.STANDARD, prefix, e):
                just = Justification.STANDARD
            elif enables(c, Kind.CIRCULAR, target, e):
                just = Justification.CIRCULAR
            elif e in credit:
                just = Justification.CREDIT
            else:
                continue
            steps.append((e, just))
            prefix.add(e)
            remaining.remove(e)
            break
        else:
            return None
    return OrderingWitness(tuple(steps))


def is_configuration(c: Contract, state: Iterable[str]) -> OrderingWitness | None:
    """Return a witness ordering if ``state`` is a configuration, else ``None``."""
    return _greedy(c, _subset(c, state, "state"), frozenset())


def is_x_configuration(
    c: Contract, credit: Iterable[str], state: Iterable[str]
) -> OrderingWitness | None:
    """Like :func:`is_configuration`, but events in ``credit`` need no justification.

    ``credit`` must be contained in ``state``.
    """
    credit = _subset(c, credit, "credit set")
    state = _subset(c, state, "state")
    if not credit <= state:
        return None
    return _greedy(c, state, credit)


def enumerate_configurations(c: Contract, cap: int = DEFAULT_CAP) -> set[frozenset[str]]:
    """All configurations, found by testing every subset of the events."""
    if len(c.events) > cap:
        raise CapExceededError(f"{len(c.events)} events exceed the enumeration cap {cap}")
    events = c.sorted_events()
    found = set()
    for k in range(len(events) + 1):
        for subset in combinations(events, k):
            if is_configuration(c, subset) is not None:
                found.add(frozenset(subset))
    return found


class _Reach:
    """Memoised evaluation of the credit-indexed reachable sets."""

    def __init__(self, c: Contract):
        self.c = c
        self.memo: dict[frozenset[str], frozenset[str]] = {}
        self.events = c.sorted_events()

    def __call__(self, credit: frozenset[str]) -> frozenset[str]:
        cached = self.memo.get(credit)
        if cached is not None:
            return cached
        c = self.c
        reached = set(credit)
        # Circular rule: recursion only on strictly larger credit sets.
        for e in self.events:
            if e in reached:
                continue
            clauses = c.clauses_for(Kind.CIRCULAR, e)
            if clauses:
                inner = self(credit | {e})
                if any(cl.premises <= inner for cl in clauses):
                    reached.add(e)
        changed = True
        while changed:
            changed = False
            for e in self.events:
                if e not in reached and enables(c, Kind.STANDARD, reached, e):
                    reached.add(e)
                    changed = True
        result = frozenset(reached)
        self.memo[credit] = result
        return result


def reachable_with_credit(c: Contract, credit: Iterable[str]) -> frozenset[str]:
    """Least set closed under standard enabling, circular enabling with the
    target itself on credit, and membership in ``credit``."""
    return _Reach(c)(_subset(c, credit, "credit set"))


def reachable_events(c: Contract) -> frozenset[str]:
    return reachable_with_credit(c, ())


def maximal_configuration(c: Contract) -> frozenset[str]:
    """The union of all configurations, which is itself a configuration."""
    m = reachable_events(c)
    if is_configuration(c, m) is None:  # pragma: no cover - would contradict union closure
        raise AssertionError("set of reachable events is not a configuration")
    return m
