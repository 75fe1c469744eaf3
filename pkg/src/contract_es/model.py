"""Contracts with standard and circular enablings.

A contract fixes a finite set of events, the participant owning each
event, the goal sets of every participant and two families of enabling
clauses.  Relations are kept as their minimal generators; the superset
closure is realised by the subset tests in :func:`enables` and :func:`ok`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

State = frozenset  # a set of performed events (frozenset[str])

class Kind(enum.Enum):
    STANDARD = "standard"
    CIRCULAR = "circular"

    @property
    def arrow(self) -> str:
        return "|-" if self is Kind.STANDARD else "||-"


class ContractError(ValueError):
    """Base class for malformed contracts and invalid queries."""


class ContractSyntaxError(ContractError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UndeclaredError(ContractError):
    pass


class DuplicateDeclarationError(ContractError):
    pass


class OwnershipClashError(ContractError):
    pass


@dataclass(frozen=True)
class Clause:
    """One minimal enabling: ``premises |- target`` or ``premises ||- target``."""

    premises: frozenset[str]
    target: str
    kind: Kind = Kind.STANDARD

    def __post_init__(self) -> None:
        object.__setattr__(self, "premises", frozenset(self.premises))
        object.__setattr__(self, "kind", Kind(self.kind))

    def sort_key(self) -> tuple:
        return (self.target, self.kind.value, tuple(sorted(self.premises)))

    def __lt__(self, other: Clause) -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        lhs = ",".join(sorted(self.premises)) or "-"
        return f"{lhs} {self.kind.arrow} {self.target}"


@dataclass(frozen=True)
class GoalSet:
    participant: str
    goal: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "goal", frozenset(self.goal))

    def sort_key(self) -> tuple:
        return (self.participant, tuple(sorted(self.goal)))


@dataclass(frozen=True)
class Diagnostic:
    code: str
    message: str

    def __str__(self) -> str:
        return f"warning[{self.code}]: {self.message}"


@dataclass(frozen=True)
class Contract:
    """An immutable contract.

    ``owner`` maps every event to its participant.  Clauses and goal sets
    are stored as written (minimal generators), deduplicated.
    """

    events: frozenset[str] = frozenset()
    participants: frozenset[str] = frozenset()
    owner: Mapping[str, str] = field(default_factory=dict, hash=False)
    clauses: frozenset[Clause] = frozenset()
    goals: frozenset[GoalSet] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "events", frozenset(self.events))
        object.__setattr__(self, "participants", frozenset(self.participants))
        object.__setattr__(self, "owner", dict(self.owner))
        object.__setattr__(self, "clauses", frozenset(self.clauses))
        object.__setattr__(self, "goals", frozenset(self.goals))
        for e in self.events:
            if e not in self.owner:
                raise ContractError(f"event {e!r} has no owner")
        for e, p in self.owner.items():
            if e not in self.events:
                raise UndeclaredError(f"owner given for undeclared event {e!r}")
            if p not in self.participants:
                raise UndeclaredError(f"event {e!r} owned by undeclared participant {p!r}")
        for cl in self.clauses:
            for e in cl.premises | {cl.target}:
                if e not in self.events:
                    raise UndeclaredError(f"clause {cl} mentions undeclared event {e!r}")
        for g in self.goals:
            if g.participant not in self.participants:
                raise UndeclaredError(f"goal for undeclared participant {g.participant!r}")
            for e in g.goal:
                if e not in self.events:
                    raise UndeclaredError(f"goal of {g.participant} mentions undeclared event {e!r}")

    @cached_property
    def _index(self) -> dict[tuple[Kind, str], list[Clause]]:
        index: dict[tuple[Kind, str], list[Clause]] = {}
        for cl in sorted(self.clauses):
            index.setdefault((cl.kind, cl.target), []).append(cl)
        return index

    def clauses_for(self, kind: Kind, target: str) -> list[Clause]:
        return self._index.get((kind, target), [])

    def goals_of(self, participant: str) -> list[GoalSet]:
        return sorted(
            (g for g in self.goals if g.participant == participant),
            key=GoalSet.sort_key,
        )

    def owned_by(self, participant: str) -> frozenset[str]:
        return frozenset(e for e, p in self.owner.items() if p == participant)

    def sorted_events(self) -> list[str]:
        return sorted(self.events)

    def __str__(self) -> str:
        return render(self)


def build_contract(
    owner: Mapping[str, str],
    clauses: Iterable[tuple[Iterable[str], str, Kind | str]] = (),
    goals: Iterable[tuple[str, Iterable[str]]] = (),
    participants: Iterable[str] = (),
) -> Contract:
    """Convenience constructor from plain Python data.

    >>> c = build_contract({"a": "A"}, [((), "a", "standard")], [("A", ["a"])])
    >>> sorted(c.events)
    ['a']
    """
    parts = set(participants) | set(owner.values()) | {p for p, _ in goals}
    return Contract(
        events=frozenset(owner),
        participants=frozenset(parts),
        owner=dict(owner),
        clauses=frozenset(Clause(frozenset(d), t, Kind(k)) for d, t, k in clauses),
        goals=frozenset(GoalSet(p, frozenset(g)) for p, g in goals),
    )


# --------------------------------------------------------------------------
# Queries


def _check_event(c: Contract, e: str) -> None:
    if e not in c.events:
        raise UndeclaredError(f"unknown event {e!r}")


def _check_state(c: Contract, state: Iterable[str]) -> frozenset[str]:
    state = frozenset(state)
    unknown = state - c.events
    if unknown:
        raise UndeclaredError(f"unknown events {sorted(unknown)}")
    return state


def enables(c: Contract, kind: Kind | str, state: Iterable[str], e: str) -> bool:
    """True iff some ``kind`` clause targeting ``e`` has premises within ``state``."""
    kind = Kind(kind)
    _check_event(c, e)
    state = _check_state(c, state)
    return any(cl.premises <= state for cl in c.clauses_for(kind, e))


def ok(c: Contract, participant: str, state: Iterable[str]) -> bool:
    """True iff ``participant`` has a goal set contained in ``state``.

    A participant without goal sets is never fulfilled.
    """
    if participant not in c.participants:
        raise UndeclaredError(f"unknown participant {participant!r}")
    state = frozenset(state)
    return any(g.goal <= state for g in c.goals if g.participant == participant)


def compose(c1: Contract, c2: Contract) -> Contract:
    """Component-wise union; owners of shared events must agree."""
    for e in c1.events & c2.events:
        if c1.owner[e] != c2.owner[e]:
            raise OwnershipClashError(
                f"event {e!r} owned by {c1.owner[e]!r} and {c2.owner[e]!r}"
            )
    return Contract(
        events=c1.events | c2.events,
        participants=c1.participants | c2.participants,
        owner={**c1.owner, **c2.owner},
        clauses=c1.clauses | c2.clauses,
        goals=c1.goals | c2.goals,
    )


def compose_all(contracts: Iterable[Contract]) -> Contract:
    result = Contract()
    for c in contracts:
        result = compose(result, c)
    return result


def validate(c: Contract) -> list[Diagnostic]:
    diags: list[Diagnostic] = []
    with_goals = {g.participant for g in c.goals}
    for p in sorted(c.participants - with_goals):
        diags.append(Diagnostic("never-fulfilled", f"participant {p} has no goal set and is never fulfilled"))
    clauses = sorted(c.clauses)
    for cl in clauses:
        if cl.kind is Kind.STANDARD and cl.target in cl.premises:
            diags.append(Diagnostic("self-premise", f"standard clause {cl} can never fire"))
    for cl in clauses:
        for other in clauses:
            if (
                other is not cl
                and other.kind is cl.kind
                and other.target == cl.target
                and other.premises < cl.premises
            ):
                diags.append(Diagnostic("subsumed", f"clause {cl} is subsumed by {other}"))
                break
    return diags


# --------------------------------------------------------------------------
# Text format

_TOKEN_RE = re.compile(r"\s*(?:(?P<name>[A-Za-z0-9_]+)|(?P<op>\|\|-|\|-|,|@|:|-))")

_KEYWORDS = ("participant", "event", "enable", "ok")


class _Line:
    def __init__(self, text: str, lineno: int):
        self.lineno = lineno
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        text = text.rstrip()
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
                raise ContractSyntaxError(f"unexpected character {text[col - 1]!r}", lineno, col)
            kind = "name" if m.group("name") else "op"
            value = m.group(kind)
            self.tokens.append((kind, value, m.start(kind) + 1))
            pos = m.end()
        self.end_col = len(text) + 1
        self.pos = 0

    def error(self, message: str) -> ContractSyntaxError:
        col = self.tokens[self.pos][2] if self.pos < len(self.tokens) else self.end_col
        return ContractSyntaxError(message, self.lineno, col)

    def name(self, what: str) -> str:
        if self.pos < len(self.tokens) and self.tokens[self.pos][0] == "name":
            self.pos += 1
            return self.tokens[self.pos - 1][1]
        raise self.error(f"expected {what}")

    def op(self, *values: str) -> str:
        if self.pos < len(self.tokens) and self.tokens[self.pos][1] in values:
            self.pos += 1
            return self.tokens[self.pos - 1][1]
        raise self.error(f"expected {' or '.join(repr(v) for v in values)}")

    def peek(self) -> str | None:
        return self.tokens[self.pos][1] if self.pos < len(self.tokens) else None

    def event_list(self) -> list[tuple[str, int]]:
        if self.peek() == "-":
            self.pos += 1
            return []
        items = []
        while True:
            col = self.tokens[self.pos][2] if self.pos < len(self.tokens) else self.end_col
            items.append((self.name("event name"), col))
            if self.peek() != ",":
                return items
            self.pos += 1

    def end(self) -> None:
        if self.pos != len(self.tokens):
            raise self.error("unexpected trailing input")


def parse_contract(text: str) -> Contract:
    """Parse the line-oriented contract format."""
    participants: dict[str, int] = {}
    owner: dict[str, str] = {}
    clauses: set[Clause] = set()
    goals: set[GoalSet] = set()
    # references are resolved after every declaration has been read
    event_refs: list[tuple[str, int, int]] = []
    participant_refs: list[tuple[str, int, int]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _Line(raw.split("#", 1)[0], lineno)
        if not line.tokens:
            continue
        keyword = line.name("declaration keyword")
        if keyword not in _KEYWORDS:
            line.pos -= 1
            raise line.error(f"unknown declaration {keyword!r}")
        if keyword == "participant":
            p = line.name("participant name")
            line.end()
            participants.setdefault(p, lineno)
        elif keyword == "event":
            e = line.name("event name")
            line.op("@")
            pcol = line.tokens[line.pos][2] if line.pos < len(line.tokens) else line.end_col
            p = line.name("participant name")
            line.end()
            if e in owner:
                if owner[e] == p:
                    raise DuplicateDeclarationError(f"line {lineno}: event {e!r} declared twice")
                raise OwnershipClashError(
                    f"line {lineno}: event {e!r} declared with owners {owner[e]!r} and {p!r}"
                )
            owner[e] = p
            participant_refs.append((p, lineno, pcol))
        elif keyword == "enable":
            premises = line.event_list()
            arrow = line.op("|-", "||-")
            col = line.tokens[line.pos][2] if line.pos < len(line.tokens) else line.end_col
            target = line.name("target event")
            line.end()
            kind = Kind.STANDARD if arrow == "|-" else Kind.CIRCULAR
            clauses.add(Clause(frozenset(e for e, _ in premises), target, kind))
            event_refs.extend((e, lineno, c) for e, c in premises)
            event_refs.append((target, lineno, col))
        else:
            pcol = line.tokens[line.pos][2] if line.pos < len(line.tokens) else line.end_col
            p = line.name("participant name")
            line.op(":")
            goal = line.event_list()
            line.end()
            goals.add(GoalSet(p, frozenset(e for e, _ in goal)))
            event_refs.extend((e, lineno, c) for e, c in goal)
            participant_refs.append((p, lineno, pcol))

    for p, lineno, col in participant_refs:
        if p not in participants:
            raise UndeclaredError(f"line {lineno}, column {col}: undeclared participant {p!r}")
    for e, lineno, col in event_refs:
        if e not in owner:
            raise UndeclaredError(f"line {lineno}, column {col}: undeclared event {e!r}")
    return Contract(
        events=frozenset(owner),
        participants=frozenset(participants),
        owner=owner,
        clauses=frozenset(clauses),
        goals=frozenset(goals),
    )


def load_contract(path) -> Contract:
    with open(path, encoding="utf-8") as fh:
        return parse_contract(fh.read())


def render(c: Contract) -> str:
    lines = [f"participant {p}" for p in sorted(c.participants)]
    lines += [f"event {e} @ {c.owner[e]}" for e in sorted(c.events)]
    lines += [f"enable {cl}" for cl in sorted(c.clauses)]
    for g in sorted(c.goals, key=GoalSet.sort_key):
        lines.append(f"ok {g.participant} : {','.join(sorted(g.goal)) or '-'}")
    return "\n".join(lines) + "\n" if lines else ""
