"""Backward proof search for propositional contract logic.

The calculus is the intuitionistic sequent calculus (no disjunction or
falsehood are needed here) extended with

* ``cimp-R``:    from  G |- q                            infer  G |- p -->> q
* ``cimp-cimp``: from  G, p-->>q, a |- p  and  G, p-->>q, q |- b
                 infer G, p-->>q |- a -->> b
* ``cimp-L``:    from  G, p-->>q, r |- p  and  G, p-->>q, q |- r
                 infer G, p-->>q |- r
* ``says-R``:    from  G |- f                            infer  G |- A says f
* ``says-L``:    from  G, f |- A says g                  infer  G, A says f |- A says g

Contexts are sets.  Conjunctions on the left are split and ``T`` dropped
when a sequent is built, so the left conjunction rule never appears in
proof trees.  Every rule keeps its principal formula in the premises
(except ``says-L``, which replaces ``A says f`` by the stronger ``f``),
hence all formulas stay inside the subformula closure of the root and
depth-first search with a loop check on the current branch terminates.
"""

from __future__ import annotations

import enum
import sys
from dataclasses import dataclass, field
from typing import Iterable

from ..configurations import reachable_with_credit
from ..model import Contract, UndeclaredError
from .formula import Atom, CImpl, Conj, Formula, Impl, Says, Truth, encode, is_1n_pcl, says_atom

DEFAULT_BUDGET = 100_000


class Status(enum.Enum):
    PROVED = "proved"
    REFUTED = "refuted-by-saturation"
    BUDGET = "budget-exhausted"


def _normalize(context: Iterable[Formula]) -> frozenset[Formula]:
    out: set[Formula] = set()
    stack = list(context)
    while stack:
        f = stack.pop()
        if isinstance(f, Conj):
            stack.append(f.left)
            stack.append(f.right)
        elif not isinstance(f, Truth):
            out.add(f)
    return frozenset(out)


@dataclass(frozen=True)
class Sequent:
    context: frozenset[Formula]
    goal: Formula

    @classmethod
    def make(cls, context: Iterable[Formula], goal: Formula) -> Sequent:
        return cls(_normalize(context), goal)

    def extend(self, *formulas: Formula, goal: Formula | None = None) -> Sequent:
        return Sequent(self.context | _normalize(formulas), self.goal if goal is None else goal)

    def __str__(self) -> str:
        ctx = ", ".join(sorted(map(str, self.context)))
        return f"{ctx} |- {self.goal}"


@dataclass(frozen=True)
class Proof:
    rule: str
    sequent: Sequent
    premises: tuple[Proof, ...] = ()
    principal: Formula | None = None

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def pretty(self, indent: int = 0) -> str:
        tag = self.rule if self.principal is None else f"{self.rule} on {self.principal}"
        lines = [f"{'  ' * indent}{self.sequent}   [{tag}]"]
        lines += [p.pretty(indent + 1) for p in self.premises]
        return "\n".join(lines)


@dataclass(frozen=True)
class ProofResult:
    status: Status
    proof: Proof | None = None
    visited: int = 0
    diagnostic: str | None = field(default=None, compare=False)

    @property
    def proved(self) -> bool:
        return self.status is Status.PROVED


# --------------------------------------------------------------------------
# Rule instances, shared by the search and the checker


def _expected_premises(node_rule: str, seq: Sequent, principal: Formula | None) -> list[Sequent] | None:
    """Premises the rule demands for ``seq``, or ``None`` if it does not apply."""
    g, ctx = seq.goal, seq.context
    if principal is not None and principal not in ctx:
        return None
    if node_rule == "id":
        return [] if g in ctx else None
    if node_rule == "truth-R":
        return [] if isinstance(g, Truth) else None
    if node_rule == "and-R":
        return [Sequent(ctx, g.left), Sequent(ctx, g.right)] if isinstance(g, Conj) else None
    if node_rule == "imp-R":
        return [seq.extend(g.left, goal=g.right)] if isinstance(g, Impl) else None
    if node_rule == "says-R":
        return [Sequent(ctx, g.body)] if isinstance(g, Says) else None
    if node_rule == "cimp-R":
        return [Sequent(ctx, g.right)] if isinstance(g, CImpl) else None
    if node_rule == "says-L":
        if isinstance(g, Says) and isinstance(principal, Says) and principal.principal == g.principal:
            return [Sequent(ctx - {principal} | _normalize([principal.body]), g)]
        return None
    if node_rule == "imp-L":
        if isinstance(principal, Impl):
            return [Sequent(ctx, principal.left), seq.extend(principal.right)]
        return None
    if node_rule == "cimp-L":
        if isinstance(principal, CImpl):
            return [seq.extend(g, goal=principal.left), seq.extend(principal.right)]
        return None
    if node_rule == "cimp-cimp":
        if isinstance(principal, CImpl) and isinstance(g, CImpl):
            return [seq.extend(g.left, goal=principal.left), seq.extend(principal.right, goal=g.right)]
        return None
    return None


def check_proof(proof: Proof) -> bool:
    """Validate every node of ``proof`` against the rule set."""
    stack = [proof]
    while stack:
        node = stack.pop()
        expected = _expected_premises(node.rule, node.sequent, node.principal)
        if expected is None or len(expected) != len(node.premises):
            return False
        if [p.sequent for p in node.premises] != expected:
            return False
        stack.extend(node.premises)
    return True


# --------------------------------------------------------------------------
# Search


class _OutOfBudget(Exception):
    pass


_NO_LOOP = sys.maxsize


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.visited = 0
        self.proved: dict[Sequent, Proof] = {}
        self.failed: set[Sequent] = set()
        self.path: dict[Sequent, int] = {}

    def run(self, seq: Sequent) -> Proof | None:
        return self._search(seq, 0)[0]

    def _search(self, seq: Sequent, depth: int) -> tuple[Proof | None, int]:
        """Return ``(proof, lowest)``.

        ``lowest`` is the shallowest ancestor depth at which the loop check
        cut the search below this node; a failure is cached only when it
        did not depend on any strict ancestor.
        """
        hit = self.proved.get(seq)
        if hit is not None:
            return hit, _NO_LOOP
        if seq in self.failed:
            return None, _NO_LOOP
        if seq in self.path:
            return None, self.path[seq]
        self.visited += 1
        if self.visited > self.budget:
            raise _OutOfBudget
        self.path[seq] = depth
        try:
            proof, lowest = self._expand(seq, depth)
        finally:
            del self.path[seq]
        if proof is not None:
            self.proved[seq] = proof
            return proof, _NO_LOOP
        if lowest >= depth:
            self.failed.add(seq)
            return None, _NO_LOOP
        return None, lowest

    def _apply(self, rule: str, seq: Sequent, depth: int, principal: Formula | None = None):
        premises = _expected_premises(rule, seq, principal)
        proofs = []
        lowest = _NO_LOOP
        for p in premises:
            sub, low = self._search(p, depth + 1)
            lowest = min(lowest, low)
            if sub is None:
                return None, lowest
            proofs.append(sub)
        return Proof(rule, seq, tuple(proofs), principal), lowest

    def _expand(self, seq: Sequent, depth: int) -> tuple[Proof | None, int]:
        g, ctx = seq.goal, seq.context
        if isinstance(g, Truth):
            return Proof("truth-R", seq), _NO_LOOP
        if g in ctx:
            return Proof("id", seq), _NO_LOOP

        # Invertible steps: no backtracking over them.
        if isinstance(g, Says):
            for f in sorted((f for f in ctx if isinstance(f, Says) and f.principal == g.principal), key=str):
                return self._apply("says-L", seq, depth, f)
        if isinstance(g, Impl):
            return self._apply("imp-R", seq, depth)
        if isinstance(g, Conj):
            return self._apply("and-R", seq, depth)

        alternatives: list[tuple[str, Formula | None]] = []
        if isinstance(g, Says):
            alternatives.append(("says-R", None))
        if isinstance(g, CImpl):
            alternatives.append(("cimp-R", None))
        for f in sorted(ctx, key=str):
            if isinstance(f, Impl):
                if f.right not in ctx:
                    alternatives.append(("imp-L", f))
            elif isinstance(f, CImpl):
                if f.right not in ctx:
                    alternatives.append(("cimp-L", f))
                if isinstance(g, CImpl):
                    alternatives.append(("cimp-cimp", f))

        lowest = _NO_LOOP
        for rule, principal in alternatives:
            proof, low = self._apply(rule, seq, depth, principal)
            lowest = min(lowest, low)
            if proof is not None:
                return proof, _NO_LOOP
        return None, lowest


def prove(context: Iterable[Formula], goal: Formula, budget: int = DEFAULT_BUDGET) -> ProofResult:
    """Search for a proof of ``context |- goal`` visiting at most ``budget`` sequents."""
    if budget <= 0:
        raise ValueError("budget must be positive")
    context = list(context)
    search = _Search(budget)
    old_limit = sys.getrecursionlimit()
    sys.setrecursionlimit(max(old_limit, 20_000))
    try:
        proof = search.run(Sequent.make(context, goal))
    except _OutOfBudget:
        diagnostic = f"visited-sequent budget of {budget} exhausted"
        if not all(is_1n_pcl(f) for f in context):
            diagnostic += "; context lies outside the 1N-PCL fragment"
        return ProofResult(Status.BUDGET, None, search.visited, diagnostic)
    finally:
        sys.setrecursionlimit(old_limit)
    if proof is None:
        return ProofResult(Status.REFUTED, None, search.visited)
    return ProofResult(Status.PROVED, proof, search.visited)


def provable_atom(
    c: Contract, event: str, budget: int = DEFAULT_BUDGET, hypotheses: Iterable[str] = ()
) -> ProofResult:
    """Prove ``owner(event) says event`` from the encoded contract.

    Each hypothesis ``d`` contributes ``owner(d) says d`` to the context.
    """
    hypotheses = sorted(hypotheses)
    for e in [event, *hypotheses]:
        if e not in c.events:
            raise UndeclaredError(f"unknown event {e!r}")
    context = [encode(c)] + [says_atom(c, d) for d in hypotheses]
    return prove(context, says_atom(c, event), budget)


def semantic_provable(c: Contract, hypotheses: Iterable[str], goal: Iterable[str]) -> bool:
    """Decide provability on the encoded fragment through credit reachability."""
    hypotheses, goal = frozenset(hypotheses), frozenset(goal)
    unknown = (hypotheses | goal) - c.events
    if unknown:
        raise UndeclaredError(f"unknown events {sorted(unknown)}")
    return goal <= reachable_with_credit(c, hypotheses)
