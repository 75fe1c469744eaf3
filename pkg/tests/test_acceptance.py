"""Exit criteria.  One test per criterion; the terminal summary prints a
PASS/FAIL line for each (see conftest)."""

from __future__ import annotations

import random
import time

import pytest

from contract_es.agreement import check_theorem3, duties, duty_report, find_agreement
from contract_es.broker import Policy, Strategy, Verdict, run_session
from contract_es.configurations import (
    enumerate_configurations,
    is_configuration,
    maximal_configuration,
    reachable_events,
)
from contract_es.model import render
from contract_es.pcl import Status, check_proof, parse_formula, prove, provable_atom, semantic_provable

import oracles
from corpus import generate_corpus, random_contract

CORPUS_SIZE = 1200


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(CORPUS_SIZE)


@pytest.fixture(scope="module")
def agreeing(corpus):
    return [c for c in corpus if find_agreement(c).agreed]


def test_ac01_toys(record_property, toys):
    record_property("criterion", "toys: configurations, agreement, duty sequence (< 1 s)")
    start = time.perf_counter()
    assert enumerate_configurations(toys) == {frozenset(), frozenset("abc")}
    result = find_agreement(toys)
    assert result.agreed and result.configuration == {"a", "b", "c"}
    expected = {(): ("C", {"c"}), ("c",): ("B", {"b"}), ("b", "c"): ("A", {"a"})}
    for state, (who, owed) in expected.items():
        report = duty_report(toys, state)
        assert report.culpable == {who}
        assert report.duties[who] == owed
    assert time.perf_counter() - start < 1.0


def test_ac02_handshake(record_property, handshake):
    record_property("criterion", "handshake: configurations exactly {}, {a,b}")
    assert enumerate_configurations(handshake) == {frozenset(), frozenset("ab")}
    assert is_configuration(handshake, {"a"}) is None
    assert is_configuration(handshake, {"b"}) is None


def test_ac03_chain_culpability(record_property, chain):
    record_property("criterion", "a0-a3 culpability table")
    table = {
        (): {"A0"},
        ("a0",): {"A1", "A2"},
        ("a0", "a2"): {"A1"},
        ("a0", "a1"): {"A2"},
        ("a0", "a1", "a2"): {"A3"},
        ("a0", "a1", "a2", "a3"): set(),
    }
    for state, culpable in table.items():
        assert duty_report(chain, state).culpable == culpable, state
    assert is_configuration(chain, {"a0", "a1", "a2", "a3"}) is not None


def test_ac04_standard_variant(record_property, toys_standard):
    record_property("criterion", "standard variant of toys: no configuration E, nothing reachable, no agreement")
    assert is_configuration(toys_standard, {"a", "b", "c"}) is None
    assert reachable_events(toys_standard) == frozenset()
    assert not find_agreement(toys_standard).agreed


def test_ac05_reachability_correspondence(record_property, corpus):
    record_property("criterion", f"prover == reachable == semantic on {CORPUS_SIZE} contracts (< 5 min)")
    start = time.perf_counter()
    disagreements, exhausted, checked = [], 0, 0
    for c in corpus:
        reach = reachable_events(c)
        for e in sorted(c.events):
            r = provable_atom(c, e)
            checked += 1
            if r.status is Status.BUDGET:
                exhausted += 1
                continue
            if not (r.proved == (e in reach) == semantic_provable(c, (), {e})):
                disagreements.append((render(c), e))
            if r.proved:
                assert check_proof(r.proof)
    elapsed = time.perf_counter() - start
    assert len(corpus) >= 1000 and checked > len(corpus)
    assert exhausted == 0
    assert disagreements == []
    assert elapsed < 300


def test_ac06_someone_always_culpable(record_property, agreeing):
    record_property("criterion", "no unfulfilled-and-blameless state in any agreeing corpus contract")
    assert len(agreeing) > 100
    counterexamples = [(render(c), check_theorem3(c)) for c in agreeing]
    assert [x for x in counterexamples if x[1] is not None] == []


def test_ac07_configuration_closure(record_property, corpus):
    record_property("criterion", "union closure, coverage, maximal configuration")
    violations = []
    for c in corpus:
        confs = enumerate_configurations(c)
        for x in confs:
            for y in confs:
                if is_configuration(c, x | y) is None:
                    violations.append(("union", render(c), x, y))
        maximum = maximal_configuration(c)
        if is_configuration(c, maximum) is None:
            violations.append(("maximal", render(c)))
        reach = reachable_events(c)
        for sub in oracles.subsets(reach):
            if not sub <= maximum:
                violations.append(("coverage", render(c), sub))
    assert violations == []


def test_ac08a_greedy_matches_ordering_search(record_property, corpus):
    record_property("criterion", "greedy configuration check == factorial ordering search, |C| <= 6")
    rng = random.Random(6)
    six = [random_contract(rng, max_events=6) for _ in range(150)]
    six = [c for c in six if len(c.events) == 6] + corpus
    mismatches = []
    for c in six:
        for conf in oracles.subsets(c.events):
            if (is_configuration(c, conf) is not None) != oracles.has_valid_ordering(c, conf):
                mismatches.append((render(c), conf))
    assert any(len(c.events) == 6 for c in six)
    assert mismatches == []


def test_ac08b_duty_readings_agree(record_property, corpus):
    record_property("criterion", "maximal-configuration duties == all-configurations duties on the corpus")
    disagreements = []
    for c in corpus:
        confs = oracles.all_configurations(c)
        for state in oracles.subsets(c.events):
            for p in sorted(c.participants):
                mine = duties(c, p, state)
                theirs = oracles.duties_over(c, p, state, confs)
                if mine != theirs:
                    disagreements.append((render(c), p, sorted(state), sorted(mine), sorted(theirs)))
    if disagreements:
        text, p, state, mine, theirs = disagreements[0]
        pytest.fail(
            f"{len(disagreements)} disagreements; first: participant {p} in state {state}: "
            f"maximal reading {mine}, existential reading {theirs}\n{text}"
        )


FACTS = [
    (["a -->> b", "b -->> a"], "a /\\ b", Status.PROVED),
    ([], "T -->> T", Status.PROVED),
    ([], "(a -->> a) -> a", Status.PROVED),
    (["b -> a", "a -> b"], "a", Status.REFUTED),
]


@pytest.mark.parametrize("context, goal, status", FACTS, ids=["circular-pair", "truth", "fixpoint", "plain-circularity"])
def test_ac09_prover_facts(record_property, context, goal, status):
    record_property("criterion", f"{', '.join(context) or '(empty)'} |- {goal}: {status.value} (< 1 s)")
    start = time.perf_counter()
    result = prove([parse_formula(f) for f in context], parse_formula(goal))
    assert time.perf_counter() - start < 1.0
    assert result.status is status


def test_ac10_sessions(record_property, toys):
    record_property("criterion", "toys sessions: honest c,b,a in 3 rounds; dishonest Carl stalls; byte-identical logs")
    honest = run_session(toys)
    assert honest.verdict is Verdict.ALL_FULFILLED
    assert honest.performed == ["c", "b", "a"] and len(honest.rounds) == 3
    carl = {"C": Strategy(Policy.DISHONEST_AFTER, 0)}
    stalled = run_session(toys, carl)
    assert stalled.verdict is Verdict.STALLED and stalled.culpable == {"C"}
    assert run_session(toys).to_json() == honest.to_json()
    assert run_session(toys, carl).to_json() == stalled.to_json()
    assert run_session(toys).to_text() == honest.to_text()
