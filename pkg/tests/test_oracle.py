"""Rule chaining against the exhaustive model-counting oracle.

The oracle's expected values on the small hand cases below were computed
by enumerating interpretations on paper before the engine existed; the
property test then holds the engine to the oracle across hundreds of
random networks inside the coherent fragment.
"""

from fractions import Fraction

import pytest
from hypothesis import HealthCheck, assume, given, settings

from possdiag.engine import (
    abduction_degree,
    consistency_degree,
    derive,
)
from possdiag.model import (
    BehaviorRule,
    Component,
    Disorder,
    Endpoint,
    Link,
    Manifestation,
    Observations,
    ParamDecl,
    StateAssumption,
    StateCondition,
    SystemModel,
    compose_problem,
    signature_disorder,
)
from possdiag.scale import DEFAULT_SCALE

from genmodels import diagnostic_cases
from oracle import (
    ExhaustiveOracle,
    oracle_abduction,
    oracle_consistency,
    within_fragment,
)

ONE = Fraction(1)
AC = Fraction(4, 5)
LIKELY = Fraction(3, 5)
UNLIKELY = Fraction(2, 5)
ZERO = Fraction(0)


def _chain(weight=LIKELY, kind="entails"):
    src = Component("src", (ParamDecl("out", "output", "analog", ("U",)),))
    sink = Component(
        "sink",
        (
            ParamDecl("in", "input", "analog", ("U",)),
            ParamDecl(
                "out", "output", "analog", ("BAD", "WORSE"), observable=True
            ),
        ),
        rules=(
            BehaviorRule(
                (StateCondition("in", "U"),),
                StateCondition("out", "BAD"),
                weight,
                kind=kind,
            ),
        ),
    )
    return SystemModel(
        DEFAULT_SCALE,
        (src, sink),
        (Link(Endpoint("src", "out"), Endpoint("sink", "in")),),
    )


SRC_U = signature_disorder(Endpoint("src", "out"), "U")
SINK_OUT = Endpoint("sink", "out")


def test_oracle_entailment_on_a_weighted_chain():
    # Frozen by hand: countermodels of sink.out=BAD must break the rule
    # (pi = 1 - 3/5) since the assumption and link hold at certainty 1.
    oracle = ExhaustiveOracle(_chain(), {}, SRC_U)
    assert oracle.fully_consistent()
    assert oracle.entail(SINK_OUT, "BAD") == LIKELY
    assert oracle.exclude(SINK_OUT, "BAD") == ZERO
    assert oracle.entail(Endpoint("sink", "in"), "U") == ONE
    assert oracle.entail(Endpoint("src", "out"), "U") == ONE


def test_oracle_exclusion_on_a_weighted_chain():
    oracle = ExhaustiveOracle(_chain(AC, kind="excludes"), {}, SRC_U)
    assert oracle.exclude(SINK_OUT, "BAD") == AC
    assert oracle.entail(SINK_OUT, "BAD") == ZERO


def test_oracle_consistency_and_abduction_match_hand_values():
    model = _chain()
    problem = compose_problem(
        model,
        Observations(
            manifestations=(
                Manifestation(SINK_OUT, "BAD", ONE, present=False),
            )
        ),
    )
    oracle = ExhaustiveOracle(model, {}, SRC_U)
    # entailing BAD at 3/5 against certain absence leaves 1 - 3/5
    assert oracle_consistency(problem, oracle) == UNLIKELY

    problem2 = compose_problem(
        model,
        Observations(
            manifestations=(Manifestation(SINK_OUT, "BAD", AC, present=True),)
        ),
    )
    # coverage falls short of 4/5, capped at the prediction 3/5
    assert oracle_abduction(problem2, oracle) == LIKELY


def test_oracle_detects_contradictory_assumption_bases():
    # An assumption certainly excluded by an active rule cannot be
    # satisfied outright by any interpretation.
    src = Component("src", (ParamDecl("out", "output", "analog", ("U",)),))
    gate = Component(
        "gate",
        (
            ParamDecl("in", "input", "analog", ("U",)),
            ParamDecl("out", "output", "analog", ("BAD",), observable=True),
        ),
        rules=(
            BehaviorRule(
                (StateCondition("in", "U"),),
                StateCondition("out", "BAD"),
                ONE,
                kind="excludes",
            ),
        ),
    )
    model = SystemModel(
        DEFAULT_SCALE,
        (src, gate),
        (Link(Endpoint("src", "out"), Endpoint("gate", "in")),),
    )
    both = Disorder(
        "both",
        frozenset(
            {
                StateAssumption(Endpoint("src", "out"), "U"),
                StateAssumption(Endpoint("gate", "out"), "BAD"),
            }
        ),
    )
    oracle = ExhaustiveOracle(model, {}, both)
    assert not oracle.fully_consistent()


def test_oracle_respects_config_gating():
    relay = Component(
        "relay",
        (
            ParamDecl("in", "input", "analog", ("U",)),
            ParamDecl("out", "output", "analog", ("U",), observable=True),
        ),
        rules=(
            BehaviorRule(
                (StateCondition("in", "U"),),
                StateCondition("out", "U"),
                ONE,
                config_guard="ON",
            ),
        ),
        config_states=("ON", "OFF"),
    )
    src = Component("src", (ParamDecl("out", "output", "analog", ("U",)),))
    model = SystemModel(
        DEFAULT_SCALE,
        (src, relay),
        (Link(Endpoint("src", "out"), Endpoint("relay", "in")),),
    )
    on = ExhaustiveOracle(model, {"relay": "ON"}, SRC_U)
    off = ExhaustiveOracle(model, {"relay": "OFF"}, SRC_U)
    assert on.entail(Endpoint("relay", "out"), "U") == ONE
    assert off.entail(Endpoint("relay", "out"), "U") == ZERO


def test_oracle_budget_guard():
    comps = tuple(
        Component(
            f"s{i}", (ParamDecl("out", "output", "analog", ("U", "V")),)
        )
        for i in range(12)
    )
    model = SystemModel(DEFAULT_SCALE, comps, ())
    with pytest.raises(ValueError, match="budget"):
        ExhaustiveOracle(
            model, {}, signature_disorder(Endpoint("s0", "out"), "U"),
            max_interpretations=1000,
        )


# -- the property: chaining == counting on the coherent fragment -------------


@settings(
    max_examples=250,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
@given(diagnostic_cases())
def test_closure_matches_exhaustive_oracle(case):
    problem, disorder = case
    model, context = problem.model, problem.context_map
    derivation = derive(model, context, disorder)
    oracle = ExhaustiveOracle(model, context, disorder)
    assume(within_fragment(problem, oracle, derivation))

    for ep, decl in model.endpoints():
        for state in decl.states:
            assert derivation.entails(ep, state) == oracle.entail(ep, state), (
                f"entailment of {ep}={state}"
            )

    # Exclusion is only claimed at terminal outputs: anywhere upstream the
    # counting view reasons by contraposition (a pinned downstream value
    # forces exclusion-rule antecedents false), which chaining does not.
    for ep, decl in model.endpoints():
        if decl.direction != "output" or model.outgoing(ep):
            continue
        for state in decl.states:
            if any(
                derivation.entails(ep, s) > 0
                for s in decl.states
                if s != state
            ):
                continue  # a pinned sibling excludes in the counting view
            assert derivation.excludes(ep, state) == oracle.exclude(
                ep, state
            ), f"exclusion of {ep}={state}"

    assert consistency_degree(problem, disorder, derivation) == (
        oracle_consistency(problem, oracle)
    )
    assert abduction_degree(problem, disorder, derivation) == (
        oracle_abduction(problem, oracle)
    )
