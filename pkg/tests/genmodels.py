"""Hypothesis strategies producing small random component networks.

Layered DAGs: a row of source components, an optional middle row, and a
row of sinks whose outputs are the only observable points.  Sizes are
kept small enough for the exhaustive oracle (every parameter adds a
factor of |states|+1 interpretations).
"""

from __future__ import annotations

from hypothesis import strategies as st

from possdiag.model import (
    BehaviorRule,
    Component,
    Disorder,
    Endpoint,
    FaultAssumption,
    FaultCondition,
    Link,
    Manifestation,
    Observations,
    ParamDecl,
    StateAssumption,
    StateCondition,
    SystemModel,
    compose_problem,
)
from possdiag.scale import DEFAULT_SCALE

STATE_POOLS = (("U",), ("U", "V"))
NONZERO = DEFAULT_SCALE.values[:-1]
CONFIG = ("ON", "OFF")


@st.composite
def _component(draw, name, upstream, observable, allow_fault=True):
    """One component wired to already-built upstream outputs."""
    n_inputs = draw(st.integers(1, min(2, len(upstream))))
    drivers = draw(
        st.lists(
            st.sampled_from(upstream),
            min_size=n_inputs,
            max_size=n_inputs,
            unique=True,
        )
    )
    params = []
    links = []
    conditions = []  # usable antecedent StateConditions
    for i, (src_ep, src_states) in enumerate(drivers):
        in_name = f"in{i}"
        params.append(ParamDecl(in_name, "input", "analog", src_states))
        links.append(Link(src_ep, Endpoint(name, in_name)))
        conditions.extend(StateCondition(in_name, s) for s in src_states)
    out_states = draw(st.sampled_from(STATE_POOLS))
    params.append(
        ParamDecl("out", "output", "analog", out_states, observable)
    )
    has_fault = allow_fault and draw(st.booleans())
    faults = ("broken",) if has_fault else ()
    has_config = draw(st.booleans())
    config = CONFIG if has_config else None

    n_rules = draw(st.integers(1, 3))
    rules = []
    seen = set()
    for _ in range(n_rules):
        ants = tuple(
            draw(
                st.lists(
                    st.sampled_from(conditions),
                    min_size=1,
                    max_size=min(2, len(conditions)),
                    unique=True,
                )
            )
        )
        if has_fault and draw(st.booleans()):
            ants = ants + (FaultCondition("broken"),)
        kind = draw(st.sampled_from(("entails", "excludes")))
        guard = draw(st.sampled_from((None,) + CONFIG)) if has_config else None
        consequent = StateCondition("out", draw(st.sampled_from(out_states)))
        weight = draw(st.sampled_from(NONZERO))
        key = (guard, frozenset(ants), consequent)
        if key in seen:  # keep one kind per clause shape
            continue
        seen.add(key)
        rules.append(
            BehaviorRule(ants, consequent, weight, kind=kind, config_guard=guard)
        )
    comp = Component(
        name,
        tuple(params),
        rules=tuple(rules),
        faults=faults,
        config_states=config,
    )
    return comp, links


@st.composite
def networks(draw):
    """A small validated model plus a configuration context."""
    comps: list[Component] = []
    links: list[Link] = []
    outputs: list[tuple[Endpoint, tuple[str, ...]]] = []

    n_src = draw(st.integers(1, 2))
    for i in range(n_src):
        states = draw(st.sampled_from(STATE_POOLS))
        comp = Component(
            f"src{i}", (ParamDecl("out", "output", "analog", states),)
        )
        comps.append(comp)
        outputs.append((Endpoint(comp.name, "out"), states))

    # One middle row and one sink keep the interpretation space within
    # the exhaustive oracle's budget (about 3^8 worst case).
    n_mid = draw(st.integers(0, 1))
    for i in range(n_mid):
        comp, comp_links = draw(
            _component(f"mid{i}", tuple(outputs), observable=False)
        )
        comps.append(comp)
        links.extend(comp_links)
        outputs.append(
            (Endpoint(comp.name, "out"), comp.param("out").states)
        )

    comp, comp_links = draw(
        _component("sink0", tuple(outputs), observable=True)
    )
    comps.append(comp)
    links.extend(comp_links)

    model = SystemModel(DEFAULT_SCALE, tuple(comps), tuple(links))
    context = {
        comp.name: draw(st.sampled_from(comp.config_states))
        for comp in comps
        if comp.config_states is not None
    }
    return model, context


@st.composite
def disorders(draw, model):
    """One or two assumptions over unobservable outputs and fault modes."""
    options = []
    for comp in model.components:
        for decl in comp.outputs:
            if decl.observable:
                continue
            for state in decl.states:
                options.append(
                    StateAssumption(Endpoint(comp.name, decl.name), state)
                )
        for fault in comp.faults:
            options.append(FaultAssumption(comp.name, fault))
    assumptions = draw(
        st.lists(st.sampled_from(options), min_size=1, max_size=2, unique=True)
    )
    label = "+".join(sorted(str(a) for a in assumptions))
    return Disorder(label, frozenset(assumptions))


@st.composite
def observation_sets(draw, model):
    """Present observations on sinks (at most one per output) plus absences."""
    manifestations = []
    taken = set()
    for ep in model.observable_outputs():
        states = model.decl_of(ep).states
        if draw(st.booleans()):
            state = draw(st.sampled_from(states))
            degree = draw(st.sampled_from(NONZERO))
            manifestations.append(Manifestation(ep, state, degree, present=True))
            taken.add((ep, state))
    pairs = [
        (ep, state)
        for ep in model.observable_outputs()
        for state in model.decl_of(ep).states
        if (ep, state) not in taken
    ]
    if pairs:
        for ep, state in draw(
            st.lists(st.sampled_from(pairs), max_size=2, unique=True)
        ):
            degree = draw(st.sampled_from(NONZERO))
            manifestations.append(
                Manifestation(ep, state, degree, present=False)
            )
    return tuple(manifestations)


@st.composite
def diagnostic_cases(draw):
    """(problem, disorder) pairs ready for engine/oracle comparison."""
    model, context = draw(networks())
    disorder = draw(disorders(model))
    manifestations = draw(observation_sets(model))
    observations = Observations(
        tuple(sorted(context.items())), manifestations
    )
    problem = compose_problem(model, observations)
    return problem, disorder
