"""Fault-isolation engine.

Everything here is graded min/max algebra over the model's scale:

* ``derive`` closes a disorder's assumptions under the active behaviour
  rules (forward max-min fixpoint), yielding how certainly each output
  state is entailed and how certainly it is excluded.
* ``consistency_degree`` confronts a disorder with the observations: it
  is 1 minus the strongest clash, where a clash is either excluding an
  observed-present state or entailing an observed-absent one.
* ``abduction_degree`` measures coverage: how well the disorder's
  predictions reach the certainty of each observed-present state.
* ``relevant_links`` / ``relevant_comps`` walk influence paths backward
  from a manifestation; only a certainty-1 exclusion can sever a path,
  absence of rules leaves it open.
* ``enumerate_candidates`` proposes fault modes of components relevant
  to every present observation, plus abnormal-state signatures on
  unobservable outputs that can still influence all of them.
* ``diagnose`` scores and ranks candidates; ``suggest_probes`` orders
  unobserved output states by how many active hypotheses they tell
  apart; ``prediction_points`` lists the measurable states worth
  probing, stopping at the first observable point on each path.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .model import (
    BehaviorRule,
    Component,
    DiagnosticProblem,
    Disorder,
    Endpoint,
    FaultAssumption,
    FaultCondition,
    Link,
    StateAssumption,
    StateCondition,
    SystemModel,
    fault_disorder,
    signature_disorder,
)

__all__ = [
    "CandidateReport",
    "Derivation",
    "DiagnosisReport",
    "Expectation",
    "ProbeSuggestion",
    "abduction_degree",
    "consistency_degree",
    "derive",
    "diagnose",
    "dominates",
    "enumerate_candidates",
    "expected_manifestations",
    "path_possibilities",
    "prediction_points",
    "relevant_comps",
    "relevant_links",
    "suggest_probes",
]

_ZERO = Fraction(0)
_ONE = Fraction(1)


def _active(rule: BehaviorRule, comp: Component, context: dict[str, str]) -> bool:
    if rule.config_guard is None:
        return True
    return context.get(comp.name) == rule.config_guard


@dataclass(frozen=True)
class Derivation:
    """Graded consequences of a disorder under one configuration."""

    entailed: dict  # (Endpoint, state) -> Fraction
    excluded: dict  # (Endpoint, state) -> Fraction
    faults: dict  # (component, fault) -> Fraction

    def entails(self, endpoint: Endpoint, state: str) -> Fraction:
        return self.entailed.get((endpoint, state), _ZERO)

    def excludes(self, endpoint: Endpoint, state: str) -> Fraction:
        return self.excluded.get((endpoint, state), _ZERO)


def derive(
    model: SystemModel, context: dict[str, str], disorder: Disorder
) -> Derivation:
    """Close a disorder's assumptions under rules and links.

    Links copy states at full certainty; an ``entails`` rule supports its
    consequent at min(antecedent supports, weight); fan-in takes the max.
    ``excludes`` rules are evaluated once the positive fixpoint settles,
    since negative conclusions never feed antecedents.
    """
    support: dict[tuple[Endpoint, str], Fraction] = {}
    faults: dict[tuple[str, str], Fraction] = {}
    for a in disorder.assumptions:
        if isinstance(a, StateAssumption):
            support[(a.endpoint, a.state)] = _ONE
        else:
            faults[(a.component, a.fault)] = _ONE

    def condition_support(comp: Component, cond) -> Fraction:
        if isinstance(cond, FaultCondition):
            return faults.get((comp.name, cond.fault), _ZERO)
        return support.get((Endpoint(comp.name, cond.param), cond.state), _ZERO)

    changed = True
    while changed:
        changed = False
        for link in model.links:
            src_decl = model.decl_of(link.source)
            dst_decl = model.decl_of(link.target)
            for state in src_decl.states:
                if state not in dst_decl.states:
                    continue
                value = support.get((link.source, state), _ZERO)
                if value > support.get((link.target, state), _ZERO):
                    support[(link.target, state)] = value
                    changed = True
        for comp in model.components:
            for rule in comp.rules:
                if rule.kind != "entails" or not _active(rule, comp, context):
                    continue
                strength = min(
                    (condition_support(comp, c) for c in rule.antecedents),
                    default=_ZERO,
                )
                strength = min(strength, rule.weight)
                if strength == 0:
                    continue
                key = (
                    Endpoint(comp.name, rule.consequent.param),
                    rule.consequent.state,
                )
                if strength > support.get(key, _ZERO):
                    support[key] = strength
                    changed = True

    excluded: dict[tuple[Endpoint, str], Fraction] = {}
    for comp in model.components:
        for rule in comp.rules:
            if rule.kind != "excludes" or not _active(rule, comp, context):
                continue
            strength = min(
                (condition_support(comp, c) for c in rule.antecedents),
                default=_ZERO,
            )
            strength = min(strength, rule.weight)
            if strength == 0:
                continue
            key = (
                Endpoint(comp.name, rule.consequent.param),
                rule.consequent.state,
            )
            if strength > excluded.get(key, _ZERO):
                excluded[key] = strength
    return Derivation(support, excluded, faults)


# -- confrontation with observations ---------------------------------------


def consistency_degree(
    problem: DiagnosticProblem,
    disorder: Disorder,
    derivation: Derivation | None = None,
) -> Fraction:
    """1 minus the strongest clash between predictions and observations."""
    der = derivation or derive(problem.model, problem.context_map, disorder)
    against = _ZERO
    for m in problem.present:
        against = max(against, min(der.excludes(m.endpoint, m.state), m.degree))
    for m in problem.absent:
        against = max(against, min(der.entails(m.endpoint, m.state), m.degree))
    return 1 - against


def abduction_degree(
    problem: DiagnosticProblem,
    disorder: Disorder,
    derivation: Derivation | None = None,
) -> Fraction:
    """How fully the disorder covers every observed-present state.

    For each present observation the prediction must reach the observed
    certainty; falling short caps the degree at the prediction's own
    strength.  An empty observation set is vacuously covered.
    """
    der = derivation or derive(problem.model, problem.context_map, disorder)
    degree = _ONE
    for m in problem.present:
        predicted = der.entails(m.endpoint, m.state)
        if m.degree > predicted:
            degree = min(degree, predicted)
    return degree


# -- influence paths --------------------------------------------------------


def _transmission(
    comp: Component,
    context: dict[str, str],
    in_param: str,
    in_state: str,
    out_param: str,
    out_state: str,
) -> Fraction:
    """Possibility that ``in_param=in_state`` lets ``out_param=out_state`` arise.

    Open-world: only active single-antecedent exclusion rules on exactly
    that input state can lower it, and only a certainty-1 exclusion cuts
    the path entirely.
    """
    blocked = _ZERO
    target = StateCondition(out_param, out_state)
    for rule in comp.rules:
        if rule.kind != "excludes" or not _active(rule, comp, context):
            continue
        if rule.consequent != target or len(rule.antecedents) != 1:
            continue
        ant = rule.antecedents[0]
        if isinstance(ant, StateCondition) and ant == StateCondition(
            in_param, in_state
        ):
            blocked = max(blocked, rule.weight)
    return 1 - blocked


def _backward(
    model: SystemModel,
    context: dict[str, str],
    endpoint: Endpoint,
    state: str,
) -> tuple[dict[tuple[Endpoint, str], Fraction], frozenset[Link]]:
    poss: dict[tuple[Endpoint, str], Fraction] = {(endpoint, state): _ONE}
    links: set[Link] = set()
    queue: list[tuple[Endpoint, str]] = [(endpoint, state)]
    while queue:
        ep, s = queue.pop()
        p = poss[(ep, s)]
        decl = model.decl_of(ep)
        if decl.direction == "output":
            comp = model.component(ep.component)
            for inp in comp.inputs:
                in_ep = Endpoint(comp.name, inp.name)
                for gamma in inp.states:
                    tau = _transmission(
                        comp, context, inp.name, gamma, ep.param, s
                    )
                    reach = min(p, tau)
                    if reach > poss.get((in_ep, gamma), _ZERO):
                        poss[(in_ep, gamma)] = reach
                        queue.append((in_ep, gamma))
        else:
            for link in model.incoming(ep):
                if s not in model.decl_of(link.source).states:
                    continue
                links.add(link)
                if p > poss.get((link.source, s), _ZERO):
                    poss[(link.source, s)] = p
                    queue.append((link.source, s))
    return poss, frozenset(links)


def path_possibilities(
    model: SystemModel,
    context: dict[str, str],
    endpoint: Endpoint,
    state: str,
) -> dict[tuple[Endpoint, str], Fraction]:
    """Possibility of influence from each (parameter, state) to the target."""
    poss, _ = _backward(model, context, endpoint, state)
    return poss


def relevant_links(
    model: SystemModel,
    context: dict[str, str],
    endpoint: Endpoint,
    state: str,
) -> frozenset[Link]:
    """Links lying on a still-possible influence path to the manifestation."""
    _, links = _backward(model, context, endpoint, state)
    return links


def relevant_comps(
    model: SystemModel,
    context: dict[str, str],
    endpoint: Endpoint,
    state: str,
) -> frozenset[str]:
    """Components incident to a relevant link, plus the observed component."""
    _, links = _backward(model, context, endpoint, state)
    comps = {endpoint.component}
    for link in links:
        comps.add(link.source.component)
        comps.add(link.target.component)
    return frozenset(comps)


# -- candidates -------------------------------------------------------------


def enumerate_candidates(problem: DiagnosticProblem) -> tuple[Disorder, ...]:
    """Single-disorder hypotheses able to influence every present observation.

    Fault modes come from components relevant to all present
    manifestations; signature hypotheses assume an abnormal state on an
    unobservable output that retains a possible influence path to each
    manifestation.  States already observed present explain nothing new
    and are skipped.
    """
    if not problem.present:
        return ()
    model, context = problem.model, problem.context_map
    walks = [
        _backward(model, context, m.endpoint, m.state)
        for m in problem.present
    ]
    comp_sets = []
    for m, (_, links) in zip(problem.present, walks):
        comps = {m.endpoint.component}
        for link in links:
            comps.add(link.source.component)
            comps.add(link.target.component)
        comp_sets.append(comps)
    shared_comps = set.intersection(*comp_sets)
    observed_present = {(m.endpoint, m.state) for m in problem.present}

    candidates: list[Disorder] = []
    for comp in model.components:
        if comp.name not in shared_comps:
            continue
        for fault in comp.faults:
            candidates.append(fault_disorder(comp.name, fault))
    for comp in model.components:
        for decl in comp.outputs:
            if decl.observable:
                continue
            ep = Endpoint(comp.name, decl.name)
            for state in decl.states:
                if (ep, state) in observed_present:
                    continue
                if all(poss.get((ep, state), _ZERO) > 0 for poss, _ in walks):
                    candidates.append(signature_disorder(ep, state))
    return tuple(candidates)


# -- predictions and discrimination ------------------------------------------


@dataclass(frozen=True)
class Expectation:
    """What a hypothesis says about one observable state."""

    kind: str  # "present" | "absent" | "none"
    degree: Fraction


def expected_manifestations(
    problem: DiagnosticProblem,
    disorder: Disorder,
    derivation: Derivation | None = None,
) -> dict[tuple[Endpoint, str], Expectation]:
    der = derivation or derive(problem.model, problem.context_map, disorder)
    expectations: dict[tuple[Endpoint, str], Expectation] = {}
    for ep in problem.model.observable_outputs():
        decl = problem.model.decl_of(ep)
        for state in decl.states:
            pro = der.entails(ep, state)
            con = der.excludes(ep, state)
            if pro == 0 and con == 0:
                expectations[(ep, state)] = Expectation("none", _ZERO)
            elif pro >= con:
                expectations[(ep, state)] = Expectation("present", pro)
            else:
                expectations[(ep, state)] = Expectation("absent", con)
    return expectations


def prediction_points(
    problem: DiagnosticProblem,
    candidates: tuple[Disorder, ...] | None = None,
) -> tuple[tuple[Endpoint, str, Fraction], ...]:
    """Unobserved output states some active hypothesis expects to show.

    Predictions stop at the first measurable point along each causal
    path: a consequence lying beyond an observable output is better
    tested by probing that output itself, so it never makes the list.
    Each point carries the strongest expectation any hypothesis holds
    for it.
    """
    model = problem.model
    frontier = SystemModel(
        model.scale,
        model.components,
        tuple(
            link
            for link in model.links
            if not model.decl_of(link.source).observable
        ),
    )
    if candidates is None:
        candidates = enumerate_candidates(problem)
    observed = {
        (m.endpoint, m.state) for m in problem.present + problem.absent
    }
    points: dict[tuple[Endpoint, str], Fraction] = {}
    for disorder in candidates:
        if consistency_degree(problem, disorder) == 0:
            continue
        der = derive(frontier, problem.context_map, disorder)
        for ep in model.observable_outputs():
            for state in model.decl_of(ep).states:
                if (ep, state) in observed:
                    continue
                weight = der.entails(ep, state)
                if weight > points.get((ep, state), _ZERO):
                    points[(ep, state)] = weight
    return tuple(
        (ep, state, weight)
        for (ep, state), weight in sorted(
            points.items(), key=lambda item: (str(item[0][0]), item[0][1])
        )
    )


def _covers(der: Derivation, other: Disorder) -> bool:
    """All of the other disorder's assumed states follow from this derivation."""
    if other.is_fault:
        return False
    return all(
        der.entails(a.endpoint, a.state) > 0
        for a in other.state_assumptions()
    )


def dominates(
    model: SystemModel,
    context: dict[str, str],
    first: Disorder,
    second: Disorder,
    first_derivation: Derivation | None = None,
    second_derivation: Derivation | None = None,
) -> bool:
    """Strictly upstream: the first entails the second's signature, not back."""
    if first.assumptions == second.assumptions:
        return False
    der1 = first_derivation or derive(model, context, first)
    if not _covers(der1, second):
        return False
    der2 = second_derivation or derive(model, context, second)
    return not _covers(der2, first)


# -- scored board -------------------------------------------------------------


@dataclass(frozen=True)
class CandidateReport:
    disorder: Disorder
    consistency: Fraction
    abduction: Fraction
    abductive: bool
    classification: str  # "identified_fault" | "upstream_signature" | "signature"
    dominated: tuple[str, ...]  # labels of candidates this one strictly covers

    @property
    def discarded(self) -> bool:
        return self.consistency == 0


_CLASS_RANK = {"identified_fault": 0, "upstream_signature": 1, "signature": 2}


@dataclass(frozen=True)
class DiagnosisReport:
    problem: DiagnosticProblem
    candidates: tuple[CandidateReport, ...]

    def by_label(self, label: str) -> CandidateReport:
        for report in self.candidates:
            if report.disorder.label == label:
                return report
        raise KeyError(label)


def diagnose(
    problem: DiagnosticProblem,
    candidates: tuple[Disorder, ...] | None = None,
) -> DiagnosisReport:
    """Score every candidate and rank the board.

    Ranking: coverage first (only fully consistent candidates may claim
    it), then consistency, then identified faults before upstream
    signatures before plain ones, then label.
    """
    if candidates is None:
        candidates = enumerate_candidates(problem)
    model, context = problem.model, problem.context_map
    derivations = {
        d.label: derive(model, context, d) for d in candidates
    }
    reports = []
    for d in candidates:
        der = derivations[d.label]
        consistency = consistency_degree(problem, d, der)
        abduction = abduction_degree(problem, d, der)
        abductive = consistency == 1 and abduction > 0
        dominated = tuple(
            other.label
            for other in candidates
            if dominates(
                model, context, d, other, der, derivations[other.label]
            )
        )
        if d.is_fault:
            classification = "identified_fault"
        elif dominated:
            classification = "upstream_signature"
        else:
            classification = "signature"
        reports.append(
            CandidateReport(
                d, consistency, abduction, abductive, classification, dominated
            )
        )
    reports.sort(
        key=lambda r: (
            -(r.abduction if r.consistency == 1 else _ZERO),
            -r.consistency,
            _CLASS_RANK[r.classification],
            r.disorder.label,
        )
    )
    return DiagnosisReport(problem, tuple(reports))


# -- probe suggestion ---------------------------------------------------------


@dataclass(frozen=True)
class ProbeSuggestion:
    endpoint: Endpoint
    state: str
    score: int  # hypothesis pairs this probe can tell apart
    strength: Fraction  # strongest expectation among active hypotheses


def suggest_probes(
    problem: DiagnosticProblem,
    candidates: tuple[Disorder, ...] | None = None,
) -> tuple[ProbeSuggestion, ...]:
    """Rank unobserved output states by discriminating power.

    A probe separates a pair of still-active hypotheses when they expect
    different things of it (present / absent / nothing).  Ties break on
    the strongest expectation, then on position name.
    """
    if candidates is None:
        candidates = enumerate_candidates(problem)
    model, context = problem.model, problem.context_map
    active: list[Disorder] = []
    expectations: list[dict] = []
    for d in candidates:
        der = derive(model, context, d)
        if consistency_degree(problem, d, der) == 0:
            continue
        active.append(d)
        expectations.append(expected_manifestations(problem, d, der))
    observed = {(m.endpoint, m.state) for m in problem.present} | {
        (m.endpoint, m.state) for m in problem.absent
    }
    suggestions = []
    for ep in model.observable_outputs():
        for state in model.decl_of(ep).states:
            if (ep, state) in observed:
                continue
            kinds = [exp[(ep, state)].kind for exp in expectations]
            score = 0
            for i in range(len(kinds)):
                for j in range(i + 1, len(kinds)):
                    if kinds[i] != kinds[j]:
                        score += 1
            if score == 0:
                continue
            strength = max(
                (exp[(ep, state)].degree for exp in expectations),
                default=_ZERO,
            )
            suggestions.append(ProbeSuggestion(ep, state, score, strength))
    suggestions.sort(
        key=lambda s: (-s.score, -s.strength, str(s.endpoint), s.state)
    )
    return tuple(suggestions)
