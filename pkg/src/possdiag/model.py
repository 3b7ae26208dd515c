"""Component-network models.

A system is a set of components wired by directed links.  Each component
declares typed input/output parameters whose qualitative states are the
vocabulary of behaviour rules: weighted clauses saying that a
conjunction of input states (and fault modes) entails -- or excludes --
an output state, to some certainty on the model's scale.  Observations
pin a configuration context and grade the presence or absence of output
states; a diagnostic problem bundles both with the model.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

from .scale import Scale

__all__ = [
    "BehaviorRule",
    "Component",
    "Diagnostic",
    "DiagnosticProblem",
    "Disorder",
    "Endpoint",
    "FaultAssumption",
    "FaultCondition",
    "Link",
    "Manifestation",
    "ModelError",
    "Observations",
    "ParamDecl",
    "SourceSpan",
    "StateAssumption",
    "StateCondition",
    "SystemModel",
    "compose_problem",
    "fault_disorder",
    "signature_disorder",
    "validate_model",
]


class ModelError(ValueError):
    """Structural problem in a model, observation set, or disorder."""

    def __init__(self, message: str, span: "SourceSpan | None" = None):
        super().__init__(message)
        self.span = span


@dataclass(frozen=True)
class SourceSpan:
    """Position of a declaration in its source file (1-based)."""

    file: str
    line: int
    column: int

    def __str__(self) -> str:
        return f"{self.file}:{self.line}:{self.column}"


@dataclass(frozen=True)
class Diagnostic:
    severity: str  # "error" | "warning"
    message: str
    span: SourceSpan | None = None

    def __str__(self) -> str:
        where = f"{self.span}: " if self.span else ""
        return f"{where}{self.severity}: {self.message}"


@dataclass(frozen=True)
class Endpoint:
    """A component parameter, addressed as ``component.param``."""

    component: str
    param: str

    def __str__(self) -> str:
        return f"{self.component}.{self.param}"


@dataclass(frozen=True)
class StateCondition:
    """``param = state`` within the owning component."""

    param: str
    state: str


@dataclass(frozen=True)
class FaultCondition:
    """A declared fault mode of the owning component."""

    fault: str


Condition = Union[StateCondition, FaultCondition]


@dataclass(frozen=True)
class ParamDecl:
    name: str
    direction: str  # "input" | "output"
    kind: str  # value family, e.g. "analog" or "digital"
    states: tuple[str, ...]
    observable: bool = False
    span: SourceSpan | None = field(compare=False, default=None)

    def __post_init__(self) -> None:
        if self.direction not in ("input", "output"):
            raise ModelError(
                f"parameter {self.name!r}: direction must be input or output",
                self.span,
            )
        if not self.states:
            raise ModelError(
                f"parameter {self.name!r} declares no states", self.span
            )
        if len(set(self.states)) != len(self.states):
            raise ModelError(
                f"parameter {self.name!r} repeats a state", self.span
            )
        if self.observable and self.direction != "output":
            raise ModelError(
                f"parameter {self.name!r}: only outputs can be observable",
                self.span,
            )


@dataclass(frozen=True)
class BehaviorRule:
    """A weighted clause over one component's parameters.

    ``entails`` rules support the consequent state, ``excludes`` rules
    rule it out.  A config guard restricts the rule to one configuration
    position of the component.
    """

    antecedents: tuple[Condition, ...]
    consequent: StateCondition
    weight: Fraction
    kind: str = "entails"  # "entails" | "excludes"
    config_guard: str | None = None
    span: SourceSpan | None = field(compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "weight", Fraction(self.weight))
        if self.kind not in ("entails", "excludes"):
            raise ModelError(f"unknown rule kind {self.kind!r}", self.span)
        if not self.antecedents:
            raise ModelError("a rule needs at least one antecedent", self.span)
        if not 0 < self.weight <= 1:
            raise ModelError(
                f"rule weight must lie in (0, 1], got {self.weight}", self.span
            )


@dataclass(frozen=True)
class Component:
    name: str
    params: tuple[ParamDecl, ...]
    rules: tuple[BehaviorRule, ...] = ()
    faults: tuple[str, ...] = ()
    config_states: tuple[str, ...] | None = None
    span: SourceSpan | None = field(compare=False, default=None)
    _param_index: Mapping[str, ParamDecl] = field(
        init=False, compare=False, repr=False, default=None
    )

    def __post_init__(self) -> None:
        index: dict[str, ParamDecl] = {}
        for p in self.params:
            if p.name in index:
                raise ModelError(
                    f"component {self.name!r} repeats parameter {p.name!r}",
                    p.span or self.span,
                )
            index[p.name] = p
        object.__setattr__(self, "_param_index", index)
        if len(set(self.faults)) != len(self.faults):
            raise ModelError(
                f"component {self.name!r} repeats a fault mode", self.span
            )
        if self.config_states is not None:
            if len(self.config_states) < 2:
                raise ModelError(
                    f"component {self.name!r}: a configuration needs at least"
                    " two positions",
                    self.span,
                )
            if len(set(self.config_states)) != len(self.config_states):
                raise ModelError(
                    f"component {self.name!r} repeats a configuration position",
                    self.span,
                )
        for rule in self.rules:
            self._check_rule(rule)

    def _check_rule(self, rule: BehaviorRule) -> None:
        where = rule.span or self.span
        if rule.config_guard is not None:
            if self.config_states is None:
                raise ModelError(
                    f"component {self.name!r} has no configuration but a rule"
                    f" is guarded by {rule.config_guard!r}",
                    where,
                )
            if rule.config_guard not in self.config_states:
                raise ModelError(
                    f"unknown configuration position {rule.config_guard!r}"
                    f" of component {self.name!r}",
                    where,
                )
        for cond in rule.antecedents:
            if isinstance(cond, FaultCondition):
                if cond.fault not in self.faults:
                    raise ModelError(
                        f"unknown fault mode {cond.fault!r} of component"
                        f" {self.name!r}",
                        where,
                    )
                continue
            decl = self._param_index.get(cond.param)
            if decl is None:
                raise ModelError(
                    f"unknown parameter {cond.param!r} of component"
                    f" {self.name!r}",
                    where,
                )
            if decl.direction != "input":
                raise ModelError(
                    f"rule antecedent {cond.param!r} of component"
                    f" {self.name!r} is not an input",
                    where,
                )
            if cond.state not in decl.states:
                raise ModelError(
                    f"parameter {self.name}.{cond.param} has no state"
                    f" {cond.state!r}",
                    where,
                )
        decl = self._param_index.get(rule.consequent.param)
        if decl is None:
            raise ModelError(
                f"unknown parameter {rule.consequent.param!r} of component"
                f" {self.name!r}",
                where,
            )
        if decl.direction != "output":
            raise ModelError(
                f"rule consequent {rule.consequent.param!r} of component"
                f" {self.name!r} is not an output",
                where,
            )
        if rule.consequent.state not in decl.states:
            raise ModelError(
                f"parameter {self.name}.{rule.consequent.param} has no state"
                f" {rule.consequent.state!r}",
                where,
            )

    def param(self, name: str) -> ParamDecl:
        decl = self._param_index.get(name)
        if decl is None:
            raise ModelError(
                f"component {self.name!r} has no parameter {name!r}"
            )
        return decl

    def has_param(self, name: str) -> bool:
        return name in self._param_index

    @property
    def inputs(self) -> tuple[ParamDecl, ...]:
        return tuple(p for p in self.params if p.direction == "input")

    @property
    def outputs(self) -> tuple[ParamDecl, ...]:
        return tuple(p for p in self.params if p.direction == "output")


@dataclass(frozen=True)
class Link:
    """Directed wire copying one output's state onto one input."""

    source: Endpoint
    target: Endpoint
    span: SourceSpan | None = field(compare=False, default=None)

    def __str__(self) -> str:
        return f"{self.source} -> {self.target}"


@dataclass(frozen=True)
class SystemModel:
    scale: Scale
    components: tuple[Component, ...]
    links: tuple[Link, ...]
    _comp_index: Mapping[str, Component] = field(
        init=False, compare=False, repr=False, default=None
    )
    _incoming: Mapping[Endpoint, tuple[Link, ...]] = field(
        init=False, compare=False, repr=False, default=None
    )
    _outgoing: Mapping[Endpoint, tuple[Link, ...]] = field(
        init=False, compare=False, repr=False, default=None
    )

    def __post_init__(self) -> None:
        comp_index: dict[str, Component] = {}
        for comp in self.components:
            if comp.name in comp_index:
                raise ModelError(
                    f"duplicate component name {comp.name!r}", comp.span
                )
            comp_index[comp.name] = comp
        incoming: dict[Endpoint, list[Link]] = {}
        outgoing: dict[Endpoint, list[Link]] = {}
        for link in self.links:
            src = self._endpoint_decl(comp_index, link.source, link.span)
            dst = self._endpoint_decl(comp_index, link.target, link.span)
            if src.direction != "output":
                raise ModelError(
                    f"link source {link.source} is not an output", link.span
                )
            if dst.direction != "input":
                raise ModelError(
                    f"link target {link.target} is not an input", link.span
                )
            outgoing.setdefault(link.source, []).append(link)
            incoming.setdefault(link.target, []).append(link)
        object.__setattr__(self, "_comp_index", comp_index)
        object.__setattr__(
            self, "_incoming", {k: tuple(v) for k, v in incoming.items()}
        )
        object.__setattr__(
            self, "_outgoing", {k: tuple(v) for k, v in outgoing.items()}
        )

    @staticmethod
    def _endpoint_decl(
        comps: Mapping[str, Component], ep: Endpoint, span: SourceSpan | None
    ) -> ParamDecl:
        comp = comps.get(ep.component)
        if comp is None:
            raise ModelError(f"unknown component {ep.component!r}", span)
        if not comp.has_param(ep.param):
            raise ModelError(
                f"component {ep.component!r} has no parameter {ep.param!r}",
                span,
            )
        return comp.param(ep.param)

    def component(self, name: str) -> Component:
        comp = self._comp_index.get(name)
        if comp is None:
            raise ModelError(f"unknown component {name!r}")
        return comp

    def has_component(self, name: str) -> bool:
        return name in self._comp_index

    def decl_of(self, endpoint: Endpoint) -> ParamDecl:
        return self.component(endpoint.component).param(endpoint.param)

    def incoming(self, endpoint: Endpoint) -> tuple[Link, ...]:
        return self._incoming.get(endpoint, ())

    def outgoing(self, endpoint: Endpoint) -> tuple[Link, ...]:
        return self._outgoing.get(endpoint, ())

    def endpoints(self) -> Iterable[tuple[Endpoint, ParamDecl]]:
        for comp in self.components:
            for decl in comp.params:
                yield Endpoint(comp.name, decl.name), decl

    def observable_outputs(self) -> tuple[Endpoint, ...]:
        return tuple(
            ep
            for ep, decl in self.endpoints()
            if decl.direction == "output" and decl.observable
        )

    def unobservable_outputs(self) -> tuple[Endpoint, ...]:
        return tuple(
            ep
            for ep, decl in self.endpoints()
            if decl.direction == "output" and not decl.observable
        )


def validate_model(model: SystemModel) -> list[Diagnostic]:
    """Static checks beyond structural integrity.

    Errors: more than one driver per input, value-family mismatch across
    a link, a link source state missing from the target's domain, a rule
    weight off the scale, one rule set both entailing and excluding the
    same consequent under the same guard and antecedents.  Warnings:
    dependency cycles.
    """
    diags: list[Diagnostic] = []
    for ep, decl in model.endpoints():
        drivers = model.incoming(ep)
        if len(drivers) > 1:
            diags.append(
                Diagnostic(
                    "error",
                    f"input {ep} is driven by {len(drivers)} links",
                    drivers[1].span,
                )
            )
    for link in model.links:
        src = model.decl_of(link.source)
        dst = model.decl_of(link.target)
        if src.kind != dst.kind:
            diags.append(
                Diagnostic(
                    "error",
                    f"link {link} connects {src.kind} to {dst.kind}",
                    link.span,
                )
            )
        missing = [s for s in src.states if s not in dst.states]
        if missing:
            diags.append(
                Diagnostic(
                    "error",
                    f"link {link}: target cannot take state"
                    f" {', '.join(missing)}",
                    link.span,
                )
            )
    for comp in model.components:
        seen: dict[tuple, BehaviorRule] = {}
        for rule in comp.rules:
            if not model.scale.has_value(rule.weight):
                diags.append(
                    Diagnostic(
                        "error",
                        f"rule weight {rule.weight} is not a level of the"
                        " model scale",
                        rule.span,
                    )
                )
            key = (
                rule.config_guard,
                frozenset(rule.antecedents),
                rule.consequent,
            )
            prior = seen.get(key)
            if prior is not None and prior.kind != rule.kind:
                diags.append(
                    Diagnostic(
                        "error",
                        f"component {comp.name!r} both entails and excludes"
                        f" {rule.consequent.param}={rule.consequent.state}"
                        " from the same antecedents",
                        rule.span,
                    )
                )
            seen.setdefault(key, rule)
    diags.extend(_cycle_warnings(model))
    return diags


def _cycle_warnings(model: SystemModel) -> list[Diagnostic]:
    # Dependency edges: rule antecedent param -> consequent param, plus links.
    edges: dict[Endpoint, set[Endpoint]] = {}
    for comp in model.components:
        for rule in comp.rules:
            dst = Endpoint(comp.name, rule.consequent.param)
            for cond in rule.antecedents:
                if isinstance(cond, StateCondition):
                    edges.setdefault(Endpoint(comp.name, cond.param), set()).add(
                        dst
                    )
    for link in model.links:
        edges.setdefault(link.source, set()).add(link.target)

    WHITE, GREY, BLACK = 0, 1, 2
    colour: dict[Endpoint, int] = {}
    cyclic: set[Endpoint] = set()

    def visit(node: Endpoint) -> None:
        colour[node] = GREY
        for nxt in edges.get(node, ()):
            state = colour.get(nxt, WHITE)
            if state == GREY:
                cyclic.add(nxt)
            elif state == WHITE:
                visit(nxt)
        colour[node] = BLACK

    for node in list(edges):
        if colour.get(node, WHITE) == WHITE:
            visit(node)
    return [
        Diagnostic(
            "warning", f"dependency cycle through {ep}", model.decl_of(ep).span
        )
        for ep in sorted(cyclic, key=str)
    ]


# -- observations ---------------------------------------------------------


@dataclass(frozen=True)
class Manifestation:
    """A graded observation of one output state.

    ``present`` carries the certainty that the state holds; an absence
    observation carries the certainty that it does not.
    """

    endpoint: Endpoint
    state: str
    degree: Fraction
    present: bool = True
    span: SourceSpan | None = field(compare=False, default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "degree", Fraction(self.degree))
        if not 0 < self.degree <= 1:
            raise ModelError(
                f"observation degree must lie in (0, 1], got {self.degree}",
                self.span,
            )

    def __str__(self) -> str:
        op = "=" if self.present else "!="
        return f"{self.endpoint} {op} {self.state} @{self.degree}"


@dataclass(frozen=True)
class Observations:
    """A configuration context plus graded manifestations."""

    context: tuple[tuple[str, str], ...] = ()
    manifestations: tuple[Manifestation, ...] = ()

    def __post_init__(self) -> None:
        object.__setattr__(self, "context", tuple(self.context))
        seen = set()
        for name, _ in self.context:
            if name in seen:
                raise ModelError(f"context sets {name!r} twice")
            seen.add(name)

    @property
    def context_map(self) -> dict[str, str]:
        return dict(self.context)


@dataclass(frozen=True)
class DiagnosticProblem:
    """A validated model + context + split present/absent observations."""

    model: SystemModel
    context: tuple[tuple[str, str], ...]
    present: tuple[Manifestation, ...]
    absent: tuple[Manifestation, ...]

    @property
    def context_map(self) -> dict[str, str]:
        return dict(self.context)

    def with_observation(self, obs: Manifestation) -> "DiagnosticProblem":
        extended = Observations(
            self.context,
            self.present + self.absent + (obs,),
        )
        return compose_problem(self.model, extended)


def compose_problem(
    model: SystemModel, observations: Observations
) -> DiagnosticProblem:
    """Check observations against the model and split them by polarity."""
    ctx = observations.context_map
    for name, value in ctx.items():
        if not model.has_component(name):
            raise ModelError(f"context names unknown component {name!r}")
        comp = model.component(name)
        if comp.config_states is None:
            raise ModelError(
                f"component {name!r} has no configuration to set"
            )
        if value not in comp.config_states:
            raise ModelError(
                f"component {name!r} has no configuration position {value!r}"
            )
    for comp in model.components:
        if comp.config_states is not None and comp.name not in ctx:
            raise ModelError(
                f"component {comp.name!r} requires a configuration entry"
            )

    present: list[Manifestation] = []
    absent: list[Manifestation] = []
    present_by_ep: dict[Endpoint, Manifestation] = {}
    seen: set[tuple[Endpoint, str, bool]] = set()
    for m in observations.manifestations:
        decl = model.decl_of(m.endpoint)
        if decl.direction != "output" or not decl.observable:
            raise ModelError(
                f"{m.endpoint} is not an observable output", m.span
            )
        if m.state not in decl.states:
            raise ModelError(
                f"parameter {m.endpoint} has no state {m.state!r}", m.span
            )
        key = (m.endpoint, m.state, m.present)
        if key in seen:
            raise ModelError(f"duplicate observation of {m}", m.span)
        seen.add(key)
        if (m.endpoint, m.state, not m.present) in seen:
            raise ModelError(
                f"{m.endpoint} = {m.state} observed both present and absent",
                m.span,
            )
        if m.present:
            clash = present_by_ep.get(m.endpoint)
            if clash is not None:
                raise ModelError(
                    f"{m.endpoint} observed in two states"
                    f" ({clash.state} and {m.state})",
                    m.span,
                )
            present_by_ep[m.endpoint] = m
            present.append(m)
        else:
            absent.append(m)
    return DiagnosticProblem(model, observations.context, tuple(present), tuple(absent))


# -- disorders ------------------------------------------------------------


@dataclass(frozen=True)
class StateAssumption:
    """Assume an output parameter sits in a given state."""

    endpoint: Endpoint
    state: str

    def __str__(self) -> str:
        return f"{self.endpoint}={self.state}"


@dataclass(frozen=True)
class FaultAssumption:
    """Assume a declared fault mode of a component."""

    component: str
    fault: str

    def __str__(self) -> str:
        return f"{self.component}:{self.fault}"


Assumption = Union[StateAssumption, FaultAssumption]


@dataclass(frozen=True)
class Disorder:
    """A candidate explanation: a set of assumed states / fault modes."""

    label: str
    assumptions: frozenset

    @property
    def is_fault(self) -> bool:
        return any(isinstance(a, FaultAssumption) for a in self.assumptions)

    def state_assumptions(self) -> tuple[StateAssumption, ...]:
        return tuple(
            sorted(
                (a for a in self.assumptions if isinstance(a, StateAssumption)),
                key=str,
            )
        )

    def __str__(self) -> str:
        return self.label


def signature_disorder(endpoint: Endpoint, state: str) -> Disorder:
    return Disorder(
        label=f"{endpoint}={state}",
        assumptions=frozenset({StateAssumption(endpoint, state)}),
    )


def fault_disorder(component: str, fault: str) -> Disorder:
    return Disorder(
        label=f"{component}:{fault}",
        assumptions=frozenset({FaultAssumption(component, fault)}),
    )


def check_disorder(model: SystemModel, disorder: Disorder) -> None:
    """Raise unless every assumption refers to a declared state or fault."""
    for a in disorder.assumptions:
        if isinstance(a, StateAssumption):
            decl = model.decl_of(a.endpoint)
            if decl.direction != "output":
                raise ModelError(
                    f"disorder {disorder.label!r}: {a.endpoint} is not an"
                    " output"
                )
            if a.state not in decl.states:
                raise ModelError(
                    f"disorder {disorder.label!r}: {a.endpoint} has no state"
                    f" {a.state!r}"
                )
        else:
            comp = model.component(a.component)
            if a.fault not in comp.faults:
                raise ModelError(
                    f"disorder {disorder.label!r}: component {a.component!r}"
                    f" has no fault mode {a.fault!r}"
                )
