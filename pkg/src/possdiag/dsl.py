"""Textual model and observation language.

Model files declare an optional certainty scale, components, and links::

    scale { certain=1 likely=3/5 unlikely=2/5 possible=0 }
    component relay {
        config {ON OFF}
        input in: analog{ABS DEG};
        output out: analog{ABS DEG};
        rule [ON] in=ABS => out=ABS certain;
        rule [OFF] in=ABS =/> out=ABS certain;
    }
    link supply.out -> relay.in;

Observation files pin configuration positions and grade manifestations::

    context relay=ON;
    obs panel.signal = ONE certain;
    obs bus.out != ABS impossible;

``=>`` entails the consequent state, ``=/>`` excludes it.  A bare name in
a rule body is a declared fault mode.  Level names are case-insensitive;
an absence observation names how possible the state still is, so
``impossible`` asserts absence with full certainty.  Parsing recovers at
statement boundaries and reports every problem with file:line:column.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from .model import (
    BehaviorRule,
    Component,
    Diagnostic,
    Endpoint,
    FaultCondition,
    Link,
    Manifestation,
    ModelError,
    Observations,
    ParamDecl,
    SourceSpan,
    StateCondition,
    SystemModel,
    validate_model,
)
from .scale import DEFAULT_SCALE, Scale, ScaleError

__all__ = [
    "parse_model",
    "parse_observations",
    "serialize_model",
    "serialize_observations",
]

KEYWORDS = frozenset(
    {
        "scale",
        "component",
        "config",
        "input",
        "output",
        "observable",
        "fault",
        "rule",
        "link",
        "obs",
        "context",
    }
)

_TOKEN_RE = re.compile(
    r"""(?P<ws>\s+)
      | (?P<comment>\#[^\n]*)
      | (?P<number>\d+\.\d+|\d+/\d+|\d+)
      | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
      | (?P<op>=/>|=>|!=|->|[{}();:,.=&[\]])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    type: str  # "number" | "ident" | "op" | "eof"
    text: str
    line: int
    col: int


def _tokenize(
    text: str, file: str, diags: list[Diagnostic]
) -> list[Token]:
    tokens: list[Token] = []
    line, col, pos = 1, 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            diags.append(
                Diagnostic(
                    "error",
                    f"unexpected character {text[pos]!r}",
                    SourceSpan(file, line, col),
                )
            )
            pos += 1
            col += 1
            continue
        kind = match.lastgroup
        lexeme = match.group()
        if kind not in ("ws", "comment"):
            tokens.append(Token(kind, lexeme, line, col))
        newlines = lexeme.count("\n")
        if newlines:
            line += newlines
            col = len(lexeme) - lexeme.rfind("\n")
        else:
            col += len(lexeme)
        pos = match.end()
    tokens.append(Token("eof", "", line, col))
    return tokens


class _SyntaxProblem(Exception):
    def __init__(self, message: str, token: Token):
        super().__init__(message)
        self.message = message
        self.token = token


class _Parser:
    def __init__(self, text: str, file: str):
        self.file = file
        self.diags: list[Diagnostic] = []
        self.tokens = _tokenize(text, file, self.diags)
        self.pos = 0

    # -- token plumbing ---------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.type != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().type != "eof"

    def accept(self, text: str) -> Token | None:
        if self.at(text):
            return self.advance()
        return None

    def expect(self, text: str, context: str) -> Token:
        if self.at(text):
            return self.advance()
        tok = self.peek()
        shown = tok.text or "end of file"
        raise _SyntaxProblem(
            f"expected {text!r} {context}, found {shown!r}", tok
        )

    def expect_name(self, what: str) -> Token:
        tok = self.peek()
        if tok.type != "ident":
            shown = tok.text or "end of file"
            raise _SyntaxProblem(f"expected {what}, found {shown!r}", tok)
        if tok.text in KEYWORDS:
            raise _SyntaxProblem(
                f"{tok.text!r} is a reserved word and cannot name {what}", tok
            )
        return self.advance()

    def span(self, tok: Token) -> SourceSpan:
        return SourceSpan(self.file, tok.line, tok.col)

    def report(self, message: str, tok: Token) -> None:
        self.diags.append(Diagnostic("error", message, self.span(tok)))

    def recover(self, stop_words: frozenset[str]) -> None:
        """Skip to the next statement boundary, balancing nested braces."""
        depth = 0
        while True:
            tok = self.peek()
            if tok.type == "eof":
                return
            if depth == 0:
                if tok.text == "}":
                    return
                if tok.text == ";":
                    self.advance()
                    return
                if tok.text in stop_words:
                    return
            if tok.text == "{":
                depth += 1
            elif tok.text == "}":
                depth -= 1
            self.advance()

    # -- shared pieces ------------------------------------------------------

    def parse_endpoint(self) -> Endpoint:
        comp = self.expect_name("a component name")
        self.expect(".", "between component and parameter")
        param = self.expect_name("a parameter name")
        return Endpoint(comp.text, param.text)

    def parse_level(self, scale: Scale, absent: bool) -> Fraction:
        tok = self.expect_name("a certainty level")
        try:
            if absent:
                return scale.absence_degree(tok.text).value
            return scale.value_of(tok.text)
        except ScaleError as exc:
            raise _SyntaxProblem(str(exc), tok) from exc


_TOP_WORDS = frozenset({"scale", "component", "link"})
_ITEM_WORDS = frozenset({"config", "input", "output", "fault", "rule"})
_OBS_WORDS = frozenset({"obs", "context"})


def parse_model(
    text: str, file: str = "<model>"
) -> tuple[SystemModel | None, list[Diagnostic]]:
    """Parse a model file.

    Returns the model (or ``None`` when construction was impossible) plus
    every diagnostic gathered: syntax errors, structural errors, and the
    static validation findings of :func:`validate_model`.
    """
    p = _Parser(text, file)
    scale: Scale | None = None
    components: list[Component] = []
    links: list[Link] = []
    saw_component = False
    while p.peek().type != "eof":
        tok = p.peek()
        try:
            if tok.text == "scale":
                block = _parse_scale_block(p)
                if scale is not None:
                    p.report("duplicate scale block", tok)
                elif saw_component:
                    p.report(
                        "the scale block must precede all components", tok
                    )
                else:
                    scale = block
            elif tok.text == "component":
                saw_component = True
                comp = _parse_component(p, scale or DEFAULT_SCALE)
                if comp is not None:
                    components.append(comp)
            elif tok.text == "link":
                links.extend(_parse_link(p))
            else:
                shown = tok.text or "end of file"
                p.advance()
                raise _SyntaxProblem(
                    f"expected 'scale', 'component' or 'link', found"
                    f" {shown!r}",
                    tok,
                )
        except _SyntaxProblem as exc:
            p.report(exc.message, exc.token)
            p.recover(_TOP_WORDS)
    try:
        model = SystemModel(scale or DEFAULT_SCALE, tuple(components), tuple(links))
    except ModelError as exc:
        p.diags.append(Diagnostic("error", str(exc), exc.span))
        return None, p.diags
    p.diags.extend(validate_model(model))
    return model, p.diags


def _parse_scale_block(p: _Parser) -> Scale | None:
    start = p.expect("scale", "to open the scale block")
    p.expect("{", "after 'scale'")
    pairs: list[tuple[str, Fraction]] = []
    while not p.at("}") and p.peek().type != "eof":
        name = p.expect_name("a level name")
        p.expect("=", "after the level name")
        num = p.peek()
        if num.type != "number":
            raise _SyntaxProblem(
                f"expected a number, found {num.text or 'end of file'!r}", num
            )
        p.advance()
        pairs.append((name.text, Fraction(num.text)))
    p.expect("}", "to close the scale block")
    try:
        return Scale.from_pairs(pairs)
    except ScaleError as exc:
        p.report(str(exc), start)
        return None


def _parse_component(p: _Parser, scale: Scale) -> Component | None:
    start = p.expect("component", "to open a component")
    name = p.expect_name("a component name")
    p.expect("{", "after the component name")
    params: list[ParamDecl] = []
    faults: list[str] = []
    rules: list[tuple[BehaviorRule, Token]] = []
    config: tuple[str, ...] | None = None
    while not p.at("}") and p.peek().type != "eof":
        tok = p.peek()
        try:
            if tok.text == "config":
                values = _parse_config(p)
                if config is not None:
                    p.report("duplicate config block", tok)
                else:
                    config = values
            elif tok.text in ("input", "output"):
                params.append(_parse_param(p))
            elif tok.text == "fault":
                p.advance()
                faults.append(p.expect_name("a fault mode name").text)
                p.expect(";", "after the fault mode")
            elif tok.text == "rule":
                rules.append((_parse_rule(p, scale), tok))
            else:
                shown = tok.text or "end of file"
                p.advance()
                raise _SyntaxProblem(
                    "expected 'config', 'input', 'output', 'fault' or"
                    f" 'rule', found {shown!r}",
                    tok,
                )
        except _SyntaxProblem as exc:
            p.report(exc.message, exc.token)
            p.recover(_ITEM_WORDS)
    p.expect("}", "to close the component")
    try:
        shell = Component(
            name.text,
            tuple(params),
            rules=(),
            faults=tuple(faults),
            config_states=config,
            span=p.span(start),
        )
    except ModelError as exc:
        p.diags.append(Diagnostic("error", str(exc), exc.span))
        return None
    kept: list[BehaviorRule] = []
    for rule, tok in rules:
        try:
            Component(
                shell.name,
                shell.params,
                rules=(rule,),
                faults=shell.faults,
                config_states=shell.config_states,
            )
        except ModelError as exc:
            p.diags.append(Diagnostic("error", str(exc), exc.span))
            continue
        kept.append(rule)
    return Component(
        shell.name,
        shell.params,
        rules=tuple(kept),
        faults=shell.faults,
        config_states=shell.config_states,
        span=p.span(start),
    )


def _parse_config(p: _Parser) -> tuple[str, ...]:
    p.expect("config", "to open the config block")
    p.expect("{", "after 'config'")
    values: list[str] = []
    while not p.at("}") and p.peek().type != "eof":
        values.append(p.expect_name("a configuration position").text)
    p.expect("}", "to close the config block")
    return tuple(values)


def _parse_param(p: _Parser) -> ParamDecl:
    direction = p.advance().text  # "input" | "output"
    start = p.peek()
    name = p.expect_name("a parameter name")
    p.expect(":", "after the parameter name")
    kind = p.expect_name("a value family").text
    p.expect("{", "before the state list")
    states: list[str] = []
    while not p.at("}") and p.peek().type != "eof":
        states.append(p.expect_name("a state name").text)
    p.expect("}", "to close the state list")
    observable = p.accept("observable") is not None
    p.expect(";", "after the parameter declaration")
    return ParamDecl(
        name.text, direction, kind, tuple(states), observable, p.span(start)
    )


def _parse_rule(p: _Parser, scale: Scale) -> BehaviorRule:
    start = p.expect("rule", "to open a rule")
    guard: str | None = None
    if p.accept("["):
        guard = p.expect_name("a configuration position").text
        p.expect("]", "to close the configuration guard")
    antecedents: list = []
    while True:
        name = p.expect_name("an input state or fault mode")
        if p.accept("="):
            state = p.expect_name("a state name")
            antecedents.append(StateCondition(name.text, state.text))
        else:
            antecedents.append(FaultCondition(name.text))
        if not p.accept("&"):
            break
    if p.accept("=>"):
        kind = "entails"
    elif p.accept("=/>"):
        kind = "excludes"
    else:
        tok = p.peek()
        raise _SyntaxProblem(
            f"expected '=>' or '=/>', found {tok.text or 'end of file'!r}",
            tok,
        )
    out = p.expect_name("an output parameter")
    p.expect("=", "after the output parameter")
    state = p.expect_name("a state name")
    weight_tok = p.peek()
    weight = p.parse_level(scale, absent=False)
    p.expect(";", "after the rule")
    try:
        return BehaviorRule(
            tuple(antecedents),
            StateCondition(out.text, state.text),
            weight,
            kind=kind,
            config_guard=guard,
            span=p.span(start),
        )
    except ModelError as exc:
        raise _SyntaxProblem(str(exc), weight_tok) from exc


def _parse_link(p: _Parser) -> list[Link]:
    p.expect("link", "to open a link")
    source = p.parse_endpoint()
    p.expect("->", "between link endpoints")
    links = []
    while True:
        target_tok = p.peek()
        target = p.parse_endpoint()
        links.append(Link(source, target, p.span(target_tok)))
        if not p.accept(","):
            break
    p.expect(";", "after the link")
    return links


def parse_observations(
    text: str, scale: Scale, file: str = "<observations>"
) -> tuple[Observations | None, list[Diagnostic]]:
    """Parse an observation file against a model's scale."""
    p = _Parser(text, file)
    context: list[tuple[str, str]] = []
    manifestations: list[Manifestation] = []
    while p.peek().type != "eof":
        tok = p.peek()
        try:
            if tok.text == "context":
                p.advance()
                while not p.at(";") and p.peek().type != "eof":
                    comp = p.expect_name("a component name")
                    p.expect("=", "after the component name")
                    value = p.expect_name("a configuration position")
                    context.append((comp.text, value.text))
                p.expect(";", "after the context")
            elif tok.text == "obs":
                p.advance()
                ep_tok = p.peek()
                endpoint = p.parse_endpoint()
                if p.accept("="):
                    present = True
                elif p.accept("!="):
                    present = False
                else:
                    bad = p.peek()
                    raise _SyntaxProblem(
                        f"expected '=' or '!=', found"
                        f" {bad.text or 'end of file'!r}",
                        bad,
                    )
                state = p.expect_name("a state name")
                degree = p.parse_level(scale, absent=not present)
                p.expect(";", "after the observation")
                try:
                    manifestations.append(
                        Manifestation(
                            endpoint,
                            state.text,
                            degree,
                            present,
                            p.span(ep_tok),
                        )
                    )
                except ModelError as exc:
                    p.diags.append(Diagnostic("error", str(exc), exc.span))
            else:
                shown = tok.text or "end of file"
                p.advance()
                raise _SyntaxProblem(
                    f"expected 'context' or 'obs', found {shown!r}", tok
                )
        except _SyntaxProblem as exc:
            p.report(exc.message, exc.token)
            p.recover(_OBS_WORDS)
    try:
        observations = Observations(tuple(context), tuple(manifestations))
    except ModelError as exc:
        p.diags.append(Diagnostic("error", str(exc), exc.span))
        return None, p.diags
    return observations, p.diags


# -- serialization ----------------------------------------------------------


def serialize_model(model: SystemModel) -> str:
    out: list[str] = []
    levels = " ".join(f"{lv.name}={lv.value}" for lv in model.scale.levels)
    out.append(f"scale {{ {levels} }}")
    for comp in model.components:
        out.append("")
        out.append(f"component {comp.name} {{")
        if comp.config_states is not None:
            out.append(f"    config {{{' '.join(comp.config_states)}}}")
        for param in comp.params:
            states = " ".join(param.states)
            suffix = " observable" if param.observable else ""
            out.append(
                f"    {param.direction} {param.name}:"
                f" {param.kind}{{{states}}}{suffix};"
            )
        for fault in comp.faults:
            out.append(f"    fault {fault};")
        for rule in comp.rules:
            out.append(f"    {_rule_text(rule, model.scale)}")
        out.append("}")
    if model.links:
        out.append("")
    for link in model.links:
        out.append(f"link {link.source} -> {link.target};")
    return "\n".join(out) + "\n"


def _rule_text(rule: BehaviorRule, scale: Scale) -> str:
    guard = f"[{rule.config_guard}] " if rule.config_guard else ""
    parts = []
    for cond in rule.antecedents:
        if isinstance(cond, StateCondition):
            parts.append(f"{cond.param}={cond.state}")
        else:
            parts.append(cond.fault)
    arrow = "=>" if rule.kind == "entails" else "=/>"
    level = scale.name_of(rule.weight)
    return (
        f"rule {guard}{' & '.join(parts)} {arrow}"
        f" {rule.consequent.param}={rule.consequent.state} {level};"
    )


def serialize_observations(observations: Observations, scale: Scale) -> str:
    out: list[str] = []
    if observations.context:
        pairs = " ".join(f"{c}={v}" for c, v in observations.context)
        out.append(f"context {pairs};")
    for m in observations.manifestations:
        if m.present:
            out.append(
                f"obs {m.endpoint} = {m.state} {scale.name_of(m.degree)};"
            )
        else:
            possibility = 1 - m.degree
            name = (
                "impossible"
                if possibility == 0
                else scale.name_of(possibility)
            )
            out.append(f"obs {m.endpoint} != {m.state} {name};")
    return "\n".join(out) + "\n"
