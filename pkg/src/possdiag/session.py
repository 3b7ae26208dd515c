"""Interactive fault-isolation sessions with a replayable journal.

A session anchors the hypothesis board at creation time: the candidate
set is enumerated once from the initial observations, and later probe
results only re-score, discard, or discriminate those candidates.  Every
accepted change is appended to a JSONL journal whose lines are pure
functions of the inputs — no clocks, no random ids — so replaying a
journal rebuilds the session and re-derives the identical board at every
revision, verified hash by hash.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

from .engine import (
    ProbeSuggestion,
    derive,
    diagnose,
    enumerate_candidates,
    expected_manifestations,
    suggest_probes,
)
from .dsl import parse_model, parse_observations
from .model import (
    Disorder,
    DiagnosticProblem,
    Endpoint,
    Manifestation,
    ModelError,
    compose_problem,
)
from .scale import Degree

__all__ = [
    "BoardRow",
    "BoardSnapshot",
    "ExpectedPoint",
    "Session",
    "SessionError",
    "add_observation",
    "board_fingerprint",
    "create_session",
    "get_board",
    "record_verdict",
    "replay_journal",
    "what_if",
]


class SessionError(ValueError):
    """Bad journal, unknown hypothesis, or an unusable observation file."""


def _canonical(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, separators=(",", ":"))


def _sha256(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


# -- board snapshots ---------------------------------------------------------


@dataclass(frozen=True)
class ExpectedPoint:
    """One observable state a hypothesis commits to."""

    endpoint: Endpoint
    state: str
    kind: str  # "present" | "absent"
    degree: Degree

    def to_json(self) -> dict:
        return {
            "component": self.endpoint.component,
            "param": self.endpoint.param,
            "state": self.state,
            "kind": self.kind,
            "degree": self.degree.to_json(),
        }


@dataclass(frozen=True)
class BoardRow:
    label: str
    classification: str
    status: str  # "active" | "discarded"
    consistency: Degree
    abduction: Degree
    abductive: bool
    dominated: tuple[str, ...]
    expected: tuple[ExpectedPoint, ...]
    killed_by: str | None = None
    verdict: str | None = None  # operator annotation, never an engine discard

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "classification": self.classification,
            "status": self.status,
            "consistency": self.consistency.to_json(),
            "abduction": self.abduction.to_json(),
            "abductive": self.abductive,
            "dominated": list(self.dominated),
            "expected": [point.to_json() for point in self.expected],
            "killed_by": self.killed_by,
            "verdict": self.verdict,
        }


@dataclass(frozen=True)
class BoardSnapshot:
    session_id: str
    revision: int
    rows: tuple[BoardRow, ...]
    probes: tuple[ProbeSuggestion, ...]

    def row(self, label: str) -> BoardRow:
        for row in self.rows:
            if row.label == label:
                return row
        raise SessionError(f"no hypothesis labelled {label!r}")

    def probe_json(self, probe: ProbeSuggestion, scale) -> dict:
        return {
            "component": probe.endpoint.component,
            "param": probe.endpoint.param,
            "state": probe.state,
            "score": probe.score,
            "strength": scale.degree_of_value(probe.strength).to_json(),
        }

    def to_json(self, scale) -> dict:
        return {
            "session_id": self.session_id,
            "revision": self.revision,
            "rows": [row.to_json() for row in self.rows],
            "probes": [self.probe_json(p, scale) for p in self.probes],
        }


def board_fingerprint(snapshot: BoardSnapshot, scale) -> str:
    """Content hash of a snapshot; equal hashes mean equal boards."""
    return _sha256(_canonical(snapshot.to_json(scale)))


# -- sessions ----------------------------------------------------------------


@dataclass
class Session:
    id: str
    model_text: str
    observations_text: str
    problem: DiagnosticProblem
    candidates: tuple[Disorder, ...]
    revision: int = 0
    journal: list[str] = field(default_factory=list)
    killed_by: dict[str, str] = field(default_factory=dict)
    verdicts: dict[str, str] = field(default_factory=dict)

    @property
    def scale(self):
        return self.problem.model.scale

    def _append(self, payload: dict) -> None:
        self.journal.append(_canonical(payload))

    def _snapshot_event(self) -> None:
        self._append(
            {
                "event": "snapshot",
                "revision": self.revision,
                "board_sha256": board_fingerprint(get_board(self), self.scale),
            }
        )


def _manifestation(
    problem: DiagnosticProblem,
    component: str,
    param: str,
    state: str,
    present: bool,
    level: str,
) -> tuple[Manifestation, str]:
    """Build an observation from operator input; returns it with the
    normalized level name that the journal records."""
    scale = problem.model.scale
    lvl = scale.level_named(level)
    if present:
        if lvl.value == 0:
            raise ModelError(
                f"a present observation at level {lvl.name!r} carries"
                " no information"
            )
        degree = lvl.value
    else:
        # For absences the level names how possible the state remains;
        # certainty of absence is its complement.
        degree = scale.absence_degree(lvl.name).value
    recorded = "impossible" if lvl.value == 0 else lvl.name
    return (
        Manifestation(Endpoint(component, param), state, degree, present),
        recorded,
    )


def _observation_text(m: Manifestation, scale) -> str:
    if m.present:
        return f"{m.endpoint} = {m.state} {scale.name_of(m.degree)}"
    possibility = 1 - m.degree
    name = "impossible" if possibility == 0 else scale.name_of(possibility)
    return f"{m.endpoint} != {m.state} {name}"


def create_session(
    model_text: str,
    observations_text: str,
    session_id: str | None = None,
) -> Session:
    """Parse both texts, anchor the candidate set, and open a journal."""
    model, diags = parse_model(model_text)
    errors = [d for d in diags if d.severity == "error"]
    if errors or model is None:
        first = errors[0] if errors else None
        raise ModelError(
            first.message if first else "model text did not parse",
            first.span if first else None,
        )
    observations, obs_diags = parse_observations(
        observations_text, model.scale
    )
    if obs_diags or observations is None:
        first = obs_diags[0] if obs_diags else None
        raise ModelError(
            first.message if first else "observation text did not parse",
            first.span if first else None,
        )
    if not any(m.present for m in observations.manifestations):
        raise ModelError("nothing to explain: no present observations")
    problem = compose_problem(model, observations)
    session = Session(
        id=session_id or "s" + _sha256(model_text + "\0" + observations_text)[:12],
        model_text=model_text,
        observations_text=observations_text,
        problem=problem,
        candidates=enumerate_candidates(problem),
    )
    session._append(
        {
            "event": "created",
            "id": session.id,
            "model": model_text,
            "model_sha256": _sha256(model_text),
            "observations": observations_text,
        }
    )
    session._snapshot_event()
    return session


def get_board(session: Session) -> BoardSnapshot:
    """Re-score the anchored candidates against the current observations."""
    problem = session.problem
    report = diagnose(problem, session.candidates)
    rows = []
    for cand in report.candidates:
        der = derive(problem.model, problem.context_map, cand.disorder)
        expected = tuple(
            ExpectedPoint(
                ep, state, exp.kind, session.scale.degree_of_value(exp.degree)
            )
            for (ep, state), exp in sorted(
                expected_manifestations(problem, cand.disorder, der).items(),
                key=lambda item: (str(item[0][0]), item[0][1]),
            )
            if exp.kind != "none"
        )
        label = cand.disorder.label
        rows.append(
            BoardRow(
                label=label,
                classification=cand.classification,
                status="discarded" if cand.discarded else "active",
                consistency=session.scale.degree_of_value(cand.consistency),
                abduction=session.scale.degree_of_value(cand.abduction),
                abductive=cand.abductive,
                dominated=cand.dominated,
                expected=expected,
                killed_by=session.killed_by.get(label),
                verdict=session.verdicts.get(label),
            )
        )
    return BoardSnapshot(
        session_id=session.id,
        revision=session.revision,
        rows=tuple(rows),
        probes=suggest_probes(problem, session.candidates),
    )


def add_observation(
    session: Session,
    component: str,
    param: str,
    state: str,
    present: bool,
    level: str,
) -> Session:
    """Commit a probe result: new revision, refreshed board, journal entry.

    Re-submitting an observation already in force is a no-op; anything
    that contradicts the record is rejected.
    """
    m, level_name = _manifestation(
        session.problem, component, param, state, present, level
    )
    if m in session.problem.present or m in session.problem.absent:
        return session
    before = {
        row.label for row in get_board(session).rows if row.status == "discarded"
    }
    extended = session.problem.with_observation(m)
    session.problem = extended
    session.revision += 1
    for row in get_board(session).rows:
        if row.status == "discarded" and row.label not in before:
            session.killed_by.setdefault(
                row.label, _observation_text(m, session.scale)
            )
    session._append(
        {
            "event": "observation",
            "revision": session.revision,
            "component": component,
            "param": param,
            "state": state,
            "polarity": "present" if present else "absent",
            "level": level_name,
        }
    )
    session._snapshot_event()
    return session


def what_if(
    session: Session,
    component: str,
    param: str,
    state: str,
    present: bool,
    level: str,
) -> BoardSnapshot:
    """Score a hypothetical probe result without touching the session."""
    m, _ = _manifestation(
        session.problem, component, param, state, present, level
    )
    if m in session.problem.present or m in session.problem.absent:
        return get_board(session)
    shadow = Session(
        id=session.id,
        model_text=session.model_text,
        observations_text=session.observations_text,
        problem=session.problem.with_observation(m),
        candidates=session.candidates,
        revision=session.revision,
        killed_by=dict(session.killed_by),
        verdicts=dict(session.verdicts),
    )
    return get_board(shadow)


def record_verdict(session: Session, label: str, reason: str = "") -> Session:
    """Note an operator rejection; annotation only, ranking untouched."""
    if not any(d.label == label for d in session.candidates):
        raise SessionError(f"no hypothesis labelled {label!r}")
    session.verdicts[label] = reason
    session._append({"event": "verdict", "label": label, "reason": reason})
    return session


# -- replay ------------------------------------------------------------------


def replay_journal(text: str) -> Session:
    """Rebuild a session from its journal, checking every recorded board.

    The journal is re-generated while replaying; any divergence —
    truncation, edits, or a stale board hash — is reported against the
    last event that still checked out.
    """
    lines = text.splitlines()
    if not lines or not any(line.strip() for line in lines):
        raise SessionError("empty journal")
    events = []
    for i, line in enumerate(lines):
        try:
            events.append(json.loads(line))
        except json.JSONDecodeError:
            last = events[-1]["event"] if events else "none"
            raise SessionError(
                f"corrupt journal line {i + 1} (last valid event:"
                f" {last!r} at line {i})"
            ) from None
    if events[0].get("event") != "created":
        raise SessionError("journal must begin with a 'created' event")
    if _sha256(events[0]["model"]) != events[0]["model_sha256"]:
        raise SessionError("model text does not match its recorded hash")
    session = create_session(
        events[0]["model"],
        events[0]["observations"],
        session_id=events[0]["id"],
    )
    for i, event in enumerate(events[1:], start=2):
        kind = event.get("event")
        if kind == "snapshot":
            continue  # regenerated below, verified by line comparison
        if kind == "observation":
            add_observation(
                session,
                event["component"],
                event["param"],
                event["state"],
                event["polarity"] == "present",
                event["level"],
            )
        elif kind == "verdict":
            record_verdict(session, event["label"], event.get("reason", ""))
        else:
            raise SessionError(f"unknown event type {kind!r} at line {i}")
    for i, (recorded, regenerated) in enumerate(zip(lines, session.journal)):
        if recorded != regenerated:
            raise SessionError(
                f"journal diverges at line {i + 1}: replay produced a"
                " different event than the one recorded"
            )
    if len(session.journal) != len(lines):
        raise SessionError(
            f"journal truncated: expected {len(session.journal)} events,"
            f" file has {len(lines)}"
        )
    return session
