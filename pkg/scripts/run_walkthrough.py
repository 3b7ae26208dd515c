#!/usr/bin/env python3
"""Drive the five-probe solar-array walkthrough end to end.

Starts a session from the bundled model and its initial observation
(the eclipse flag raised in full sunlight), prints the generated
hypothesis board, the predicted measurement points, and the probe
queue, then applies the five probe results one at a time, showing how
the board tightens.  Finally the journal is written out, replayed, and
the replayed board is checked against the live one fingerprint for
fingerprint.

Usage:
    python scripts/run_walkthrough.py [--journal walkthrough.journal]
    python scripts/run_walkthrough.py --model my.pdm --observations my.pdo
"""

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

from possdiag.engine import prediction_points, suggest_probes
from possdiag.fixtures import fixture_text
from possdiag.session import (
    add_observation,
    board_fingerprint,
    create_session,
    get_board,
    replay_journal,
)

# The walkthrough's probe results, in the order an operator takes them:
# bus voltage degraded but present, comparator 0 silent, 1 and 2 firing.
PROBES = (
    ("bus", "out", "DEG", True, "almost_certain"),
    ("bus", "out", "ABS", False, "impossible"),
    ("comp_0", "out", "ONE", False, "impossible"),
    ("comp_1", "out", "ONE", True, "certain"),
    ("comp_2", "out", "ZERO", True, "certain"),
)


@dataclass(frozen=True)
class Config:
    model_text: str
    observations_text: str
    journal_path: Path


def parse_args(argv=None) -> Config:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--model", type=Path, help="model file (default: bundled)")
    parser.add_argument(
        "--observations", type=Path, help="observation file (default: bundled)"
    )
    parser.add_argument(
        "--journal",
        type=Path,
        default=Path("walkthrough.journal"),
        help="where to write the session journal",
    )
    args = parser.parse_args(argv)
    model = (
        args.model.read_text() if args.model else fixture_text("solar_array.pdm")
    )
    observations = (
        args.observations.read_text()
        if args.observations
        else fixture_text("solar_array_initial.pdo")
    )
    return Config(model, observations, args.journal)


def show_board(session, title):
    board = get_board(session)
    print(f"\n== {title} (revision {board.revision}) ==")
    for i, row in enumerate(board.rows, start=1):
        notes = []
        if row.abductive:
            notes.append("covers all symptoms")
        if row.status == "discarded":
            notes.append(f"discarded by {row.killed_by}")
        tail = f"  [{', '.join(notes)}]" if notes else ""
        print(
            f"  {i:2}. {row.label:24} coverage={row.abduction.name:15} "
            f"consistency={row.consistency.name}{tail}"
        )
    return board


def main(argv=None) -> int:
    config = parse_args(argv)
    session = create_session(config.model_text, config.observations_text)
    scale = session.problem.model.scale
    show_board(session, "generated hypotheses")

    print("\n== predicted measurement points ==")
    for endpoint, state, weight in prediction_points(
        session.problem, session.candidates
    ):
        print(f"  {endpoint} = {state}  expected up to {scale.name_of(weight)}")

    print("\n== probe queue ==")
    for probe in suggest_probes(session.problem, session.candidates)[:3]:
        print(
            f"  {probe.endpoint} = {probe.state}  separates {probe.score} "
            f"hypothesis pairs"
        )

    for component, param, state, present, level in PROBES:
        add_observation(session, component, param, state, present, level)
        op = "=" if present else "!="
        show_board(session, f"after {component}.{param} {op} {state} ({level})")

    journal = "\n".join(session.journal) + "\n"
    config.journal_path.write_text(journal)
    print(f"\njournal written to {config.journal_path} ({len(session.journal)} events)")

    replayed = replay_journal(journal)
    live = board_fingerprint(get_board(session), scale)
    again = board_fingerprint(get_board(replayed), scale)
    if live != again or replayed.journal != session.journal:
        print("replay DIVERGED from the live session", file=sys.stderr)
        return 1
    print(f"replay reproduced the session bit-exactly (board {live[:12]}…)")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
