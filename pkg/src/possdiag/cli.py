"""Command-line front end: validate, rank, probe interactively, serve."""

from __future__ import annotations

import json
import re
from pathlib import Path

import click

from .dsl import parse_model
from .session import (
    BoardSnapshot,
    Session,
    add_observation,
    create_session,
    get_board,
    record_verdict,
    replay_journal,
    what_if,
)

_CLASS_TEXT = {
    "identified_fault": "fault",
    "upstream_signature": "signature (upstream)",
    "signature": "signature",
}

_OBS_RE = re.compile(
    r"^(?P<component>\w+)\.(?P<param>\w+)\s*(?P<op>!?=)\s*"
    r"(?P<state>\w+)\s+(?P<level>\w+)$"
)


def _echo_diagnostics(diags) -> None:
    for d in diags:
        where = ""
        if d.span is not None:
            where = f"{d.span.file}:{d.span.line}:{d.span.column}: "
        click.echo(f"{where}{d.severity}: {d.message}", err=True)


def _board_lines(snapshot: BoardSnapshot, hypothetical: bool = False) -> list[str]:
    head = f"revision {snapshot.revision}, {len(snapshot.rows)} hypotheses"
    if hypothetical:
        head = "hypothetical board (not committed), " + head
    lines = [head]
    width = max((len(r.label) for r in snapshot.rows), default=0)
    for i, row in enumerate(snapshot.rows, start=1):
        notes = []
        if row.abductive:
            notes.append("abductive")
        if row.status == "discarded":
            notes.append(
                f"discarded by {row.killed_by}"
                if row.killed_by
                else "discarded"
            )
        if row.verdict is not None:
            notes.append(
                f"rejected by operator: {row.verdict}"
                if row.verdict
                else "rejected by operator"
            )
        if row.dominated:
            notes.append("upstream of " + ", ".join(row.dominated))
        note_text = f"  [{'; '.join(notes)}]" if notes else ""
        lines.append(
            f"{i:3}. {row.label:<{width}}  "
            f"coverage={row.abduction.name:<16} "
            f"consistency={row.consistency.name:<16} "
            f"{_CLASS_TEXT[row.classification]}{note_text}"
        )
    return lines


def _probe_lines(session: Session, snapshot: BoardSnapshot) -> list[str]:
    if not snapshot.probes:
        return ["no discriminating probes left"]
    lines = ["suggested probes (most discriminating first):"]
    for i, probe in enumerate(snapshot.probes, start=1):
        strength = session.scale.name_of(probe.strength)
        lines.append(
            f"{i:3}. {probe.endpoint} = {probe.state}"
            f"  score={probe.score}  strongest expectation={strength}"
        )
    return lines


def _echo_board(session: Session, hypothetical_snapshot=None) -> None:
    snapshot = hypothetical_snapshot or get_board(session)
    for line in _board_lines(snapshot, hypothetical=hypothetical_snapshot is not None):
        click.echo(line)


@click.group()
def main() -> None:
    """Fault isolation for component networks under graded uncertainty."""


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
def check(model_file: str) -> None:
    """Parse and validate a model file."""
    text = Path(model_file).read_text()
    model, diags = parse_model(text, file=Path(model_file).name)
    _echo_diagnostics(diags)
    errors = [d for d in diags if d.severity == "error"]
    if errors or model is None:
        raise SystemExit(1)
    click.echo(
        f"OK: {len(model.components)} components, {len(model.links)} links,"
        f" {len(model.observable_outputs())} observable outputs"
    )


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("obs_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True, help="Emit the board as JSON.")
def diagnose(model_file: str, obs_file: str, as_json: bool) -> None:
    """Rank every candidate explanation for the observations."""
    session = _open(model_file, obs_file)
    snapshot = get_board(session)
    if as_json:
        click.echo(json.dumps(snapshot.to_json(session.scale), indent=2))
        return
    _echo_board(session)
    click.echo("")
    for line in _probe_lines(session, snapshot):
        click.echo(line)


def _open(model_file: str, obs_file: str) -> Session:
    try:
        return create_session(
            Path(model_file).read_text(), Path(obs_file).read_text()
        )
    except ValueError as err:
        click.echo(f"error: {err}", err=True)
        raise SystemExit(1) from None


_HELP = """commands:
  board                                  show the ranked hypothesis board
  probes                                 show suggested probes
  obs <comp>.<out> = <state> <level>     commit a present observation
  obs <comp>.<out> != <state> <level>    commit an absence (level = how possible it remains)
  whatif <comp>.<out> =|!= <state> <level>   preview a probe without committing
  reject <hypothesis> [reason...]        note an operator rejection
  quit                                   leave the session"""


def _parse_observation_args(text: str):
    m = _OBS_RE.match(text.strip())
    if m is None:
        raise ValueError(
            "expected <component>.<output> =|!= <state> <level>"
        )
    return (
        m.group("component"),
        m.group("param"),
        m.group("state"),
        m.group("op") == "=",
        m.group("level"),
    )


@main.command()
@click.argument("model_file", type=click.Path(exists=True, dir_okay=False))
@click.argument("obs_file", type=click.Path(exists=True, dir_okay=False))
@click.option(
    "--journal",
    "journal_file",
    type=click.Path(dir_okay=False, writable=True),
    default=None,
    help="Mirror the session journal to this file after every change.",
)
def session(model_file: str, obs_file: str, journal_file: str | None) -> None:
    """Run the interactive probe loop on a model and initial observations."""
    live = _open(model_file, obs_file)

    def sync_journal() -> None:
        if journal_file is not None:
            Path(journal_file).write_text("\n".join(live.journal) + "\n")

    sync_journal()
    click.echo(f"session {live.id} opened; {_HELP.splitlines()[0]}")
    _echo_board(live)
    while True:
        try:
            line = click.prompt(
                "possdiag", prompt_suffix="> ", default="", show_default=False
            ).strip()
        except (click.Abort, EOFError):
            break
        if not line:
            continue
        command, _, rest = line.partition(" ")
        try:
            if command == "quit":
                break
            elif command == "help":
                click.echo(_HELP)
            elif command == "board":
                _echo_board(live)
            elif command == "probes":
                for out in _probe_lines(live, get_board(live)):
                    click.echo(out)
            elif command == "obs":
                before = live.revision
                add_observation(live, *_parse_observation_args(rest))
                if live.revision == before:
                    click.echo("already recorded; nothing changed")
                else:
                    sync_journal()
                    click.echo(f"accepted (revision {live.revision})")
                    _echo_board(live)
            elif command == "whatif":
                snapshot = what_if(live, *_parse_observation_args(rest))
                _echo_board(live, hypothetical_snapshot=snapshot)
            elif command == "reject":
                label, _, reason = rest.partition(" ")
                record_verdict(live, label, reason.strip())
                sync_journal()
                click.echo(f"noted: {label} rejected by operator")
            else:
                click.echo(f"unknown command {command!r}; try 'help'")
        except ValueError as err:
            click.echo(f"error: {err}")
    sync_journal()
    click.echo(f"bye; final revision {live.revision}")


@main.command()
@click.argument("journal_file", type=click.Path(exists=True, dir_okay=False))
def replay(journal_file: str) -> None:
    """Rebuild a session from its journal and show the resulting board."""
    try:
        rebuilt = replay_journal(Path(journal_file).read_text())
    except ValueError as err:
        click.echo(f"error: {err}", err=True)
        raise SystemExit(1) from None
    click.echo(
        f"replayed session {rebuilt.id}: {rebuilt.revision} revisions,"
        f" every recorded board verified"
    )
    _echo_board(rebuilt)


@main.command()
@click.option("--listen", default="127.0.0.1:8765", show_default=True)
@click.option(
    "--models",
    "models_dir",
    type=click.Path(exists=True, file_okay=False),
    default=None,
    help="Directory of .pdm files to serve (defaults to the built-in model).",
)
def serve(listen: str, models_dir: str | None) -> None:
    """Run the HTTP service."""
    import uvicorn

    from .service import create_app

    host, _, port_text = listen.rpartition(":")
    if not host or not port_text.isdigit():
        click.echo(f"error: --listen expects host:port, got {listen!r}", err=True)
        raise SystemExit(1)
    uvicorn.run(create_app(models_dir), host=host, port=int(port_text))


if __name__ == "__main__":
    main()
