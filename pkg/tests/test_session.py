"""Session lifecycle: anchored boards, journaling, replay, what-if purity.

Expected values are hand-derived from the fixture network and match the
frozen engine tables in test_engine.py.
"""

from fractions import Fraction

import pytest

from possdiag.fixtures import fixture_text
from possdiag.model import ModelError
from possdiag.session import (
    SessionError,
    add_observation,
    board_fingerprint,
    create_session,
    get_board,
    record_verdict,
    replay_journal,
    what_if,
)

MODEL_TEXT = fixture_text("solar_array.pdm")
OBS_TEXT = fixture_text("solar_array_initial.pdo")

# The five probe results of the walkthrough, as an operator enters them.
SESSION_PROBES = (
    ("bus", "out", "DEG", True, "almost_certain"),
    ("bus", "out", "ABS", False, "impossible"),
    ("comp_0", "out", "ONE", False, "impossible"),
    ("comp_1", "out", "ONE", True, "certain"),
    ("comp_2", "out", "ZERO", True, "certain"),
)

FINAL_ORDER = [
    "rel_0.out=DEG",
    "solar_array_1.out=DEG",
    "rel_0.out=ABS",
    "rel_1.out=DEG",
    "rel_2.out=DEG",
    "res_0.out=DEG",
    "source.out_3=ABS",
    "source.out_3=DEG",
    "alim.out=DEG",
    "solar_array_1.out=ABS",
    "alim.out=ABS",
]


@pytest.fixture()
def session():
    return create_session(MODEL_TEXT, OBS_TEXT)


def journal_text(s):
    return "\n".join(s.journal) + "\n"


# -- creation ----------------------------------------------------------------


def test_create_session_anchors_the_board(session):
    board = get_board(session)
    assert session.revision == 0
    assert len(board.rows) == 11
    assert [r.label for r in board.rows[:4]] == [
        "alim.out=ABS",
        "source.out_3=ABS",
        "alim.out=DEG",
        "source.out_3=DEG",
    ]
    assert all(r.status == "active" for r in board.rows)
    assert board.probes[0].endpoint.component == "bus"
    assert board.probes[0].state == "DEG"
    # header plus the revision-0 snapshot
    assert len(session.journal) == 2


def test_initial_board_groups_by_coverage(session):
    board = get_board(session)
    coverage = [row.abduction.value for row in board.rows]
    assert coverage[:2] == [Fraction(1), Fraction(1)]
    assert coverage[2:4] == [Fraction(3, 5), Fraction(3, 5)]
    assert all(c == 0 for c in coverage[4:])
    assert [r.label for r in board.rows if r.abductive] == [
        "alim.out=ABS",
        "source.out_3=ABS",
        "alim.out=DEG",
        "source.out_3=DEG",
    ]
    assert all(row.consistency.value == 1 for row in board.rows)


def test_session_id_is_content_derived(session):
    assert session.id == create_session(MODEL_TEXT, OBS_TEXT).id


def test_empty_observation_file_is_rejected():
    with pytest.raises(ModelError, match="nothing to explain"):
        create_session(MODEL_TEXT, "context rel_0=OFF rel_1=ON rel_2=OFF;\n")
    with pytest.raises(ModelError, match="nothing to explain"):
        create_session(MODEL_TEXT, "")


def test_malformed_model_is_rejected():
    with pytest.raises(ModelError):
        create_session("component broken {", OBS_TEXT)


def test_zero_information_observations_are_rejected(session):
    with pytest.raises(ValueError, match="carries no information"):
        add_observation(session, "bus", "out", "DEG", True, "impossible")
    with pytest.raises(ValueError, match="carries no information"):
        add_observation(session, "bus", "out", "DEG", False, "certain")
    assert session.revision == 0


# -- committing observations -------------------------------------------------


def test_comparator_zero_discards_the_supply_outage(session):
    add_observation(session, "comp_0", "out", "ZERO", True, "certain")
    assert session.revision == 1
    board = get_board(session)
    row = board.row("alim.out=ABS")
    assert row.status == "discarded"
    assert row.killed_by == "comp_0.out = ZERO certain"
    # the eclipse-detector tap has no stake in comparator 0
    assert board.row("source.out_3=ABS").status == "active"


def test_walkthrough_discards_monotonically(session):
    discarded_history = [set()]
    for probe in SESSION_PROBES:
        add_observation(session, *probe)
        discarded = {
            r.label for r in get_board(session).rows if r.status == "discarded"
        }
        assert discarded_history[-1] <= discarded
        discarded_history.append(discarded)
    assert discarded_history[-1] == {"alim.out=ABS"}
    assert session.revision == 5


def test_full_walkthrough_board(session):
    for probe in SESSION_PROBES:
        add_observation(session, *probe)
    board = get_board(session)
    assert [r.label for r in board.rows] == FINAL_ORDER
    assert [r.label for r in board.rows if r.abductive] == []
    killed = board.row("alim.out=ABS")
    assert killed.status == "discarded"
    assert killed.killed_by == "comp_0.out != ONE impossible"
    assert board.row("alim.out=DEG").consistency.value == Fraction(2, 5)
    assert board.row("solar_array_1.out=ABS").consistency.value == Fraction(2, 5)
    for label in FINAL_ORDER[:7]:
        assert board.row(label).consistency.value == 1, label


def test_readding_an_identical_observation_is_a_noop(session):
    add_observation(session, *SESSION_PROBES[0])
    journal_before = list(session.journal)
    add_observation(session, *SESSION_PROBES[0])
    assert session.revision == 1
    assert session.journal == journal_before


def test_conflicting_observations_are_rejected(session):
    add_observation(session, "comp_1", "out", "ONE", True, "certain")
    with pytest.raises(ModelError):
        add_observation(session, "comp_1", "out", "ONE", False, "impossible")
    with pytest.raises(ModelError):
        add_observation(session, "comp_1", "out", "ONE", True, "likely")
    assert session.revision == 1


# -- what-if -----------------------------------------------------------------


def test_what_if_scores_without_mutating(session):
    fp_before = board_fingerprint(get_board(session), session.scale)
    journal_before = list(session.journal)

    shadow = what_if(session, "comp_0", "out", "ONE", True, "certain")
    assert shadow.row("solar_array_1.out=ABS").consistency.value == Fraction(2, 5)
    assert shadow.row("alim.out=ABS").abductive
    assert shadow.row("alim.out=ABS").consistency.value == 1
    # hypotheses with no stake in that comparator are untouched
    live = get_board(session)
    assert shadow.row("rel_0.out=DEG") == live.row("rel_0.out=DEG")

    assert session.revision == 0
    assert session.journal == journal_before
    assert board_fingerprint(get_board(session), session.scale) == fp_before


def test_what_if_of_an_existing_observation_is_the_live_board(session):
    shadow = what_if(session, "eclipse", "signal", "ONE", True, "certain")
    live = get_board(session)
    assert board_fingerprint(shadow, session.scale) == board_fingerprint(
        live, session.scale
    )


# -- verdicts ----------------------------------------------------------------


def test_verdicts_annotate_without_touching_the_ranking(session):
    reason = "relay commanded open during the whole window"
    record_verdict(session, "rel_2.out=DEG", reason)
    assert session.revision == 0
    board = get_board(session)
    row = board.row("rel_2.out=DEG")
    assert row.verdict == reason
    assert row.status == "active"
    assert session.journal[-1].startswith('{"event":"verdict"')


def test_verdict_on_unknown_hypothesis_fails(session):
    with pytest.raises(SessionError, match="no hypothesis"):
        record_verdict(session, "bus.out=DEG")


# -- journal replay ----------------------------------------------------------


def test_replay_reproduces_the_full_walkthrough(session):
    for probe in SESSION_PROBES:
        add_observation(session, *probe)
    record_verdict(session, "rel_2.out=DEG", "commanded open")

    replayed = replay_journal(journal_text(session))
    # Line-for-line equality covers every revision: each snapshot line
    # embeds the board hash recomputed during replay.
    assert replayed.journal == session.journal
    assert replayed.revision == session.revision
    assert replayed.id == session.id
    assert board_fingerprint(
        get_board(replayed), replayed.scale
    ) == board_fingerprint(get_board(session), session.scale)
    assert replayed.verdicts == session.verdicts
    assert replayed.killed_by == session.killed_by


def test_replay_rejects_empty_journals():
    with pytest.raises(SessionError, match="empty journal"):
        replay_journal("")
    with pytest.raises(SessionError, match="empty journal"):
        replay_journal("   \n")


def test_replay_rejects_unknown_event_types(session):
    add_observation(session, *SESSION_PROBES[0])
    lines = list(session.journal)
    lines.insert(2, '{"event":"telemetry"}')
    with pytest.raises(SessionError, match="unknown event type 'telemetry' at line 3"):
        replay_journal("\n".join(lines) + "\n")


def test_replay_rejects_corrupt_lines(session):
    add_observation(session, *SESSION_PROBES[0])
    lines = list(session.journal)
    lines.append("{this is not json")
    with pytest.raises(SessionError, match="last valid event: 'snapshot'"):
        replay_journal("\n".join(lines) + "\n")


def test_replay_rejects_truncation(session):
    add_observation(session, *SESSION_PROBES[0])
    lines = session.journal[:-1]  # drop the final snapshot
    with pytest.raises(SessionError, match="truncated"):
        replay_journal("\n".join(lines) + "\n")


def test_replay_rejects_a_tampered_board_hash(session):
    import json

    add_observation(session, *SESSION_PROBES[0])
    lines = list(session.journal)
    snapshot = json.loads(lines[-1])
    snapshot["board_sha256"] = "0" * 64
    lines[-1] = json.dumps(snapshot, sort_keys=True, separators=(",", ":"))
    with pytest.raises(SessionError, match="diverges at line 4"):
        replay_journal("\n".join(lines) + "\n")


def test_replay_rejects_a_tampered_model_hash(session):
    lines = list(session.journal)
    import json

    header = json.loads(lines[0])
    header["model_sha256"] = "0" * 64
    lines[0] = json.dumps(header, sort_keys=True, separators=(",", ":"))
    with pytest.raises(SessionError, match="does not match its recorded hash"):
        replay_journal("\n".join(lines) + "\n")


def test_replay_requires_a_creation_header(session):
    add_observation(session, *SESSION_PROBES[0])
    with pytest.raises(SessionError, match="begin with"):
        replay_journal("\n".join(session.journal[1:]) + "\n")
