import json

import pytest
from hypothesis import given, strategies as st

from mergeloop import (
    GeneratorConfig,
    HeuristicParams,
    Label,
    MEALY,
    Mode,
    generate_machine,
    sample_traces,
)
from mergeloop.dataio import (
    parse_trace_file,
    parse_traces,
    serialize_traces,
    session_document,
    write_step_artifacts,
)
from mergeloop.errors import (
    BadLabelError,
    HeaderMismatchError,
    LengthMismatchError,
    MalformedSymbolPairError,
    TraceParseError,
)
from mergeloop.session import MergeRank, Session, Undo


class TestParse:
    def test_dfa_line(self):
        sample = parse_traces("1 2\n1 2 a b\n", Mode.DFA)
        assert len(sample.traces) == 1
        trace = sample.traces[0]
        assert trace.label is Label.ACCEPT
        assert [sample.input_alphabet.text_of(i) for i in trace.inputs] == ["a", "b"]

    def test_mealy_line(self):
        sample = parse_traces("1 1\n0 2 a/x a/y\n", Mode.MEALY)
        trace = sample.traces[0]
        assert trace.label is None
        assert [sample.input_alphabet.text_of(i) for i in trace.inputs] == ["a", "a"]
        assert [sample.output_alphabet.text_of(o) for o in trace.outputs] == ["x", "y"]

    def test_first_appearance_alphabet_order(self):
        sample = parse_traces("2 2\n1 1 b\n0 1 a\n", Mode.DFA)
        assert list(sample.input_alphabet) == ["b", "a"]

    def test_reject_label(self):
        sample = parse_traces("1 1\n0 1 a\n", Mode.DFA)
        assert sample.traces[0].label is Label.REJECT

    def test_empty_word_allowed(self):
        sample = parse_traces("1 0\n1 0\n", Mode.DFA)
        assert sample.traces[0].inputs == ()

    @pytest.mark.parametrize("text,error", [
        ("", HeaderMismatchError),
        ("5\n", HeaderMismatchError),
        ("x y\n", HeaderMismatchError),
        ("2 1\n1 1 a\n", HeaderMismatchError),          # trace count off
        ("1 3\n1 1 a\n", HeaderMismatchError),          # alphabet size off
        ("1 1\n7 1 a\n", BadLabelError),                # dfa label not 0/1
        ("1 1\n1 2 a\n", LengthMismatchError),          # length field off
        ("1 1\n1 x a\n", LengthMismatchError),          # non-integer length
        ("1 1\n1\n", LengthMismatchError),              # missing length field
    ])
    def test_dfa_errors(self, text, error):
        with pytest.raises(error) as err:
            parse_traces(text, Mode.DFA)
        assert isinstance(err.value, TraceParseError)

    @pytest.mark.parametrize("text", [
        "1 1\n0 1 ax\n",        # no separator
        "1 1\n0 1 a/x/y\n",     # two separators
        "1 1\n0 1 /x\n",        # empty input
        "1 1\n0 1 a/\n",        # empty output
    ])
    def test_mealy_pair_errors(self, text):
        with pytest.raises(MalformedSymbolPairError):
            parse_traces(text, Mode.MEALY)

    def test_errors_carry_line_numbers(self):
        with pytest.raises(MalformedSymbolPairError) as err:
            parse_traces("2 1\n0 1 a/x\n0 1 bad\n", Mode.MEALY)
        assert err.value.line == 3

    def test_generated_file_round_trips(self):
        cfg = GeneratorConfig(seed=13, n_traces=300, stop_probability=0.2)
        machine = generate_machine(cfg)
        sample = sample_traces(machine, cfg)
        text = serialize_traces(sample)
        parsed = parse_traces(text, Mode.MEALY)
        assert serialize_traces(parsed) == text
        assert len(parsed.traces) == len(sample.traces)

        def texts(s):
            return [([s.input_alphabet.text_of(i) for i in t.inputs],
                     [s.output_alphabet.text_of(o) for o in t.outputs])
                    for t in s.traces]

        assert texts(parsed) == texts(sample)

    @given(st.text(alphabet="01 ab/xy\n\t.", max_size=300))
    def test_fuzz_never_crashes(self, text):
        for mode in (Mode.DFA, Mode.MEALY):
            try:
                parse_traces(text, mode)
            except TraceParseError:
                pass

    def test_parse_trace_file_missing(self, tmp_path):
        with pytest.raises(TraceParseError):
            parse_trace_file(tmp_path / "nope.txt", Mode.DFA)


def small_session():
    cfg = GeneratorConfig(seed=21, n_traces=40, stop_probability=0.25)
    machine = generate_machine(cfg)
    sample = sample_traces(machine, cfg)
    return Session(sample, HeuristicParams(), MEALY)


class TestArtifacts:
    def test_step_zero_writes_no_previous(self, tmp_path):
        sample = parse_traces("1 1\n0 1 a/x\n", Mode.MEALY)
        session = Session(sample, HeuristicParams(), MEALY)
        assert session.step == 0
        written = {p.name for p in write_step_artifacts(session, tmp_path)}
        assert "current.dot" in written
        assert "previous.dot" not in written
        assert (tmp_path / "trace.log").read_text() == "\n"
        doc = json.loads((tmp_path / "session.json").read_text())
        assert doc["step"] == 0
        assert doc["can_undo"] is False

    def test_previous_equals_pre_merge_current(self, tmp_path):
        session = small_session()
        write_step_artifacts(session, tmp_path)
        pre_merge = (tmp_path / "current.dot").read_bytes()
        session.apply(MergeRank(1))
        write_step_artifacts(session, tmp_path)
        if len(session.history) and session.history[-1].kind == "merge":
            assert (tmp_path / "previous.dot").read_bytes() == pre_merge

    def test_undo_swaps_back_to_old_previous(self, tmp_path):
        session = small_session()
        session.apply(MergeRank(1))
        write_step_artifacts(session, tmp_path)
        previous = (tmp_path / "previous.dot").read_text()
        session.apply(Undo())
        write_step_artifacts(session, tmp_path)
        assert (tmp_path / "current.dot").read_text() == previous

    def test_commands_log_written(self, tmp_path):
        session = small_session()
        session.apply(MergeRank(1))
        session.apply(Undo())
        write_step_artifacts(session, tmp_path)
        assert (tmp_path / "commands.log").read_text() == "MERGE 1\nUNDO\n"

    def test_session_document_shape(self):
        session = small_session()
        doc = session_document(session)
        assert set(doc) >= {"step", "params", "automaton", "candidates",
                            "history", "can_undo", "candidate_total"}
        assert doc["params"] == {"state_count": 0, "symbol_count": 0,
                                 "lowerbound": 0, "sinkson": False}
        for i, row in enumerate(doc["candidates"]):
            assert row["rank"] == i + 1
