"""Trace-file parsing/serialization and per-step artifact output.

File grammar (one trace per line after a header):

    <num_traces> <alphabet_size>
    <label> <length> <symbol> ...            # dfa: label 1 = accept, 0 = reject
    0 <length> <input>/<output> ...          # mealy: label field present, ignored

Symbols may not contain whitespace; mealy symbols may not contain '/'. The
header's alphabet size counts distinct input symbols, and alphabets are built
in first-appearance order.
"""
from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

from .automaton import Alphabet, Label, Mode, Sample, Trace, to_json
from .errors import (
    BadLabelError,
    HeaderMismatchError,
    LengthMismatchError,
    MalformedSymbolPairError,
    TraceParseError,
)
from .merging import MergeCandidate


def parse_traces(text: str, mode: Mode) -> Sample:
    lines = text.splitlines()
    rows = [(i + 1, line) for i, line in enumerate(lines) if line.strip()]
    if not rows:
        raise HeaderMismatchError("missing header line", line=1)
    header_no, header = rows[0]
    fields = header.split()
    if len(fields) != 2:
        raise HeaderMismatchError(f"header needs two integers, got {header!r}", line=header_no)
    try:
        n_traces, alphabet_size = int(fields[0]), int(fields[1])
    except ValueError:
        raise HeaderMismatchError(
            f"header needs two integers, got {header!r}", line=header_no) from None
    body = rows[1:]
    if len(body) != n_traces:
        raise HeaderMismatchError(
            f"header promises {n_traces} traces, file has {len(body)}", line=header_no)

    inputs = Alphabet()
    outputs = Alphabet()
    traces = []
    for line_no, line in body:
        tokens = line.split()
        if len(tokens) < 2:
            raise LengthMismatchError("trace line needs <label> <length> ...", line=line_no)
        label_token = tokens[0]
        try:
            length = int(tokens[1])
        except ValueError:
            raise LengthMismatchError(
                f"bad length field {tokens[1]!r}", line=line_no) from None
        if length < 0:
            raise LengthMismatchError(f"negative length {length}", line=line_no)
        symbols = tokens[2:]
        if len(symbols) != length:
            raise LengthMismatchError(
                f"length field says {length}, line has {len(symbols)} symbols", line=line_no)
        if mode is Mode.DFA:
            if label_token == "1":
                label = Label.ACCEPT
            elif label_token == "0":
                label = Label.REJECT
            else:
                raise BadLabelError(f"dfa label must be 0 or 1, got {label_token!r}",
                                    line=line_no)
            traces.append(Trace(label=label,
                                inputs=tuple(inputs.add(s) for s in symbols)))
        else:
            ins = []
            outs = []
            for token in symbols:
                parts = token.split("/")
                if len(parts) != 2 or not parts[0] or not parts[1]:
                    raise MalformedSymbolPairError(
                        f"expected <input>/<output>, got {token!r}", line=line_no)
                ins.append(inputs.add(parts[0]))
                outs.append(outputs.add(parts[1]))
            traces.append(Trace(label=None, inputs=tuple(ins), outputs=tuple(outs)))

    if len(inputs) != alphabet_size:
        raise HeaderMismatchError(
            f"header promises {alphabet_size} input symbols, traces use {len(inputs)}",
            line=header_no)
    return Sample(mode, traces, inputs, outputs)


def serialize_traces(sample: Sample) -> str:
    used = {i for t in sample.traces for i in t.inputs}
    lines = [f"{len(sample.traces)} {len(used)}"]
    for trace in sample.traces:
        if sample.mode is Mode.DFA:
            label = "1" if trace.label is Label.ACCEPT else "0"
            body = " ".join(sample.input_alphabet.text_of(i) for i in trace.inputs)
        else:
            label = "0"
            body = " ".join(
                f"{sample.input_alphabet.text_of(i)}/{sample.output_alphabet.text_of(o)}"
                for i, o in zip(trace.inputs, trace.outputs))
        line = f"{label} {len(trace.inputs)}"
        lines.append(f"{line} {body}" if body else line)
    return "\n".join(lines) + "\n"


def parse_trace_file(path: str | Path, mode: Mode) -> Sample:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise TraceParseError(f"cannot read {path}: {exc}") from exc
    return parse_traces(text, mode)


def _write_atomic(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def session_document(session, include_all_candidates: bool = True) -> dict:
    """The state document: step, params, automaton, candidates, history, can_undo."""
    candidates: list[MergeCandidate] = session.candidates
    return {
        "step": session.step,
        "mode": session.automaton.mode.value,
        "heuristic": session.heuristic.name,
        "params": {
            "state_count": session.params.state_count,
            "symbol_count": session.params.symbol_count,
            "lowerbound": session.params.lowerbound,
            "sinkson": session.params.sinkson,
        },
        "automaton": to_json(session.automaton),
        "candidates": [
            {"rank": c.rank, "red": c.red, "blue": c.blue, "score": c.score}
            for c in (candidates if include_all_candidates else candidates[:50])
        ],
        "candidate_total": len(candidates),
        "history": session.trace_log(),
        "can_undo": session.step > 0,
    }


def write_step_artifacts(session, out_dir: str | Path) -> list[Path]:
    """Write current.dot, previous.dot (step >= 1), trace.log, session.json, commands.log.

    Each file is written atomically (temp file + rename) so readers never see a
    partial artifact.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []

    def put(name: str, data: str) -> None:
        path = out / name
        _write_atomic(path, data)
        written.append(path)

    put("current.dot", session.current_dot())
    previous = session.previous_dot()
    if previous is not None:
        put("previous.dot", previous)
    put("trace.log", session.trace_log() + "\n")
    put("session.json", json.dumps(session_document(session), indent=2) + "\n")
    put("commands.log", "".join(line + "\n" for line in session.command_log))
    return written
