"""Core automaton model: prefix-tree construction, classification, DOT/JSON export.

States keep occurrence statistics so that merge heuristics can weigh evidence;
transitions carry counts and (in Mealy mode) an output symbol. The prefix-tree
builder assigns state ids in breadth-first order (root = 0, children visited in
ascending input-symbol order), which fixes every downstream tie-break.
"""
from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, NamedTuple

from .errors import (
    EmptySampleError,
    InconsistentSampleError,
    SymbolOutOfAlphabetError,
)


class Mode(str, Enum):
    DFA = "dfa"
    MEALY = "mealy"


class Label(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"
    UNKNOWN = "unknown"


class Symbol(NamedTuple):
    id: int
    text: str


class Alphabet:
    """Dense text<->id bijection; ids are assigned in first-appearance order."""

    __slots__ = ("_texts", "_ids")

    def __init__(self, texts: Iterable[str] = ()):
        self._texts: list[str] = []
        self._ids: dict[str, int] = {}
        for t in texts:
            self.add(t)

    def add(self, text: str) -> int:
        sid = self._ids.get(text)
        if sid is None:
            sid = len(self._texts)
            self._texts.append(text)
            self._ids[text] = sid
        return sid

    def id_of(self, text: str) -> int:
        try:
            return self._ids[text]
        except KeyError:
            raise SymbolOutOfAlphabetError(f"unknown symbol {text!r}") from None

    def get(self, text: str) -> int | None:
        return self._ids.get(text)

    def text_of(self, sid: int) -> str:
        return self._texts[sid]

    def symbols(self) -> list[Symbol]:
        return [Symbol(i, t) for i, t in enumerate(self._texts)]

    def __len__(self) -> int:
        return len(self._texts)

    def __contains__(self, text: str) -> bool:
        return text in self._ids

    def __iter__(self):
        return iter(self._texts)

    def __eq__(self, other) -> bool:
        return isinstance(other, Alphabet) and self._texts == other._texts

    def copy(self) -> "Alphabet":
        return Alphabet(self._texts)


@dataclass(frozen=True)
class Trace:
    """One observation: labeled input word (DFA) or input/output word (Mealy)."""

    label: Label | None
    inputs: tuple[int, ...]
    outputs: tuple[int, ...] | None = None


@dataclass
class Sample:
    mode: Mode
    traces: list[Trace]
    input_alphabet: Alphabet
    output_alphabet: Alphabet = field(default_factory=Alphabet)


class Edge:
    """One deterministic transition: (source, input) -> target, with statistics."""

    __slots__ = ("target", "output", "count")

    def __init__(self, target: int, output: int | None, count: int):
        self.target = target
        self.output = output
        self.count = count


class State:
    """Mutable per-state record: statistics plus outgoing/incoming transition maps."""

    __slots__ = ("sid", "occurrences", "accept", "reject", "out", "inbound")

    def __init__(self, sid: int, occurrences: int = 0, accept: int = 0, reject: int = 0):
        self.sid = sid
        self.occurrences = occurrences
        self.accept = accept
        self.reject = reject
        self.out: dict[int, Edge] = {}
        # (source id, input id) pairs of edges that point at this state
        self.inbound: set[tuple[int, int]] = set()


class Automaton:
    """Deterministic automaton with a persistent red core; blue/white are derived.

    A non-red state is blue when it is the target of a red state's transition,
    white otherwise. Merges keep the surviving state's id, so ids are stable
    (and sparse) across the whole merge history.
    """

    __slots__ = ("mode", "start", "states", "red", "input_alphabet", "output_alphabet")

    def __init__(self, mode: Mode, input_alphabet: Alphabet, output_alphabet: Alphabet):
        self.mode = mode
        self.start = 0
        self.states: dict[int, State] = {}
        self.red: set[int] = set()
        self.input_alphabet = input_alphabet
        self.output_alphabet = output_alphabet

    # --- construction helpers ---

    def add_state(self, sid: int, occurrences: int = 0, accept: int = 0, reject: int = 0) -> State:
        st = State(sid, occurrences, accept, reject)
        self.states[sid] = st
        return st

    def add_edge(self, source: int, input_id: int, target: int,
                 output: int | None, count: int) -> None:
        if input_id in self.states[source].out:
            raise InconsistentSampleError(
                f"duplicate transition on state {source} input {input_id}")
        self.states[source].out[input_id] = Edge(target, output, count)
        self.states[target].inbound.add((source, input_id))

    # --- colors ---

    def is_blue(self, sid: int) -> bool:
        if sid in self.red or sid not in self.states:
            return False
        return any(p in self.red for p, _ in self.states[sid].inbound)

    def blue_states(self) -> list[int]:
        blues = set()
        for r in self.red:
            for e in self.states[r].out.values():
                if e.target not in self.red:
                    blues.add(e.target)
        return sorted(blues)

    def color_of(self, sid: int) -> str:
        if sid in self.red:
            return "red"
        return "blue" if self.is_blue(sid) else "white"

    def dominant_label(self, sid: int) -> Label:
        st = self.states[sid]
        if st.accept == 0 and st.reject == 0:
            return Label.UNKNOWN
        if st.reject == 0 or st.accept > st.reject:
            return Label.ACCEPT
        if st.accept == 0 or st.reject > st.accept:
            return Label.REJECT
        return Label.ACCEPT  # forced merges can tie the counts; break toward accept


def build_apta(sample: Sample) -> Automaton:
    """Build the prefix-tree automaton for a sample.

    Shared prefixes share states; per-state occurrence counts, label counts and
    per-edge counts equal the number of traces passing through. The root is
    red and its children are blue (derived).
    """
    if not sample.traces:
        raise EmptySampleError("sample contains no traces")

    n_inputs = len(sample.input_alphabet)
    n_outputs = len(sample.output_alphabet)

    # phase 1: raw tree keyed by node objects
    class _Node:
        __slots__ = ("occurrences", "accept", "reject", "children")

        def __init__(self):
            self.occurrences = 0
            self.accept = 0
            self.reject = 0
            # input id -> (node, output id | None, count)
            self.children: dict[int, list] = {}

    root = _Node()
    for idx, trace in enumerate(sample.traces):
        if sample.mode is Mode.MEALY:
            if trace.outputs is None or len(trace.outputs) != len(trace.inputs):
                raise InconsistentSampleError(
                    f"trace {idx}: output length does not match input length")
            if trace.label is not None:
                raise InconsistentSampleError(f"trace {idx}: labeled trace in mealy mode")
        else:
            if trace.label not in (Label.ACCEPT, Label.REJECT):
                raise InconsistentSampleError(f"trace {idx}: dfa trace without label")
            if trace.outputs is not None:
                raise InconsistentSampleError(f"trace {idx}: outputs in dfa mode")

        node = root
        node.occurrences += 1
        for pos, a in enumerate(trace.inputs):
            if not 0 <= a < n_inputs:
                raise SymbolOutOfAlphabetError(f"trace {idx}: input id {a} out of range")
            o = None
            if sample.mode is Mode.MEALY:
                o = trace.outputs[pos]
                if not 0 <= o < n_outputs:
                    raise SymbolOutOfAlphabetError(f"trace {idx}: output id {o} out of range")
            entry = node.children.get(a)
            if entry is None:
                entry = [_Node(), o, 0]
                node.children[a] = entry
            elif entry[1] != o:
                raise InconsistentSampleError(
                    f"trace {idx}: conflicting outputs on a shared prefix")
            entry[2] += 1
            node = entry[0]
            node.occurrences += 1
        if sample.mode is Mode.DFA:
            if trace.label is Label.ACCEPT:
                node.accept += 1
            else:
                node.reject += 1

    # phase 2: breadth-first id assignment, children in ascending input order
    a = Automaton(sample.mode, sample.input_alphabet.copy(), sample.output_alphabet.copy())
    ids: dict[int, int] = {id(root): 0}
    queue = deque([root])
    order = [root]
    while queue:
        node = queue.popleft()
        if sample.mode is Mode.DFA and node.accept > 0 and node.reject > 0:
            raise InconsistentSampleError(
                "sample labels conflict on one prefix "
                f"(accept={node.accept}, reject={node.reject})")
        for inp in sorted(node.children):
            child = node.children[inp][0]
            ids[id(child)] = len(order)
            order.append(child)
            queue.append(child)

    for node in order:
        a.add_state(ids[id(node)], node.occurrences, node.accept, node.reject)
    for node in order:
        src = ids[id(node)]
        for inp in sorted(node.children):
            child, output, count = node.children[inp]
            a.add_edge(src, inp, ids[id(child)], output, count)

    a.red = {0}
    return a


def classify(a: Automaton, trace: Trace):
    """Run a trace through the automaton.

    DFA mode returns a Label (UNKNOWN when the reached state carries no label
    evidence); Mealy mode returns the tuple of emitted output texts. A missing
    transition makes the trace undefined, reported as None.
    """
    cur = a.start
    if a.mode is Mode.DFA:
        for inp in trace.inputs:
            e = a.states[cur].out.get(inp)
            if e is None:
                return None
            cur = e.target
        return a.dominant_label(cur)
    outputs = []
    for inp in trace.inputs:
        e = a.states[cur].out.get(inp)
        if e is None:
            return None
        outputs.append(a.output_alphabet.text_of(e.output))
        cur = e.target
    return tuple(outputs)


def classify_texts(a: Automaton, input_texts: Iterable[str]):
    """classify() over symbol texts; unknown symbols make the trace undefined."""
    ids = []
    for t in input_texts:
        i = a.input_alphabet.get(t)
        if i is None:
            return None
        ids.append(i)
    return classify(a, Trace(label=None, inputs=tuple(ids)))


def to_json(a: Automaton) -> dict:
    """Canonical document: states sorted by id, transitions by (source, input text)."""
    states = []
    for sid in sorted(a.states):
        st = a.states[sid]
        states.append({
            "id": sid,
            "color": a.color_of(sid),
            "occurrences": st.occurrences,
            "accept": st.accept,
            "reject": st.reject,
        })
    transitions = []
    for sid in sorted(a.states):
        st = a.states[sid]
        rows = []
        for inp, e in st.out.items():
            rows.append({
                "source": sid,
                "target": e.target,
                "input": a.input_alphabet.text_of(inp),
                "output": None if e.output is None else a.output_alphabet.text_of(e.output),
                "count": e.count,
            })
        rows.sort(key=lambda r: r["input"])
        transitions.extend(rows)
    return {
        "mode": a.mode.value,
        "start": a.start,
        "states": states,
        "transitions": transitions,
    }


def canonical_json(a: Automaton) -> str:
    return json.dumps(to_json(a), separators=(",", ":"))


def from_json(doc: dict) -> Automaton:
    """Rebuild an automaton from its JSON document.

    Symbol ids are reassigned in first-appearance order over the serialized
    transition list, so json -> automaton -> json is byte identical.
    """
    mode = Mode(doc["mode"])
    input_alphabet = Alphabet()
    output_alphabet = Alphabet()
    a = Automaton(mode, input_alphabet, output_alphabet)
    a.start = int(doc["start"])
    for s in doc["states"]:
        a.add_state(int(s["id"]), int(s["occurrences"]), int(s["accept"]), int(s["reject"]))
        if s["color"] == "red":
            a.red.add(int(s["id"]))
    for t in doc["transitions"]:
        inp = input_alphabet.add(t["input"])
        out = None if t["output"] is None else output_alphabet.add(t["output"])
        a.add_edge(int(t["source"]), inp, int(t["target"]), out, int(t["count"]))
    if a.start not in a.states:
        raise InconsistentSampleError("start state missing from document")
    return a


def _dot_quote(text: str) -> str:
    return '"{}"'.format(text.replace("\\", "\\\\").replace('"', '\\"'))


def to_dot(a: Automaton) -> str:
    """Deterministic DOT rendering; byte-identical for canonically equal automata."""
    lines = ["digraph automaton {", "  rankdir=LR;",
             "  __start [shape=point];", f"  __start -> {a.start};"]
    for sid in sorted(a.states):
        st = a.states[sid]
        label = _dot_quote(f"{sid} ({st.occurrences})")
        color = a.color_of(sid)
        if color == "red":
            lines.append(f"  {sid} [label={label}, style=filled, fillcolor=red];")
        elif color == "blue":
            lines.append(f"  {sid} [label={label}, style=filled, fillcolor=lightblue];")
        else:
            lines.append(f"  {sid} [label={label}];")
    for sid in sorted(a.states):
        st = a.states[sid]
        rows = []
        for inp, e in st.out.items():
            text = a.input_alphabet.text_of(inp)
            if a.mode is Mode.MEALY:
                text = f"{text}:{a.output_alphabet.text_of(e.output)}"
            rows.append((a.input_alphabet.text_of(inp), e.target, text, e.count))
        rows.sort(key=lambda r: r[0])
        for _, target, text, count in rows:
            lines.append(f"  {sid} -> {target} [label={_dot_quote(f'{text} ({count})')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
