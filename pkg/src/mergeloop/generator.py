"""Seedable target-machine generation and trace sampling.

Machines are complete, strongly connected, minimal Mealy machines; traces are
random walks with geometric length (at least one step, mean 1/stop_probability).
The same config always produces the same machine and the same traces, and a
smaller sample is a prefix of the larger one.
"""
from __future__ import annotations

import random
from dataclasses import dataclass

from .automaton import Alphabet, Automaton, Mode, Sample, Trace, classify
from .errors import GenerationFailedError

_MAX_ATTEMPTS = 5000


@dataclass(frozen=True)
class GeneratorConfig:
    seed: int
    n_states: int = 6
    n_inputs: int = 4
    n_outputs: int = 4
    n_traces: int = 1000
    stop_probability: float = 0.1

    def __post_init__(self):
        if self.n_states < 1 or self.n_inputs < 1 or self.n_outputs < 1 or self.n_traces < 1:
            raise ValueError("n_states, n_inputs, n_outputs and n_traces must be >= 1")
        if not 0.0 < self.stop_probability < 1.0:
            raise ValueError("stop_probability must be in (0, 1)")


def _letters(count: int, base: str) -> list[str]:
    start = ord(base)
    if count <= 26 - (start - ord("a")) % 26:
        return [chr(start + i) for i in range(count)]
    return [f"{base}{i}" for i in range(count)]


def input_names(count: int) -> list[str]:
    return _letters(count, "a")


def output_names(count: int) -> list[str]:
    return _letters(count, "p")


def generate_machine(cfg: GeneratorConfig) -> Automaton:
    """Draw random complete Mealy machines until one satisfies all shape checks.

    Accepted machines are strongly connected, minimal, and have a maximally
    spread start fanout: the start state's transitions reach as many distinct
    non-start states as the alphabet allows. The fanout condition keeps all
    but at most one state discoverable from high-evidence shallow prefixes,
    which is what makes the sampled learning problems well-conditioned at
    desk scale.
    """
    rng = random.Random(f"mergeloop-machine:{cfg.seed}")
    for _ in range(_MAX_ATTEMPTS):
        delta = [[(rng.randrange(cfg.n_states), rng.randrange(cfg.n_outputs))
                  for _ in range(cfg.n_inputs)]
                 for _ in range(cfg.n_states)]
        if cfg.n_states > 1:
            fanout = [target for target, _ in delta[0]]
            spread = min(cfg.n_inputs, cfg.n_states - 1)
            if 0 in fanout or len(set(fanout)) != spread:
                continue
        if _strongly_connected(delta, cfg.n_states) and _is_minimal(delta, cfg.n_states):
            return _as_automaton(delta, cfg)
    raise GenerationFailedError(
        f"no machine satisfying the shape checks found for {cfg} "
        f"after {_MAX_ATTEMPTS} attempts")


def _strongly_connected(delta, n_states: int) -> bool:
    forward = [set(t for t, _ in row) for row in delta]
    backward = [set() for _ in range(n_states)]
    for s, row in enumerate(delta):
        for t, _ in row:
            backward[t].add(s)
    return (_reaches_all(forward, n_states) and _reaches_all(backward, n_states))


def _reaches_all(adjacency, n_states: int) -> bool:
    seen = {0}
    stack = [0]
    while stack:
        for t in adjacency[stack.pop()]:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return len(seen) == n_states


def _is_minimal(delta, n_states: int) -> bool:
    """Pairwise distinguishability by table filling.

    A pair is distinguishable when some input gives different outputs, or leads
    to a distinguishable pair; the machine is minimal when every pair is.
    """
    n_inputs = len(delta[0])
    marked = set()
    for p in range(n_states):
        for q in range(p + 1, n_states):
            if any(delta[p][a][1] != delta[q][a][1] for a in range(n_inputs)):
                marked.add((p, q))
    changed = True
    while changed:
        changed = False
        for p in range(n_states):
            for q in range(p + 1, n_states):
                if (p, q) in marked:
                    continue
                for a in range(n_inputs):
                    tp, tq = delta[p][a][0], delta[q][a][0]
                    if tp == tq:
                        continue
                    key = (tp, tq) if tp < tq else (tq, tp)
                    if key in marked:
                        marked.add((p, q))
                        changed = True
                        break
    return len(marked) == n_states * (n_states - 1) // 2


def _as_automaton(delta, cfg: GeneratorConfig) -> Automaton:
    inputs = Alphabet(input_names(cfg.n_inputs))
    outputs = Alphabet(output_names(cfg.n_outputs))
    a = Automaton(Mode.MEALY, inputs, outputs)
    for sid in range(cfg.n_states):
        a.add_state(sid, occurrences=cfg.n_inputs)
    for sid, row in enumerate(delta):
        for inp, (target, output) in enumerate(row):
            a.add_edge(sid, inp, target, output, 1)
    a.red = {0}
    return a


def sample_traces(machine: Automaton, cfg: GeneratorConfig,
                  n_traces: int | None = None, stream: str = "train") -> Sample:
    """Random walks from the start state; every walk takes at least one step.

    Distinct `stream` names draw from independent deterministic streams, so
    held-out data never overlaps the training draw.
    """
    rng = random.Random(f"mergeloop-traces:{cfg.seed}:{stream}")
    n = cfg.n_traces if n_traces is None else n_traces
    n_inputs = len(machine.input_alphabet)
    traces = []
    for _ in range(n):
        cur = machine.start
        ins: list[int] = []
        outs: list[int] = []
        while True:
            a = rng.randrange(n_inputs)
            edge = machine.states[cur].out[a]
            ins.append(a)
            outs.append(edge.output)
            cur = edge.target
            if rng.random() < cfg.stop_probability:
                break
        traces.append(Trace(label=None, inputs=tuple(ins), outputs=tuple(outs)))
    return Sample(Mode.MEALY, traces,
                  machine.input_alphabet.copy(), machine.output_alphabet.copy())


def undersample_traces(machine: Automaton, cfg: GeneratorConfig, n_small: int) -> Sample:
    """The first n_small walks of the training stream."""
    if not 1 <= n_small < cfg.n_traces:
        raise ValueError(f"n_small must be in 1..{cfg.n_traces - 1}, got {n_small}")
    return sample_traces(machine, cfg, n_traces=n_small)


def held_out_traces(machine: Automaton, cfg: GeneratorConfig,
                    n_traces: int | None = None) -> Sample:
    return sample_traces(machine, cfg, n_traces=n_traces, stream="heldout")


def sample_agreement(a: Automaton, sample: Sample) -> float:
    """Fraction of traces whose recorded outcome the automaton reproduces exactly.

    Traces in the sample carry the data source's own outputs/labels, so this is
    agreement with the source; undefined classifications count as disagreement.
    """
    if not sample.traces:
        return 1.0
    good = 0
    for trace in sample.traces:
        got = classify(a, _translate(trace, sample, a))
        if a.mode is Mode.MEALY:
            want = tuple(sample.output_alphabet.text_of(o) for o in trace.outputs)
            good += got == want
        else:
            good += got is not None and got is trace.label
    return good / len(sample.traces)


def _translate(trace: Trace, sample: Sample, a: Automaton) -> Trace:
    """Re-key a trace's input ids into the automaton's own alphabet."""
    if a.input_alphabet == sample.input_alphabet:
        return trace
    ids = []
    for i in trace.inputs:
        mapped = a.input_alphabet.get(sample.input_alphabet.text_of(i))
        if mapped is None:
            return Trace(label=trace.label, inputs=(-1,))  # forces undefined
        ids.append(mapped)
    return Trace(label=trace.label, inputs=tuple(ids), outputs=None)
