import hypothesis

from mergeloop import Alphabet, Label, Mode, Sample, Trace

hypothesis.settings.register_profile(
    "suite", max_examples=40, deadline=None,
    suppress_health_check=[hypothesis.HealthCheck.too_slow])
hypothesis.settings.load_profile("suite")


def dfa_sample(rows):
    """rows: (label_char '+'|'-', word) pairs over single-character symbols."""
    alphabet = Alphabet()
    traces = []
    for label, word in rows:
        traces.append(Trace(
            label=Label.ACCEPT if label == "+" else Label.REJECT,
            inputs=tuple(alphabet.add(ch) for ch in word)))
    return Sample(Mode.DFA, traces, alphabet)


def mealy_sample(rows):
    """rows: (input_word, output_word) string pairs over single-character symbols."""
    inputs = Alphabet()
    outputs = Alphabet()
    traces = []
    for ins, outs in rows:
        assert len(ins) == len(outs)
        traces.append(Trace(
            label=None,
            inputs=tuple(inputs.add(ch) for ch in ins),
            outputs=tuple(outputs.add(ch) for ch in outs)))
    return Sample(Mode.MEALY, traces, inputs, outputs)
