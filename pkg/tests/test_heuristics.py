import pytest
from hypothesis import given, strategies as st

from mergeloop import (
    EDSM,
    MEALY,
    GeneratorConfig,
    HeuristicParams,
    build_apta,
    edsm_pair_score,
    generate_machine,
    heuristic_by_name,
    is_sink,
    mealy_pair_score,
    merge_score,
    sample_traces,
)
from mergeloop.heuristics import OCCURRENCE_WEIGHT


class FakeEdge:
    def __init__(self, output, count):
        self.output = output
        self.count = count
        self.target = -1


class FakeState:
    def __init__(self, occurrences=0, accept=0, reject=0, out=None):
        self.occurrences = occurrences
        self.accept = accept
        self.reject = reject
        self.out = {} if out is None else out


P0 = HeuristicParams()


class TestEdsm:
    def test_matched_accept_labels(self):
        q1 = FakeState(occurrences=5, accept=3)
        q2 = FakeState(occurrences=4, accept=1)
        assert edsm_pair_score(q1, q2, P0) == 1

    def test_label_clash_conflicts(self):
        q1 = FakeState(occurrences=5, accept=3)
        q2 = FakeState(occurrences=4, reject=1)
        assert edsm_pair_score(q1, q2, P0) is None

    def test_unlabeled_side_contributes_nothing(self):
        q1 = FakeState(occurrences=5, accept=3)
        q2 = FakeState(occurrences=4)
        assert edsm_pair_score(q1, q2, P0) == 0

    def test_state_count_gates_conflicts_and_evidence(self):
        params = HeuristicParams(state_count=10)
        q1 = FakeState(occurrences=5, accept=3)
        q2 = FakeState(occurrences=40, reject=1)
        assert edsm_pair_score(q1, q2, params) == 0
        q1_big = FakeState(occurrences=40, accept=3)
        assert edsm_pair_score(q1_big, q2, params) is None


class TestMealy:
    def test_min_of_counts(self):
        # states with only transition data: agreement evidence is min(5, 3)
        q1 = FakeState(out={0: FakeEdge(output=0, count=5)})
        q2 = FakeState(out={0: FakeEdge(output=0, count=3)})
        assert mealy_pair_score(q1, q2, P0) == 3

    def test_occurrence_overlap_added_when_sharing(self):
        q1 = FakeState(occurrences=10, out={0: FakeEdge(0, 5)})
        q2 = FakeState(occurrences=7, out={0: FakeEdge(0, 3)})
        assert mealy_pair_score(q1, q2, P0) == 3 + OCCURRENCE_WEIGHT * 7

    def test_no_shared_input_scores_zero(self):
        q1 = FakeState(occurrences=10, out={0: FakeEdge(0, 5)})
        q2 = FakeState(occurrences=7, out={1: FakeEdge(0, 3)})
        assert mealy_pair_score(q1, q2, P0) == 0

    def test_output_clash_conflicts(self):
        q1 = FakeState(out={0: FakeEdge(output=0, count=5)})
        q2 = FakeState(out={0: FakeEdge(output=1, count=3)})
        assert mealy_pair_score(q1, q2, P0) is None

    def test_symbol_count_gates_thin_transitions(self):
        params = HeuristicParams(symbol_count=4)
        q1 = FakeState(out={0: FakeEdge(0, 5)})
        q2 = FakeState(out={0: FakeEdge(1, 3)})  # clash, but q2's count 3 < 4
        assert mealy_pair_score(q1, q2, params) == 0

    def test_state_count_gates_pair(self):
        params = HeuristicParams(state_count=15)
        q1 = FakeState(occurrences=5, out={0: FakeEdge(0, 5)})
        q2 = FakeState(occurrences=50, out={0: FakeEdge(1, 5)})
        assert mealy_pair_score(q1, q2, params) == 0

    def test_score_matches_recount_from_raw_traces(self):
        # independent recomputation of one pair's evidence from the raw sample
        cfg = GeneratorConfig(seed=7, n_traces=300, stop_probability=0.2)
        machine = generate_machine(cfg)
        sample = sample_traces(machine, cfg)
        a = build_apta(sample)

        def stats_for(prefix):
            occ = 0
            counts = {}
            for t in sample.traces:
                if t.inputs[:len(prefix)] != prefix:
                    continue
                occ += 1
                if len(t.inputs) > len(prefix):
                    nxt = t.inputs[len(prefix)]
                    out = t.outputs[len(prefix)]
                    c, o = counts.get(nxt, (0, out))
                    assert o == out
                    counts[nxt] = (c + 1, out)
            return occ, counts

        root_occ, root_counts = stats_for(())
        child_input = min(root_counts)
        child_occ, child_counts = stats_for((child_input,))

        shared = set(root_counts) & set(child_counts)
        expected = 0
        conflict = False
        for inp in shared:
            (c1, o1), (c2, o2) = root_counts[inp], child_counts[inp]
            if o1 != o2:
                conflict = True
                break
            expected += min(c1, c2)
        if not conflict and shared:
            expected += OCCURRENCE_WEIGHT * min(root_occ, child_occ)

        got = mealy_pair_score(a.states[0], a.states[a.states[0].out[child_input].target], P0)
        assert got == (None if conflict else expected)


class TestMergeScore:
    def test_zero_total_for_empty_evidence(self):
        pairs = [(FakeState(), FakeState())]
        assert merge_score(pairs, MEALY, P0) == 0

    def test_additivity(self):
        pairs = [
            (FakeState(out={0: FakeEdge(0, 2)}), FakeState(out={0: FakeEdge(0, 9)})),
            (FakeState(out={1: FakeEdge(1, 4)}), FakeState(out={1: FakeEdge(1, 4)})),
        ]
        assert merge_score(pairs, MEALY, P0) == 2 + 4

    def test_single_conflict_dominates(self):
        pairs = [
            (FakeState(out={0: FakeEdge(0, 2)}), FakeState(out={0: FakeEdge(0, 9)})),
            (FakeState(out={0: FakeEdge(0, 1)}), FakeState(out={0: FakeEdge(1, 1)})),
        ]
        assert merge_score(pairs, MEALY, P0) is None


class TestSinks:
    def test_disabled_by_default(self):
        assert not is_sink(FakeState(occurrences=0), P0)

    def test_low_occurrence_state_is_sink(self):
        params = HeuristicParams(state_count=15, sinkson=True)
        assert is_sink(FakeState(occurrences=3), params)
        assert not is_sink(FakeState(occurrences=20), params)


class TestLookup:
    def test_by_name(self):
        assert heuristic_by_name("edsm") is EDSM
        assert heuristic_by_name("mealy") is MEALY
        with pytest.raises(KeyError):
            heuristic_by_name("alergia")


st_edges = st.dictionaries(st.integers(0, 3),
                           st.tuples(st.integers(0, 2), st.integers(1, 30)),
                           max_size=4)
st_state = st.builds(
    lambda occ, acc, rej, edges: FakeState(
        occ, acc, rej, {i: FakeEdge(o, c) for i, (o, c) in edges.items()}),
    st.integers(0, 50), st.integers(0, 5), st.integers(0, 5), st_edges)
st_params = st.builds(HeuristicParams, st.integers(0, 20), st.integers(0, 10),
                      st.integers(0, 100), st.booleans())


class TestProperties:
    @given(st_state, st_state, st_params)
    def test_mealy_symmetry(self, q1, q2, params):
        assert mealy_pair_score(q1, q2, params) == mealy_pair_score(q2, q1, params)

    @given(st_state, st_state, st_params)
    def test_scoring_purity(self, q1, q2, params):
        first = mealy_pair_score(q1, q2, params)
        assert all(mealy_pair_score(q1, q2, params) == first for _ in range(3))

    @given(st_state, st_state, st.integers(0, 20), st.integers(0, 10))
    def test_conflict_dominance(self, q1, q2, sc, yc):
        high = HeuristicParams(state_count=sc, symbol_count=yc)
        if mealy_pair_score(q1, q2, high) is None:
            for sc2 in range(sc + 1):
                for yc2 in range(yc + 1):
                    low = HeuristicParams(state_count=sc2, symbol_count=yc2)
                    assert mealy_pair_score(q1, q2, low) is None

    @given(st_state, st_state, st_params)
    def test_edsm_symmetry(self, q1, q2, params):
        assert edsm_pair_score(q1, q2, params) == edsm_pair_score(q2, q1, params)
