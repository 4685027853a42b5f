"""Undoable state merging with the determinization fold.

A merge identifies a blue state with a red one; wherever that creates two
transitions with the same (source, input), their targets are identified
recursively (depth-first, ascending input id, children before siblings). Every
elementary rewrite is journaled so the whole fold can be inverted exactly, and
trial merges during candidate enumeration roll back through the same journal.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .automaton import Automaton, Edge, State
from .errors import InvalidStatePairError, NotBlueError, StaleRecordError
from .heuristics import Heuristic, HeuristicParams, is_sink

KIND_MERGE = "merge"
KIND_FORCED = "forced-merge"
KIND_PROMOTE = "promote"

REASON_CONSTRAINT = "constraint-violation"
REASON_LOWERBOUND = "below-lowerbound"

_TOKEN_PREFIX = {KIND_MERGE: "m", KIND_FORCED: "f", KIND_PROMOTE: "x"}


@dataclass(frozen=True)
class MergeCandidate:
    red: int
    blue: int
    score: int
    rank: int


@dataclass
class MergeRecord:
    """One applied operation plus the journal that inverts it.

    For merges `score` is the evidence total; for promotions it is the
    promoted state's occurrence count (the `x<count>` rendering).
    """

    kind: str
    red: int | None
    blue: int
    score: int
    ops: list[tuple] = field(repr=False)

    def token(self) -> str:
        return f"{_TOKEN_PREFIX[self.kind]}{self.score}"


class MergeReject(NamedTuple):
    reason: str


def normalize_pair(p: int, q: int) -> tuple[int, int]:
    return (p, q) if p < q else (q, p)


class MergeEngine:
    """Owns one automaton plus the never-merge constraint set and the history stack.

    All mutation goes through journal ops so undo/redo replay exactly; a
    rejected merge rolls its partial journal back, leaving the automaton
    byte-identical.
    """

    def __init__(self, automaton: Automaton, heuristic: Heuristic,
                 params: HeuristicParams,
                 constraints: Iterable[tuple[int, int]] = ()):
        self.automaton = automaton
        self.heuristic = heuristic
        self.params = params
        self.constraints: set[tuple[int, int]] = {normalize_pair(p, q) for p, q in constraints}
        self.applied: list[MergeRecord] = []
        self._ops: list[tuple] | None = None
        self._alias: dict[int, int] = {}
        self._score = 0
        self._fail: str | None = None

    # --- public operations ---

    def try_merge(self, red: int, blue: int):
        """Merge blue into red; returns (record, score) or MergeReject."""
        return self._merge(red, blue, force=False)

    def force_merge(self, red: int, blue: int):
        """Merge ignoring conflicts, constraints and the lowerbound.

        Conflicting Mealy outputs resolve in favor of the red-side transition;
        conflicting DFA labels are summed onto the surviving state.
        """
        result = self._merge(red, blue, force=True)
        assert not isinstance(result, MergeReject)
        return result

    def promote(self, blue: int) -> MergeRecord:
        a = self.automaton
        if not a.is_blue(blue):
            raise NotBlueError(f"state {blue} is not blue")
        self._ops = []
        self._emit(("radd", blue))
        record = MergeRecord(KIND_PROMOTE, None, blue, a.states[blue].occurrences, self._ops)
        self._ops = None
        self.applied.append(record)
        return record

    def undo(self, record: MergeRecord) -> None:
        if not self.applied or self.applied[-1] is not record:
            raise StaleRecordError("record is not the most recent operation")
        for op in reversed(record.ops):
            self._invert_op(op)
        self.applied.pop()

    def redo(self, record: MergeRecord) -> None:
        """Re-apply a record previously removed by undo."""
        for op in record.ops:
            self._apply_op(op)
        self.applied.append(record)

    def enumerate_candidates(self) -> list[MergeCandidate]:
        """Score every red-blue pair by a trial merge that is rolled back.

        Pairs that reject (conflict, constraint, below lowerbound) are dropped;
        survivors are sorted by score desc, then red id, then blue id.
        """
        a = self.automaton
        params = self.params
        reds = sorted(a.red)
        blues = a.blue_states()
        if params.sinkson:
            reds = [r for r in reds if not is_sink(a.states[r], params)]
            blues = [b for b in blues if not is_sink(a.states[b], params)]
        found = []
        for r in reds:
            for b in blues:
                result = self.try_merge(r, b)
                if isinstance(result, MergeReject):
                    continue
                record, score = result
                self.undo(record)
                found.append((score, r, b))
        found.sort(key=lambda t: (-t[0], t[1], t[2]))
        return [MergeCandidate(red=r, blue=b, score=s, rank=i + 1)
                for i, (s, r, b) in enumerate(found)]

    def add_constraint(self, p: int, q: int) -> None:
        states = self.automaton.states
        if p == q or p not in states or q not in states:
            raise InvalidStatePairError(f"({p}, {q}) is not a pair of distinct live states")
        self.constraints.add(normalize_pair(p, q))

    # --- merge internals ---

    def _merge(self, red: int, blue: int, force: bool):
        a = self.automaton
        if red not in a.red:
            raise InvalidStatePairError(f"state {red} is not red")
        if not a.is_blue(blue):
            raise InvalidStatePairError(f"state {blue} is not blue")
        self._ops = []
        self._alias = {}
        self._score = 0
        self._fail = None
        ok = self._identify(red, blue, force)
        if ok and not force and self._score < self.params.lowerbound:
            ok = False
            self._fail = REASON_LOWERBOUND
        if not ok:
            ops = self._ops
            self._ops = None
            for op in reversed(ops):
                self._invert_op(op)
            return MergeReject(self._fail)
        record = MergeRecord(KIND_FORCED if force else KIND_MERGE,
                             red, blue, self._score, self._ops)
        self._ops = None
        self.applied.append(record)
        return record, self._score

    def _find(self, sid: int) -> int:
        alias = self._alias
        while sid in alias:
            sid = alias[sid]
        return sid

    def _identify(self, dst: int, src: int, force: bool) -> bool:
        """Fold src into dst; both must be live and distinct when called."""
        a = self.automaton
        states = a.states
        increment = self.heuristic.pair_scorer(states[dst], states[src], self.params)
        if increment is None:
            if not force:
                self._fail = self.heuristic.conflict_reason
                return False
        else:
            self._score += increment

        if self.constraints:
            for pair in [pr for pr in self.constraints if src in pr]:
                other = pair[1] if pair[0] == src else pair[0]
                self._emit(("cdel",) + pair)
                if other == dst:
                    # identifying the pair is exactly the violation
                    if not force:
                        self._fail = REASON_CONSTRAINT
                        return False
                    continue  # forced: the constraint is moot, drop it
                renamed = normalize_pair(dst, other)
                if renamed not in self.constraints:
                    self._emit(("cadd",) + renamed)

        self._alias[src] = dst
        if src in a.red:
            self._emit(("rdel", src))
            if dst not in a.red:
                self._emit(("radd", dst))

        # point every edge into src at dst (covers self-loops: src's own
        # outgoing targets never equal src afterwards); order is irrelevant,
        # each edge is retargeted exactly once
        for p, inp in list(states[src].inbound):
            self._emit(("ret", p, inp, src, dst))

        s = states[src]
        self._emit(("occ", dst, s.occurrences, s.accept, s.reject))

        for inp in sorted(s.out):
            e = s.out[inp]
            gone_target, gone_output, gone_count = e.target, e.output, e.count
            d = states[self._find(dst)]  # deeper folds may have merged dst away
            kept = d.out.get(inp)
            if kept is None:
                self._emit(("edel", src, inp, gone_target, gone_output, gone_count))
                self._emit(("eadd", d.sid, inp, gone_target, gone_output, gone_count))
            else:
                keep_target = kept.target
                self._emit(("cnt", d.sid, inp, gone_count))
                self._emit(("edel", src, inp, gone_target, gone_output, gone_count))
                if keep_target != gone_target:
                    if not self._identify(keep_target, gone_target, force):
                        return False

        self._emit(("sdel", src, s.occurrences, s.accept, s.reject))
        return True

    # --- journal ---

    def _emit(self, op: tuple) -> None:
        self._apply_op(op)
        self._ops.append(op)

    def _apply_op(self, op: tuple) -> None:
        a = self.automaton
        states = a.states
        kind = op[0]
        if kind == "occ":
            _, sid, d_occ, d_acc, d_rej = op
            st = states[sid]
            st.occurrences += d_occ
            st.accept += d_acc
            st.reject += d_rej
        elif kind == "cnt":
            _, sid, inp, delta = op
            states[sid].out[inp].count += delta
        elif kind == "ret":
            _, p, inp, old_t, new_t = op
            edge = states[p].out[inp]
            states[old_t].inbound.discard((p, inp))
            edge.target = new_t
            states[new_t].inbound.add((p, inp))
        elif kind == "eadd":
            _, sid, inp, target, output, count = op
            states[sid].out[inp] = Edge(target, output, count)
            states[target].inbound.add((sid, inp))
        elif kind == "edel":
            _, sid, inp, target, _output, _count = op
            del states[sid].out[inp]
            states[target].inbound.discard((sid, inp))
        elif kind == "sdel":
            st = states.pop(op[1])
            assert not st.out and not st.inbound
        elif kind == "radd":
            a.red.add(op[1])
        elif kind == "rdel":
            a.red.discard(op[1])
        elif kind == "cadd":
            self.constraints.add((op[1], op[2]))
        elif kind == "cdel":
            self.constraints.discard((op[1], op[2]))
        else:  # pragma: no cover
            raise AssertionError(f"unknown journal op {kind}")

    def _invert_op(self, op: tuple) -> None:
        a = self.automaton
        states = a.states
        kind = op[0]
        if kind == "occ":
            _, sid, d_occ, d_acc, d_rej = op
            st = states[sid]
            st.occurrences -= d_occ
            st.accept -= d_acc
            st.reject -= d_rej
        elif kind == "cnt":
            _, sid, inp, delta = op
            states[sid].out[inp].count -= delta
        elif kind == "ret":
            _, p, inp, old_t, new_t = op
            edge = states[p].out[inp]
            states[new_t].inbound.discard((p, inp))
            edge.target = old_t
            states[old_t].inbound.add((p, inp))
        elif kind == "eadd":
            _, sid, inp, target, _output, _count = op
            del states[sid].out[inp]
            states[target].inbound.discard((sid, inp))
        elif kind == "edel":
            _, sid, inp, target, output, count = op
            states[sid].out[inp] = Edge(target, output, count)
            states[target].inbound.add((sid, inp))
        elif kind == "sdel":
            _, sid, occ, acc, rej = op
            states[sid] = State(sid, occ, acc, rej)
        elif kind == "radd":
            a.red.discard(op[1])
        elif kind == "rdel":
            a.red.add(op[1])
        elif kind == "cadd":
            self.constraints.discard((op[1], op[2]))
        elif kind == "cdel":
            self.constraints.add((op[1], op[2]))
        else:  # pragma: no cover
            raise AssertionError(f"unknown journal op {kind}")
