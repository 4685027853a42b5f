"""Interactive learning session: command interpretation, stabilization, batch, replay.

A session owns a merge engine over the prefix-tree automaton built from its
sample. After every state change it re-stabilizes (promotes blue states that
cannot merge with any red state, lowest id first) where the command calls for
it, and recomputes the ranked candidate list. Batch mode is the session that
always takes the top-ranked candidate.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Union

from .automaton import Automaton, Sample, build_apta, to_dot
from .errors import (
    BadCommandSyntaxError,
    CommandError,
    EmptyHistoryError,
    InvalidValueError,
    NotACandidateError,
    ReplayError,
    UnknownParamError,
    UnknownRankError,
)
from .heuristics import Heuristic, HeuristicParams, is_sink
from .merging import MergeCandidate, MergeEngine, MergeReject, normalize_pair

PARAM_NAMES = ("state_count", "symbol_count", "lowerbound", "sinkson")
_PARAM_ALIASES = {"lower_bound": "lowerbound", "state-count": "state_count",
                  "symbol-count": "symbol_count"}


@dataclass(frozen=True)
class MergeRank:
    rank: int


@dataclass(frozen=True)
class MergePair:
    red: int
    blue: int


@dataclass(frozen=True)
class Undo:
    pass


@dataclass(frozen=True)
class Restart:
    pass


@dataclass(frozen=True)
class Leap:
    n: int


@dataclass(frozen=True)
class SetParam:
    name: str
    value: Union[int, bool, str]


@dataclass(frozen=True)
class Force:
    red: int
    blue: int


@dataclass(frozen=True)
class Insert:
    p: int
    q: int


Command = Union[MergeRank, MergePair, Undo, Restart, Leap, SetParam, Force, Insert]


def parse_command(text: str) -> Command:
    """Parse one line of the command grammar (keywords are case-insensitive)."""
    tokens = text.split()
    if not tokens:
        raise BadCommandSyntaxError("empty command")
    keyword = tokens[0].upper()
    args = tokens[1:]

    def as_int(token: str) -> int:
        try:
            return int(token)
        except ValueError:
            raise BadCommandSyntaxError(f"expected an integer, got {token!r}") from None

    if keyword == "MERGE":
        if len(args) == 1:
            return MergeRank(as_int(args[0]))
        if len(args) == 2:
            return MergePair(as_int(args[0]), as_int(args[1]))
        raise BadCommandSyntaxError("MERGE takes <rank> or <red> <blue>")
    if keyword == "UNDO":
        if args:
            raise BadCommandSyntaxError("UNDO takes no arguments")
        return Undo()
    if keyword == "RESTART":
        if args:
            raise BadCommandSyntaxError("RESTART takes no arguments")
        return Restart()
    if keyword == "LEAP":
        if len(args) != 1:
            raise BadCommandSyntaxError("LEAP takes <n>")
        return Leap(as_int(args[0]))
    if keyword == "SET":
        if len(args) != 2:
            raise BadCommandSyntaxError("SET takes <param> <value>")
        name = args[0].lower()
        return SetParam(_PARAM_ALIASES.get(name, name), args[1])
    if keyword == "FORCE":
        if len(args) != 2:
            raise BadCommandSyntaxError("FORCE takes <red> <blue>")
        return Force(as_int(args[0]), as_int(args[1]))
    if keyword == "INSERT":
        if len(args) != 2:
            raise BadCommandSyntaxError("INSERT takes <p> <q>")
        return Insert(as_int(args[0]), as_int(args[1]))
    raise BadCommandSyntaxError(f"unknown command {tokens[0]!r}")


def command_text(cmd: Command) -> str:
    """Canonical one-line rendering; parse_command(command_text(c)) == c."""
    if isinstance(cmd, MergeRank):
        return f"MERGE {cmd.rank}"
    if isinstance(cmd, MergePair):
        return f"MERGE {cmd.red} {cmd.blue}"
    if isinstance(cmd, Undo):
        return "UNDO"
    if isinstance(cmd, Restart):
        return "RESTART"
    if isinstance(cmd, Leap):
        return f"LEAP {cmd.n}"
    if isinstance(cmd, SetParam):
        value = cmd.value
        if isinstance(value, bool):
            value = int(value)
        return f"SET {cmd.name} {value}"
    if isinstance(cmd, Force):
        return f"FORCE {cmd.red} {cmd.blue}"
    if isinstance(cmd, Insert):
        return f"INSERT {cmd.p} {cmd.q}"
    raise TypeError(f"not a command: {cmd!r}")


@dataclass
class ApplyResult:
    command: Command
    merges_executed: int = 0


class Session:
    """One interactive run over a fixed sample.

    The history stack lives on the merge engine; SET parameters and INSERTed
    constraints survive RESTART (constraints are re-seeded from their original
    state ids against the fresh prefix tree).
    """

    def __init__(self, sample: Sample, params: HeuristicParams, heuristic: Heuristic):
        if heuristic.mode is not sample.mode:
            raise ValueError(
                f"heuristic {heuristic.name!r} expects {heuristic.mode.value} samples, "
                f"got {sample.mode.value}")
        self.sample = sample
        self.heuristic = heuristic
        self.inserted_constraints: list[tuple[int, int]] = []
        self.command_log: list[str] = []
        self.candidates: list[MergeCandidate] = []
        self.engine = MergeEngine(build_apta(sample), heuristic, params)
        self.stabilize()

    # --- views ---

    @property
    def automaton(self) -> Automaton:
        return self.engine.automaton

    @property
    def params(self) -> HeuristicParams:
        return self.engine.params

    @property
    def history(self):
        return self.engine.applied

    @property
    def step(self) -> int:
        return len(self.engine.applied)

    def trace_log(self) -> str:
        return " ".join(record.token() for record in self.engine.applied)

    def current_dot(self) -> str:
        return to_dot(self.automaton)

    def previous_dot(self) -> str | None:
        """Render the automaton as it was one history record ago."""
        if not self.engine.applied:
            return None
        record = self.engine.applied[-1]
        self.engine.undo(record)
        try:
            return to_dot(self.automaton)
        finally:
            self.engine.redo(record)

    # --- state maintenance ---

    def recompute_candidates(self) -> None:
        self.candidates = self.engine.enumerate_candidates()

    def stabilize(self) -> None:
        """Promote blue states that cannot merge with any red state.

        Repeats (lowest blue id first) until every non-sink blue state has at
        least one candidate or no blue states remain; sink states are left as
        unprocessed fringe. A promotion changes colors but no structure, so
        only the pairs it creates are scored; everything else is kept.
        """
        self.recompute_candidates()
        while True:
            a = self.automaton
            mergeable = {c.blue for c in self.candidates}
            lonely = [b for b in a.blue_states()
                      if b not in mergeable and not is_sink(a.states[b], self.params)]
            if not lonely:
                return
            promoted = lonely[0]
            before = set(a.blue_states())
            self.engine.promote(promoted)
            blues_now = a.blue_states()
            fresh_blues = [b for b in blues_now if b not in before]
            scored = [(c.score, c.red, c.blue) for c in self.candidates
                      if c.blue != promoted]
            scored.extend(self._score_pairs([promoted], blues_now))
            scored.extend(self._score_pairs(sorted(a.red - {promoted}), fresh_blues))
            scored.sort(key=lambda t: (-t[0], t[1], t[2]))
            self.candidates = [MergeCandidate(red=r, blue=b, score=s, rank=i + 1)
                               for i, (s, r, b) in enumerate(scored)]

    def _score_pairs(self, reds, blues) -> list[tuple[int, int, int]]:
        """Trial-merge the given red x blue pairs; returns (score, red, blue) rows."""
        a = self.automaton
        params = self.params
        if params.sinkson:
            reds = [r for r in reds if not is_sink(a.states[r], params)]
            blues = [b for b in blues if not is_sink(a.states[b], params)]
        rows = []
        for r in reds:
            for b in blues:
                result = self.engine.try_merge(r, b)
                if isinstance(result, MergeReject):
                    continue
                record, score = result
                self.engine.undo(record)
                rows.append((score, r, b))
        return rows

    # --- commands ---

    def apply(self, command: Command | str) -> ApplyResult:
        cmd = parse_command(command) if isinstance(command, str) else command
        result = self._dispatch(cmd)
        self.command_log.append(command_text(cmd))
        return result

    def _dispatch(self, cmd: Command) -> ApplyResult:
        if isinstance(cmd, MergeRank):
            if not 1 <= cmd.rank <= len(self.candidates):
                raise UnknownRankError(
                    f"rank {cmd.rank} not in 1..{len(self.candidates)}")
            self._execute_candidate(self.candidates[cmd.rank - 1])
            return ApplyResult(cmd, merges_executed=1)

        if isinstance(cmd, MergePair):
            match = next((c for c in self.candidates
                          if c.red == cmd.red and c.blue == cmd.blue), None)
            if match is None:
                raise NotACandidateError(f"({cmd.red}, {cmd.blue}) is not a listed candidate")
            self._execute_candidate(match)
            return ApplyResult(cmd, merges_executed=1)

        if isinstance(cmd, Undo):
            if not self.engine.applied:
                raise EmptyHistoryError("nothing to undo")
            self.engine.undo(self.engine.applied[-1])
            self.recompute_candidates()
            return ApplyResult(cmd)

        if isinstance(cmd, Restart):
            constraints = list(self.inserted_constraints)
            self.engine = MergeEngine(build_apta(self.sample), self.heuristic,
                                      self.params, constraints)
            self.stabilize()
            return ApplyResult(cmd)

        if isinstance(cmd, Leap):
            if cmd.n < 1:
                raise InvalidValueError(f"LEAP needs n >= 1, got {cmd.n}")
            executed = 0
            while executed < cmd.n and self.candidates:
                self._execute_candidate(self.candidates[0])
                executed += 1
            return ApplyResult(cmd, merges_executed=executed)

        if isinstance(cmd, SetParam):
            name = _PARAM_ALIASES.get(cmd.name, cmd.name)
            if name not in PARAM_NAMES:
                raise UnknownParamError(f"unknown parameter {cmd.name!r}")
            value = _coerce_param(name, cmd.value)
            self.engine.params = dataclasses.replace(self.params, **{name: value})
            self.stabilize()
            return ApplyResult(cmd)

        if isinstance(cmd, Force):
            self.engine.force_merge(cmd.red, cmd.blue)
            self.recompute_candidates()
            return ApplyResult(cmd, merges_executed=1)

        if isinstance(cmd, Insert):
            self.engine.add_constraint(cmd.p, cmd.q)
            self.inserted_constraints.append(normalize_pair(cmd.p, cmd.q))
            self.recompute_candidates()
            return ApplyResult(cmd)

        raise TypeError(f"not a command: {cmd!r}")

    def _execute_candidate(self, candidate: MergeCandidate) -> None:
        result = self.engine.try_merge(candidate.red, candidate.blue)
        if isinstance(result, MergeReject):  # pragma: no cover - candidates are pre-validated
            raise RuntimeError(
                f"listed candidate ({candidate.red}, {candidate.blue}) rejected: {result.reason}")
        self.stabilize()


def _coerce_param(name: str, value) -> int | bool:
    if name == "sinkson":
        if isinstance(value, bool):
            return value
        if isinstance(value, int) and value in (0, 1):
            return bool(value)
        if isinstance(value, str):
            lowered = value.lower()
            if lowered in ("1", "true"):
                return True
            if lowered in ("0", "false"):
                return False
        raise InvalidValueError(f"sinkson takes 0/1/true/false, got {value!r}")
    try:
        number = int(value)
    except (TypeError, ValueError):
        raise InvalidValueError(f"{name} takes a non-negative integer, got {value!r}") from None
    if number < 0:
        raise InvalidValueError(f"{name} takes a non-negative integer, got {number}")
    return number


def run_batch(sample: Sample, params: HeuristicParams,
              heuristic: Heuristic) -> tuple[Automaton, str]:
    """Fully automatic run: always execute the top-ranked candidate."""
    session = batch_session(sample, params, heuristic)
    return session.automaton, session.trace_log()


def batch_session(sample: Sample, params: HeuristicParams, heuristic: Heuristic) -> Session:
    session = Session(sample, params, heuristic)
    while session.candidates:
        session.apply(MergeRank(1))
    return session


def replay(sample: Sample, params: HeuristicParams, heuristic: Heuristic,
           commands: list[str]) -> Session:
    """Re-run a recorded command log; fails fast with the failing line index."""
    session = Session(sample, params, heuristic)
    for index, line in enumerate(commands):
        try:
            session.apply(line)
        except (CommandError, BadCommandSyntaxError) as exc:
            raise ReplayError(index, exc) from exc
    return session
