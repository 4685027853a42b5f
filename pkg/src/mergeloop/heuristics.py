"""Merge-evidence scoring: label agreement for DFAs, output agreement for Mealy machines.

A pair scorer returns a non-negative evidence increment, or None for a hard
conflict. `state_count`/`symbol_count` are significance gates: states or
transitions with too little data neither add evidence nor cause conflicts.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Protocol

from .automaton import Mode


@dataclass(frozen=True)
class HeuristicParams:
    state_count: int = 0
    symbol_count: int = 0
    lowerbound: int = 0
    sinkson: bool = False


class StateView(Protocol):
    """What a scorer needs from a state: statistics and outgoing transitions."""

    occurrences: int
    accept: int
    reject: int
    out: dict


def edsm_pair_score(q1: StateView, q2: StateView, params: HeuristicParams) -> int | None:
    """Classic blue-fringe label matching.

    Conflict when one state carries accept evidence and the other reject
    evidence; +1 when both carry the same label. Either way both states must
    be significant (occurrences >= state_count).
    """
    if q1.occurrences < params.state_count or q2.occurrences < params.state_count:
        return 0
    acc1, rej1 = q1.accept > 0, q1.reject > 0
    acc2, rej2 = q2.accept > 0, q2.reject > 0
    if (acc1 and rej2) or (rej1 and acc2):
        return None
    if (acc1 and acc2) or (rej1 and rej2):
        return 1
    return 0


# Weight of the occurrence-overlap evidence term relative to per-transition
# agreement. Calibrated so that correct merges of shallow low-traffic states
# clear useful lowerbounds before the red core has consolidated; pairs that
# share no significant transition stay at zero regardless.
OCCURRENCE_WEIGHT = 2


def mealy_pair_score(q1: StateView, q2: StateView, params: HeuristicParams) -> int | None:
    """Occurrence-weighted output agreement.

    For each input both states emit on (with counts >= symbol_count): differing
    outputs conflict, matching outputs add min(count1, count2). Pairs that
    agree on at least one such input additionally earn their occurrence
    overlap, OCCURRENCE_WEIGHT * min(occurrences); pairs with no shared
    significant input score zero. Pairs where either state is below
    state_count contribute nothing and cannot conflict.
    """
    if q1.occurrences < params.state_count or q2.occurrences < params.state_count:
        return 0
    y = params.symbol_count
    score = 0
    shared = False
    o1, o2 = q1.out, q2.out
    if len(o2) < len(o1):
        o1, o2 = o2, o1
    for inp, e1 in o1.items():
        e2 = o2.get(inp)
        if e2 is None or e1.count < y or e2.count < y:
            continue
        if e1.output != e2.output:
            return None
        shared = True
        score += min(e1.count, e2.count)
    if shared:
        score += OCCURRENCE_WEIGHT * min(q1.occurrences, q2.occurrences)
    return score


@dataclass(frozen=True)
class Heuristic:
    name: str
    mode: Mode
    pair_scorer: Callable[[StateView, StateView, HeuristicParams], int | None]
    conflict_reason: str


EDSM = Heuristic("edsm", Mode.DFA, edsm_pair_score, "label-conflict")
MEALY = Heuristic("mealy", Mode.MEALY, mealy_pair_score, "output-conflict")

_BY_NAME = {h.name: h for h in (EDSM, MEALY)}


def heuristic_by_name(name: str) -> Heuristic:
    try:
        return _BY_NAME[name]
    except KeyError:
        raise KeyError(f"unknown heuristic {name!r}; expected one of {sorted(_BY_NAME)}") from None


def merge_score(fold_pairs, heuristic: Heuristic, params: HeuristicParams) -> int | None:
    """Total evidence of one merge fold: sum of pair increments, None on any conflict."""
    total = 0
    for q1, q2 in fold_pairs:
        inc = heuristic.pair_scorer(q1, q2, params)
        if inc is None:
            return None
        total += inc
    return total


def is_sink(q: StateView, params: HeuristicParams) -> bool:
    """Low-occurrence states are kept out of merging entirely when sinkson is set."""
    return params.sinkson and q.occurrences < params.state_count
