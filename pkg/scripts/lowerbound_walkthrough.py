#!/usr/bin/env python3
"""Lowerbound intervention walkthrough on under-sampled traces.

Runs the automatic learner on a small undersampled slice until it proposes a
zero-evidence merge, then replays the steering recipe: raise the lowerbound,
restart, and leap to exhaustion. Prints both trace logs and held-out scores.
"""
import argparse

from mergeloop import (
    GeneratorConfig,
    HeuristicParams,
    MEALY,
    generate_machine,
    held_out_traces,
    run_batch,
    sample_agreement,
    undersample_traces,
)
from mergeloop.session import Leap, MergeRank, Restart, Session, SetParam


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--n-small", type=int, default=100)
    ap.add_argument("--state-count", type=int, default=15)
    ap.add_argument("--symbol-count", type=int, default=5)
    ap.add_argument("--lowerbound", type=int, default=10, help="intervention bound")
    args = ap.parse_args()

    base = HeuristicParams(state_count=args.state_count, symbol_count=args.symbol_count)
    cfg = GeneratorConfig(seed=args.seed)
    machine = generate_machine(cfg)
    small = undersample_traces(machine, cfg, args.n_small)
    held = held_out_traces(machine, cfg)

    batch_model, batch_log = run_batch(small, base, MEALY)
    batch_accuracy = sample_agreement(batch_model, held)
    print(f"batch log:        {batch_log}")
    print(f"batch model:      {len(batch_model.states)} states, "
          f"held-out {batch_accuracy:.3f}")
    if "m0" not in batch_log.split():
        print("note: this seed executed no zero-evidence merge; try another")

    session = Session(small, base, MEALY)
    merged = 0
    while session.candidates and session.candidates[0].score > 0:
        session.apply(MergeRank(1))
        merged += 1
    print(f"\ninteractive: executed {merged} merges before the first "
          f"rank-1 score-0 proposal")
    session.apply(SetParam("lowerbound", args.lowerbound))
    session.apply(Restart())
    while session.candidates:
        session.apply(Leap(35))
    accuracy = sample_agreement(session.automaton, held)
    print(f"intervention log: {session.trace_log()}")
    print(f"intervention:     {len(session.automaton.states)} states, "
          f"held-out {accuracy:.3f}")
    print(f"\ncommands replayable from: {' | '.join(session.command_log)}")


if __name__ == "__main__":
    main()
