"""Command-line entry point: batch learning, terminal sessions, replay, serving, generation."""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .automaton import to_json
from .dataio import parse_trace_file, serialize_traces, write_step_artifacts
from .errors import MergeloopError, ReplayError
from .generator import GeneratorConfig, generate_machine, sample_traces
from .heuristics import HeuristicParams, heuristic_by_name
from .session import MergeRank, Session, replay

_USAGE_EXIT = 1
_DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(_USAGE_EXIT)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="mergeloop",
                description="Interactive evidence-driven state merging for DFAs "
                            "and Mealy machines.")
    p.add_argument("--mode", choices=("batch", "interactive", "replay", "serve", "generate"),
                   default="batch")
    p.add_argument("--heuristic-name", choices=("edsm", "mealy"), default="mealy")
    p.add_argument("--state-count", type=int, default=0)
    p.add_argument("--symbol-count", type=int, default=0)
    p.add_argument("--lowerbound", type=int, default=0)
    p.add_argument("--sinkson", type=int, choices=(0, 1), default=0)
    p.add_argument("--out-dir", default="out", help="artifact directory")
    p.add_argument("--log", help="command log file (replay mode)")
    p.add_argument("--addr", help="host:port for serve mode (or MERGELOOP_ADDR)")
    p.add_argument("--seed", type=int, default=42, help="generator seed")
    p.add_argument("--n-states", type=int, default=6)
    p.add_argument("--n-inputs", type=int, default=4)
    p.add_argument("--n-outputs", type=int, default=4)
    p.add_argument("--n-traces", type=int, default=1000)
    p.add_argument("--stop-probability", type=float, default=0.1)
    # accepted for invocation compatibility, ignored
    p.add_argument("--data-name", help=argparse.SUPPRESS)
    p.add_argument("--satdfabound", help=argparse.SUPPRESS)
    p.add_argument("input", nargs="?", help="trace file (batch/interactive/replay)")
    return p


def _params_from_args(args) -> HeuristicParams:
    if args.state_count < 0 or args.symbol_count < 0 or args.lowerbound < 0:
        raise MergeloopError("thresholds must be non-negative")
    return HeuristicParams(state_count=args.state_count, symbol_count=args.symbol_count,
                           lowerbound=args.lowerbound, sinkson=bool(args.sinkson))


def _session_from_args(args) -> Session:
    heuristic = heuristic_by_name(args.heuristic_name)
    sample = parse_trace_file(args.input, heuristic.mode)
    return Session(sample, _params_from_args(args), heuristic)


def _candidate_table(session: Session, limit: int | None = 20) -> str:
    rows = session.candidates if limit is None else session.candidates[:limit]
    lines = [f"{'rank':>5} {'red':>6} {'blue':>6} {'score':>8}"]
    lines += [f"{c.rank:>5} {c.red:>6} {c.blue:>6} {c.score:>8}" for c in rows]
    hidden = len(session.candidates) - len(rows)
    if hidden > 0:
        lines.append(f"  ... +{hidden} more (LIST ALL shows everything)")
    return "\n".join(lines)


def _run_batch(args) -> int:
    session = _session_from_args(args)
    while session.candidates:
        session.apply(MergeRank(1))
    write_step_artifacts(session, args.out_dir)
    print(session.trace_log())
    return 0


def _run_interactive(args) -> int:
    session = _session_from_args(args)
    out_dir = Path(args.out_dir)
    write_step_artifacts(session, out_dir)
    _print_prompt(session, out_dir)
    for raw in sys.stdin:
        line = raw.strip()
        if not line:
            continue
        upper = line.upper()
        if upper in ("QUIT", "EXIT"):
            break
        if upper == "LIST ALL":
            print(_candidate_table(session, limit=None))
            continue
        try:
            result = session.apply(line)
        except MergeloopError as exc:
            print(f"error: {exc}")
            continue
        write_step_artifacts(session, out_dir)
        if result.merges_executed > 1:
            print(f"executed {result.merges_executed} merges")
        _print_prompt(session, out_dir)
    return 0


def _print_prompt(session: Session, out_dir: Path) -> None:
    print(f"step {session.step}  states {len(session.automaton.states)}  "
          f"history: {session.trace_log() or '(empty)'}")
    print(_candidate_table(session))
    previous = out_dir / "previous.dot"
    print(f"graphs: {out_dir / 'current.dot'}"
          + (f" | {previous}" if previous.exists() and session.step >= 1 else ""))


def _run_replay(args) -> int:
    if not args.log:
        raise MergeloopError("replay mode needs --log")
    heuristic = heuristic_by_name(args.heuristic_name)
    params = _params_from_args(args)
    sample = parse_trace_file(args.input, heuristic.mode)
    commands = [line.strip() for line in Path(args.log).read_text(encoding="utf-8").splitlines()
                if line.strip() and not line.lstrip().startswith("#")]
    session = replay(sample, params, heuristic, commands)
    write_step_artifacts(session, args.out_dir)
    print(session.trace_log())
    return 0


def _run_serve(args) -> int:
    from .service import serve

    addr = args.addr or os.environ.get("MERGELOOP_ADDR", "127.0.0.1:8180")
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise MergeloopError(f"bad address {addr!r}, expected host:port")
    serve(host, int(port))
    return 0


def _run_generate(args) -> int:
    cfg = GeneratorConfig(seed=args.seed, n_states=args.n_states, n_inputs=args.n_inputs,
                          n_outputs=args.n_outputs, n_traces=args.n_traces,
                          stop_probability=args.stop_probability)
    machine = generate_machine(cfg)
    sample = sample_traces(machine, cfg)
    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    trace_path = out / "traces.txt"
    trace_path.write_text(serialize_traces(sample), encoding="utf-8")
    target_path = out / "target.json"
    target_path.write_text(json.dumps(to_json(machine), indent=2) + "\n", encoding="utf-8")
    print(f"wrote {trace_path} and {target_path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else _USAGE_EXIT
    if args.data_name is not None:
        print("warning: --data-name is accepted for compatibility and ignored",
              file=sys.stderr)
    if args.satdfabound is not None:
        print("warning: --satdfabound belongs to an exact-solving backend that is "
              "not part of this tool; ignored", file=sys.stderr)
    needs_input = args.mode in ("batch", "interactive", "replay")
    if needs_input and not args.input:
        parser.print_usage(sys.stderr)
        print(f"mergeloop: error: mode {args.mode!r} needs a trace file", file=sys.stderr)
        return _USAGE_EXIT
    runner = {"batch": _run_batch, "interactive": _run_interactive, "replay": _run_replay,
              "serve": _run_serve, "generate": _run_generate}[args.mode]
    try:
        return runner(args)
    except ReplayError as exc:
        print(f"mergeloop: replay failed at command {exc.index}: {exc.cause}", file=sys.stderr)
        return _DATA_EXIT
    except MergeloopError as exc:
        print(f"mergeloop: {exc}", file=sys.stderr)
        return _DATA_EXIT
    except OSError as exc:
        print(f"mergeloop: {exc}", file=sys.stderr)
        return _DATA_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
