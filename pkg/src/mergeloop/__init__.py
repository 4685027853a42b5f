"""Interactive evidence-driven state-merging for DFAs and Mealy machines."""

from .automaton import (
    Alphabet,
    Automaton,
    Label,
    Mode,
    Sample,
    Symbol,
    Trace,
    build_apta,
    canonical_json,
    classify,
    classify_texts,
    from_json,
    to_dot,
    to_json,
)
from .generator import (
    GeneratorConfig,
    generate_machine,
    held_out_traces,
    sample_agreement,
    sample_traces,
    undersample_traces,
)
from .heuristics import (
    EDSM,
    MEALY,
    Heuristic,
    HeuristicParams,
    edsm_pair_score,
    heuristic_by_name,
    is_sink,
    mealy_pair_score,
    merge_score,
)
from .merging import (
    KIND_FORCED,
    KIND_MERGE,
    KIND_PROMOTE,
    MergeCandidate,
    MergeEngine,
    MergeRecord,
    MergeReject,
)
from .session import (
    ApplyResult,
    Command,
    Force,
    Insert,
    Leap,
    MergePair,
    MergeRank,
    Restart,
    Session,
    SetParam,
    Undo,
    batch_session,
    command_text,
    parse_command,
    replay,
    run_batch,
)

__version__ = "0.1.0"

__all__ = [
    "Alphabet", "Automaton", "Label", "Mode", "Sample", "Symbol", "Trace",
    "build_apta", "canonical_json", "classify", "classify_texts", "from_json",
    "to_dot", "to_json",
    "GeneratorConfig", "generate_machine", "held_out_traces", "sample_agreement",
    "sample_traces", "undersample_traces",
    "EDSM", "MEALY", "Heuristic", "HeuristicParams", "edsm_pair_score",
    "heuristic_by_name", "is_sink", "mealy_pair_score", "merge_score",
    "KIND_FORCED", "KIND_MERGE", "KIND_PROMOTE",
    "MergeCandidate", "MergeEngine", "MergeRecord", "MergeReject",
    "ApplyResult", "Command", "Force", "Insert", "Leap", "MergePair", "MergeRank",
    "Restart", "Session", "SetParam", "Undo", "batch_session", "command_text",
    "parse_command", "replay", "run_batch",
]
