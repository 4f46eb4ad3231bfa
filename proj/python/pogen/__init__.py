"""PDR model checking with pluggable proof-obligation generalization."""

from ._pogen import (
    InapplicableStrategy,
    InvalidPogp,
    OracleTooLarge,
    ParseError,
    PogpInstance,
    SoundnessAlarm,
    TransitionSystem,
    UnknownStrategy,
    check,
    check_applicable,
    extract,
    generalize,
    oracle,
    performance,
    portfolio,
    reduction_ratio,
    run_cli,
    strategy_names,
    verify_po,
)

__version__ = "0.1.0"


def load(path, constraint_mode="keep_separate"):
    """Reads an ASCII AIGER or DIMSPEC file."""
    with open(path, encoding="utf-8") as f:
        text = f.read()
    if str(path).endswith(".aag") or text.startswith("aag"):
        return TransitionSystem.from_aiger(text, constraint_mode)
    return TransitionSystem.from_dimspec(text)


__all__ = [name for name in dir() if not name.startswith("_")]
