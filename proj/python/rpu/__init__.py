from ._core import (
    Game,
    RpuError,
    SolveReport,
    check_kt,
    check_rcar,
    classify,
    contestant,
    counterexample,
    decompose,
    expected_entropy,
    oracle,
    rcar,
    solve,
)

__all__ = [
    "Game",
    "RpuError",
    "SolveReport",
    "check_kt",
    "check_rcar",
    "classify",
    "contestant",
    "counterexample",
    "decompose",
    "expected_entropy",
    "oracle",
    "rcar",
    "solve",
]
