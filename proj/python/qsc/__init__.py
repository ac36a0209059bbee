"""Python bindings for the shared-control simulator core."""

from ._core import (
    case_info,
    discretize,
    entropy_bits,
    info_gain_bits,
    physics_step,
    run,
    shaped_reward,
    teacher_inject,
)

__all__ = [
    "case_info",
    "discretize",
    "entropy_bits",
    "info_gain_bits",
    "physics_step",
    "run",
    "shaped_reward",
    "teacher_inject",
]
