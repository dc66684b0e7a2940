"""Closed-form inverse kinematics for a 7-DOF arm with a wrist offset."""

from ._core import (
    Branch,
    Rejection,
    RobotParams,
    SolutionSet,
    SolverError,
    arm_angle,
    classify,
    fk,
    frame_points,
    solve,
    solve_quartic,
)

__all__ = [
    "Branch",
    "Rejection",
    "RobotParams",
    "SolutionSet",
    "SolverError",
    "arm_angle",
    "classify",
    "fk",
    "frame_points",
    "solve",
    "solve_quartic",
]
