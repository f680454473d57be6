"""Execution scores: success (S4), stability (S5), obstacle avoidance (S6).

Trial outcomes are experimenter-recorded facts; this module only checks
their ranges and averages them. It also produces the fixed stability
trajectory so that experimenters can command the robot from it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bench_data.types import BenchmarkConfig, ExecutionLog, Modality
from .errors import ModalityError, RangeError, TrialCountMismatch
from .se3 import Pose, rotation

N_WAYPOINTS = 5
LIFT = 0.15
TWIST = math.radians(45.0)
TILT = math.radians(30.0)
VERTICAL_TOL = math.radians(1.0)
BOARD_Z = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class StabilityTrajectory:
    grasp: Pose
    lifted: Pose
    waypoints: tuple  # w1..w5
    tilt_axis: np.ndarray
    duration: float = 2.0

    @property
    def poses(self) -> list:
        return [self.lifted, *self.waypoints]


def tilt_axis(approach_world) -> np.ndarray:
    """Board-frame axis that tips the approach direction toward the table.

    For a vertical approach the tilt plane is undefined and the board x axis
    is used instead.
    """
    a = np.asarray(approach_world, dtype=float)
    a = a / np.linalg.norm(a)
    if math.acos(min(1.0, abs(a[2]))) < VERTICAL_TOL:
        return np.array([1.0, 0.0, 0.0])
    n = np.cross(BOARD_Z, a)
    return n / np.linalg.norm(n)


def stability_waypoints(grasp: Pose, approach_axis=(0.0, 0.0, 1.0), config: BenchmarkConfig | None = None
                        ) -> StabilityTrajectory:
    """Lifted pose and the five stability waypoints for a grasp.

    All waypoints share the lifted position. w1/w3 twist the hand by
    +-45 deg about its approach axis (right-multiplied), w2/w4 restore the
    grasp orientation and w5 tips the approach axis 30 deg toward the table
    within its vertical plane.
    """
    lift = config.delta_p if config is not None else LIFT
    a = np.asarray(approach_axis, dtype=float)
    a = a / np.linalg.norm(a)
    p0 = grasp.p + lift * BOARD_Z
    R = grasp.R
    a_world = R @ a
    n = tilt_axis(a_world)
    # a positive turn about z x a starts by lowering a . z
    R_perp_world = rotation(n, TILT)
    R5 = R_perp_world @ R
    wps = (
        Pose(p0, R @ rotation(a, TWIST)),
        Pose(p0, R),
        Pose(p0, R @ rotation(a, -TWIST)),
        Pose(p0, R),
        Pose(p0, R5),
    )
    return StabilityTrajectory(grasp, Pose(p0, R), wps, n)


def _trials(log: ExecutionLog, obj: str, T: int):
    trials = log.as_dict().get(obj)
    if trials is None or len(trials) != T:
        got = 0 if trials is None else len(trials)
        raise TrialCountMismatch(f"object '{obj}': {got} trials logged, expected {T}")
    return trials


def success_trials(log: ExecutionLog, obj: str, T: int) -> list:
    return [1.0 if t.grasped else 0.0 for t in _trials(log, obj, T)]


def stability_trials(log: ExecutionLog, obj: str, T: int) -> list:
    out = []
    for t in _trials(log, obj, T):
        if not 0 <= t.waypoints_reached <= N_WAYPOINTS:
            raise RangeError(f"object '{obj}': {t.waypoints_reached} waypoints is outside 0..{N_WAYPOINTS}")
        out.append(t.waypoints_reached / N_WAYPOINTS)
    return out


def obstacle_trials(log: ExecutionLog, obj: str, T: int, n_obj: int) -> list:
    if log.modality is not Modality.CLUTTER:
        raise ModalityError("obstacle avoidance is only scored in clutter modality")
    out = []
    for t in _trials(log, obj, T):
        hits = t.objects_hit or 0
        if not 0 <= hits <= n_obj:
            raise RangeError(f"object '{obj}': {hits} hits with {n_obj} objects")
        out.append(1.0 - hits / n_obj)
    return out


def score_success(log: ExecutionLog, obj: str, T: int) -> float:
    return float(np.mean(success_trials(log, obj, T)))


def score_stability(log: ExecutionLog, obj: str, T: int) -> float:
    return float(np.mean(stability_trials(log, obj, T)))


def score_obstacles(log: ExecutionLog, obj: str, T: int, n_obj: int) -> float:
    return float(np.mean(obstacle_trials(log, obj, T, n_obj)))


@dataclass
class ExecutionScores:
    """Per-trial execution vectors for one object."""

    s4: list
    s5: list
    s6: list | None = None

    @property
    def mean_s4(self) -> float:
        return float(np.mean(self.s4))

    @property
    def mean_s5(self) -> float:
        return float(np.mean(self.s5))

    @property
    def mean_s6(self) -> float | None:
        return None if self.s6 is None else float(np.mean(self.s6))


def score_execution(log: ExecutionLog, obj: str, T: int, n_obj: int) -> ExecutionScores:
    s6 = obstacle_trials(log, obj, T, n_obj) if log.modality is Modality.CLUTTER else None
    return ExecutionScores(success_trials(log, obj, T), stability_trials(log, obj, T), s6)
