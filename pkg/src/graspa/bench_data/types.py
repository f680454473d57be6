"""Value types for layouts, pose sets, logs, grasps and configuration."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

import numpy as np

from ..errors import SemanticError
from ..se3 import Pose, RegionGrid


class Source(str, Enum):
    FORWARD_KINEMATICS = "forward_kinematics"
    VISION = "vision"


class Modality(str, Enum):
    ISOLATION = "isolation"
    CLUTTER = "clutter"


@dataclass(frozen=True)
class ObjectInstance:
    name: str
    mesh_ref: str
    pose: Pose
    mass: float
    min_grip_dimension: float
    graspable_override: bool | None = None
    justification: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise SemanticError(f"object '{self.name}': mass must be positive")
        if not self.min_grip_dimension > 0:
            raise SemanticError(f"object '{self.name}': min_grip_dimension must be positive")
        if self.pose.p[2] < 0:
            raise SemanticError(f"object '{self.name}': pose lies below the board plane")


@dataclass(frozen=True)
class Layout:
    id: int
    objects: tuple
    grid: RegionGrid = RegionGrid()
    base_dir: Path = field(default=Path("."), compare=False)

    def __post_init__(self):
        if self.id not in (0, 1, 2):
            raise SemanticError(f"layout id must be 0, 1 or 2, got {self.id}")
        names = [o.name for o in self.objects]
        dup = {n for n in names if names.count(n) > 1}
        if dup:
            raise SemanticError(f"layout {self.id}: duplicate object name(s) {sorted(dup)}")

    @property
    def n_objects(self) -> int:
        return len(self.objects)

    def object(self, name: str) -> ObjectInstance:
        for o in self.objects:
            if o.name == name:
                return o
        raise KeyError(name)

    def mesh_path(self, obj: ObjectInstance) -> Path:
        return Path(self.base_dir) / obj.mesh_ref


@dataclass(frozen=True)
class PoseSet:
    set_id: int
    poses: tuple  # of (name, Pose)

    def as_dict(self) -> dict:
        return dict(self.poses)


@dataclass(frozen=True)
class ReachLog:
    """Reached pose per set pose; ``None`` marks an attempted but unreached pose."""

    set_id: int
    entries: tuple  # of (name, Pose | None)
    source: Source = Source.FORWARD_KINEMATICS

    def as_dict(self) -> dict:
        return dict(self.entries)


@dataclass(frozen=True)
class GraspTrial:
    pose: Pose
    pregrasp: tuple = ()  # of (joint name, radians)
    hand_ref: str = ""

    @property
    def joints(self) -> dict:
        return dict(self.pregrasp)


@dataclass(frozen=True)
class GraspSet:
    layout_id: int
    objects: tuple  # of (name, tuple[GraspTrial])

    def as_dict(self) -> dict:
        return dict(self.objects)


@dataclass(frozen=True)
class Trial:
    grasped: bool
    waypoints_reached: int = 0
    objects_hit: int | None = None


@dataclass(frozen=True)
class ExecutionLog:
    layout_id: int
    modality: Modality
    objects: tuple  # of (name, tuple[Trial])

    def as_dict(self) -> dict:
        return dict(self.objects)


@dataclass(frozen=True)
class BenchmarkConfig:
    """User-defined benchmark parameters.

    Defaults reproduce the iCub thresholds; ``delta_p`` is fixed by the
    protocol and only carried for the report header.
    """

    tau_p_r: float = 0.02
    tau_o_r: float = 0.5
    tau_p_c: float = 0.045
    tau_o_c: float = 0.8
    trials: int = 5
    mu: float = 0.5
    cone_edges: int = 8
    perturb_dp: float = 0.005
    perturb_da: float = 0.0873
    delta_p: float = 0.15
    approach_axis: tuple = (0.0, 0.0, 1.0)
    uses_vision: bool = True
    modality: Modality = Modality.ISOLATION
    contact_eps: float = 0.001
    closure_step: float = math.radians(1.0)
    ows_samples: int = 200
    seed: int = 0
    robot: str = ""
    end_effector: str = ""

    def __post_init__(self):
        for name in ("tau_p_r", "tau_o_r", "tau_p_c", "tau_o_c"):
            if not getattr(self, name) > 0:
                raise SemanticError(f"config: {name} must be positive")
        for name in ("tau_o_r", "tau_o_c"):
            if getattr(self, name) > math.pi:
                raise SemanticError(f"config: {name} must not exceed pi")
        if self.trials < 1:
            raise SemanticError("config: trials must be at least 1")
        if not self.mu > 0:
            raise SemanticError("config: mu must be positive")
        if self.cone_edges < 3:
            raise SemanticError("config: cone_edges must be at least 3")
        if abs(self.delta_p - 0.15) > 1e-12:
            raise SemanticError("config: delta_p is fixed at 0.15 m by the protocol")
        if not self.contact_eps > 0 or not self.closure_step > 0:
            raise SemanticError("config: contact_eps and closure_step must be positive")
        if self.ows_samples < 20:
            raise SemanticError("config: ows_samples must be at least 20")
        a = np.asarray(self.approach_axis, dtype=float)
        if a.shape != (3,) or abs(np.linalg.norm(a) - 1.0) > 1e-6:
            raise SemanticError("config: approach_axis must be a unit 3-vector")
        object.__setattr__(self, "approach_axis", tuple(float(x) for x in a))
        object.__setattr__(self, "modality", Modality(self.modality))
