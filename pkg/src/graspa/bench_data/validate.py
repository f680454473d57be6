"""Cross-file consistency checks run before any scoring."""
from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import GraspaError
from .mesh import load_mesh
from .types import BenchmarkConfig, ExecutionLog, GraspSet, Layout, Modality, PoseSet, ReachLog, Source


@dataclass
class ValidationReport:
    errors: list = field(default_factory=list)
    warnings: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, msg: str) -> None:
        self.errors.append(msg)

    def warn(self, msg: str) -> None:
        self.warnings.append(msg)

    def lines(self) -> list:
        return [f"error: {m}" for m in self.errors] + [f"warning: {m}" for m in self.warnings]


def validate_dataset(layout: Layout | None = None, pose_sets=(), logs=(), grasps: GraspSet | None = None,
                     executions: ExecutionLog | None = None, config: BenchmarkConfig = BenchmarkConfig(),
                     check_meshes: bool = True) -> ValidationReport:
    """Check that parsed files agree with each other.

    An empty report (no errors) means the dataset can be scored.
    """
    rep = ValidationReport()
    sets = {ps.set_id: ps for ps in pose_sets}
    for log in logs:
        _check_reach_log(log, sets, config, rep)
    if layout is None:
        return rep
    names = [o.name for o in layout.objects]
    if check_meshes:
        for obj in layout.objects:
            try:
                mesh = load_mesh(layout.mesh_path(obj))
            except (GraspaError, OSError) as exc:
                rep.error(f"object '{obj.name}': cannot load mesh {obj.mesh_ref}: {exc}")
                continue
            com = obj.pose.apply(mesh.center_of_mass)
            if not layout.grid.contains(com[:2]):
                rep.error(f"object '{obj.name}': center of mass projects outside the board")
            if not mesh.com_from_volume:
                rep.warn(f"object '{obj.name}': mesh is not watertight, center of mass uses vertex centroid")
    if grasps is not None:
        if grasps.layout_id != layout.id:
            rep.error(f"grasp set is for layout {grasps.layout_id}, layout is {layout.id}")
        for name, trials in grasps.objects:
            if name not in names:
                rep.error(f"grasp set: object '{name}' is not in layout {layout.id}")
            elif len(trials) != config.trials:
                rep.error(f"grasp set: object '{name}' has {len(trials)} grasps, expected {config.trials}")
    if executions is not None:
        if executions.layout_id != layout.id:
            rep.error(f"execution log is for layout {executions.layout_id}, layout is {layout.id}")
        if executions.modality != config.modality:
            rep.error(f"execution log modality '{executions.modality.value}' differs from "
                      f"configured '{config.modality.value}'")
        planned = grasps.as_dict() if grasps is not None else None
        for name, trials in executions.objects:
            if name not in names:
                rep.error(f"execution log: object '{name}' is not in layout {layout.id}")
                continue
            if len(trials) != config.trials:
                rep.error(f"execution log: object '{name}' has {len(trials)} trials, expected {config.trials}")
            if planned is not None and name not in planned:
                rep.warn(f"execution log: object '{name}' has no planned grasps")
            if executions.modality is Modality.CLUTTER:
                for t, tr in enumerate(trials):
                    if tr.objects_hit is not None and tr.objects_hit > layout.n_objects - 1:
                        rep.error(f"execution log: object '{name}' trial {t} hits {tr.objects_hit} "
                                  f"objects, layout has only {layout.n_objects - 1} others")
    return rep


def _check_reach_log(log: ReachLog, sets: dict, config: BenchmarkConfig, rep: ValidationReport) -> None:
    label = f"{log.source.value} reach log (set {log.set_id})"
    ps: PoseSet | None = sets.get(log.set_id)
    if ps is None:
        rep.error(f"{label}: pose set {log.set_id} not provided")
        return
    known = ps.as_dict()
    logged = log.as_dict()
    for name in logged:
        if name not in known:
            rep.error(f"{label}: pose '{name}' is not in pose set {ps.set_id}")
    for name in known:
        if name not in logged:
            rep.error(f"{label}: pose '{name}' was not attempted (use <unreached/> for failures)")
    if log.source is Source.VISION and not config.uses_vision:
        rep.warn(f"{label}: vision log given but the configuration disables vision")
