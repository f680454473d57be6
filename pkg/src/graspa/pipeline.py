"""Stage drivers that turn benchmark inputs into cached score files and a scorecard."""
from __future__ import annotations

from .bench_data.hand import HandModel
from .bench_data.types import BenchmarkConfig, ExecutionLog, GraspSet, Layout, PoseSet, ReachLog, Source
from .execution import score_execution, stability_waypoints
from .platform import graspability, object_com, object_region_scores, score_regions
from .quality import score_layout_quality
from .scorecard import ExecutionCache, QualityCache, RegionScores, Scorecard, layout_final, score_row
from .se3 import RegionGrid


def layout_coms(layout: Layout) -> dict:
    """Board-frame center of mass of every object, loading each mesh once."""
    return {o.name: object_com(layout, o) for o in layout.objects}


def region_stage(pose_set: PoseSet, log: ReachLog, config: BenchmarkConfig,
                 layout: Layout | None = None, coms: dict | None = None) -> RegionScores:
    """S0 or S1 per region (and per object when a layout is given), by log source."""
    if log.source is Source.FORWARD_KINEMATICS:
        tau_p, tau_o = config.tau_p_r, config.tau_o_r
    else:
        tau_p, tau_o = config.tau_p_c, config.tau_o_c
    grid = layout.grid if layout is not None else RegionGrid()
    regions = score_regions(pose_set, log, tau_p, tau_o, grid)
    objects = object_region_scores(layout, regions, coms) if layout is not None else {}
    return RegionScores(log.source, regions, objects, str(pose_set.set_id),
                        None if layout is None else layout.id)


def graspability_stage(layout: Layout, hand: HandModel) -> dict:
    return {o.name: graspability(o, hand) for o in layout.objects}


def quality_stage(layout: Layout, grasps: GraspSet, hand: HandModel, config: BenchmarkConfig,
                  objects=None, jobs: int = 1) -> QualityCache:
    results = score_layout_quality(layout, grasps, hand, config, objects=objects, jobs=jobs)
    return QualityCache(layout.id, {n: r.per_trial for n, r in results.items()},
                        {n: r.ows for n, r in results.items()},
                        {n: [t.gws_mean for t in r.trials] for n, r in results.items()})


def execution_stage(log: ExecutionLog, config: BenchmarkConfig, grasps: GraspSet | None = None,
                    n_objects: int | None = None) -> ExecutionCache:
    """Per-trial S4/S5 (and S6 in clutter) plus the stability waypoints of each planned grasp."""
    n_obj = n_objects if n_objects is not None else len(log.objects)
    scores = {name: score_execution(log, name, config.trials, n_obj) for name, _ in log.objects}
    waypoints = {}
    if grasps is not None:
        for name, trials in grasps.objects:
            waypoints[name] = [stability_waypoints(t.pose, config.approach_axis, config).poses for t in trials]
    return ExecutionCache(log.layout_id, log.modality, scores, waypoints)


def assemble(layout: Layout, s0: dict, s1: dict | None, s2: dict, quality: QualityCache | None,
             execution: ExecutionCache | None, config: BenchmarkConfig,
             reference: float | None = None) -> Scorecard:
    """Combine stage outputs into a scorecard; objects without data get N/A rows."""
    q = quality.per_trial if quality is not None else {}
    ex = execution.scores if execution is not None else {}
    rows = []
    for obj in layout.objects:
        name = obj.name
        g = s2[name]
        ok = g.score if hasattr(g, "score") else bool(g)
        e = ex.get(name)
        rows.append(score_row(
            name, s0[name], None if s1 is None else s1.get(name), ok,
            q.get(name), None if e is None else e.s4, None if e is None else e.s5,
            None if e is None else e.s6,
            uses_vision=config.uses_vision, modality=config.modality, trials=config.trials,
        ))
    return Scorecard(layout_final(layout.id, rows, config.modality, reference), config)
