"""Platform scores: reachability (S0), camera calibration (S1), graspability (S2)."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bench_data.hand import HandModel
from .bench_data.mesh import load_mesh
from .bench_data.types import Layout, ObjectInstance, PoseSet, ReachLog
from .errors import EmptyRegion, SemanticError
from .se3 import RegionGrid, is_reached, regions_of_point


@dataclass(frozen=True)
class RegionScore:
    region_id: int
    n_reached: int
    n_total: int

    def __post_init__(self):
        if self.n_total <= 0 or not 0 <= self.n_reached <= self.n_total:
            raise ValueError(f"region {self.region_id}: invalid counts "
                             f"{self.n_reached}/{self.n_total}")

    @property
    def score(self) -> float:
        return self.n_reached / self.n_total


@dataclass(frozen=True)
class GraspabilityResult:
    payload_ok: bool
    aperture_ok: bool
    overridden: str | None = None

    @property
    def score(self) -> bool:
        return self.payload_ok and self.aperture_ok and self.overridden is None


def score_regions(pose_set: PoseSet, log: ReachLog, tau_p: float, tau_o: float,
                  grid: RegionGrid = RegionGrid()) -> list[RegionScore]:
    """Fraction of set poses reached within thresholds, per board region.

    A pose on a region boundary counts in every region it touches. Poses
    logged as unreached count toward the totals only. Works the same for
    kinematic (S0) and vision (S1) logs.
    """
    reached = log.as_dict()
    total = dict.fromkeys(grid.region_ids, 0)
    hits = dict.fromkeys(grid.region_ids, 0)
    for name, desired in pose_set.poses:
        if name not in reached:
            raise SemanticError(f"pose '{name}' has no entry in the {log.source.value} log")
        got = reached[name]
        ok = got is not None and is_reached(desired, got, tau_p, tau_o)
        for rid in regions_of_point(desired.p[:2], grid):
            total[rid] += 1
            hits[rid] += ok
    empty = [rid for rid in grid.region_ids if total[rid] == 0]
    if empty:
        raise EmptyRegion(f"pose set {pose_set.set_id} has no poses in region(s) {empty}")
    return [RegionScore(rid, hits[rid], total[rid]) for rid in grid.region_ids]


def object_com(layout: Layout, obj: ObjectInstance, mesh=None) -> np.ndarray:
    """Object center of mass in the board frame."""
    if mesh is None:
        mesh = load_mesh(layout.mesh_path(obj))
    return obj.pose.apply(mesh.center_of_mass)


def object_region_scores(layout: Layout, region_scores, coms: dict | None = None) -> dict:
    """Score of the region containing each object's center of mass.

    ``coms`` maps object name to its board-frame center of mass; missing
    entries are computed from the layout meshes. An object whose center of
    mass sits on a boundary takes the best adjacent region score.
    """
    by_id = {r.region_id: r.score for r in region_scores}
    missing = set(layout.grid.region_ids) - set(by_id)
    if missing:
        raise ValueError(f"region scores missing for regions {sorted(missing)}")
    coms = dict(coms or {})
    out = {}
    for obj in layout.objects:
        com = coms.get(obj.name)
        if com is None:
            com = object_com(layout, obj)
        out[obj.name] = max(by_id[rid] for rid in regions_of_point(com[:2], layout.grid))
    return out


def graspability(obj: ObjectInstance, hand: HandModel) -> GraspabilityResult:
    # an object exactly as wide as the full aperture cannot be enclosed
    return GraspabilityResult(
        payload_ok=obj.mass <= hand.payload,
        aperture_ok=obj.min_grip_dimension < hand.aperture,
        overridden=obj.justification if obj.graspable_override is False else None,
    )
