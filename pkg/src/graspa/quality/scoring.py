"""Grasp quality score: mean perturbed GWS radius over the OWS radius."""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..bench_data.hand import HandModel
from ..bench_data.mesh import TriMesh, load_mesh
from ..bench_data.types import BenchmarkConfig, GraspSet, GraspTrial, Layout
from ..errors import InitialPenetration
from ..se3 import Pose, rotation
from .closure import close_fingers
from .proximity import MeshProximity
from .wrench import ContactPoint, contact_wrenches, hull_radius, ows_radius

log = logging.getLogger(__name__)


def perturbations(pose: Pose, dp: float, da: float) -> list[Pose]:
    """The nominal pose, then +-dp along the board axes, then +-da about the hand axes."""
    out = [pose]
    for axis in np.eye(3):
        for s in (1.0, -1.0):
            out.append(pose.translated(s * dp * axis))
    for axis in np.eye(3):
        for s in (1.0, -1.0):
            out.append(Pose(pose.p, pose.R @ rotation(axis, s * da)))
    return out


@dataclass
class PerturbationResult:
    epsilon: float
    contacts: list = field(default_factory=list)
    penetrated: bool = False


@dataclass
class TrialQuality:
    score: float
    gws_mean: float
    ows: float
    perturbations: list = field(default_factory=list)


@dataclass
class QualityResult:
    """Per-trial S3 values for one object plus diagnostics."""

    object: str
    per_trial: list
    ows: float
    trials: list = field(default_factory=list)

    @property
    def mean(self) -> float:
        return float(np.mean(self.per_trial)) if self.per_trial else 0.0


def gws_epsilon(contacts, mesh: TriMesh, mu: float, m_edges: int) -> float:
    """Inscribed radius of the grasp wrench space for contacts on a placed mesh."""
    if len(contacts) < 2:
        return 0.0
    W = contact_wrenches(contacts, mu, m_edges, 1.0 / mesh.r_max, mesh.center_of_mass)
    return hull_radius(W)


def evaluate_pose(hand: HandModel, pose: Pose, pregrasp: dict, placed: TriMesh, prox: MeshProximity,
                  config: BenchmarkConfig) -> PerturbationResult:
    try:
        contacts = close_fingers(hand, pose, pregrasp, prox, config.contact_eps, config.closure_step)
    except InitialPenetration:
        return PerturbationResult(0.0, [], True)
    return PerturbationResult(gws_epsilon(contacts, placed, config.mu, config.cone_edges), contacts)


def grasp_quality(trial: GraspTrial, placed: TriMesh, hand: HandModel, config: BenchmarkConfig,
                  ows: float, prox: MeshProximity | None = None) -> TrialQuality:
    """S3 for one planned grasp against an object mesh placed in the board frame.

    Each perturbed pose is closed independently; poses where the hand starts
    inside the object contribute zero.
    """
    prox = prox or MeshProximity(placed)
    results = [evaluate_pose(hand, p, trial.joints, placed, prox, config)
               for p in perturbations(trial.pose, config.perturb_dp, config.perturb_da)]
    gws = float(np.mean([r.epsilon for r in results]))
    score = 0.0 if ows <= 0 else float(np.clip(gws / ows, 0.0, 1.0))
    return TrialQuality(score, gws, ows, results)


# -- layout driver ---------------------------------------------------------------

def _trial_job(args):
    trial, placed, hand, config, ows = args
    return grasp_quality(trial, placed, hand, config, ows)


def score_layout_quality(layout: Layout, grasps: GraspSet, hand: HandModel, config: BenchmarkConfig,
                         objects=None, jobs: int = 1, meshes: dict | None = None) -> dict:
    """QualityResult per object that has planned grasps.

    ``objects`` restricts scoring to the given names (e.g. the graspable
    ones). The OWS radius is computed once per object in its own frame.
    """
    planned = grasps.as_dict()
    names = [o.name for o in layout.objects if o.name in planned and (objects is None or o.name in objects)]
    meshes = dict(meshes or {})
    jobs_list, owses = [], {}
    for name in names:
        obj = layout.object(name)
        mesh = meshes.get(name) or load_mesh(layout.mesh_path(obj))
        owses[name] = ows_radius(mesh, config.mu, config.cone_edges, config.ows_samples, config.seed)
        placed = mesh.transformed(obj.pose)
        for trial in planned[name]:
            jobs_list.append((name, (trial, placed, hand, config, owses[name])))
    if jobs > 1 and len(jobs_list) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            outs = list(ex.map(_trial_job, [a for _, a in jobs_list]))
    else:
        outs = [_trial_job(a) for _, a in jobs_list]
    results = {name: QualityResult(name, [], owses[name]) for name in names}
    for (name, _), tq in zip(jobs_list, outs):
        results[name].per_trial.append(tq.score)
        results[name].trials.append(tq)
    return results


__all__ = [
    "ContactPoint", "PerturbationResult", "QualityResult", "TrialQuality", "evaluate_pose",
    "grasp_quality", "gws_epsilon", "perturbations", "score_layout_quality",
]
