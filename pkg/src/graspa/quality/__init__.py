"""Simulated grasp closure and wrench-space grasp quality."""
from .closure import close_fingers
from .kinematics import forward_kinematics
from .proximity import MeshProximity
from .scoring import (
    QualityResult, TrialQuality, grasp_quality, gws_epsilon, perturbations, score_layout_quality,
)
from .wrench import ContactPoint, contact_wrenches, friction_cone_edges, hull_radius, ows_radius
