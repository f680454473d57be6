"""Forward kinematics for the hand's revolute-joint forest."""
from __future__ import annotations

import logging

import numpy as np

from ..bench_data.hand import HandModel
from ..errors import UnknownJoint
from ..se3 import Pose, rotation

log = logging.getLogger(__name__)


def clamp_joints(hand: HandModel, joints: dict, warn: bool = True) -> dict:
    """Fill unspecified joints with their open limit and clamp to limits."""
    known = hand.joint_map
    for name in joints:
        if name not in known:
            raise UnknownJoint(f"hand '{hand.name}' has no joint '{name}'")
    q = hand.pregrasp_defaults()
    for name, v in joints.items():
        j = known[name]
        c = min(max(float(v), j.lower), j.upper)
        if warn and c != v:
            log.warning("joint %s value %.4f clamped to [%.4f, %.4f]", name, v, j.lower, j.upper)
        q[name] = c
    return q


def _transforms(hand: HandModel, base_pose: Pose, q: dict) -> dict:
    base = (base_pose @ hand.base_frame).matrix()
    T = {name: base for name in hand.links}
    for j in hand.ordered_joints():
        local = j.origin.matrix().copy()
        local[:3, :3] = local[:3, :3] @ rotation(j.axis, q[j.name])
        T[j.child] = T[j.parent] @ local
    return T


def forward_kinematics(hand: HandModel, base_pose: Pose, joints: dict) -> dict:
    """Board-frame pose of every link.

    Links without a parent joint sit at ``base_pose @ hand.base_frame``.
    Joint values outside their limits are clamped with a warning.
    """
    q = clamp_joints(hand, joints)
    return {name: Pose.from_matrix(T) for name, T in _transforms(hand, base_pose, q).items()}


def link_matrices(hand: HandModel, base_pose: Pose, q: dict) -> dict:
    """Like :func:`forward_kinematics` but trusts ``q`` and returns raw 4x4 arrays."""
    return _transforms(hand, base_pose, q)


def descendants(hand: HandModel, joint_names) -> set:
    """Links moved by any of the given joints."""
    children = {}
    for j in hand.joints:
        children.setdefault(j.parent, []).append(j.child)
    jm = hand.joint_map
    out, stack = set(), [jm[n].child for n in joint_names]
    while stack:
        link = stack.pop()
        if link not in out:
            out.add(link)
            stack.extend(children.get(link, []))
    return out


def reach_radii(hand: HandModel) -> dict:
    """Per joint, an upper bound on the distance from its axis origin to any
    vertex it moves, valid for every configuration."""
    children = {}
    for j in hand.joints:
        children.setdefault(j.parent, []).append(j)
    memo = {}

    def link_reach(name):
        # distance bound measured from the link frame origin
        if name not in memo:
            mesh = hand.links[name].mesh
            r = 0.0 if mesh is None else float(np.linalg.norm(mesh.vertices, axis=1).max())
            for j in children.get(name, []):
                r = max(r, float(np.linalg.norm(j.origin.p)) + link_reach(j.child))
            memo[name] = r
        return memo[name]

    return {j.name: link_reach(j.child) for j in hand.joints}
