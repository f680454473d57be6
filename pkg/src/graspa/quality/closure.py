"""Simulated finger closure against a static object mesh."""
from __future__ import annotations

import numpy as np

from ..bench_data.hand import HandModel
from ..errors import InitialPenetration
from ..se3 import Pose
from .kinematics import clamp_joints, descendants, link_matrices, reach_radii
from .proximity import MeshProximity
from .wrench import ContactPoint

BISECTIONS = 12


def _placed(hand: HandModel, T: dict, links) -> dict:
    out = {}
    for name in links:
        mesh = hand.links[name].mesh
        if mesh is None:
            continue
        M = T[name]
        out[name] = mesh.corners @ M[:3, :3].T + M[:3, 3]
    return out


def close_fingers(hand: HandModel, grasp_pose: Pose, pregrasp: dict, obj: MeshProximity,
                  contact_eps: float = 1e-3, step: float = np.radians(1.0)) -> list[ContactPoint]:
    """Close every finger joint at equal speed until its links touch the object.

    Starting from ``pregrasp``, each moving joint advances by ``step`` rad
    per increment toward its closing limit. A link within ``contact_eps``
    of the object registers a contact at the closest object point and stops
    every joint between the base and that link. Increments that would make
    a link penetrate the object are shortened by bisection so that contact
    is caught at the surface.

    Raises InitialPenetration if the hand intersects the object at the
    pregrasp configuration.
    """
    q = clamp_joints(hand, pregrasp)
    placed = _placed(hand, link_matrices(hand, grasp_pose, q), hand.links)
    first = obj.query_links(placed, contact_eps)
    for name, corners in placed.items():
        if obj.intersects(corners) or obj.contains(corners[:, 0, :]).any():
            raise InitialPenetration(f"link '{name}' intersects the object at pregrasp")
        link_mesh = hand.links[name].mesh
        if link_mesh.watertight:
            M = link_matrices(hand, grasp_pose, q)[name]
            local = (obj.mesh.vertices[:1] - M[:3, 3]) @ M[:3, :3]
            if MeshProximity(link_mesh).contains(local).any():
                raise InitialPenetration(f"object lies inside link '{name}' at pregrasp")

    contacts: list[ContactPoint] = []
    stopped: set = set()

    def register(found: dict) -> int:
        before = len(stopped)
        for name, hit in found.items():
            if hit.point is None:
                continue
            stopped.update(j.name for j in hand.chain(name))
            if all(np.linalg.norm(c.position - hit.point) > 2 * contact_eps for c in contacts):
                contacts.append(ContactPoint(hit.point, hit.normal, name))
        return len(stopped) - before

    register(first)
    joints = hand.joint_map
    reach = reach_radii(hand)

    def remaining(name):
        j = joints[name]
        return (j.closing_limit - q[name]) * j.closing_sign

    def placed_at(qq, links):
        return _placed(hand, link_matrices(hand, grasp_pose, qq), links)

    def blocked(qq, links):
        return [n for n, c in placed_at(qq, links).items() if obj.intersects(c)]

    while True:
        moving = [n for n in joints if n not in stopped and remaining(n) > 1e-12]
        if not moving:
            break
        affected = descendants(hand, moving)
        # free-space skip: no vertex can travel far enough to touch within k steps
        k = None
        for name, corners in placed_at(q, affected).items():
            sweep = step * sum(reach[j.name] for j in hand.chain(name) if j.name in moving)
            gap = obj.lower_bound(corners) - contact_eps
            if sweep > 0 and gap != np.inf:
                k = min(k if k is not None else np.inf, int(max(gap, 0.0) // sweep))
        if k is None:  # nothing moving can reach the object at all
            k = int(max(remaining(n) for n in moving) / step) + 1
        if k >= 2:
            q = {n: v + (joints[n].closing_sign * min((k - 1) * step, remaining(n)) if n in moving else 0.0)
                 for n, v in q.items()}
            moving = [n for n in moving if remaining(n) > 1e-12]
            if not moving:
                break
            affected = descendants(hand, moving)
        delta = {n: joints[n].closing_sign * min(step, remaining(n)) for n in moving}

        def advance(frac, base=dict(q)):
            return {n: base[n] + frac * delta.get(n, 0.0) for n in base}

        if not blocked(advance(1.0), affected):
            q = advance(1.0)
            register(obj.query_links(placed_at(q, affected), contact_eps))
            continue
        lo, hi = 0.0, 1.0
        for _ in range(BISECTIONS):
            mid = 0.5 * (lo + hi)
            if blocked(advance(mid), affected):
                hi = mid
            else:
                lo = mid
        stuck = blocked(advance(hi), affected)
        q = advance(lo)
        if not register(obj.query_links(placed_at(q, affected), contact_eps)):
            # bisection stopped short of eps: halt the chains that would cross the surface
            for name in stuck:
                stopped.update(j.name for j in hand.chain(name))
    return contacts
