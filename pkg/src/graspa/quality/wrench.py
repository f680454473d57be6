"""Contact wrenches, wrench-space hulls and the largest inscribed ball radius."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..bench_data.mesh import TriMesh
from ..errors import DegenerateMesh

RANK_TOL = 1e-9
INSIDE_TOL = 1e-12


@dataclass(frozen=True)
class ContactPoint:
    """Point contact on the object; ``normal`` is the outward object normal."""

    position: np.ndarray
    normal: np.ndarray
    link: str = ""

    def __post_init__(self):
        n = np.asarray(self.normal, dtype=float)
        object.__setattr__(self, "position", np.asarray(self.position, dtype=float))
        object.__setattr__(self, "normal", n / np.linalg.norm(n))


def tangent_basis(n: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    helper = np.eye(3)[int(np.argmin(np.abs(n)))]
    t1 = np.cross(n, helper)
    t1 /= np.linalg.norm(t1)
    return t1, np.cross(n, t1)


def friction_cone_edges(normal, mu: float, m: int) -> np.ndarray:
    """Unit forces on the pyramid approximating the friction cone.

    The cone has half-angle atan(mu) around the inward direction -normal,
    so every force pushes into the object.
    """
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    t1, t2 = tangent_basis(n)
    beta = math.atan(mu)
    phi = 2 * math.pi * np.arange(m) / m
    tang = np.cos(phi)[:, None] * t1 + np.sin(phi)[:, None] * t2
    return -math.cos(beta) * n + math.sin(beta) * tang


def contact_wrenches(contacts, mu: float, m_edges: int, lam: float, com) -> np.ndarray:
    """Wrenches (f, lam * (p - com) x f) for every cone edge of every contact."""
    if mu <= 0 or m_edges < 3:
        raise ValueError("need mu > 0 and at least 3 cone edges")
    com = np.asarray(com, dtype=float)
    out = []
    for c in contacts:
        f = friction_cone_edges(c.normal, mu, m_edges)
        tau = lam * np.cross(c.position - com, f)
        out.append(np.hstack([f, tau]))
    if not out:
        return np.zeros((0, 6))
    return np.vstack(out)


def hull_radius(wrenches) -> float:
    """Radius of the largest origin-centred ball inside the wrench hull.

    Zero when the origin is not strictly inside the hull, or when the
    points do not span the full wrench space.
    """
    W = np.asarray(wrenches, dtype=float)
    if W.ndim != 2 or len(W) == 0:
        return 0.0
    d = W.shape[1]
    if len(W) <= d:
        return 0.0
    scale = float(np.max(np.abs(W)))
    if scale == 0.0:
        return 0.0
    if np.linalg.matrix_rank(W - W.mean(axis=0), tol=RANK_TOL * scale) < d:
        return 0.0
    try:
        hull = ConvexHull(W)
    except QhullError:
        try:
            hull = ConvexHull(W, qhull_options="QJ")
        except QhullError:
            return 0.0
    eps = float(np.min(-hull.equations[:, -1]))
    return eps if eps > INSIDE_TOL * scale else 0.0


def sample_surface(mesh: TriMesh, count: int, seed: int = 0) -> tuple[np.ndarray, np.ndarray]:
    """Area-uniform surface samples and their triangle normals."""
    rng = np.random.default_rng(seed)
    prob = mesh.areas / mesh.areas.sum()
    tri = rng.choice(len(prob), size=count, p=prob)
    r1, r2 = rng.random(count), rng.random(count)
    s = np.sqrt(r1)
    w = np.stack([1 - s, s * (1 - r2), s * r2], axis=1)
    pts = np.einsum("ij,ijk->ik", w, mesh.corners[tri])
    return pts, mesh.normals[tri]


def ows_radius(mesh: TriMesh, mu: float, m_edges: int, samples: int = 200, seed: int = 0) -> float:
    """Inscribed radius of the object wrench space.

    Contacts are sampled over the whole surface, so the value depends only
    on the object. Torques are scaled by 1 / r_max as for grasps.
    """
    if samples < 20:
        raise ValueError("ows_radius needs at least 20 samples")
    if mesh.r_max <= 0 or mesh.areas.sum() <= 0:
        raise DegenerateMesh(f"{mesh.name or 'mesh'}: no surface to sample")
    pts, normals = sample_surface(mesh, samples, seed)
    contacts = [ContactPoint(p, n) for p, n in zip(pts, normals)]
    W = contact_wrenches(contacts, mu, m_edges, 1.0 / mesh.r_max, mesh.center_of_mass)
    return hull_radius(W)
