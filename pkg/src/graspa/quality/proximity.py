"""Triangle-mesh proximity queries.

Object triangles are indexed by a k-d tree over their centroids. A link
triangle only considers object triangles whose bounding spheres come
within the contact tolerance of its own; surviving pairs are culled with
plane-distance bounds before the exact vectorized triangle-triangle
distance runs on what is left.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from ..bench_data.mesh import TriMesh


def _dot(a, b):
    return np.einsum("...i,...i->...", a, b)


def closest_point_on_triangle(p, a, b, c):
    """Closest points on triangles (a, b, c) to points p; all shaped (n, 3)."""
    ab, ac, ap = b - a, c - a, p - a
    d1, d2 = _dot(ab, ap), _dot(ac, ap)
    bp = p - b
    d3, d4 = _dot(ab, bp), _dot(ac, bp)
    cp = p - c
    d5, d6 = _dot(ab, cp), _dot(ac, cp)
    va = d3 * d6 - d5 * d4
    vb = d5 * d2 - d1 * d6
    vc = d1 * d4 - d3 * d2
    with np.errstate(divide="ignore", invalid="ignore"):
        denom = va + vb + vc
        v = np.where(denom != 0, vb / denom, 0.0)
        w = np.where(denom != 0, vc / denom, 0.0)
        out = a + ab * v[:, None] + ac * w[:, None]
        # Voronoi regions, lowest precedence first
        t = (d4 - d3) / ((d4 - d3) + (d5 - d6))
        m = (va <= 0) & (d4 - d3 >= 0) & (d5 - d6 >= 0)
        out = np.where(m[:, None], b + (c - b) * np.nan_to_num(t)[:, None], out)
        t = d2 / (d2 - d6)
        m = (vb <= 0) & (d2 >= 0) & (d6 <= 0)
        out = np.where(m[:, None], a + ac * np.nan_to_num(t)[:, None], out)
        m = (d6 >= 0) & (d5 <= d6)
        out = np.where(m[:, None], c, out)
        t = d1 / (d1 - d3)
        m = (vc <= 0) & (d1 >= 0) & (d3 <= 0)
        out = np.where(m[:, None], a + ab * np.nan_to_num(t)[:, None], out)
        m = (d3 >= 0) & (d4 <= d3)
        out = np.where(m[:, None], b, out)
        m = (d1 <= 0) & (d2 <= 0)
        out = np.where(m[:, None], a, out)
    return out


def closest_points_segments(p1, q1, p2, q2):
    """Closest points between segments p1q1 and p2q2 (non-degenerate)."""
    d1, d2, r = q1 - p1, q2 - p2, p1 - p2
    a, e = _dot(d1, d1), _dot(d2, d2)
    b, c, f = _dot(d1, d2), _dot(d1, r), _dot(d2, r)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 1e-18 * a * e, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
        lo, hi = t < 0, t > 1
        s = np.where(lo, np.clip(-c / a, 0.0, 1.0), np.where(hi, np.clip((b - c) / a, 0.0, 1.0), s))
        t = np.clip(t, 0.0, 1.0)
    return p1 + d1 * s[:, None], p2 + d2 * t[:, None]


def segment_hits_triangle(p, q, a, b, c):
    """Whether segments pq cross triangles abc (Moller-Trumbore), and where."""
    d = q - p
    e1, e2 = b - a, c - a
    h = np.cross(d, e2)
    det = _dot(e1, h)
    ok = np.abs(det) > 1e-18
    with np.errstate(divide="ignore", invalid="ignore"):
        inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
        s = p - a
        u = inv * _dot(s, h)
        qv = np.cross(s, e1)
        v = inv * _dot(d, qv)
        t = inv * _dot(e2, qv)
    hit = ok & (u >= 0) & (v >= 0) & (u + v <= 1) & (t >= 0) & (t <= 1)
    return hit, p + d * np.nan_to_num(t)[:, None]


def triangle_pair_distance(A, B):
    """Distance between triangle pairs A[i], B[i] (each (n, 3, 3)).

    Returns (distance, closest point on B, intersecting flag).
    """
    n = len(A)
    dists, points = [], []
    for i in range(3):
        pb = closest_point_on_triangle(A[:, i], B[:, 0], B[:, 1], B[:, 2])
        dists.append(np.linalg.norm(pb - A[:, i], axis=1))
        points.append(pb)
        pa = closest_point_on_triangle(B[:, i], A[:, 0], A[:, 1], A[:, 2])
        dists.append(np.linalg.norm(pa - B[:, i], axis=1))
        points.append(B[:, i])
    for i in range(3):
        for j in range(3):
            ca, cb = closest_points_segments(A[:, i], A[:, (i + 1) % 3], B[:, j], B[:, (j + 1) % 3])
            dists.append(np.linalg.norm(ca - cb, axis=1))
            points.append(cb)
    dists = np.array(dists)
    points = np.array(points)
    k = np.argmin(dists, axis=0)
    dist = dists[k, np.arange(n)]
    point = points[k, np.arange(n)]
    inter = np.zeros(n, dtype=bool)
    for i in range(3):
        hit, x = segment_hits_triangle(A[:, i], A[:, (i + 1) % 3], B[:, 0], B[:, 1], B[:, 2])
        point = np.where((hit & ~inter)[:, None], x, point)
        inter |= hit
        hit, x = segment_hits_triangle(B[:, i], B[:, (i + 1) % 3], A[:, 0], A[:, 1], A[:, 2])
        point = np.where((hit & ~inter)[:, None], x, point)
        inter |= hit
    dist = np.where(inter, 0.0, dist)
    return dist, point, inter


def _plane_side(A, B):
    """Signed distances of B[i]'s vertices to the plane of A[i], shape (n, 3)."""
    n = np.cross(A[:, 1] - A[:, 0], A[:, 2] - A[:, 0])
    n /= np.linalg.norm(n, axis=1)[:, None]
    return np.einsum("nij,nj->ni", B - A[:, None, 0], n)


def _straddles(A, B):
    """Whether the vertices of B[i] are not all strictly on one side of A[i]'s plane."""
    d = _plane_side(A, B)
    return ~(np.all(d > 0, axis=1) | np.all(d < 0, axis=1))


def _plane_gap(A, B):
    """Lower bound on the distance between triangles from A[i]'s supporting plane."""
    d = _plane_side(A, B)
    one_side = np.all(d > 0, axis=1) | np.all(d < 0, axis=1)
    return np.where(one_side, np.abs(d).min(axis=1), 0.0)


def winding_numbers(points, corners):
    """Generalized winding number of a closed triangle soup around points."""
    a = corners[None, :, 0, :] - points[:, None, :]
    b = corners[None, :, 1, :] - points[:, None, :]
    c = corners[None, :, 2, :] - points[:, None, :]
    la, lb, lc = (np.linalg.norm(x, axis=2) for x in (a, b, c))
    num = _dot(a, np.cross(b, c))
    den = la * lb * lc + _dot(a, b) * lc + _dot(b, c) * la + _dot(c, a) * lb
    return np.arctan2(num, den).sum(axis=1) / (2 * np.pi)


@dataclass
class Proximity:
    distance: float
    point: np.ndarray | None = None
    normal: np.ndarray | None = None


class MeshProximity:
    """Proximity oracle for one rigid mesh already placed in the board frame."""

    def __init__(self, mesh: TriMesh):
        self.mesh = mesh
        self.corners = mesh.corners
        self.normals = mesh.normals
        self.centroids = self.corners.mean(axis=1)
        self.radii = np.max(np.linalg.norm(self.corners - self.centroids[:, None], axis=2), axis=1)
        self.max_radius = float(self.radii.max())
        self.tree = cKDTree(self.centroids)
        self.lo, self.hi = mesh.bounds()

    def _pairs(self, corners: np.ndarray, eps: float):
        """Candidate (link triangle, object triangle) pairs within ``eps``.

        Returns (ia, ib, gap) where ``gap`` is the bounding-sphere gap of each
        kept pair, or (None, None, bound) with a lower bound on the distance.
        """
        flat = corners.reshape(-1, 3)
        if np.any(flat.min(axis=0) > self.hi + eps) or np.any(flat.max(axis=0) < self.lo - eps):
            return None, None, np.inf
        centers = corners.mean(axis=1)
        radii = np.max(np.linalg.norm(corners - centers[:, None], axis=2), axis=1)
        cand = self.tree.query_ball_point(centers, radii + self.max_radius + eps)
        counts = [len(c) for c in cand]
        if not any(counts):
            return None, None, np.inf
        ia = np.repeat(np.arange(len(corners)), counts)
        ib = np.concatenate([np.asarray(c, dtype=np.int64) for c in cand if c])
        # bounding-sphere test per pair
        gap = np.linalg.norm(centers[ia] - self.centroids[ib], axis=1) - radii[ia] - self.radii[ib]
        keep = gap <= eps
        if not keep.any():
            return None, None, float(gap.min())
        return ia[keep], ib[keep], gap[keep]

    def query(self, corners: np.ndarray, eps: float) -> Proximity:
        """Closest approach between a triangle soup and this mesh.

        Only pairs that can come within ``eps`` are examined; beyond that
        the reported distance is only a lower bound.
        """
        return self.query_links({"": corners}, eps)[""]

    def _patch(self, tris: np.ndarray, dist: float) -> Proximity:
        """Contact at the area-weighted centre of the object triangles in ``tris``."""
        w = self.mesh.areas[tris]
        point = (self.centroids[tris] * w[:, None]).sum(axis=0) / w.sum()
        normal = (self.normals[tris] * w[:, None]).sum(axis=0)
        n = np.linalg.norm(normal)
        normal = normal / n if n > 1e-12 else self.normals[tris[0]]
        return Proximity(dist, point, normal)

    def query_links(self, links: dict, eps: float) -> dict:
        """:meth:`query` for several named triangle soups in one pass.

        When object triangle centroids lie within ``eps`` of a link, the
        contact is the centre of that patch. Otherwise near misses are
        resolved with exact triangle-triangle distance.
        """
        names = list(links)
        if not names:
            return {}
        corners = np.concatenate([links[n] for n in names])
        owner = np.repeat(np.arange(len(names)), [len(links[n]) for n in names])
        ia, ib, gap = self._pairs(corners, eps)
        if ia is None:
            return {n: Proximity(gap) for n in names}
        A = corners[ia]
        c = self.centroids[ib]
        # plane distance bounds the centroid distance from below
        n = np.cross(A[:, 1] - A[:, 0], A[:, 2] - A[:, 0])
        n /= np.linalg.norm(n, axis=1)[:, None]
        d_c = np.abs(_dot(n, c - A[:, 0]))
        flat = d_c <= eps
        if flat.any():
            Af = A[flat]
            d_c[flat] = np.linalg.norm(closest_point_on_triangle(c[flat], Af[:, 0], Af[:, 1], Af[:, 2])
                                       - c[flat], axis=1)
        lower = np.maximum(gap, d_c - self.radii[ib])
        out = {}
        who = owner[ia]
        for i, n in enumerate(names):
            sel = np.flatnonzero(who == i)
            if len(sel) == 0:
                out[n] = Proximity(np.inf)
                continue
            close = sel[d_c[sel] <= eps]
            if len(close):
                out[n] = self._patch(np.unique(ib[close]), float(d_c[close].min()))
                continue
            near = sel[lower[sel] <= eps]
            if len(near):
                An, Bn = A[near], self.corners[ib[near]]
                lower[near] = np.maximum(lower[near], np.maximum(_plane_gap(An, Bn), _plane_gap(Bn, An)))
                near = near[lower[near] <= eps]
            if len(near) == 0:
                out[n] = Proximity(float(lower[sel].min()))
                continue
            dist, point, _ = triangle_pair_distance(A[near], self.corners[ib[near]])
            k = int(np.argmin(dist))
            if dist[k] > eps:
                out[n] = Proximity(float(dist[k]))
            else:
                out[n] = Proximity(float(dist[k]), point[k], self.normals[ib[near[k]]])
        return out

    def lower_bound(self, corners: np.ndarray) -> float:
        """A distance that the triangle soup is guaranteed not to be closer than."""
        flat = corners.reshape(-1, 3)
        sep = np.maximum(flat.min(axis=0) - self.hi, self.lo - flat.max(axis=0))
        if np.any(sep > 0):
            return float(np.linalg.norm(np.maximum(sep, 0.0)))
        centers = corners.mean(axis=1)
        radii = np.max(np.linalg.norm(corners - centers[:, None], axis=2), axis=1)
        d, _ = self.tree.query(centers)
        return max(0.0, float(np.min(d - radii)) - self.max_radius)

    def intersects(self, corners: np.ndarray) -> bool:
        """Whether any triangle of the soup crosses the mesh surface."""
        ia, ib, _ = self._pairs(corners, 0.0)
        if ia is None:
            return False
        A, B = corners[ia], self.corners[ib]
        # triangles can only cross if each straddles the other's plane
        keep = _straddles(A, B) & _straddles(B, A)
        if not keep.any():
            return False
        A, B = A[keep], B[keep]
        for i in range(3):
            if segment_hits_triangle(A[:, i], A[:, (i + 1) % 3], B[:, 0], B[:, 1], B[:, 2])[0].any():
                return True
            if segment_hits_triangle(B[:, i], B[:, (i + 1) % 3], A[:, 0], A[:, 1], A[:, 2])[0].any():
                return True
        return False

    def contains(self, points: np.ndarray) -> np.ndarray:
        points = np.asarray(points, dtype=float)
        out = np.zeros(len(points), dtype=bool)
        if not self.mesh.watertight:
            return out
        near = np.all((points >= self.lo) & (points <= self.hi), axis=1)
        if near.any():
            out[near] = winding_numbers(points[near], self.corners) > 0.5
        return out
