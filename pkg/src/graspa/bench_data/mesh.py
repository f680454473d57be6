"""Triangle meshes: ASCII OFF / PLY loading, mass properties, primitives."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from ..errors import DegenerateMesh, FormatError

AREA_EPS = 1e-14


@dataclass(frozen=True, eq=False)
class TriMesh:
    """Validated triangle mesh.

    Triangles are oriented outward when the mesh is closed. The center of
    mass assumes uniform density; for open meshes it falls back to the
    vertex centroid and ``com_from_volume`` is False.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    name: str = ""
    watertight: bool = field(init=False)
    com_from_volume: bool = field(init=False)
    center_of_mass: np.ndarray = field(init=False)
    volume: float = field(init=False)

    def __post_init__(self):
        V = np.array(self.vertices, dtype=float).reshape(-1, 3)
        F = np.array(self.triangles, dtype=np.int64).reshape(-1, 3)
        if not np.all(np.isfinite(V)):
            raise FormatError(f"{self.name or 'mesh'}: non-finite vertex coordinates")
        if F.size and (F.min() < 0 or F.max() >= len(V)):
            bad = int(F.max()) if F.max() >= len(V) else int(F.min())
            raise FormatError(f"{self.name or 'mesh'}: triangle references vertex {bad} of {len(V)}")
        if len(V) < 4 or np.linalg.matrix_rank(V - V.mean(axis=0), tol=1e-9) < 3:
            raise DegenerateMesh(f"{self.name or 'mesh'}: needs 4 or more non-coplanar vertices")
        F = F[_areas(V, F) > AREA_EPS]
        if len(F) == 0:
            raise DegenerateMesh(f"{self.name or 'mesh'}: every triangle has zero area")
        closed = _is_closed(F)
        vol = _signed_volume(V, F)
        if closed and vol < 0:
            F = F[:, ::-1].copy()
            vol = -vol
        if closed and vol > 1e-15:
            com = _volume_centroid(V, F, vol)
        else:
            com = V[np.unique(F)].mean(axis=0)
        for a in (V, F, com):
            a.setflags(write=False)
        object.__setattr__(self, "vertices", V)
        object.__setattr__(self, "triangles", F)
        object.__setattr__(self, "watertight", closed)
        object.__setattr__(self, "com_from_volume", bool(closed and vol > 1e-15))
        object.__setattr__(self, "center_of_mass", com)
        object.__setattr__(self, "volume", float(vol) if closed else 0.0)

    @cached_property
    def corners(self) -> np.ndarray:
        """Triangle corner coordinates, shape (M, 3, 3)."""
        return self.vertices[self.triangles]

    @cached_property
    def areas(self) -> np.ndarray:
        return _areas(self.vertices, self.triangles)

    @cached_property
    def normals(self) -> np.ndarray:
        c = self.corners
        n = np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0])
        return n / np.linalg.norm(n, axis=1)[:, None]

    @cached_property
    def r_max(self) -> float:
        """Largest distance from the center of mass to the surface."""
        used = self.vertices[np.unique(self.triangles)]
        return float(np.max(np.linalg.norm(used - self.center_of_mass, axis=1)))

    def transformed(self, pose) -> TriMesh:
        return TriMesh(pose.apply(self.vertices), self.triangles, self.name)

    def bounds(self) -> tuple[np.ndarray, np.ndarray]:
        used = self.vertices[np.unique(self.triangles)]
        return used.min(axis=0), used.max(axis=0)


def _areas(V, F) -> np.ndarray:
    c = V[F]
    return 0.5 * np.linalg.norm(np.cross(c[:, 1] - c[:, 0], c[:, 2] - c[:, 0]), axis=1)


def _signed_volume(V, F) -> float:
    c = V[F]
    return float(np.einsum("ij,ij->i", c[:, 0], np.cross(c[:, 1], c[:, 2])).sum() / 6.0)


def _volume_centroid(V, F, vol) -> np.ndarray:
    # sum of origin-apex tetrahedra, each weighted by its signed volume
    c = V[F]
    v6 = np.einsum("ij,ij->i", c[:, 0], np.cross(c[:, 1], c[:, 2]))
    return (v6[:, None] * c.sum(axis=1)).sum(axis=0) / (24.0 * vol)


def _is_closed(F) -> bool:
    """Every directed edge is matched by exactly one opposite edge."""
    e = np.concatenate([F[:, [0, 1]], F[:, [1, 2]], F[:, [2, 0]]])
    n = int(F.max()) + 1
    fwd = np.sort(e[:, 0] * n + e[:, 1])
    if np.any(fwd[1:] == fwd[:-1]):
        return False
    return bool(np.array_equal(fwd, np.sort(e[:, 1] * n + e[:, 0])))


def load_mesh(path) -> TriMesh:
    """Load an ASCII OFF or PLY triangle mesh; polygons are fan-triangulated."""
    path = Path(path)
    try:
        text = path.read_text()
    except UnicodeDecodeError as exc:
        raise FormatError(f"{path}: not an ASCII mesh") from exc
    head = text.lstrip()[:3]
    if head == "OFF":
        V, F = _parse_off(text, path)
    elif head == "ply":
        V, F = _parse_ply(text, path)
    else:
        raise FormatError(f"{path}: unknown mesh format (expected OFF or ply header)")
    return TriMesh(V, F, name=path.stem)


def _fan(poly):
    return [(poly[0], poly[i], poly[i + 1]) for i in range(1, len(poly) - 1)]


def _tokens(lines):
    for line in lines:
        line = line.split("#", 1)[0].strip()
        if line:
            yield line.split()


def _parse_off(text, path):
    rows = list(_tokens(text.splitlines()))
    first = rows[0]
    rows[0] = first[1:]
    if not rows[0]:
        rows.pop(0)
    try:
        nv, nf = int(rows[0][0]), int(rows[0][1])
        V = np.array([r[:3] for r in rows[1:1 + nv]], dtype=float)
        body = rows[1 + nv:1 + nv + nf]
        if len(body) == nf and all(len(r) >= 4 and r[0] == "3" for r in body):
            F = np.array([r[1:4] for r in body], dtype=np.int64)
        else:
            F = []
            for r in body:
                k = int(r[0])
                F.extend(_fan([int(x) for x in r[1:1 + k]]))
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: malformed OFF body: {exc}") from exc
    if len(V) != nv or len(V.shape) != 2 or V.shape[1] != 3:
        raise FormatError(f"{path}: expected {nv} vertices")
    return V, np.array(F, dtype=np.int64).reshape(-1, 3)


def _parse_ply(text, path):
    lines = text.splitlines()
    elements, i = [], 1
    while i < len(lines) and lines[i].strip() != "end_header":
        tok = lines[i].split()
        if tok and tok[0] == "format" and tok[1] != "ascii":
            raise FormatError(f"{path}: only ASCII PLY is supported")
        if tok and tok[0] == "element":
            elements.append([tok[1], int(tok[2]), []])
        elif tok and tok[0] == "property":
            elements[-1][2].append(tok[-1])
        i += 1
    if i == len(lines):
        raise FormatError(f"{path}: missing end_header")
    body = list(_tokens(lines[i + 1:]))
    V, F, pos = None, [], 0
    try:
        for name, count, props in elements:
            chunk = body[pos:pos + count]
            pos += count
            if name == "vertex":
                idx = [props.index(a) for a in ("x", "y", "z")]
                V = np.array([[float(r[j]) for j in idx] for r in chunk])
            elif name == "face":
                for r in chunk:
                    k = int(r[0])
                    F.extend(_fan([int(x) for x in r[1:1 + k]]))
    except (ValueError, IndexError) as exc:
        raise FormatError(f"{path}: malformed PLY body: {exc}") from exc
    if V is None:
        raise FormatError(f"{path}: no vertex element")
    return V, np.array(F, dtype=np.int64).reshape(-1, 3)


def write_off(mesh: TriMesh, path, precision: int = 6) -> None:
    lines = ["OFF", f"{len(mesh.vertices)} {len(mesh.triangles)} 0"]
    lines += [" ".join(f"{x:.{precision}f}" for x in v) for v in mesh.vertices]
    lines += ["3 " + " ".join(str(i) for i in t) for t in mesh.triangles]
    Path(path).write_text("\n".join(lines) + "\n")


# -- primitives -------------------------------------------------------------

def box(size, center=(0.0, 0.0, 0.0), divisions=1) -> TriMesh:
    """Axis-aligned box. ``divisions`` splits each axis (int or per-axis triple)."""
    size = np.asarray(size, dtype=float)
    n = np.broadcast_to(np.asarray(divisions, dtype=int), (3,))
    verts, tris, index = [], [], {}

    def vid(p):
        key = tuple(np.round(p, 12))
        if key not in index:
            index[key] = len(verts)
            verts.append(p)
        return index[key]

    ticks = [np.linspace(-0.5, 0.5, k + 1) for k in n]
    for axis in range(3):
        u, v = (axis + 1) % 3, (axis + 2) % 3
        for sign in (-1.0, 1.0):
            for i in range(n[u]):
                for j in range(n[v]):
                    quad = []
                    for a, b in ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)):
                        p = np.zeros(3)
                        p[axis] = 0.5 * sign
                        p[u], p[v] = ticks[u][a], ticks[v][b]
                        quad.append(vid(p))
                    if sign < 0:
                        quad = quad[::-1]
                    tris += [(quad[0], quad[1], quad[2]), (quad[0], quad[2], quad[3])]
    V = np.array(verts) * size + np.asarray(center, dtype=float)
    return TriMesh(V, tris)


def cylinder(radius: float, height: float, segments: int = 64, stacks: int = 1,
             rings: int = 1) -> TriMesh:
    """Closed cylinder along z with its base on z = 0."""
    ang = np.linspace(0.0, 2 * math.pi, segments, endpoint=False)
    circle = np.stack([np.cos(ang), np.sin(ang)], axis=1)
    verts, tris = [], []
    for s in range(stacks + 1):
        z = height * s / stacks
        verts += [(radius * c[0], radius * c[1], z) for c in circle]
    for s in range(stacks):
        for i in range(segments):
            a, b = s * segments + i, s * segments + (i + 1) % segments
            tris += [(a, b, b + segments), (a, b + segments, a + segments)]
    # caps: concentric rings down to a center vertex
    for cap, z, top in ((0, 0.0, False), (stacks, height, True)):
        outer = [cap * segments + i for i in range(segments)]
        for r in range(rings - 1, 0, -1):
            ring = []
            for c in circle:
                ring.append(len(verts))
                verts.append((radius * r / rings * c[0], radius * r / rings * c[1], z))
            for i in range(segments):
                a, b = outer[i], outer[(i + 1) % segments]
                c, d = ring[i], ring[(i + 1) % segments]
                tris += [(a, b, d), (a, d, c)] if top else [(a, d, b), (a, c, d)]
            outer = ring
        center = len(verts)
        verts.append((0.0, 0.0, z))
        for i in range(segments):
            a, b = outer[i], outer[(i + 1) % segments]
            tris.append((a, b, center) if top else (b, a, center))
    return TriMesh(np.array(verts), tris)


def ellipsoid(radii, center=(0.0, 0.0, 0.0), segments: int = 48, stacks: int = 24) -> TriMesh:
    """UV ellipsoid with poles on the z axis."""
    radii = np.asarray(radii, dtype=float)
    verts = [(0.0, 0.0, -1.0)]
    for s in range(1, stacks):
        phi = -math.pi / 2 + math.pi * s / stacks
        for i in range(segments):
            th = 2 * math.pi * i / segments
            verts.append((math.cos(phi) * math.cos(th), math.cos(phi) * math.sin(th), math.sin(phi)))
    verts.append((0.0, 0.0, 1.0))
    top = len(verts) - 1
    tris = []
    for i in range(segments):
        tris.append((0, 1 + (i + 1) % segments, 1 + i))
    for s in range(stacks - 2):
        base = 1 + s * segments
        for i in range(segments):
            a, b = base + i, base + (i + 1) % segments
            tris += [(a, b, b + segments), (a, b + segments, a + segments)]
    last = 1 + (stacks - 2) * segments
    for i in range(segments):
        tris.append((last + i, last + (i + 1) % segments, top))
    V = np.array(verts) * radii + np.asarray(center, dtype=float)
    return TriMesh(V, tris)
