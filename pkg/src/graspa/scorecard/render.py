"""Top-down SVG drawing of a layout board."""
from __future__ import annotations

import html
from xml.sax.saxutils import quoteattr

import numpy as np
from scipy.spatial import ConvexHull, QhullError

from ..bench_data.mesh import TriMesh, load_mesh
from ..bench_data.types import GraspSet, Layout, PoseSet
from ..se3 import RegionGrid

SCALE = 1000.0  # px per meter
MARGIN = 20.0
ARROW = 0.03  # m


def _footprint(points_xy: np.ndarray) -> np.ndarray:
    try:
        return points_xy[ConvexHull(points_xy).vertices]
    except (QhullError, ValueError):
        lo, hi = points_xy.min(axis=0), points_xy.max(axis=0)
        return np.array([lo, [hi[0], lo[1]], hi, [lo[0], hi[1]]])


def render_layout(layout: Layout | None = None, meshes: dict | None = None, pose_set: PoseSet | None = None,
                  grasps: GraspSet | None = None, grid=None) -> str:
    """SVG of the board, its region grid and object silhouettes.

    Silhouettes are the convex hulls of each placed mesh projected on the
    board plane. Pose-set poses and planned grasps are drawn as arrows
    along their frame's x axis.
    """
    grid = grid or (layout.grid if layout is not None else None)
    if grid is None:
        grid = RegionGrid()
    W, H = grid.width * SCALE, grid.height * SCALE

    def xy(p):
        return MARGIN + p[0] * SCALE, MARGIN + H - p[1] * SCALE

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2 * MARGIN:g}" '
           f'height="{H + 2 * MARGIN:g}" viewBox="0 0 {W + 2 * MARGIN:g} {H + 2 * MARGIN:g}">',
           '<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto">'
           '<path d="M0,0 L6,3 L0,6 z"/></marker></defs>',
           f'<rect class="board" x="{MARGIN:g}" y="{MARGIN:g}" width="{W:g}" height="{H:g}" '
           'fill="white" stroke="black"/>']
    for rid in grid.region_ids:
        x0, y0, x1, y1 = grid.cell_bounds(rid)
        sx, sy = xy((x0, y1))
        out.append(f'<rect class="region" x="{sx:.1f}" y="{sy:.1f}" width="{(x1 - x0) * SCALE:.1f}" '
                   f'height="{(y1 - y0) * SCALE:.1f}" fill="none" stroke="#999" stroke-dasharray="4 3"/>')
        cx, cy = xy(((x0 + x1) / 2, (y0 + y1) / 2))
        out.append(f'<text class="region-label" x="{cx:.1f}" y="{cy:.1f}" fill="#bbb" font-size="40" '
                   f'text-anchor="middle" dominant-baseline="middle">{rid}</text>')
    if layout is not None:
        meshes = meshes or {}
        for obj in layout.objects:
            mesh: TriMesh = meshes.get(obj.name) or load_mesh(layout.mesh_path(obj))
            placed = mesh.transformed(obj.pose)
            hull = _footprint(placed.vertices[:, :2])
            pts = " ".join("{:.1f},{:.1f}".format(*xy(p)) for p in hull)
            out.append(f'<polygon class="object" points="{pts}" fill="#8cb4d9" fill-opacity="0.6" '
                       f'stroke="#245"><title>{html.escape(obj.name)}</title></polygon>')
            cx, cy = xy(placed.center_of_mass)
            out.append(f'<text class="object-label" x="{cx:.1f}" y="{cy:.1f}" font-size="11" '
                       f'text-anchor="middle">{html.escape(obj.name)}</text>')
    arrows = []
    if pose_set is not None:
        arrows += [("pose", name, p) for name, p in pose_set.poses]
    if grasps is not None:
        for name, trials in grasps.as_dict().items():
            arrows += [("grasp", f"{name} #{i + 1}", t.pose) for i, t in enumerate(trials)]
    for cls, label, pose in arrows:
        x0, y0 = xy(pose.p)
        x1, y1 = xy(pose.p + ARROW * pose.R[:, 0])
        color = "#c33" if cls == "pose" else "#393"
        out.append(f'<line class={quoteattr(cls)} x1="{x0:.1f}" y1="{y0:.1f}" x2="{x1:.1f}" y2="{y1:.1f}" '
                   f'stroke="{color}" stroke-width="2" marker-end="url(#head)">'
                   f'<title>{html.escape(label)}</title></line>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
