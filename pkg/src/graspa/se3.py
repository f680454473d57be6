"""Rigid-body poses, pose-error metrics and the board region grid.

All poses are expressed in the layout (board) frame: the origin sits at one
corner of the 594 x 420 mm board, x runs along the long edge, y along the
short edge and z points up, away from the table.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import OutOfBoard, SemanticError

ORTHONORMAL_TOL = 1e-6
BOUNDARY_TOL = 1e-3
_I3 = np.eye(3)


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def rotation(axis, angle: float) -> np.ndarray:
    """Rotation matrix for ``angle`` radians about ``axis`` (Rodrigues)."""
    k = np.asarray(axis, dtype=float)
    n = np.linalg.norm(k)
    if n == 0.0:
        raise ValueError("rotation axis must be non-zero")
    k = k / n
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + math.sin(angle) * K + (1.0 - math.cos(angle)) * (K @ K)


def rot_x(angle: float) -> np.ndarray:
    return rotation((1.0, 0.0, 0.0), angle)


def rot_y(angle: float) -> np.ndarray:
    return rotation((0.0, 1.0, 0.0), angle)


def rot_z(angle: float) -> np.ndarray:
    return rotation((0.0, 0.0, 1.0), angle)


def rotation_angle(R) -> float:
    """Angle of the equivalent axis-angle representation, in [0, pi].

    Same value as arccos((tr R - 1) / 2) with the argument clamped, but
    computed as atan2(sin, cos) so it stays accurate near 0 and pi.
    """
    R = np.asarray(R, dtype=float)
    c = min(1.0, max(-1.0, (R[0, 0] + R[1, 1] + R[2, 2] - 1.0) / 2.0))
    s = 0.5 * math.hypot(R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1])
    return math.atan2(s, c)


def axis_angle(R) -> tuple[np.ndarray, float]:
    """Axis and angle of a rotation matrix.

    Near pi the skew part vanishes, so the axis is read from the symmetric
    part instead. For the identity the axis is arbitrary and +z is returned.
    """
    R = np.asarray(R, dtype=float)
    angle = rotation_angle(R)
    v = np.array([R[2, 1] - R[1, 2], R[0, 2] - R[2, 0], R[1, 0] - R[0, 1]])
    s = np.linalg.norm(v)
    if s > 1e-6:
        return v / s, angle
    if angle < 1e-3:
        return np.array([0.0, 0.0, 1.0]), angle
    B = (R + np.eye(3)) / 2.0
    i = int(np.argmax(np.diag(B)))
    axis = B[:, i] / math.sqrt(max(B[i, i], 1e-300))
    return axis / np.linalg.norm(axis), angle


def check_rotation(R, tol: float = ORTHONORMAL_TOL) -> None:
    R = np.asarray(R, dtype=float)
    if R.shape != (3, 3) or not np.isfinite(R).all():
        raise SemanticError("rotation must be a finite 3x3 matrix")
    if np.abs(R.T @ R - _I3).max() > tol:
        raise SemanticError("rotation is not orthonormal")
    (a, b, c), (d, e, f), (g, h, i) = R.tolist()
    det = a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g)
    if abs(det - 1.0) > tol:
        raise SemanticError(f"rotation determinant {det:.6g} != 1")


@dataclass(frozen=True, eq=False)
class Pose:
    """Position (m) and rotation matrix, both in the board frame."""

    p: np.ndarray = field(default_factory=lambda: np.zeros(3))
    R: np.ndarray = field(default_factory=lambda: np.eye(3))

    def __post_init__(self):
        p = _frozen(self.p).reshape(-1)
        if p.shape != (3,) or not np.all(np.isfinite(p)):
            raise SemanticError("position must be a finite 3-vector")
        check_rotation(self.R)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "R", _frozen(self.R))

    @classmethod
    def from_matrix(cls, T) -> Pose:
        T = np.asarray(T, dtype=float)
        if T.shape != (4, 4):
            raise SemanticError("homogeneous matrix must be 4x4")
        if np.max(np.abs(T[3] - (0.0, 0.0, 0.0, 1.0))) > ORTHONORMAL_TOL:
            raise SemanticError("last row of homogeneous matrix must be 0 0 0 1")
        return cls(T[:3, 3], T[:3, :3])

    def matrix(self) -> np.ndarray:
        T = np.eye(4)
        T[:3, :3] = self.R
        T[:3, 3] = self.p
        return T

    def __matmul__(self, other: Pose) -> Pose:
        return Pose(self.R @ other.p + self.p, self.R @ other.R)

    def inverse(self) -> Pose:
        return Pose(-self.R.T @ self.p, self.R.T)

    def apply(self, points) -> np.ndarray:
        """Map points (N x 3 or 3) from this pose's frame into the parent frame."""
        return np.asarray(points, dtype=float) @ self.R.T + self.p

    def translated(self, d) -> Pose:
        return Pose(self.p + np.asarray(d, dtype=float), self.R)

    def __eq__(self, other):
        if not isinstance(other, Pose):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p) and np.array_equal(self.R, other.R))

    def __hash__(self):
        return hash((self.p.tobytes(), self.R.tobytes()))

    def allclose(self, other: Pose, atol: float = 1e-9) -> bool:
        return bool(np.allclose(self.p, other.p, atol=atol) and np.allclose(self.R, other.R, atol=atol))

    def __repr__(self):
        return f"Pose(p={self.p.tolist()}, R={self.R.tolist()})"


@dataclass(frozen=True)
class PoseError:
    e_p: float
    alpha: float
    e_o: float
    r_error: np.ndarray


def position_error(desired: Pose, reached: Pose) -> float:
    return float(np.linalg.norm(reached.p - desired.p))


def orientation_error(desired: Pose, reached: Pose) -> PoseError:
    """Relative rotation between two poses and its equivalent angle.

    ``e_o`` is sin(alpha), saturated at 1 beyond a right angle so that it
    stays monotone in the angle.
    """
    r_error = desired.R.T @ reached.R
    alpha = rotation_angle(r_error)
    e_o = math.sin(alpha) if alpha <= math.pi / 2 else 1.0
    return PoseError(position_error(desired, reached), alpha, e_o, r_error)


def is_reached(desired: Pose, reached: Pose, tau_p: float, tau_o: float) -> bool:
    """Both errors within thresholds; the orientation gate uses the angle in rad."""
    if not tau_p > 0 or not 0 < tau_o <= math.pi:
        raise ValueError("thresholds must satisfy tau_p > 0 and 0 < tau_o <= pi")
    err = orientation_error(desired, reached)
    return err.e_p <= tau_p and err.alpha <= tau_o


@dataclass(frozen=True)
class RegionGrid:
    """Board rectangle split into ``rows`` x ``cols`` cells.

    Regions are numbered row-major from the board origin: region 1 is the
    min-x/min-y cell, region ``cols`` the max-x/min-y cell.
    """

    width: float = 0.594
    height: float = 0.420
    rows: int = 2
    cols: int = 3

    @property
    def cell_width(self) -> float:
        return self.width / self.cols

    @property
    def cell_height(self) -> float:
        return self.height / self.rows

    @property
    def region_ids(self) -> list[int]:
        return list(range(1, self.rows * self.cols + 1))

    def cell_bounds(self, region_id: int) -> tuple[float, float, float, float]:
        """(x_min, y_min, x_max, y_max) of a region."""
        if region_id not in self.region_ids:
            raise ValueError(f"no region {region_id}")
        row, col = divmod(region_id - 1, self.cols)
        return (col * self.cell_width, row * self.cell_height,
                (col + 1) * self.cell_width, (row + 1) * self.cell_height)

    def contains(self, xy, tol: float = BOUNDARY_TOL) -> bool:
        x, y = float(xy[0]), float(xy[1])
        return -tol <= x <= self.width + tol and -tol <= y <= self.height + tol


def regions_of_point(xy, grid: RegionGrid = RegionGrid(), tol: float = BOUNDARY_TOL) -> set[int]:
    """Regions a board point belongs to.

    Points within ``tol`` of a cell boundary belong to every adjacent cell;
    points up to ``tol`` outside the board are clamped onto it.
    """
    x, y = float(xy[0]), float(xy[1])
    if not grid.contains((x, y), tol):
        raise OutOfBoard(f"point ({x:.4f}, {y:.4f}) lies outside the board")
    x = min(max(x, 0.0), grid.width)
    y = min(max(y, 0.0), grid.height)
    found = set()
    for rid in grid.region_ids:
        x0, y0, x1, y1 = grid.cell_bounds(rid)
        if x0 - tol <= x <= x1 + tol and y0 - tol <= y <= y1 + tol:
            found.add(rid)
    return found
