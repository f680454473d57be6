"""Reference implementations that share no code with the package."""
from __future__ import annotations

import numpy as np
from scipy.optimize import minimize
from scipy.spatial.transform import Rotation


def unit_directions(n: int, dim: int = 6, seed: int = 0) -> np.ndarray:
    u = np.random.default_rng(seed).standard_normal((n, dim))
    return u / np.linalg.norm(u, axis=1, keepdims=True)


def support_radius(points, n_dirs: int = 100_000, seed: int = 0, refine: int = 16) -> float:
    """Inscribed-ball radius as the minimum of the support function over unit directions.

    h(u) = max_i <w_i, u>; the ball of radius r around the origin fits inside
    the hull iff h(u) >= r for every unit u. Sampled directions give an upper
    bound, which a constrained local search from the best samples tightens.
    """
    W = np.asarray(points, dtype=float)
    U = unit_directions(n_dirs, W.shape[1], seed)
    h = (U @ W.T).max(axis=1)
    best = float(h.min())
    if best <= 0:
        return 0.0
    for i in np.argsort(h)[:refine]:
        x0 = np.append(U[i], h[i])
        res = minimize(
            lambda x: x[-1], x0, method="SLSQP",
            constraints=[{"type": "ineq", "fun": lambda x: x[-1] - W @ x[:-1]},
                         {"type": "eq", "fun": lambda x: x[:-1] @ x[:-1] - 1.0}],
            options={"ftol": 1e-13, "maxiter": 500},
        )
        # any unit direction bounds the radius from above, converged or not
        u = res.x[:-1] / np.linalg.norm(res.x[:-1])
        best = min(best, float((W @ u).max()))
    return max(best, 0.0)


def rodrigues(axis, angle) -> np.ndarray:
    k = np.asarray(axis, dtype=float)
    k = k / np.linalg.norm(k)
    K = np.array([[0, -k[2], k[1]], [k[2], 0, -k[0]], [-k[1], k[0], 0]])
    return np.eye(3) + np.sin(angle) * K + (1 - np.cos(angle)) * K @ K


def random_rotation(rng) -> np.ndarray:
    """Uniform rotation via QR of a Gaussian matrix."""
    q, r = np.linalg.qr(rng.standard_normal((3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def angle_between(Ra, Rb) -> float:
    """Geodesic angle from the unit quaternion of Ra^T Rb."""
    x, y, z, w = Rotation.from_matrix(Ra.T @ Rb).as_quat()
    return float(2.0 * np.arctan2(np.linalg.norm([x, y, z]), abs(w)))
