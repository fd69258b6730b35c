"""Wall geometry for the gap and passageway setups, and penalty contact on the prop guards.

Inertial frame of the scenarios: x is the direction of travel, y lateral,
z down (floor at z = 0). Contact is frictionless; each guard is a sphere of
radius ``guard_radius`` centred on its motor, which for near-level flight
past vertical walls is the same as the guard disc.
"""

from dataclasses import dataclass, field

import numpy as np

K_WALL = 2000.0   # N/m
C_WALL = 50.0     # N s/m
E1, E2, E3 = np.eye(3)


@dataclass(frozen=True)
class WallPlane:
    point: np.ndarray       # reference point on the wall; s is measured from here
    normal: np.ndarray      # unit, horizontal, pointing to the free side
    z_extent: tuple         # (z_lo, z_hi), inertial
    s_extent: tuple         # (s_lo, s_hi) along ``tangent``
    tangent: np.ndarray = field(default_factory=lambda: E1.copy())

    def __post_init__(self):
        if abs(np.linalg.norm(self.normal) - 1.0) > 1e-9:
            raise ValueError("wall normal must be a unit vector")
        if not self.z_extent[0] < self.z_extent[1]:
            raise ValueError("z_lo must be below z_hi")
        if not self.s_extent[0] < self.s_extent[1]:
            raise ValueError("s_lo must be below s_hi")

    def closest_point(self, c):
        """Closest wall point to ``c``, signed offset along the normal, and
        whether ``c`` projects inside the wall's extents."""
        w = c - self.point
        a = float(w @ self.normal)
        s_raw = float(w @ self.tangent)
        s = float(np.clip(s_raw, *self.s_extent))
        z = float(np.clip(c[2], *self.z_extent))
        q = self.point + s * self.tangent
        q[2] = z
        return q, a, (s == s_raw and z == c[2])


@dataclass(frozen=True)
class ContactReport:
    depth: np.ndarray          # (4,) penetration per guard, m
    forces: np.ndarray         # (4, 3) inertial contact force per guard, N
    normals: np.ndarray        # (4, 3) contact normal per guard (zero if free)
    force: np.ndarray          # (3,) total, inertial frame
    moment: np.ndarray         # (3,) about the CG, body frame
    hinge_torques: np.ndarray  # (2,) generalised forces on beta1, beta2

    @property
    def in_contact(self):
        return bool(np.any(self.depth > 0))

    @property
    def wrench(self):
        return self.force, self.moment


def _arm_rates(hinges, params):
    """d(motor position)/dt in the body frame due to hinge motion."""
    l = params.l
    (b1, b2), (w1, w2) = hinges.beta, hinges.beta_dot
    out = np.zeros((4, 3))
    out[1] = l * w1 * np.array([np.sin(b1), -np.cos(b1), 0.0])
    out[3] = l * w2 * np.array([np.sin(b2), np.cos(b2), 0.0])
    return out


def hinge_points(hinges, params, cg):
    """Hinge locations of arms 2 and 4 relative to the CG (body frame)."""
    b1, b2 = hinges.beta
    Rs = params.R_s
    return (np.array([-Rs * np.cos(b1), -Rs * np.sin(b1), 0.0]) - cg,
            np.array([-Rs * np.cos(b2), Rs * np.sin(b2), 0.0]) - cg)


def contact_forces(s, geom, walls, params, k_wall=K_WALL, c_wall=C_WALL):
    """Penalty forces on the four guards against ``walls``.

    Normal force magnitude is k_wall * depth + c_wall * max(0, depth rate):
    damping acts only while the guard moves further in, so the force never
    pulls. Forces on arms 2 and 4 also load their hinges about the hinge point.
    """
    rg = params.guard_radius
    depth = np.zeros(4)
    forces = np.zeros((4, 3))
    normals = np.zeros((4, 3))
    moment = np.zeros(3)
    hinge_tau = np.zeros(2)
    if not walls:
        return ContactReport(depth, forces, normals, np.zeros(3), moment, hinge_tau)

    p_dot = _arm_rates(s.hinges, params)
    h2, h4 = hinge_points(s.hinges, params, geom.cg)
    for i, p in enumerate(geom.positions):
        c = s.x + s.R @ p
        c_dot = s.v + s.R @ (np.cross(s.Omega, p) + p_dot[i])
        for wall in walls:
            q, a, interior = wall.closest_point(c)
            d = c - q
            dist = float(np.linalg.norm(d))
            if interior:
                if a < -rg:
                    continue  # fully behind the wall sheet
                n, dist = wall.normal, a
            elif a <= 0.0 or dist == 0.0:
                continue  # behind the wall sheet: outside this model
            else:
                n = d / dist
            delta = rg - dist
            if delta <= 0.0:
                continue
            delta_rate = -float(c_dot @ n)
            F = (k_wall * delta + c_wall * max(0.0, delta_rate)) * n
            forces[i] += F
            if delta > depth[i]:
                depth[i], normals[i] = delta, n
            r_b = s.R.T @ (q - s.x)
            F_b = s.R.T @ F
            moment += np.cross(r_b, F_b)
            if i == 1:
                hinge_tau[0] += np.cross(r_b - h2, F_b)[2]
            elif i == 3:
                hinge_tau[1] -= np.cross(r_b - h4, F_b)[2]
    return ContactReport(depth, forces, normals, forces.sum(axis=0), moment, hinge_tau)


def effective_width(s, geom, report, params, lateral=E2):
    """Extent of the four guards across ``lateral``, less penetration on the loaded side."""
    rg = params.guard_radius
    ys = np.array([(s.x + s.R @ p) @ lateral for p in geom.positions])
    shrink_hi = report.depth * np.maximum(0.0, -(report.normals @ lateral))
    shrink_lo = report.depth * np.maximum(0.0, report.normals @ lateral)
    return float(np.max(ys + rg - shrink_hi) - np.min(ys - rg + shrink_lo))


def _pair(separation, height, start, length, centre=0.0):
    z = (-height, 0.0)
    s = (start, start + length)
    half = 0.5 * separation
    return [
        WallPlane(np.array([0.0, centre - half, 0.0]), E2.copy(), z, s),
        WallPlane(np.array([0.0, centre + half, 0.0]), -E2, z, s),
    ]


def scenario_geometry(kind, dims=None):
    """Wall list for ``kind`` in {"gap", "passageway", "open"}.

    gap: separation 0.30 m, height 0.90 m, start 0.5 m, depth 0.04 m.
    passageway: width 0.29 m, length 1.0 m, start 0.8 m, height 1.2 m.
    """
    dims = dict(dims or {})
    if kind == "open":
        return []
    if kind == "gap":
        d = {"separation": 0.30, "height": 0.90, "start": 0.5, "depth": 0.04, "centre": 0.0}
        d.update(dims)
        sep, length = d["separation"], d["depth"]
    elif kind == "passageway":
        d = {"width": 0.29, "length": 1.0, "start": 0.8, "height": 1.2, "centre": 0.0}
        d.update(dims)
        sep, length = d["width"], d["length"]
    else:
        raise ValueError(f"unknown scenario kind {kind!r}")
    for key in ("height",):
        if d[key] <= 0:
            raise ValueError(f"{key} must be positive")
    if sep <= 0 or length <= 0:
        raise ValueError("wall separation and length must be positive")
    return _pair(sep, d["height"], d["start"], length, d["centre"])
