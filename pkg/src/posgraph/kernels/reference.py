"""Pure-Python geometry kernels.

Reference implementation of the hot collision queries. The compiled backend in
``_fastgeom.pyx`` mirrors these signatures exactly; this module is the fallback
selected when the extension is unavailable (or POSGRAPH_PURE is set).

Boxes are yaw-only oriented: free rotation about z, axis-aligned in z. A pair
overlaps iff the z intervals overlap and the xy footprints overlap, which the
separating-axis test over the four footprint edge normals decides exactly.
Touching counts as overlap (closed-set convention).
"""

from __future__ import annotations

import math

BACKEND_NAME = "pure"


def _axis_gap(dx, dy, ux, uy, ahx, ahy, ac, as_, bhx, bhy, bc, bs):
    # gap along axis (ux, uy): center distance minus both projected radii
    d = abs(dx * ux + dy * uy)
    ra = ahx * abs(ux * ac + uy * as_) + ahy * abs(-ux * as_ + uy * ac)
    rb = bhx * abs(ux * bc + uy * bs) + bhy * abs(-ux * bs + uy * bc)
    return d - (ra + rb)


def obb_separation(ax, ay, az, ahx, ahy, ahz, ayaw,
                   bx, by, bz, bhx, bhy, bhz, byaw) -> float:
    """Largest axis gap over the five tested axes.

    Positive: the boxes are disjoint by at least that much along some axis.
    Zero or negative on every axis: they overlap (or touch).
    """
    gap = abs(bz - az) - (ahz + bhz)
    ac, as_ = math.cos(ayaw), math.sin(ayaw)
    bc, bs = math.cos(byaw), math.sin(byaw)
    dx, dy = bx - ax, by - ay
    for ux, uy in ((ac, as_), (-as_, ac), (bc, bs), (-bs, bc)):
        g = _axis_gap(dx, dy, ux, uy, ahx, ahy, ac, as_, bhx, bhy, bc, bs)
        if g > gap:
            gap = g
    return gap


def obb_overlap(ax, ay, az, ahx, ahy, ahz, ayaw,
                bx, by, bz, bhx, bhy, bhz, byaw) -> bool:
    if abs(bz - az) > ahz + bhz:
        return False
    ac, as_ = math.cos(ayaw), math.sin(ayaw)
    bc, bs = math.cos(byaw), math.sin(byaw)
    dx, dy = bx - ax, by - ay
    for ux, uy in ((ac, as_), (-as_, ac), (bc, bs), (-bs, bc)):
        if _axis_gap(dx, dy, ux, uy, ahx, ahy, ac, as_, bhx, bhy, bc, bs) > 0.0:
            return False
    return True


def box_hits_any(cx, cy, cz, hx, hy, hz, yaw, obstacles) -> bool:
    """True if the box touches any obstacle row (cx,cy,cz,hx,hy,hz,yaw)."""
    for row in obstacles:
        if obb_overlap(cx, cy, cz, hx, hy, hz, yaw,
                       float(row[0]), float(row[1]), float(row[2]),
                       float(row[3]), float(row[4]), float(row[5]), float(row[6])):
            return True
    return False


def poses_sweep_hits_any(poses, tcx, tcy, tcz, thx, thy, thz, tyaw, obstacles) -> bool:
    """Place the template box at every pose row (x,y,z,yaw); any contact -> True.

    The template center offset rotates with the pose yaw; the box yaw is the
    pose yaw plus the template yaw. z is a plain offset (boxes never tilt).
    """
    for p in poses:
        px, py, pz, pyaw = float(p[0]), float(p[1]), float(p[2]), float(p[3])
        c, s = math.cos(pyaw), math.sin(pyaw)
        cx = px + tcx * c - tcy * s
        cy = py + tcx * s + tcy * c
        if box_hits_any(cx, cy, pz + tcz, thx, thy, thz, pyaw + tyaw, obstacles):
            return True
    return False
