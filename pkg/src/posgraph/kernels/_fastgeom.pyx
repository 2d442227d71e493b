# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled geometry kernels. Mirrors kernels/reference.py exactly."""

from libc.math cimport cos, sin, fabs

BACKEND_NAME = "compiled"


cdef inline double _axis_gap(double dx, double dy, double ux, double uy,
                             double ahx, double ahy, double ac, double as_,
                             double bhx, double bhy, double bc, double bs) nogil:
    cdef double d = fabs(dx * ux + dy * uy)
    cdef double ra = ahx * fabs(ux * ac + uy * as_) + ahy * fabs(-ux * as_ + uy * ac)
    cdef double rb = bhx * fabs(ux * bc + uy * bs) + bhy * fabs(-ux * bs + uy * bc)
    return d - (ra + rb)


cdef inline bint _obb_overlap(double ax, double ay, double az,
                              double ahx, double ahy, double ahz, double ayaw,
                              double bx, double by, double bz,
                              double bhx, double bhy, double bhz, double byaw) nogil:
    if fabs(bz - az) > ahz + bhz:
        return 0
    cdef double ac = cos(ayaw), as_ = sin(ayaw)
    cdef double bc = cos(byaw), bs = sin(byaw)
    cdef double dx = bx - ax, dy = by - ay
    if _axis_gap(dx, dy, ac, as_, ahx, ahy, ac, as_, bhx, bhy, bc, bs) > 0.0:
        return 0
    if _axis_gap(dx, dy, -as_, ac, ahx, ahy, ac, as_, bhx, bhy, bc, bs) > 0.0:
        return 0
    if _axis_gap(dx, dy, bc, bs, ahx, ahy, ac, as_, bhx, bhy, bc, bs) > 0.0:
        return 0
    if _axis_gap(dx, dy, -bs, bc, ahx, ahy, ac, as_, bhx, bhy, bc, bs) > 0.0:
        return 0
    return 1


def obb_overlap(double ax, double ay, double az,
                double ahx, double ahy, double ahz, double ayaw,
                double bx, double by, double bz,
                double bhx, double bhy, double bhz, double byaw):
    return bool(_obb_overlap(ax, ay, az, ahx, ahy, ahz, ayaw,
                             bx, by, bz, bhx, bhy, bhz, byaw))


cdef inline bint _box_hits_any(double cx, double cy, double cz,
                               double hx, double hy, double hz, double yaw,
                               double[:, ::1] obs) nogil:
    cdef Py_ssize_t i
    for i in range(obs.shape[0]):
        if _obb_overlap(cx, cy, cz, hx, hy, hz, yaw,
                        obs[i, 0], obs[i, 1], obs[i, 2],
                        obs[i, 3], obs[i, 4], obs[i, 5], obs[i, 6]):
            return 1
    return 0


def box_hits_any(double cx, double cy, double cz,
                 double hx, double hy, double hz, double yaw,
                 double[:, ::1] obstacles):
    return bool(_box_hits_any(cx, cy, cz, hx, hy, hz, yaw, obstacles))


def poses_sweep_hits_any(double[:, ::1] poses,
                         double tcx, double tcy, double tcz,
                         double thx, double thy, double thz, double tyaw,
                         double[:, ::1] obstacles):
    cdef Py_ssize_t i
    cdef double px, py, pz, pyaw, c, s, cx, cy
    cdef bint hit = 0
    with nogil:
        for i in range(poses.shape[0]):
            px = poses[i, 0]
            py = poses[i, 1]
            pz = poses[i, 2]
            pyaw = poses[i, 3]
            c = cos(pyaw)
            s = sin(pyaw)
            cx = px + tcx * c - tcy * s
            cy = py + tcx * s + tcy * c
            if _box_hits_any(cx, cy, pz + tcz, thx, thy, thz, pyaw + tyaw, obstacles):
                hit = 1
                break
    return bool(hit)
