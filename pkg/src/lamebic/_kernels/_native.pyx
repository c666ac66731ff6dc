# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels: Landen/AGM Jacobi functions and RK4 monodromy trace."""

import numpy as np
cimport numpy as cnp
from libc.math cimport sqrt, sin, cos, asin, tanh, cosh, fmod, ldexp, fabs, M_PI

cnp.import_array()

DEF AGM_MAX_ITER = 64
cdef double AGM_TOL = 1e-15


cdef inline void _sncndn(double x, double m, double* sn, double* cn, double* dn) nogil:
    cdef double a, b, c, an, phi, s
    cdef double ratios[AGM_MAX_ITER]
    cdef int n = 0, i
    if m == 1.0:
        sn[0] = tanh(x)
        cn[0] = 1.0 / cosh(x)
        dn[0] = cn[0]
        return
    a = 1.0
    b = sqrt(1.0 - m)
    c = sqrt(m)
    while fabs(c) > AGM_TOL and n < AGM_MAX_ITER:
        an = 0.5 * (a + b)
        c = 0.5 * (a - b)
        b = sqrt(a * b)
        a = an
        ratios[n] = c / a
        n += 1
    x = fmod(x, 2.0 * M_PI / a)
    phi = ldexp(a * x, n)
    for i in range(n - 1, -1, -1):
        phi = 0.5 * (phi + asin(ratios[i] * sin(phi)))
    s = sin(phi)
    sn[0] = s
    cn[0] = cos(phi)
    dn[0] = sqrt(1.0 - m * s * s)


def sncndn(x, m):
    cdef const double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef Py_ssize_t i, n = xv.shape[0]
    sn = np.empty(n)
    cn = np.empty(n)
    dn = np.empty(n)
    cdef double[::1] s = sn, c = cn, d = dn
    with nogil:
        for i in range(n):
            _sncndn(xv[i], mv[i], &s[i], &c[i], &d[i])
    return sn, cn, dn


def monodromy_trace(v_nodes, v_mid, double h, energies):
    cdef const double[::1] vn = np.ascontiguousarray(v_nodes, dtype=np.float64)
    cdef const double[::1] vm = np.ascontiguousarray(v_mid, dtype=np.float64)
    cdef const double[::1] ev = np.ascontiguousarray(energies, dtype=np.float64).ravel()
    cdef Py_ssize_t i, k, ne = ev.shape[0], ns = vm.shape[0]
    out = np.empty(ne)
    cdef double[::1] ov = out
    cdef double E, q0, qm, q1, hh = 0.5 * h, h6 = h / 6.0
    cdef double u1, p1, u2, p2
    cdef double a1, b1, a2, b2, a3, b3, a4, b4
    cdef double c1, d1, c2, d2, c3, d3, c4, d4
    with nogil:
        for i in range(ne):
            E = ev[i]
            u1 = 1.0; p1 = 0.0
            u2 = 0.0; p2 = 1.0
            for k in range(ns):
                q0 = vn[k] - E
                qm = vm[k] - E
                q1 = vn[k + 1] - E
                a1 = p1;              b1 = q0 * u1
                c1 = p2;              d1 = q0 * u2
                a2 = p1 + hh * b1;    b2 = qm * (u1 + hh * a1)
                c2 = p2 + hh * d1;    d2 = qm * (u2 + hh * c1)
                a3 = p1 + hh * b2;    b3 = qm * (u1 + hh * a2)
                c3 = p2 + hh * d2;    d3 = qm * (u2 + hh * c2)
                a4 = p1 + h * b3;     b4 = q1 * (u1 + h * a3)
                c4 = p2 + h * d3;     d4 = q1 * (u2 + h * c3)
                u1 = u1 + h6 * (a1 + 2.0 * (a2 + a3) + a4)
                p1 = p1 + h6 * (b1 + 2.0 * (b2 + b3) + b4)
                u2 = u2 + h6 * (c1 + 2.0 * (c2 + c3) + c4)
                p2 = p2 + h6 * (d1 + 2.0 * (d2 + d3) + d4)
            ov[i] = u1 + p2
    return out
