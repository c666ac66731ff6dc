"""Pure numpy implementations of the hot kernels.

Signatures match the compiled ``_native`` module exactly; the package picks
one of the two at import time (see ``lamebic._kernels``).
"""

import numpy as np

AGM_TOL = 1e-15
AGM_MAX_ITER = 64


def sncndn(x, m):
    """Jacobi sn, cn, dn for 1-D float arrays ``x`` and ``m`` of equal length.

    Parameter convention (``m = k**2``). The argument is reduced modulo the
    real period ``4K(m)`` before the descending Landen recursion. ``m`` must
    already be validated to lie in ``[0, 1]``.
    """
    x = np.asarray(x, dtype=np.float64)
    m = np.asarray(m, dtype=np.float64)
    sn = np.empty_like(x)
    cn = np.empty_like(x)
    dn = np.empty_like(x)

    one = m == 1.0
    if one.any():
        sn[one] = np.tanh(x[one])
        cn[one] = dn[one] = 1.0 / np.cosh(x[one])
    rest = ~one
    if not rest.any():
        return sn, cn, dn
    xr = x[rest]
    mr = m[rest]

    a = np.ones_like(mr)
    b = np.sqrt(1.0 - mr)
    c = np.sqrt(mr)
    ratios = []
    while np.max(np.abs(c)) > AGM_TOL and len(ratios) < AGM_MAX_ITER:
        a, b, c = 0.5 * (a + b), np.sqrt(a * b), 0.5 * (a - b)
        ratios.append(c / a)
    quarter = np.pi / (2.0 * a)
    xr = np.fmod(xr, 4.0 * quarter)

    phi = np.ldexp(a * xr, len(ratios))
    for r in reversed(ratios):
        phi = 0.5 * (phi + np.arcsin(r * np.sin(phi)))
    s = np.sin(phi)
    sn[rest] = s
    cn[rest] = np.cos(phi)
    dn[rest] = np.sqrt(1.0 - mr * s * s)
    return sn, cn, dn


def monodromy_trace(v_nodes, v_mid, h, energies):
    """Trace of the one-period transfer matrix of ``u'' = (V - E) u``.

    ``v_nodes`` holds V at the ``N + 1`` RK4 nodes, ``v_mid`` at the ``N``
    half steps. Classical fixed-step RK4, vectorized over ``energies``.
    """
    v_nodes = np.asarray(v_nodes, dtype=np.float64)
    v_mid = np.asarray(v_mid, dtype=np.float64)
    E = np.asarray(energies, dtype=np.float64)
    # columns: (u, u') for u(0)=1,u'(0)=0 and v(0)=0,v'(0)=1
    y = np.zeros((4, E.size))
    y[0] = 1.0
    y[3] = 1.0
    u = y[0::2]
    p = y[1::2]
    hh = 0.5 * h
    h6 = h / 6.0
    for k in range(v_mid.size):
        q0 = v_nodes[k] - E
        qm = v_mid[k] - E
        q1 = v_nodes[k + 1] - E
        k1u = p
        k1p = q0 * u
        k2u = p + hh * k1p
        k2p = qm * (u + hh * k1u)
        k3u = p + hh * k2p
        k3p = qm * (u + hh * k2u)
        k4u = p + h * k3p
        k4p = q1 * (u + h * k3u)
        u = u + h6 * (k1u + 2.0 * (k2u + k3u) + k4u)
        p = p + h6 * (k1p + 2.0 * (k2p + k3p) + k4p)
    return u[0] + p[1]
