"""Jacobi elliptic functions and the complete elliptic integral K(m).

All routines use the *parameter* convention ``m = k**2``, so ``sn(x, m)``
here equals ``scipy.special.ellipj(x, m)[0]`` but not
``mpmath.ellipfun('sn', x, k=...)`` with the modulus ``k``.
"""

import math
from typing import NamedTuple

import numpy as np

from ._kernels import sncndn
from .errors import DomainError

AGM_TOL = 1e-15


class EllipticTriple(NamedTuple):
    """Values of (sn, cn, dn); floats for scalar input, arrays otherwise."""

    sn: np.ndarray
    cn: np.ndarray
    dn: np.ndarray


def _check_parameter(m, upper_inclusive=True):
    arr = np.asarray(m, dtype=np.float64)
    bad = (arr < 0.0) | (arr > 1.0 if upper_inclusive else arr >= 1.0) | ~np.isfinite(arr)
    if np.any(bad):
        bound = "[0, 1]" if upper_inclusive else "[0, 1)"
        raise DomainError(f"elliptic parameter m must lie in {bound}, got {m!r}")
    return arr


def agm(a, b):
    """Arithmetic-geometric mean of two positive numbers."""
    while abs(a - b) > AGM_TOL * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def complete_elliptic_K(m):
    """Complete elliptic integral of the first kind, ``K(m) = pi / (2 AGM(1, sqrt(1-m)))``.

    Raises DomainError unless ``0 <= m < 1``.
    """
    _check_parameter(m, upper_inclusive=False)
    return math.pi / (2.0 * agm(1.0, math.sqrt(1.0 - float(m))))


def jacobi_elliptic(x, m):
    """Return ``EllipticTriple(sn, cn, dn)`` at argument ``x`` and parameter ``m``.

    ``x`` and ``m`` broadcast against each other. Computed by descending
    Landen transformation on the AGM sequence after reducing ``x`` modulo
    ``4K(m)``. ``m = 1`` gives ``(tanh, sech, sech)``.
    """
    scalar = np.ndim(x) == 0 and np.ndim(m) == 0
    marr = _check_parameter(m)
    xb, mb = np.broadcast_arrays(np.asarray(x, dtype=np.float64), marr)
    shape = xb.shape
    sn, cn, dn = sncndn(xb.ravel(), mb.ravel())
    if scalar:
        return EllipticTriple(float(sn[0]), float(cn[0]), float(dn[0]))
    return EllipticTriple(sn.reshape(shape), cn.reshape(shape), dn.reshape(shape))


def jacobi_derivatives(t, m):
    """Analytic x-derivatives ``(sn', cn', dn') = (cn dn, -sn dn, -m sn cn)``."""
    sn, cn, dn = t
    return cn * dn, -sn * dn, -m * sn * cn
