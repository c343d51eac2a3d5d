"""
Special functions for partial-wave scattering.

Spherical Bessel ``j_l``, spherical Neumann ``n_l``, spherical Hankel
``h_l^(1) = j_l + i n_l`` and ``h_l^(2) = j_l - i n_l``, Legendre polynomials
``P_l`` and the (reverse-free) Bessel polynomials ``y_l``.

The Bessel polynomial and the spherical Neumann function share the symbol
``y`` in the literature; here they are always called ``bessel_poly`` and
``spherical_neumann``.

Recurrences
-----------
* ``j_l``: upward from the closed forms of ``j_0, j_1`` when the argument is
  real and ``l_max <= |z|``; otherwise Miller's downward recurrence
  normalised against whichever of ``j_0``/``j_1`` is larger in magnitude.
* ``n_l``: upward for real ``z``.  For complex ``z`` the Hankel function
  that decays in the half-plane of ``z`` is recurred upward instead and
  ``n_l`` is recovered from it and ``j_l``.
* ``y_l``: ``y_{l+1}(x) = (2l+1) x y_l(x) + y_{l-1}(x)``, ``y_0 = 1``,
  ``y_1 = 1 + x``.
* ``P_l``: Bonnet's three-term recurrence, exact at ``x = +-1``.

Accuracy is checked against 30-digit mpmath tables in ``tests/data``.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_MAX_L = 10_000

_RESCALE_ABOVE = 1e250
_RESCALE_BY = 1e-250


def max_order() -> int:
    """Hard cap on partial-wave orders (env ``NEARFIELD_MAX_L`` overrides)."""
    raw = os.environ.get("NEARFIELD_MAX_L")
    if raw is None:
        return DEFAULT_MAX_L
    try:
        cap = int(raw)
    except ValueError:
        raise CapacityError(f"NEARFIELD_MAX_L must be an integer, got {raw!r}") from None
    if cap < 0:
        raise CapacityError(f"NEARFIELD_MAX_L must be non-negative, got {cap}")
    return cap


def _check_order(l_max: int) -> int:
    if int(l_max) != l_max or l_max < 0:
        raise DomainError(f"order must be a non-negative integer, got {l_max!r}")
    l_max = int(l_max)
    cap = max_order()
    if l_max > cap:
        raise CapacityError(f"order {l_max} exceeds the hard cap {cap} (NEARFIELD_MAX_L)")
    return l_max


def _as_scalar(z):
    """Return a Python float for real input, complex otherwise."""
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return z


# ---------------------------------------------------------------------------
# spherical Bessel / Neumann / Hankel
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SphericalBesselTriple:
    """``j_l``, ``n_l`` and both Hankel functions of one order at one point."""

    order: int
    argument: complex
    j: complex
    n: complex
    h1: complex
    h2: complex


def _j01(z):
    if isinstance(z, float):
        s, c = math.sin(z), math.cos(z)
    else:
        s, c = cmath.sin(z), cmath.cos(z)
    j0 = s / z
    j1 = s / (z * z) - c / z
    return j0, j1, s, c


def _miller_start(l_top: int, az: float) -> int:
    # Walk up from the turning point until the estimated ratio product
    # j_N / j_{l_top} is far below double precision.
    start = l_top + int(math.ceil(4.0 * az ** (1.0 / 3.0))) + 10
    log_decay = 0.0
    n = start
    while log_decay > -40.0:
        log_decay += math.log(max(az, 1e-300) / (2 * n + 3))
        n += 1
    return n


def _j_downward(l_max: int, z, j0, j1) -> list:
    az = abs(z)
    start = _miller_start(max(l_max, int(math.ceil(az))), az)
    vals = [0.0] * (l_max + 1)
    f_next = 0.0 * z
    f = 1.0 + 0.0 * z
    inv_z = 1.0 / z
    for l in range(start, 0, -1):
        # f = f_l, f_next = f_{l+1}; produce f_{l-1}
        f_prev = (2 * l + 1) * inv_z * f - f_next
        f_next, f = f, f_prev
        if abs(f) > _RESCALE_ABOVE:
            f *= _RESCALE_BY
            f_next *= _RESCALE_BY
            for i in range(l - 1, l_max + 1):
                vals[i] *= _RESCALE_BY
        if l - 1 <= l_max:
            vals[l - 1] = f
    # vals[l] now holds f_l for l <= l_max; f_next is f_1 when l_max == 0
    f0 = vals[0]
    f1 = vals[1] if l_max >= 1 else f_next
    if abs(j0) >= abs(j1):
        scale = j0 / f0
    else:
        scale = j1 / f1
    return [v * scale for v in vals]


def _upward(f0, f1, l_max: int, z) -> list:
    vals = [f0, f1][: l_max + 1]
    for l in range(1, l_max):
        nxt = (2 * l + 1) / z * vals[l] - vals[l - 1]
        if not cmath.isfinite(nxt):
            # overflow: the dominant solution is no longer representable
            fill = math.copysign(math.inf, vals[l].real) if isinstance(z, float) else complex(math.inf, math.inf)
            vals.extend([fill] * (l_max - l))
            break
        vals.append(nxt)
    return vals


def _sph_all(l_max: int, z):
    """``(j, n, h1, h2)`` lists for orders ``0..l_max`` (``z`` already checked).

    Real ``z``: ``n`` upward and ``h = j +- i n`` exactly.  Complex ``z``:
    whichever Hankel function decays into the half-plane of ``z`` is recurred
    upward from its closed form and the other one follows from ``2 j``;
    recurring ``n`` directly would lose that exponentially small component.
    """
    j0, j1, s, c = _j01(z)
    real = isinstance(z, float)

    if real and l_max <= abs(z):
        jl = _upward(j0, j1, l_max, z)
    else:
        jl = _j_downward(l_max, z, j0, j1)
        jl[0] = j0

    if real:
        nl = _upward(-c / z, -c / (z * z) - s / z, l_max, z)
        h1 = [a + 1j * b for a, b in zip(jl, nl)]
        h2 = [a - 1j * b for a, b in zip(jl, nl)]
    elif z.imag >= 0:
        e = cmath.exp(1j * z)
        h1 = _upward(-1j * e / z, -e * (z + 1j) / (z * z), l_max, z)
        h2 = [2 * a - b for a, b in zip(jl, h1)]
        nl = [-1j * (b - a) for a, b in zip(jl, h1)]
    else:
        e = cmath.exp(-1j * z)
        h2 = _upward(1j * e / z, -e * (z - 1j) / (z * z), l_max, z)
        h1 = [2 * a - b for a, b in zip(jl, h2)]
        nl = [1j * (b - a) for a, b in zip(jl, h2)]
    return jl, nl, h1, h2


def _prepare(l_max: int, z):
    l_max = _check_order(l_max)
    z = _as_scalar(z)
    if z == 0:
        raise DomainError("spherical Bessel/Neumann evaluation requires z != 0")
    return l_max, z


def sph_jn_yn(l_max: int, z):
    """
    Spherical Bessel and Neumann functions of orders ``0..l_max``.

    Parameters
    ----------
    l_max : int
        Highest order, non-negative.
    z : complex or float
        Argument, non-zero.

    Returns
    -------
    j, n : ndarray
        Arrays of length ``l_max + 1``; float64 for real ``z``, complex128
        otherwise.
    """
    l_max, z = _prepare(l_max, z)
    jl, nl, _, _ = _sph_all(l_max, z)
    dtype = np.float64 if isinstance(z, float) else np.complex128
    return np.asarray(jl, dtype=dtype), np.asarray(nl, dtype=dtype)


def sph_jn_yn_deriv(l_max: int, z):
    """``(j, n, j', n')`` for orders ``0..l_max``, derivatives w.r.t. ``z``.

    Uses ``f_l' = f_{l-1} - (l+1) f_l / z`` and ``f_0' = -f_1``.
    """
    j, n = sph_jn_yn(l_max + 1, z)
    z = _as_scalar(z)
    ls = np.arange(l_max + 1)
    dj = np.empty(l_max + 1, dtype=j.dtype)
    dn = np.empty(l_max + 1, dtype=n.dtype)
    dj[0], dn[0] = -j[1], -n[1]
    if l_max >= 1:
        dj[1:] = j[:l_max] - (ls[1:] + 1) * j[1 : l_max + 1] / z
        dn[1:] = n[:l_max] - (ls[1:] + 1) * n[1 : l_max + 1] / z
    return j[: l_max + 1], n[: l_max + 1], dj, dn


def spherical_neumann(l_max: int, z) -> np.ndarray:
    return sph_jn_yn(l_max, z)[1]


def spherical_hankel1(l_max: int, z) -> np.ndarray:
    l_max, z = _prepare(l_max, z)
    return np.asarray(_sph_all(l_max, z)[2], dtype=np.complex128)


def spherical_hankel2(l_max: int, z) -> np.ndarray:
    l_max, z = _prepare(l_max, z)
    return np.asarray(_sph_all(l_max, z)[3], dtype=np.complex128)


def spherical_bessel(l_max: int, z) -> list[SphericalBesselTriple]:
    """All four spherical functions for ``l = 0..l_max`` at ``z``.

    For real ``z`` the Hankel functions are assembled as ``j +- i n`` so the
    construction holds exactly; for complex ``z`` it holds to rounding
    relative to ``|j| + |n|``.
    """
    l_max, z = _prepare(l_max, z)
    jl, nl, h1, h2 = _sph_all(l_max, z)
    zc = complex(z)
    return [
        SphericalBesselTriple(l, zc, complex(jl[l]), complex(nl[l]), complex(h1[l]), complex(h2[l]))
        for l in range(l_max + 1)
    ]


def spherical_bessel_j_at_origin(l: int) -> float:
    """Regular limit ``j_l(0)``."""
    return 1.0 if l == 0 else 0.0


# ---------------------------------------------------------------------------
# Bessel polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class BesselPolyValue:
    """``y_l(x)`` with its polar decomposition ``modulus * exp(i argument_phase)``."""

    order: int
    argument: complex
    value: complex
    modulus: float
    argument_phase: float


def bessel_poly_values(l_max: int, x) -> np.ndarray:
    """``y_0(x) .. y_{l_max}(x)`` as a complex array."""
    l_max = _check_order(l_max)
    x = complex(x)
    vals = [1.0 + 0j]
    if l_max >= 1:
        vals.append(1.0 + x)
    for l in range(1, l_max):
        vals.append((2 * l + 1) * x * vals[l] + vals[l - 1])
    return np.asarray(vals, dtype=np.complex128)


def bessel_poly(l: int, x) -> BesselPolyValue:
    """
    Degree-``l`` Bessel polynomial at ``x`` and its modulus/phase.

    The phase is the principal value in ``(-pi, pi]`` and is not unwrapped.

    Examples
    --------
    >>> bessel_poly(1, 0.5).value
    (1.5+0j)
    """
    value = complex(bessel_poly_values(l, x)[l])
    phase = math.atan2(value.imag, value.real)
    if phase == -math.pi:
        phase = math.pi
    return BesselPolyValue(int(l), complex(x), value, abs(value), phase)


# ---------------------------------------------------------------------------
# Legendre polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LegendreValue:
    order: int
    argument: float
    value: float


def legendre_values(l_max: int, x: float) -> np.ndarray:
    """``P_0(x) .. P_{l_max}(x)`` for ``-1 <= x <= 1``."""
    l_max = _check_order(l_max)
    x = float(x)
    if not -1.0 <= x <= 1.0:
        raise DomainError(f"Legendre argument must lie in [-1, 1], got {x!r}")
    if x == 1.0:
        return np.ones(l_max + 1)
    if x == -1.0:
        return np.where(np.arange(l_max + 1) % 2 == 0, 1.0, -1.0)
    p = np.empty(l_max + 1)
    p[0] = 1.0
    if l_max >= 1:
        p[1] = x
    for l in range(1, l_max):
        p[l + 1] = ((2 * l + 1) * x * p[l] - l * p[l - 1]) / (l + 1)
    return p


def legendre_p(l_max: int, x: float) -> list[LegendreValue]:
    p = legendre_values(l_max, x)
    return [LegendreValue(l, float(x), float(v)) for l, v in enumerate(p)]


# i**l and (-i)**l by table lookup, exact in floating point
_I_POW = (1 + 0j, 1j, -1 + 0j, -1j)
_MINUS_I_POW = (1 + 0j, -1j, -1 + 0j, 1j)


def i_pow(l: int) -> complex:
    return _I_POW[l % 4]


def minus_i_pow(l: int) -> complex:
    return _MINUS_I_POW[l % 4]


def i_pow_array(l_max: int) -> np.ndarray:
    return np.array([_I_POW[l % 4] for l in range(l_max + 1)])


def minus_i_pow_array(l_max: int) -> np.ndarray:
    return np.array([_MINUS_I_POW[l % 4] for l in range(l_max + 1)])
