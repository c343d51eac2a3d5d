"""
Partial-wave amplitudes and wave fields at finite distance.

The scattered wave is expanded on outgoing spherical Hankel functions,

    psi_sc(r, theta) = sum_l a_l(theta) h_l^(1)(kr),
    a_l(theta) = (2l+1) i^l (exp(2 i delta_l) - 1) / 2 * P_l(cos theta),

so ``a_l`` carries no ``r`` dependence.  From it follow the conventional
far amplitude ``f(theta)`` and the distance-dependent ``f(r, theta)``.
:class:`PartialAmplitudeSet` stores the theta-free coefficients
``c_l = a_l(theta) / P_l(cos theta)``.

All partial-wave sums run in ascending ``l`` with compensated summation of
real and imaginary parts.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import DomainError, InputError, TruncationWarning
from .radial import PhaseShiftSet
from .specfun import (
    bessel_poly,
    bessel_poly_values,
    i_pow_array,
    legendre_values,
    minus_i_pow_array,
    sph_jn_yn,
)


def csum(terms) -> complex:
    """Compensated sum of complex terms."""
    terms = np.asarray(terms, dtype=complex)
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def field_l_max(kr: float) -> int:
    """Truncation order for field sums at ``kr``."""
    return int(math.ceil(kr + 10.0 * kr ** (1.0 / 3.0) + 20.0))


@dataclass(frozen=True, eq=False)
class PartialAmplitudeSet:
    """Coefficients ``c_l = (2l+1) i^l (exp(2 i delta_l) - 1) / 2``."""

    k: float
    deltas: np.ndarray
    coefficients: np.ndarray

    @property
    def l_max(self) -> int:
        return self.coefficients.size - 1

    def a_l(self, theta: float) -> np.ndarray:
        """``a_l(theta) = c_l P_l(cos theta)`` for ``l = 0..l_max``."""
        return self.coefficients * legendre_at(self.l_max, theta)


def partial_amplitudes(phase_shifts: PhaseShiftSet) -> PartialAmplitudeSet:
    """
    Distance-independent partial amplitudes from a phase-shift set.

    ``exp(2 i delta) - 1`` is evaluated as ``2 i exp(i delta) sin(delta)`` so
    small phase shifts keep full relative accuracy.
    """
    deltas = np.array(phase_shifts.deltas, dtype=float)
    ls = np.arange(deltas.size)
    coeff = (2 * ls + 1) * i_pow_array(deltas.size - 1) * 1j * np.exp(1j * deltas) * np.sin(deltas)
    coeff.setflags(write=False)
    deltas.setflags(write=False)
    return PartialAmplitudeSet(phase_shifts.k, deltas, coeff)


@dataclass(frozen=True)
class FieldPoint:
    r: float
    theta: float

    def __post_init__(self):
        if not (math.isfinite(self.r) and self.r >= 0):
            raise DomainError(f"r must be finite and >= 0, got {self.r!r}")
        if not (0.0 <= self.theta <= math.pi):
            raise DomainError(f"theta must lie in [0, pi], got {self.theta!r}")


@dataclass(frozen=True)
class WaveSample:
    """Fields at one point.

    ``psi_total`` is ``psi_in + psi_sc``; ``psi_total_hankel`` is the same
    field summed independently in incoming/outgoing Hankel form, and
    ``discrepancy`` is their difference in modulus.
    """

    point: FieldPoint
    psi_in: complex
    psi_sc: complex
    psi_total: complex
    psi_total_hankel: complex
    discrepancy: float
    l_max_used: int
    truncated: bool = False


def legendre_at(l_max: int, theta: float) -> np.ndarray:
    if theta == 0.0:
        x = 1.0
    elif theta == math.pi:
        x = -1.0
    else:
        x = min(1.0, max(-1.0, math.cos(theta)))
    return legendre_values(l_max, x)


def _check_r(r: float) -> None:
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"r must be positive and finite, got {r!r}")


def _hankel1(l_max: int, z: float) -> np.ndarray:
    j, n = sph_jn_yn(l_max, z)
    return j + 1j * n


def _nonzero_terms(coeff: np.ndarray, radial: np.ndarray) -> np.ndarray:
    # c_l = 0 exactly must not meet an overflowed radial factor
    out = np.zeros(coeff.size, dtype=complex)
    mask = coeff != 0
    out[mask] = coeff[mask] * radial[mask]
    return out


# ---------------------------------------------------------------------------
# amplitudes
# ---------------------------------------------------------------------------


def amplitude_far(amps: PartialAmplitudeSet, theta: float) -> complex:
    """Conventional amplitude ``f(theta) = (1/k) sum_l a_l(theta) / i^(l+1)``."""
    FieldPoint(1.0, theta)
    L = amps.l_max
    terms = amps.a_l(theta) * minus_i_pow_array(L + 1)[1:]
    return csum(terms) / amps.k


def amplitude_near(amps: PartialAmplitudeSet, r: float, theta: float, form: str = "bessel_poly") -> complex:
    """
    Distance-dependent amplitude ``f(r, theta)``.

    Parameters
    ----------
    form : {"bessel_poly", "hankel", "closed"}
        ``"bessel_poly"``: ``(1/k) sum a_l (-i)^(l+1) y_l(-1/(ikr))``.
        ``"hankel"``: ``exp(-ikr) r sum a_l h_l^(1)(kr)``.
        ``"closed"``: ``(1/2ik) sum (2l+1)(exp(2i delta_l)-1) P_l y_l(-1/(ikr))``.
        The three are algebraically identical.
    """
    _check_r(r)
    FieldPoint(r, theta)
    k, L = amps.k, amps.l_max
    kr = k * r
    a = amps.a_l(theta)
    if form == "bessel_poly":
        ys = bessel_poly_values(L, -1.0 / (1j * kr))
        return csum(a * minus_i_pow_array(L + 1)[1:] * ys) / k
    if form == "hankel":
        return cmath.exp(-1j * kr) * r * csum(_nonzero_terms(a, _hankel1(L, kr)))
    if form == "closed":
        ys = bessel_poly_values(L, -1.0 / (1j * kr))
        ls = np.arange(L + 1)
        p = legendre_at(L, theta)
        terms = (2 * ls + 1) * (np.exp(2j * amps.deltas) - 1.0) * p * ys
        return csum(terms) / (2j * k)
    raise InputError(f"unknown amplitude form {form!r}")


# ---------------------------------------------------------------------------
# fields
# ---------------------------------------------------------------------------


def incident_field(k: float, point: FieldPoint, l_max: Optional[int] = None) -> complex:
    """
    Plane wave ``exp(ikr cos theta)`` by its partial-wave expansion.

    ``l_max`` defaults to :func:`field_l_max`; a smaller value raises a
    :class:`TruncationWarning`.
    """
    value, _ = _incident(k, point, l_max)
    return value


def _incident(k: float, point: FieldPoint, l_max: Optional[int]):
    kr = k * point.r
    needed = field_l_max(kr)
    if l_max is None:
        l_max = needed
    truncated = l_max < needed
    if truncated:
        warnings.warn(
            f"incident field cut at l_max={l_max}, below the admissible {needed} for kr={kr:g}",
            TruncationWarning,
            stacklevel=3,
        )
    if point.r == 0:
        return 1.0 + 0j, truncated
    j, _ = sph_jn_yn(l_max, kr)
    ls = np.arange(l_max + 1)
    terms = (2 * ls + 1) * i_pow_array(l_max) * j * legendre_at(l_max, point.theta)
    return csum(terms), truncated


def scattered_field(amps: PartialAmplitudeSet, point: FieldPoint) -> complex:
    """``psi_sc = sum_l a_l(theta) h_l^(1)(kr)``; singular at the origin."""
    _check_r(point.r)
    a = amps.a_l(point.theta)
    return csum(_nonzero_terms(a, _hankel1(amps.l_max, amps.k * point.r)))


def total_field(phase_shifts: PhaseShiftSet, point: FieldPoint, l_max: Optional[int] = None) -> WaveSample:
    """
    Total field by two independent routes.

    (i) ``psi_in + psi_sc``; (ii) ``sum (2l+1) i^l [h2 + exp(2 i delta_l) h1] P_l / 2``
    with ``delta_l = 0`` beyond the phase-shift set.
    """
    _check_r(point.r)
    k = phase_shifts.k
    kr = k * point.r
    if l_max is None:
        l_max = max(field_l_max(kr), phase_shifts.l_max)
    amps = partial_amplitudes(phase_shifts)
    psi_in, truncated = _incident(k, point, l_max)
    psi_sc = scattered_field(amps, point)

    j, n = sph_jn_yn(l_max, kr)
    h1, h2 = j + 1j * n, j - 1j * n
    incoming, outgoing = half_hankel_coefficients(phase_shifts, l_max)
    p = legendre_at(l_max, point.theta)
    terms = (incoming * h2 + outgoing * h1) * p
    psi_hankel = csum(terms)
    total = psi_in + psi_sc
    return WaveSample(point, psi_in, psi_sc, total, psi_hankel, abs(total - psi_hankel), l_max, truncated)


def field_map(phase_shifts: PhaseShiftSet, radii: Sequence[float], thetas: Sequence[float]) -> list[WaveSample]:
    """:func:`total_field` over a grid, ordered radius-major."""
    return [total_field(phase_shifts, FieldPoint(float(r), float(t))) for r in radii for t in thetas]


def incident_half_hankel_coefficients(l_max: int):
    """Incoming and outgoing coefficients of the plane wave: both ``(2l+1) i^l / 2``."""
    ls = np.arange(l_max + 1)
    c = 0.5 * (2 * ls + 1) * i_pow_array(l_max)
    return c.copy(), c.copy()


def half_hankel_coefficients(phase_shifts: PhaseShiftSet, l_max: Optional[int] = None):
    """
    Coefficients of ``h_l^(2)`` and ``h_l^(1)`` in the scattered-state field.

    The incoming coefficients are those of the plane wave; the outgoing ones
    carry the extra factor ``exp(2 i delta_l)``.
    """
    if l_max is None:
        l_max = phase_shifts.l_max
    incoming, outgoing = incident_half_hankel_coefficients(l_max)
    return incoming, outgoing * np.exp(2j * phase_shifts.padded(l_max))


@dataclass(frozen=True)
class HankelExtraction:
    incoming: np.ndarray
    outgoing: np.ndarray
    condition: np.ndarray


def extract_hankel_coefficients(
    field: Callable[[float, float], complex],
    k: float,
    radii: tuple[float, float],
    l_max: int,
    n_nodes: Optional[int] = None,
) -> HankelExtraction:
    """
    Recover incoming/outgoing Hankel coefficients from field samples.

    The field is projected on ``P_l`` by Gauss-Legendre quadrature in
    ``cos theta`` at two radii, then the 2x2 system
    ``R_l(r_i) = A_l h_l^(2)(k r_i) + B_l h_l^(1)(k r_i)`` is solved per ``l``.
    ``condition`` holds the 2x2 condition numbers; rows with large values
    are not trustworthy.
    """
    r1, r2 = radii
    _check_r(r1)
    _check_r(r2)
    if n_nodes is None:
        # the samples carry orders up to the field truncation at the outer radius
        n_nodes = max(l_max, field_l_max(k * max(r1, r2))) + l_max // 2 + 16
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    thetas = np.arccos(x)
    p = np.array([legendre_values(l_max, xi) for xi in x])  # (nodes, l)
    ls = np.arange(l_max + 1)
    proj = []
    for r in (r1, r2):
        samples = np.array([field(r, t) for t in thetas])
        proj.append(0.5 * (2 * ls + 1) * ((w * samples) @ p))
    j1, n1 = sph_jn_yn(l_max, k * r1)
    j2, n2 = sph_jn_yn(l_max, k * r2)
    incoming = np.empty(l_max + 1, dtype=complex)
    outgoing = np.empty(l_max + 1, dtype=complex)
    cond = np.empty(l_max + 1)
    for l in ls:
        m = np.array([[j1[l] - 1j * n1[l], j1[l] + 1j * n1[l]], [j2[l] - 1j * n2[l], j2[l] + 1j * n2[l]]])
        cond[l] = np.linalg.cond(m)
        incoming[l], outgoing[l] = np.linalg.solve(m, [proj[0][l], proj[1][l]])
    return HankelExtraction(incoming, outgoing, cond)


# ---------------------------------------------------------------------------
# modulus/argument radial form
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RadialModArg:
    """
    ``R_l(r) = modulus * amplitude / (kr) * sin(phase)``.

    ``modulus`` and ``phase`` use the Bessel polynomial at ``-1/(ikr)``;
    ``amplitude`` is the overall constant ``2 C exp(i delta)`` that makes the
    form equal ``C [h2 + exp(2 i delta) h1]``.
    """

    modulus: float
    phase: float
    amplitude: complex
    kr: float

    def radial_value(self) -> complex:
        return self.modulus * self.amplitude / self.kr * math.sin(self.phase)


def radial_modarg(C: complex, delta: float, l: int, k: float, r: float) -> RadialModArg:
    _check_r(r)
    kr = k * r
    bp = bessel_poly(l, -1.0 / (1j * kr))
    phase = kr - 0.5 * l * math.pi + delta + bp.argument_phase
    return RadialModArg(bp.modulus, phase, 2.0 * complex(C) * cmath.exp(1j * delta), kr)
