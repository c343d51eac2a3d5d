"""
Cross sections at finite observer distance and their r -> infinity limits.

    dsigma/dOmega (r, theta) = r^2 |sum_l a_l(theta) h_l^(1)(kr)|^2
    sigma(r) = (4 pi / k^2) sum_l (2l+1) sin^2(delta_l) |y_l(-1/(ikr))|^2

Both keep only the leading flux contribution.  ``sigma(r)`` tends to the
conventional ``(4 pi / k^2) sum (2l+1) sin^2 delta_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, InputError
from .radial import PhaseShiftSet
from .scattering import (
    FieldPoint,
    PartialAmplitudeSet,
    amplitude_far,
    amplitude_near,
    partial_amplitudes,
    scattered_field,
)
from .specfun import bessel_poly_values, legendre_values, sph_jn_yn


@dataclass(frozen=True)
class CrossSectionSample:
    r: float
    l_max_used: int
    theta: Optional[float] = None
    dsigma_domega: Optional[float] = None
    sigma_total: Optional[float] = None


@dataclass(frozen=True)
class ConvergenceProfile:
    """
    A quantity sampled on increasing radii together with its r -> inf value.

    ``fitted_rate`` is the log-log slope of ``|value - asymptote|`` over the
    largest decade of radii, or ``None`` when every residual vanishes.
    """

    radii: np.ndarray
    values: np.ndarray
    asymptote: float
    residuals: np.ndarray
    fitted_rate: Optional[float]


def _check_r(r):
    if not (math.isfinite(r) and r > 0):
        raise DomainError(f"r must be positive and finite, got {r!r}")


def diff_cross_section(amps: PartialAmplitudeSet, r: float, theta: float) -> CrossSectionSample:
    _check_r(r)
    psi_sc = scattered_field(amps, FieldPoint(r, theta))
    value = r * r * (psi_sc.real**2 + psi_sc.imag**2)
    return CrossSectionSample(r=r, theta=theta, dsigma_domega=value, l_max_used=amps.l_max)


def _sin2_weights(phase_shifts: PhaseShiftSet) -> np.ndarray:
    d = phase_shifts.deltas
    ls = np.arange(d.size)
    return (2 * ls + 1) * np.sin(d) ** 2


def total_cross_section(phase_shifts: PhaseShiftSet, r: float) -> CrossSectionSample:
    """``sigma(r)`` in Bessel-polynomial form."""
    _check_r(r)
    k = phase_shifts.k
    ys = bessel_poly_values(phase_shifts.l_max, -1.0 / (1j * k * r))
    terms = _sin2_weights(phase_shifts) * (ys.real**2 + ys.imag**2)
    value = 4.0 * math.pi / k**2 * math.fsum(terms)
    return CrossSectionSample(r=r, sigma_total=value, l_max_used=phase_shifts.l_max)


def total_cross_section_hankel(phase_shifts: PhaseShiftSet, r: float) -> float:
    """``sigma(r) = 4 pi r^2 sum (2l+1) sin^2 delta_l |h_l^(1)(kr)|^2``."""
    _check_r(r)
    k = phase_shifts.k
    j, n = sph_jn_yn(phase_shifts.l_max, k * r)
    w = _sin2_weights(phase_shifts)
    mask = w != 0
    terms = w[mask] * (j[mask] ** 2 + n[mask] ** 2)
    return 4.0 * math.pi * r * r * math.fsum(terms)


def total_cross_section_asymptotic(phase_shifts: PhaseShiftSet) -> float:
    return 4.0 * math.pi / phase_shifts.k**2 * math.fsum(_sin2_weights(phase_shifts))


def optical_theorem_cross_section(phase_shifts: PhaseShiftSet) -> float:
    """``(4 pi / k) Im f(0)``; equals the asymptotic total cross section."""
    f0 = amplitude_far(partial_amplitudes(phase_shifts), 0.0)
    return 4.0 * math.pi / phase_shifts.k * f0.imag


@dataclass(frozen=True)
class AngularIntegral:
    quadrature: float
    diagonal: float

    @property
    def difference(self) -> float:
        return self.quadrature - self.diagonal


def angular_integral(phase_shifts: PhaseShiftSet, r: float, n_nodes: Optional[int] = None) -> AngularIntegral:
    """
    Integrate ``dsigma/dOmega`` over the sphere and compare with ``sigma(r)``.

    Gauss-Legendre in ``cos theta`` with ``2 l_max + 16`` nodes by default,
    exact for the polynomial degree of ``|sum_{l<=l_max} ...|^2``.  The
    difference is reported as a diagnostic.
    """
    _check_r(r)
    amps = partial_amplitudes(phase_shifts)
    L = amps.l_max
    if n_nodes is None:
        n_nodes = 2 * L + 16
    x, w = np.polynomial.legendre.leggauss(n_nodes)
    j, n = sph_jn_yn(L, phase_shifts.k * r)
    radial = amps.coefficients * (j + 1j * n)
    p = np.array([legendre_values(L, xi) for xi in x])
    psi = p @ radial
    dsig = r * r * np.abs(psi) ** 2
    quad = 2.0 * math.pi * math.fsum(w * dsig)
    return AngularIntegral(quad, total_cross_section(phase_shifts, r).sigma_total)


def fit_rate(radii: np.ndarray, residuals: np.ndarray) -> Optional[float]:
    """Log-log slope of ``residuals`` over the largest decade of ``radii``."""
    radii = np.asarray(radii, dtype=float)
    residuals = np.asarray(residuals, dtype=float)
    sel = (radii >= radii[-1] / 10.0) & (residuals > 0)
    if np.count_nonzero(sel) < 2:
        return None
    slope, _ = np.polyfit(np.log(radii[sel]), np.log(residuals[sel]), 1)
    return float(slope)


def convergence_profile(
    phase_shifts: PhaseShiftSet,
    quantity: str,
    radii: Sequence[float],
    theta: Optional[float] = None,
) -> ConvergenceProfile:
    """
    Sample ``sigma(r)`` (``quantity="total"``) or ``|f(r, theta)|``
    (``quantity="near"``) on ``radii`` and fit the rate of approach.

    For ``"near"`` the residual is ``|f(r, theta) - f(theta)|``, the
    distance to the complex far amplitude, not a difference of moduli.
    """
    radii = np.asarray(radii, dtype=float)
    if radii.ndim != 1 or radii.size < 3:
        raise InputError("convergence profile needs at least 3 radii")
    if np.any(radii <= 0) or np.any(np.diff(radii) <= 0):
        raise InputError("radii must be positive and strictly increasing")
    if quantity == "total":
        values = np.array([total_cross_section(phase_shifts, r).sigma_total for r in radii])
        asymptote = total_cross_section_asymptotic(phase_shifts)
        residuals = np.abs(values - asymptote)
    elif quantity == "near":
        if theta is None:
            raise InputError("near-amplitude profile needs theta")
        amps = partial_amplitudes(phase_shifts)
        near = np.array([amplitude_near(amps, r, theta) for r in radii])
        far = amplitude_far(amps, theta)
        values = np.abs(near)
        asymptote = abs(far)
        residuals = np.abs(near - far)
    else:
        raise InputError(f"unknown quantity {quantity!r}; expected 'total' or 'near'")
    return ConvergenceProfile(radii, values, asymptote, residuals, fit_rate(radii, residuals))
