"""
Radial wave equation and phase-shift extraction.

Units follow the convention hbar^2/2m = 1, so ``V(r)`` carries the
dimensions of ``k^2`` and the reduced radial function ``u = r R_l`` obeys

    u'' + [k^2 - l(l+1)/r^2 - V(r)] u = 0.

Outside ``support_radius`` the solution is written as
``R_l = C h_l^(2)(kr) + D h_l^(1)(kr)`` and ``exp(2 i delta_l) = D / C``.
C is normalised to the plane-wave value ``(2l+1) i^l / 2`` in every
returned :class:`RadialSolution`.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, InputError, NumericalError, UnitarityError
from .specfun import i_pow, sph_jn_yn_deriv

SMALL_DELTA = 1e-12
UNITARITY_GATE = 1e-6


class PotentialKind(Enum):
    ZERO = "zero"
    HARD_SPHERE = "hard-sphere"
    SQUARE_WELL = "square-well"
    TABULATED = "table"
    CALLABLE = "callable"


@dataclass(frozen=True, eq=False)
class Potential:
    """
    Spherically symmetric potential with finite support.

    Use the classmethod constructors rather than building this directly.
    ``V(r) = 0`` for ``r > support_radius``; a square well of depth ``V0`` is
    ``V = -V0`` for ``r <= a``.  A hard sphere is a boundary condition
    ``R_l(a) = 0`` rather than a finite ``V``.
    """

    kind: PotentialKind
    support_radius: float
    radius: Optional[float] = None
    depth: Optional[float] = None
    r_samples: Optional[np.ndarray] = field(default=None, repr=False)
    v_samples: Optional[np.ndarray] = field(default=None, repr=False)
    profile: Optional[Callable] = field(default=None, repr=False)

    @classmethod
    def zero(cls, support_radius: float = 1.0) -> "Potential":
        _check_positive("support_radius", support_radius)
        return cls(PotentialKind.ZERO, float(support_radius))

    @classmethod
    def hard_sphere(cls, a: float) -> "Potential":
        _check_positive("a", a)
        return cls(PotentialKind.HARD_SPHERE, float(a), radius=float(a))

    @classmethod
    def square_well(cls, a: float, V0: float) -> "Potential":
        _check_positive("a", a)
        if not math.isfinite(V0) or V0 < 0:
            raise DomainError(f"V0 must be finite and >= 0, got {V0!r}")
        return cls(PotentialKind.SQUARE_WELL, float(a), radius=float(a), depth=float(V0))

    @classmethod
    def tabulated(cls, r, V, support_radius: Optional[float] = None) -> "Potential":
        r = np.asarray(r, dtype=float)
        V = np.asarray(V)
        if np.iscomplexobj(V):
            raise InputError("complex (absorptive) potentials are not supported")
        V = V.astype(float)
        if r.ndim != 1 or r.shape != V.shape or r.size < 2:
            raise InputError("tabulated potential needs two equal-length 1-D arrays with >= 2 samples")
        if not (np.all(np.isfinite(r)) and np.all(np.isfinite(V))):
            raise InputError("tabulated potential contains non-finite samples")
        if r[0] <= 0 or np.any(np.diff(r) <= 0):
            raise InputError("tabulated radii must be positive and strictly increasing")
        if support_radius is None:
            support_radius = float(r[-1])
        _check_positive("support_radius", support_radius)
        if r[-1] < support_radius:
            raise InputError(
                f"tabulated samples end at r={r[-1]!r} but support_radius is {support_radius!r}"
            )
        r.setflags(write=False)
        V.setflags(write=False)
        return cls(PotentialKind.TABULATED, float(support_radius), r_samples=r, v_samples=V)

    @classmethod
    def from_callable(cls, profile: Callable, support_radius: float) -> "Potential":
        _check_positive("support_radius", support_radius)
        return cls(PotentialKind.CALLABLE, float(support_radius), profile=profile)

    def __call__(self, r) -> np.ndarray:
        """Evaluate ``V(r)``; the interior is closed at ``support_radius``."""
        r = np.asarray(r, dtype=float)
        inside = r <= self.support_radius
        kind = self.kind
        if kind is PotentialKind.ZERO:
            out = np.zeros_like(r)
        elif kind is PotentialKind.HARD_SPHERE:
            out = np.where(inside, np.inf, 0.0)
        elif kind is PotentialKind.SQUARE_WELL:
            out = np.where(inside, -self.depth, 0.0)
        elif kind is PotentialKind.TABULATED:
            out = np.where(inside, np.interp(r, self.r_samples, self.v_samples), 0.0)
        else:
            vals = np.asarray(self.profile(r))
            if np.iscomplexobj(vals):
                raise InputError("complex (absorptive) potentials are not supported")
            vals = np.broadcast_to(vals.astype(float), r.shape)
            if not np.all(np.isfinite(vals[inside])):
                raise InputError("potential profile returned non-finite values")
            out = np.where(inside, vals, 0.0)
        return out

    def describe(self) -> dict:
        d = {"kind": self.kind.value, "support_radius": self.support_radius}
        if self.radius is not None:
            d["a"] = self.radius
        if self.depth is not None:
            d["V0"] = self.depth
        if self.r_samples is not None:
            d["samples"] = int(self.r_samples.size)
        return d


def _check_positive(name: str, value) -> None:
    if not (isinstance(value, (int, float, np.floating, np.integer)) and math.isfinite(value) and value > 0):
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")


@dataclass(frozen=True)
class RadialSolution:
    """Exterior coefficients of one partial wave.

    ``C`` is normalised to ``(2l+1) i^l / 2`` so ``D = C exp(2 i delta)``.
    """

    l: int
    k: float
    C: complex
    D: complex
    delta: float
    match_radius: float

    @property
    def unitarity_defect(self) -> float:
        return abs(abs(self.D / self.C) - 1.0)


@dataclass(frozen=True, eq=False)
class PhaseShiftSet:
    """Phase shifts ``delta_0 .. delta_{l_max}`` at one wavenumber."""

    k: float
    deltas: np.ndarray
    truncation_estimate: float = 0.0

    def __post_init__(self):
        deltas = np.array(self.deltas, dtype=float)
        if deltas.ndim != 1 or deltas.size == 0:
            raise InputError("need at least one phase shift")
        if not np.all(np.isfinite(deltas)):
            raise InputError("phase shifts must be finite")
        _check_positive("k", self.k)
        deltas.setflags(write=False)
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "k", float(self.k))
        est = max(float(self.truncation_estimate), abs(float(deltas[-1])))
        object.__setattr__(self, "truncation_estimate", est)

    @property
    def l_max(self) -> int:
        return self.deltas.size - 1

    def padded(self, l_max: int) -> np.ndarray:
        """Phase shifts extended with zeros (or cut) to ``l_max``."""
        out = np.zeros(l_max + 1)
        m = min(l_max, self.l_max) + 1
        out[:m] = self.deltas[:m]
        return out


@dataclass(frozen=True)
class GridControls:
    """
    Integration controls for :func:`solve_radial_numeric`.

    Attributes
    ----------
    step : float or None
        Upper bound on the RK4 step; defaults to ``support_radius / 2000``.
    max_phase_step : float
        Upper bound on ``h * sqrt(max|k^2 - V|)``; the step is refined to
        honour it, which keeps stiff barriers resolved.
    tolerance : float
        Target phase-shift error; the step is refined so the estimated
        accumulated RK4 phase error in oscillatory regions stays below it.
    """

    step: Optional[float] = None
    max_phase_step: float = 0.05
    tolerance: float = 1e-10


def _reduce_delta(ratio: complex) -> float:
    """``delta = arg(D/C) / 2`` in ``(-pi/2, pi/2]``."""
    phase = math.atan2(ratio.imag, ratio.real)
    if phase == -math.pi:
        phase = math.pi
    return 0.5 * phase


def _solution_from_ratio(l: int, k: float, ratio: complex, match_radius: float) -> RadialSolution:
    C = 0.5 * (2 * l + 1) * i_pow(l)
    return RadialSolution(l, k, C, C * ratio, _reduce_delta(ratio), match_radius)


def _check_lk(l, k) -> None:
    if int(l) != l or l < 0:
        raise DomainError(f"l must be a non-negative integer, got {l!r}")
    _check_positive("k", k)


# ---------------------------------------------------------------------------
# analytic families
# ---------------------------------------------------------------------------


def _hankel_and_derivs(l: int, x: float):
    j, n, dj, dn = sph_jn_yn_deriv(l, x)
    h1 = complex(j[l], n[l])
    h2 = complex(j[l], -n[l])
    dh1 = complex(dj[l], dn[l])
    dh2 = complex(dj[l], -dn[l])
    return h1, h2, dh1, dh2


def hard_sphere_solution(l: int, k: float, a: float) -> RadialSolution:
    """Exterior solution vanishing at ``r = a``: ``D/C = -h2(ka)/h1(ka)``."""
    _check_lk(l, k)
    _check_positive("a", a)
    h1, h2, _, _ = _hankel_and_derivs(int(l), k * a)
    return _solution_from_ratio(int(l), float(k), -h2 / h1, float(a))


def phase_shift_hard_sphere(l: int, k: float, a: float) -> float:
    """
    Hard-sphere phase shift, ``tan delta_l = j_l(ka) / n_l(ka)``.

    Examples
    --------
    >>> round(phase_shift_hard_sphere(0, 1.0, 0.5), 12)
    -0.5
    """
    return hard_sphere_solution(l, k, a).delta


def square_well_solution(l: int, k: float, a: float, V0: float) -> RadialSolution:
    _check_lk(l, k)
    _check_positive("a", a)
    if not math.isfinite(V0) or V0 < 0:
        raise DomainError(f"V0 must be finite and >= 0, got {V0!r}")
    l = int(l)
    kappa = math.sqrt(k * k + V0)
    ji, _, dji, _ = sph_jn_yn_deriv(l, kappa * a)
    jin, djin = float(ji[l]), float(dji[l])
    h1, h2, dh1, dh2 = _hankel_and_derivs(l, k * a)
    # continuity of R'/R at r = a, cross-multiplied so j_l(kappa a) = 0 is harmless
    num = jin * k * dh2 - kappa * djin * h2
    den = jin * k * dh1 - kappa * djin * h1
    return _solution_from_ratio(l, float(k), -num / den, float(a))


def phase_shift_square_well(l: int, k: float, a: float, V0: float) -> float:
    """Phase shift of the attractive well ``V = -V0`` for ``r <= a``."""
    return square_well_solution(l, k, a, V0).delta


# ---------------------------------------------------------------------------
# numeric solver
# ---------------------------------------------------------------------------


def _match(l: int, k: float, R: float, u: float, du: float) -> RadialSolution:
    # u/r = A j_l(kr) + B n_l(kr); the j, n Wronskian is exactly 1/x^2 and
    # avoids the cancellation of h1, h2 when n_l dominates
    x = k * R
    j, n, dj, dn = sph_jn_yn_deriv(l, x)
    j, n, dj, dn = float(j[l]), float(n[l]), float(dj[l]), float(dn[l])
    if not all(math.isfinite(v) for v in (j, n, dj, dn)):
        raise NumericalError(f"matching system singular at l={l}, kR={x!r}: Bessel functions overflow")
    val = u / R
    der = (du - u / R) / (R * k)
    A = (val * dn - der * n) * x * x
    B = (der * j - val * dj) * x * x
    den = A + 1j * B
    if den == 0 or not (cmath.isfinite(A) and cmath.isfinite(B)):
        raise NumericalError(f"matching produced A={A!r}, B={B!r} at l={l}")
    # C h2 + D h1 = (C + D) j + i (D - C) n
    ratio = (A - 1j * B) / den
    defect = abs(abs(ratio) - 1.0)
    if defect > UNITARITY_GATE:
        raise UnitarityError(f"|D/C| - 1 = {defect:.3e} at l={l}; integration failed")
    return _solution_from_ratio(l, k, ratio, R)


def _rk4(l: int, q_nodes: np.ndarray, q_mid: np.ndarray, r0: float, h: float, u: float, du: float, start: int):
    """Integrate ``u'' = (l(l+1)/r^2 - q(r)) u`` from node ``start`` to the last node."""
    ll = l * (l + 1)
    n_nodes = q_nodes.size
    for i in range(start, n_nodes - 1):
        r = r0 + i * h
        rm = r + 0.5 * h
        rn = r + h
        fa = ll / (r * r) - q_nodes[i]
        fm = ll / (rm * rm) - q_mid[i]
        fb = ll / (rn * rn) - q_nodes[i + 1]
        k1u, k1v = du, fa * u
        k2u, k2v = du + 0.5 * h * k1v, fm * (u + 0.5 * h * k1u)
        k3u, k3v = du + 0.5 * h * k2v, fm * (u + 0.5 * h * k2u)
        k4u, k4v = du + h * k3v, fb * (u + h * k3u)
        u += h / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
        du += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v)
        big = abs(u) + abs(du) * h
        if big > 1e100:
            u *= 1e-100
            du *= 1e-100
    return u, du


def solve_radial_numeric(l: int, k: float, potential: Potential, grid: Optional[GridControls] = None) -> RadialSolution:
    """
    Integrate the radial equation outward and match to Hankel functions.

    Fixed-step classical RK4 on ``(u, u')`` from a regular series start near
    the origin to ``support_radius``, where ``(u, u')`` is matched to
    ``C h^(2) + D h^(1)`` and their derivatives.

    Raises
    ------
    UnitarityError
        If ``||D/C| - 1|`` exceeds 1e-6.
    NumericalError
        If the 2x2 matching system is numerically singular.
    """
    _check_lk(l, k)
    l, k = int(l), float(k)
    grid = grid or GridControls()
    R = potential.support_radius

    if potential.kind is PotentialKind.HARD_SPHERE:
        # exterior only: u(a) = 0, u'(a) = 1
        return _match(l, k, R, 0.0, 1.0)

    h = grid.step if grid.step is not None else R / 2000.0
    _check_positive("grid.step", h)
    probe = np.linspace(0.0, R, 4001)[1:]
    q_probe = k * k - potential(probe)
    vmax = float(np.max(np.abs(q_probe)))
    if vmax > 0:
        h = min(h, grid.max_phase_step / math.sqrt(vmax))
    # RK4 phase error grows like 0.2 (kh)^4 kR in oscillatory regions
    k_osc = math.sqrt(max(float(np.max(q_probe)), k * k))
    h = min(h, (grid.tolerance / (0.2 * k_osc * R)) ** 0.25 / k_osc)
    n_steps = max(int(math.ceil(R / h - 1e-9)), 4)
    h = R / n_steps
    nodes = h * np.arange(n_steps + 1)
    nodes[-1] = R
    # V at the last node is the interior (left) limit
    v_nodes = potential(nodes)
    v_mid = potential(nodes[:-1] + 0.5 * h)
    if not (np.all(np.isfinite(v_nodes[1:])) and np.all(np.isfinite(v_mid))):
        raise InputError("potential has non-finite samples on the integration grid")
    v_nodes[0] = v_nodes[1]
    q_nodes = k * k - v_nodes
    q_mid = k * k - v_mid

    # start far enough out that h*sqrt(l(l+1))/r stays small
    start = max(1, int(math.ceil(2.0 * math.sqrt(l * (l + 1)))))
    start = min(start, n_steps // 2)
    r_start = start * h
    q0 = q_nodes[start]
    c = -q0 / (2.0 * (2 * l + 3))
    # u / r^l, overall scale drops out of D/C
    u = r_start * (1.0 + c * r_start**2)
    du = (l + 1) + (l + 3) * c * r_start**2
    u, du = _rk4(l, q_nodes, q_mid, 0.0, h, u, du, start)
    if not (math.isfinite(u) and math.isfinite(du)):
        raise NumericalError(f"radial integration overflowed at l={l}")
    return _match(l, k, R, u, du)


def analytic_solution(l: int, k: float, potential: Potential) -> Optional[RadialSolution]:
    """Closed-form solution for the analytic families, ``None`` otherwise."""
    kind = potential.kind
    if kind is PotentialKind.ZERO:
        _check_lk(l, k)
        return _solution_from_ratio(int(l), float(k), 1.0 + 0j, potential.support_radius)
    if kind is PotentialKind.HARD_SPHERE:
        return hard_sphere_solution(l, k, potential.radius)
    if kind is PotentialKind.SQUARE_WELL:
        return square_well_solution(l, k, potential.radius, potential.depth)
    return None


def auto_l_cap(k: float, R: float) -> int:
    kr = k * R
    return int(math.ceil(kr + 10.0 * kr ** (1.0 / 3.0) + 10.0))


def _tail_estimate(deltas: list) -> float:
    last = abs(deltas[-1])
    if len(deltas) >= 2 and deltas[-2] != 0:
        q = last / abs(deltas[-2])
        if q < 1:
            return last / (1.0 - q)
    return last


def phase_shifts(
    potential: Potential,
    k: float,
    l_max: Optional[int] = None,
    method: str = "auto",
    grid: Optional[GridControls] = None,
) -> PhaseShiftSet:
    """
    Phase shifts for ``l = 0..l_max``.

    ``method`` is ``"auto"`` (closed forms where available), ``"analytic"`` or
    ``"numeric"``.  Without ``l_max`` the order runs up to
    ``ceil(kR + 10 (kR)^(1/3) + 10)`` and stops at the first ``l`` with
    ``|delta_l| < 1e-12``.
    """
    _check_positive("k", k)
    if method not in ("auto", "analytic", "numeric"):
        raise InputError(f"unknown method {method!r}")
    if l_max is not None and (int(l_max) != l_max or l_max < 0):
        raise DomainError(f"l_max must be a non-negative integer, got {l_max!r}")

    def solve(l):
        if method != "numeric":
            sol = analytic_solution(l, k, potential)
            if sol is not None:
                return sol
            if method == "analytic":
                raise InputError(f"no closed form for potential kind {potential.kind.value!r}")
        return solve_radial_numeric(l, k, potential, grid)

    deltas = []
    if l_max is not None:
        for l in range(int(l_max) + 1):
            deltas.append(solve(l).delta)
    else:
        cap = auto_l_cap(k, potential.support_radius)
        for l in range(cap + 1):
            deltas.append(solve(l).delta)
            if abs(deltas[-1]) < SMALL_DELTA:
                break
    return PhaseShiftSet(float(k), np.array(deltas), _tail_estimate(deltas))
