"""Finite-distance partial-wave scattering for scalar waves on spherical potentials."""

__version__ = "0.1.0"

from .errors import (
    CapacityError,
    DomainError,
    InputError,
    NearfieldError,
    NumericalError,
    TruncationWarning,
    UnitarityError,
)
from .observables import (
    ConvergenceProfile,
    CrossSectionSample,
    angular_integral,
    convergence_profile,
    diff_cross_section,
    total_cross_section,
    total_cross_section_asymptotic,
    total_cross_section_hankel,
)
from .radial import (
    GridControls,
    PhaseShiftSet,
    Potential,
    PotentialKind,
    RadialSolution,
    phase_shift_hard_sphere,
    phase_shift_square_well,
    phase_shifts,
    solve_radial_numeric,
)
from .scattering import (
    FieldPoint,
    PartialAmplitudeSet,
    WaveSample,
    amplitude_far,
    amplitude_near,
    incident_field,
    partial_amplitudes,
    radial_modarg,
    scattered_field,
    total_field,
)
from .specfun import (
    bessel_poly,
    legendre_p,
    spherical_bessel,
    spherical_bessel_j_at_origin,
)
