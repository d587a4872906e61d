"""Lissajous coherent states of the commensurate 2D harmonic oscillator."""

__version__ = "0.1.0"

from .specfun import CapacityError, OscillatorScale, hermite_fn, hermite_fn_deriv, hermite_table
from .states import (
    ComplexAmplitude,
    ConsistencyError,
    DegenerateAmplitudeError,
    DegenerateSubspace,
    GlauberProduct,
    LcsState,
    StateClass,
    StateTag,
    ZeroProjectionError,
    annihilation_residual,
    apply_weighted_number,
    build_by_projection,
    build_by_recurrence,
    classify,
    evolve_glauber,
    glauber_for_zeta,
)
from .fields import (
    Grid2D,
    MassDeficitError,
    NodalCrossingError,
    UndersamplingError,
    current_density,
    divergence,
    eval_wavefunction,
    phase_field,
    probability_density,
    winding_number,
)
from .classical import ClassicalTrajectory, ehrenfest_centroid, lissajous, matched_trajectory
from .verify import QuadratureSpec, VerificationReport, completeness_general, completeness_su2, run_suite
