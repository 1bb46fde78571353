"""Solver suite for the semiclassical nonlinear Schrodinger equation.

The equation is recast as an amplitude-velocity system with an
asymptotically vanishing viscosity, marched by a second-order splitting
scheme whose accuracy is uniform in the scaled Planck constant before the
limiting Euler dynamics form shocks.  A classical Strang splitting solver
for the raw equation provides reference solutions, and an experiment
harness reproduces the epsilon-uniform error studies.
"""

from .config import ConfigError, ExperimentConfig, load_config
from .convergence import loglog_slope, measured_order
from .eikonal import (
    EikonalResult,
    cole_hopf_oracle,
    eikonal_run,
    linear_amplitude_run,
    verify_against_oracle,
)
from .grid import ComplexField, PeriodicGrid, RealVectorField, make_grid
from .harness import (
    ErrorRecord,
    auto_reference_points,
    build_reference,
    emit_plotdata,
    run_sweep,
)
from .hydro import (
    BlowUpError,
    HydroState,
    RunResult,
    assemble_matrix,
    cfl_dt,
    lax_wendroff_sweep,
    run,
    strang_step,
    transport_step,
)
from .initial_data import build_initial, initial_fields
from .nonlinearity import (
    Nonlinearity,
    PotentialSpec,
    cubic,
    cubic_quintic,
    linear_potential,
    saturated,
)
from .observables import (
    ObservableSet,
    accumulate_phase,
    l1_norm,
    l2_norm,
    observables,
    phase_integrand,
    reconstruct,
    rel_l1_error,
    subsample,
    wave_observables,
)
from .reference import (
    WaveState,
    discrete_energy,
    kinetic_substep,
    mass,
    nonlinear_substep,
    strang_solve,
)
from .snapshots import load_snapshot, save_snapshot
from .spectral import (
    curl_2d,
    divergence,
    gradient_array,
    heat_propagate,
    scalar_gradient,
    schrodinger_propagate,
    spectral_gradient,
)

__version__ = "0.1.0"
