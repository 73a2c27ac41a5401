"""Pseudo-spectral simulator and decay-rate measurement harness for a
simplified nematic liquid crystal system (incompressible velocity coupled
to a director field with a Ginzburg-Landau penalty) on a periodic box.

The package measures algebraic decay of L2, higher-derivative and L-infinity
norms of the solution and compares fitted exponents against the predicted
rates of the matching heat semigroup.
"""

from .dynamics import (
    PhysicsParams,
    State,
    Tendency,
    compute_tendency,
    director_rhs,
    ericksen_stress_divergence,
    momentum_rhs,
    penalty_energy,
    penalty_force,
    rest_state,
)
from .errors import (
    AmplitudeError,
    BlowUpError,
    CheckpointError,
    ConfigError,
    DataError,
    DegenerateInputError,
    FitError,
    LcdSpectraError,
    MappingError,
    ParameterError,
    StructuralError,
    SymmetryError,
)
from .spectral import (
    Grid,
    RealField,
    SpectralField,
    forward_transform,
    inverse_transform,
    l2_norm_spectral,
    leray_project,
    lp_norm,
    spectral_derivative,
)
from .stepping import Hook, StepperConfig, adaptive_dt, integrate, step

__version__ = "0.1.0"
