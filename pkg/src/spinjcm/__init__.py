"""Jaynes-Cummings model with the field mode realized as a finite spin-j system.

The field is a spin-j irrep whose excitation number n = S_3 + j is capped at
2j; as 2j grows the model contracts to the ordinary Jaynes-Cummings model.
"""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DomainError,
    IntegratorError,
    InvalidParameterError,
    TruncationError,
    UndefinedObservableError,
    UnsupportedSectorError,
)
from .spin_algebra import (  # noqa: E402
    KerrSpectrum,
    SpinRepresentation,
    commutator_defect,
    kerr_evolve_field,
    kerr_spectrum,
    make_representation,
    number_from_bdag_b,
    raising_coeff,
)
from .coherent_states import (  # noqa: E402
    CoherentStateSpec,
    PhotonDistribution,
    chi_from_mean,
    coherent_amplitudes,
    mean_photon,
    photon_distribution,
    poisson_reference,
)
from .dynamics import (  # noqa: E402
    FieldMoments,
    JointState,
    ModelParams,
    Superposition,
    detuning,
    evolve_closed_form,
    evolve_ode_oracle,
    field_moments,
    initial_state,
    rabi_frequency,
    reduced_density_atom,
    to_schrodinger_picture,
)
from .observables import (  # noqa: E402
    ObservableRecord,
    atomic_inversion,
    inversion_closed_form,
    mandel_q,
    quadrature_variances,
    revival_time_estimate,
    standard_jcm_inversion,
)
from .runner import ObservableSeries, RunConfig, emit, figure_preset, run  # noqa: E402
