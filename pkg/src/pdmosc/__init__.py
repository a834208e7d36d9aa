"""Closed-form solutions of the Mathews-Lakshmanan oscillator under a general
position-dependent-mass kinetic ordering, with numerical oracles to check them."""
from .errors import (
    ConstraintViolation,
    ImaginaryMu,
    MuOutOfRange,
    NoBoundStates,
    PDMError,
    SingularOrdering,
    SingularPoint,
    TailWarning,
    UnknownScheme,
    WrongRegime,
)
from .ordering import (
    Hermiticity,
    Ordering,
    OrderingMeans,
    OrderingTerm,
    classify_hermiticity,
    derived_means,
    load_ordering,
    make_ordering,
    named_scheme,
)
from .oscillator import (
    OscillatorParams,
    Regime,
    Regularity,
    classify_regularity,
    reduced_coefficients,
    spectral_params,
)
from .spectra import (
    BoundSpectrum,
    EnergyLevel,
    bound_spectrum,
    continuum_energy,
    eigenstate,
    eigenstate_continuum,
    eigenstate_negative,
    eigenstate_positive,
    lambda_hermite_form,
    weight_function,
)

__version__ = "0.1.0"
