"""Spontaneous emission and free-carrier absorption by hot electrons in n-Ge-like multivalley semiconductors."""

from .acoustic import (
    AngularDecomposition,
    Emission,
    absorption_coefficient_acoustic,
    decompose_111,
    delta_p_acoustic,
    emission_acoustic,
    emission_symmetric,
    relaxation_times_acoustic,
)
from .core import (
    CGS,
    GE_VALLEYS,
    CarrierState,
    ConfigError,
    MaterialParams,
    RadiationQuery,
    ValleySet,
    load_material,
)
from .coulomb import (
    ScreeningParams,
    absorption_coefficient_coulomb,
    coulomb_p,
    decompose_111_coulomb,
    emission_coulomb,
    emission_coulomb_classical,
    relaxation_times_coulomb,
    screening_for,
)
from .hotfield import MonoValleyModel, emission_distorted, isotropic_substitution_check
from .sweepio import run_sweep

__version__ = "0.1.0"
