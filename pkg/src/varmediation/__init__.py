"""Impulse response decomposition and dynamic mediation analysis for VAR models."""

from .dataset import Dataset, load_dataset, parse_roles
from .decomposition import (
    DecompositionTable,
    IrfPath,
    ShockIdentification,
    build_table,
    contribution,
    identify_shock,
    impulse_response,
    represent_at,
    shock_from_vector,
)
from .dmi import DmiSeries, dmi_at, dmi_series
from .exceptions import (
    AdditivityError,
    DataError,
    DegenerateWindowError,
    InsufficientDataError,
    SingularDesignError,
    UnstableModelError,
    VarMediationError,
)
from .gir import GirSet, compute_gir, granger_coefficients, is_noncausal, ma_coefficients
from .mediation import (
    LpRegression,
    MediationEffect,
    NoncausalityReport,
    ame,
    check_zero_mediation,
    lp_mediator_equation,
    lp_outcome_equation,
    lp_total_effect,
)
from .var import VarModel, VarSpec, estimate_var, is_stable, load_model, save_model, simulate_var

__version__ = "0.1.0"
