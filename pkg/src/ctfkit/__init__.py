"""Conduction transfer functions and response factors for multilayer walls.

The package turns a layered wall description into the discrete-time
coefficients used by building thermal simulation: transmission-matrix
series in the Laplace domain, rational approximation, pole/residue
inversion and z-domain resampling, with a frequency-domain validation
harness and a finite-difference oracle for independent cross-checks.
"""

from .catalog import CatalogEntry, ExpectedResults, catalog_ids, get_construction, get_entry
from .errors import (
    ApproximationError,
    AssemblyError,
    CtfkitError,
    InstabilityError,
    InvalidConstructionError,
    NumericalError,
    OracleError,
    RepeatedPoleError,
    RootFindingError,
    WallFormatError,
)
from .fdoracle import FdConfig, OracleComparison, WallSimulator, compare_pulse_response, simulate_pulse_response
from .pipeline import (
    DEFAULT_DT,
    DEFAULT_ORDER,
    DEFAULT_SERIES_ORDER,
    compute_ctf,
    compute_response_factors,
    transfer_functions,
)
from .realization import CtfSet, PoleResidueForm, PoleSet, ResponseFactorSeq, response_factors
from .stf import RationalSTF
from .validation import (
    BodeSamples,
    FrequencyGrid,
    ValidationReport,
    exact_characteristics,
    l2_error,
    quality_control,
    rf_characteristics,
    ztf_characteristics,
)
from .wall import (
    Construction,
    MassiveLayer,
    ResistanceLayer,
    load_construction,
    parse_construction,
    serialize_construction,
    u_value,
)

__version__ = "0.1.0"

__all__ = [
    "ApproximationError",
    "AssemblyError",
    "BodeSamples",
    "CatalogEntry",
    "Construction",
    "CtfSet",
    "CtfkitError",
    "DEFAULT_DT",
    "DEFAULT_ORDER",
    "DEFAULT_SERIES_ORDER",
    "ExpectedResults",
    "FdConfig",
    "FrequencyGrid",
    "InstabilityError",
    "InvalidConstructionError",
    "MassiveLayer",
    "NumericalError",
    "OracleComparison",
    "OracleError",
    "PoleResidueForm",
    "PoleSet",
    "RationalSTF",
    "RepeatedPoleError",
    "ResistanceLayer",
    "ResponseFactorSeq",
    "RootFindingError",
    "ValidationReport",
    "WallFormatError",
    "WallSimulator",
    "catalog_ids",
    "compare_pulse_response",
    "compute_ctf",
    "compute_response_factors",
    "exact_characteristics",
    "get_construction",
    "get_entry",
    "l2_error",
    "load_construction",
    "parse_construction",
    "quality_control",
    "response_factors",
    "rf_characteristics",
    "serialize_construction",
    "simulate_pulse_response",
    "transfer_functions",
    "u_value",
    "ztf_characteristics",
]
