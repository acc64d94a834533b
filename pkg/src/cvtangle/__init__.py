"""Entanglement measures and monogamy checks for Gaussian states of
continuous-variable systems."""

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    GaussianStateError,
    IndexOutOfRange,
    NonPositiveDeterminant,
    NoSolution,
    NotPure,
    NotSymmetricState,
    NumericalFailure,
    OptimizerFailure,
    RegionViolation,
    TriangleViolation,
    UnsupportedCut,
)
from .symplectic import (
    Bipartition,
    CovarianceMatrix,
    SymplecticSpectrum,
    ValidationReport,
    load_cm,
    partial_transpose,
    purity,
    reduce,
    save_cm,
    symplectic_form,
    symplectic_spectrum,
    validate,
)
from .states import (
    FullySymmetricSpec,
    SamplerConfig,
    ThreeModePureSpec,
    fully_symmetric_pure,
    random_pure,
    random_symplectic,
    three_mode_pure,
    triangle_defect,
    two_mode_squeezed,
    vacuum,
)
from .entanglement import (
    EntanglementValue,
    GlemsParams,
    contangle_pure,
    contangle_symmetric_two_mode,
    gaussian_contangle_two_mode,
    glems_contangle,
    glems_m,
    glems_pair_contangle,
    log_negativity,
    ppt_separable,
)
from .monogamy import (
    MonogamyRecord,
    MonteCarloResult,
    ResidualResult,
    ScanPoint,
    glocc_monotonicity_probe,
    logneg_violation_scan,
    monogamy_record,
    monte_carlo,
    residual_contangle,
    symmetric_global_contangle,
    symmetric_monogamy_residual,
    symmetric_total_pairwise,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
