"""Box theta-norms, k-support and cluster norms, their proximity operators,
FISTA solvers, and experiment harnesses."""

from .core import (
    BoxParams,
    KSupportParams,
    SortedAbs,
    ThetaAssignment,
    ksupport_norm,
    s_alpha,
    solve_alpha,
    sort_abs,
    theta_dual_norm,
    theta_norm,
)
from .errors import (
    DataError,
    DivergenceError,
    DuplicateEntryError,
    InfeasibleBudgetError,
    InvalidInputError,
    InvalidParamsError,
    NumericalError,
    ParseError,
    TestScaleExceededError,
    ThetaNormsError,
    UndefinedMetricError,
)
from .observations import TEST, TRAIN, VAL, ObservationSet
from .oracles import dual_norm_oracle, infconv_oracle
from .prox import ProxRequest, prox_sq_ksupport, prox_sq_ksupport_baseline, prox_sq_theta
from .solver import (
    REGULARIZERS,
    CompletionProblem,
    MultitaskProblem,
    SolverConfig,
    SolverState,
    fista,
    loss_masked_sq,
    prox_gradient_residual,
    solve,
    solve_centered,
)
from .spectral import (
    ClusterParams,
    SpectralOperand,
    centered_cluster_norm,
    centering,
    cluster_norm,
    numerical_rank,
    prox_spectral_elastic_net,
    prox_trace,
    spectral_ksupport_norm,
    spectral_prox,
    spectral_theta_norm,
)

__version__ = "0.1.0"
