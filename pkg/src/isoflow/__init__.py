"""Structure-preserving implicit Runge-Kutta methods for matrix flows
dW/dt = [B(W), W]: the discrete flow conserves the spectrum of W (all trace
powers, hence all eigenvalues) and, for Hamiltonian B, the underlying
Poisson structure, giving bounded long-time energy errors.
"""

__version__ = "0.1.0"

from .diagnostics import (
    ConvergenceReport,
    casimir_drift,
    convergence_study,
    hamiltonian_drift,
    momentum_component_drift,
    momentum_drift,
    reference_solution,
)
from .errors import (
    ConfigurationError,
    ConvergenceError,
    DegenerateStudyError,
    DimensionError,
    IsoflowError,
    SingularityError,
)
from .flows import (
    FlowDefinition,
    ProductFlowDefinition,
    bloch_iserles_flow,
    brockett_flow,
    chu_flow,
    heisenberg_chain_flow,
    list_presets,
    point_vortex_flow,
    preset,
    project_subspace,
    rigid_body_flow,
    su2_to_vector,
    toda_flow,
    vector_to_su2,
)
from .integrators import (
    SchemeVariant,
    SolverConfig,
    StageSet,
    complement,
    general,
    integrate,
    j_quadratic,
    prk_step,
    product_step,
    rk_step,
    solve_stages,
)
from .linalg import (
    commutator,
    conj_transpose,
    eigenvalues,
    frobenius_inner,
    frobenius_norm,
    matrix_from_json,
    matrix_to_json,
    trace_powers,
)
from .tableaux import (
    ButcherTableau,
    PartitionedTableau,
    check_partitioned_symplectic,
    check_symplectic,
    gauss_legendre,
    lobatto_iiia_iiib,
    load_tableau_file,
)
from .trajectory import TrajectoryRecord
