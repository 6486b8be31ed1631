"""State-vector simulation of small quantum algorithms, instrumented to find
and follow non-interfering computational worlds."""

from .algorithms import (
    DeutschResult,
    StepTrace,
    classical_single_query,
    classical_trace,
    deutsch_run,
    pipeline_run,
)
from .decoherence import (
    BranchReport,
    CoherenceSeries,
    EnvironmentModel,
    branch_stability,
    cat_state,
    coherence_series,
    dephase,
    entangle_environment,
)
from .errors import (
    DimensionError,
    NotUnitaryError,
    PromiseViolation,
    QWorldsError,
    ResourceCapError,
    TruthTableError,
)
from .infometrics import (
    Ensemble,
    EntropyReport,
    measurement_entropy,
    preparation_entropy,
    shannon_entropy,
    storage_retrieval_bound,
    von_neumann_entropy,
)
from .oracle import (
    BooleanFunction,
    FunctionClass,
    OracleGate,
    apply_uf,
    brute_force_uf,
    classify,
    parse_truth_table,
)
from .statecore import (
    ControlledGate,
    DensityMatrix,
    FullMatrixGate,
    HadamardLayer,
    RegisterLayout,
    SingleQubitGate,
    StateVector,
    apply_gate,
    basis_state,
    density_from_state,
    inner_product,
    measure_qubit,
    outcome_distribution,
    partial_trace,
    zero_state,
)
from .worlds import (
    WorldDecomposition,
    WorldTrace,
    audit_information,
    decompose,
    interference_matrix,
    track,
    world_count_after_hadamard1,
)

__version__ = "0.1.0"
