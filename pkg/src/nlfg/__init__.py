"""Nonlinear feedforward generators over GF(q) and word-based sigma-LFSRs."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    BoundExceededError,
    CertificationError,
    ConsistencyError,
    NlfgError,
    NotPrimitiveError,
    SpecificationError,
)
from .gf import (  # noqa: E402
    FieldElement,
    FieldSpec,
    Poly,
    QMatrix,
    WordVector,
    build_q_matrix,
    default_primitive,
    fe_add,
    fe_mul,
    is_primitive,
    map_M,
    map_M_inv,
    word_mul,
    word_mul_elementwise,
)
from .registers import (  # noqa: E402
    LfsrConfig,
    SigmaLfsrConfig,
    TransitionMatrix,
    char_poly,
    construct_sigma,
    full_period_states,
    lfsr_step,
    sigma_step,
    transition_matrix,
)
from .generator import (  # noqa: E402
    NlfgGenerator,
    TapAssembly,
    assembly_output,
    full_period_output,
    generate,
    nlfg_step,
)
from .oracle import (  # noqa: E402
    CountParams,
    balance_deviation,
    brute_assembly_census,
    n_elementwise,
    n_proposed,
    n_scalar,
    partition_count,
    psi_elementwise,
    psi_m,
)
from .analysis import (  # noqa: E402
    DistributionTable,
    LcReport,
    berlekamp_massey,
    compare_schemes,
    measure_distribution,
    reconcile,
)
