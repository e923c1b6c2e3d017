"""Decide and construct probabilistic coherence distillation under incoherent operations."""

__version__ = "0.1.0"

from .linalg_core import (  # noqa: E402
    DEFAULT_TOL,
    TolerancePolicy,
    hermitian_eig,
    kernel_basis,
    numerical_rank,
    operator_norm,
    tensor_power,
    tensor_product,
)
from .states import (  # noqa: E402
    CoherenceSupport,
    DensityMatrix,
    PureState,
    coherence_support,
    dephase,
    distillable_coherence_asymptotic,
    is_incoherent_state,
    maximally_coherent,
    random_block_state,
    random_density,
    validate_density,
    validate_pure,
)
from .channels import (  # noqa: E402
    Outcome,
    StochasticChannel,
    apply_single,
    apply_stochastic,
    is_incoherent_kraus,
    is_pure_coherent_output,
    is_strictly_incoherent_kraus,
    validate_channel,
)
from .blocks import (  # noqa: E402
    BlockDecomposition,
    CoherenceGraph,
    coherence_graph,
    irreducible_blocks,
    is_irreducible,
)
from .distill import (  # noqa: E402
    DistillabilityReport,
    DistillationWitness,
    construct_witness,
    falsification_search,
    is_distillable_sio,
    is_distillable_smio,
    is_distillable_ssio,
    is_n_distillable,
)
from .distinguish import (  # noqa: E402
    DiscriminationProtocol,
    can_distinguish_sio,
    io_discrimination_protocol,
    validate_orthogonal_set,
    verify_discrimination,
)
