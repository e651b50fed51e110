from src.realization.agler import (
    AglerData, AglerKernel, build_stacks, gram_matched_isometry, kernel_residual, sample_grid,
    verify_agler_identity)
from src.realization.colligation import (
    RealizationDiagnostics, RealizationResult, agler_data_from_system, assemble_colligation, realize)
from src.realization.examples import builtin_examples
from src.realization.fixtures import (
    canonical_fixture, direct_sum_fixture, monomial_fixture, product_fixture, projector_pencil_fixture,
    random_fixture, times_unitary)
