from src.lax_phillips.generators import (
    MetricReport, apply_adjoint, apply_generator, commutation_residual, gamma_map, metric_check)
from src.lax_phillips.one_param import OneParamSystemView, associated_one_param, reproduction_residual
from src.lax_phillips.space import TruncatedLPVector, random_interior_vector
