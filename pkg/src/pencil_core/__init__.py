from src.pencil_core.matrices import (
    MultiIndex,
    OperatorTuple,
    as_complex_matrix,
    eval_pencil,
    eval_pencil_batch,
    multi_index,
    order,
    unit,
)
from src.pencil_core.multipowers import (
    MultipowerTable,
    bordered_multipower,
    multinomial,
    sym_multipower,
)
