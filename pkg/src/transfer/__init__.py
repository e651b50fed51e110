from src.transfer.evaluation import (
    classical_transfer,
    conjugate_transfer_check,
    maclaurin_coeff,
    maclaurin_polynomial,
    state_transfer_eval,
    transfer_eval,
    transfer_eval_series,
)
from src.transfer.polynomial import CommutingTuple, MatrixPolynomial
from src.transfer.schur import schur_agler_sample_test, schwarz_split
