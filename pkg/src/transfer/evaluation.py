# evaluation.py
"""
theta(z) = zD + zC (I - zA)^{-1} zB, its Neumann series and Maclaurin
coefficients, and a few relatives (state transfer map, conjugate identity,
classical one-parameter transfer function).
"""
import logging
from typing import Iterable, Sequence

import numpy as np
from scipy.linalg import solve, svdvals

from src.config import DEFAULTS
from src.errors import DivergenceError, DomainError, SingularityError
from src.pencil_core.matrices import eval_pencil, indices_of_order, multi_index, order, spectral_norm
from src.pencil_core.multipowers import BOTH, MultipowerTable
from src.system_core.system import MultiLSDS, conjugate
from src.transfer.polynomial import MatrixPolynomial

logger = logging.getLogger(__name__)


def _resolvent_solve(sys: MultiLSDS, z, rhs: np.ndarray, singular_tol: float) -> np.ndarray:
    """(I - zA)^{-1} rhs, refusing numerically singular I - zA."""
    M = np.eye(sys.dim_x) - eval_pencil(z, sys.A)
    smallest = float(svdvals(M)[-1])
    if smallest <= singular_tol:
        raise SingularityError(f"I - zA is singular at z = {np.round(z, 6).tolist()}", smallest)
    return solve(M, rhs)


def state_transfer_eval(sys: MultiLSDS, z: Sequence[complex], singular_tol: float = None) -> np.ndarray:
    """(I - zA)^{-1} zB: the Z-transform map from input to state."""
    singular_tol = DEFAULTS.exact_tol if singular_tol is None else singular_tol
    sys.require_valid()
    zB = eval_pencil(z, sys.B)
    if sys.dim_x == 0:
        return zB
    return _resolvent_solve(sys, z, zB, singular_tol)


def transfer_eval(sys: MultiLSDS, z: Sequence[complex], singular_tol: float = None) -> np.ndarray:
    """
    Evaluates the transfer function by a direct linear solve.

    Args:
        sys (MultiLSDS): The system.
        z: A point of C^N where I - zA is invertible.
        singular_tol (float): Smallest admissible singular value of I - zA.
    Returns:
        np.ndarray: theta(z), of shape dim N+ x dim N-.
    """
    zD = eval_pencil(z, sys.D)
    if sys.dim_x == 0:
        return zD
    return zD + eval_pencil(z, sys.C) @ state_transfer_eval(sys, z, singular_tol)


def transfer_eval_series(sys: MultiLSDS, z: Sequence[complex], terms: int) -> np.ndarray:
    """
    Partial sum zD + sum_{n=0}^{terms} zC (zA)^n zB; requires ||zA|| < 1.
    """
    sys.require_valid()
    zA, zB, zC, zD = (eval_pencil(z, T) for T in (sys.A, sys.B, sys.C, sys.D))
    norm = spectral_norm(zA)
    if norm >= 1:
        raise DivergenceError("The Neumann series of (I - zA)^{-1} diverges", norm)
    value = zD.copy()
    carry = zB
    for _ in range(terms + 1):
        value += zC @ carry
        carry = zA @ carry
    return value


def series_error_bound(sys: MultiLSDS, z: Sequence[complex], terms: int) -> float:
    """||zC|| ||zB|| ||zA||^(terms + 1) / (1 - ||zA||)."""
    zA, zB, zC = (eval_pencil(z, T) for T in (sys.A, sys.B, sys.C))
    norm = spectral_norm(zA)
    return spectral_norm(zC) * spectral_norm(zB) * norm ** (terms + 1) / (1 - norm)


def maclaurin_coeff(sys: MultiLSDS, t: Sequence[int], table: MultipowerTable = None) -> np.ndarray:
    """
    Coefficient of z^t in theta: D_k for t = e_k, c_t (C♭A#B)^t for |t| >= 2.
    t = 0 is rejected since theta(0) = 0 by construction.
    """
    t = multi_index(t, sys.n)
    if order(t) == 0:
        raise DomainError("theta vanishes at 0; the constant coefficient is not a meaningful request")
    if order(t) == 1:
        return sys.d[t.index(1)]
    table = table or MultipowerTable(sys.A, B=sys.B, C=sys.C)
    return table.bordered_scaled(BOTH, t)


def multi_indices_up_to(n: int, degree: int) -> Iterable[tuple]:
    """All t in Z_+^n with 1 <= |t| <= degree, ordered by |t| then lexicographically."""
    for total in range(1, degree + 1):
        yield from indices_of_order(n, total)


def maclaurin_polynomial(sys: MultiLSDS, degree: int, prune_tol: float = 0.0) -> MatrixPolynomial:
    """Every Maclaurin coefficient of total degree <= degree, as one polynomial."""
    sys.require_valid()
    if degree < 1:
        raise DomainError(f"degree must be at least 1, got {degree}")
    table = MultipowerTable(sys.A, B=sys.B, C=sys.C)
    coeffs = {t: maclaurin_coeff(sys, t, table) for t in multi_indices_up_to(sys.n, degree)}
    return MatrixPolynomial(sys.n, (sys.dim_np, sys.dim_nm), coeffs).pruned(prune_tol)


def conjugate_transfer_check(sys: MultiLSDS, points: Iterable[Sequence[complex]],
                             singular_tol: float = None) -> float:
    """max over the points of ||theta_{alpha*}(z) - theta_alpha(conj z)*||."""
    star = conjugate(sys)
    worst = 0.0
    for z in points:
        z = np.asarray(z, dtype=np.complex128)
        left = transfer_eval(star, z, singular_tol)
        right = transfer_eval(sys, z.conj(), singular_tol).conj().T
        worst = max(worst, spectral_norm(left - right))
    return worst


def classical_transfer(sys: MultiLSDS, z: complex, singular_tol: float = None) -> np.ndarray:
    """
    D + zC (I - zA)^{-1} B for a one-parameter system, the transfer function
    in the form without the leading factor z.
    """
    if sys.n != 1:
        raise DomainError(f"classical_transfer needs N = 1, got N = {sys.n}")
    singular_tol = DEFAULTS.exact_tol if singular_tol is None else singular_tol
    B, C, D = sys.b[0], sys.c[0], sys.d[0]
    if sys.dim_x == 0:
        return np.array(D)
    return D + z * C @ _resolvent_solve(sys, [z], B, singular_tol)
