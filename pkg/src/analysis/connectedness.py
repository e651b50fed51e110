# connectedness.py
"""
The smallest subspace X_1 of X that contains every ran B_k and ran C_j* and
is invariant under all A_k and A_k*, found by Krylov saturation, and the
compression of a system to it.
"""
import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.analysis.conservativity import conservativity_check
from src.config import DEFAULTS
from src.errors import PreconditionError
from src.pencil_core.matrices import adjoint, range_basis, spectral_norm
from src.system_core.system import MultiLSDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class ClosedSubspace:
    basis: np.ndarray

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    @property
    def ambient_dim(self) -> int:
        return self.basis.shape[0]

    def projector(self) -> np.ndarray:
        return self.basis @ adjoint(self.basis)

    def invariance_residual(self, operator: np.ndarray) -> float:
        """||(I - P) T P|| for the orthogonal projector P onto the subspace."""
        P = self.projector()
        return spectral_norm((np.eye(self.ambient_dim) - P) @ operator @ P)

    def containment_residual(self, matrix: np.ndarray) -> float:
        """||(I - P) M||, zero when ran M lies in the subspace."""
        return spectral_norm((np.eye(self.ambient_dim) - self.projector()) @ matrix)


def closely_connected_subspace(sys: MultiLSDS, rank_tol: float = None) -> ClosedSubspace:
    """
    Seeds with the columns of every B_k and C_j*, then sweeps A_1..A_N,
    A_1*..A_N* in that order, orthonormalizing after each product, until a
    full sweep leaves the dimension unchanged.
    """
    rank_tol = DEFAULTS.rank_tol if rank_tol is None else rank_tol
    sys.require_valid()
    seeds = [np.asarray(b) for b in sys.b] + [adjoint(c) for c in sys.c]
    basis = range_basis(np.hstack(seeds), rank_tol)
    operators = list(sys.a) + [adjoint(a) for a in sys.a]
    sweeps = 0
    while basis.shape[1] < sys.dim_x:
        before = basis.shape[1]
        for op in operators:
            basis = range_basis(np.hstack([basis, op @ basis]), rank_tol)
        sweeps += 1
        if basis.shape[1] == before:
            break
    logger.debug("closely connected subspace: dim %d of %d after %d sweeps", basis.shape[1], sys.dim_x, sweeps)
    return ClosedSubspace(basis)


def reduce_closely_connected(sys: MultiLSDS, rank_tol: float = None) -> Tuple[MultiLSDS, np.ndarray]:
    """
    Compresses the system to X_1: A_k -> V* A_k V, B_k -> V* B_k, C_k -> C_k V,
    with D unchanged. The transfer function is preserved.

    Returns:
        tuple: The reduced system and the embedding V (dim_x x dim X_1).
    """
    V = closely_connected_subspace(sys, rank_tol).basis
    Vh = adjoint(V)
    reduced = MultiLSDS.from_matrices(
        [Vh @ a @ V for a in sys.a],
        [Vh @ b for b in sys.b],
        [c @ V for c in sys.c],
        list(sys.d),
        dim_x=V.shape[1], dim_nm=sys.dim_nm, dim_np=sys.dim_np,
    )
    return reduced, V


def completely_nonunitary_check(sys: MultiLSDS, tol: float = None, rank_tol: float = None) -> bool:
    """
    For a conservative system the pencil zeta A is completely non-unitary
    exactly when the system is closely connected.

    Raises PreconditionError for systems that fail the conservativity check.
    """
    certificate = conservativity_check(sys, tol)
    if not certificate.passed:
        raise PreconditionError(
            f"Complete non-unitarity is decided only for conservative systems; "
            f"largest residual {certificate.max_residual:.3e}")
    return closely_connected_subspace(sys, rank_tol).dim == sys.dim_x
