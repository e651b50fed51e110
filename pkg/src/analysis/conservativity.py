# conservativity.py
"""
Algebraic test of unitarity of zeta G on the whole torus:

    sum_k G_k* G_k = I,   G_k* G_j = 0,   sum_k G_k G_k* = I,   G_k G_j* = 0   (k != j)

and the orthogonal block structure that follows from it.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Tuple

import numpy as np
from pydantic import BaseModel

from src.config import DEFAULTS
from src.errors import PreconditionError
from src.pencil_core.matrices import adjoint, range_basis, spectral_norm
from src.system_core.system import MultiLSDS

logger = logging.getLogger(__name__)


class ConservativityCertificate(BaseModel):
    residuals: Dict[str, float]
    tol: float
    passed: bool

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values())


def conservativity_check(sys: MultiLSDS, tol: float = None) -> ConservativityCertificate:
    """
    Spectral-norm residuals of the four condition families.

    Args:
        sys (MultiLSDS): The system.
        tol (float): Pass threshold on every residual.
    Returns:
        ConservativityCertificate: Residuals and verdict.
    """
    tol = DEFAULTS.verdict_tol if tol is None else tol
    G = sys.require_valid().G
    rows, cols = G.shape
    gram_in = sum(adjoint(g) @ g for g in G)
    gram_out = sum(g @ adjoint(g) for g in G)
    cross_in, cross_out = 0.0, 0.0
    for k in range(G.n):
        for j in range(G.n):
            if k != j:
                cross_in = max(cross_in, spectral_norm(adjoint(G[k]) @ G[j]))
                cross_out = max(cross_out, spectral_norm(G[k] @ adjoint(G[j])))
    residuals = {
        "input_gram": spectral_norm(gram_in - np.eye(cols)),
        "input_cross": cross_in,
        "output_gram": spectral_norm(gram_out - np.eye(rows)),
        "output_cross": cross_out,
    }
    passed = all(value <= tol for value in residuals.values())
    logger.debug("conservativity residuals %s", residuals)
    return ConservativityCertificate(residuals=residuals, tol=tol, passed=passed)


@dataclass(frozen=True, eq=False)
class BlockStructure:
    """
    Orthonormal bases of H_k- = ran G_k* (in X + N-) and H_k+ = ran G_k
    (in X + N+), with the blocks G_k^0 = (H_k+ basis)* G_k (H_k- basis).
    """
    minus_bases: Tuple[np.ndarray, ...]
    plus_bases: Tuple[np.ndarray, ...]
    blocks: Tuple[np.ndarray, ...]
    residuals: Dict[str, float]
    tol: float = 0.0

    @property
    def passed(self) -> bool:
        return max(self.residuals.values(), default=0.0) <= self.tol

    @property
    def dims_minus(self) -> List[int]:
        return [basis.shape[1] for basis in self.minus_bases]

    @property
    def dims_plus(self) -> List[int]:
        return [basis.shape[1] for basis in self.plus_bases]

    def block_diagonal(self) -> np.ndarray:
        """G^0 = sum_k G_k written in the adapted bases."""
        rows, cols = sum(self.dims_plus), sum(self.dims_minus)
        matrix = np.zeros((rows, cols), dtype=np.complex128)
        r = c = 0
        for block in self.blocks:
            matrix[r:r + block.shape[0], c:c + block.shape[1]] = block
            r, c = r + block.shape[0], c + block.shape[1]
        return matrix


def _mutual_overlap(bases) -> float:
    worst = 0.0
    for k, left in enumerate(bases):
        for j, right in enumerate(bases):
            if k < j and left.shape[1] and right.shape[1]:
                worst = max(worst, spectral_norm(adjoint(left) @ right))
    return worst


def block_structure(sys: MultiLSDS, tol: float = None, rank_tol: float = None) -> BlockStructure:
    """
    Splits X + N- and X + N+ into the mutually orthogonal ranges of G_k* and
    G_k, and checks that sum_k G_k is block diagonal and unitary there.
    The verdict is BlockStructure.passed (every residual within tol).

    Raises PreconditionError when the system is not conservative.
    """
    tol = DEFAULTS.verdict_tol if tol is None else tol
    rank_tol = DEFAULTS.rank_tol if rank_tol is None else rank_tol
    certificate = conservativity_check(sys, tol)
    if not certificate.passed:
        raise PreconditionError(
            f"Block structure needs a conservative system; largest residual {certificate.max_residual:.3e}")

    G = sys.G
    minus = tuple(range_basis(adjoint(g), rank_tol) for g in G)
    plus = tuple(range_basis(g, rank_tol) for g in G)
    blocks = tuple(adjoint(q_plus) @ g @ q_minus for g, q_plus, q_minus in zip(G, plus, minus))

    Q_minus, Q_plus = np.hstack(minus), np.hstack(plus)
    total = sum(G.mats)
    adapted = adjoint(Q_plus) @ total @ Q_minus
    structure = BlockStructure(minus, plus, blocks, {})
    diagonal = structure.block_diagonal()
    unitary = adapted.shape[0] == adapted.shape[1]
    residuals = {
        "minus_overlap": _mutual_overlap(minus),
        "plus_overlap": _mutual_overlap(plus),
        "minus_completeness": float(abs(Q_minus.shape[1] - G.shape[1])),
        "plus_completeness": float(abs(Q_plus.shape[1] - G.shape[0])),
        "off_diagonal": spectral_norm(adapted - diagonal) if adapted.shape == diagonal.shape else float("inf"),
        "unitarity": spectral_norm(adjoint(diagonal) @ diagonal - np.eye(diagonal.shape[1])) if unitary else float("inf"),
    }
    logger.debug("block dims minus %s plus %s", structure.dims_minus, structure.dims_plus)
    structure = BlockStructure(minus, plus, blocks, residuals, tol)
    if not structure.passed:
        logger.info("block structure failed: %s", residuals)
    return structure
