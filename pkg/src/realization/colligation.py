# colligation.py
"""
Second half of the realization pipeline: extending the Gram-matched isometry
to a unitary colligation and reading off the conservative system

    G_k = U~ P_k E,    E = [Q_X, F(0)],

where P_k projects M = M_1 + ... + M_N onto M_k and Q_X is an orthonormal
basis of X = M minus ran F(0). The result is checked on points that were
not used to build it.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Union

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.analysis.conservativity import conservativity_check
from src.config import DEFAULTS
from src.errors import PreconditionError, RealizationError
from src.pencil_core.matrices import adjoint, kernel_basis, range_basis, spectral_norm
from src.realization.agler import (
    AglerData, AglerKernel, GramMatchedIsometry, build_stacks, gram_matched_isometry,
    random_polydisc_points, sample_grid)
from src.system_core.system import MultiLSDS
from src.transfer.evaluation import state_transfer_eval, transfer_eval

logger = logging.getLogger(__name__)

TRANSFER_TOL = 1e-7
VERIFICATION_POINTS = 100
MAX_GRID_ROUNDS = 4


class RealizationDiagnostics(BaseModel):
    residuals: Dict[str, float]
    padding: int
    span_dim: int
    grid_points: int
    dims_history: List[int]


@dataclass(frozen=True, eq=False)
class RealizationResult:
    system: MultiLSDS
    diagnostics: RealizationDiagnostics

    @property
    def state_dim(self) -> int:
        return self.system.dim_x


def _as_kernel(data: Union[AglerData, AglerKernel]) -> AglerKernel:
    return data.kernel() if isinstance(data, AglerData) else data


def _block_projectors(m_dims) -> List[np.ndarray]:
    total = sum(m_dims)
    projectors, start = [], 0
    for size in m_dims:
        P = np.zeros((total, total))
        P[start:start + size, start:start + size] = np.eye(size)
        projectors.append(P)
        start += size
    return projectors


def verify_realization(system: MultiLSDS, kernel: AglerKernel, state_basis: np.ndarray,
                       points: np.ndarray) -> Dict[str, float]:
    """
    Residuals of the assembled system against its data:
    conservativity, theta = theta_alpha and Q_X*(F(lam) - F(0)) = (I - lam A)^{-1} lam B.
    """
    f0 = kernel.stacked_f(np.zeros(kernel.n))
    transfer, state = 0.0, 0.0
    for z in points:
        transfer = max(transfer, spectral_norm(transfer_eval(system, z) - kernel.theta(z)))
        expected = adjoint(state_basis) @ (kernel.stacked_f(z) - f0)
        state = max(state, spectral_norm(state_transfer_eval(system, z) - expected))
    return {
        "conservativity": conservativity_check(system).max_residual,
        "transfer": transfer,
        "state": state,
    }


def assemble_colligation(data: Union[AglerData, AglerKernel], isometry: GramMatchedIsometry,
                         rank_tol: float = None) -> MultiLSDS:
    """
    Extends L to a unitary U~: M -> X + N+ and forms G_k = U~ P_k E.

    Args:
        data: Agler data or kernel; theta must be square.
        isometry (GramMatchedIsometry): L on the sampled span G, whose
            sample grid contained the origin.
        rank_tol (float): Relative rank cut for the splitting of G.
    Returns:
        MultiLSDS: System with state space X of dimension m - q.
    """
    rank_tol = DEFAULTS.rank_tol if rank_tol is None else rank_tol
    kernel = _as_kernel(data)
    if kernel.p != kernel.q:
        raise RealizationError(
            f"A finite conservative system needs dim N- = dim N+, theta is {kernel.p}x{kernel.q}",
            {"p": kernel.p, "q": kernel.q})
    m, q = kernel.m, kernel.q
    f0 = kernel.stacked_f(np.zeros(kernel.n))
    isometry_defect = spectral_norm(adjoint(f0) @ f0 - np.eye(q))
    if isometry_defect > DEFAULTS.iterative_tol:
        raise PreconditionError(f"F(0) is not an isometry: defect {isometry_defect:.3e}")

    # G = (R1 + 0) + (0 + N-) as long as the origin was sampled
    q1 = range_basis(isometry.basis[:m], rank_tol)
    if q1.shape[1] + q != isometry.rank:
        raise RealizationError(
            f"Sampled span of dimension {isometry.rank} does not split over N- "
            f"(M-part has dimension {q1.shape[1]})", {"span_dim": isometry.rank})
    image = isometry(np.vstack([q1, np.zeros((q, q1.shape[1]))]))
    top, bottom = image[:m], image[m:]
    splitting = spectral_norm(adjoint(f0) @ top)
    if splitting > DEFAULTS.iterative_tol:
        raise RealizationError(f"ran F(0) is not orthogonal to the F(lam) - F(0) span: {splitting:.3e}",
                               {"splitting": splitting})

    state_basis = kernel_basis(adjoint(f0), rank_tol)
    y = np.vstack([adjoint(state_basis) @ top, bottom])
    q1c = kernel_basis(adjoint(q1), rank_tol)
    yc = kernel_basis(adjoint(y), rank_tol)
    if q1c.shape[1] != yc.shape[1]:
        raise RealizationError(
            f"Orthocomplements of dimensions {q1c.shape[1]} and {yc.shape[1]} cannot be matched",
            {"domain_complement": q1c.shape[1], "range_complement": yc.shape[1]})
    extension = y @ adjoint(q1) + yc @ adjoint(q1c)
    embedding = np.hstack([state_basis, f0])
    G_mats = [extension @ P @ embedding for P in _block_projectors(kernel.m_dims)]
    system = MultiLSDS.from_blocks(G_mats, dim_x=m - q)
    logger.debug("assembled colligation: m = %d, span %d, state dimension %d", m, isometry.rank, system.dim_x)
    return system


def realize(data: Union[AglerData, AglerKernel], grid_size: int = None, radius: float = 0.8,
            seed: int = None, extra_dims: int = 0, tol: float = None,
            progress: bool = False) -> RealizationResult:
    """
    Builds a conservative system whose transfer function is theta.

    The sample grid starts at grid_size points and doubles until the
    dimension of the sampled span repeats in two consecutive rounds.

    Args:
        data: Agler data (polynomial) or an Agler kernel.
        grid_size (int): Initial number of sample points.
        radius (float): Polydisc radius of the sample grid.
        seed (int): Seed of the sample and verification points.
        extra_dims (int): Zero rows appended to F_1; the state dimension grows by as much.
        tol (float): Bound on the conservativity residual; the transfer and
            state residuals are held to TRANSFER_TOL.
        progress (bool): Show a progress bar over the grid rounds.
    Returns:
        RealizationResult: The system and its diagnostics.
    """
    grid_size = DEFAULTS.realization_grid if grid_size is None else grid_size
    seed = DEFAULTS.seed if seed is None else seed
    tol = DEFAULTS.iterative_tol if tol is None else tol
    if isinstance(data, AglerData):
        kernel = data.padded(extra_dims).kernel()
    else:
        kernel = data.padded(extra_dims)
    if kernel.p != kernel.q:
        raise RealizationError(f"theta must be square, got {kernel.p}x{kernel.q}", {"p": kernel.p, "q": kernel.q})
    g, f = build_stacks(kernel)

    history: List[int] = []
    count = grid_size
    isometry = None
    for _ in tqdm(range(MAX_GRID_ROUNDS), desc="grid rounds", disable=not progress):
        grid = sample_grid(kernel.n, count, radius, seed)
        isometry = gram_matched_isometry(g, f, grid)
        history.append(isometry.rank)
        logger.debug("grid of %d points: span dimension %d", count, isometry.rank)
        if len(history) >= 2 and history[-1] == history[-2]:
            break
        count *= 2
    else:
        logger.warning("span dimension did not stabilize after %d rounds: %s", MAX_GRID_ROUNDS, history)

    system = assemble_colligation(kernel, isometry)
    state_basis = kernel_basis(adjoint(kernel.stacked_f(np.zeros(kernel.n))), DEFAULTS.rank_tol)
    rng = np.random.default_rng(seed + 1)
    points = random_polydisc_points(rng, kernel.n, VERIFICATION_POINTS, radius)
    residuals = verify_realization(system, kernel, state_basis, points)
    residuals.update(isometry.residuals)

    diagnostics = RealizationDiagnostics(residuals=residuals, padding=extra_dims, span_dim=isometry.rank,
                                         grid_points=len(grid), dims_history=history)
    failed = [name for name, limit in (("conservativity", tol), ("transfer", TRANSFER_TOL), ("state", TRANSFER_TOL))
              if residuals[name] > limit]
    if failed:
        raise RealizationError(f"Realization failed verification: {', '.join(failed)}", residuals)
    logger.info("realized theta with state dimension %d (span %d, %d grid points)",
                system.dim_x, isometry.rank, len(grid))
    return RealizationResult(system, diagnostics)


def agler_data_from_system(sys: MultiLSDS) -> AglerKernel:
    """
    The Agler kernel of a conservative system: theta = theta_alpha and
    F_k(z) = G_k [(I - zA)^{-1} zB; I].
    """
    sys.require_valid()
    G = sys.G

    def stacked_state(z):
        return np.vstack([state_transfer_eval(sys, z), np.eye(sys.dim_nm, dtype=np.complex128)])

    def component(k):
        return lambda z: G[k] @ stacked_state(z)

    fks = tuple(component(k) for k in range(sys.n))
    m_dims = (sys.dim_x + sys.dim_np,) * sys.n
    return AglerKernel(sys.n, lambda z: transfer_eval(sys, z), fks, sys.dim_np, sys.dim_nm, m_dims)
