# dissipativity.py
"""
Sampled search for the largest value of ||zeta G|| over the torus T^N.

A common phase does not change the norm, so the first angle is pinned to 0
and the search runs over the remaining N - 1 angles.
"""
import logging
from typing import List, Optional

import numpy as np
from pydantic import BaseModel
from scipy.optimize import minimize
from scipy.stats import qmc
from tqdm import tqdm

from src.config import DEFAULTS
from src.errors import DomainError
from src.pencil_core.matrices import OperatorTuple, eval_pencil, eval_pencil_batch
from src.system_core.system import MultiLSDS

logger = logging.getLogger(__name__)

BATCH = 4096


class TorusScanReport(BaseModel):
    max_norm: float
    argmax_angles: List[float]
    samples: int
    sampling: str
    refined: bool
    tol: float
    dissipative: bool

    @property
    def argmax(self) -> np.ndarray:
        """The maximizing torus point; every entry has modulus one."""
        return np.exp(1j * np.asarray(self.argmax_angles))


def torus_angles(n: int, samples: int, max_points: int, seed: int = 0) -> tuple:
    """
    Angles of the scan points, shape (P, n) with first column zero.

    Returns the array and the name of the sampling scheme.
    """
    free = n - 1
    if free == 0:
        return np.zeros((1, 1)), "grid"
    if samples ** free <= max_points:
        axis = 2 * np.pi * np.arange(samples) / samples
        mesh = np.meshgrid(*([axis] * free), indexing="ij")
        angles = np.stack([m.ravel() for m in mesh], axis=1)
        scheme = "grid"
    else:
        sampler = qmc.Halton(d=free, scramble=True, seed=seed)
        angles = 2 * np.pi * sampler.random(max_points)
        scheme = "halton"
    return np.hstack([np.zeros((angles.shape[0], 1)), angles]), scheme


def pencil_norms(G: OperatorTuple, angles: np.ndarray, progress: bool = False) -> np.ndarray:
    """Largest singular value of zeta G at every row of angles."""
    norms = np.empty(angles.shape[0])
    starts = range(0, angles.shape[0], BATCH)
    for start in tqdm(starts, desc="torus", disable=not progress):
        stop = start + BATCH
        values = eval_pencil_batch(np.exp(1j * angles[start:stop]), G)
        norms[start:stop] = np.linalg.norm(values, ord=2, axis=(1, 2))
    return norms


def _refine(G: OperatorTuple, start: np.ndarray, steps: int) -> tuple:
    """Local ascent of sigma_max^2 over the free angles from a grid point."""

    def objective(free_angles):
        theta = np.concatenate([[0.0], free_angles])
        zeta = np.exp(1j * theta)
        u, s, vh = np.linalg.svd(eval_pencil(zeta, G))
        sigma = s[0]
        left, right = u[:, 0].conj(), vh[0].conj()
        # d sigma / d theta_k = -Im(zeta_k u* G_k v)
        grad = np.array([-np.imag(zeta[k] * (left @ G[k] @ right)) for k in range(1, G.n)])
        return -sigma ** 2, -2 * sigma * grad

    result = minimize(objective, start[1:], jac=True, method="BFGS", options={"maxiter": steps})
    theta = np.concatenate([[0.0], np.mod(result.x, 2 * np.pi)])
    return theta, float(np.sqrt(max(-result.fun, 0.0)))


def dissipativity_scan(sys: MultiLSDS, samples: int = None, refine: bool = True,
                       tol: float = None, max_points: int = None, refine_steps: int = None,
                       seed: Optional[int] = None, progress: bool = False) -> TorusScanReport:
    """
    Evaluates ||zeta G|| on a torus grid (or a scrambled Halton set once the
    grid exceeds max_points) and optionally polishes the best point.

    The verdict certifies a violation exactly but dissipativity only up to
    sampling density.

    Args:
        sys (MultiLSDS): The system.
        samples (int): Grid points per free angle.
        refine (bool): Run the local ascent from the best sample.
        tol (float): Slack in the verdict max_norm <= 1 + tol.
    Returns:
        TorusScanReport: Largest norm found and where.
    """
    samples = DEFAULTS.torus_samples if samples is None else samples
    if samples < 1:
        raise DomainError(f"samples must be at least 1, got {samples}")
    tol = DEFAULTS.verdict_tol if tol is None else tol
    max_points = max_points or DEFAULTS.torus_max_points
    refine_steps = DEFAULTS.refine_steps if refine_steps is None else refine_steps
    seed = DEFAULTS.seed if seed is None else seed

    G = sys.require_valid().G
    angles, scheme = torus_angles(sys.n, samples, max_points, seed)
    norms = pencil_norms(G, angles, progress=progress)
    best = int(np.argmax(norms))
    theta, max_norm = angles[best], float(norms[best])
    logger.info("torus scan over %d %s points: best norm %.12f", len(norms), scheme, max_norm)

    refined = False
    if refine and sys.n > 1 and refine_steps > 0:
        candidate, value = _refine(G, theta, refine_steps)
        if value > max_norm:
            theta, max_norm = candidate, value
            refined = True
            logger.debug("refinement raised the norm to %.12f", value)

    return TorusScanReport(
        max_norm=max_norm,
        argmax_angles=[float(a) for a in theta],
        samples=int(len(norms)),
        sampling=scheme,
        refined=refined,
        tol=tol,
        dissipative=max_norm <= 1 + tol,
    )
