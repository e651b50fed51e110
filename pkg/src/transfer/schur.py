# schur.py
"""
Sampled necessary condition for membership in the generalized Schur class:
||theta(rT)|| <= 1 at commuting contractive tuples T, and the one-variable
split theta(z) = z * theta_0(z).
"""
import logging
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.config import DEFAULTS
from src.errors import DomainError
from src.pencil_core.matrices import spectral_norm
from src.transfer.polynomial import CommutingTuple, MatrixPolynomial

logger = logging.getLogger(__name__)


class SchurSampleVerdict(BaseModel):
    """passed is evidence for membership; a failure certifies non-membership."""
    max_norm: float
    norms: List[float]
    r: float
    tol: float
    passed: bool


def schur_agler_sample_test(theta: MatrixPolynomial, tuples: Sequence[CommutingTuple], r: float,
                            tol: float = None, progress: bool = False) -> SchurSampleVerdict:
    """
    Evaluates theta(rT) = sum_t theta_t (x) (rT)^t at every tuple.

    Args:
        theta (MatrixPolynomial): The polynomial.
        tuples (list): CommutingTuple values, already validated.
        r (float): Radius in (0, 1).
        tol (float): Slack in the verdict.
    Returns:
        SchurSampleVerdict: Largest norm found and the verdict.
    """
    if not 0 < r < 1:
        raise DomainError(f"r must lie in (0, 1), got {r}")
    tol = DEFAULTS.verdict_tol if tol is None else tol
    norms = []
    for T in tqdm(tuples, desc="tuples", disable=not progress):
        if not isinstance(T, CommutingTuple):
            T = CommutingTuple(tuple(T))
        if T.n != theta.n:
            raise DomainError(f"Tuple has {T.n} members, theta has {theta.n} variables")
        norms.append(spectral_norm(theta.evaluate_tuple(T.scaled(r))))
    max_norm = max(norms, default=0.0)
    logger.info("Schur sample test over %d tuples: max norm %.12f", len(norms), max_norm)
    return SchurSampleVerdict(max_norm=max_norm, norms=norms, r=r, tol=tol, passed=max_norm <= 1 + tol)


def random_commuting_tuple(rng: np.random.Generator, n: int, size: int, degree: int = 3) -> CommutingTuple:
    """
    T_k = p_k(S) for one random contraction S and polynomials p_k whose
    coefficient moduli sum to one, so every T_k is a contraction and the
    members commute exactly.
    """
    S = rng.standard_normal((size, size)) + 1j * rng.standard_normal((size, size))
    S /= spectral_norm(S)
    powers = [np.eye(size, dtype=np.complex128)]
    for _ in range(degree):
        powers.append(powers[-1] @ S)
    mats = []
    for _ in range(n):
        weights = rng.dirichlet(np.ones(degree + 1))
        phases = np.exp(2j * np.pi * rng.uniform(0, 1, degree + 1))
        mats.append(sum(w * p * m for w, p, m in zip(weights, phases, powers)))
    return CommutingTuple(tuple(mats))


def random_commuting_tuples(count: int, n: int, max_size: int, seed: int = None) -> List[CommutingTuple]:
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    return [random_commuting_tuple(rng, n, int(rng.integers(1, max_size + 1))) for _ in range(count)]


def schwarz_split(theta1d: MatrixPolynomial) -> MatrixPolynomial:
    """
    theta(z) = z * theta_0(z) for a one-variable polynomial vanishing at 0;
    returns theta_0 by lowering every degree by one.
    """
    if theta1d.n != 1:
        raise DomainError(f"schwarz_split needs a one-variable polynomial, got N = {theta1d.n}")
    constant = theta1d.coefficient((0,))
    if np.any(constant):
        raise DomainError("schwarz_split needs a polynomial vanishing at 0")
    return MatrixPolynomial(1, theta1d.shape, {(t[0] - 1,): m for t, m in theta1d.coeffs.items() if t[0] > 0})
