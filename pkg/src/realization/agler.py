# agler.py
"""
Agler decompositions

    I - theta(lam)* theta(z) = sum_k (1 - conj(lam_k) z_k) F_k(lam)* F_k(z)

and the first half of the realization pipeline: the stacked functions

    g(lam) = [lam_1 F_1(lam); ...; lam_N F_N(lam); I]    (K = m + q rows)
    f(lam) = [F_1(lam); ...; F_N(lam); theta(lam)]       (L = m + p rows)

whose Gram kernels agree, and the isometry g(lam) -> f(lam) between the
sampled spans.
"""
import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Sequence, Tuple

import numpy as np
from scipy.stats import qmc

from src.config import DEFAULTS
from src.errors import (
    ArityError, DomainError, InputError, PreconditionError, RankAmbiguityError, RealizationError, ShapeError)
from src.pencil_core.matrices import adjoint, spectral_norm
from src.transfer.polynomial import MatrixPolynomial, vstack

logger = logging.getLogger(__name__)

MatrixFunction = Callable[[Sequence[complex]], np.ndarray]


@dataclass(frozen=True, eq=False)
class AglerKernel:
    """
    theta and the F_k as plain functions of a point of D^N. Polynomial data
    and the kernel of a conservative system both reduce to this.
    """
    n: int
    theta: MatrixFunction
    fks: Tuple[MatrixFunction, ...]
    p: int
    q: int
    m_dims: Tuple[int, ...]

    @property
    def m(self) -> int:
        return sum(self.m_dims)

    def stacked_f(self, z) -> np.ndarray:
        """F(z) = [F_1(z); ...; F_N(z)], of shape m x q."""
        return np.vstack([fk(z) for fk in self.fks]) if self.fks else np.zeros((0, self.q))

    def padded(self, extra: int) -> "AglerKernel":
        """Appends `extra` zero rows to F_1."""
        if extra < 0:
            raise DomainError(f"Padding must be non-negative, got {extra}")
        if extra == 0:
            return self
        first = self.fks[0]

        def padded_first(z):
            return np.vstack([first(z), np.zeros((extra, self.q), dtype=np.complex128)])

        m_dims = (self.m_dims[0] + extra,) + self.m_dims[1:]
        return AglerKernel(self.n, self.theta, (padded_first,) + self.fks[1:], self.p, self.q, m_dims)


@dataclass(frozen=True, eq=False)
class AglerData:
    """Polynomial theta (p x q, theta(0) = 0) with polynomial F_k (m_k x q)."""
    theta: MatrixPolynomial
    fks: Tuple[MatrixPolynomial, ...]

    def __post_init__(self):
        fks = tuple(self.fks)
        if len(fks) != self.theta.n:
            raise ArityError(f"theta has {self.theta.n} variables but {len(fks)} functions F_k were given")
        for k, fk in enumerate(fks):
            if fk.n != self.theta.n:
                raise ArityError(f"F_{k + 1} has {fk.n} variables, theta has {self.theta.n}")
            if fk.shape[1] != self.q:
                raise ShapeError(f"F_{k + 1} has {fk.shape[1]} columns, theta has {self.q}")
        if np.any(self.theta.coefficient((0,) * self.theta.n)):
            raise DomainError("theta must vanish at 0")
        object.__setattr__(self, "fks", fks)

    @property
    def n(self) -> int:
        return self.theta.n

    @property
    def p(self) -> int:
        return self.theta.shape[0]

    @property
    def q(self) -> int:
        return self.theta.shape[1]

    @property
    def m_dims(self) -> Tuple[int, ...]:
        return tuple(fk.shape[0] for fk in self.fks)

    def kernel(self) -> AglerKernel:
        return AglerKernel(self.n, self.theta.evaluate, tuple(fk.evaluate for fk in self.fks),
                           self.p, self.q, self.m_dims)

    def padded(self, extra: int) -> "AglerData":
        """Appends `extra` zero rows to F_1; the identity is unchanged."""
        if extra < 0:
            raise DomainError(f"Padding must be non-negative, got {extra}")
        if extra == 0:
            return self
        first = self.fks[0]
        zeros = MatrixPolynomial.zeros(self.n, (extra, self.q))
        return AglerData(self.theta, (vstack([first, zeros]),) + self.fks[1:])

    def to_dict(self) -> dict:
        return {"theta": self.theta.to_dict(), "fks": [fk.to_dict() for fk in self.fks]}

    @classmethod
    def from_dict(cls, document: dict) -> "AglerData":
        try:
            theta = MatrixPolynomial.from_dict(document["theta"])
            fks = tuple(MatrixPolynomial.from_dict(fk) for fk in document["fks"])
        except KeyError as e:
            raise InputError(f"Agler data is missing the field {e}") from e
        return cls(theta, fks)


def random_polydisc_points(rng: np.random.Generator, n: int, count: int, radius: float) -> np.ndarray:
    r = radius * np.sqrt(rng.uniform(0, 1, (count, n)))
    return r * np.exp(2j * np.pi * rng.uniform(0, 1, (count, n)))


def sample_grid(n: int, count: int, radius: float = 0.8, seed: int = None) -> np.ndarray:
    """
    The origin followed by count - 1 scrambled Halton points of the polydisc
    of the given radius. Grids of one seed are nested in their count.
    """
    seed = DEFAULTS.seed if seed is None else seed
    if count < 1:
        raise DomainError(f"A sample grid needs at least one point, got {count}")
    points = np.zeros((count, n), dtype=np.complex128)
    if count > 1:
        cube = qmc.Halton(d=2 * n, scramble=True, seed=seed).random(count - 1)
        points[1:] = radius * np.sqrt(cube[:, :n]) * np.exp(2j * np.pi * cube[:, n:])
    return points


def kernel_residual(kernel: AglerKernel, pairs: int = 100, seed: int = None, radius: float = 0.95) -> float:
    """max over random (lam, z) pairs of the defect in the Agler identity."""
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    lams = random_polydisc_points(rng, kernel.n, pairs, radius)
    zs = random_polydisc_points(rng, kernel.n, pairs, radius)
    identity = np.eye(kernel.q)
    worst = 0.0
    for lam, z in zip(lams, zs):
        value = identity - adjoint(kernel.theta(lam)) @ kernel.theta(z)
        for k, fk in enumerate(kernel.fks):
            value -= (1 - np.conj(lam[k]) * z[k]) * adjoint(fk(lam)) @ fk(z)
        worst = max(worst, spectral_norm(value))
    return worst


def verify_agler_identity(data: AglerData, pairs: int = 100, seed: int = None) -> float:
    """
    Checks the decomposition at random pairs of points of D^N.

    Args:
        data (AglerData): theta and the F_k.
        pairs (int): Number of (lam, z) pairs.
    Returns:
        float: Largest spectral-norm residual.
    """
    worst = kernel_residual(data.kernel(), pairs, seed)
    logger.debug("Agler identity residual over %d pairs: %.3e", pairs, worst)
    return worst


def build_stacks(data) -> Tuple[MatrixFunction, MatrixFunction]:
    """The stacked column maps g and f, for AglerData or an AglerKernel."""
    kernel = data.kernel() if isinstance(data, AglerData) else data
    identity = np.eye(kernel.q, dtype=np.complex128)

    def g(lam):
        lam = np.asarray(lam, dtype=np.complex128)
        blocks = [lam[k] * fk(lam) for k, fk in enumerate(kernel.fks)]
        return np.vstack(blocks + [identity])

    def f(lam):
        return np.vstack([fk(lam) for fk in kernel.fks] + [kernel.theta(lam)])

    return g, f


@dataclass(frozen=True, eq=False)
class GramMatchedIsometry:
    """
    basis is an orthonormal basis of the sampled span G (K x r) and image
    its image under L (L x r). L is zero on the orthogonal complement of G.
    """
    basis: np.ndarray
    image: np.ndarray
    singular_values: np.ndarray
    residuals: Dict[str, float] = field(default_factory=dict)

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    def matrix(self) -> np.ndarray:
        return self.image @ adjoint(self.basis)

    def __call__(self, vectors: np.ndarray) -> np.ndarray:
        return self.image @ (adjoint(self.basis) @ vectors)


def gram_matched_isometry(g: MatrixFunction, f: MatrixFunction, grid: np.ndarray,
                          gram_tol: float = None, rank_tol: float = None,
                          isometry_tol: float = None) -> GramMatchedIsometry:
    """
    The unique isometry L of span{g(lam) eta} onto span{f(lam) eta} with
    L g(lam) = f(lam) on the grid.

    With the stacked samples S_g = W S V* (thin SVD restricted to the
    numerical rank), L W = S_f V S^{-1}.

    Args:
        g, f: Column maps with equal column counts.
        grid (np.ndarray): Sample points, one per row.
        gram_tol (float): Admissible entrywise defect of S_g* S_g - S_f* S_f.
        rank_tol (float): Relative singular value cut; values within a factor
            ten below it are ambiguous.
        isometry_tol (float): Bound on ||L* L - I||; small singular values
            amplify Gram defects that pass gram_tol.
    Returns:
        GramMatchedIsometry: Basis of G, its image and residuals.
    """
    gram_tol = DEFAULTS.iterative_tol if gram_tol is None else gram_tol
    rank_tol = DEFAULTS.rank_tol if rank_tol is None else rank_tol
    isometry_tol = DEFAULTS.iterative_tol if isometry_tol is None else isometry_tol
    sg = np.hstack([g(lam) for lam in grid])
    sf = np.hstack([f(lam) for lam in grid])
    if sg.shape[1] != sf.shape[1]:
        raise ShapeError(f"g and f produce {sg.shape[1]} and {sf.shape[1]} sample columns")

    gram = float(np.max(np.abs(adjoint(sg) @ sg - adjoint(sf) @ sf), initial=0.0))
    if gram > gram_tol:
        raise PreconditionError(f"Gram kernels of g and f differ by {gram:.3e} on the grid")

    w, s, vh = np.linalg.svd(sg, full_matrices=False)
    relative = s / s[0] if s.size and s[0] > 0 else np.zeros_like(s)
    dead_zone = (relative >= rank_tol / 10) & (relative <= rank_tol)
    if np.any(dead_zone):
        raise RankAmbiguityError(
            f"{int(dead_zone.sum())} singular values of the sampled span lie in [{rank_tol / 10:.1e}, {rank_tol:.1e}]",
            s[dead_zone])
    rank = int(np.sum(relative > rank_tol))
    basis = w[:, :rank]
    image = sf @ adjoint(vh[:rank]) / s[:rank]
    isometry = spectral_norm(adjoint(image) @ image - np.eye(rank))
    logger.debug("sampled span of dimension %d from %d points, isometry residual %.3e", rank, len(grid), isometry)
    if isometry > isometry_tol:
        raise RealizationError(f"L is not an isometry on the sampled span: defect {isometry:.3e}",
                               {"gram": gram, "isometry": isometry})
    return GramMatchedIsometry(basis, image, s, {"gram": gram, "isometry": isometry})
