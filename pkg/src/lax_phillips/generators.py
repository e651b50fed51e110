# generators.py
"""
The N commuting generators W_k of the associated semigroup, their adjoints,
and the inverse-time map gamma onto the space of the conjugate system.

For h = (u+, y, u-) and k = 1..N:

    (W_k h)+ (t) = u+(t + e_k)                                      |t| <= -1
                 = sum_j C_j y(t + e_k - e_j) + D_j u-(t + e_k - e_j) |t| = 0
    (W_k h)y (t) = sum_j A_j y(t + e_k - e_j) + B_j u-(t + e_k - e_j) |t| = 0
    (W_k h)- (t) = u-(t + e_k)                                      |t| >= 0

Every value is computed on every box point of its part; a value is marked
contaminated when it read off the box or read a contaminated coordinate.
"""
import logging
from typing import Dict, FrozenSet, List, Sequence, Set, Tuple

import numpy as np
from pydantic import BaseModel
from tqdm import tqdm

from src.analysis.conservativity import conservativity_check
from src.analysis.dissipativity import dissipativity_scan
from src.config import DEFAULTS
from src.errors import ArityError, DomainError, ShapeError
from src.lax_phillips.space import (
    STATE, U_MINUS, U_PLUS, Coordinate, TruncatedLPVector, part_points, random_interior_vector, space_dims)
from src.pencil_core.matrices import adjoint, order, shift, unit
from src.system_core.signals import LatticeBox, LatticeSignal, Point
from src.system_core.system import MultiLSDS, conjugate

logger = logging.getLogger(__name__)

CONSERVATIVE = "conservative"
DISSIPATIVE = "dissipative"
NON_DISSIPATIVE = "non-dissipative"


def default_box(n: int) -> LatticeBox:
    """[-3, 3]^N: margin-2 random vectors sit on [-1, 1]^N."""
    return LatticeBox.cube(n, -3, 3)


def _check(sys: MultiLSDS, k: int, h: TruncatedLPVector):
    sys.require_valid()
    if not 1 <= k <= sys.n:
        raise DomainError(f"Generator index k must lie in 1..{sys.n}, got {k}")
    if h.n != sys.n:
        raise ArityError(f"Vector lives on Z^{h.n}, the system has N = {sys.n}")
    if h.dims != space_dims(sys):
        raise ShapeError(f"Vector part dimensions {h.dims} do not match the system's {space_dims(sys)}")


def _coupled(h: TruncatedLPVector, reads: Sequence[Point], first: Tuple[str, Sequence[np.ndarray]],
             second: Tuple[str, Sequence[np.ndarray]], rows: int) -> Tuple[np.ndarray, bool]:
    """sum_j F_j h_first(p_j) + S_j h_second(p_j), with the dirty flags or-ed."""
    value = np.zeros(rows, dtype=np.complex128)
    dirty = False
    for j, p in enumerate(reads):
        for part, mats in (first, second):
            v, bad = h.read(part, p)
            value += mats[j] @ v
            dirty = dirty or bad
    return value, dirty


def _assemble(h: TruncatedLPVector, values: Dict[str, Dict[Point, np.ndarray]],
              dirty: Set[Coordinate], dims: Tuple[int, int, int]) -> TruncatedLPVector:
    signals = [LatticeSignal(h.n, dim, values[part]) for part, dim in zip((U_PLUS, STATE, U_MINUS), dims)]
    return TruncatedLPVector(h.box, *signals, contaminated=frozenset(dirty))


def apply_generator(sys: MultiLSDS, k: int, h: TruncatedLPVector) -> Tuple[TruncatedLPVector, FrozenSet[Coordinate]]:
    """W_k h for one-based k, with the contamination mask of the image."""
    _check(sys, k, h)
    n = sys.n
    e_k = unit(k - 1, n)
    moves = [shift(e_k, unit(j, n), -1) for j in range(n)]
    values: Dict[str, Dict[Point, np.ndarray]] = {U_PLUS: {}, STATE: {}, U_MINUS: {}}
    dirty: Set[Coordinate] = set()

    def record(part, t, value, bad):
        values[part][t] = value
        if bad:
            dirty.add((part, t))

    for t in part_points(h.box, U_PLUS):
        if order(t) <= -1:
            record(U_PLUS, t, *h.read(U_PLUS, shift(t, e_k)))
        else:
            reads = [shift(t, m) for m in moves]
            record(U_PLUS, t, *_coupled(h, reads, (STATE, sys.c), (U_MINUS, sys.d), sys.dim_np))
    for t in part_points(h.box, STATE):
        reads = [shift(t, m) for m in moves]
        record(STATE, t, *_coupled(h, reads, (STATE, sys.a), (U_MINUS, sys.b), sys.dim_x))
    for t in part_points(h.box, U_MINUS):
        record(U_MINUS, t, *h.read(U_MINUS, shift(t, e_k)))

    image = _assemble(h, values, dirty, space_dims(sys))
    return image, image.contaminated


def apply_adjoint(sys: MultiLSDS, k: int, h: TruncatedLPVector) -> Tuple[TruncatedLPVector, FrozenSet[Coordinate]]:
    """
    Applies W_k*:

        (W_k* h)+ (t) = u+(t - e_k)                                         |t| <= 0
        (W_k* h)y (t) = sum_j A_j* y(t - e_k + e_j) + C_j* u+(t - e_k + e_j) |t| = 0
        (W_k* h)- (t) = sum_j B_j* y(t - e_k + e_j) + D_j* u+(t - e_k + e_j) |t| = 0
                      = u-(t - e_k)                                         |t| >= 1
    """
    _check(sys, k, h)
    n = sys.n
    e_k = unit(k - 1, n)
    moves = [shift(unit(j, n), e_k, -1) for j in range(n)]
    a_star = [adjoint(m) for m in sys.a]
    b_star = [adjoint(m) for m in sys.b]
    c_star = [adjoint(m) for m in sys.c]
    d_star = [adjoint(m) for m in sys.d]
    values: Dict[str, Dict[Point, np.ndarray]] = {U_PLUS: {}, STATE: {}, U_MINUS: {}}
    dirty: Set[Coordinate] = set()

    def record(part, t, value, bad):
        values[part][t] = value
        if bad:
            dirty.add((part, t))

    for t in part_points(h.box, U_PLUS):
        record(U_PLUS, t, *h.read(U_PLUS, shift(t, e_k, -1)))
    for t in part_points(h.box, STATE):
        reads = [shift(t, m) for m in moves]
        record(STATE, t, *_coupled(h, reads, (STATE, a_star), (U_PLUS, c_star), sys.dim_x))
    for t in part_points(h.box, U_MINUS):
        if order(t) >= 1:
            record(U_MINUS, t, *h.read(U_MINUS, shift(t, e_k, -1)))
        else:
            reads = [shift(t, m) for m in moves]
            record(U_MINUS, t, *_coupled(h, reads, (STATE, b_star), (U_PLUS, d_star), sys.dim_nm))

    image = _assemble(h, values, dirty, space_dims(sys))
    return image, image.contaminated


def gamma_map(h: TruncatedLPVector) -> TruncatedLPVector:
    """
    (u+, y, u-) -> (u-(-t), y(-t), u+(-t)) on the negated box. The same
    formula maps back, so gamma_map(gamma_map(h)) is h.
    """
    swap = {U_PLUS: U_MINUS, STATE: STATE, U_MINUS: U_PLUS}
    contaminated = frozenset((swap[part], tuple(-c for c in t)) for part, t in h.contaminated)
    return TruncatedLPVector(h.box.negated(), h.u_minus.negated(), h.y.negated(), h.u_plus.negated(),
                             contaminated=contaminated)


def commutation_residual(sys: MultiLSDS, k: int, j: int, trials: int = 10, box: LatticeBox = None,
                         seed: int = None, progress: bool = False) -> float:
    """
    max over random interior vectors of ||W_k W_j h - W_j W_k h|| on the
    coordinates clean in both products. Zero when k == j.
    """
    if k == j:
        return 0.0
    box = box or default_box(sys.n)
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    worst = 0.0
    for _ in tqdm(range(trials), desc=f"commute W_{k} W_{j}", disable=not progress):
        h = random_interior_vector(rng, box, space_dims(sys))
        kj, _ = apply_generator(sys, k, apply_generator(sys, j, h)[0])
        jk, _ = apply_generator(sys, j, apply_generator(sys, k, h)[0])
        worst = max(worst, kj.combine(jk, -1.0).clean_part().norm())
    logger.debug("commutation residual of W_%d and W_%d: %.3e", k, j, worst)
    return worst


def adjointness_residual(sys: MultiLSDS, k: int, trials: int = 10, box: LatticeBox = None,
                         seed: int = None) -> float:
    """max |<W_k h1, h2> - <h1, W_k* h2>| over pairs of random interior vectors."""
    box = box or default_box(sys.n)
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    worst = 0.0
    for _ in range(trials):
        h1 = random_interior_vector(rng, box, space_dims(sys), margin=1)
        h2 = random_interior_vector(rng, box, space_dims(sys), margin=1)
        left = apply_generator(sys, k, h1)[0].inner(h2)
        right = h1.inner(apply_adjoint(sys, k, h2)[0])
        worst = max(worst, abs(left - right))
    return worst


def conjugacy_residual(sys: MultiLSDS, k: int, trials: int = 10, box: LatticeBox = None,
                       seed: int = None) -> float:
    """max ||W*_k gamma h - gamma W_k* h|| where W*_k belongs to the conjugate system."""
    box = box or default_box(sys.n)
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    star = conjugate(sys)
    worst = 0.0
    for _ in range(trials):
        h = random_interior_vector(rng, box, space_dims(sys), margin=1)
        left, _ = apply_generator(star, k, gamma_map(h))
        right = gamma_map(apply_adjoint(sys, k, h)[0])
        worst = max(worst, left.combine(right, -1.0).norm())
    return worst


class MetricReport(BaseModel):
    """Norm ratios ||W_k h|| / ||h|| on random interior vectors."""
    ratios: List[float]
    max_ratio: float
    min_ratio: float
    contractive: bool
    isometric: bool
    classification: str
    group_residuals: Dict[str, float]
    tol: float
    consistent: bool


def classify(sys: MultiLSDS, tol: float = None) -> str:
    if conservativity_check(sys, tol).passed:
        return CONSERVATIVE
    if dissipativity_scan(sys, tol=tol).dissipative:
        return DISSIPATIVE
    return NON_DISSIPATIVE


def metric_check(sys: MultiLSDS, trials: int = 10, box: LatticeBox = None, tol: float = None,
                 seed: int = None, progress: bool = False) -> MetricReport:
    """
    Estimates the norm behaviour of every generator and compares it with the
    classification of the system: conservative systems must give isometries
    (and W_k* W_k = W_k W_k* = I on interior vectors), dissipative systems
    contractions.

    Args:
        sys (MultiLSDS): The system.
        trials (int): Random vectors per generator.
        box (LatticeBox): Truncation box, [-3, 3]^N by default.
        tol (float): Slack on ratios and residuals.
    Returns:
        MetricReport: Ratios, verdicts and group residuals.
    """
    tol = DEFAULTS.verdict_tol if tol is None else tol
    box = box or default_box(sys.n)
    rng = np.random.default_rng(DEFAULTS.seed if seed is None else seed)
    classification = classify(sys, tol)
    ratios = []
    left_inverse = right_inverse = 0.0
    for _ in tqdm(range(trials), desc="metric", disable=not progress):
        h = random_interior_vector(rng, box, space_dims(sys))
        size = h.norm()
        if size == 0:
            logger.warning("All parts are zero-dimensional; no ratio to measure")
            break
        for k in range(1, sys.n + 1):
            image, _ = apply_generator(sys, k, h)
            ratios.append(image.norm() / size)
            if classification == CONSERVATIVE:
                back, _ = apply_adjoint(sys, k, image)
                left_inverse = max(left_inverse, back.combine(h, -1.0).norm() / size)
                forth, _ = apply_generator(sys, k, apply_adjoint(sys, k, h)[0])
                right_inverse = max(right_inverse, forth.combine(h, -1.0).norm() / size)

    max_ratio = max(ratios, default=0.0)
    min_ratio = min(ratios, default=0.0)
    contractive = max_ratio <= 1 + tol
    isometric = bool(ratios) and all(abs(r - 1) <= tol for r in ratios)
    group_residuals = {}
    if classification == CONSERVATIVE:
        group_residuals = {"left_inverse": left_inverse, "right_inverse": right_inverse}

    match classification:
        case "conservative":
            consistent = isometric and all(v <= tol for v in group_residuals.values())
        case "dissipative":
            consistent = contractive
        case _:
            consistent = True
    logger.info("generator norm ratios in [%.12f, %.12f] for a %s system", min_ratio, max_ratio, classification)
    return MetricReport(
        ratios=ratios,
        max_ratio=max_ratio,
        min_ratio=min_ratio,
        contractive=contractive,
        isometric=isometric,
        classification=classification,
        group_residuals=group_residuals,
        tol=tol,
        consistent=consistent,
    )
