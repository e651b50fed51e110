# one_param.py
"""
The k-th associated one-parameter system: the compression of W_k to the
front |t| = 0 of a box,

    A~_k = A_k I + sum_{j != k} A_j T_jk      B~_k = B_k I + sum_{j != k} B_j S_jk
    C~_k = C_k I + sum_{j != k} C_j T_jk      D~_k = D_k I + sum_{j != k} D_j S_jk

with (T_jk y)(s) = y(s + e_k - e_j). Stepping it n times reproduces the
states x(s + n e_k) and outputs of the multiparametric system.
"""
import logging
from dataclasses import dataclass
from typing import Dict, List

import numpy as np

from src.errors import DomainError
from src.pencil_core.matrices import shift, unit
from src.system_core.signals import LatticeBox, LatticeSignal, Point, SimulationWindow
from src.system_core.simulation import simulate
from src.system_core.system import MultiLSDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class OneParamSystemView:
    """
    front lists the box points with |t| = 0 in lexicographic order; every
    assembled matrix is indexed blockwise in that order. pattern[j] is the
    0/1 matrix of the translation s -> s + e_k - e_j (j zero-based, j != k),
    with rows of points whose image leaves the box left empty.
    """
    k: int
    box: LatticeBox
    front: List[Point]
    pattern: Dict[int, np.ndarray]
    system: MultiLSDS
    source_dims: tuple

    @property
    def A(self) -> np.ndarray:
        return self.system.a[0]

    @property
    def B(self) -> np.ndarray:
        return self.system.b[0]

    @property
    def C(self) -> np.ndarray:
        return self.system.c[0]

    @property
    def D(self) -> np.ndarray:
        return self.system.d[0]

    def state_shift(self, j: int) -> np.ndarray:
        """T_jk acting on stacked states (j one-based)."""
        return np.kron(self.pattern[j - 1], np.eye(self.source_dims[0]))

    def input_shift(self, j: int) -> np.ndarray:
        """S_jk acting on stacked inputs (j one-based)."""
        return np.kron(self.pattern[j - 1], np.eye(self.source_dims[1]))

    def lossy(self) -> np.ndarray:
        """Front positions with a translation leaving the box."""
        mask = np.zeros(len(self.front), dtype=bool)
        for matrix in self.pattern.values():
            mask |= ~matrix.any(axis=1)
        return mask

    def clean_after(self, steps: int) -> np.ndarray:
        """Positions whose value after `steps` iterations never read a lossy position."""
        clean = np.ones(len(self.front), dtype=bool)
        reach = [matrix.astype(bool) for matrix in self.pattern.values()]
        lossy = self.lossy()
        for _ in range(steps):
            reads_dirty = np.zeros_like(clean)
            for matrix in reach:
                reads_dirty |= (matrix & ~clean[None, :]).any(axis=1)
            clean = clean & ~lossy & ~reads_dirty
        return clean

    def stack(self, signal: LatticeSignal, offset: Point = None) -> np.ndarray:
        """Concatenates signal(s + offset) over the front."""
        offset = offset or (0,) * self.box.n
        parts = [signal.get(shift(s, offset)) for s in self.front]
        return np.concatenate(parts) if parts else np.zeros(0, dtype=np.complex128)


def translation_pattern(front: List[Point], move: Point) -> np.ndarray:
    index = {s: i for i, s in enumerate(front)}
    matrix = np.zeros((len(front), len(front)))
    for i, s in enumerate(front):
        target = index.get(shift(s, move))
        if target is not None:
            matrix[i, target] = 1.0
    return matrix


def associated_one_param(sys: MultiLSDS, k: int, box: LatticeBox) -> OneParamSystemView:
    """
    Assembles the k-th associated one-parameter system on the front of a box.

    Args:
        sys (MultiLSDS): The system.
        k (int): Direction in 1..N.
        box (LatticeBox): Truncation box; its points with |t| = 0 index the new state space.
    Returns:
        OneParamSystemView: The N = 1 system with its shift patterns.
    """
    sys.require_valid()
    if not 1 <= k <= sys.n:
        raise DomainError(f"Direction k must lie in 1..{sys.n}, got {k}")
    if box.n != sys.n:
        raise DomainError(f"Box lives in Z^{box.n}, the system has N = {sys.n}")
    front = box.front(0)
    if not front:
        raise DomainError(f"Box {box.to_dict()} does not meet the front |t| = 0")
    n = sys.n
    e_k = unit(k - 1, n)
    identity = np.eye(len(front))
    pattern = {j: translation_pattern(front, shift(e_k, unit(j, n), -1)) for j in range(n) if j != k - 1}

    def lifted(mats):
        total = np.kron(identity, mats[k - 1])
        for j, matrix in pattern.items():
            total = total + np.kron(matrix, mats[j])
        return total

    system = MultiLSDS.from_matrices(
        [lifted(sys.a)], [lifted(sys.b)], [lifted(sys.c)], [lifted(sys.d)],
        dim_x=len(front) * sys.dim_x, dim_nm=len(front) * sys.dim_nm, dim_np=len(front) * sys.dim_np,
    )
    logger.debug("one-parameter system %d on %d front points, state dimension %d", k, len(front), system.dim_x)
    return OneParamSystemView(k, box, front, pattern, system, (sys.dim_x, sys.dim_nm, sys.dim_np))


def reproduction_residual(sys: MultiLSDS, k: int, init: LatticeSignal, input: LatticeSignal,
                          box: LatticeBox, steps: int) -> float:
    """
    Steps the k-th associated system with x_0 = init on the front and inputs
    u_n(s) = u(s + n e_k), and compares x_n(s) with x(s + n e_k) and the
    outputs likewise, taking the multiparametric values from simulate().
    Only positions clean on both sides are compared.

    Returns:
        float: Largest deviation over the compared states and outputs.
    """
    if steps < 1:
        raise DomainError(f"steps must be at least 1, got {steps}")
    view = associated_one_param(sys, k, box)
    e_k = unit(k - 1, sys.n)
    hi = tuple(b + steps if j == k - 1 else b for j, b in enumerate(box.hi))
    trajectory = simulate(sys, init, input, SimulationWindow(LatticeBox(box.lo, hi), steps))

    x = view.stack(init)
    worst = 0.0
    compared = 0
    for step in range(1, steps + 1):
        u = view.stack(input, tuple(step - 1 if j == k - 1 else 0 for j in range(sys.n)))
        y = view.C @ x + view.D @ u
        x = view.A @ x + view.B @ u
        clean = view.clean_after(step)
        offset = tuple(step * c for c in e_k)
        for i, s in enumerate(view.front):
            t = shift(s, offset)
            if not clean[i] or not trajectory.is_clean(t):
                continue
            x_block = x[i * sys.dim_x:(i + 1) * sys.dim_x]
            y_block = y[i * sys.dim_np:(i + 1) * sys.dim_np]
            worst = max(worst,
                        float(np.linalg.norm(x_block - trajectory.states.get(t), np.inf)) if sys.dim_x else 0.0,
                        float(np.linalg.norm(y_block - trajectory.outputs.get(t), np.inf)) if sys.dim_np else 0.0)
            compared += 1
    logger.info("one-parameter reproduction compared %d points over %d steps: residual %.3e", compared, steps, worst)
    return worst
