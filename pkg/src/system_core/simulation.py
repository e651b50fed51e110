# simulation.py
"""
Front-by-front evaluation of a multiparametric system on a box, either by the
recursion itself or by the closed multipower formula.

Values outside the box are never computed. A point is contaminated when its
value depends on an off-box point that can carry a non-zero value, i.e. one
lying in the structural support propagated from the data:

    R(0) = supp x0,   R(n) = { p + e_k : p in R(n - 1) or p in supp u at front n - 1 }
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Set

import numpy as np
from tqdm import tqdm

from src.errors import DomainError, ShapeError
from src.pencil_core.matrices import is_below, order, shift, unit
from src.pencil_core.multipowers import BOTH, LEFT, RIGHT, MultipowerTable
from src.system_core.signals import LatticeSignal, Point, SimulationWindow
from src.system_core.system import MultiLSDS

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class StructuralSupport:
    """Points of each front where states (and outputs) may be non-zero."""
    fronts: Dict[int, FrozenSet[Point]]
    input_fronts: Dict[int, FrozenSet[Point]]

    def state(self, n: int) -> FrozenSet[Point]:
        return self.fronts.get(n, frozenset())

    def input(self, n: int) -> FrozenSet[Point]:
        return self.input_fronts.get(n, frozenset())


@dataclass(frozen=True, eq=False)
class Trajectory:
    """
    States on fronts 0..n_max and outputs on fronts 1..n_max, restricted to
    the window box, with the contamination bookkeeping.
    """
    states: LatticeSignal
    outputs: LatticeSignal
    window: SimulationWindow
    contaminated: FrozenSet[Point]
    support: StructuralSupport = field(repr=False)

    def is_clean(self, t) -> bool:
        return tuple(t) not in self.contaminated

    def clean_points(self, n: int = None) -> List[Point]:
        fronts = [n] if n is not None else range(1, self.window.n_max + 1)
        return [t for m in fronts for t in self.window.box.front(m) if t not in self.contaminated]

    def state_escapes(self, n: int) -> bool:
        """True when state support at front n leaves the box."""
        box = self.window.box
        return any(not box.contains(t) for t in self.support.state(n))

    def input_escapes(self, n: int) -> bool:
        box = self.window.box
        return any(not box.contains(t) for t in self.support.input(n))

    def front_clean(self, n: int) -> bool:
        """Every point of front n is clean and all state mass of front n lies in the box."""
        if self.state_escapes(n):
            return False
        return all(t not in self.contaminated for t in self.window.box.front(n))


def _check_inputs(sys: MultiLSDS, init: LatticeSignal, input: LatticeSignal, window: SimulationWindow):
    sys.require_valid()
    n = sys.n
    for name, signal, dim in (("init", init, sys.dim_x), ("input", input, sys.dim_nm)):
        if signal.n != n:
            raise ShapeError(f"{name} lives on Z^{signal.n}, the system has N = {n}")
        if signal.dim != dim:
            raise ShapeError(f"{name} vectors have length {signal.dim}, expected {dim}")
    if window.box.n != n:
        raise ShapeError(f"Window box lives in Z^{window.box.n}, the system has N = {n}")
    off_front = [t for t in init.support if order(t) != 0]
    if off_front:
        raise DomainError(f"Initial data must sit on the front |t| = 0, got {off_front[:3]}")


def structural_support(n: int, init: LatticeSignal, input: LatticeSignal, n_max: int) -> StructuralSupport:
    """Propagates the support of the data front by front over all of Z^N."""
    input_fronts: Dict[int, Set[Point]] = {}
    for t in input.support:
        input_fronts.setdefault(order(t), set()).add(t)
    units = [unit(k, n) for k in range(n)]
    fronts = {0: frozenset(init.support)}
    for m in range(1, n_max + 1):
        seeds = fronts[m - 1] | input_fronts.get(m - 1, set())
        fronts[m] = frozenset(shift(p, e) for p in seeds for e in units)
    return StructuralSupport(fronts, {m: frozenset(points) for m, points in input_fronts.items()})


def _contamination(sys_n: int, window: SimulationWindow, support: StructuralSupport) -> FrozenSet[Point]:
    box = window.box
    units = [unit(k, sys_n) for k in range(sys_n)]
    dirty: Set[Point] = set()
    for m in range(1, window.n_max + 1):
        for t in box.front(m):
            for e in units:
                p = shift(t, e, -1)
                if box.contains(p):
                    if p in dirty:
                        dirty.add(t)
                        break
                elif p in support.state(m - 1) or p in support.input(m - 1):
                    dirty.add(t)
                    break
    return frozenset(dirty)


def simulate(sys: MultiLSDS, init: LatticeSignal, input: LatticeSignal,
             window: SimulationWindow, progress: bool = False) -> Trajectory:
    """
    Runs the recursion on every box point with 1 <= |t| <= n_max.

    Args:
        sys (MultiLSDS): The system.
        init (LatticeSignal): Initial states, supported on |t| = 0.
        input (LatticeSignal): Input signal in N-.
        window (SimulationWindow): Box and last front.
        progress (bool): Show a progress bar over fronts.
    Returns:
        Trajectory: States, outputs and the contamination mask.
    """
    _check_inputs(sys, init, input, window)
    box = window.box
    units = [unit(k, sys.n) for k in range(sys.n)]
    states: Dict[Point, np.ndarray] = {t: v for t, v in init.entries.items() if box.contains(t)}
    outputs: Dict[Point, np.ndarray] = {}
    zero_x = np.zeros(sys.dim_x, dtype=np.complex128)
    zero_u = np.zeros(sys.dim_nm, dtype=np.complex128)

    for m in tqdm(range(1, window.n_max + 1), desc="fronts", disable=not progress):
        for t in box.front(m):
            x = np.zeros(sys.dim_x, dtype=np.complex128)
            y = np.zeros(sys.dim_np, dtype=np.complex128)
            for k, e in enumerate(units):
                p = shift(t, e, -1)
                if box.contains(p):
                    x_prev = states.get(p, zero_x)
                    u_prev = input.get(p)
                else:
                    x_prev = zero_x
                    u_prev = zero_u
                x += sys.a[k] @ x_prev + sys.b[k] @ u_prev
                y += sys.c[k] @ x_prev + sys.d[k] @ u_prev
            states[t] = x
            outputs[t] = y

    support = structural_support(sys.n, init, input, window.n_max)
    contaminated = _contamination(sys.n, window, support)
    if contaminated:
        logger.info("%d of the computed points depend on data outside the box", len(contaminated))
    return Trajectory(
        states=LatticeSignal(sys.n, sys.dim_x, states),
        outputs=LatticeSignal(sys.n, sys.dim_np, outputs),
        window=window,
        contaminated=contaminated,
        support=support,
    )


def closed_form(sys: MultiLSDS, init: LatticeSignal, input: LatticeSignal,
                window: SimulationWindow, progress: bool = False) -> Trajectory:
    """
    Same trajectory through the multipower formulas

        x(t) = sum_{|tau| = 0} c A^(t-tau) x(tau) + sum_{tau < t} c (A#B)^(t-tau) u(tau)
        y(t) = sum_{|tau| = 0} c (C♭A)^(t-tau) x(tau) + sum_k D_k u(t - e_k)
               + sum_{t - tau not in {0, e_k}} c (C♭A#B)^(t-tau) u(tau)

    where c = c_{t - tau} and only data inside the box enters the sums.
    """
    _check_inputs(sys, init, input, window)
    box = window.box
    table = MultipowerTable(sys.A, B=sys.B, C=sys.C)
    init_points = [(tau, v) for tau, v in init.entries.items() if box.contains(tau)]
    input_points = [(tau, v) for tau, v in input.entries.items()
                    if box.contains(tau) and order(tau) >= 0]
    states: Dict[Point, np.ndarray] = dict(init_points)
    outputs: Dict[Point, np.ndarray] = {}

    for m in tqdm(range(1, window.n_max + 1), desc="fronts", disable=not progress):
        for t in box.front(m):
            x = np.zeros(sys.dim_x, dtype=np.complex128)
            y = np.zeros(sys.dim_np, dtype=np.complex128)
            for tau, v in init_points:
                if is_below(tau, t):
                    s = shift(t, tau, -1)
                    x += table.power_scaled(s) @ v
                    y += table.bordered_scaled(LEFT, s) @ v
            for tau, v in input_points:
                if tau == t or not is_below(tau, t):
                    continue
                s = shift(t, tau, -1)
                x += table.bordered_scaled(RIGHT, s) @ v
                if order(s) == 1:
                    y += sys.d[s.index(1)] @ v
                else:
                    y += table.bordered_scaled(BOTH, s) @ v
            states[t] = x
            outputs[t] = y

    support = structural_support(sys.n, init, input, window.n_max)
    return Trajectory(
        states=LatticeSignal(sys.n, sys.dim_x, states),
        outputs=LatticeSignal(sys.n, sys.dim_np, outputs),
        window=window,
        contaminated=_contamination(sys.n, window, support),
        support=support,
    )
