# energy.py
"""
Per-front energy bookkeeping. For a dissipative system every clean front obeys

    E-(n-1) - E+(n) >= E_x(n) - E_x(n-1)

and a conservative one turns the inequality into an equality.
"""
import logging
from typing import List

import pandas as pd
from pydantic import BaseModel

from src.config import DEFAULTS
from src.system_core.signals import LatticeSignal, SimulationWindow, front_energy
from src.system_core.simulation import Trajectory, simulate
from src.system_core.system import MultiLSDS, conjugate as conjugate_system

logger = logging.getLogger(__name__)

LEDGER_COLUMNS = ["n", "E_minus", "E_plus", "E_x", "lhs", "rhs", "difference",
                  "contaminated", "dissipative_ok", "conservative_ok"]


class LedgerRow(BaseModel):
    n: int
    E_minus: float
    E_plus: float
    E_x: float
    lhs: float
    rhs: float
    difference: float
    contaminated: bool
    dissipative_ok: bool
    conservative_ok: bool


class EnergyLedger(BaseModel):
    rows: List[LedgerRow]
    tol: float
    conjugate: bool = False

    def clean_rows(self) -> List[LedgerRow]:
        return [row for row in self.rows if not row.contaminated]

    def dissipative_consistent(self) -> bool:
        return all(row.dissipative_ok for row in self.clean_rows())

    def conservative_consistent(self) -> bool:
        return all(row.conservative_ok for row in self.clean_rows())

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.model_dump() for row in self.rows], columns=LEDGER_COLUMNS)


def ledger_from_trajectory(trajectory: Trajectory, input: LatticeSignal, tol: float = None,
                           conjugate: bool = False) -> EnergyLedger:
    """
    Builds the ledger from an existing trajectory.

    A row is contaminated when a point of front n - 1 or n is contaminated,
    when state support of either front leaves the box, or when input support
    of front n - 1 does.
    """
    tol = tol if tol is not None else DEFAULTS.verdict_tol
    box = trajectory.window.box
    rows = []
    for n in range(1, trajectory.window.n_max + 1):
        e_minus = front_energy(input, n - 1, box)
        e_plus = front_energy(trajectory.outputs, n, box)
        e_x = front_energy(trajectory.states, n, box)
        e_x_prev = front_energy(trajectory.states, n - 1, box)
        lhs = e_minus - e_plus
        rhs = e_x - e_x_prev
        contaminated = not (trajectory.front_clean(n) and trajectory.front_clean(n - 1)
                            and not trajectory.input_escapes(n - 1))
        rows.append(LedgerRow(
            n=n, E_minus=e_minus, E_plus=e_plus, E_x=e_x, lhs=lhs, rhs=rhs,
            difference=lhs - rhs, contaminated=contaminated,
            dissipative_ok=lhs >= rhs - tol,
            conservative_ok=abs(lhs - rhs) <= tol,
        ))
    ledger = EnergyLedger(rows=rows, tol=tol, conjugate=conjugate)
    logger.debug("energy ledger: %d rows, %d clean", len(rows), len(ledger.clean_rows()))
    return ledger


def energy_balance_report(sys: MultiLSDS, init: LatticeSignal, input: LatticeSignal,
                          window: SimulationWindow, tol: float = None,
                          conjugate: bool = False, progress: bool = False) -> EnergyLedger:
    """
    Simulates and tabulates lhs = E-(n-1) - E+(n) against rhs = E_x(n) - E_x(n-1).

    Args:
        sys (MultiLSDS): The system.
        init (LatticeSignal): Initial states on |t| = 0.
        input (LatticeSignal): Input signal (in N+ when conjugate is set).
        window (SimulationWindow): Box and last front.
        tol (float): Slack of the per-front verdicts.
        conjugate (bool): Run the ledger on the conjugate system instead.
    Returns:
        EnergyLedger: One row per front 1..n_max.
    """
    target = conjugate_system(sys) if conjugate else sys
    trajectory = simulate(target, init, input, window, progress=progress)
    return ledger_from_trajectory(trajectory, input, tol=tol, conjugate=conjugate)
