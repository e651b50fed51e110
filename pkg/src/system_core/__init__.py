from src.system_core.energy import EnergyLedger, energy_balance_report
from src.system_core.signals import LatticeBox, LatticeSignal, SimulationWindow, front_energy
from src.system_core.simulation import Trajectory, closed_form, simulate
from src.system_core.system import MultiLSDS, conjugate, validate
