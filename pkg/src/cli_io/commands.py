# commands.py
"""
The five batch commands. Each takes the parsed arguments and the effective
settings and returns a RunReport; errors propagate to the caller, which
turns them into exit codes.
"""
import argparse
import logging

import numpy as np

from src.analysis.conservativity import block_structure, conservativity_check
from src.analysis.connectedness import closely_connected_subspace, completely_nonunitary_check
from src.analysis.dissipativity import dissipativity_scan
from src.cli_io.formats import load_agler, load_points, load_signal, load_system, save_system, system_to_dict
from src.cli_io.reports import RunReport, Stopwatch, file_digest, plain
from src.config import Settings
from src.errors import DomainError, SingularityError, VerificationError
from src.lax_phillips.generators import (
    adjointness_residual, apply_generator, commutation_residual, conjugacy_residual, default_box, metric_check)
from src.lax_phillips.space import random_interior_vector, space_dims
from src.realization.agler import random_polydisc_points, verify_agler_identity
from src.realization.colligation import realize
from src.system_core.energy import energy_balance_report, ledger_from_trajectory
from src.system_core.signals import LatticeBox, LatticeSignal, SimulationWindow
from src.system_core.simulation import simulate
from src.transfer.evaluation import maclaurin_polynomial, transfer_eval

logger = logging.getLogger(__name__)

GRID_RADIUS = 0.9


def _box(args: argparse.Namespace, n: int, default: LatticeBox) -> LatticeBox:
    if getattr(args, "box", None) is None:
        return default
    lo, hi = args.box
    return LatticeBox.cube(n, lo, hi)


def cmd_check(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Dissipativity scan, conservativity certificate and close-connectedness of a system."""
    watch = Stopwatch()
    sys = load_system(args.system)
    watch.lap("load")
    scan = dissipativity_scan(sys, samples=args.samples or settings.torus_samples, refine=args.refine,
                              tol=settings.verdict_tol, max_points=settings.torus_max_points,
                              refine_steps=settings.refine_steps, seed=settings.seed, progress=args.progress)
    watch.lap("dissipativity")
    certificate = conservativity_check(sys, tol=settings.verdict_tol)
    subspace = closely_connected_subspace(sys, rank_tol=settings.rank_tol)
    watch.lap("conservativity")

    results = {
        "n": sys.n,
        "dims": {"x": sys.dim_x, "nm": sys.dim_nm, "np": sys.dim_np},
        "dissipative": scan.dissipative,
        "torus_scan": scan.model_dump(),
        "conservative": certificate.passed,
        "conservativity": certificate.model_dump(),
        "cc_dim": subspace.dim,
        "closely_connected": subspace.dim == sys.dim_x,
    }
    warnings = []
    if certificate.passed:
        blocks = block_structure(sys, tol=settings.verdict_tol, rank_tol=settings.rank_tol)
        if not blocks.passed:
            raise VerificationError("Conservative system failed its block decomposition", blocks.residuals)
        results["block_dims"] = {"minus": blocks.dims_minus, "plus": blocks.dims_plus}
        results["block_structure_passed"] = blocks.passed
        results["completely_nonunitary"] = completely_nonunitary_check(sys, tol=settings.verdict_tol,
                                                                       rank_tol=settings.rank_tol)
    elif scan.dissipative:
        warnings.append(f"dissipativity verified on {scan.samples} {scan.sampling} torus points only")
    return RunReport(command="check", inputs={args.system: file_digest(args.system)},
                     results=plain(results), warnings=warnings, timing=watch.timing)


def cmd_simulate(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Trajectory on a box and, with --energy, the per-front ledger (CSV via --csv)."""
    watch = Stopwatch()
    sys = load_system(args.system)
    inputs = {args.system: file_digest(args.system)}
    input_dim = sys.dim_np if args.conjugate else sys.dim_nm
    state_dim = sys.dim_x
    input_signal = LatticeSignal.zeros(sys.n, input_dim)
    init = LatticeSignal.zeros(sys.n, state_dim)
    if args.input:
        input_signal = load_signal(args.input)
        inputs[args.input] = file_digest(args.input)
    if args.init:
        init = load_signal(args.init)
        inputs[args.init] = file_digest(args.init)
    window = SimulationWindow(_box(args, sys.n, LatticeBox.cube(sys.n, 0, args.nmax)), args.nmax)
    watch.lap("load")

    results = {}
    warnings = []
    if args.conjugate:
        ledger = energy_balance_report(sys, init, input_signal, window, tol=settings.verdict_tol,
                                       conjugate=True, progress=args.progress)
    else:
        trajectory = simulate(sys, init, input_signal, window, progress=args.progress)
        results["states"] = trajectory.states.to_dict()
        results["outputs"] = trajectory.outputs.to_dict()
        results["contaminated"] = [list(t) for t in sorted(trajectory.contaminated)]
        if trajectory.contaminated:
            warnings.append(f"{len(trajectory.contaminated)} box points read data from outside the box")
        ledger = ledger_from_trajectory(trajectory, input_signal, tol=settings.verdict_tol) if args.energy else None
    watch.lap("simulate")

    if ledger is not None:
        frame = ledger.to_frame()
        results["ledger"] = frame.to_dict(orient="records")
        results["dissipative_consistent"] = ledger.dissipative_consistent()
        results["conservative_consistent"] = ledger.conservative_consistent()
        if args.csv:
            frame.to_csv(args.csv, index=False)
            results["csv"] = args.csv
    return RunReport(command="simulate", inputs=inputs, results=plain(results), warnings=warnings,
                     timing=watch.timing)


def cmd_transfer(args: argparse.Namespace, settings: Settings) -> RunReport:
    """theta at given or random points; Maclaurin coefficients with --coeffs."""
    watch = Stopwatch()
    sys = load_system(args.system)
    inputs = {args.system: file_digest(args.system)}
    if args.points:
        points = load_points(args.points)
        inputs[args.points] = file_digest(args.points)
    else:
        rng = np.random.default_rng(settings.seed)
        points = list(random_polydisc_points(rng, sys.n, args.grid, GRID_RADIUS))
    watch.lap("load")

    evaluations = []
    for z in points:
        if len(z) != sys.n:
            raise DomainError(f"Point {z} does not lie in C^{sys.n}")
        try:
            evaluations.append({"z": z, "value": transfer_eval(sys, z, singular_tol=settings.exact_tol)})
        except SingularityError as e:
            evaluations.append({"z": z, "error": str(e), "smallest_singular_value": e.smallest_singular_value})
    results = {"evaluations": evaluations}
    warnings = [f"{sum('error' in e for e in evaluations)} points hit a singular resolvent"] \
        if any("error" in e for e in evaluations) else []
    watch.lap("evaluate")
    if args.coeffs:
        results["coefficients"] = maclaurin_polynomial(sys, args.coeffs, prune_tol=settings.exact_tol).to_dict()
        watch.lap("coefficients")
    return RunReport(command="transfer", inputs=inputs, results=plain(results), warnings=warnings,
                     timing=watch.timing)


def cmd_realize(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Conservative realization of polynomial Agler data; --out writes the system file."""
    watch = Stopwatch()
    data = load_agler(args.agler)
    agler_residual = verify_agler_identity(data, seed=settings.seed)
    watch.lap("load")
    result = realize(data, grid_size=args.grid_size or settings.realization_grid, seed=settings.seed,
                     extra_dims=args.extra_dims, tol=settings.verdict_tol, progress=args.progress)
    watch.lap("realize")
    results = {
        "state_dim": result.state_dim,
        "agler_residual": agler_residual,
        "diagnostics": result.diagnostics.model_dump(),
    }
    if args.out:
        save_system(result.system, args.out)
        results["out"] = args.out
    else:
        results["system"] = system_to_dict(result.system)
    return RunReport(command="realize", inputs={args.agler: file_digest(args.agler)}, results=plain(results),
                     timing=watch.timing)


def _check_direction(name: str, value: int, n: int):
    if not 1 <= value <= n:
        raise DomainError(f"--{name} must lie in 1..{n}, got {value}")


def cmd_laxphillips(args: argparse.Namespace, settings: Settings) -> RunReport:
    """Residual reports of the Lax-Phillips generators on a truncation box."""
    watch = Stopwatch()
    sys = load_system(args.system)
    box = _box(args, sys.n, default_box(sys.n))
    _check_direction("k", args.k, sys.n)
    if args.j is not None:
        _check_direction("j", args.j, sys.n)
    watch.lap("load")

    results = {"op": args.op, "box": box.to_dict()}
    warnings = []
    match args.op:
        case "generator":
            rng = np.random.default_rng(settings.seed)
            h = random_interior_vector(rng, box, space_dims(sys))
            image, dirty = apply_generator(sys, args.k, h)
            results.update(k=args.k, norm_in=h.norm(), norm_out=image.norm(),
                           ratio=image.norm() / h.norm() if h.norm() else None, contaminated=len(dirty))
        case "adjoint":
            results.update(
                k=args.k,
                adjointness=adjointness_residual(sys, args.k, args.trials, box, settings.seed),
                conjugacy=conjugacy_residual(sys, args.k, args.trials, box, settings.seed))
        case "commute":
            pairs = [(args.k, args.j)] if args.j is not None else \
                [(k, j) for k in range(1, sys.n + 1) for j in range(k + 1, sys.n + 1)]
            residuals = {f"{k},{j}": commutation_residual(sys, k, j, args.trials, box, settings.seed, args.progress)
                         for k, j in pairs}
            results.update(residuals=residuals, max_residual=max(residuals.values(), default=0.0))
        case "metric":
            report = metric_check(sys, args.trials, box, tol=settings.verdict_tol, seed=settings.seed,
                                  progress=args.progress)
            results.update(report.model_dump())
            if not report.consistent:
                warnings.append(f"generator norms disagree with the {report.classification} classification")
    watch.lap(args.op)
    return RunReport(command="laxphillips", inputs={args.system: file_digest(args.system)},
                     results=plain(results), warnings=warnings, timing=watch.timing)


COMMANDS = {
    "check": cmd_check,
    "simulate": cmd_simulate,
    "transfer": cmd_transfer,
    "realize": cmd_realize,
    "laxphillips": cmd_laxphillips,
}
