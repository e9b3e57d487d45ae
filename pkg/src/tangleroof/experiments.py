"""Reproducible experiment drivers: grid sweeps of the thermal tangle,
optimal-field searches, power-law fits and the oracle validation report.

Every grid point derives its own optimizer seed from (base seed, point
index), so results are deterministic for a fixed configuration no matter
how many workers execute the grid; rows are emitted in grid order.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .config import SweepConfig
from .convexroof import ConvexRoofResult, OptimizerOptions, minimize
from .measures import THREE_TANGLE, tangle_pure
from .oracles import OracleCase, oracle_suite
from .spinring import (
    RADIAL,
    FieldKind,
    SpinRingParams,
    build_hamiltonian,
    ghz_minus,
    ghz_plus,
    ground_tangle_closed_form,
    spectrum,
    thermal_state,
    w_conditions,
    w_state,
    w_state_flipped,
)

LOW_TAU_CUTOFF = 1e-5

VALIDATE_OPTIONS = OptimizerOptions(restarts=8, convergence_tol=1e-9, max_iterations=1500)

SWEEP_COLUMNS = (
    "temperature",
    "b",
    "jxy",
    "jz",
    "field",
    "tau",
    "splitting_01",
    "ground_degeneracy",
    "converged",
    "restart_spread",
    "low_tau",
)

OPTIMAL_FIELD_COLUMNS = (
    "temperature",
    "jxy",
    "jz",
    "b_opt",
    "tau_max",
    "one_minus_tau_max",
    "converged",
)

VALIDATION_COLUMNS = ("label", "family", "expected", "value", "error", "tolerance", "ok")


@dataclass(frozen=True)
class SweepRecord:
    temperature: float
    b: float
    jxy: float
    jz: float
    field_kind: str
    tau: float
    splitting_01: float
    ground_degeneracy: int
    converged: bool
    restart_spread: float
    low_tau: bool


@dataclass(frozen=True)
class OptimalFieldResult:
    temperature: float
    jxy: float
    jz: float
    b_opt: float
    tau_max: float
    converged: bool
    evaluations: int


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    prefactor: float
    residual: float
    n_points: int


@dataclass(frozen=True)
class ValidationRow:
    label: str
    family: str
    expected: float
    value: float
    error: float
    tolerance: float
    ok: bool


def format_value(value) -> str:
    """CSV cell: floats at 17 significant digits, bools as 1/0."""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.17g" % value
    return str(value)


def point_seed(base_seed: int, index: int) -> int:
    """Stable per-grid-point optimizer seed."""
    return int(np.random.SeedSequence((base_seed, index)).generate_state(1, np.uint64)[0])


def compute_sweep_point(
    jxy: float,
    jz: float,
    field: FieldKind,
    b: float,
    temperature: float,
    opts: OptimizerOptions,
) -> SweepRecord:
    """Thermal state of one model point and its roof tangle."""
    params = SpinRingParams(jxy=jxy, jz=jz, field=field, b=b, temperature=temperature)
    h = build_hamiltonian(params)
    report = spectrum(h)
    rho = thermal_state(h, temperature)
    result = minimize(rho, THREE_TANGLE, opts)
    spread = float(result.restart_values.max() - result.restart_values.min())
    return SweepRecord(
        temperature=temperature,
        b=b,
        jxy=jxy,
        jz=jz,
        field_kind=field.kind,
        tau=result.value,
        splitting_01=report.splitting_01,
        ground_degeneracy=report.ground_degeneracy,
        converged=result.converged,
        restart_spread=spread,
        low_tau=result.value < LOW_TAU_CUTOFF,
    )


def _sweep_task(args) -> SweepRecord:
    return compute_sweep_point(*args)


def sweep_tasks(config: SweepConfig) -> list[tuple]:
    """Grid-ordered argument tuples: ratios (outer), then T, then b."""
    if config.b_grid is None or config.t_grid is None:
        raise ValueError("sweep needs both b_grid and t_grid")
    if config.ratios is not None:
        models = [(float(r) * config.jz, config.jz) for r in config.ratios]
    else:
        models = [(config.jxy, config.jz)]
    base = config.optimizer.seed
    tasks = []
    index = 0
    for jxy, jz in models:
        for t in config.t_grid:
            for b in config.b_grid:
                opts = replace(config.optimizer, seed=point_seed(base, index))
                tasks.append((jxy, jz, config.field, float(b), float(t), opts))
                index += 1
    return tasks


def iter_sweep(config: SweepConfig, workers: int = 1):
    """Yield SweepRecords in grid order, optionally from a process pool."""
    tasks = sweep_tasks(config)
    if workers <= 1:
        for args in tasks:
            yield _sweep_task(args)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(_sweep_task, tasks, chunksize=1)


def sweep_row(record: SweepRecord) -> str:
    return ",".join(
        format_value(v)
        for v in (
            record.temperature,
            record.b,
            record.jxy,
            record.jz,
            record.field_kind,
            record.tau,
            record.splitting_01,
            record.ground_degeneracy,
            record.converged,
            record.restart_spread,
            record.low_tau,
        )
    )


_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


def optimal_field(
    jxy: float,
    jz: float,
    field: FieldKind,
    temperature: float,
    window: tuple[float, float],
    opts: OptimizerOptions,
    b_rtol: float = 1e-3,
) -> OptimalFieldResult:
    """Golden-section maximization of tau over b in the window.

    Every evaluation reuses the same optimizer options (including the
    seed), so the scanned function is deterministic; the returned b_opt
    is the best evaluated point.
    """
    lo, hi = window
    if not 0.0 < lo < hi:
        raise ValueError(f"window ({lo}, {hi}) must satisfy 0 < lo < hi")
    evaluated: dict[float, SweepRecord] = {}

    def tau_at(b: float) -> float:
        rec = compute_sweep_point(jxy, jz, field, b, temperature, opts)
        evaluated[b] = rec
        return rec.tau

    a, b_hi = lo, hi
    width = b_hi - a
    c = b_hi - _GOLDEN * width
    d = a + _GOLDEN * width
    fc, fd = tau_at(c), tau_at(d)
    while (b_hi - a) > b_rtol * max(abs(a), abs(b_hi)):
        if fc >= fd:
            b_hi, d, fd = d, c, fc
            c = b_hi - _GOLDEN * (b_hi - a)
            fc = tau_at(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b_hi - a)
            fd = tau_at(d)
    best_b = max(evaluated, key=lambda key: evaluated[key].tau)
    best = evaluated[best_b]
    return OptimalFieldResult(
        temperature=temperature,
        jxy=jxy,
        jz=jz,
        b_opt=best_b,
        tau_max=best.tau,
        converged=best.converged,
        evaluations=len(evaluated),
    )


def optimal_field_tasks(config: SweepConfig) -> list[tuple]:
    """(jxy, jz, temperature) combinations for the optimal-field command."""
    if config.b_window is None:
        raise ValueError("optimal-field needs b_window")
    if config.t_grid is not None:
        temps = [float(t) for t in config.t_grid]
    elif config.temperature > 0.0:
        temps = [config.temperature]
    else:
        raise ValueError("optimal-field needs t_grid or a positive temperature")
    if config.ratios is not None:
        models = [(float(r) * config.jz, config.jz) for r in config.ratios]
    else:
        models = [(config.jxy, config.jz)]
    return [(jxy, jz, t) for jxy, jz in models for t in temps]


def _optimal_field_task(args) -> OptimalFieldResult:
    jxy, jz, field, temperature, window, opts, rtol = args
    return optimal_field(jxy, jz, field, temperature, window, opts, rtol)


def iter_optimal_field(config: SweepConfig, workers: int = 1, b_rtol: float = 1e-3):
    tasks = [
        (jxy, jz, config.field, t, config.b_window, config.optimizer, b_rtol)
        for jxy, jz, t in optimal_field_tasks(config)
    ]
    if workers <= 1:
        for args in tasks:
            yield _optimal_field_task(args)
    else:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            yield from ex.map(_optimal_field_task, tasks, chunksize=1)


def optimal_field_row(result: OptimalFieldResult) -> str:
    return ",".join(
        format_value(v)
        for v in (
            result.temperature,
            result.jxy,
            result.jz,
            result.b_opt,
            result.tau_max,
            1.0 - result.tau_max,
            result.converged,
        )
    )


def fit_power_law(x, y) -> PowerLawFit:
    """Least-squares line in log10-log10 coordinates; exponent = slope."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size != y.size or x.size < 3:
        raise ValueError("power-law fit needs at least 3 (x, y) pairs")
    if np.any(x <= 0.0) or np.any(y <= 0.0):
        raise ValueError("power-law fit needs strictly positive data")
    lx, ly = np.log10(x), np.log10(y)
    slope, intercept = np.polyfit(lx, ly, 1)
    residual = float(np.sqrt(np.mean((ly - (slope * lx + intercept)) ** 2)))
    return PowerLawFit(
        exponent=float(slope),
        prefactor=float(10.0**intercept),
        residual=residual,
        n_points=int(x.size),
    )


def validation_family(label: str) -> str:
    if label.startswith("ghz_w_mixture"):
        return "ghz_w_mixture"
    if label.startswith("isotropic_eof_d=2"):
        return "isotropic_eof_d2"
    if label.startswith("isotropic_eof_d=3"):
        return "isotropic_eof_d3"
    if label.startswith("pure_"):
        return "pure_identity"
    return "ring_ground_tangle"


def _validate_case(args) -> ValidationRow:
    case, opts = args
    result: ConvexRoofResult = minimize(case.state, case.measure, opts)
    error = result.value - case.expected
    return ValidationRow(
        label=case.label,
        family=validation_family(case.label),
        expected=case.expected,
        value=result.value,
        error=error,
        tolerance=case.tolerance,
        ok=abs(error) <= case.tolerance,
    )


def run_validation(
    opts: OptimizerOptions | None = None,
    workers: int = 1,
    cases: list[OracleCase] | None = None,
) -> list[ValidationRow]:
    """Run the oracle suite through minimize; rows in suite order."""
    if opts is None:
        opts = VALIDATE_OPTIONS
    if cases is None:
        cases = oracle_suite()
    tasks = [(case, replace(opts, seed=point_seed(opts.seed, i))) for i, case in enumerate(cases)]
    if workers <= 1:
        return [_validate_case(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(_validate_case, tasks, chunksize=1))


def validation_row(row: ValidationRow) -> str:
    return ",".join(
        format_value(v)
        for v in (row.label, row.family, row.expected, row.value, row.error, row.tolerance, row.ok)
    )


def family_summary(rows: list[ValidationRow]) -> list[tuple[str, float, float, bool]]:
    """(family, max abs error, tolerance, ok) in first-appearance order."""
    order: list[str] = []
    worst: dict[str, float] = {}
    tol: dict[str, float] = {}
    ok: dict[str, bool] = {}
    for row in rows:
        if row.family not in worst:
            order.append(row.family)
            worst[row.family] = 0.0
            tol[row.family] = row.tolerance
            ok[row.family] = True
        worst[row.family] = max(worst[row.family], abs(row.error))
        tol[row.family] = max(tol[row.family], row.tolerance)
        ok[row.family] = ok[row.family] and row.ok
    return [(f, worst[f], tol[f], ok[f]) for f in order]


def ground_state_report(params: SpinRingParams) -> str:
    """Text report: spectrum, ground-state amplitudes, tangle, fidelities."""
    h = build_hamiltonian(params)
    report = spectrum(h)
    from .linalg import eigh

    gs = eigh(h).eigenvectors[:, 0]
    lines = [
        f"model: jxy = {params.jxy:g}, jz = {params.jz:g}, "
        f"field = {params.field.kind}, b = {params.b:g}",
        "energies: " + " ".join("%.12g" % e for e in report.energies),
        f"ground_degeneracy: {report.ground_degeneracy}",
        f"splitting_01: {report.splitting_01:.12g}",
    ]
    if report.ground_degeneracy > 1:
        lines.append("note: ground space is degenerate; amplitudes below are one eigenvector")
    amps = " ".join(
        "(%.10g%+.10gj)" % (a.real, a.imag) for a in gs
    )
    lines.append(f"ground_state_amplitudes: {amps}")
    lines.append(f"tangle_pure: {tangle_pure(gs):.12g}")
    for name, ref in (
        ("ghz_plus", ghz_plus()),
        ("ghz_minus", ghz_minus()),
        ("w_state", w_state()),
        ("w_state_flipped", w_state_flipped()),
    ):
        fid = float(np.abs(np.vdot(ref, gs)) ** 2)
        lines.append(f"fidelity_{name}: {fid:.12g}")
    cond = w_conditions(params.jxy, params.jz)
    if cond is not None:
        lines.append(f"w_regime: b_opt = {cond.b_opt:.12g}, delta_e_opt = {cond.delta_e_opt:.12g}")
    isotropic_radial = (
        params.field.kind == RADIAL.kind
        and params.jxy == params.jz
        and params.jxy > 0.0
        and params.b > 0.0
    )
    if isotropic_radial:
        bj = params.b / params.jxy
        closed = ground_tangle_closed_form(bj)
        diff = abs(tangle_pure(gs) - closed)
        lines.append(f"closed_form_tangle: {closed:.12g}")
        lines.append(f"closed_form_difference: {diff:.3e}")
    return "\n".join(lines)
