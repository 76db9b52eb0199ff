"""Drive complete runs from a RunConfig: solver marches, probe series,
snapshot frames, summaries and the kinetic-vs-MOC comparison."""

from __future__ import annotations

import time as _time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kinetic, moc
from .compare import ComparisonReport, ProbeSeries, compare_series
from .config import RunConfig
from .core import State, area_from_piezometric_head, piezometric_head
from .output import PROBE_HEADER, SNAPSHOT_HEADER, frame_rows, write_rows_csv
from .scenarios import (PrescribedDischarge, Scenario, ValveClosure,
                        boundary_provider, steady_state_init)


@dataclass
class SolverOutput:
    """In-memory result of one solver's run."""

    label: str
    probes: list                 # list[ProbeSeries]
    steps: int
    wall_clock_s: float
    min_area: float
    max_area: float
    final_mass: float
    final_time: float
    cells: int


def _probe_points(scenario: Scenario):
    xs = np.asarray(scenario.probes, dtype=float)
    zs = np.asarray(scenario.geometry.altitude(xs), dtype=float)
    return xs, zs


def _run_kinetic(config: RunConfig, out_dir: Path | None):
    scenario = config.scenario
    geom = scenario.geometry
    c = scenario.constants.c
    g = scenario.constants.g
    mesh = scenario.mesh()
    state = steady_state_init(scenario, mesh)
    boundary = boundary_provider(scenario, mesh)
    params = kinetic.KineticParams(cfl=config.cfl)

    probe_x, probe_z = _probe_points(scenario)
    times = [state.time]
    probe_area = [np.interp(probe_x, mesh.centers, state.area)]
    probe_q = [np.interp(probe_x, mesh.centers, state.discharge)]
    snapshots = [(0, state)]
    min_area = float(state.area.min())
    max_area = float(state.area.max())
    counter = [0]

    def observer(new_state: State):
        counter[0] += 1
        nonlocal min_area, max_area
        min_area = min(min_area, float(new_state.area.min()))
        max_area = max(max_area, float(new_state.area.max()))
        final = new_state.time >= scenario.t_end
        if counter[0] % scenario.output_stride == 0 or final:
            times.append(new_state.time)
            probe_area.append(np.interp(probe_x, mesh.centers, new_state.area))
            probe_q.append(np.interp(probe_x, mesh.centers, new_state.discharge))
        if final or (config.snapshot_stride > 0
                     and counter[0] % config.snapshot_stride == 0):
            snapshots.append((counter[0], new_state))

    started = _time.perf_counter()
    final_state = kinetic.run(state, mesh, params, scenario.constants,
                              scenario.friction, boundary, scenario.t_end,
                              observer=observer, geometry=geom)
    elapsed = _time.perf_counter() - started

    probes = []
    t = np.asarray(times)
    for k, x in enumerate(probe_x):
        area_k = np.array([row[k] for row in probe_area])
        q_k = np.array([row[k] for row in probe_q])
        head = piezometric_head(area_k, geom.section, probe_z[k], geom.diameter, c, g)
        probes.append(ProbeSeries(x=float(x), t=t, head=head, discharge=q_k))

    if out_dir is not None:
        for k, series in enumerate(probes):
            area_k = np.array([row[k] for row in probe_area])
            rows = frame_rows(series.t, area_k, series.discharge, geom.section,
                              probe_z[k], geom.diameter, c, g)
            write_rows_csv(out_dir / f"kinetic_probe_{k:02d}.csv", PROBE_HEADER, rows)
        for step_no, snap in snapshots:
            rows = frame_rows(mesh.centers, snap.area, snap.discharge,
                              geom.section, mesh.z_cells, geom.diameter, c, g)
            write_rows_csv(out_dir / f"kinetic_snap_{step_no:08d}.csv",
                           SNAPSHOT_HEADER, rows)

    summary = SolverOutput(
        label="kinetic", probes=probes, steps=counter[0], wall_clock_s=elapsed,
        min_area=min_area, max_area=max_area,
        final_mass=float(np.sum(mesh.widths * final_state.area)),
        final_time=final_state.time, cells=mesh.n)
    return summary


def _run_moc(config: RunConfig, out_dir: Path | None):
    scenario = config.scenario
    geom = scenario.geometry
    c = scenario.constants.c
    g = scenario.constants.g

    started = _time.perf_counter()
    frames = moc.moc_run(scenario)
    elapsed = _time.perf_counter() - started

    node_count = frames[0].head.size
    x_nodes = np.linspace(0.0, geom.length, node_count)
    z_nodes = np.asarray(geom.altitude(x_nodes), dtype=float)
    probe_x, probe_z = _probe_points(scenario)

    t = np.array([f.time for f in frames])
    probes = []
    per_probe_area = []
    for k, x in enumerate(probe_x):
        head = np.array([np.interp(x, x_nodes, f.head) for f in frames])
        q = np.array([np.interp(x, x_nodes, f.discharge) for f in frames])
        area = area_from_piezometric_head(head, geom.section, probe_z[k],
                                          geom.diameter, c, g)
        per_probe_area.append(area)
        probes.append(ProbeSeries(x=float(x), t=t, head=head, discharge=q))

    min_area = np.inf
    max_area = -np.inf
    for f in frames:
        area = area_from_piezometric_head(f.head, geom.section, z_nodes,
                                          geom.diameter, c, g)
        min_area = min(min_area, float(area.min()))
        max_area = max(max_area, float(area.max()))

    if out_dir is not None:
        for k, series in enumerate(probes):
            rows = frame_rows(series.t, per_probe_area[k], series.discharge,
                              geom.section, probe_z[k], geom.diameter, c, g)
            write_rows_csv(out_dir / f"moc_probe_{k:02d}.csv", PROBE_HEADER, rows)
        for tag, f in (("first", frames[0]), ("last", frames[-1])):
            area = area_from_piezometric_head(f.head, geom.section, z_nodes,
                                              geom.diameter, c, g)
            rows = frame_rows(x_nodes, area, f.discharge, geom.section, z_nodes,
                              geom.diameter, c, g)
            write_rows_csv(out_dir / f"moc_snap_{tag}.csv", SNAPSHOT_HEADER, rows)

    final_area = area_from_piezometric_head(frames[-1].head, geom.section, z_nodes,
                                            geom.diameter, c, g)
    dx = x_nodes[1] - x_nodes[0]
    summary = SolverOutput(
        label="moc", probes=probes, steps=len(frames) - 1, wall_clock_s=elapsed,
        min_area=min_area, max_area=max_area,
        final_mass=float(np.trapezoid(final_area, dx=dx)),
        final_time=float(t[-1]), cells=node_count)
    return summary


def _write_summary(out_dir: Path, result: SolverOutput):
    lines = [
        f"solver: {result.label}",
        f"cells: {result.cells}",
        f"steps: {result.steps}",
        f"wall_clock_s: {result.wall_clock_s:.3f}",
        f"min_area_m2: {result.min_area!r}",
        f"max_area_m2: {result.max_area!r}",
        f"final_mass_m3: {result.final_mass!r}",
        f"final_time_s: {result.final_time!r}",
    ]
    (out_dir / f"{result.label}_summary.txt").write_text("\n".join(lines) + "\n")


def run_simulation(config: RunConfig, write_files=True):
    """Run the configured solver(s); returns {label: SolverOutput}."""
    out_dir = Path(config.output_dir) if write_files else None
    if out_dir is not None:
        out_dir.mkdir(parents=True, exist_ok=True)
    results = {}
    if config.solver in ("kinetic", "both"):
        results["kinetic"] = _run_kinetic(config, out_dir)
    if config.solver in ("moc", "both"):
        results["moc"] = _run_moc(config, out_dir)
    if out_dir is not None:
        for result in results.values():
            _write_summary(out_dir, result)
    return results


def closure_end_time(scenario: Scenario):
    law = scenario.downstream.law if isinstance(scenario.downstream, PrescribedDischarge) else None
    if isinstance(law, ValveClosure) and law.kind != "instant":
        return law.t_close
    return 0.0


def compare_runs(config: RunConfig, write_files=True):
    """Run both solvers and compare them probe by probe."""
    config = RunConfig(scenario=config.scenario, solver="both",
                       output_dir=config.output_dir, cfl=config.cfl,
                       snapshot_stride=config.snapshot_stride)
    results = run_simulation(config, write_files=write_files)
    t_close = closure_end_time(config.scenario)
    reports = []
    for kin_series, moc_series in zip(results["kinetic"].probes,
                                      results["moc"].probes):
        reports.append(compare_series(kin_series, moc_series, closure_time=t_close))
    return results, reports


def format_report(report: ComparisonReport):
    def num(v):
        return "n/a" if v is None else f"{v:.6g}"

    return "\n".join([
        f"probe_x_m: {report.probe_x:.6g}",
        f"linf_head_error_m: {num(report.linf_head_error)}",
        f"l2_head_error_m: {num(report.l2_head_error)}",
        f"linf_discharge_error_m3s: {num(report.linf_discharge_error)}",
        f"kinetic_period_s: {num(report.kinetic_period)}",
        f"moc_period_s: {num(report.moc_period)}",
        f"first_peak_kinetic_m: {num(report.first_peak_kinetic)}",
        f"first_peak_moc_m: {num(report.first_peak_moc)}",
    ])
