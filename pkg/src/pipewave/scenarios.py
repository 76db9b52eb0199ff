"""Boundary laws, steady-state construction and complete run scenarios.

Boundary conditions are applied through ghost cells.  A ghost carries the
same bottom elevation as its adjacent interior cell, so the boundary
interface sees no topography jump and the condition reduces to choosing the
ghost (A, Q):

* reservoir with fixed total head: A from inverting the head with the
  interior velocity, Q = A * u_interior;
* prescribed discharge (e.g. a closing valve): Q from the law at the current
  time, A copied from the interior;
* wall: mirror state with negated discharge;
* periodic: the opposite end's interior cell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .core import (FrictionParams, Mesh, PhysicalConstants, PipeGeometry,
                   SolverError, State, area_from_piezometric_head)

_MAX_STEADY_ITERS = 100


@dataclass(frozen=True)
class ReservoirHead:
    """Constant total head (m): velocity head + piezometric line."""

    total_head: float


@dataclass(frozen=True)
class PrescribedDischarge:
    """Discharge imposed by a time law Q(t)."""

    law: Callable[[float], float]


@dataclass(frozen=True)
class Wall:
    pass


@dataclass(frozen=True)
class Periodic:
    pass


BoundaryCondition = ReservoirHead | PrescribedDischarge | Wall | Periodic


def valve_closure_law(t, q0, t_close):
    """Linear ramp from q0 at t=0 to exactly 0 at t_close, 0 afterwards."""
    if t_close <= 0:
        raise ValueError("closure time must be positive")
    if t >= t_close:
        return 0.0
    return q0 * (1.0 - t / t_close)


@dataclass(frozen=True)
class ValveClosure:
    """Declarative closure law; ``kind`` selects the ramp shape.

    linear:  q0 * (1 - t/t_close)
    cosine:  q0 * (1 + cos(pi t/t_close)) / 2
    instant: 0 for all t >= 0
    """

    q0: float
    t_close: float
    kind: str = "linear"

    def __post_init__(self):
        if self.kind not in ("linear", "cosine", "instant"):
            raise ValueError(f"unknown closure law {self.kind!r}")
        if self.kind != "instant" and self.t_close <= 0:
            raise ValueError("closure time must be positive")

    def __call__(self, t):
        if self.kind == "instant" or t >= self.t_close:
            return 0.0
        if self.kind == "cosine":
            return self.q0 * 0.5 * (1.0 + math.cos(math.pi * t / self.t_close))
        return valve_closure_law(t, self.q0, self.t_close)


@dataclass(frozen=True)
class Scenario:
    """Everything needed to reproduce one transient run."""

    geometry: PipeGeometry
    constants: PhysicalConstants
    friction: FrictionParams
    mesh_cells: int
    upstream: BoundaryCondition
    downstream: BoundaryCondition
    initial_discharge: float
    t_end: float
    output_stride: int = 1
    probes: tuple = ()

    def __post_init__(self):
        if self.mesh_cells < 2:
            raise ValueError("need at least two cells")
        if self.t_end < 0:
            raise ValueError("t_end must be non-negative")
        if self.output_stride < 1:
            raise ValueError("output stride must be >= 1")
        if isinstance(self.upstream, Periodic) != isinstance(self.downstream, Periodic):
            raise ValueError("periodic boundaries must be used on both sides or neither")
        for x in self.probes:
            if not 0.0 <= x <= self.geometry.length:
                raise ValueError(f"probe at x={x} outside the pipe [0, {self.geometry.length}]")
        for side, x_end in ((self.upstream, 0.0), (self.downstream, self.geometry.length)):
            if isinstance(side, ReservoirHead):
                crown = float(self.geometry.altitude(x_end)) + self.geometry.diameter
                if side.total_head <= crown:
                    raise ValueError(
                        f"reservoir head {side.total_head} m does not cover the pipe "
                        f"crown {crown:.6g} m at x={x_end}")

    def mesh(self):
        return Mesh.uniform(self.geometry.length, self.mesh_cells, self.geometry.altitude)


def _inlet_area(head, q0, z, geometry, c, g):
    """Area at a reservoir end: piezometric head plus velocity head equals the
    reservoir head.  Fixed point on the (tiny) velocity-head correction."""
    area = geometry.section
    for _ in range(_MAX_STEADY_ITERS):
        u = q0 / area
        try:
            new = area_from_piezometric_head(head - 0.5 * u * u / g, geometry.section,
                                             z, geometry.diameter, c, g)
        except ValueError as exc:
            raise SolverError(str(exc)) from exc
        if abs(new - area) <= 1e-14 * area:
            return float(new)
        area = float(new)
    raise SolverError("reservoir head inversion did not converge")


def steady_head_constant(scenario: Scenario):
    """Total-head constant u^2/2 + g z + c^2 ln A (m^2/s^2) of the steady
    state anchored by the upstream reservoir."""
    if not isinstance(scenario.upstream, ReservoirHead):
        raise ValueError("the steady-state initializer needs an upstream reservoir head")
    geom = scenario.geometry
    c = scenario.constants.c
    g = scenario.constants.g
    q0 = scenario.initial_discharge
    z_inlet = float(geom.altitude(0.0))
    a_inlet = _inlet_area(scenario.upstream.total_head, q0, z_inlet, geom, c, g)
    return 0.5 * (q0 / a_inlet) ** 2 + g * z_inlet + c * c * math.log(a_inlet)


def steady_state_init(scenario: Scenario, mesh: Mesh) -> State:
    """Smooth steady state: Q = Q0 everywhere and the total head
    u^2/2 + g Z + c^2 ln A equal across cells, anchored by the upstream
    reservoir head.

    Solved per cell by the contraction A <- exp((C2 - g Z - (Q0/A)^2/2)/c^2);
    at pressurized regimes Q0/(A c) << 1 so a handful of iterations reach
    relative 1e-12.  The profile ignores friction (a friction-enabled run
    simply starts from the frictionless equilibrium).
    """
    head_const = steady_head_constant(scenario)
    area = solve_area_profile(mesh.z_cells, scenario.initial_discharge, head_const,
                              scenario.constants.c, scenario.constants.g,
                              start=scenario.geometry.section)
    return State(area=area, discharge=np.full(mesh.n, float(scenario.initial_discharge)),
                 time=0.0)


def solve_area_profile(z_values, q0, head_const, c, g, start):
    """Per-point A solving u^2/2 + g z + c^2 ln A = head_const at fixed
    discharge q0, by the fixed-point iteration started from ``start``."""
    z_values = np.asarray(z_values, dtype=float)
    area = np.full(z_values.shape, float(start))
    for _ in range(_MAX_STEADY_ITERS):
        u = q0 / area
        new = np.exp((head_const - g * z_values - 0.5 * u * u) / (c * c))
        if np.any(~np.isfinite(new)) or np.any(new <= 0):
            raise SolverError("steady-state iteration left the positive domain")
        if np.all(np.abs(new - area) <= 1e-12 * area):
            return new
        area = new
    raise SolverError(f"steady state not converged in {_MAX_STEADY_ITERS} iterations")


def ghost_states(state: State, mesh: Mesh, upstream: BoundaryCondition,
                 downstream: BoundaryCondition, t, c, g,
                 geometry: PipeGeometry | None = None):
    """Ghost (A, Q) pairs for both ends at time t."""

    def one_side(bc, interior_idx, opposite_idx, z_ghost):
        a_in = float(state.area[interior_idx])
        q_in = float(state.discharge[interior_idx])
        if isinstance(bc, Wall):
            return a_in, -q_in
        if isinstance(bc, Periodic):
            return float(state.area[opposite_idx]), float(state.discharge[opposite_idx])
        if isinstance(bc, PrescribedDischarge):
            return a_in, float(bc.law(t))
        if isinstance(bc, ReservoirHead):
            if geometry is None:
                raise ValueError("a reservoir boundary needs the pipe geometry")
            u = q_in / a_in
            try:
                a_ghost = float(area_from_piezometric_head(
                    bc.total_head - 0.5 * u * u / g, geometry.section, z_ghost,
                    geometry.diameter, c, g))
            except ValueError as exc:
                raise SolverError(str(exc)) from exc
            return a_ghost, a_ghost * u
        raise TypeError(f"unsupported boundary condition {bc!r}")

    left = one_side(upstream, 0, -1, float(mesh.z_cells[0]))
    right = one_side(downstream, -1, 0, float(mesh.z_cells[-1]))
    return left, right


def boundary_provider(scenario: Scenario, mesh: Mesh):
    """Ghost-state callable for :func:`pipewave.kinetic.step` /
    :func:`pipewave.kinetic.run`, closing over the scenario boundaries."""

    def provider(state: State):
        return ghost_states(state, mesh, scenario.upstream, scenario.downstream,
                            state.time, scenario.constants.c, scenario.constants.g,
                            scenario.geometry)

    return provider
