"""Fixed-grid method-of-characteristics solver for classical water hammer.

Reference solver for the linearized transient pair

    dH/dt + a^2/(g S) dQ/dx = 0
    dQ/dt + g S dH/dx        = -g S S_f

with constant wave speed a, marched at unit Courant number (dt = dx/a) so the
characteristics land exactly on grid nodes.  Along dx/dt = +a the invariant
H + B Q (B = a/(g S)) is carried, along dx/dt = -a the invariant H - B Q;
friction enters as the head loss S_f * dx accumulated over one step.
Boundary nodes combine the single available invariant with the boundary law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import (FrictionParams, PipeGeometry, SolverError, friction_slope,
                   piezometric_head)
from .scenarios import (PrescribedDischarge, ReservoirHead, Scenario, Wall,
                        solve_area_profile, steady_head_constant)


@dataclass(frozen=True)
class MocState:
    """Piezometric heads and discharges at the grid nodes."""

    head: np.ndarray
    discharge: np.ndarray
    wave_speed: float
    node_spacing: float
    time: float = 0.0

    def __post_init__(self):
        head = np.array(self.head, dtype=float)
        discharge = np.array(self.discharge, dtype=float)
        if head.ndim != 1 or head.shape != discharge.shape or head.size < 2:
            raise ValueError("head and discharge must be 1-d arrays with >= 2 nodes")
        if self.wave_speed <= 0 or self.node_spacing <= 0:
            raise ValueError("wave speed and node spacing must be positive")
        head.setflags(write=False)
        discharge.setflags(write=False)
        object.__setattr__(self, "head", head)
        object.__setattr__(self, "discharge", discharge)

    @property
    def dt(self):
        """Unit-Courant time step dx/a, fixed by construction."""
        return self.node_spacing / self.wave_speed

    @property
    def n(self):
        return self.head.size


def moc_step(state: MocState, g, section, friction: FrictionParams,
             upstream, downstream, geometry: PipeGeometry | None = None) -> MocState:
    """Advance one unit-Courant step.

    Interior nodes take the average of the two characteristic invariants;
    each end solves its boundary law against the one invariant reaching it.
    """
    h = state.head
    q = state.discharge
    b = state.wave_speed / (g * section)
    dx = state.node_spacing
    t_new = state.time + state.dt

    if friction.enabled:
        if geometry is None:
            raise ValueError("friction needs the pipe geometry for the hydraulic radius")
        sf = friction_slope(q / section, geometry, friction)
    else:
        sf = np.zeros_like(q)

    # invariants carried toward a node from its left (cp) and right (cm)
    cp = h + b * q - dx * sf
    cm = h - b * q + dx * sf

    h_new = np.empty_like(h)
    q_new = np.empty_like(q)
    h_new[1:-1] = 0.5 * (cp[:-2] + cm[2:])
    q_new[1:-1] = 0.5 * (cp[:-2] - cm[2:]) / b

    alpha = 1.0 / (2.0 * g * section * section)   # velocity-head coefficient

    # upstream node: only cm arrives (from node 1)
    cm0 = cm[1]
    if isinstance(upstream, ReservoirHead):
        # total head: H + Q^2/(2 g S^2) = H0 together with H = cm0 + B Q
        disc = b * b - 4.0 * alpha * (cm0 - upstream.total_head)
        if disc < 0:
            raise SolverError("upstream reservoir law unsolvable (head below the line)")
        q_new[0] = (-b + math.sqrt(disc)) / (2.0 * alpha)
        h_new[0] = cm0 + b * q_new[0]
    elif isinstance(upstream, PrescribedDischarge):
        q_new[0] = upstream.law(t_new)
        h_new[0] = cm0 + b * q_new[0]
    elif isinstance(upstream, Wall):
        q_new[0] = 0.0
        h_new[0] = cm0
    else:
        raise TypeError(f"unsupported upstream boundary {upstream!r}")

    # downstream node: only cp arrives (from node n-2)
    cpn = cp[-2]
    if isinstance(downstream, ReservoirHead):
        disc = b * b - 4.0 * alpha * (cpn - downstream.total_head)
        if disc < 0:
            raise SolverError("downstream reservoir law unsolvable (head below the line)")
        q_new[-1] = (b - math.sqrt(disc)) / (2.0 * alpha)
        h_new[-1] = cpn - b * q_new[-1]
    elif isinstance(downstream, PrescribedDischarge):
        q_new[-1] = downstream.law(t_new)
        h_new[-1] = cpn - b * q_new[-1]
    elif isinstance(downstream, Wall):
        q_new[-1] = 0.0
        h_new[-1] = cpn
    else:
        raise TypeError(f"unsupported downstream boundary {downstream!r}")

    return MocState(head=h_new, discharge=q_new, wave_speed=state.wave_speed,
                    node_spacing=dx, time=t_new)


@dataclass(frozen=True)
class MocFrame:
    time: float
    head: np.ndarray
    discharge: np.ndarray


def initial_moc_state(scenario: Scenario, node_count):
    """Steady state on the node grid: the same constant-total-head profile as
    the finite-volume initializer, expressed as a piezometric line."""
    geom = scenario.geometry
    c = scenario.constants.c
    g = scenario.constants.g
    q0 = scenario.initial_discharge

    x = np.linspace(0.0, geom.length, node_count)
    z = np.asarray(geom.altitude(x), dtype=float)
    head_const = steady_head_constant(scenario)
    area = solve_area_profile(z, q0, head_const, c, g, start=geom.section)
    head = piezometric_head(area, geom.section, z, geom.diameter, c, g)
    return MocState(head=head, discharge=np.full(node_count, float(q0)),
                    wave_speed=c, node_spacing=float(x[1] - x[0]), time=0.0)


def moc_run(scenario: Scenario, node_count=None):
    """March the scenario to t_end, recording every ``output_stride``-th step
    (plus the initial and final states).  Returns a list of MocFrame."""
    if node_count is None:
        node_count = scenario.mesh_cells + 1   # nodes at the cell interfaces
    for bc in (scenario.upstream, scenario.downstream):
        if not isinstance(bc, (ReservoirHead, PrescribedDischarge, Wall)):
            raise ValueError("the characteristics solver needs reservoir, "
                             "discharge or wall boundaries")

    state = initial_moc_state(scenario, node_count)
    frames = [MocFrame(state.time, state.head, state.discharge)]
    steps = 0
    # unit Courant number: cannot clamp dt, so stop at the last full step
    while state.time + state.dt <= scenario.t_end * (1.0 + 1e-12):
        state = moc_step(state, scenario.constants.g, scenario.geometry.section,
                         scenario.friction, scenario.upstream, scenario.downstream,
                         scenario.geometry)
        steps += 1
        if steps % scenario.output_stride == 0:
            frames.append(MocFrame(state.time, state.head, state.discharge))
    if steps % scenario.output_stride != 0:
        frames.append(MocFrame(state.time, state.head, state.discharge))
    return frames
