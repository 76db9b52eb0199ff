import numpy as np
import pytest

from oracles import coarse_moc_waterhammer
from pipewave.compare import detect_period
from pipewave.core import (FrictionParams, LinearAltitude, PhysicalConstants,
                           PipeGeometry)
from pipewave.moc import MocState, initial_moc_state, moc_run, moc_step
from pipewave.scenarios import (PrescribedDischarge, ReservoirHead, Scenario,
                                ValveClosure, Wall)

FRICTIONLESS = FrictionParams.disabled()
G = 9.81


def section4_scenario(cells=200, t_end=20.0):
    geometry = PipeGeometry.circular(
        length=2000.0, section=2.0, wall_thickness=0.2, young_modulus=23e9,
        altitude=LinearAltitude(upstream_z=250.0, angle_deg=-5.0))
    return Scenario(
        geometry=geometry, constants=PhysicalConstants(c=1086.6),
        friction=FRICTIONLESS, mesh_cells=cells,
        upstream=ReservoirHead(total_head=300.0),
        downstream=PrescribedDischarge(law=ValveClosure(q0=10.0, t_close=5.0)),
        initial_discharge=10.0, t_end=t_end, output_stride=1, probes=(1000.0,))


def quiescent_state(nodes=21, head=150.0, a=1000.0, dx=10.0):
    return MocState(head=np.full(nodes, head), discharge=np.zeros(nodes),
                    wave_speed=a, node_spacing=dx)


class TestMocState:
    def test_unit_courant_timestep(self):
        state = quiescent_state(a=500.0, dx=25.0)
        assert state.dt == pytest.approx(0.05)

    def test_needs_two_nodes(self):
        with pytest.raises(ValueError):
            MocState(head=np.array([1.0]), discharge=np.array([0.0]),
                     wave_speed=100.0, node_spacing=1.0)

    def test_positive_wave_speed(self):
        with pytest.raises(ValueError):
            MocState(head=np.zeros(3), discharge=np.zeros(3),
                     wave_speed=-1.0, node_spacing=1.0)


class TestMocStep:
    def test_quiescent_fixed_point(self):
        state = quiescent_state()
        new = moc_step(state, G, 2.0, FRICTIONLESS,
                       ReservoirHead(total_head=150.0), Wall())
        assert new.head == pytest.approx(state.head, abs=1e-12)
        assert new.discharge == pytest.approx(state.discharge, abs=1e-12)
        assert new.time == pytest.approx(state.dt)

    def test_quiescent_with_downstream_reservoir(self):
        # exercises the quadratic reservoir law at the downstream node
        state = quiescent_state(head=150.0)
        new = moc_step(state, G, 2.0, FRICTIONLESS,
                       ReservoirHead(total_head=150.0),
                       ReservoirHead(total_head=150.0))
        assert new.head == pytest.approx(state.head, abs=1e-12)
        assert new.discharge == pytest.approx(state.discharge, abs=1e-12)

    def test_joukowsky_jump_on_instant_closure(self):
        a, section, u0 = 1086.6, 2.0, 5.0
        nodes = 41
        state = MocState(head=np.full(nodes, 300.0),
                         discharge=np.full(nodes, section * u0),
                         wave_speed=a, node_spacing=2000.0 / (nodes - 1))
        closed = PrescribedDischarge(law=lambda t: 0.0)
        new = moc_step(state, G, section, FRICTIONLESS,
                       ReservoirHead(total_head=300.0 + u0 * u0 / (2 * G)), closed)
        jump = new.head[-1] - state.head[-1]
        assert jump == pytest.approx(a * u0 / G, abs=0.5)
        assert jump == pytest.approx(553.8226299694190, rel=1e-12)

    def test_frictionless_energy_conserved_between_walls(self):
        rng = np.random.default_rng(2)
        nodes, a, section, dx = 64, 800.0, 1.5, 5.0
        head = 50.0 + 3.0 * rng.standard_normal(nodes)
        q = 0.4 * rng.standard_normal(nodes)
        q[0] = q[-1] = 0.0   # consistent with the walls
        state = MocState(head=head, discharge=q, wave_speed=a, node_spacing=dx)
        # one step lets the boundary conditions take hold exactly
        state = moc_step(state, G, section, FRICTIONLESS, Wall(), Wall())

        def energy(s):
            return float(np.sum((G * section * s.head ** 2 / (2 * a * a)
                                 + s.discharge ** 2 / (2 * section)) * dx))

        e0 = energy(state)
        period_steps = 2 * (nodes - 1)   # one full reflection period
        for _ in range(period_steps):
            state = moc_step(state, G, section, FRICTIONLESS, Wall(), Wall())
        assert energy(state) == pytest.approx(e0, rel=1e-10)

    def test_affine_in_state(self):
        # frictionless wall/fixed-discharge boundaries: superposition of
        # perturbations around a base state propagates linearly (the
        # reservoir law is excluded: its velocity head is quadratic in Q)
        rng = np.random.default_rng(9)
        nodes, a, section, dx = 32, 900.0, 2.0, 10.0
        res = Wall()
        valve = PrescribedDischarge(law=lambda t: 1.0)

        def advance(head, q):
            s = MocState(head=head, discharge=q, wave_speed=a, node_spacing=dx)
            out = moc_step(s, G, section, FRICTIONLESS, res, valve)
            return out.head, out.discharge

        h0 = np.full(nodes, 100.0)
        q0 = np.full(nodes, 1.0)
        dh1, dq1 = rng.standard_normal(nodes), 0.1 * rng.standard_normal(nodes)
        dh2, dq2 = rng.standard_normal(nodes), 0.1 * rng.standard_normal(nodes)

        base = advance(h0, q0)
        one = advance(h0 + dh1, q0 + dq1)
        two = advance(h0 + dh2, q0 + dq2)
        both = advance(h0 + dh1 + dh2, q0 + dq1 + dq2)
        assert both[0] == pytest.approx(one[0] + two[0] - base[0], rel=1e-10)
        assert both[1] == pytest.approx(one[1] + two[1] - base[1], rel=1e-10,
                                        abs=1e-12)

    def test_friction_requires_geometry(self):
        state = quiescent_state()
        with pytest.raises(ValueError):
            moc_step(state, G, 2.0, FrictionParams(enabled=True, strickler=50.0),
                     Wall(), Wall())

    def test_friction_damps_energy(self):
        geometry = PipeGeometry.circular(
            length=100.0, section=2.0, wall_thickness=0.2, young_modulus=23e9,
            altitude=LinearAltitude(0.0, 0.0))
        nodes, a, dx = 21, 500.0, 5.0
        rng = np.random.default_rng(6)
        state = MocState(head=50.0 + rng.standard_normal(nodes),
                         discharge=0.5 * rng.standard_normal(nodes),
                         wave_speed=a, node_spacing=dx)
        friction = FrictionParams(enabled=True, strickler=20.0)

        def energy(s):
            return float(np.sum(G * 2.0 * s.head ** 2 / (2 * a * a)
                                + s.discharge ** 2 / (2 * 2.0)) * dx)

        e0 = energy(state)
        for _ in range(80):
            state = moc_step(state, G, 2.0, friction, Wall(), Wall(),
                             geometry=geometry)
        assert energy(state) < e0


class TestMocRun:
    def test_zero_duration_returns_initial_frame(self):
        scenario = section4_scenario(t_end=0.0)
        frames = moc_run(scenario)
        assert len(frames) == 1
        assert frames[0].time == 0.0

    def test_node_count_defaults_to_interfaces(self):
        scenario = section4_scenario(cells=50, t_end=0.0)
        frames = moc_run(scenario)
        assert frames[0].head.size == 51

    def test_initial_state_is_converted_steady_profile(self):
        scenario = section4_scenario(t_end=0.0)
        state = initial_moc_state(scenario, 201)
        geom = scenario.geometry
        c, g = scenario.constants.c, scenario.constants.g
        x = np.linspace(0.0, geom.length, 201)
        z = geom.altitude(x)
        area = geom.section * (1.0 + g * (state.head - z - geom.diameter) / (c * c))
        u = state.discharge / area
        # upstream total head (piezo + velocity head) equals the reservoir head
        assert state.head[0] + u[0] ** 2 / (2 * g) == pytest.approx(300.0, abs=1e-9)
        # the underlying profile carries the solver's steady-state invariant
        invariant = 0.5 * u * u + g * z + c * c * np.log(area)
        assert np.max(invariant) - np.min(invariant) <= 1e-9 * np.max(np.abs(invariant))
        assert state.discharge == pytest.approx(np.full(201, 10.0))

    def test_period_is_4L_over_a(self):
        scenario = section4_scenario(cells=200, t_end=5.0 + 3 * 7.3625)
        frames = moc_run(scenario)
        t = np.array([f.time for f in frames])
        mid = np.array([f.head[f.head.size // 2] for f in frames])
        period = detect_period(t, mid, t_min=5.0)
        assert period == pytest.approx(4 * 2000.0 / 1086.6, abs=0.05)

    def test_first_peak_matches_coarse_independent_march(self):
        scenario = section4_scenario(cells=200, t_end=12.0)
        frames = moc_run(scenario)
        t = np.array([f.time for f in frames])
        mid = np.array([f.head[f.head.size // 2] for f in frames])

        coarse_nodes = 101   # half resolution
        init = initial_moc_state(scenario, coarse_nodes)
        times, history = coarse_moc_waterhammer(
            2000.0, coarse_nodes, 1086.6, G, 2.0, init.head, 10.0,
            ValveClosure(q0=10.0, t_close=5.0), 12.0, 300.0)
        mid_coarse = history[:, coarse_nodes // 2]

        peak = float(np.max(mid))
        peak_coarse = float(np.max(mid_coarse))
        initial = mid[0]
        assert peak - initial == pytest.approx(peak_coarse - initial,
                                               rel=0.10)

    def test_rejects_periodic_boundaries(self):
        scenario = section4_scenario(t_end=1.0)
        from pipewave.scenarios import Periodic
        bad = Scenario(**{**scenario.__dict__, "upstream": Periodic(),
                          "downstream": Periodic()})
        with pytest.raises(ValueError):
            moc_run(bad)
