"""Transient pressurized pipe flow.

A kinetic finite-volume solver for the conservative (A, Q) pressurized-pipe
model with topography-upwinded reflection/transmission fluxes, together with
a method-of-characteristics water-hammer reference solver, scenario and
boundary-condition machinery, and a small CLI.
"""

from .compare import ComparisonReport, ProbeSeries, compare_series
from .config import ConfigError, RunConfig, emit_config, load_config, parse_config
from .core import (FrictionParams, LinearAltitude, Mesh, PhysicalConstants,
                   PipeGeometry, SolverError, State, TabulatedAltitude,
                   effective_wave_speed, entropy_cell, friction_slope,
                   piezometric_head, sound_speed, total_head)
from .kinetic import (HalfFlux, InterfaceFluxPair, KineticParams, cfl_timestep,
                      interface_fluxes, maxwellian_density, run,
                      shifted_half_moments, step)
from .moc import MocState, moc_run, moc_step
from .runner import compare_runs, run_simulation
from .scenarios import (Periodic, PrescribedDischarge, ReservoirHead, Scenario,
                        ValveClosure, Wall, boundary_provider, ghost_states,
                        steady_state_init, valve_closure_law)

__version__ = "0.1.0"
