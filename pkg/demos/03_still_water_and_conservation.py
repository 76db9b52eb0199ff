"""Structural properties of the solver on closed domains.

Two classical sanity checks for a finite-volume scheme with topography:
a sloped column of still water should stay (nearly) still, and a periodic
pipe should conserve mass and momentum to machine precision.  The still
water case also shows the scheme's limit: the rectangular equilibrium
balances the bottom step terms only to first order in g*dz_cell/c^2, so a
tiny residual discharge appears and saturates instead of growing.
"""

import numpy as np

from pipewave import FrictionParams, LinearAltitude, Mesh, State
from pipewave.kinetic import cfl_timestep, step

g = 9.81
frictionless = FrictionParams.disabled()


def wall(state):
    return ((float(state.area[0]), -float(state.discharge[0])),
            (float(state.area[-1]), -float(state.discharge[-1])))


def periodic(state):
    return ((float(state.area[-1]), float(state.discharge[-1])),
            (float(state.area[0]), float(state.discharge[0])))


# --- sloped still water ----------------------------------------------------
c = 1086.6
mesh = Mesh.uniform(2000.0, 100, LinearAltitude(upstream_z=250.0, angle_deg=-5.0))
area0 = 2.0 * np.exp(-g * (mesh.z_cells - mesh.z_cells[0]) / (c * c))
state = State(area=area0, discharge=np.zeros(100))

eps = g * np.max(np.abs(np.diff(mesh.z_cells))) / (c * c)
print(f"per-cell imbalance scale g dz/c^2 = {eps:.2e}")
print(f"{'step':>6} {'max|Q|/(A c)':>14} {'max rel dA':>12}")
for k in range(1, 501):
    dt = cfl_timestep(state, c, mesh, 0.8)
    state = step(state, mesh, c, g, dt, frictionless, wall)
    if k in (1, 10, 100, 500):
        q_res = np.max(np.abs(state.discharge)) / (np.max(area0) * c)
        a_res = np.max(np.abs(state.area - area0) / area0)
        print(f"{k:6d} {q_res:14.3e} {a_res:12.3e}")
print("the residual stays pinned at the first-order balance level\n")

# --- periodic conservation --------------------------------------------------
mesh = Mesh.uniform(100.0, 64, lambda x: np.zeros_like(np.asarray(x, float)))
x = mesh.centers / 100.0
c = 25.0
area = 2.0 + 0.3 * np.sin(2 * np.pi * x)
state = State(area=area, discharge=area * (0.05 * c * np.sin(4 * np.pi * x)))
mass0 = np.sum(mesh.widths * state.area)
mom0 = np.sum(mesh.widths * state.discharge)
for _ in range(2000):
    dt = cfl_timestep(state, c, mesh, 0.9)
    state = step(state, mesh, c, g, dt, frictionless, periodic)
mass = np.sum(mesh.widths * state.area)
mom = np.sum(mesh.widths * state.discharge)
print("periodic flat pipe after 2000 steps:")
print(f"  mass drift     {abs(mass - mass0) / mass0:.2e} (relative)")
print(f"  momentum drift {abs(mom - mom0) / (mass0 * c):.2e} (relative to mass*c)")
