"""Kinetic finite-volume solver with topography-upwinded interface fluxes.

Each cell state (A, Q) is represented by a rectangular microscopic
equilibrium

    M(xi) = A / (2 c sqrt(3))   for |xi - u| <= c sqrt(3),  else 0,

whose 0th/1st/2nd moments recover A, Q and the momentum flux Q^2/A + c^2 A.
At a cell interface the outgoing half of the distribution is kept, while the
incoming half combines particles reflected by the bottom step (kinetic energy
below the potential jump 2 g dZ) with particles transmitted from the
neighbour at the energy-shifted speed sqrt(xi^2 - 2 g dZ).  Because the
equilibrium is piecewise constant every flux moment reduces to integrals of
xi*const and xi^2*const over explicit intervals, evaluated here in closed
form; no quadrature is involved.

The macroscopic update is the first-order explicit scheme

    U_i' = U_i - dt/h_i * (F-_{i+1/2} - F+_{i-1/2})

stable and positivity-preserving under the CFL condition
dt * max(|u| + c sqrt(3)) <= min h.  Friction, when enabled, is applied to
the discharge after the hyperbolic update through a semi-implicit relaxation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .core import (FrictionParams, Mesh, PipeGeometry, SolverError, State,
                   friction_coefficient)

SQRT3 = math.sqrt(3.0)

# slack for CFL comparisons so dt computed *from* the condition passes it
_CFL_SLACK = 1.0 + 1e-12


@dataclass(frozen=True)
class KineticParams:
    """Time-step safety factor; the rectangle half-width sqrt(3) is fixed by
    the unit-mass / unit-second-moment constraints on the equilibrium."""

    cfl: float = 0.8
    chi_support_halfwidth = SQRT3

    def __post_init__(self):
        if not 0.0 < self.cfl <= 1.0:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")


@dataclass(frozen=True)
class HalfFlux:
    """One-sided numerical flux (mass component, momentum component)."""

    f_area: float
    f_momentum: float

    def __post_init__(self):
        if not (math.isfinite(self.f_area) and math.isfinite(self.f_momentum)):
            raise ValueError("flux components must be finite")


@dataclass(frozen=True)
class InterfaceFluxPair:
    """The two fluxes at one interface: ``minus`` feeds the left cell,
    ``plus`` the right cell; their mass components coincide."""

    minus: HalfFlux
    plus: HalfFlux


def maxwellian_density(area, velocity, c, xi):
    """Rectangular equilibrium density at microscopic velocity xi."""
    if not np.all(np.asarray(area) > 0):
        raise ValueError("area must be positive")
    if c <= 0:
        raise ValueError("sound speed must be positive")
    s = c * SQRT3
    xi = np.asarray(xi, dtype=float)
    inside = np.abs(xi - velocity) <= s
    return np.where(inside, area / (2.0 * s), 0.0)[()]


def _segment_moments(dens, lo, hi):
    """(m0, m1) = (int xi dxi, int xi^2 dxi) * dens over [lo, hi], empty-safe."""
    valid = hi > lo
    m0 = np.where(valid, dens * (hi * hi - lo * lo) / 2.0, 0.0)
    m1 = np.where(valid, dens * (hi ** 3 - lo ** 3) / 3.0, 0.0)
    return m0, m1


def _direct_moments(dens, u, s, positive):
    """Moments of xi^k M(xi) over one half-line (the outgoing particles)."""
    if positive:
        lo, hi = np.maximum(u - s, 0.0), np.maximum(u + s, 0.0)
    else:
        lo, hi = np.minimum(u - s, 0.0), np.minimum(u + s, 0.0)
    return _segment_moments(dens, lo, hi)


def _reflected_moments(dens, u, s, w, positive):
    """Moments of xi^k M(-xi) over the reflection set {xi^2 <= w} on one
    half-line; empty whenever the jump w is non-positive."""
    r = np.sqrt(np.maximum(w, 0.0))
    if positive:
        lo, hi = np.maximum(-(u + s), 0.0), np.minimum(s - u, r)
    else:
        lo, hi = np.maximum(-(u + s), -r), np.minimum(s - u, 0.0)
    return _segment_moments(dens, lo, hi)


def _transmitted_moments(dens, u, s, w, positive):
    """Moments of xi^k M(sgn sqrt(xi^2 - w)) over {xi^2 >= w} on one
    half-line, with sgn = +1 on xi >= 0 and -1 on xi <= 0.

    Substituting nu = sgn*sqrt(xi^2 - w) (so xi^2 = nu^2 + w and
    xi dxi = nu dnu) turns the mass moment into the plain half-line moment of
    M and the momentum moment into int |nu| sqrt(nu^2 + w) M(nu) dnu, both
    elementary for the rectangle.
    """
    if positive:
        lo = np.maximum(u - s, np.sqrt(np.maximum(-w, 0.0)))
        hi = u + s
    else:
        lo = u - s
        hi = np.minimum(u + s, -np.sqrt(np.maximum(-w, 0.0)))
    valid = hi > lo
    m0 = np.where(valid, dens * (hi * hi - lo * lo) / 2.0, 0.0)
    # the clamps only absorb roundoff: on a valid interval nu^2 + w >= 0
    lo32 = np.maximum(lo * lo + w, 0.0) ** 1.5
    hi32 = np.maximum(hi * hi + w, 0.0) ** 1.5
    if positive:
        m1 = np.where(valid, dens * (hi32 - lo32) / 3.0, 0.0)
    else:
        m1 = np.where(valid, dens * (lo32 - hi32) / 3.0, 0.0)
    return m0, m1


def shifted_half_moments(area, velocity, c, potential_jump, positive_half):
    """Closed-form transmission moments

        m0 = int xi   M(sgn sqrt(xi^2 - potential_jump)) dxi
        m1 = int xi^2 M(sgn sqrt(xi^2 - potential_jump)) dxi

    over {xi >= 0} (``positive_half``) or {xi <= 0}, restricted to
    xi^2 >= potential_jump; (0, 0) when the transformed support misses the
    integration domain (total reflection).
    """
    if area <= 0 or c <= 0:
        raise ValueError("area and sound speed must be positive")
    s = c * SQRT3
    dens = area / (2.0 * s)
    m0, m1 = _transmitted_moments(dens, velocity, s, potential_jump, positive_half)
    return float(m0), float(m1)


def _interface_flux_arrays(a_left, q_left, a_right, q_right, dz, c, g):
    """Vectorized interface fluxes for arrays of interfaces.

    dz = z_right - z_left.  Returns (F-_A, F-_Q, F+_A, F+_Q).
    """
    s = c * SQRT3
    u_left = q_left / a_left
    u_right = q_right / a_right
    dens_left = a_left / (2.0 * s)
    dens_right = a_right / (2.0 * s)
    w = 2.0 * g * dz          # potential jump seen from the left cell
    wm = -w                   # and from the right cell

    d0, d1 = _direct_moments(dens_left, u_left, s, True)
    r0, r1 = _reflected_moments(dens_left, u_left, s, w, False)
    t0, t1 = _transmitted_moments(dens_right, u_right, s, w, False)
    fm_a = d0 + r0 + t0
    fm_q = d1 + r1 + t1

    d0, d1 = _direct_moments(dens_right, u_right, s, False)
    r0, r1 = _reflected_moments(dens_right, u_right, s, wm, True)
    t0, t1 = _transmitted_moments(dens_left, u_left, s, wm, True)
    fp_a = d0 + r0 + t0
    fp_q = d1 + r1 + t1

    return fm_a, fm_q, fp_a, fp_q


def interface_fluxes(left, right, z_left, z_right, c, g):
    """Flux pair at one interface from the (A, Q) states of its two cells.

    ``minus`` combines the left cell's outgoing particles with reflected and
    transmitted incomers; ``plus`` is the mirror construction seen by the
    right cell.  Mass components agree to roundoff by construction.
    """
    a_l, q_l = left
    a_r, q_r = right
    if a_l <= 0 or a_r <= 0:
        raise ValueError("wetted areas must be positive")
    fm_a, fm_q, fp_a, fp_q = _interface_flux_arrays(
        np.float64(a_l), np.float64(q_l), np.float64(a_r), np.float64(q_r),
        np.float64(z_right - z_left), c, g)
    return InterfaceFluxPair(minus=HalfFlux(float(fm_a), float(fm_q)),
                             plus=HalfFlux(float(fp_a), float(fp_q)))


def cfl_timestep(state: State, c, mesh: Mesh, cfl_coefficient):
    """dt = cfl * min(h) / max(|u| + c sqrt(3))."""
    if not 0.0 < cfl_coefficient <= 1.0:
        raise ValueError(f"cfl coefficient must lie in (0, 1], got {cfl_coefficient}")
    if mesh.n == 0:
        raise ValueError("empty mesh")
    speed = float(np.max(np.abs(state.velocity) + c * SQRT3))
    return cfl_coefficient * mesh.min_width / speed


def step(state: State, mesh: Mesh, c, g, dt, friction: FrictionParams,
         boundary, geometry: PipeGeometry | None = None) -> State:
    """One explicit update of every cell.

    ``boundary`` maps the current state to the pair of ghost cells
    ((A, Q) left, (A, Q) right); ghosts sit at the same bottom elevation as
    their adjacent interior cell so the boundary interfaces carry no
    topography jump.  The discharge is relaxed semi-implicitly,
    Q <- Q / (1 + dt g K |u|), when friction is enabled (this needs
    ``geometry`` for the hydraulic radius).
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    speed = float(np.max(np.abs(state.velocity) + c * SQRT3))
    if dt * speed > mesh.min_width * _CFL_SLACK:
        raise SolverError(
            f"dt={dt:g} violates the CFL condition: dt*max(|u|+c*sqrt(3))="
            f"{dt * speed:g} > min width {mesh.min_width:g}")

    (a_gl, q_gl), (a_gr, q_gr) = boundary(state)
    if a_gl <= 0 or a_gr <= 0:
        raise SolverError("boundary produced a non-positive ghost area")

    a = state.area
    q = state.discharge
    z = mesh.z_cells
    a_left = np.concatenate(([a_gl], a))
    q_left = np.concatenate(([q_gl], q))
    z_left = np.concatenate((z[:1], z))
    a_right = np.concatenate((a, [a_gr]))
    q_right = np.concatenate((q, [q_gr]))
    z_right = np.concatenate((z, z[-1:]))

    fm_a, fm_q, fp_a, fp_q = _interface_flux_arrays(
        a_left, q_left, a_right, q_right, z_right - z_left, c, g)

    ratio = dt / mesh.widths
    a_new = a - ratio * (fm_a[1:] - fp_a[:-1])
    q_new = q - ratio * (fm_q[1:] - fp_q[:-1])

    if np.any(a_new <= 0):
        i = int(np.argmin(a_new))
        raise SolverError(
            f"wetted area lost positivity in cell {i} (A={a_new[i]:g}); "
            "unreachable under the CFL condition")

    if friction.enabled:
        if geometry is None:
            raise ValueError("friction needs the pipe geometry for the hydraulic radius")
        k = friction_coefficient(geometry, friction)
        u_star = q_new / a_new
        q_new = q_new / (1.0 + dt * g * k * np.abs(u_star))

    return State(area=a_new, discharge=q_new, time=state.time + dt)


def run(initial: State, mesh: Mesh, params: KineticParams,
        constants, friction: FrictionParams, boundary, t_end,
        observer=None, geometry: PipeGeometry | None = None) -> State:
    """March ``initial`` to t_end with adaptive CFL steps, clamping the last
    step so the final time is exactly t_end; ``observer(state)`` is invoked
    after every accepted step."""
    if t_end < initial.time:
        raise ValueError(f"t_end={t_end} precedes the initial time {initial.time}")
    state = initial
    while state.time < t_end:
        dt = cfl_timestep(state, constants.c, mesh, params.cfl)
        clamped = state.time + dt >= t_end
        if clamped:
            dt = t_end - state.time
        state = step(state, mesh, constants.c, constants.g, dt, friction,
                     boundary, geometry)
        if clamped:
            state = replace(state, time=float(t_end))
        if observer is not None:
            observer(state)
    return state
