"""Abresch-Langer curves in polar-tangential coordinates.

A curve satisfying k = -<x,N>/2 is integrated with the state
(r, theta, phi, psi): polar radius and angle, tangent direction, and the
signed angle psi = phi - theta from the radial direction to the tangent.
The ODE system is

    dr/ds     = cos(psi)
    dtheta/ds = sin(psi) / r
    dphi/ds   = k = r sin(psi) / 2
    dpsi/ds   = sin(psi) (r/2 - 1/r)

with first integral  c sin(psi) = K(r),  K(r) = exp(r^2/4) / r.  The
constant c > 0 is the energy of the curve; the curvature along it is
k = r sin(psi)/2 = exp(r^2/4)/(2c), so k e^{-r^2/4} = 1/(2c) is constant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import brentq

from .errors import DomainError, IntegrationError, NoSolutionError, NonConvergenceError

SQRT2 = math.sqrt(2.0)

#: Global minimum of the profile K, attained at r = sqrt(2).
K_MIN = math.exp(0.5) / SQRT2

#: Smallest energy for which K(r) = sqrt(3) c / 2 has solutions, i.e. for
#: which an arc can meet a ray at a triple junction.
ENERGY_FLOOR = 2.0 * K_MIN / math.sqrt(3.0)

_EVENT_MAX_STEP = 0.1       # keeps psi-crossings from being stepped over
_CHUNK = 25.0               # arclength per integration chunk


def profile_K(r):
    """Radial profile K(r) = exp(r^2/4)/r.

    Strictly decreasing on (0, sqrt(2)), strictly increasing beyond, with
    global minimum K(sqrt(2)) = e^{1/2}/sqrt(2).  Accepts scalars or arrays;
    every entry must be positive.
    """
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0.0):
        raise DomainError("profile_K requires r > 0")
    out = np.exp(r * r / 4.0) / r
    return float(out) if out.ndim == 0 else out


def solve_radii(energy, sin_psi_target):
    """Solve K(r) = energy * sin_psi_target for the two radii around sqrt(2).

    Returns (r_small, r_large) with r_small <= sqrt(2) <= r_large.  A level
    within 1e-12 of the minimum of K is treated as the tangent case and
    returns the double root (sqrt(2), sqrt(2)).
    """
    if energy <= 0.0:
        raise DomainError("energy must be positive")
    if not 0.0 < sin_psi_target <= 1.0:
        raise DomainError("sin_psi_target must lie in (0, 1]")
    level = energy * sin_psi_target
    if level < K_MIN - 1e-12:
        raise NoSolutionError(
            f"level {level:.6g} is below min K = {K_MIN:.6g}; no radii exist")
    if level - K_MIN < 1e-12:
        return SQRT2, SQRT2

    def f(r):
        return math.exp(r * r / 4.0) / r - level

    # Left root: K ~ 1/r blows up as r -> 0, so 1/(2*level) safely brackets.
    lo = min(0.5 / level, 1.0)
    while f(lo) < 0.0:
        lo *= 0.5
    r_small = brentq(f, lo, SQRT2, xtol=1e-15, rtol=8.9e-16)
    hi = 2.0 * SQRT2
    while f(hi) < 0.0:
        hi *= 1.5
    r_large = brentq(f, SQRT2, hi, xtol=1e-15, rtol=8.9e-16)
    return r_small, r_large


@dataclass(frozen=True)
class PolarState:
    """One point of an AL-curve trajectory."""

    r: float
    theta: float
    phi: float
    psi: float
    s: float = 0.0

    def first_integral_defect(self, energy):
        return abs(energy * math.sin(self.psi) - profile_K(self.r))


def junction_start(energy, theta, radius="in", psi=2.0 * math.pi / 3.0):
    """State of an arc leaving a triple junction with a radial ray.

    The junction sits at polar angle ``theta`` on the level
    K(r) = sqrt(3) c / 2; ``radius`` selects the inner or outer solution.
    Arcs always leave a ray junction with psi = 2*pi/3 (they point inward),
    which is the default.
    """
    r_in, r_out = solve_radii(energy, math.sqrt(3.0) / 2.0)
    r = r_in if radius == "in" else r_out
    return PolarState(r=r, theta=theta, phi=theta + psi, psi=psi, s=0.0)


@dataclass(frozen=True)
class StopCondition:
    """Where integration of an arc ends.

    kind = "psi":          stop at the ``crossing``-th time psi hits ``value``.
    kind = "theta_sweep":  stop when theta - theta_start reaches ``value``.
    kind = "arclength":    stop at s = ``value``.
    """

    kind: str
    value: float
    crossing: int = 1

    def __post_init__(self):
        if self.kind not in ("psi", "theta_sweep", "arclength"):
            raise DomainError(f"unknown stop condition kind {self.kind!r}")
        if self.kind == "psi" and self.crossing < 1:
            raise DomainError("crossing index must be >= 1")


@dataclass(frozen=True)
class ALCurve:
    """A sampled AL-curve arc of a given energy.

    Samples are arclength-uniform.  ``r, theta, phi, psi, s, k`` are aligned
    arrays; ``orientation`` is +1 for the counterclockwise parametrization
    used throughout (theta strictly increasing).
    """

    energy: float
    r: np.ndarray
    theta: np.ndarray
    phi: np.ndarray
    psi: np.ndarray
    s: np.ndarray
    k: np.ndarray = field(repr=False)
    orientation: int = 1

    def __post_init__(self):
        for arr in (self.r, self.theta, self.phi, self.psi, self.s, self.k):
            arr.setflags(write=False)

    @property
    def endpoint_psis(self):
        return float(self.psi[0]), float(self.psi[-1])

    @property
    def sweep(self):
        """Total polar-angle sweep of the arc."""
        return float(self.theta[-1] - self.theta[0])

    @property
    def turn(self):
        """Total turn of the tangent direction."""
        return float(self.phi[-1] - self.phi[0])

    @property
    def length(self):
        return float(self.s[-1] - self.s[0])

    def positions(self):
        return np.stack([self.r * np.cos(self.theta),
                         self.r * np.sin(self.theta)], axis=1)

    def tangents(self):
        return np.stack([np.cos(self.phi), np.sin(self.phi)], axis=1)

    def states(self):
        """Samples as PolarState values (mostly for inspection and tests)."""
        return [PolarState(float(r), float(t), float(p), float(q), float(ss))
                for r, t, p, q, ss in zip(self.r, self.theta, self.phi,
                                          self.psi, self.s)]

    def first_integral_defect(self):
        return float(np.max(np.abs(self.energy * np.sin(self.psi)
                                   - profile_K(self.r))))

    def weighted_curvature_defect(self):
        """max |k e^{-r^2/4} - 1/(2c)| over the samples."""
        return float(np.max(np.abs(self.k * np.exp(-self.r ** 2 / 4.0)
                                   - 0.5 / self.energy)))


def _rhs(s, y):
    r, _theta, _phi, psi = y
    sp = math.sin(psi)
    return (math.cos(psi), sp / r, 0.5 * r * sp, sp * (0.5 * r - 1.0 / r))


def _check_start(energy, start, first_integral_tol):
    if energy <= 0.0:
        raise DomainError("energy must be positive")
    if start.r <= 0.0:
        raise DomainError("start state must have r > 0")
    if abs(math.sin(start.psi)) < 1e-8:
        # The first integral degenerates in the straight-line limit.
        raise DomainError(
            "start psi too close to 0 or pi; the arc degenerates to a line")
    defect = start.first_integral_defect(energy)
    if defect > max(first_integral_tol, 1e-9):
        raise DomainError(
            f"start state violates c sin(psi) = K(r) by {defect:.3e}")


def sweep_to_stop(energy, start, stop, *, rtol=1e-12, atol=1e-13,
                  max_arclength=100.0, first_integral_tol=1e-9):
    """Integrate until the stop condition and return the end PolarState.

    This is the lightweight single-pass version used by shooting loops; it
    does not resample the arc.  Raises NonConvergenceError if the stop is not
    reached within ``max_arclength``.
    """
    _check_start(energy, start, first_integral_tol)
    y0 = (start.r, start.theta, start.phi, start.psi)

    if stop.kind == "arclength":
        if stop.value > max_arclength:
            raise DomainError("arclength stop exceeds max_arclength")
        sol = solve_ivp(_rhs, (0.0, stop.value), y0, method="DOP853",
                        rtol=rtol, atol=atol, max_step=_EVENT_MAX_STEP)
        r, th, ph, ps = sol.y[:, -1]
        return PolarState(r, th, ph, ps, start.s + stop.value)

    if stop.kind == "theta_sweep":
        target = start.theta + stop.value

        def event(s, y):
            return y[1] - target
        event.terminal = True
        event.direction = 1
        crossings_needed = 1
    else:
        target = stop.value

        def event(s, y):
            return y[3] - target
        event.terminal = False
        event.direction = 0
        crossings_needed = stop.crossing

    hits = []
    s0, y = 0.0, y0
    while s0 < max_arclength:
        s1 = min(s0 + _CHUNK, max_arclength)
        sol = solve_ivp(_rhs, (s0, s1), y, method="DOP853", rtol=rtol,
                        atol=atol, events=event, dense_output=True,
                        max_step=_EVENT_MAX_STEP)
        hits.extend(sol.t_events[0])
        if len(hits) >= crossings_needed:
            # the chunk loop returns as soon as enough crossings exist, so
            # the one we want always lies inside the current chunk
            s_end = hits[crossings_needed - 1]
            r, th, ph, ps = sol.sol(s_end)
            return PolarState(float(r), float(th), float(ph), float(ps),
                              start.s + float(s_end))
        s0, y = s1, sol.y[:, -1]
    raise NonConvergenceError(
        f"stop condition {stop} not reached within arclength {max_arclength}")


def integrate_arc(energy, start, stop, *, rtol=1e-12, atol=1e-13,
                  samples=2048, max_arclength=100.0, first_integral_tol=1e-9):
    """Integrate an AL-curve arc and resample it arclength-uniformly.

    Integration is adaptive (DOP853 with dense output); the stop condition is
    located by event root-finding on the dense output.  The returned curve
    satisfies the first integral within ``first_integral_tol`` at every
    sample; if the drift exceeds the tolerance the integration is retried
    once with 100x tighter step tolerances before failing.
    """
    end = sweep_to_stop(energy, start, stop, rtol=rtol, atol=atol,
                        max_arclength=max_arclength,
                        first_integral_tol=first_integral_tol)
    s_end = end.s - start.s
    if s_end <= 0.0:
        raise NonConvergenceError("stop condition met at zero arclength")

    y0 = (start.r, start.theta, start.phi, start.psi)
    for attempt_rtol, attempt_atol in ((rtol, atol),
                                       (rtol * 1e-2, max(atol * 1e-2, 1e-14))):
        s_grid = np.linspace(0.0, s_end, samples)
        sol = solve_ivp(_rhs, (0.0, s_end), y0, method="DOP853",
                        rtol=attempt_rtol, atol=attempt_atol, t_eval=s_grid,
                        max_step=_EVENT_MAX_STEP)
        r, th, ph, ps = sol.y
        curve = ALCurve(energy=energy, r=r.copy(), theta=th.copy(),
                        phi=ph.copy(), psi=ps.copy(),
                        s=s_grid + start.s,
                        k=np.exp(r * r / 4.0) / (2.0 * energy))
        if curve.first_integral_defect() <= first_integral_tol:
            return curve
    raise IntegrationError(
        f"first-integral drift {curve.first_integral_defect():.3e} exceeds "
        f"tolerance {first_integral_tol:.1e} even after step refinement")


def integrate_back(energy, state, arclength, *, rtol=1e-12, atol=1e-13):
    """Integrate backwards in arclength from ``state``.

    Runs the same ODE with decreasing s, retracing the trajectory; used to
    verify reversal symmetry of the integrator.
    """
    _check_start(energy, state, 1e-9)
    sol = solve_ivp(_rhs, (0.0, -arclength),
                    (state.r, state.theta, state.phi, state.psi),
                    method="DOP853", rtol=rtol, atol=atol,
                    max_step=_EVENT_MAX_STEP)
    r, th, ph, ps = sol.y[:, -1]
    return PolarState(float(r), float(th), float(ph), float(ps),
                      state.s - arclength)


def inner_dip_sweep(energy, **kwargs):
    """Polar sweep of the arc between consecutive inner-radius junctions.

    This is the piece of the orbit from (r_in, psi = 2pi/3) through the
    minimum radius back out to (r_in, psi = pi/3); its sweep as a function
    of the energy drives all catalog shooting problems and is the quantity
    tabulated as h1.
    """
    start = junction_start(energy, 0.0)
    end = sweep_to_stop(energy, start,
                        StopCondition("psi", math.pi / 3.0, crossing=1),
                        **kwargs)
    return end.theta - start.theta
