"""Regular shrinker networks and the catalog construction.

A regular shrinker is a planar network of curves satisfying
k + <x,N>/2 = 0 with all junctions triple and meeting at 2*pi/3 angles.
Bounded curves are AL-curve arcs; unbounded curves are radial rays (or a
full line).  The seven nontrivial catalog networks are constructed by
shooting on the arc energy c: each topology pins down one closure condition
on the polar sweep of its arcs, solved by a bracketing root-finder.

Sweep bookkeeping, with S_n(c) = polar sweep from the junction state
(r_in, psi = 2pi/3) to the n-th psi = pi/3 crossing (S'_n likewise from
r_out):

    n-ray star     S_1 = 2 pi / n
    brakke spoon   S_3 = 2 pi
    lens           S'_2 = pi           (junctions at r_out)
    fish           S_3 + S_1 = 2 pi
    rocket         S_2 + S_1 / 2 = pi  (top junction at r_out)

S_1(c) is the separation angle h1 reported in the catalog table.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property, lru_cache

import numpy as np
from scipy.integrate import simpson
from scipy.optimize import brentq

from . import alcurve
from .alcurve import (ALCurve, ENERGY_FLOOR, K_MIN, PolarState, SQRT2,
                      StopCondition, integrate_arc, junction_start,
                      profile_K, solve_radii, sweep_to_stop)
from .errors import (BracketingError, ConstructionError, DomainError,
                     ShrinkerLabError, TopologyError)

TWO_PI = 2.0 * math.pi
HERRING_ANGLE = TWO_PI / 3.0

#: Radius out to which unbounded curves are sampled; Gaussian-weighted
#: integrals beyond it are handled in closed form.
RAY_WINDOW_RADIUS = 12.0

CATALOG_NAMES = ("line", "circle", "standard_triod", "brakke_spoon", "lens",
                 "fish", "3_ray_star", "4_ray_star", "5_ray_star", "rocket")


@dataclass(frozen=True)
class ReferenceRow:
    """Published reference values for one catalog row (shooting seeds and
    delta targets for reporting)."""

    c: float
    r_min: float
    r_in: float
    r_out: float
    r_max: float
    h1: float

    def as_tuple(self):
        return (self.c, self.r_min, self.r_in, self.r_out, self.r_max, self.h1)


REFERENCE_TABLE = {
    "brakke_spoon": ReferenceRow(1.4021, 0.8568, 1.1390, 1.7086, 2.0596, 1.9082),
    "lens":        ReferenceRow(1.3938, 0.8649, 1.1590, 1.6858, 2.0487, 1.9497),
    "fish":        ReferenceRow(3.3597, 0.3046, 0.3546, 2.9271, 3.0511, 1.1040),
    "3_ray_star":  ReferenceRow(1.3716, 0.8878, 1.2251, 1.6121, 2.0180, TWO_PI / 3.0),
    "rocket":      ReferenceRow(1.9338, 0.5591, 0.6674, 2.3358, 2.5155, 1.2717),
    "4_ray_star":  ReferenceRow(1.5281, 0.7544, 0.9443, 1.9443, 2.2038, TWO_PI / 4.0),
    "5_ray_star":  ReferenceRow(1.9804, 0.5436, 0.6474, 2.3675, 2.5429, TWO_PI / 5.0),
}

TABLE_COLUMNS = ("c", "r_min", "r_in", "r_out", "r_max", "h1")


def rot90(v):
    """Counterclockwise quarter turn; N = eta * rot90(T-hat) at junctions."""
    v = np.asarray(v, dtype=float)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


# ---------------------------------------------------------------------------
# network data model
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NetworkCurve:
    """One sampled curve of a network.

    ``x, T, N, k, s`` are aligned arrays (arclength-uniform).  The normal is
    N = normal_sign * rot90(T) everywhere along the curve and k is the
    curvature with respect to that normal, so the shrinker equation reads
    k + <x,N>/2 = 0 sample by sample.
    """

    cid: str
    kind: str                       # al_arc | ray | circle_arc | line
    x: np.ndarray
    T: np.ndarray
    N: np.ndarray
    k: np.ndarray
    s: np.ndarray
    normal_sign: int
    endpoints: tuple                # (junction id | None, junction id | None)
    closed: bool = False
    al: ALCurve | None = None
    ray_start: np.ndarray | None = None
    ray_dir: np.ndarray | None = None

    def __post_init__(self):
        for arr in (self.x, self.T, self.N, self.k, self.s):
            arr.setflags(write=False)
        if self.ray_start is not None:
            self.ray_start.setflags(write=False)
        if self.ray_dir is not None:
            self.ray_dir.setflags(write=False)

    @property
    def n_samples(self):
        return len(self.s)

    @property
    def is_unbounded(self):
        return self.kind in ("ray", "line")

    @property
    def ray_radius(self):
        """Starting radius of a ray (distance of its junction from origin)."""
        if self.kind != "ray":
            raise DomainError(f"curve {self.cid} is not a ray")
        return float(np.linalg.norm(self.ray_start))

    def radii(self):
        return np.linalg.norm(self.x, axis=1)

    def shrinker_residual(self):
        """max |k + <x,N>/2| over the samples."""
        return float(np.max(np.abs(self.k + 0.5 * np.sum(self.x * self.N, axis=1))))


@dataclass(frozen=True)
class JunctionLeg:
    curve: str
    end: int                        # 0: curve starts here, 1: curve ends here
    tangent: np.ndarray             # unit vector pointing into the curve
    eta: int

    def __post_init__(self):
        self.tangent.setflags(write=False)


@dataclass(frozen=True)
class Junction:
    jid: str
    position: np.ndarray
    legs: tuple

    def __post_init__(self):
        self.position.setflags(write=False)

    def balance_defect(self):
        return float(np.linalg.norm(sum(leg.tangent for leg in self.legs)))

    def herring_defects(self):
        """Deviation of each pair of leg tangents from the 2*pi/3 angle."""
        out = []
        n = len(self.legs)
        for i in range(n):
            for j in range(i + 1, n):
                cosang = float(np.clip(np.dot(self.legs[i].tangent,
                                              self.legs[j].tangent), -1.0, 1.0))
                out.append(abs(math.acos(cosang) - HERRING_ANGLE))
        return out


@dataclass(frozen=True)
class Region:
    """An enclosed region: boundary legs in counterclockwise order."""

    rid: str
    legs: tuple                     # ((curve id, forward flag), ...)
    m: int                          # number of edges


@dataclass(frozen=True)
class ShrinkerNetwork:
    name: str
    curves: tuple
    junctions: tuple
    regions: tuple = ()
    energy: float | None = None
    h1: float | None = None
    mirror_axes: tuple = ()
    rotation_order: int = 1
    table: dict | None = None

    @cached_property
    def _curve_index(self):
        return {c.cid: c for c in self.curves}

    @cached_property
    def _junction_index(self):
        return {j.jid: j for j in self.junctions}

    def curve(self, cid):
        return self._curve_index[cid]

    def junction(self, jid):
        return self._junction_index[jid]

    def region(self, rid):
        for r in self.regions:
            if r.rid == rid:
                return r
        raise TopologyError(f"no region {rid!r} in {self.name}")

    def bounded_curves(self):
        return [c for c in self.curves if not c.is_unbounded]

    def max_junction_radius(self):
        if not self.junctions:
            return 0.0
        return max(float(np.linalg.norm(j.position)) for j in self.junctions)

    def curve_end_sample(self, cid, end):
        curve = self.curve(cid)
        return curve.x[0] if end == 0 else curve.x[-1]


# ---------------------------------------------------------------------------
# curve builders
# ---------------------------------------------------------------------------

def _arc_curve(cid, al, normal_sign, endpoints):
    x = al.positions()
    T = al.tangents()
    N = normal_sign * rot90(T)
    k = normal_sign * al.k
    return NetworkCurve(cid=cid, kind="al_arc", x=x, T=T, N=N, k=k.copy(),
                        s=(al.s - al.s[0]).copy(), normal_sign=normal_sign,
                        endpoints=endpoints, al=al)


def _ray_curve(cid, start, direction, normal_sign, junction_id, samples):
    start = np.asarray(start, dtype=float)
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    a = float(np.linalg.norm(start))
    s = np.linspace(0.0, max(RAY_WINDOW_RADIUS - a, 1.0), samples)
    x = start[None, :] + s[:, None] * d[None, :]
    T = np.tile(d, (samples, 1))
    N = normal_sign * rot90(T)
    return NetworkCurve(cid=cid, kind="ray", x=x, T=T, N=N,
                        k=np.zeros(samples), s=s, normal_sign=normal_sign,
                        endpoints=(junction_id, None), ray_start=start.copy(),
                        ray_dir=d.copy())


def _line_curve(cid, direction, samples):
    d = np.asarray(direction, dtype=float)
    d = d / np.linalg.norm(d)
    u = np.linspace(-RAY_WINDOW_RADIUS, RAY_WINDOW_RADIUS, samples)
    x = u[:, None] * d[None, :]
    T = np.tile(d, (samples, 1))
    N = rot90(T)
    return NetworkCurve(cid=cid, kind="line", x=x, T=T, N=N,
                        k=np.zeros(samples), s=u + RAY_WINDOW_RADIUS,
                        normal_sign=1, endpoints=(None, None),
                        ray_start=np.zeros(2), ray_dir=d.copy())


def _rotate_al(al, angle):
    return ALCurve(energy=al.energy, r=al.r.copy(),
                   theta=al.theta + angle, phi=al.phi + angle,
                   psi=al.psi.copy(), s=al.s.copy(), k=al.k.copy(),
                   orientation=al.orientation)


def _mirror_reverse_al(al, axis_angle):
    """Reflect about the line through the origin at ``axis_angle`` and
    reverse the parametrization, which keeps the traversal counterclockwise."""
    r = al.r[::-1].copy()
    theta = (2.0 * axis_angle - al.theta)[::-1].copy()
    phi = (2.0 * axis_angle - al.phi + math.pi)[::-1].copy()
    psi = (math.pi - al.psi)[::-1].copy()
    s = (al.s[-1] - al.s)[::-1].copy()
    return ALCurve(energy=al.energy, r=r, theta=theta, phi=phi, psi=psi,
                   s=s, k=al.k[::-1].copy(), orientation=al.orientation)


def _junction_from_curves(jid, position, curves_and_ends):
    """Assemble a junction from (curve, end) pairs, legs ordered
    counterclockwise by tangent direction."""
    legs = []
    for curve, end in curves_and_ends:
        if end == 0:
            that = curve.T[0].copy()
            eta = curve.normal_sign
        else:
            that = -curve.T[-1]
            eta = -curve.normal_sign
        legs.append(JunctionLeg(curve=curve.cid, end=end, tangent=that,
                                eta=eta))
    legs.sort(key=lambda leg: math.atan2(leg.tangent[1], leg.tangent[0]))
    return Junction(jid=jid, position=np.asarray(position, dtype=float),
                    legs=tuple(legs))


# ---------------------------------------------------------------------------
# shooting
# ---------------------------------------------------------------------------

def psi_crossing_sweeps(energy, count, radius="in", **kwargs):
    """Polar sweeps at the first ``count`` psi = pi/3 crossings, starting
    from the junction state (r, psi = 2pi/3) on the chosen radius branch."""
    start = junction_start(energy, 0.0, radius=radius)
    sweeps = []
    for n in range(1, count + 1):
        end = sweep_to_stop(energy, start,
                            StopCondition("psi", math.pi / 3.0, crossing=n),
                            **kwargs)
        sweeps.append(end.theta - start.theta)
    return sweeps


def _sweep(energy, crossing, radius="in"):
    start = junction_start(energy, 0.0, radius=radius)
    end = sweep_to_stop(energy, start,
                        StopCondition("psi", math.pi / 3.0, crossing=crossing))
    return end.theta - start.theta


def star_closure(n):
    """Closure functional for the n-ray star: inner-arc sweep."""
    def closure(c):
        return _sweep(c, 1)
    closure.target = TWO_PI / n
    closure.label = f"{n}-ray star sweep"
    return closure


def spoon_closure():
    def closure(c):
        return _sweep(c, 3)
    closure.target = TWO_PI
    closure.label = "spoon loop sweep"
    return closure


def lens_closure():
    def closure(c):
        return _sweep(c, 2, radius="out")
    closure.target = math.pi
    closure.label = "lens arc sweep"
    return closure


def fish_closure():
    def closure(c):
        return _sweep(c, 3) + _sweep(c, 1)
    closure.target = TWO_PI
    closure.label = "fish top+bottom sweep"
    return closure


def rocket_closure():
    def closure(c):
        return _sweep(c, 2) + 0.5 * _sweep(c, 1)
    closure.target = math.pi
    closure.label = "rocket body sweep"
    return closure


# scanning any closer to the tangency c = ENERGY_FLOOR makes the psi = pi/3
# crossings grazing and unreliable to locate
_SCAN_FLOOR = ENERGY_FLOOR + 5e-3


def shoot_energy(closure, target, c_seed, *, delta=0.2, bracket=None,
                 scan_points=25, tol=1e-10):
    """Refine the arc energy c so that closure(c) = target.

    The closure is scanned over ``c_seed * [1 - delta, 1 + delta]`` (or an
    explicit ``bracket``), clipped to the physical range, for a sign change;
    the root is then polished by a bracketing solver.  Raises
    BracketingError (carrying the scanned interval) when no sign change
    exists.
    """
    if bracket is None:
        lo, hi = c_seed * (1.0 - delta), c_seed * (1.0 + delta)
    else:
        lo, hi = bracket
    lo = max(lo, _SCAN_FLOOR)
    if hi <= lo:
        raise BracketingError(f"empty scan interval [{lo}, {hi}]",
                              scanned=(lo, hi))

    grid = np.linspace(lo, hi, scan_points)
    vals = []
    for c in grid:
        try:
            vals.append(closure(float(c)) - target)
        except ShrinkerLabError:
            vals.append(np.nan)
    vals = np.asarray(vals)

    root = None
    for i in range(len(grid) - 1):
        a, b = vals[i], vals[i + 1]
        if np.isnan(a) or np.isnan(b):
            continue
        if a == 0.0:
            root = float(grid[i])
            break
        if a * b < 0.0:
            root = brentq(lambda c: closure(c) - target,
                          grid[i], grid[i + 1], xtol=1e-13, rtol=8.9e-16)
            break
    if root is None:
        raise BracketingError(
            f"no sign change of {getattr(closure, 'label', 'closure')} - "
            f"target over c in [{lo:.6g}, {hi:.6g}]", scanned=(lo, hi))

    residual = abs(closure(root) - target)
    if residual > tol:
        raise BracketingError(
            f"root polish left residual {residual:.3e} > {tol:.1e}",
            scanned=(lo, hi))
    return root


# ---------------------------------------------------------------------------
# catalog constructions
# ---------------------------------------------------------------------------

def _realized_table(c, h1):
    r_min, r_max = solve_radii(c, 1.0)
    r_in, r_out = solve_radii(c, math.sqrt(3.0) / 2.0)
    return {"c": c, "r_min": r_min, "r_in": r_in, "r_out": r_out,
            "r_max": r_max, "h1": h1}


def _build_line(samples):
    curve = _line_curve("line", (1.0, 0.0), samples)
    return ShrinkerNetwork(name="line", curves=(curve,), junctions=(),
                           mirror_axes=(0.0, math.pi / 2.0), rotation_order=2)


def _build_circle(samples):
    theta = np.linspace(0.0, TWO_PI, samples)
    x = SQRT2 * np.stack([np.cos(theta), np.sin(theta)], axis=1)
    T = np.stack([-np.sin(theta), np.cos(theta)], axis=1)
    N = rot90(T)                       # inward
    k = np.full(samples, 1.0 / SQRT2)  # = -<x,N>/2 exactly
    curve = NetworkCurve(cid="circle", kind="circle_arc", x=x, T=T, N=N, k=k,
                         s=SQRT2 * theta, normal_sign=1,
                         endpoints=(None, None), closed=True)
    region = Region(rid="disk", legs=(("circle", True),), m=0)
    # only the x-axis mirror maps the duplicated-endpoint theta grid to
    # itself samplewise, so that is the one declared symmetry
    return ShrinkerNetwork(name="circle", curves=(curve,), junctions=(),
                           regions=(region,), energy=K_MIN,
                           mirror_axes=(0.0,), rotation_order=1)


def _build_standard_triod(samples):
    angles = [math.pi / 2.0 + j * HERRING_ANGLE for j in range(3)]
    rays = [_ray_curve(f"ray{j}", (0.0, 0.0),
                       (math.cos(a), math.sin(a)), 1, "J0", samples)
            for j, a in enumerate(angles)]
    junction = _junction_from_curves("J0", (0.0, 0.0),
                                     [(ray, 0) for ray in rays])
    return ShrinkerNetwork(name="standard_triod", curves=tuple(rays),
                           junctions=(junction,),
                           mirror_axes=(math.pi / 2.0,), rotation_order=3)


def _build_star(n, samples):
    name = f"{n}_ray_star"
    seed = REFERENCE_TABLE[name].c
    closure = star_closure(n)
    c = shoot_energy(closure, closure.target, seed)
    h1 = TWO_PI / n
    r_in, _ = solve_radii(c, math.sqrt(3.0) / 2.0)

    theta0 = -math.pi / 2.0 + h1 / 2.0
    master = integrate_arc(c, junction_start(c, theta0),
                           StopCondition("psi", math.pi / 3.0, crossing=1),
                           samples=samples)
    arcs, rays = [], []
    for j in range(n):
        al = _rotate_al(master, j * h1)
        arcs.append(_arc_curve(f"arc{j}", al, 1, (f"J{j}", f"J{(j + 1) % n}")))
        angle = theta0 + j * h1
        start = r_in * np.array([math.cos(angle), math.sin(angle)])
        rays.append(_ray_curve(f"ray{j}", start, start, 1, f"J{j}", samples))
    junctions = []
    for j in range(n):
        angle = theta0 + j * h1
        pos = r_in * np.array([math.cos(angle), math.sin(angle)])
        junctions.append(_junction_from_curves(
            f"J{j}", pos, [(rays[j], 0), (arcs[j], 0), (arcs[j - 1], 1)]))
    region = Region(rid="center", legs=tuple((f"arc{j}", True)
                                             for j in range(n)), m=n)
    return ShrinkerNetwork(name=name, curves=tuple(arcs + rays),
                           junctions=tuple(junctions), regions=(region,),
                           energy=c, h1=h1, mirror_axes=(math.pi / 2.0,),
                           rotation_order=n, table=_realized_table(c, h1))


def _build_brakke_spoon(samples):
    seed = REFERENCE_TABLE["brakke_spoon"].c
    closure = spoon_closure()
    c = shoot_energy(closure, closure.target, seed)
    h1 = _sweep(c, 1)
    r_in, _ = solve_radii(c, math.sqrt(3.0) / 2.0)

    theta0 = -math.pi / 2.0
    loop_al = integrate_arc(c, junction_start(c, theta0),
                            StopCondition("psi", math.pi / 3.0, crossing=3),
                            samples=samples)
    loop = _arc_curve("loop", loop_al, 1, ("J0", "J0"))
    start = r_in * np.array([0.0, -1.0])
    ray = _ray_curve("ray", start, start, 1, "J0", samples)
    junction = _junction_from_curves("J0", start,
                                     [(ray, 0), (loop, 0), (loop, 1)])
    region = Region(rid="drop", legs=(("loop", True),), m=1)
    return ShrinkerNetwork(name="brakke_spoon", curves=(loop, ray),
                           junctions=(junction,), regions=(region,),
                           energy=c, h1=h1, mirror_axes=(math.pi / 2.0,),
                           table=_realized_table(c, h1))


def _build_lens(samples):
    seed = REFERENCE_TABLE["lens"].c
    closure = lens_closure()
    c = shoot_energy(closure, closure.target, seed)
    h1 = _sweep(c, 1)
    _, r_out = solve_radii(c, math.sqrt(3.0) / 2.0)

    upper_al = integrate_arc(c, junction_start(c, 0.0, radius="out"),
                             StopCondition("psi", math.pi / 3.0, crossing=2),
                             samples=samples)
    lower_al = _rotate_al(upper_al, math.pi)
    upper = _arc_curve("upper_arc", upper_al, 1, ("J_R", "J_L"))
    lower = _arc_curve("lower_arc", lower_al, 1, ("J_L", "J_R"))
    p_r = np.array([r_out, 0.0])
    ray_r = _ray_curve("ray_R", p_r, p_r, 1, "J_R", samples)
    ray_l = _ray_curve("ray_L", -p_r, -p_r, 1, "J_L", samples)
    j_r = _junction_from_curves("J_R", p_r, [(ray_r, 0), (upper, 0), (lower, 1)])
    j_l = _junction_from_curves("J_L", -p_r, [(ray_l, 0), (lower, 0), (upper, 1)])
    region = Region(rid="lens", legs=(("upper_arc", True), ("lower_arc", True)),
                    m=2)
    return ShrinkerNetwork(name="lens", curves=(upper, lower, ray_r, ray_l),
                           junctions=(j_r, j_l), regions=(region,), energy=c,
                           h1=h1, mirror_axes=(0.0, math.pi / 2.0),
                           rotation_order=2, table=_realized_table(c, h1))


def _fish_frame(c):
    """Junction data shared by the fish and the rocket: two rays pointing
    downward, symmetric about the y-axis, junctions at radius r_in."""
    h1 = _sweep(c, 1)
    r_in, r_out = solve_radii(c, math.sqrt(3.0) / 2.0)
    th_r = -math.pi / 2.0 + h1 / 2.0
    th_l = -math.pi / 2.0 - h1 / 2.0
    o_r = r_in * np.array([math.cos(th_r), math.sin(th_r)])
    o_l = r_in * np.array([math.cos(th_l), math.sin(th_l)])
    return h1, r_in, r_out, th_r, th_l, o_r, o_l


def _build_fish(samples):
    seed = REFERENCE_TABLE["fish"].c
    closure = fish_closure()
    c = shoot_energy(closure, closure.target, seed)
    h1, r_in, _r_out, th_r, th_l, o_r, o_l = _fish_frame(c)

    top_al = integrate_arc(c, junction_start(c, th_r),
                           StopCondition("psi", math.pi / 3.0, crossing=3),
                           samples=samples)
    bottom_al = integrate_arc(c, junction_start(c, th_l),
                              StopCondition("psi", math.pi / 3.0, crossing=1),
                              samples=samples)
    # top curve keeps the inward normal, bottom curve the outward one, and
    # the ray normals point right/left; all junction signatures on the right
    # are then +1 and on the left -1
    gamma1 = _arc_curve("gamma1", top_al, 1, ("J_R", "J_L"))
    gamma2 = _arc_curve("gamma2", bottom_al, -1, ("J_L", "J_R"))
    ray_r = _ray_curve("ray_R", o_r, o_r, 1, "J_R", samples)
    ray_l = _ray_curve("ray_L", o_l, o_l, -1, "J_L", samples)
    j_r = _junction_from_curves("J_R", o_r,
                                [(ray_r, 0), (gamma1, 0), (gamma2, 1)])
    j_l = _junction_from_curves("J_L", o_l,
                                [(ray_l, 0), (gamma2, 0), (gamma1, 1)])
    region = Region(rid="body", legs=(("gamma1", True), ("gamma2", True)), m=2)
    return ShrinkerNetwork(name="fish",
                           curves=(gamma1, gamma2, ray_r, ray_l),
                           junctions=(j_r, j_l), regions=(region,), energy=c,
                           h1=h1, mirror_axes=(math.pi / 2.0,),
                           table=_realized_table(c, h1))


def _build_rocket(samples):
    seed = REFERENCE_TABLE["rocket"].c
    closure = rocket_closure()
    c = shoot_energy(closure, closure.target, seed)
    h1, r_in, r_out, th_r, th_l, o_r, o_l = _fish_frame(c)
    o_t = np.array([0.0, r_out])

    right_al = integrate_arc(c, junction_start(c, th_r),
                             StopCondition("psi", math.pi / 3.0, crossing=2),
                             samples=samples)
    left_al = _mirror_reverse_al(right_al, math.pi / 2.0)
    bottom_al = integrate_arc(c, junction_start(c, th_l),
                              StopCondition("psi", math.pi / 3.0, crossing=1),
                              samples=samples)
    gamma1_r = _arc_curve("gamma1_R", right_al, 1, ("J_R", "J_T"))
    gamma1_l = _arc_curve("gamma1_L", left_al, 1, ("J_T", "J_L"))
    gamma2 = _arc_curve("gamma2", bottom_al, -1, ("J_L", "J_R"))
    ray_r = _ray_curve("ray_R", o_r, o_r, 1, "J_R", samples)
    ray_l = _ray_curve("ray_L", o_l, o_l, -1, "J_L", samples)
    ray_t = _ray_curve("ray_top", o_t, o_t, 1, "J_T", samples)
    j_r = _junction_from_curves("J_R", o_r,
                                [(ray_r, 0), (gamma1_r, 0), (gamma2, 1)])
    j_l = _junction_from_curves("J_L", o_l,
                                [(ray_l, 0), (gamma2, 0), (gamma1_l, 1)])
    j_t = _junction_from_curves("J_T", o_t,
                                [(ray_t, 0), (gamma1_l, 0), (gamma1_r, 1)])
    region = Region(rid="body", legs=(("gamma1_R", True), ("gamma1_L", True),
                                      ("gamma2", True)), m=3)
    return ShrinkerNetwork(name="rocket",
                           curves=(gamma1_r, gamma1_l, gamma2,
                                   ray_r, ray_l, ray_t),
                           junctions=(j_r, j_l, j_t), regions=(region,),
                           energy=c, h1=h1, mirror_axes=(math.pi / 2.0,),
                           table=_realized_table(c, h1))


_BUILDERS = {
    "line": _build_line,
    "circle": _build_circle,
    "standard_triod": _build_standard_triod,
    "brakke_spoon": _build_brakke_spoon,
    "lens": _build_lens,
    "fish": _build_fish,
    "rocket": _build_rocket,
    "3_ray_star": lambda samples: _build_star(3, samples),
    "4_ray_star": lambda samples: _build_star(4, samples),
    "5_ray_star": lambda samples: _build_star(5, samples),
}


@lru_cache(maxsize=None)
def _build_cached(name, samples):
    net = _BUILDERS[name](samples)
    report = validate_network(net)
    if not report.passed:
        raise ConstructionError(
            f"{name} failed validation after construction: "
            f"{report.failures()}")
    return net


def build_catalog_shrinker(name, samples=2048):
    """Construct a catalog shrinker by name.

    Shooting-built networks are validated (shrinker residual, junction
    balance, Herring angles, declared symmetries) before being returned;
    results are cached per (name, samples) and immutable.
    """
    if name not in CATALOG_NAMES:
        raise DomainError(f"unknown catalog shrinker {name!r}; "
                          f"choose from {CATALOG_NAMES}")
    if samples < 16:
        raise DomainError("need at least 16 samples per curve")
    return _build_cached(name, int(samples))


# ---------------------------------------------------------------------------
# validation
# ---------------------------------------------------------------------------

DEFAULT_TOLERANCES = {
    "residual": 1e-6,
    "balance": 1e-8,
    "herring": 1e-8,
    "radial": 1e-9,
    "normal": 1e-9,
    "symmetry": 1e-9,
}


@dataclass(frozen=True)
class ValidationReport:
    name: str
    curve_residuals: dict
    normal_defects: dict
    balance_defects: dict
    herring_defects: dict
    eta_defects: dict
    ray_radiality: dict
    region_defects: dict
    symmetry_defect: float
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))

    def failures(self):
        tol = self.tolerances
        bad = []
        for cid, v in self.curve_residuals.items():
            if v > tol["residual"]:
                bad.append(f"residual[{cid}]={v:.3e}")
        for cid, v in self.normal_defects.items():
            if v > tol["normal"]:
                bad.append(f"normal[{cid}]={v:.3e}")
        for jid, v in self.balance_defects.items():
            if v > tol["balance"]:
                bad.append(f"balance[{jid}]={v:.3e}")
        for jid, v in self.herring_defects.items():
            if v > tol["herring"]:
                bad.append(f"herring[{jid}]={v:.3e}")
        for jid, v in self.eta_defects.items():
            if v > tol["normal"]:
                bad.append(f"eta[{jid}]={v:.3e}")
        for cid, v in self.ray_radiality.items():
            if v > tol["radial"]:
                bad.append(f"radial[{cid}]={v:.3e}")
        for rid, v in self.region_defects.items():
            if v > tol["radial"]:
                bad.append(f"region[{rid}]={v:.3e}")
        if self.symmetry_defect > tol["symmetry"]:
            bad.append(f"symmetry={self.symmetry_defect:.3e}")
        return bad

    @property
    def passed(self):
        return not self.failures()

    def max_shrinker_residual(self):
        return max(self.curve_residuals.values(), default=0.0)

    def as_dict(self):
        return {
            "name": self.name,
            "curve_residuals": dict(self.curve_residuals),
            "normal_defects": dict(self.normal_defects),
            "balance_defects": dict(self.balance_defects),
            "herring_defects": dict(self.herring_defects),
            "eta_defects": dict(self.eta_defects),
            "ray_radiality": dict(self.ray_radiality),
            "region_defects": dict(self.region_defects),
            "symmetry_defect": self.symmetry_defect,
            "passed": self.passed,
            "failures": self.failures(),
        }


def _mirror_matrix(axis_angle):
    c, s = math.cos(2.0 * axis_angle), math.sin(2.0 * axis_angle)
    return np.array([[c, s], [s, -c]])


def _pointset_match_defect(net, transform):
    """Hausdorff-style defect of the sampled network under a rigid map.

    Every transformed curve must coincide with some curve of the network,
    traversed either way; curves are arclength-uniform so sample sets align.
    """
    worst = 0.0
    for curve in net.curves:
        tx = curve.x @ transform.T
        best = math.inf
        for other in net.curves:
            if other.n_samples != curve.n_samples or other.kind != curve.kind:
                continue
            d_fwd = float(np.max(np.linalg.norm(other.x - tx, axis=1)))
            d_rev = float(np.max(np.linalg.norm(other.x[::-1] - tx, axis=1)))
            best = min(best, d_fwd, d_rev)
        worst = max(worst, best)
    return worst


def validate_network(net, tolerances=None):
    """Measure every structural defect of a network against the shrinker,
    balance, Herring, radiality, and symmetry conditions."""
    tol = dict(DEFAULT_TOLERANCES)
    if tolerances:
        tol.update(tolerances)

    curve_residuals, normal_defects, ray_radiality = {}, {}, {}
    for curve in net.curves:
        curve_residuals[curve.cid] = curve.shrinker_residual()
        unit = np.abs(np.linalg.norm(curve.N, axis=1) - 1.0).max()
        ortho = np.abs(np.sum(curve.N * curve.T, axis=1)).max()
        sign = np.abs(curve.N - curve.normal_sign * rot90(curve.T)).max()
        normal_defects[curve.cid] = float(max(unit, ortho, sign))
        if curve.kind == "ray":
            a = curve.ray_radius
            if a > 0.0:
                cross = abs(curve.ray_start[0] * curve.ray_dir[1]
                            - curve.ray_start[1] * curve.ray_dir[0])
                ray_radiality[curve.cid] = float(cross / a)
            else:
                ray_radiality[curve.cid] = 0.0

    balance_defects, herring_defects, eta_defects = {}, {}, {}
    for j in net.junctions:
        balance_defects[j.jid] = j.balance_defect()
        herring_defects[j.jid] = max(j.herring_defects(), default=0.0)
        worst_eta = 0.0
        for leg in j.legs:
            curve = net.curve(leg.curve)
            n_at = curve.N[0] if leg.end == 0 else curve.N[-1]
            worst_eta = max(worst_eta, float(
                np.max(np.abs(n_at - leg.eta * rot90(leg.tangent)))))
        eta_defects[j.jid] = worst_eta

    region_defects = {}
    for region in net.regions:
        region_defects[region.rid] = _region_chain_defect(net, region)

    symmetry = 0.0
    for axis in net.mirror_axes:
        symmetry = max(symmetry, _pointset_match_defect(net, _mirror_matrix(axis)))
    if net.rotation_order > 1:
        ang = TWO_PI / net.rotation_order
        rot = np.array([[math.cos(ang), -math.sin(ang)],
                        [math.sin(ang), math.cos(ang)]])
        symmetry = max(symmetry, _pointset_match_defect(net, rot))

    return ValidationReport(
        name=net.name, curve_residuals=curve_residuals,
        normal_defects=normal_defects, balance_defects=balance_defects,
        herring_defects=herring_defects, eta_defects=eta_defects,
        ray_radiality=ray_radiality, region_defects=region_defects,
        symmetry_defect=symmetry, tolerances=tol)


def _region_chain_defect(net, region):
    """Positional mismatch along the region boundary chain."""
    ends = []
    for cid, forward in region.legs:
        curve = net.curve(cid)
        a, b = (curve.x[0], curve.x[-1]) if forward else (curve.x[-1], curve.x[0])
        ends.append((a, b))
    worst = 0.0
    for i in range(len(ends)):
        b = ends[i][1]
        a_next = ends[(i + 1) % len(ends)][0]
        worst = max(worst, float(np.linalg.norm(b - a_next)))
    return worst


def scale_network(net, alpha):
    """Rescale a network by alpha (curvature scales by 1/alpha).

    Shrinkers are scale-rigid: for alpha != 1 the scaled network violates
    the shrinker equation, which validate_network then reports.
    """
    if alpha <= 0.0:
        raise DomainError("scale factor must be positive")
    curves = []
    for c in net.curves:
        curves.append(replace(
            c, x=alpha * c.x, T=c.T.copy(), N=c.N.copy(), k=c.k / alpha,
            s=alpha * c.s, al=None,
            ray_start=None if c.ray_start is None else alpha * c.ray_start,
            ray_dir=None if c.ray_dir is None else c.ray_dir.copy()))
    junctions = []
    for j in net.junctions:
        legs = tuple(JunctionLeg(curve=l.curve, end=l.end,
                                 tangent=l.tangent.copy(), eta=l.eta)
                     for l in j.legs)
        junctions.append(Junction(jid=j.jid, position=alpha * j.position,
                                  legs=legs))
    return ShrinkerNetwork(name=f"{net.name}_scaled", curves=tuple(curves),
                           junctions=tuple(junctions), regions=net.regions,
                           energy=None, h1=None,
                           mirror_axes=net.mirror_axes,
                           rotation_order=net.rotation_order)


# ---------------------------------------------------------------------------
# area rate and Gauss-Bonnet
# ---------------------------------------------------------------------------

def area_rate(m):
    """Shrinkage rate (m - 6) pi / 3 of the area of an m-edged region."""
    if not isinstance(m, (int, np.integer)):
        raise DomainError("edge count must be an integer")
    if m < 2:
        raise DomainError("edge count must be at least 2")
    return (m - 6) * math.pi / 3.0


def gauss_bonnet_check(net, region_id):
    """Defect of the turning identity around a region boundary.

    Integrates the curvature around the boundary (with the traversal
    orientation), adds m exterior angles of pi/3, and returns the deviation
    from 2*pi.
    """
    region = net.region(region_id)
    if _region_chain_defect(net, region) > 1e-6:
        raise TopologyError(
            f"region {region_id!r} boundary legs are not consistently "
            "oriented")
    total_turn = 0.0
    for cid, forward in region.legs:
        curve = net.curve(cid)
        # curvature with respect to the left normal of the traversal
        k_left = curve.normal_sign * curve.k
        contribution = float(simpson(k_left, x=curve.s))
        total_turn += contribution if forward else -contribution
    return total_turn + region.m * math.pi / 3.0 - TWO_PI
