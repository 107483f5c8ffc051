"""
Shooting integrator for u'' + (N-1)/r u' + f(u) = 0, u(0) = alpha, u'(0) = 0.

The singular point r = 0 is bridged with a fourth order series; from there
scipy's DOP853 is stepped by hand so that zeros, extrema and level crossings
can be bracketed on each step's dense interpolant and polished with brentq.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import DOP853, OdeSolution
from scipy.optimize import brentq, minimize_scalar

from radial_shoot import settings
from radial_shoot.exceptions import (
    ConfigError,
    OscillationFault,
    OutOfRange,
    StepFailure,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProblemConfig:
    N: int
    alpha: float
    rel_tol: float = settings.REL_TOL
    abs_tol: float = settings.ABS_TOL
    r_max: float = settings.R_MAX
    eps_zero: float = settings.EPS_ZERO
    eps_double: float = settings.EPS_DOUBLE
    k_cap: int = settings.K_CAP
    gap: Optional[float] = None

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ConfigError(f"N must be an integer >= 2, got {self.N!r}.")
        if self.rel_tol <= 0 or self.abs_tol <= 0:
            raise ConfigError("rel_tol and abs_tol must be positive.")
        if self.r_max <= 0:
            raise ConfigError("r_max must be positive.")
        if not self.eps_double >= self.eps_zero > 0:
            raise ConfigError("Thresholds must satisfy eps_double >= eps_zero > 0.")
        if self.k_cap < 1:
            raise ConfigError("k_cap must be at least 1.")
        if self.gap is not None and not self.gap >= 0:
            raise ConfigError(f"gap must be non-negative, got {self.gap!r}.")

    def with_alpha(self, alpha):
        return replace(self, alpha=float(alpha), gap=None)

    def with_gap(self, gap, top):
        """alpha = top - gap, with the gap kept exactly; top must be the model's gamma_star."""
        return replace(self, alpha=float(top - gap), gap=float(gap))


class EventKind(str, Enum):
    SIMPLE_ZERO = "SimpleZero"
    EXTREMUM = "Extremum"
    DOUBLE_ZERO = "DoubleZero"
    LEVEL_CROSSING = "LevelCrossing"


@dataclass(frozen=True)
class Event:
    kind: EventKind
    r: float
    u: float
    uprime: float
    I: float
    sign: Optional[int] = None
    level: Optional[str] = None

    def to_dict(self):
        data = {"kind": self.kind.value, "r": self.r, "u": self.u, "uprime": self.uprime, "I": self.I}
        if self.sign is not None:
            data["sign"] = self.sign
        if self.level is not None:
            data["level"] = self.level
        return data


class TerminationKind(str, Enum):
    DOUBLE_ZERO = "DoubleZeroAt"
    CONVERGED = "ConvergedTo"
    TRAPPED = "TrappedInWell"
    REACHED_RMAX = "ReachedRmax"
    OSCILLATION = "OscillationFault"


@dataclass(frozen=True)
class Termination:
    kind: TerminationKind
    r: float
    value: Optional[float] = None
    certificate: dict = field(default_factory=dict)

    def to_dict(self):
        return {"reason": self.kind.value, "r": self.r, "value": self.value, "certificate": dict(self.certificate)}


@dataclass(frozen=True)
class SeriesStart:
    """
    u(r) = alpha + a r**2 + b r**4 on [0, r0].

    The solution is carried as w = anchor - u. The anchor is alpha itself, or
    gamma_star when alpha is too close to it to be told apart in floating
    point; w0 = anchor - alpha is then the exact gap.
    """
    alpha: float
    a: float
    b: float
    r0: float
    anchor: float
    w0: float = 0.0

    def deviation(self, r):
        return self.w0 - self.a * r ** 2 - self.b * r ** 4, 2 * self.a * r + 4 * self.b * r ** 3

    def state(self, r):
        w, v = self.deviation(r)
        return self.anchor - w, v


class AnchoredSolution:
    """Dense output in (u, u') of a solution integrated as (anchor - u, u')."""

    def __init__(self, solution, anchor):
        self.solution = solution
        self.anchor = anchor

    @property
    def ts(self):
        return self.solution.ts

    def deviation(self, r):
        return self.solution(r)

    def __call__(self, r):
        y = np.array(self.solution(r), dtype=float)
        y[0] = self.anchor - y[0]
        return y


@dataclass(frozen=True, eq=False)
class Trajectory:
    """An integrated solution; immutable and safe to share between threads."""
    config: ProblemConfig
    model: object
    series: SeriesStart
    solution: Optional[AnchoredSolution]
    samples: np.ndarray
    events: tuple
    termination: Termination
    I0: float

    @property
    def r_end(self):
        return self.termination.r

    @property
    def N(self):
        return self.config.N

    def state(self, r):
        """(u, u') at radius r from the series or the dense output."""
        if not 0.0 <= r <= self.r_end * (1 + 1e-14):
            raise OutOfRange(f"r = {r!r} lies outside [0, {self.r_end!r}].")
        if r <= self.series.r0 or self.solution is None:
            return self.series.state(r)
        u, v = self.solution(r)
        return float(u), float(v)

    def states(self, rs):
        rs = np.asarray(rs, dtype=float)
        out = np.empty((2, rs.size))
        inner = rs <= self.series.r0
        for j in np.flatnonzero(inner):
            out[:, j] = self.series.state(rs[j])
        if np.any(~inner):
            out[:, ~inner] = self.solution(rs[~inner])
        return out

    def zeros(self):
        return [e for e in self.events if e.kind is EventKind.SIMPLE_ZERO]

    def extrema(self):
        return [e for e in self.events if e.kind is EventKind.EXTREMUM]

    def breakpoints(self, r1, r2):
        """Step boundaries inside [r1, r2], ends included."""
        ts = [self.series.r0] + (list(self.solution.ts) if self.solution is not None else [])
        return [r1] + [t for t in ts if r1 < t < r2] + [r2]


def _anchor(model, config):
    """(anchor, gap, f(alpha)) for a run."""
    top = model.gamma_star
    gap = config.gap
    if gap is None and math.isfinite(top):
        candidate = top - config.alpha
        if 0.0 <= candidate <= settings.TOP_ANCHOR_GAP * max(1.0, abs(top)):
            gap = candidate
    if gap is None:
        return config.alpha, 0.0, model.f_unchecked(config.alpha)
    if not math.isfinite(top):
        raise ConfigError("A gap below gamma_star needs a finite gamma_star.")
    return top, gap, model.f_near_top(gap)


def _series(model, config, r0=None):
    model._check(config.alpha)
    N = config.N
    anchor, gap, f = _anchor(model, config)
    a = -f / (2 * N)
    b = f * model.df_unchecked(config.alpha) / (8 * N * (N + 2))
    if r0 is None:
        r0 = settings.SERIES_R0_CAP
        if b != 0.0:
            r0 = min(r0, (config.abs_tol / abs(b)) ** 0.25)
    return SeriesStart(config.alpha, a, b, float(r0), anchor, gap)


def _scaled_atol(config, scale):
    """abs_tol, tightened to rel_tol * scale for components that start tiny."""
    if scale == 0.0:
        return config.abs_tol
    return min(config.abs_tol, max(config.rel_tol * abs(scale), settings.ATOL_FLOOR))


def series_start(model, config, r0=None):
    """
    State at a small radius r0 from the regular expansion at the origin.

    u(r) = alpha - f r**2/(2N) + f f' r**4/(8N(N+2)) + O(r**6); r0 is chosen so
    the quartic term stays below abs_tol.
    """
    series = _series(model, config, r0)
    u, v = series.state(series.r0)
    return series.r0, u, v


def origin_well_depth(model):
    """max |F| over the F < 0 well around the origin, 1.0 when there is none."""
    left = model.level_roots(0.0, model.lower, 0.0)
    right = model.level_roots(0.0, 0.0, model.analysis_upper)
    a = left[-1] if left else model.lower
    b = right[0] if right else model.analysis_upper
    value, _ = model.extremum_F(a, b, "min")
    return -value if value < 0 else 1.0


def _crossings(ts, values, target, dense, component, xtol, floor=0.0):
    """Roots of dense(r)[component] = target; sign flips no larger than floor are noise."""
    found = []
    g = values - target
    for j in range(1, len(ts)):
        if g[j - 1] == 0.0:
            continue
        if max(abs(g[j - 1]), abs(g[j])) <= floor:
            continue
        if g[j] == 0.0:
            found.append(ts[j])
        elif g[j - 1] * g[j] < 0:
            found.append(brentq(lambda r: dense(r)[component] - target, ts[j - 1], ts[j], xtol=xtol))
    return found


class _Integration:
    """Mutable state of a single run; produces a frozen Trajectory."""

    def __init__(self, model, config, landmarks=None, levels=None, stop_level=None):
        self.model = model
        self.config = config
        self.landmarks = landmarks
        self.levels = dict(levels or {})
        self.stop_level = stop_level
        self.series = _series(model, config)
        self.anchor = self.series.anchor
        if math.isfinite(model.gamma_star) and self.anchor == model.gamma_star:
            self.f_dev = model.f_near_top
        else:
            self.f_dev = lambda w: model.f_unchecked(self.anchor - w)
        self.I0 = model.F_unchecked(config.alpha)
        self.double_threshold = config.eps_double * math.sqrt(2.0 * origin_well_depth(model))
        self.wells = landmarks.wells(model) if landmarks is not None else []
        self.equilibria = [z for z, _, _, _ in model.zeros_of_f()]
        self.events = []
        self.zero_count = 0
        self.converging_since = None
        self.converging_to = None
        self.trapped_in = None
        self.v_floor = 0.0

    def energy(self, u, v):
        return 0.5 * v * v + self.model.F_unchecked(u)

    def rhs(self, r, y):
        # y = (anchor - u, u')
        return np.array([-y[1], -(self.config.N - 1) / r * y[1] - self.f_dev(y[0])])

    def well_of(self, u):
        for i, lo, hi, level in self.wells:
            if lo < u < hi:
                return i, lo, hi, level
        return None

    def run(self):
        config = self.config
        anchor = self.anchor
        r0 = self.series.r0
        w0, v0 = self.series.deviation(r0)
        u0 = anchor - w0
        samples = [(0.0, config.alpha, 0.0), (r0, u0, v0)]
        ts, interpolants = [r0], []
        termination = None

        if r0 >= config.r_max:
            termination = Termination(TerminationKind.REACHED_RMAX, r0, certificate={"u": u0, "uprime": v0})
        atol = [_scaled_atol(config, w0), _scaled_atol(config, v0)]
        self.v_floor = atol[1]
        solver = DOP853(self.rhs, r0, [w0, v0], config.r_max, rtol=config.rel_tol, atol=atol)

        while termination is None:
            message = solver.step()
            if solver.status == "failed":
                raise StepFailure(f"Step controller failed at r = {solver.t!r}: {message}")
            dense = solver.dense_output()
            t_old, t_new = solver.t_old, solver.t
            ts.append(t_new)
            interpolants.append(dense)

            termination = self.scan_step(dense, t_old, t_new)
            if termination is not None:
                break
            w, v = solver.y
            u = anchor - w
            samples.append((t_new, u, v))
            termination = self.check_terminal(t_new, u, v)
            if termination is None and solver.status == "finished":
                termination = Termination(
                    TerminationKind.REACHED_RMAX, t_new, certificate={"u": u, "uprime": v, "I": self.energy(u, v)}
                )

        if termination.r > samples[-1][0]:
            if interpolants:
                w, v = interpolants[-1](termination.r)
                u = anchor - w
            else:
                u, v = self.series.state(termination.r)
            samples.append((termination.r, float(u), float(v)))

        solution = AnchoredSolution(OdeSolution(ts, interpolants), anchor) if interpolants else None
        logger.debug("alpha=%r terminated with %s at r=%r", config.alpha, termination.kind.value, termination.r)
        traj = Trajectory(
            config=config,
            model=self.model,
            series=self.series,
            solution=solution,
            samples=np.array(samples),
            events=tuple(self.events),
            termination=termination,
            I0=self.I0,
        )
        if termination.kind is TerminationKind.OSCILLATION:
            raise OscillationFault(
                f"alpha = {config.alpha!r} changed sign more than {config.k_cap} times.", trajectory=traj
            )
        return traj

    def scan_step(self, dense, t_old, t_new):
        anchor = self.anchor
        grid = np.linspace(t_old, t_new, settings.EVENT_SUBSAMPLES + 1)
        values = dense(grid)
        xtol = self.config.eps_zero
        found = []
        for r in _crossings(grid, values[0], anchor, dense, 0, xtol):
            found.append((r, "zero", None))
        for r in _crossings(grid, values[1], 0.0, dense, 1, xtol, floor=self.v_floor):
            found.append((r, "extremum", None))
        for name, target in self.levels.items():
            for r in _crossings(grid, values[0], anchor - target, dense, 0, xtol):
                found.append((r, "level", name))
        found.sort(key=lambda item: item[0])

        for r, what, name in found:
            w, v = (float(x) for x in dense(r))
            u = anchor - w
            I = self.energy(u, v)
            if what == "zero":
                if abs(v) <= self.double_threshold:
                    self.events.append(Event(EventKind.DOUBLE_ZERO, r, u, v, I))
                    return Termination(
                        TerminationKind.DOUBLE_ZERO,
                        r,
                        value=0.0,
                        certificate={"u": u, "uprime": v, "I": I, "threshold": self.double_threshold},
                    )
                self.zero_count += 1
                self.events.append(Event(EventKind.SIMPLE_ZERO, r, u, v, I, sign=1 if v > 0 else -1))
                if self.zero_count > self.config.k_cap:
                    return Termination(
                        TerminationKind.OSCILLATION, r, certificate={"zeros": self.zero_count, "u": u, "uprime": v}
                    )
            elif what == "extremum":
                self.events.append(Event(EventKind.EXTREMUM, r, u, v, I))
                if self.trapped_in is not None:
                    return self.trapped(r, u, v, I)
            else:
                self.events.append(Event(EventKind.LEVEL_CROSSING, r, u, v, I, level=name))
                if name == self.stop_level:
                    return Termination(
                        TerminationKind.REACHED_RMAX, r, certificate={"stopped_at": name, "u": u, "uprime": v, "I": I}
                    )
        return None

    def trapped(self, r, u, v, I):
        i, lo, hi, level = self.trapped_in
        return Termination(
            TerminationKind.TRAPPED,
            r,
            value=i,
            certificate={"well": i, "lo": lo, "hi": hi, "level": level, "u": u, "uprime": v, "I": I},
        )

    def extremum_since_last_zero(self):
        for event in reversed(self.events):
            if event.kind is EventKind.SIMPLE_ZERO:
                return False
            if event.kind is EventKind.EXTREMUM:
                return True
        return False

    def check_terminal(self, r, u, v):
        I = self.energy(u, v)

        if self.wells and self.trapped_in is None:
            well = self.well_of(u)
            if well is not None and I < well[3]:
                self.trapped_in = well
                if self.extremum_since_last_zero():
                    return self.trapped(r, u, v, I)

        if self.equilibria:
            ell = min(self.equilibria, key=lambda z: abs(u - z))
            tol = settings.CONVERGENCE_TOL
            F_ell = self.model.F_unchecked(ell)
            curvature = max(1.0, abs(self.model.df_unchecked(ell)))
            close = abs(u - ell) <= tol and abs(v) <= tol and abs(I - F_ell) <= tol * tol * curvature
            if close and self.converging_to == ell:
                if r - self.converging_since >= settings.CONVERGENCE_WINDOW:
                    return Termination(
                        TerminationKind.CONVERGED,
                        r,
                        value=ell,
                        certificate={"u": u, "uprime": v, "I": I, "F_level": F_ell, "since": self.converging_since},
                    )
            elif close:
                self.converging_to, self.converging_since = ell, r
            else:
                self.converging_to = self.converging_since = None
        return None


def integrate(model, config, landmarks=None, levels=None, stop_level=None):
    """
    Integrate from the origin until a termination certificate is reached.

    Args:
        model (NonlinearityModel): the profile f.
        config (ProblemConfig): dimension, initial value and tolerances. With
            config.gap set, or alpha within TOP_ANCHOR_GAP of a finite
            gamma_star, the run is carried as the deviation from gamma_star.
        landmarks (Landmarks, optional): enables the well-trapping termination.
        levels (dict, optional): name -> u value; adds LevelCrossing events.
        stop_level (str, optional): truncate at the first crossing of this level.

    Returns:
        Trajectory: the solution, its events and its termination.

    Raises:
        OutOfDomain: if alpha is outside the model's domain.
        OscillationFault: if the sign changes exceed config.k_cap; the
            trajectory up to that point, terminated with
            TerminationKind.OSCILLATION, rides on the exception.
        StepFailure: if the step controller gives up.
    """
    return _Integration(model, config, landmarks, levels, stop_level).run()


def energy_I(traj, r):
    u, v = traj.state(r)
    return 0.5 * v * v + traj.model.F_unchecked(u)


def big_H(traj, r):
    return r ** (2 * (traj.N - 1)) * energy_I(traj, r)


def tilde_H(traj, r, level):
    return r ** (2 * (traj.N - 1)) * (energy_I(traj, r) - level)


def pohozaev_E(traj, r, N=None):
    N = traj.N if N is None else N
    u, v = traj.state(r)
    I = 0.5 * v * v + traj.model.F_unchecked(u)
    return 2 * r ** N * I + (N - 2) * r ** (N - 1) * v * u


def _gauss(traj, r1, r2, integrand):
    nodes, weights = np.polynomial.legendre.leggauss(settings.GAUSS_POINTS)
    total = 0.0
    knots = traj.breakpoints(r1, r2)
    for a, b in zip(knots[:-1], knots[1:]):
        if b <= a:
            continue
        rs = 0.5 * (b - a) * nodes + 0.5 * (a + b)
        u, v = traj.states(rs)
        total += 0.5 * (b - a) * float(np.dot(weights, integrand(rs, u, v)))
    return total


def _check_interval(traj, r1, r2):
    if r1 > r2:
        raise OutOfRange(f"Expected r1 <= r2, got {r1!r} > {r2!r}.")
    traj.state(r1)
    traj.state(r2)


def energy_residual(traj, r1, r2):
    """|I(r2) - I(r1) + (N-1) int_r1^r2 u'^2/t dt|."""
    _check_interval(traj, r1, r2)
    if r1 == r2:
        return 0.0
    N = traj.N
    dissipated = _gauss(traj, r1, r2, lambda t, u, v: v * v / t)
    return abs(energy_I(traj, r2) - energy_I(traj, r1) + (N - 1) * dissipated)


def pohozaev_residual(traj, r1, r2):
    """|E(r2) - E(r1) - int_r1^r2 t^(N-1) Q(u(t)) dt|."""
    _check_interval(traj, r1, r2)
    if r1 == r2:
        return 0.0
    N = traj.N
    model = traj.model
    Q = np.vectorize(lambda s: model.Q_unchecked(N, s))
    source = _gauss(traj, r1, r2, lambda t, u, v: t ** (N - 1) * Q(u))
    return abs(pohozaev_E(traj, r2) - pohozaev_E(traj, r1) - source)


def count_sign_changes(traj):
    return len(traj.zeros())


def closest_approach(traj, after_r=0.0):
    """
    Radius and state where |u| + |u'| is smallest on [after_r, r_end].

    Returns:
        tuple: (r, u, u', |u| + |u'|)
    """
    samples = traj.samples[traj.samples[:, 0] >= after_r]
    if samples.shape[0] == 0:
        raise OutOfRange(f"No samples beyond r = {after_r!r}.")
    j = int(np.argmin(np.abs(samples[:, 1]) + np.abs(samples[:, 2])))
    lo = samples[max(j - 1, 0), 0]
    hi = samples[min(j + 1, samples.shape[0] - 1), 0]
    best = samples[j, 0]
    if hi > lo:
        result = minimize_scalar(
            lambda r: sum(abs(x) for x in traj.state(r)), bounds=(lo, hi), method="bounded", options={"xatol": 1e-12}
        )
        if result.fun < abs(samples[j, 1]) + abs(samples[j, 2]):
            best = float(result.x)
    u, v = traj.state(best)
    return best, u, v, abs(u) + abs(v)
