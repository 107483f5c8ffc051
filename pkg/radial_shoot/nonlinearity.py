"""
Nonlinearity profiles f, their primitive F and the Pohozaev integrand Q.

A model is immutable once built. All analytic work (roots, level points,
interval extrema) is done on the exact piecewise polynomials, never on
samples; sampling is only used where a hypothesis is inherently global.
"""
import logging
import math
from bisect import bisect_right
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicHermiteSpline, PPoly
from scipy.optimize import brentq

from radial_shoot import settings
from radial_shoot.exceptions import (
    InvalidModel,
    LandmarkNotFound,
    LevelNotAttained,
    OutOfDomain,
)

logger = logging.getLogger(__name__)


class ModelKind(str, Enum):
    POLYNOMIAL = "polynomial"
    HERMITE = "hermite"
    HERMITE_POWER_TAIL = "hermite+powertail"


class Case(str, Enum):
    A1 = "A1"
    A2 = "A2"
    NEITHER = "Neither"


@dataclass(frozen=True)
class ControlPoint:
    s: float
    F: float
    f: float


@dataclass(frozen=True)
class PowerTail:
    """f(s) = c * s**p for s >= s_tail."""
    c: float
    p: float
    s_tail: float


class NonlinearityModel:
    """
    The profile f on (gamma_star_minus, gamma_star] with F(s) = int_0^s f.

    Attributes:
        kind (ModelKind): how f is described.
        gamma_star_minus (float): left endpoint, may be -inf.
        gamma_star (float): right endpoint, +inf selects the unbounded case.
        coefficients (tuple): ascending coefficients of f (polynomial kind).
        points (tuple[ControlPoint]): Hermite control rows (s, F, f).
        tail (PowerTail): power tail for the hermite+powertail kind.
    """

    def __init__(self, kind, gamma_star_minus, gamma_star, coefficients=(), points=(), tail=None):
        self.kind = ModelKind(kind)
        self.gamma_star_minus = float(gamma_star_minus)
        self.gamma_star = float(gamma_star)
        self.coefficients = tuple(float(c) for c in coefficients)
        self.points = tuple(p if isinstance(p, ControlPoint) else ControlPoint(*map(float, p)) for p in points)
        self.tail = tail

        if not self.gamma_star_minus < 0 < self.gamma_star:
            raise InvalidModel("The domain endpoints must satisfy gamma_star_minus < 0 < gamma_star.")

        if self.kind is ModelKind.POLYNOMIAL:
            self._build_polynomial()
        else:
            self._build_hermite()

        self._breaks = [float(x) for x in self._F_pp.x]
        count = self._F_pp.c.shape[1]
        if self.kind is ModelKind.POLYNOMIAL:
            # Horner in native coordinates on every piece
            self._origins = [0.0] * count
            self._coef_F = [tuple(float(v) for v in self._F_poly.coef[::-1])] * count
            self._coef_f = [tuple(float(v) for v in self._f_poly.coef[::-1])] * count
        else:
            self._origins = self._breaks[:count]
            self._coef_F = [tuple(float(v) for v in self._F_pp.c[:, i]) for i in range(count)]
            self._coef_f = [tuple(float(v) for v in self._f_pp.c[:, i]) for i in range(count)]
        self._top = self._top_expansion() if math.isfinite(self.gamma_star) else None

    # construction

    def _build_polynomial(self):
        if not self.coefficients:
            raise InvalidModel("A polynomial model needs at least one coefficient.")
        if self.coefficients[0] != 0.0:
            raise InvalidModel("f(0) must vanish: the constant coefficient has to be 0.")
        f_poly = Polynomial(self.coefficients)
        F_poly = f_poly.integ(lbnd=0.0)
        self._f_poly, self._F_poly = f_poly, F_poly

        if math.isinf(self.gamma_star):
            real_roots = [abs(r.real) for r in f_poly.roots() if abs(r.imag) < 1e-12] if f_poly.degree() > 0 else []
            self.analysis_upper = 8.0 * max([1.0] + real_roots)
        else:
            self.analysis_upper = self.gamma_star

        if math.isinf(self.gamma_star_minus):
            self.lower = self._polynomial_floor(F_poly)
        else:
            self.lower = self.gamma_star_minus

        # The break at 0 keeps the positive piece in native coordinates for
        # the root finders; evaluation never goes through the shifted piece.
        left = F_poly(Polynomial([self.lower, 1.0]))
        degree = max(left.degree(), F_poly.degree(), 0)
        coef = np.zeros((degree + 1, 2))
        coef[: len(left.coef), 0] = left.coef
        coef[: len(F_poly.coef), 1] = F_poly.coef
        self._F_pp = PPoly(coef[::-1], [self.lower, 0.0, self.analysis_upper])
        self._f_pp = self._F_pp.derivative()

    def _polynomial_floor(self, F_poly):
        grid = np.linspace(0.0, self.analysis_upper, 257)
        reference = max(0.0, float(np.max(F_poly(grid))))
        for j in range(31):
            s = -(2.0 ** j)
            if F_poly(s) >= settings.FLOOR_HEADROOM * reference and F_poly(s) > 0:
                return s
        return -1024.0

    def _build_hermite(self):
        if len(self.points) < 2:
            raise InvalidModel("A Hermite model needs at least two control points.")
        xs = np.array([p.s for p in self.points])
        if np.any(np.diff(xs) <= 0):
            raise InvalidModel("Control point abscissae must be strictly increasing.")
        zero = [p for p in self.points if p.s == 0.0]
        if not zero or zero[0].F != 0.0 or zero[0].f != 0.0:
            raise InvalidModel("A control point (0, 0, 0) is required so that F(0) = f(0) = 0.")

        if self.kind is ModelKind.HERMITE_POWER_TAIL:
            tail = self.tail
            if tail is None:
                raise InvalidModel("The hermite+powertail kind requires tail parameters.")
            if tail.c <= 0 or tail.p < 1:
                raise InvalidModel("The power tail needs c > 0 and p >= 1.")
            last = self.points[-1]
            if last.s != tail.s_tail or tail.s_tail <= 0:
                raise InvalidModel("The last control point must sit at s_tail > 0.")
            if not math.isclose(last.f, tail.c * tail.s_tail ** tail.p, rel_tol=1e-9, abs_tol=1e-12):
                raise InvalidModel("f is discontinuous at s_tail: the last control slope must equal c*s_tail**p.")
            if not math.isinf(self.gamma_star):
                raise InvalidModel("A power tail only makes sense with gamma_star = inf.")
        elif self.tail is not None:
            raise InvalidModel("Tail parameters are only valid for the hermite+powertail kind.")

        if math.isinf(self.gamma_star):
            self.analysis_upper = 8.0 * max(1.0, xs[-1]) if self.tail is not None else float(xs[-1])
        else:
            if xs[-1] != self.gamma_star:
                raise InvalidModel("The last control point must sit at gamma_star.")
            self.analysis_upper = self.gamma_star

        if math.isinf(self.gamma_star_minus):
            self.lower = float(xs[0])
        else:
            if xs[0] != self.gamma_star_minus:
                raise InvalidModel("The first control point must sit at gamma_star_minus.")
            self.lower = self.gamma_star_minus

        spline = CubicHermiteSpline(xs, [p.F for p in self.points], [p.f for p in self.points], extrapolate=True)
        self._F_pp = PPoly(spline.c, spline.x, extrapolate=True)
        self._f_pp = self._F_pp.derivative()

    # evaluation

    @property
    def s_tail(self):
        return self.tail.s_tail if self.tail is not None else math.inf

    def in_domain(self, s):
        if math.isinf(self.gamma_star_minus):
            above = s >= self.lower if self.kind is not ModelKind.POLYNOMIAL else True
        else:
            above = s > self.gamma_star_minus
        return above and s <= self.gamma_star and math.isfinite(s)

    def _check(self, s):
        if not self.in_domain(s):
            raise OutOfDomain(s, self.gamma_star_minus, self.gamma_star)

    def _segment(self, s):
        i = bisect_right(self._breaks, s) - 1
        return min(max(i, 0), len(self._coef_F) - 1)

    def f_unchecked(self, s):
        """f without the domain check; pieces are extended polynomially."""
        if s > self.s_tail:
            return self.tail.c * s ** self.tail.p
        i = self._segment(s)
        x = s - self._origins[i]
        value = 0.0
        for c in self._coef_f[i]:
            value = value * x + c
        return value

    def F_unchecked(self, s):
        if s > self.s_tail:
            t = self.tail
            return self._F_tail0 + t.c * (s ** (t.p + 1) - t.s_tail ** (t.p + 1)) / (t.p + 1)
        i = self._segment(s)
        x = s - self._origins[i]
        value = 0.0
        for c in self._coef_F[i]:
            value = value * x + c
        return value

    @property
    def _F_tail0(self):
        return self.points[-1].F

    def df_unchecked(self, s):
        """Derivative of f, used by the series start."""
        if s > self.s_tail:
            t = self.tail
            return t.c * t.p * s ** (t.p - 1)
        i = self._segment(s)
        x = s - self._origins[i]
        coef = self._coef_f[i]
        degree = len(coef) - 1
        value = 0.0
        for power, c in zip(range(degree, 0, -1), coef[:-1]):
            value = value * x + power * c
        return value

    def _top_expansion(self):
        """Ascending coefficients of f in y = s - gamma_star on the last piece, and the piece length."""
        i = self._segment(self.gamma_star)
        origin = self._origins[i]
        local = Polynomial(self._coef_f[i][::-1])
        coef = [float(c) for c in local(Polynomial([self.gamma_star - origin, 1.0])).coef]
        # f(gamma_star) is data, not the result of a cancelling sum
        coef[0] = self.points[-1].f if self.points else float(self._f_poly(self.gamma_star))
        reach = self.gamma_star - self._breaks[i] if self.points else self.gamma_star - self.lower
        return tuple(coef), reach

    def f_near_top(self, w):
        """
        f(gamma_star - w) without rounding gamma_star - w first.

        Keeps full relative precision for gaps far below the spacing of
        floats near gamma_star.
        """
        if self._top is None:
            raise InvalidModel("f_near_top needs a finite gamma_star.")
        coef, reach = self._top
        if abs(w) > reach:
            return self.f_unchecked(self.gamma_star - w)
        y = -w
        value = 0.0
        for c in reversed(coef):
            value = value * y + c
        return value

    def Q_unchecked(self, N, s):
        return 2 * N * self.F_unchecked(s) - (N - 2) * s * self.f_unchecked(s)

    @property
    def F_infinity(self):
        """lim F(s) as s -> inf; +inf for every growing tail."""
        if not math.isinf(self.gamma_star):
            return self.F_unchecked(self.gamma_star)
        if self.tail is not None:
            return math.inf
        if self.kind is ModelKind.POLYNOMIAL:
            F_poly = self._F_poly.trim()
            if F_poly.degree() < 1:
                return float(F_poly.coef[0])
            return math.copysign(math.inf, F_poly.coef[-1])
        return self.points[-1].F

    def segment_breaks(self, lo, hi):
        """Sorted breakpoints strictly inside (lo, hi), tail start included."""
        inner = [x for x in self._breaks if lo < x < hi]
        if lo < self.s_tail < hi and self.s_tail not in inner:
            inner.append(self.s_tail)
        return sorted(inner)

    # exact analysis

    def critical_points(self, lo, hi, order=1):
        """
        Zeros of f (order=1) or of f' (order=2) strictly inside (lo, hi).

        Identically vanishing pieces contribute their breakpoints only.
        """
        if self.kind is ModelKind.POLYNOMIAL:
            poly = (self._f_poly if order == 1 else self._f_poly.deriv()).trim()
            complex_roots = poly.roots() if poly.degree() > 0 else []
            roots = [r.real for r in complex_roots if abs(r.imag) <= 1e-8 * max(1.0, abs(r))]
        else:
            pp = self._f_pp if order == 1 else self._f_pp.derivative()
            roots = pp.roots(discontinuity=False, extrapolate=False)
        hi_poly = min(hi, self.s_tail)
        found = sorted({float(r) for r in roots if np.isfinite(r) and lo < r < hi_poly})
        return found

    def zeros_of_f(self, lo=None, hi=None):
        """Isolated zeros of f inside (lo, hi) with a flag telling whether f changes sign."""
        lo = self.lower if lo is None else lo
        hi = self.analysis_upper if hi is None else hi
        zeros = []
        for z in self.critical_points(lo, hi):
            h = 1e-7 * max(1.0, abs(z))
            left, right = self.f_unchecked(z - h), self.f_unchecked(z + h)
            zeros.append((z, left * right < 0, left, right))
        return zeros

    def has_flat_piece(self, lo, hi):
        for i, coef in enumerate(self._coef_f):
            a = self._breaks[i]
            b = self._breaks[i + 1] if i + 1 < len(self._breaks) else self.analysis_upper
            if b <= lo or a >= hi:
                continue
            if all(abs(c) < 1e-14 for c in coef):
                return True
        return False

    def _monotone_pieces(self, lo, hi):
        knots = [lo] + self.critical_points(lo, hi) + [hi]
        return list(zip(knots[:-1], knots[1:]))

    def level_roots(self, level, lo, hi, tol=None):
        """
        All s in the open interval (lo, hi) with F(s) = level.

        F is monotone between consecutive critical points, so each sign change
        on such a piece isolates exactly one root, which is then bisected.
        """
        tol = settings.LEVEL_TOL if tol is None else tol
        roots = []
        for a, b in self._monotone_pieces(lo, hi):
            ga = self.F_unchecked(a) - level
            gb = self.F_unchecked(b) - level
            if ga == 0.0 and a > lo:
                roots.append(a)
            if ga * gb < 0:
                roots.append(brentq(lambda s: self.F_unchecked(s) - level, a, b, xtol=tol, rtol=4 * np.finfo(float).eps))
        unique = []
        for r in sorted(roots):
            if not unique or r - unique[-1] > 10 * tol:
                unique.append(r)
        return unique

    def largest_level_point(self, level, lo, hi):
        roots = self.level_roots(level, lo, hi)
        if not roots:
            raise LevelNotAttained(f"F never equals {level!r} on ({lo!r}, {hi!r}).")
        return roots[-1]

    def smallest_level_point(self, level, lo, hi):
        roots = self.level_roots(level, lo, hi)
        if not roots:
            raise LevelNotAttained(f"F never equals {level!r} on ({lo!r}, {hi!r}).")
        return roots[0]

    def extremum_F(self, lo, hi, kind="min"):
        """Exact min or max of F over [lo, hi] from its critical points and piece breaks."""
        candidates = [lo, hi] + self.critical_points(lo, hi) + self.segment_breaks(lo, hi)
        values = [(self.F_unchecked(s), s) for s in candidates]
        return min(values) if kind == "min" else max(values)

    def extremum_f(self, lo, hi, kind="min"):
        candidates = [lo, hi] + self.critical_points(lo, hi, order=2) + self.segment_breaks(lo, hi)
        values = [(self.f_unchecked(s), s) for s in candidates]
        return min(values) if kind == "min" else max(values)

    def _Q_critical_points(self, N, lo, hi):
        # the first and last pieces extend past the breakpoints, as in f_unchecked
        points = []
        last = len(self._coef_F) - 1
        for i, coef in enumerate(self._coef_F):
            origin = self._origins[i]
            a = -math.inf if i == 0 else origin
            b = math.inf if i == last else self._breaks[i + 1]
            a, b = max(a, lo), min(b, hi, self.s_tail)
            if a >= b:
                continue
            F_local = Polynomial(coef[::-1])
            Q_local = 2 * N * F_local - (N - 2) * Polynomial([origin, 1.0]) * F_local.deriv()
            dQ = Q_local.deriv().trim()
            if dQ.degree() < 1:
                continue
            for r in dQ.roots():
                s = origin + r.real
                if abs(r.imag) < 1e-10 and a < s < b:
                    points.append(float(s))
        return points

    def extremum_Q(self, N, lo, hi, kind="min"):
        candidates = [lo, hi] + self._Q_critical_points(N, lo, hi) + self.segment_breaks(lo, hi)
        values = [(self.Q_unchecked(N, s), s) for s in candidates]
        return min(values) if kind == "min" else max(values)

    def integral_abs_F(self, lo, hi):
        """int_lo^hi |F(s)| ds, exact per sign-definite piece."""
        knots = sorted({lo, hi, *self.level_roots(0.0, lo, hi), *self.segment_breaks(lo, hi)})
        anti = self._F_poly.integ() if self.kind is ModelKind.POLYNOMIAL else self._F_pp.antiderivative()
        total = 0.0
        for a, b in zip(knots[:-1], knots[1:]):
            total += abs(float(anti(b) - anti(a)))
        return total

    def to_dict(self):
        data = {
            "kind": self.kind.value,
            "gamma_star_minus": self.gamma_star_minus,
            "gamma_star": self.gamma_star,
        }
        if self.kind is ModelKind.POLYNOMIAL:
            data["coefficients"] = list(self.coefficients)
        else:
            data["points"] = [[p.s, p.F, p.f] for p in self.points]
        if self.tail is not None:
            data["tail"] = {"c": self.tail.c, "p": self.tail.p, "s_tail": self.tail.s_tail}
        return data

    def __repr__(self):
        return f"NonlinearityModel(kind={self.kind.value!r}, domain=({self.gamma_star_minus}, {self.gamma_star}])"


def eval_f(model, s):
    model._check(s)
    return model.f_unchecked(s)


def eval_F(model, s):
    model._check(s)
    return model.F_unchecked(s)


def eval_Q(model, N, s):
    model._check(s)
    return model.Q_unchecked(N, s)


def energy_bound(model, alpha):
    """
    A priori bound C(alpha) on |u| + |u'| along the solution starting at alpha.

    The energy never exceeds F(alpha), so u stays in the connected component
    of {F <= F(alpha)} that contains alpha.
    """
    level = model.F_unchecked(alpha)
    roots = model.level_roots(level, model.lower, model.analysis_upper)
    pad = 1e-9 * max(1.0, abs(alpha))
    left = [r for r in roots if r < alpha - pad]
    right = [r for r in roots if r > alpha + pad]
    a = model.lower
    for r in reversed(left):
        if model.F_unchecked(r - 1e-6 * max(1.0, abs(r))) > level:
            a = r
            break
    b = alpha
    for r in right:
        if model.F_unchecked(r + 1e-6 * max(1.0, abs(r))) > level:
            b = r
            break
    else:
        b = max(alpha, right[-1]) if right else alpha
    min_F, _ = model.extremum_F(a, b, "min")
    return max(abs(a), abs(b)) + math.sqrt(max(0.0, 2.0 * (level - min_F)))


# hypotheses

@dataclass
class Verdict:
    passed: bool
    witness: Optional[float] = None
    reason: str = ""

    def to_dict(self):
        return {"passed": self.passed, "witness": self.witness, "reason": self.reason}


@dataclass
class HypothesisReport:
    case: Case
    verdicts: dict
    zeros: list = field(default_factory=list)
    delta: Optional[float] = None
    s0: Optional[float] = None
    theta: Optional[float] = None

    @property
    def failures(self):
        return {name: v for name, v in self.verdicts.items() if not v.passed}

    def to_dict(self):
        return {
            "case": self.case.value,
            "verdicts": {name: v.to_dict() for name, v in sorted(self.verdicts.items())},
            "zeros": [{"s": z, "sign_change": bool(flag)} for z, flag, _, _ in self.zeros],
            "delta": self.delta,
            "s0": self.s0,
            "theta": self.theta,
        }


def _delta(model):
    right = model.level_roots(0.0, 0.0, model.analysis_upper)
    left = model.level_roots(0.0, model.lower, 0.0)
    d_pos = right[0] if right else model.analysis_upper
    d_neg = -left[-1] if left else -model.lower
    return min(d_pos, d_neg)


def _tail_exponent(model):
    """(c, p) of the leading growth of f at +inf, or None."""
    if model.kind is ModelKind.HERMITE_POWER_TAIL:
        return model.tail.c, model.tail.p
    if model.kind is ModelKind.POLYNOMIAL and len(model.coefficients) > 1:
        trimmed = Polynomial(model.coefficients).trim()
        return float(trimmed.coef[-1]), float(trimmed.degree())
    return None


def _find_s0(model, N):
    """Largest s0 < 0 such that Q > 0 on (gamma_star_minus, s0), or None."""
    if model.Q_unchecked(N, model.lower) <= 0:
        return None
    grid = np.linspace(model.lower, 0.0, settings.HYPOTHESIS_SAMPLES)
    for a, b in zip(grid[:-1], grid[1:]):
        if model.Q_unchecked(N, b) <= 0:
            if model.Q_unchecked(N, b) == 0.0:
                return float(b)
            return brentq(lambda s: model.Q_unchecked(N, s), a, b)
    return 0.0


def check_hypotheses(model, N):
    """
    Check (f1)-(f4), plus (f5) in the unbounded case, for dimension N.

    Returns:
        HypothesisReport: per-condition verdicts with failure witnesses.
    """
    if N < 2:
        raise InvalidModel("The space dimension N must be at least 2.")
    finite = not math.isinf(model.gamma_star)
    lo, hi = model.lower, model.analysis_upper
    verdicts = {}

    # f1
    f0 = model.f_unchecked(0.0)
    if abs(f0) > 1e-12:
        verdicts["f1"] = Verdict(False, 0.0, "f(0) != 0")
    elif finite and abs(model.f_unchecked(model.gamma_star)) > 1e-10:
        verdicts["f1"] = Verdict(False, model.gamma_star, "f(gamma_star) != 0")
    else:
        verdicts["f1"] = Verdict(True)

    # f2
    delta = _delta(model)
    probe = [s for s in np.linspace(-delta, delta, 41)[1:-1] if s != 0.0]
    bad = [s for s in probe if model.F_unchecked(s) >= 0]
    if delta <= 0 or bad:
        verdicts["f2"] = Verdict(False, bad[0] if bad else 0.0, "F(s) >= 0 arbitrarily close to 0")
    elif finite:
        top = model.F_unchecked(model.gamma_star)
        interior_max, where = max(
            [(model.F_unchecked(s), s) for s in model.critical_points(lo, hi)] or [(-math.inf, None)]
        )
        floor_level = model.F_unchecked(lo)
        if not math.isclose(floor_level, top, rel_tol=1e-9, abs_tol=1e-12) and not (
            math.isinf(model.gamma_star_minus) and floor_level >= top
        ):
            verdicts["f2"] = Verdict(False, lo, "lim F at gamma_star_minus differs from F(gamma_star)")
        elif interior_max >= top:
            verdicts["f2"] = Verdict(False, where, "F(s) >= F(gamma_star) inside the domain")
        else:
            verdicts["f2"] = Verdict(True)
    else:
        exponent = _tail_exponent(model)
        grows_right = exponent is not None and exponent[0] > 0
        if model.kind is ModelKind.POLYNOMIAL:
            F_poly = Polynomial(model.coefficients).integ(lbnd=0.0).trim()
            grows_left = F_poly.degree() % 2 == 0 and F_poly.coef[-1] > 0
        else:
            grows_left = math.isinf(model.gamma_star_minus)
        interior = [model.F_unchecked(s) for s in model.critical_points(lo, hi)]
        if not grows_right:
            verdicts["f2"] = Verdict(False, hi, "F does not grow to +inf at +inf")
        elif not grows_left:
            verdicts["f2"] = Verdict(False, lo, "F does not grow to +inf at gamma_star_minus")
        elif interior and max(interior) >= model.F_unchecked(lo):
            verdicts["f2"] = Verdict(False, lo, "the computational floor sits below an interior level of F")
        else:
            verdicts["f2"] = Verdict(True)

    # f3
    maxima = [z for z, change, left, right in model.zeros_of_f(delta, hi) if change and left > 0 > right]
    positive = [z for z in maxima if model.F_unchecked(z) > 0]
    if positive:
        verdicts["f3"] = Verdict(True)
    else:
        verdicts["f3"] = Verdict(False, maxima[0] if maxima else None, "F has no positive local maximum after delta")

    # f4
    zeros = model.zeros_of_f(lo, hi)
    outer = [z for z in zeros if abs(z[0]) > delta * (1 + 1e-9)]
    if model.has_flat_piece(lo, hi):
        verdicts["f4"] = Verdict(False, None, "f vanishes on a whole interval")
    else:
        no_change = [z for z in outer if not z[1] and not (finite and math.isclose(z[0], model.gamma_star))]
        if no_change:
            verdicts["f4"] = Verdict(False, no_change[0][0], "f does not change sign at this zero")
        else:
            verdicts["f4"] = Verdict(True)

    s0 = theta = None
    if not finite:
        exponent = _tail_exponent(model)
        if exponent is None:
            verdicts["f5"] = Verdict(False, None, "bounded-support tail: the growth limit cannot be certified")
        else:
            c, p = exponent
            critical = math.inf if N == 2 else (N + 2) / (N - 2)
            s0 = _find_s0(model, N)
            if c <= 0 or p < 1:
                verdicts["f5"] = Verdict(False, hi, "tail is not a growing power")
            elif p >= critical:
                verdicts["f5"] = Verdict(False, p, f"exponent {p} is not below the critical exponent {critical}")
            elif s0 is None:
                verdicts["f5"] = Verdict(False, lo, "Q is not positive near gamma_star_minus")
            else:
                theta = 0.5
                verdicts["f5"] = Verdict(True)

    passed = all(v.passed for v in verdicts.values())
    if passed:
        case = Case.A1 if finite else Case.A2
    else:
        case = Case.NEITHER
        logger.info("Hypotheses fail for %r: %s", model, sorted(name for name, v in verdicts.items() if not v.passed))
    return HypothesisReport(case=case, verdicts=verdicts, zeros=zeros, delta=delta, s0=s0, theta=theta)


# landmarks

@dataclass(frozen=True)
class Landmarks:
    """The special points of F used by the classification and the theorems."""
    case: Case
    delta: float
    gammas_pos: tuple
    gammas_neg: tuple
    betas_pos: tuple
    betas_neg: tuple
    beta_star: float
    beta_star_minus: float
    beta_bar: float
    u_bar: Optional[float]
    gamma_star: float
    gamma_star_minus: float
    lower: float
    upper: float
    s0: Optional[float] = None
    theta: Optional[float] = None

    @property
    def M(self):
        return len(self.gammas_pos)

    @property
    def m_bar(self):
        return -len(self.gammas_neg)

    @property
    def gamma_1(self):
        return self.gammas_pos[0]

    @property
    def gamma_M(self):
        return self.gammas_pos[-1]

    @property
    def gamma_m_bar(self):
        return self.gammas_neg[0] if self.gammas_neg else 0.0

    @property
    def beta_1(self):
        return self.betas_pos[0]

    def gamma(self, i):
        """gamma_i with gamma_0 = 0, gamma_{M+1} = gamma_star, gamma_{m_bar-1} = gamma_star_minus."""
        if i == 0:
            return 0.0
        if 1 <= i <= self.M:
            return self.gammas_pos[i - 1]
        if i == self.M + 1:
            return self.upper
        if self.m_bar <= i <= -1:
            return self.gammas_neg[len(self.gammas_neg) + i]
        if i == self.m_bar - 1:
            return self.lower
        raise IndexError(i)

    def wells(self, model):
        """
        (i, gamma_i, gamma_{i+1}, trap level) for every well index i.

        The trap level is min(F(gamma_i), F(gamma_{i+1})), with an unbounded
        endpoint contributing +inf.
        """
        result = []
        for i in range(self.m_bar - 1, self.M + 1):
            a, b = self.gamma(i), self.gamma(i + 1)
            Fa = math.inf if (i == self.m_bar - 1 and math.isinf(self.gamma_star_minus)) else model.F_unchecked(a)
            Fb = math.inf if (i == self.M and math.isinf(self.gamma_star)) else model.F_unchecked(b)
            result.append((i, a, b, min(Fa, Fb)))
        return result

    def to_dict(self):
        return {
            "case": self.case.value,
            "delta": self.delta,
            "M": self.M,
            "M_bar": self.m_bar,
            "gammas_pos": list(self.gammas_pos),
            "gammas_neg": list(self.gammas_neg),
            "betas_pos": list(self.betas_pos),
            "betas_neg": list(self.betas_neg),
            "beta_star": self.beta_star,
            "beta_star_minus": self.beta_star_minus,
            "beta_bar": self.beta_bar,
            "u_bar": self.u_bar,
            "gamma_star": self.gamma_star,
            "gamma_star_minus": self.gamma_star_minus,
            "s0": self.s0,
            "theta": self.theta,
        }


def _local_maxima(model, lo, hi):
    return [z for z, change, left, right in model.zeros_of_f(lo, hi) if change and left > 0 > right]


def _choose_beta_bar(model, N, case, beta_star, level_floor, lo, hi):
    margin = settings.LEVEL_MARGIN
    if case is Case.A1:
        step = (model.gamma_star - beta_star) / settings.BETA_BAR_GRID
        candidates = [beta_star + j * step for j in range(1, settings.BETA_BAR_GRID)]
    else:
        step = max(beta_star, 1.0) / settings.BETA_BAR_GRID
        count = int((hi - beta_star) / step)
        candidates = [beta_star + j * step for j in range(1, count)]
    samples = np.linspace(lo, hi, settings.HYPOTHESIS_SAMPLES)
    F_samples = np.array([model.F_unchecked(s) for s in samples])
    Q_samples = np.array([model.Q_unchecked(N, s) for s in samples])
    for s in candidates:
        level = model.F_unchecked(s)
        if level <= level_floor + margin:
            continue
        if case is Case.A2 and np.any(Q_samples[F_samples > level] <= 0):
            continue
        return s
    raise LandmarkNotFound("No admissible beta_bar above beta_star.")


def compute_landmarks(model, N, report=None):
    """
    Compute delta, the gammas and betas, beta_star, beta_star_minus, beta_bar and u_bar.

    Raises:
        LandmarkNotFound: if the hypotheses fail or a level crossing is missing.
    """
    report = report or check_hypotheses(model, N)
    if report.case is Case.NEITHER:
        raise LandmarkNotFound(f"Hypotheses fail: {sorted(report.failures)}")
    lo, hi = model.lower, model.analysis_upper
    delta = report.delta

    gammas_pos = []
    for z in _local_maxima(model, 0.0, hi):
        level = model.F_unchecked(z)
        if not gammas_pos:
            if level > 0 and z > delta:
                gammas_pos.append(z)
        elif level > model.F_unchecked(gammas_pos[-1]):
            gammas_pos.append(z)
    if not gammas_pos:
        raise LandmarkNotFound("F has no positive local maximum with F > 0.")

    gammas_neg = []
    for z in reversed(_local_maxima(model, lo, 0.0)):
        level = model.F_unchecked(z)
        if not gammas_neg:
            if level > 0:
                gammas_neg.append(z)
        elif level > model.F_unchecked(gammas_neg[-1]):
            gammas_neg.append(z)
    gammas_neg.reverse()

    try:
        previous = [0.0] + gammas_pos
        betas_pos = [
            model.largest_level_point(model.F_unchecked(previous[i]), previous[i], gammas_pos[i])
            for i in range(len(gammas_pos))
        ]
        nxt = gammas_neg[1:] + [0.0]
        betas_neg = [
            model.smallest_level_point(model.F_unchecked(nxt[i]), gammas_neg[i], nxt[i])
            for i in range(len(gammas_neg))
        ]
        gamma_M = gammas_pos[-1]
        beta_star = model.largest_level_point(model.F_unchecked(gamma_M), gamma_M, hi)
        gamma_m_bar = gammas_neg[0] if gammas_neg else 0.0
        beta_star_minus = model.smallest_level_point(model.F_unchecked(gamma_m_bar), lo, gamma_m_bar)
    except LevelNotAttained as exc:
        raise LandmarkNotFound(str(exc)) from exc

    beta_bar = _choose_beta_bar(model, N, report.case, beta_star, model.F_unchecked(beta_star_minus), lo, hi)

    u_bar_roots = model.level_roots(model.F_unchecked(gammas_pos[0]), lo, 0.0)
    u_bar = u_bar_roots[-1] if u_bar_roots else None

    landmarks = Landmarks(
        case=report.case,
        delta=delta,
        gammas_pos=tuple(gammas_pos),
        gammas_neg=tuple(gammas_neg),
        betas_pos=tuple(betas_pos),
        betas_neg=tuple(betas_neg),
        beta_star=beta_star,
        beta_star_minus=beta_star_minus,
        beta_bar=beta_bar,
        u_bar=u_bar,
        gamma_star=model.gamma_star,
        gamma_star_minus=model.gamma_star_minus,
        lower=lo,
        upper=model.gamma_star if report.case is Case.A1 else hi,
        s0=report.s0,
        theta=report.theta,
    )
    logger.debug("Landmarks: %s", landmarks)
    return landmarks
