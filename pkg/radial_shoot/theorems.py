"""
Closed-form constants and the inequality conditions for nonexistence and for
the existence of two bound states per sign-change count from k = 0 on.

Every extremum over an interval comes from the exact critical points of the
piecewise polynomial model; nothing here samples F.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from radial_shoot.exceptions import LevelNotAttained, MissingLandmark
from radial_shoot.integrator import EventKind, energy_I
from radial_shoot.nonlinearity import Case

logger = logging.getLogger(__name__)


class TheoremKind(str, Enum):
    NONEXISTENCE_A1 = "NonexistenceA1"
    NONEXISTENCE_A2 = "NonexistenceA2"
    K0_CONDITION = "K0Condition"
    Q1_SUFFICIENT = "Q1Sufficient"
    CROSSING_BOUND = "CrossingBound"


@dataclass
class TheoremReport:
    theorem: TheoremKind
    constants: dict
    lhs: float
    rhs: float
    holds: bool
    k: Optional[int] = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {
            "theorem": self.theorem.value,
            "k": self.k,
            "constants": dict(sorted(self.constants.items())),
            "lhs": self.lhs,
            "rhs": self.rhs,
            "holds": self.holds,
            "notes": list(self.notes),
        }


def compute_u_bar(model, landmarks):
    """
    Rightmost s < 0 with F(s) = F(gamma_1).

    The root is searched on the whole negative part of the domain, so it
    coincides with the rightmost root on (beta_star_minus, 0) whenever that
    one exists.

    Raises:
        LevelNotAttained: if F stays below F(gamma_1) on the negative side.
    """
    level = model.F_unchecked(landmarks.gamma_1)
    return model.largest_level_point(level, landmarks.lower, 0.0)


def compute_u_bar_2betabar(model, landmarks):
    """Rightmost s < 0 with F(s) = F(2 beta_bar)."""
    two = 2.0 * landmarks.beta_bar
    if two > model.gamma_star:
        raise MissingLandmark("2*beta_bar lies outside the domain of f.")
    return model.largest_level_point(model.F_unchecked(two), landmarks.lower, 0.0)


def ck_formula(k, N, beta_bar, u_bar, F_2beta_bar, F_tilde, F_beta_bar):
    """(k+1)(2 beta_bar - u_bar)(N-1) sqrt(2(F(2 beta_bar) + F_tilde)) / (F(2 beta_bar) - F(beta_bar))."""
    return (
        (k + 1) * (2 * beta_bar - u_bar) * (N - 1) * math.sqrt(2 * (F_2beta_bar + F_tilde))
        / (F_2beta_bar - F_beta_bar)
    )


def F_tilde(model, landmarks):
    value, _ = model.extremum_F(landmarks.beta_star_minus, landmarks.beta_star, "min")
    return -value


def compute_Ck(model, landmarks, N, k):
    """
    Lower bound on the radius at which u first drops to 2 beta_bar, valid for
    alpha large enough.

    Raises:
        LevelNotAttained: if F(2 beta_bar) is not reached on the negative side.
    """
    two = 2.0 * landmarks.beta_bar
    u_bar = compute_u_bar_2betabar(model, landmarks)
    return ck_formula(
        k,
        N,
        landmarks.beta_bar,
        u_bar,
        model.F_unchecked(two),
        F_tilde(model, landmarks),
        model.F_unchecked(landmarks.beta_bar),
    )


def Q_bar(model, landmarks, N):
    """-min Q over [s0, beta_bar]."""
    if landmarks.s0 is None:
        raise MissingLandmark("s0 is only defined in the unbounded case.")
    value, _ = model.extremum_Q(N, landmarks.s0, landmarks.beta_bar, "min")
    return -value


def nonexistence_condition(model, landmarks, N, k, alpha_k=None):
    """
    Sufficient condition for the absence of bound states with at most k sign
    changes and initial value in (beta_star, gamma_star).

    Args:
        alpha_k (float, optional): the N_k threshold; required in the unbounded case.

    Raises:
        MissingLandmark: if alpha_k is needed but not given.
    """
    try:
        u_bar = compute_u_bar(model, landmarks)
    except LevelNotAttained as exc:
        raise MissingLandmark(str(exc)) from exc
    gamma_1 = landmarks.gamma_1
    F_gamma_1 = model.F_unchecked(gamma_1)
    lhs = F_tilde(model, landmarks)
    lead = (landmarks.beta_star - gamma_1) / (2 * (N - 1) * (k + 1)) * F_gamma_1 / (gamma_1 - u_bar)
    constants = {"F_tilde": lhs, "u_bar_gamma1": u_bar, "F_gamma1": F_gamma_1}

    if landmarks.case is Case.A1:
        top = model.F_unchecked(landmarks.gamma_star)
        constants["F_gamma_star"] = top
        theorem = TheoremKind.NONEXISTENCE_A1
    else:
        if alpha_k is None:
            raise MissingLandmark("The unbounded case needs alpha_k from the search module.")
        top, _ = model.extremum_F(0.0, alpha_k, "max")
        constants.update({"alpha_k": alpha_k, "sup_F_0_alpha_k": top})
        theorem = TheoremKind.NONEXISTENCE_A2

    rhs = lead - top
    return TheoremReport(theorem, constants, lhs, rhs, lhs < rhs, k=k)


def _crossing_constants(model, landmarks, N):
    beta_1, beta_star, beta_bar = landmarks.beta_1, landmarks.beta_star, landmarks.beta_bar
    F_bb = model.F_unchecked(beta_bar)
    F_gM = model.F_unchecked(landmarks.gamma_M)
    F_hat = -model.extremum_F(beta_1, beta_star, "min")[0]
    C_bar = 2 * (N - 1) * (beta_bar - beta_1) / (F_bb - F_gM) * math.sqrt(2 * (F_bb + F_hat))
    min_f, _ = model.extremum_f(beta_star, beta_bar, "min")
    if min_f > 0:
        A0 = (beta_star - beta_1) / math.sqrt(F_bb - F_gM) + math.sqrt(2 * N * (beta_bar - beta_star) / min_f)
    else:
        A0 = math.inf
    return {"F_hat": F_hat, "C_bar": C_bar, "A0": A0, "min_f_beta_star_beta_bar": min_f}


def well_integral(model, beta_1):
    """int_0^beta_1 |F(s)| ds by adaptive quadrature."""
    points = [s for s in model.segment_breaks(0.0, beta_1)]
    value, _ = quad(lambda s: abs(model.F_unchecked(s)), 0.0, beta_1, points=points or None, limit=200)
    return value


def k0_condition(model, landmarks, N):
    """
    (C_bar + A) I_bar < sqrt(2) (N-1) / sqrt(I_bar + F_bar) * int_0^beta_1 |F|.

    When it holds, two bound states exist for every sign-change count k >= 0.
    """
    beta_1, beta_bar = landmarks.beta_1, landmarks.beta_bar
    F_bar = -model.extremum_F(0.0, beta_1, "min")[0]
    constants = {"F_bar": F_bar}
    constants.update(_crossing_constants(model, landmarks, N))
    C_bar, A0 = constants["C_bar"], constants["A0"]
    notes = []

    if landmarks.case is Case.A1:
        A = A0
        I_bar = model.F_unchecked(landmarks.gamma_star)
    else:
        A = max(1.0, A0)
        Q_min = model.extremum_Q(N, landmarks.s0, beta_bar, "min")[0]
        Q_sup = model.extremum_Q(N, beta_1, beta_bar, "max")[0]
        constants["Q_bar"] = -Q_min
        F_infinity = model.F_infinity
        if math.isfinite(F_infinity):
            I_bar = F_infinity
            notes.append("I_bar replaced by the finite limit of F at infinity")
        else:
            I_bar = ((C_bar + 1) / C_bar) ** N * (
                2 * model.F_unchecked(beta_bar) + (beta_bar - beta_1) ** 2 + (Q_sup - Q_min) / N
            ) + (N - 2) ** 2 * beta_bar ** 2 / (2 * C_bar ** 2)
    constants.update({"A": A, "I_bar": I_bar})

    integral = well_integral(model, beta_1)
    constants["well_integral"] = integral
    lhs = (C_bar + A) * I_bar
    rhs = math.sqrt(2) * (N - 1) / math.sqrt(I_bar + F_bar) * integral
    return TheoremReport(TheoremKind.K0_CONDITION, constants, lhs, rhs, bool(lhs < rhs), notes=notes)


def first_crossing(traj, value, level=None):
    """
    First radius where u equals value, from the LevelCrossing event named level
    if one was recorded, otherwise bracketed on the samples and polished on the
    dense output.
    """
    for event in traj.events:
        if event.kind is EventKind.LEVEL_CROSSING and level is not None and event.level == level:
            return event.r
    g = traj.samples[:, 1] - value
    hits = np.flatnonzero(g[:-1] * g[1:] <= 0)
    for j in hits:
        a, b = traj.samples[j, 0], traj.samples[j + 1, 0]
        if g[j] == 0.0:
            return float(a)
        if a < b:
            return brentq(lambda r: traj.state(r)[0] - value, a, b, xtol=1e-13)
    raise LevelNotAttained(f"u never equals {value!r} on [0, {traj.r_end!r}].")


def q1_sufficient_condition(traj, model, landmarks):
    """
    r I(r) < 2(N-1)/sqrt(2(I(r) + F_bar)) int_0^beta_1 |F| at the first radius
    with u = beta_1; when it holds the trajectory ends in Q_1.
    """
    N = traj.N
    beta_1 = landmarks.beta_1
    r = first_crossing(traj, beta_1, "beta_1")
    I = energy_I(traj, r)
    F_bar = -model.extremum_F(0.0, beta_1, "min")[0]
    integral = well_integral(model, beta_1)
    lhs = r * I
    rhs = 2 * (N - 1) / math.sqrt(2 * (I + F_bar)) * integral if I + F_bar > 0 else math.inf
    constants = {"r_beta_1": r, "I_beta_1": I, "F_bar": F_bar, "well_integral": integral}
    return TheoremReport(TheoremKind.Q1_SUFFICIENT, constants, lhs, rhs, bool(lhs < rhs))


def crossing_time_bound(traj, model, landmarks):
    """
    Once u reaches beta_bar at a radius >= C_bar, it must reach beta_1 with
    u' < 0 within A0 more units of r.
    """
    N = traj.N
    constants = _crossing_constants(model, landmarks, N)
    r_bar = first_crossing(traj, landmarks.beta_bar, "beta_bar")
    constants["r_beta_bar"] = r_bar
    if r_bar < constants["C_bar"]:
        return TheoremReport(
            TheoremKind.CROSSING_BOUND, constants, math.nan, constants["A0"], False,
            notes=["u reaches beta_bar before C_bar; the bound does not apply"],
        )
    try:
        r_1 = first_crossing(traj, landmarks.beta_1, "beta_1")
    except LevelNotAttained:
        return TheoremReport(
            TheoremKind.CROSSING_BOUND, constants, math.inf, constants["A0"], False,
            notes=["u never reaches beta_1"],
        )
    _, v = traj.state(r_1)
    constants.update({"r_beta_1": r_1, "uprime_beta_1": v})
    lhs = r_1 - r_bar
    return TheoremReport(TheoremKind.CROSSING_BOUND, constants, lhs, constants["A0"], bool(v < 0 and lhs <= constants["A0"]))
