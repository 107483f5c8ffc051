"""
Map a trajectory onto the shooting sets N_k, G_k, Q_k, S_k, Upsilon_k and F_k.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from radial_shoot import settings
from radial_shoot.exceptions import AmbiguousClassification, MalformedTrajectory
from radial_shoot.integrator import EventKind, TerminationKind

logger = logging.getLogger(__name__)


class Label(str, Enum):
    N = "N"
    G = "G"
    Q = "Q"
    S = "S"
    UPSILON = "Upsilon"
    F = "F"
    UNDETERMINED = "Undetermined"


@dataclass(frozen=True)
class Classification:
    label: Label
    k: int
    critical_value: Optional[float] = None
    margin: float = math.inf
    well_index: Optional[int] = None
    gamma_index: Optional[int] = None
    bracket: Optional[tuple] = None
    reason: str = ""
    n_history: tuple = field(default_factory=tuple)

    @property
    def signature(self):
        """(label, k); what the bisection compares."""
        return self.label, self.k

    @property
    def name(self):
        return f"{self.label.value}{self.k}"

    def to_dict(self):
        data = {
            "label": self.label.value,
            "k": self.k,
            "critical_value": self.critical_value,
            "margin": None if math.isinf(self.margin) else self.margin,
            "n_history": list(self.n_history),
        }
        if self.well_index is not None:
            data["well_index"] = self.well_index
        if self.gamma_index is not None:
            data["gamma_index"] = self.gamma_index
        if self.bracket is not None:
            data["bracket"] = list(self.bracket)
        if self.reason:
            data["reason"] = self.reason
        return data


def extract_Zk_Tk(traj):
    """
    Radii of the simple zeros and of the extrema, checked for interleaving.

    Returns:
        tuple: ([(Z_j, sign of u')], [(T_j, u(T_j))]); a terminal double zero
        contributes a final Z with sign 0.
    """
    Z, T = [], []
    last = None
    for event in traj.events:
        if event.kind is EventKind.SIMPLE_ZERO:
            if last == "zero":
                raise MalformedTrajectory(f"Two zeros without an extremum between them near r = {event.r!r}.")
            Z.append((event.r, event.sign))
            last = "zero"
        elif event.kind is EventKind.DOUBLE_ZERO:
            Z.append((event.r, 0))
            last = "zero"
        elif event.kind is EventKind.EXTREMUM:
            if last == "extremum":
                raise MalformedTrajectory(f"Two extrema without a zero between them near r = {event.r!r}.")
            T.append((event.r, event.u))
            last = "extremum"
    return Z, T


def n_history(Z):
    """k for every k-th simple zero crossed with the sign of u' required by N_k."""
    history = []
    for j, (_, sign) in enumerate(Z, start=1):
        if sign == 0 or sign != (-1) ** j:
            break
        history.append(j)
    return tuple(history)


def _gamma_scale(landmarks):
    top = landmarks.upper if math.isfinite(landmarks.upper) else landmarks.beta_bar
    return settings.EPS_GAMMA * max(1.0, abs(top))


def _classify_value(value, k, landmarks, history, eps_margin):
    """Q, S or Upsilon from the critical value after the last zero."""
    boundaries = [(i, landmarks.gamma(i)) for i in range(landmarks.m_bar, landmarks.M + 1) if i != 0]
    eps_gamma = _gamma_scale(landmarks)
    for i, gamma in boundaries:
        if abs(value - gamma) <= eps_gamma:
            return Classification(
                Label.UPSILON, k, value, abs(value - gamma), gamma_index=i, n_history=history
            )

    distances = [abs(value)] + [abs(value - g) for _, g in boundaries]
    margin = min(distances)
    if margin < eps_margin:
        raise AmbiguousClassification(
            f"Critical value {value!r} lies within {margin!r} of a decision boundary.", margin=margin
        )

    well = None
    for i in range(landmarks.m_bar - 1, landmarks.M + 1):
        if landmarks.gamma(i) < value < landmarks.gamma(i + 1):
            well = i
            break
    if well is None:
        return Classification(Label.UNDETERMINED, k, value, margin, reason="critical value outside every well",
                              n_history=history)
    label = Label.Q if well in (0, -1) else Label.S
    return Classification(label, k, value, margin, well_index=well, n_history=history)


def classify(traj, landmarks, eps_margin=None):
    """
    Classify a terminated trajectory.

    Args:
        traj (Trajectory): output of integrate.
        landmarks (Landmarks): special points of F for the same model.
        eps_margin (float, optional): minimal distance to a decision boundary.

    Returns:
        Classification: terminal label with k = (simple zeros) + 1.

    Raises:
        AmbiguousClassification: if the critical value is too close to a boundary.
        MalformedTrajectory: if zeros and extrema do not interleave.
    """
    eps_margin = settings.EPS_MARGIN if eps_margin is None else eps_margin
    Z, T = extract_Zk_Tk(traj)
    simple = [z for z in Z if z[1] != 0]
    k = len(simple) + 1
    history = n_history(Z)
    termination = traj.termination
    last_zero = simple[-1][0] if simple else 0.0
    after = [t for t in T if t[0] > last_zero]

    if termination.kind is TerminationKind.DOUBLE_ZERO:
        margin = termination.certificate.get("threshold", 0.0) - abs(termination.certificate.get("uprime", 0.0))
        return Classification(Label.G, k, 0.0, margin, n_history=history)

    if termination.kind is TerminationKind.REACHED_RMAX:
        return Classification(Label.UNDETERMINED, k, None, reason="reached r_max", n_history=history)

    if termination.kind is TerminationKind.CONVERGED:
        ell = termination.value
        if ell == 0.0 or abs(ell) <= settings.EPS_ZERO:
            return Classification(Label.G, k, 0.0, n_history=history, reason="decays to 0")
        if not after:
            return Classification(Label.F, k, ell, abs(ell), n_history=history)
        return _classify_value(ell, k, landmarks, history, eps_margin)

    if not after:
        raise MalformedTrajectory("Trapped trajectory without an extremum after its last zero.")
    return _classify_value(after[-1][1], k, landmarks, history, eps_margin)
