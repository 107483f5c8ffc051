"""
Scan initial values, bisect label boundaries and extract two bound states per
sign-change count.
"""
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from radial_shoot import settings, theorems
from radial_shoot.classifier import Classification, Label, classify
from radial_shoot.exceptions import (
    AmbiguousClassification,
    IntegrationError,
    InvalidRange,
    LevelNotAttained,
    MissingLandmark,
    NoSignSplit,
    NotFound,
    NotFoundAtResolution,
    RadialShootError,
)
from radial_shoot.integrator import (
    EventKind,
    ProblemConfig,
    TerminationKind,
    closest_approach,
    integrate,
    pohozaev_E,
)
from radial_shoot.nonlinearity import Case

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Shot:
    """
    One initial value.

    Below a finite gamma_star the search keeps the gap gamma_star - alpha as
    the coordinate, so shots closer to gamma_star than its float spacing stay
    apart; alpha is then only the rounded value.
    """
    alpha: float
    gap: Optional[float] = None
    top: Optional[float] = None

    @classmethod
    def below(cls, top, gap):
        return cls(float(top - gap), float(gap), float(top))

    @property
    def order(self):
        """Sort key, increasing with the initial value."""
        return -self.gap if self.gap is not None else self.alpha

    def config(self, problem):
        if self.gap is None:
            return problem.with_alpha(self.alpha)
        return problem.with_gap(self.gap, self.top)

    def to_dict(self):
        if self.gap is None:
            return {"alpha": self.alpha}
        return {"alpha": self.alpha, "gap": self.gap}

    def __str__(self):
        if self.gap is None:
            return repr(self.alpha)
        return f"{self.top!r} - {self.gap!r}"


def as_shot(value):
    return value if isinstance(value, Shot) else Shot(float(value))


def midpoint(a, b):
    """Bisection point of two shots; geometric in the gap while the gaps differ by more than a factor 4."""
    if a.gap is None or b.gap is None:
        return Shot(0.5 * (a.alpha + b.alpha))
    lo, hi = sorted((a.gap, b.gap))
    if lo > 0.0 and hi > 4.0 * lo:
        # sqrt of the product would underflow for the deepest gaps
        return Shot.below(a.top, math.sqrt(lo) * math.sqrt(hi))
    return Shot.below(a.top, lo + 0.5 * (hi - lo))


def separation(a, b, span):
    """
    How far b lies above a, in units comparable with a bisection tolerance.

    Plain alpha difference for alpha shots. For gap shots the gap difference
    relative to the larger gap, times span, so a tolerance of bisect_tol means
    a relative accuracy of bisect_tol / span in the gap.
    """
    if a.gap is None or b.gap is None:
        return b.alpha - a.alpha
    larger = max(a.gap, b.gap)
    if larger == 0.0:
        return 0.0
    return (a.gap - b.gap) / larger * span


@dataclass
class ScanReport:
    grid: list
    labels: list
    intervals: list

    def __post_init__(self):
        self.grid = [as_shot(value) for value in self.grid]

    @property
    def alphas(self):
        return [shot.alpha for shot in self.grid]

    @property
    def gaps(self):
        """Gaps below gamma_star, or None for a scan held in alpha."""
        if not self.grid or self.grid[0].gap is None:
            return None
        return [shot.gap for shot in self.grid]

    def to_dict(self):
        data = {
            "grid": self.alphas,
            "labels": [c.to_dict() for c in self.labels],
            "intervals": [run.to_dict() for run in self.intervals],
        }
        if self.gaps is not None:
            data["gaps"] = self.gaps
        return data


@dataclass(frozen=True)
class Run:
    """A maximal stretch of grid points sharing one (label, k); gap_lo belongs to alpha_lo."""
    label: Label
    k: int
    start: int
    stop: int
    alpha_lo: float
    alpha_hi: float
    gap_lo: Optional[float] = None
    gap_hi: Optional[float] = None

    @property
    def signature(self):
        return self.label, self.k

    def to_dict(self):
        data = {
            "label": self.label.value,
            "k": self.k,
            "start": self.start,
            "stop": self.stop,
            "alpha_lo": self.alpha_lo,
            "alpha_hi": self.alpha_hi,
        }
        if self.gap_lo is not None:
            data.update(gap_lo=self.gap_lo, gap_hi=self.gap_hi)
        return data


@dataclass
class GBracket:
    """
    A bisected label boundary: the two end shots, their labels and the
    midpoint shot whose trajectory certifies the bound state.
    """
    shot_left: Shot
    shot_right: Shot
    left: Classification
    right: Classification
    shot: Shot
    sign_changes: int
    certificate: dict
    witness: bool = False
    trajectory: object = field(default=None, repr=False, compare=False)

    @property
    def alpha_left(self):
        return self.shot_left.alpha

    @property
    def alpha_right(self):
        return self.shot_right.alpha

    @property
    def alpha(self):
        return self.shot.alpha

    @property
    def width(self):
        """Bracket width in alpha, or in gap for gap shots."""
        if self.shot_left.gap is None:
            return self.alpha_right - self.alpha_left
        return self.shot_left.gap - self.shot_right.gap

    @property
    def is_bound_state(self):
        c = self.certificate
        return (
            abs(c["u"]) <= settings.BOUND_STATE_U_TOL
            and abs(c["uprime"]) <= settings.BOUND_STATE_U_TOL
            and abs(c["I"]) <= settings.BOUND_STATE_I_TOL
        )

    def to_dict(self):
        data = {
            "alpha": self.alpha,
            "bracket": [self.alpha_left, self.alpha_right],
            "left": self.left.name,
            "right": self.right.name,
            "sign_changes": self.sign_changes,
            "witness": self.witness,
            "bound_state": self.is_bound_state,
            "certificate": dict(sorted(self.certificate.items())),
        }
        if self.shot.gap is not None:
            data["gap"] = self.shot.gap
            data["gap_bracket"] = [self.shot_left.gap, self.shot_right.gap]
        return data


@dataclass
class PairResult:
    k: int
    sharp: GBracket
    star: GBracket
    distinct: bool
    grid_points: int

    @property
    def alpha_sharp(self):
        return self.sharp.alpha

    @property
    def alpha_star(self):
        return self.star.alpha

    def to_dict(self):
        data = {
            "k": self.k,
            "alpha_sharp": self.alpha_sharp,
            "alpha_star": self.alpha_star,
            "distinct": self.distinct,
            "grid_points": self.grid_points,
            "sharp": self.sharp.to_dict(),
            "star": self.star.to_dict(),
        }
        if self.sharp.shot.gap is not None:
            data.update(gap_sharp=self.sharp.shot.gap, gap_star=self.star.shot.gap)
        return data


@dataclass
class AlphaEstimate:
    k: int
    alpha: float
    certificate: dict = field(default_factory=dict)
    gap: Optional[float] = None

    def to_dict(self):
        data = {"k": self.k, "alpha": self.alpha, "certificate": dict(sorted(self.certificate.items()))}
        if self.gap is not None:
            data["gap"] = self.gap
        return data


def problem_for(N, problem=None):
    """A ProblemConfig template for dimension N; alpha is filled in per point."""
    if problem is None:
        return ProblemConfig(N=N, alpha=0.0)
    if problem.N != N:
        raise InvalidRange(f"Problem dimension {problem.N} does not match N = {N}.")
    return problem


def default_bisect_tol(landmarks, alpha_hi=None):
    top = alpha_hi if alpha_hi is not None else landmarks.upper
    return settings.BISECT_TOL_FACTOR * (top - landmarks.beta_star)


def gap_top(landmarks, alpha_hi):
    """gamma_star when a scan ends there, so its shots are held as gaps; None otherwise."""
    top = landmarks.gamma_star
    if math.isfinite(top) and alpha_hi == top:
        return top
    return None


def search_span(landmarks, shot):
    """The alpha range a gap shot's relative tolerance is measured against."""
    if shot.gap is None or not shot.top > landmarks.beta_star:
        return 1.0
    return shot.top - landmarks.beta_star


def alpha_ceiling(model, landmarks):
    """
    Largest initial value the search may use.

    gamma_star in the bounded case; otherwise capped so that F(alpha) stays
    below the level of the computational floor.
    """
    if landmarks.case is Case.A1:
        return landmarks.gamma_star
    cap = settings.A2_ALPHA_CAP_FACTOR * landmarks.beta_bar
    safe = model.F_unchecked(model.lower) / settings.FLOOR_HEADROOM
    roots = model.level_roots(safe, landmarks.beta_bar, model.analysis_upper)
    top = roots[0] if roots else model.analysis_upper
    return min(cap, top)


def search_ceiling(model, landmarks, N, k, problem=None):
    """Upper end of the scan for k sign changes: max(4 beta_bar, 10 alpha_(k+1)) below the ceiling."""
    top = alpha_ceiling(model, landmarks)
    if landmarks.case is Case.A1:
        return top
    try:
        estimate = estimate_alpha_k(model, landmarks, N, k + 1, problem).alpha
    except NotFound:
        return top
    return min(top, max(4 * landmarks.beta_bar, 10 * estimate))


def scan_grid(alpha_lo, alpha_hi, grid_points, densify=True, top=None):
    """
    grid_points shots in (alpha_lo, alpha_hi) in increasing order, half
    uniform and half log-spaced toward alpha_hi.

    With top equal to alpha_hi every shot is held as its gap below top and
    the log-spaced half reaches down to a gap of GAP_FLOOR. Otherwise it
    stops ALPHA_FLOOR_ULPS float spacings short of alpha_hi.
    """
    if not alpha_lo < alpha_hi:
        raise InvalidRange(f"Empty range ({alpha_lo!r}, {alpha_hi!r}).")
    if grid_points < 1:
        raise InvalidRange("grid_points must be at least 1.")
    span = alpha_hi - alpha_lo
    gapped = top is not None and top == alpha_hi
    if grid_points == 1 or not densify or grid_points < 4:
        fractions = np.arange(1, grid_points + 1) / (grid_points + 1)
        logged = np.empty(0)
    else:
        uniform = grid_points // 2
        fractions = np.arange(1, uniform + 1) / (uniform + 1)
        if gapped:
            floor = settings.GAP_FLOOR
        else:
            floor = settings.ALPHA_FLOOR_ULPS * float(np.spacing(abs(alpha_hi)))
        logged = np.geomspace(0.1 * span, min(floor, 0.1 * span), grid_points - uniform)

    if gapped:
        gaps = np.concatenate([span * (1.0 - fractions), logged])
        shots = {Shot.below(top, g) for g in gaps if 0.0 < g < span}
    else:
        alphas = np.concatenate([alpha_lo + span * fractions, alpha_hi - logged])
        shots = {Shot(float(a)) for a in alphas if alpha_lo < a < alpha_hi}
    return sorted(shots, key=lambda shot: shot.order)


def classify_alpha(model, landmarks, problem, alpha):
    """Integrate and classify one initial value (a float or a Shot); failures become Undetermined."""
    shot = as_shot(alpha)
    try:
        traj = integrate(model, shot.config(problem), landmarks)
        return classify(traj, landmarks)
    except AmbiguousClassification as exc:
        return Classification(Label.UNDETERMINED, 0, margin=exc.margin or 0.0, reason=f"ambiguous: {exc}")
    except RadialShootError as exc:
        logger.warning("alpha=%s could not be classified: %s", shot, exc)
        return Classification(Label.UNDETERMINED, 0, reason=f"{type(exc).__name__}: {exc}")


def _classify_task(args):
    return classify_alpha(*args)


def _classify_all(model, landmarks, problem, shots, workers):
    tasks = [(model, landmarks, problem, shot) for shot in shots]
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_classify_task, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    return [_classify_task(task) for task in tasks]


def runs_of(grid, labels):
    grid = [as_shot(value) for value in grid]
    runs = []
    start = 0
    for j in range(1, len(grid) + 1):
        if j == len(grid) or labels[j].signature != labels[start].signature:
            first, lo, hi = labels[start], grid[start], grid[j - 1]
            runs.append(Run(first.label, first.k, start, j - 1, lo.alpha, hi.alpha, lo.gap, hi.gap))
            start = j
    return runs


def scan(model, landmarks, N, alpha_lo, alpha_hi, grid_points, problem=None, workers=None, densify=True):
    """
    Classify every point of a grid on (alpha_lo, alpha_hi).

    A scan that ends at a finite gamma_star holds its shots as gaps below it.

    Args:
        workers (int, optional): process count; 1 or less runs serially.

    Returns:
        ScanReport: grid, labels in grid order and the maximal label runs.

    Raises:
        InvalidRange: for an empty range or fewer than one grid point.
    """
    problem = problem_for(N, problem)
    grid = scan_grid(alpha_lo, alpha_hi, grid_points, densify, top=gap_top(landmarks, alpha_hi))
    workers = settings.WORKERS if workers is None else workers
    labels = _classify_all(model, landmarks, problem, grid, workers)
    report = ScanReport(grid=grid, labels=labels, intervals=runs_of(grid, labels))
    logger.info("Scanned %d points on (%r, %r): %d runs", len(grid), alpha_lo, alpha_hi, len(report.intervals))
    return report


def _certify(model, landmarks, problem, shot):
    traj = integrate(model, shot.config(problem), landmarks)
    if traj.termination.kind is TerminationKind.DOUBLE_ZERO:
        certificate = dict(traj.termination.certificate)
        certificate["r"] = traj.termination.r
    else:
        r, u, v, _ = closest_approach(traj)
        certificate = {"r": r, "u": u, "uprime": v, "I": 0.5 * v * v + model.F_unchecked(u)}
    return traj, certificate


def refine_boundary(model, landmarks, N, alpha_left, alpha_right, bisect_tol=None, problem=None):
    """
    Bisect between two differently labelled initial values down to bisect_tol.

    The ends may be floats or Shots. Gap shots are bisected in the gap,
    geometrically while the two gaps are far apart, and bisect_tol is then
    relative to the gap (see separation). A G midpoint is a direct witness
    and ends the bisection; so does a midpoint too close to a decision
    boundary to classify. A midpoint with a third label replaces the right end.

    Returns:
        GBracket: the bracket, its midpoint and the midpoint's closest approach
        to u = u' = 0. The bound state between labels of index j and j+1 has
        j - 1 sign changes.

    Raises:
        InvalidRange: if the left end does not lie below the right end.
        NoSignSplit: if both ends carry the same label.
    """
    shot_left, shot_right = as_shot(alpha_left), as_shot(alpha_right)
    if not shot_left.order < shot_right.order:
        raise InvalidRange(f"Degenerate bracket ({shot_left}, {shot_right}).")
    problem = problem_for(N, problem)
    bisect_tol = default_bisect_tol(landmarks) if bisect_tol is None else bisect_tol
    span = search_span(landmarks, shot_left)
    left = classify_alpha(model, landmarks, problem, shot_left)
    right = classify_alpha(model, landmarks, problem, shot_right)
    if left.signature == right.signature:
        raise NoSignSplit(f"Both ends classify {left.name}.")

    witness = None
    for _ in range(settings.BISECT_MAX_ITER):
        if separation(shot_left, shot_right, span) <= bisect_tol:
            break
        mid = midpoint(shot_left, shot_right)
        if mid.order in (shot_left.order, shot_right.order):
            logger.info("Bracket (%s, %s) cannot be split further", shot_left, shot_right)
            break
        try:
            label = classify(integrate(model, mid.config(problem), landmarks), landmarks)
        except AmbiguousClassification:
            witness = (mid, None)
            break
        if label.label is Label.G:
            witness = (mid, label)
            break
        if label.label is Label.UPSILON:
            logger.warning("Upsilon point at alpha=%s inside a bisection bracket", mid)
        if label.signature == left.signature:
            shot_left, left = mid, label
        else:
            shot_right, right = mid, label

    if witness is not None and witness[1] is not None:
        mid, changes = witness[0], witness[1].k - 1
    else:
        mid = witness[0] if witness is not None else midpoint(shot_left, shot_right)
        changes = min(left.k, right.k) - 1
    traj, certificate = _certify(model, landmarks, problem, mid)
    logger.info("Bracket [%s, %s] between %s and %s", shot_left, shot_right, left.name, right.name)
    return GBracket(shot_left, shot_right, left, right, mid, changes, certificate, witness is not None, traj)


def _is_target(classification, k):
    return classification.k == k + 1 and classification.label in (Label.Q, Label.G)


def _edges(report, k):
    """
    Grid index pairs across the border of the region labelled Q_(k+1) or G_(k+1).

    Returns:
        tuple: (lower, upper) lists of (j - 1, j) pairs in grid order. A
        lower pair enters the region going up in alpha, an upper pair leaves
        it. Pairs whose outside neighbour is Undetermined are left out.
    """
    lower, upper = [], []
    labels = report.labels
    for j in range(1, len(labels)):
        a, b = _is_target(labels[j - 1], k), _is_target(labels[j], k)
        if b and not a and labels[j - 1].label is not Label.UNDETERMINED:
            lower.append((j - 1, j))
        if a and not b and labels[j].label is not Label.UNDETERMINED:
            upper.append((j - 1, j))
    return lower, upper


def _first_certified(model, landmarks, N, report, edges, k, bisect_tol, problem, bisected):
    """The first edge whose bracket certifies a k sign change bound state; bisected caches earlier brackets."""
    for i, j in edges:
        key = (report.grid[i], report.grid[j])
        if key not in bisected:
            try:
                bisected[key] = refine_boundary(model, landmarks, N, key[0], key[1], bisect_tol, problem)
            except (NoSignSplit, IntegrationError) as exc:
                logger.info("Edge (%s, %s) rejected: %s", key[0], key[1], exc)
                bisected[key] = None
        bracket = bisected[key]
        if bracket is None:
            continue
        if bracket.sign_changes == k and bracket.is_bound_state:
            return bracket
        logger.info(
            "Edge (%s, %s) gave %d sign changes, bound state %s",
            key[0], key[1], bracket.sign_changes, bracket.is_bound_state,
        )
    return None


def _open_intervals(report, k):
    """Indices j such that (grid[j - 1], grid[j]) may still hide a border of the Q_(k+1) region."""
    found = []
    labels = report.labels
    for j in range(1, len(labels)):
        a, b = labels[j - 1], labels[j]
        if a.signature == b.signature:
            continue
        undetermined = Label.UNDETERMINED in (a.label, b.label)
        if undetermined or min(a.k, b.k) <= k + 1 <= max(a.k, b.k):
            found.append(j)
    return found


def refine_scan(model, landmarks, problem, report, k, workers=None, budget=None):
    """
    Insert midpoints into the intervals returned by _open_intervals and
    classify only the new shots.

    Returns:
        ScanReport: the merged report, or None when nothing was inserted
        because no interval can be split or the budget would be exceeded.
    """
    fresh = []
    for j in _open_intervals(report, k):
        a, b = report.grid[j - 1], report.grid[j]
        mid = midpoint(a, b)
        if a.order < mid.order < b.order:
            fresh.append(mid)
    if not fresh or (budget is not None and len(report.grid) + len(fresh) > budget):
        return None
    workers = settings.WORKERS if workers is None else workers
    labels = _classify_all(model, landmarks, problem, fresh, workers)
    merged = sorted(zip(report.grid + fresh, report.labels + labels), key=lambda item: item[0].order)
    grid = [shot for shot, _ in merged]
    labels = [label for _, label in merged]
    logger.info("Refined %d intervals, grid now %d points", len(fresh), len(grid))
    return ScanReport(grid=grid, labels=labels, intervals=runs_of(grid, labels))


def find_pairs(model, landmarks, N, k, problem=None, grid_points=None, max_points=None, bisect_tol=None,
               workers=None, alpha_hi=None, report=None):
    """
    Two bound states with exactly k sign changes.

    The lowest and the highest edges of the region labelled Q_(k+1) or
    G_(k+1) are bisected. While either is missing or fails to certify, the
    grid is refined where neighbouring labels differ around k + 1, until the
    grid would grow past max_points. Earlier shots are never integrated again.

    Args:
        report (ScanReport, optional): a scan of (beta_star, alpha_hi) to start from.

    Raises:
        NotFoundAtResolution: with the finest grid size tried.
    """
    if k < 0:
        raise InvalidRange("k must be non-negative.")
    problem = problem_for(N, problem)
    grid_points = settings.SCAN_POINTS if grid_points is None else grid_points
    max_points = settings.SCAN_POINTS_CAP if max_points is None else max_points
    alpha_hi = search_ceiling(model, landmarks, N, k, problem) if alpha_hi is None else alpha_hi
    bisect_tol = default_bisect_tol(landmarks, alpha_hi) if bisect_tol is None else bisect_tol
    if report is None:
        report = scan(model, landmarks, N, landmarks.beta_star, alpha_hi, grid_points, problem, workers)

    bisected = {}
    while True:
        lower, upper = _edges(report, k)
        if lower and upper:
            sharp = _first_certified(model, landmarks, N, report, lower, k, bisect_tol, problem, bisected)
            star = _first_certified(model, landmarks, N, report, list(reversed(upper)), k, bisect_tol, problem,
                                    bisected)
            if sharp is not None and star is not None:
                span = search_span(landmarks, sharp.shot)
                distinct = separation(sharp.shot, star.shot, span) > 10 * bisect_tol
                if distinct:
                    logger.info("k=%d: alpha#=%s alpha*=%s at %d points", k, sharp.shot, star.shot,
                                len(report.grid))
                    return PairResult(k, sharp, star, distinct, len(report.grid))
        refined = refine_scan(model, landmarks, problem, report, k, workers, budget=max_points)
        if refined is None:
            break
        logger.info("k=%d: no certified pair at %d points, refining", k, len(report.grid))
        report = refined
    raise NotFoundAtResolution(
        f"No pair with {k} sign changes up to {len(report.grid)} grid points.", grid_points=len(report.grid),
    )


def find_k0(model, landmarks, N, k_max, pairs=None, **kwargs):
    """
    Smallest k <= k_max from which find_pairs succeeds for every tested k.

    In the bounded case every k shares one scan of (beta_star, gamma_star).

    Args:
        pairs (dict, optional): filled with the PairResult of every k that succeeded.

    Raises:
        NotFound: if find_pairs fails at k_max.
    """
    pairs = {} if pairs is None else pairs
    if landmarks.case is Case.A1 and kwargs.get("report") is None:
        problem = problem_for(N, kwargs.get("problem"))
        grid_points = kwargs.get("grid_points") or settings.SCAN_POINTS
        alpha_hi = kwargs.get("alpha_hi") or alpha_ceiling(model, landmarks)
        kwargs["report"] = scan(model, landmarks, N, landmarks.beta_star, alpha_hi, grid_points, problem,
                                kwargs.get("workers"))
    outcomes = {}
    for k in range(k_max + 1):
        try:
            pairs[k] = find_pairs(model, landmarks, N, k, **kwargs)
            outcomes[k] = True
        except NotFound:
            outcomes[k] = False
    if not outcomes[k_max]:
        raise NotFound(f"No pair for k = {k_max}.")
    k0 = k_max
    while k0 > 0 and outcomes[k0 - 1]:
        k0 -= 1
    earlier = [k for k in range(k0) if outcomes[k]]
    if earlier:
        logger.warning("Pairs found for k=%s below k0=%d but not persistently", earlier, k0)
    return k0


def _pohozaev_threshold(model, landmarks, N, k, C_k, Q_bar):
    u_bar = theorems.compute_u_bar_2betabar(model, landmarks)
    beta_bar = landmarks.beta_bar
    scale = (C_k + 1) ** N
    B = (4 * beta_bar - 2 * u_bar + (N - 2) * abs(u_bar) / (2 * (C_k + 1))) ** 2 + model.F_unchecked(2 * beta_bar)
    return 2 * scale * B + (k + 1) * Q_bar * scale / N


def _suffix_threshold(report, k):
    reached = [len(c.n_history) >= k for c in report.labels]
    if not reached or not reached[-1]:
        return None
    j = len(reached) - 1
    while j > 0 and reached[j - 1]:
        j -= 1
    return report.grid[j]


def estimate_alpha_k(model, landmarks, N, k, problem=None, grid_points=None, workers=None):
    """
    Initial value beyond which every solution has at least k sign changes.

    Returns:
        AlphaEstimate: the threshold and the certificate that produced it.

    Raises:
        NotFound: if no tested alpha qualifies.
    """
    problem = problem_for(N, problem)
    if k == 0:
        return AlphaEstimate(0, landmarks.beta_star, {"reason": "every alpha qualifies"})

    if landmarks.case is Case.A1:
        grid_points = settings.SCAN_POINTS if grid_points is None else grid_points
        report = scan(model, landmarks, N, landmarks.beta_star, landmarks.gamma_star, grid_points, problem, workers)
        shot = _suffix_threshold(report, k)
        if shot is None:
            raise NotFound(f"No run reaching {k} sign changes up to gamma_star.")
        return AlphaEstimate(k, shot.alpha, {"grid_points": grid_points, "rule": "suffix run"}, gap=shot.gap)

    grid_points = settings.A2_SCAN_POINTS if grid_points is None else grid_points
    two = 2.0 * landmarks.beta_bar
    try:
        C_k = theorems.compute_Ck(model, landmarks, N, k)
        threshold = _pohozaev_threshold(model, landmarks, N, k, C_k, theorems.Q_bar(model, landmarks, N))
    except (LevelNotAttained, MissingLandmark) as exc:
        raise NotFound(f"Radius constant unavailable: {exc}") from exc
    top = alpha_ceiling(model, landmarks)
    if top <= two:
        raise NotFound("The search ceiling lies below 2*beta_bar.")
    for alpha in np.linspace(two, top, grid_points + 1)[1:]:
        try:
            traj = integrate(model, problem.with_alpha(alpha), levels={"two_beta_bar": two}, stop_level="two_beta_bar")
        except IntegrationError as exc:
            logger.info("alpha=%r skipped: %s", alpha, exc)
            continue
        crossing = [e.r for e in traj.events if e.kind is EventKind.LEVEL_CROSSING]
        if not crossing:
            continue
        r_bar = crossing[0]
        E = pohozaev_E(traj, r_bar)
        if r_bar >= C_k or E > threshold:
            certificate = {"r_bar": r_bar, "C_k": C_k, "E": E, "E_threshold": threshold}
            return AlphaEstimate(k, float(alpha), certificate)
    raise NotFound(f"No alpha up to {top!r} certifies {k} sign changes.")


def probe(model, landmarks, N, alphas, problem=None):
    """Classifications at a handful of initial values (floats or Shots) near a bracket."""
    problem = problem_for(N, problem)
    return [classify_alpha(model, landmarks, problem, alpha) for alpha in alphas]


def near_probes(bracket, count=None):
    """
    count shots on each side of a bracket, all within ten bracket widths of it.

    For gap shots the right side steps toward gamma_star and never reaches it.

    Returns:
        tuple: (left side shots, right side shots), nearest first.
    """
    count = settings.NEAR_PROBES if count is None else count
    step = 10.0 * bracket.width / count
    lo, hi = bracket.shot_left, bracket.shot_right
    if lo.gap is None:
        left = [Shot(lo.alpha - j * step) for j in range(1, count + 1)]
        right = [Shot(hi.alpha + j * step) for j in range(1, count + 1)]
        return left, right
    inner = min(step, hi.gap / (count + 1))
    left = [Shot.below(lo.top, lo.gap + j * step) for j in range(1, count + 1)]
    right = [Shot.below(hi.top, hi.gap - j * inner) for j in range(1, count + 1)]
    return left, right
