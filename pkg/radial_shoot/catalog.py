"""
Named nonlinearity models used by the example configs and the test suite.
"""
import math

from radial_shoot.nonlinearity import ModelKind, NonlinearityModel, PowerTail

M1_POINTS = (
    (-3.0, 1.0, 0.0),
    (-1.0, -0.3, 0.0),
    (0.0, 0.0, 0.0),
    (0.5, -0.2, 0.0),
    (1.0, 0.4, 0.0),
    (1.5, 0.1, 0.0),
    (2.0, 1.0, 0.0),
)

# A long plateau between the first positive maximum and gamma_star pushes
# beta_star far right, which makes the nonexistence inequality hold for k = 1.
M2_POINTS = (
    (-1.0, 5.05, 0.0),
    (-0.5, -0.2, 0.0),
    (0.0, 0.0, 0.0),
    (0.5, -0.2, 0.0),
    (1.0, 5.0, 0.0),
    (10.0, 4.9, 0.0),
    (30.0, 5.05, 0.0),
)

A2_POINTS = (
    (-8.0, 100.0, 0.0),
    (-1.0, -0.3, 0.0),
    (0.0, 0.0, 0.0),
    (0.5, -0.2, 0.0),
    (1.0, 0.4, 0.0),
    (1.5, 0.1, 0.0),
    (2.0, 0.6, 1.0),
)


def model_m1():
    """Bounded case with a single positive well maximum at s = 1."""
    return NonlinearityModel(ModelKind.HERMITE, -3.0, 2.0, points=M1_POINTS)


def model_m2():
    return NonlinearityModel(ModelKind.HERMITE, -1.0, 30.0, points=M2_POINTS)


def model_a2_toy():
    """Unbounded case: Hermite core with a linear tail f(s) = s/2 beyond s = 2."""
    return NonlinearityModel(
        ModelKind.HERMITE_POWER_TAIL, -math.inf, math.inf, points=A2_POINTS, tail=PowerTail(c=0.5, p=1.0, s_tail=2.0)
    )


def model_linear():
    """f(u) = u, whose radial solution is sin(r)/r in dimension 3."""
    return NonlinearityModel(ModelKind.POLYNOMIAL, -math.inf, math.inf, coefficients=(0.0, 1.0))


def model_zero():
    return NonlinearityModel(ModelKind.POLYNOMIAL, -math.inf, math.inf, coefficients=(0.0,))


def model_cubic():
    """f(s) = s**3 - s: F has no positive local maximum."""
    return NonlinearityModel(ModelKind.POLYNOMIAL, -math.inf, math.inf, coefficients=(0.0, -1.0, 0.0, 1.0))


def model_deepened(depth):
    """
    M1 with the origin well deepened to min F = -depth on (0, 1).

    Used to explore the sufficient existence condition as the well integral grows.
    """
    points = list(M1_POINTS)
    points[3] = (0.5, -float(depth), 0.0)
    return NonlinearityModel(ModelKind.HERMITE, -3.0, 2.0, points=points)


MODELS = {
    "m1": model_m1,
    "m2": model_m2,
    "a2_toy": model_a2_toy,
    "linear": model_linear,
    "zero": model_zero,
    "cubic": model_cubic,
}


def get_model(name):
    try:
        return MODELS[name]()
    except KeyError:
        raise KeyError(f"Unknown model {name!r}; choose one of {sorted(MODELS)}.") from None
