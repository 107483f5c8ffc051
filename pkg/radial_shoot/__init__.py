"""
Shooting-method solver for sign-changing radial bound states of
u'' + (N-1)/r u' + f(u) = 0.
"""

__version__ = "0.1.0"
