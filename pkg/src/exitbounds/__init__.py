"""Boundary Hölder-regularity certificates for the Poisson problem, with a
Brownian exit-time Monte Carlo engine that verifies them numerically.

The package evaluates fully explicit upper and lower bounds for exit-time
moments, harmonic-measure decay, and the resulting boundary estimates for
harmonic extensions, source integrals, gradients and Green functions on a
family of benchmark domains (balls, annuli, balls minus cones, cylinders
minus wedges), and checks lower bound <= Monte Carlo estimate <= upper bound
at desk scale.
"""

from . import bounds, constants, geometry, montecarlo, specialfn

__version__ = "0.1.0"

__all__ = ["bounds", "constants", "geometry", "montecarlo", "specialfn", "__version__"]
