"""Goldman bracket computations on hyperbolic surfaces with geodesic boundary."""

__version__ = "0.1.0"
