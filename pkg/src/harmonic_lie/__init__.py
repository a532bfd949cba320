"""Harmonicity of left-invariant vector fields on metric Lie groups.

Everything is computed from structure constants and an inner product:
Levi-Civita connection, curvature, rough Laplacian, energy, and the
geodesic/Killing/parallel/harmonic tests. A catalog of the sixteen
four-dimensional Lorentzian Einstein algebras and a verifier that checks
published statements about them sit on top.
"""

from .algebra import MetricLieAlgebra, koszul_connection
from .scalar import Tolerance

__all__ = ["MetricLieAlgebra", "koszul_connection", "Tolerance"]
__version__ = "0.1.0"
