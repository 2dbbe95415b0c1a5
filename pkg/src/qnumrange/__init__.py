"""Numerical range, numerical radius and its dual norm for quaternion matrices.

Three independent routes to the radius (an SDP with a duality-gap certificate, a
maximization of extreme eigenvalues over the 3-sphere, and sampling) plus the
pseudo-numerical range of complex matrices.
"""

from .numrange import numerical_radius, radius_eig_search, sample_range
from .quaternion import Quaternion, QuatMatrix
from .sdp import dual_norm, radius_sdp

__version__ = "0.1.0"

__all__ = [
    "QuatMatrix",
    "Quaternion",
    "dual_norm",
    "numerical_radius",
    "radius_eig_search",
    "radius_sdp",
    "sample_range",
]
