"""Extremal heavy-tail behaviour of log-concave marginals.

Exact rational certificates for the one-sided exponential family, quadrature
and spline densities for reference bodies, direction scans, and randomised
Chebyshev-system checks.
"""

__version__ = "0.1.0"

from .ratpoly import BigRat, Poly  # noqa: E402
from .certify import Certificate, certify_q, certify_range  # noqa: E402
from .gamma_moments import moments_from_cumulants, r_poly, subfactorial  # noqa: E402

__all__ = [
    "BigRat",
    "Certificate",
    "Poly",
    "__version__",
    "certify_q",
    "certify_range",
    "moments_from_cumulants",
    "r_poly",
    "subfactorial",
]
