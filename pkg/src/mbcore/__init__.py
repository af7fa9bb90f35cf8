"""Cores of towers of non-negative integer matrices.

A tower ``M_0, M_1, ...`` of bonding maps acts on the non-negative orthant;
its core at place ``k`` is the intersection of the nested image cones.  The
package computes cores exactly where algebra allows (Perron-Frobenius rays
in a real quadratic field, continued-fraction limits) and with certified
Hilbert-metric bounds otherwise.
"""

__version__ = "0.1.0"

from .errors import InputError, MBCoreError, RefusedError
from .qnumber import QuadraticNumber, parse_qnumber

__all__ = ["InputError", "MBCoreError", "QuadraticNumber", "RefusedError", "parse_qnumber", "__version__"]
