"""Exact generalized twisted Bernoulli numbers and polynomials of higher order,
symbolic verification of their symmetry identities, and finite-level p-adic
averaging checks of the underlying integral representation.
"""

__version__ = "0.1.0"

from . import bernoulli, characters, exact, identities, powerseries, volkenborn  # noqa: F401,E402
