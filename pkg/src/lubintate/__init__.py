"""Exact-arithmetic toolkit for the geometry of one-dimensional formal groups.

Everything here computes with exact objects: rational valuations, base-p
digit vectors for tamely ramified p-adic coefficients, sparse truncated
power series, Newton polygons over Q, lattices in canonical Hermite form,
and symbolic Witt-vector identities.  No floats, no epsilons.

Modules
-------
valuations : rational valuations with infinity; truncated rings Q_p(p^(1/m))
series     : sparse truncated multivariate series over Laurent coefficients
periods    : crystalline period tuples of the universal deformation, two ways
polygon    : Newton polygons of p-divisible groups, domains D and H
hecke      : canonical-subgroup quotients and reduction into the good domain
building   : lattice vertices of the (GL_n x D*)/F* cell complex
cells      : polydisk cells, boundary components, gluing, cocycle checks
wittlab    : ramified Witt vectors, O-divided powers, Dieudonne descent
cli        : deterministic command-line front end
"""

__version__ = "0.1.0"

from .valuations import INF, Val, RamifiedRing, LaurentCoeff

__all__ = ["INF", "Val", "RamifiedRing", "LaurentCoeff", "__version__"]
