"""Finite-type invariants of links in R^3.

Subpackages and modules:

* ``diagrams``: chord and Jacobi diagrams, canonical forms, enumeration.
* ``algebra``: exact diagram spaces modulo AS, IHX, STU, 4T and 1T.
* ``linkcodes``: Gauss and PD codes, linking numbers, crossing changes.
* ``finite_type``: brackets and degree tests.
* ``curves``: parametrized links, projections, Gauss-kernel integrals.
* ``integrator``: Monte Carlo configuration integrals up to degree 2.
"""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:  # pragma: no cover - source checkout
    __version__ = "0.1.0"

__all__ = ["__version__"]
