"""Electromagnetic field quantisation on Minkowski and Rindler charts.

Submodules: ``coordinates``, ``electrodynamics``, ``modes``, ``fock``,
``quantization``, ``bogoliubov`` and the ``cli`` front end.
"""

__version__ = "0.1.0"

from .coordinates import ChartId, SpacetimePoint, Wedge  # noqa: F401
