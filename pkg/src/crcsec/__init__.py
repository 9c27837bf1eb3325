"""Capacity-equivocation regions for the two-pair cognitive radio channel.

Subpackages:

- ``prob``     exact finite-alphabet entropy / mutual-information toolkit
- ``channel``  discrete kernel and symbolic Gaussian channel models
- ``gaussian`` closed-form Gaussian region families
- ``bounds``   discrete single-letter bounds, sampled search, condition checks
- ``region``   Pareto-frontier algebra and CSV export
- ``binning``  desk-scale simulator of the single-phase binning scheme
- ``accept``   runnable verification suites
- ``cli``      the ``crcsec`` command-line front end
"""

__version__ = "0.1.0"
