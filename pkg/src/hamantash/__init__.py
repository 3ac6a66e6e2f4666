"""Hyperbolic cone spheres built from samosa assemblies.

Modules: ``hyp_core`` and ``hyp_trig`` (plane geometry), ``barycentric``,
``chains`` (triangle chains and their holonomy), ``assembly``, ``realize``
(intrinsic edge lengths and their inverse), ``dtrep`` (representations, the
pants game, synthesis), ``net`` (unfolding and SVG) and ``netcli``.
"""

__version__ = "0.1.0"
