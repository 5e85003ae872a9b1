"""dlvlab: a verification laboratory for a three-component
reaction-diffusion system driven by an incompressible planar flow.

The package evaluates closed-form solutions of the system, certifies them
against the governing equations with two independent differentiation
oracles, checks a catalog of flow geometries and their point symmetries,
and validates a finite-difference solver against the exact solutions.
"""

__version__ = "0.1.0"
