"""Exact roadmaps of real algebraic hypersurfaces."""

from .polycore import ChangeOfVars, Poly, PolySystem, apply_change, jacobian, minors

__version__ = "0.1.0"

__all__ = ["ChangeOfVars", "Poly", "PolySystem", "apply_change", "jacobian", "minors"]
