"""
Neutral Inclusions Module

This module provides functionality for:
- Discretizing smooth closed curves (conformal images, perturbed disks, ellipses, Neumann ovals)
- Layer potentials and Neumann-Poincare operators in 2-D
- Polarization tensors of simple and core-shell inclusions
- Constructing neutral and weakly neutral coatings and bonding parameters
- Confocal-ellipsoid potentials and quadrature-domain identities
"""

# Keep package init light; consumers import symbols directly from submodules.

__all__ = []
