"""Exact arithmetic for elliptic surfaces over P^1.

Subpackages and modules:

* :mod:`ellfib.exactalg`: number fields and homogeneous forms in ``s, t``
* :mod:`ellfib.weier`: Weierstrass models, discriminant, j-invariant, twists
* :mod:`ellfib.fibers`: Kodaira classification of the singular fibers
* :mod:`ellfib.covers`: rational maps of P^1, ramification and base change
* :mod:`ellfib.catalog`: stored constructions and the verification harness
"""

__version__ = "0.1.0"
