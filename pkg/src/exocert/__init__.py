"""Verify the finite, checkable hypotheses behind exotic diffeomorphisms and
nontrivial boundary Dehn twists on spin elliptic surfaces and complete
intersections."""

from .certificate import Certificate, Node
from .ci import CompleteIntersection
from .elliptic import EllipticSurface
from .lattice import LatticeForm
from .obstruction import FamilyData, check_dehn_theorem, check_exotic_theorem

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "CompleteIntersection",
    "EllipticSurface",
    "FamilyData",
    "LatticeForm",
    "Node",
    "check_dehn_theorem",
    "check_exotic_theorem",
]
