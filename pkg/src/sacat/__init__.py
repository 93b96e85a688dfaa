"""Homology, cohomology and central extensions of finite groups given by Cayley tables."""

from .catalog import catalog, groups_of_order
from .cohomology import (
    CoefficientGroup,
    Cocycle2,
    cocycle_of_extension,
    extension_of_cocycle,
    h1_cohomology,
    h2_cohomology,
)
from .errors import SacatError
from .extensions import (
    Extension,
    are_equivalent,
    baer_sum,
    classify_central,
    is_central_huq,
    is_central_smith,
    make_extension,
)
from .groups import FiniteGroup, GroupMorphism, builtin, from_cayley_table
from .homology import h1, h2
from .theorems import (
    hochschild_serre,
    stallings_stammbach,
    universal_central_extension,
    universal_coefficients,
)

__version__ = "0.1.0"
