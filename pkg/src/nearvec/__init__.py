"""Finite near-fields, near-vector spaces and their regularity.

The submodules are layered: :mod:`nearvec.nearfield` builds and verifies
near-field tables, :mod:`nearvec.space` handles near-vector spaces and
their quasi-kernels, and :mod:`nearvec.regularity` decides regularity and
builds decompositions.  The most used names are re-exported here.
"""
from .errors import NearVecError
from .nearfield import (
    NearFieldTable,
    dickson_p2,
    distributive_elements,
    gf_p2,
    nearfield_from_tables,
    prime_field,
    squares,
    verify_nearfield,
)
from .space import (
    NearVectorSpace,
    additions_index,
    dim_element,
    distributive_of,
    in_K,
    induced_addition,
    product_space,
    quasi_kernel,
    scalar_basis,
    span,
    stratum,
    table_space,
    twisted_space,
    verify_space,
)
from .regularity import (
    canonical_isomorphism,
    check_dimension_corollary,
    check_span_family,
    compatible,
    condition1_regular,
    condition_suite,
    dim_element_fast,
    distributive_decomposition,
    is_regular,
    maximal_regular_decomposition,
    regular_components,
)
from .corpus import registry_space

__version__ = "0.1.0"
