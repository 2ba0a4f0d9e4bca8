"""Python bindings for the pgf p-group library.

Groups are passed as presentation strings such as
"5 4 | pow 2: 0,0,0,1 | comm 2 1: 0,0,1,0 ; comm 3 1: 0,0,0,1".
"""

from ._pgf import (
    BoundExceeded,
    IntegrityError,
    InvalidInput,
    are_siblings,
    are_twins,
    brauer_pair,
    build_tree,
    canonical_code,
    catalog_text,
    character_table,
    enumerate,
    family,
    family_parameters,
    fingerprint_hash,
    identify,
    is_consistent,
    is_isomorphic,
    isoclinic,
    normalize,
    order,
    sibling_census,
    tables_equivalent,
)

__all__ = [
    "BoundExceeded",
    "IntegrityError",
    "InvalidInput",
    "are_siblings",
    "are_twins",
    "brauer_pair",
    "build_tree",
    "canonical_code",
    "catalog_text",
    "character_table",
    "enumerate",
    "family",
    "family_parameters",
    "fingerprint_hash",
    "identify",
    "is_consistent",
    "is_isomorphic",
    "isoclinic",
    "normalize",
    "order",
    "sibling_census",
    "tables_equivalent",
]
