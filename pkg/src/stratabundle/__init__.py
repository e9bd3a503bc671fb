"""Combinatorial stratified bundles with finite structure categories.

Bundles of finite discrete fibres over finite cell complexes, encoded as
face-poset functors.  The package builds them (attachment, pull-back,
fibrewise product, function spaces, coends, associated bundles), checks
them (validators, trivializations, covering realizations, push-out
universality) and verifies the expected structure theorems on seeded
random instances.
"""

from .cellbase import (
    BaseComplex,
    SimplicialMap,
    Stratification,
    attach_base,
    closed_star,
    cycle_complex,
    poset_spanning_tree,
    simplex_complex,
    validate_complex,
)
from .fincat import (
    CatFunctor,
    FibreFunctor,
    FiniteCategory,
    faithful_image,
    hom_fibre_functor,
    is_groupoid,
    opposite,
    product_category,
    validate_category,
    validate_fibre_functor,
)
from .funcspace import (
    DiagramBundle,
    FunctionBundle,
    associated_bundle,
    coend,
    function_bundle,
    nkc_certificate,
    principal_diagram,
    reconstruct_check,
    validate_diagram,
)
from .oracle import (
    InstanceSpec,
    SplitMix64,
    gen_bundle,
    gen_category,
    run_suite,
    verify_bundle_theorem,
    verify_principal_theorem,
    verify_pullback_theorem,
)
from .strabundle import (
    FBundleMap,
    StratBundle,
    TotalComplex,
    attach_bundle,
    fiberwise_product,
    product_bundle,
    pullback,
    pushout_universality_check,
    realize_total,
    restrict,
    validate_bundle,
)
from .triviality import (
    Trivialization,
    covering_space,
    local_triviality_certificate,
    stratify_bundle,
    trivialize_over,
)
from .validation import (
    DocumentError,
    PreconditionError,
    StructureError,
    ValidationReport,
)

__version__ = "0.1.0"
