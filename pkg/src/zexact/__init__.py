"""Zero parts, Z-kernels, exact sequences and diagram lemmas over finite algebras."""

from zexact.algebra import (
    Congruence,
    Equation,
    FiniteAlgebra,
    Homomorphism,
    Signature,
    VarietyPreset,
    check_model,
    compose,
    enumerate_congruences,
    product,
    quotient,
    subalgebra,
)
from zexact.catalog import Catalog, build_catalog, catalog_hash
from zexact.homs import enumerate_homs, find_iso, image_factorize, is_hom
from zexact.presets import PRESETS, get_preset
from zexact.verdict import Status, Verdict
from zexact.zcore import (
    ExactSequence,
    in_nz,
    is_zexact,
    verify_zero_context,
    zcokernel_search,
    zero_part,
    zkernel,
)

__version__ = "0.1.0"
