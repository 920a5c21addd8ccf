"""Black-box oracle toolkit for 2x2 matrix groups over odd finite fields.

Realizes PGL2/PSL2/SL2(p^k) behind a random-element / multiply / invert /
compare oracle with a global exponent, and constructs subgroups encrypting
Sym4 (or Alt4 / quaternion-group normalizers) and subfield subgroups by
seeded Las Vegas algorithms, with brute-force verification oracles and
operation-count instrumentation.
"""

from .blackbox import BlackBox, OpCounters
from .ff import FieldCtx, ctx_create, irreducible_test
from .matgrp import (Flavor, Mat2, canonicalize, exponent_for, identity,
                     mat_eq, mat_inv, mat_mul, standard_generators)
from .recog import (ConstructionResult, Order3Witness, RightInvolution,
                    TypeTag, construct_sl2_normalizer, construct_subfield,
                    construct_sym4, find_field_size, make_involution,
                    order3_element, subfield_torus_divisor)
from .verify import (GroupFingerprint, assert_type, closure_enumerate,
                     fingerprint, reference_fingerprint)

__version__ = "0.1.0"

__all__ = [
    "BlackBox", "OpCounters", "FieldCtx", "ctx_create", "irreducible_test",
    "Flavor", "Mat2", "canonicalize", "exponent_for", "identity", "mat_eq",
    "mat_inv", "mat_mul", "standard_generators", "ConstructionResult",
    "Order3Witness", "RightInvolution", "TypeTag",
    "construct_sl2_normalizer", "construct_subfield", "construct_sym4",
    "find_field_size", "make_involution", "order3_element",
    "subfield_torus_divisor", "GroupFingerprint", "assert_type",
    "closure_enumerate", "fingerprint", "reference_fingerprint",
]
