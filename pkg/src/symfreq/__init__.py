"""symfreq: exact and certified-numeric linear relations among the symmetric
frequencies of continued-fraction digits modulo m."""

__version__ = "0.1.0"

from .balls import PrecisionContext, RealBall
from .cyclotomic import (
    CycloElement,
    CycloFraction,
    CyclotomicDegreeError,
    cyclotomic_poly,
    sine_ratio_elem,
    verify_u_relation,
)
from .frequencies import evaluate_form, h_series, h_value, s_value, u_value
from .linalg import LinearForm, Rational, RationalMatrix, form_add, form_scale, rref
from .relations import (
    ModulusProfile,
    RelationBasis,
    UnsupportedModulus,
    hset,
    k_red,
    modulus_profile,
    phi_forward,
    phi_inverse,
    prime_power_u_basis,
    semiprime_u_basis,
    short_s_relation,
    two_p_u_basis,
    u_basis,
)
from .solver import (
    ConjectureRecord,
    DiscoveryReport,
    ExpressionTable,
    closed_form_dimension,
    conjecture_check,
    discover_relations,
    express_dependents,
    s_relation_basis,
    scan_range,
)

__all__ = [
    "PrecisionContext",
    "RealBall",
    "CycloElement",
    "CycloFraction",
    "CyclotomicDegreeError",
    "cyclotomic_poly",
    "sine_ratio_elem",
    "verify_u_relation",
    "evaluate_form",
    "h_series",
    "h_value",
    "s_value",
    "u_value",
    "LinearForm",
    "Rational",
    "RationalMatrix",
    "form_add",
    "form_scale",
    "rref",
    "ModulusProfile",
    "RelationBasis",
    "UnsupportedModulus",
    "hset",
    "k_red",
    "modulus_profile",
    "phi_forward",
    "phi_inverse",
    "prime_power_u_basis",
    "semiprime_u_basis",
    "short_s_relation",
    "two_p_u_basis",
    "u_basis",
    "ConjectureRecord",
    "DiscoveryReport",
    "ExpressionTable",
    "closed_form_dimension",
    "conjecture_check",
    "discover_relations",
    "express_dependents",
    "s_relation_basis",
    "scan_range",
]
