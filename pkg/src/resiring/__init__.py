"""Value sets and permutation tests for integer polynomials over Z/mZ.

The library computes value sets V(f mod m) and their sizes N(f, m), decides
whether a polynomial permutes Z/mZ (brute force, a derivative criterion for
prime powers, parity identities for powers of two, CRT composition),
evaluates the sharp bound M(m) on value-set sizes of non-permutations, and
cross-checks everything against an exhaustive enumeration oracle.
"""

from .poly import (
    INFINITY,
    NEG_INFINITY,
    IntPolynomial,
    ParseError,
    Valuation,
    derivative,
    eval_mod,
    evaluate,
    hasse_derivative,
    is_prime,
    ord_p,
    parse_poly,
    render_poly,
)
from .valuesets import (
    DEFAULT_ENUMERATION_CAP,
    CapExceededError,
    CarvedResidueSet,
    FactoredModulus,
    PrimePowerValueSet,
    ValueSetReport,
    carved_set,
    crt_combine,
    factorize,
    n_value,
    residue_table,
    restricted_injectivity_check,
    value_set,
    value_set_via_crt,
)
from .permutation import (
    CollidingPair,
    CriticalDerivative,
    Method,
    MissingValue,
    PermutationVerdict,
    Witness,
    is_permutation,
    is_permutation_brute,
    is_permutation_prime_power,
    is_permutation_rivest,
)
from .hensel import (
    EquivalenceCheckResult,
    HenselProfile,
    InfiniteValuationError,
    check_equivalence_at,
    check_forward_lift,
    check_lifting_base,
    derivative_order,
    hensel_profile,
)
from .bounds import (
    BoundReport,
    assemble_crt_poly,
    big_m,
    extremal_poly,
    interpolate_mod_p,
    m_of_p,
    m_prime_power,
)
from .oracle import (
    DEFAULT_FUNCTION_CAP,
    AgreementReport,
    CanonicalFunctionEnumeration,
    FunctionStatistics,
    canonical_enumeration,
    canonical_polynomial,
    criterion_agreement_canonical,
    criterion_agreement_monomial,
    enumerate_functions,
    falling_factorial_poly,
    iter_canonical_coefficients,
    iter_canonical_polynomials,
    kempner,
    oracle_big_m,
    oracle_feasible,
    oracle_value_distribution,
    set_threads,
)

__version__ = "0.1.0"
