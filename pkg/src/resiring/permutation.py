"""Permutation tests for polynomial functions on Z/mZ.

Four routes: brute-force enumeration, the derivative criterion for prime
powers, Rivest's parity identities for powers of two, and CRT composition
over a factored modulus.  Every negative verdict carries a witness that can
be re-checked independently.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .poly import IntPolynomial, derivative, eval_mod, require_prime
from .valuesets import (
    DEFAULT_ENUMERATION_CAP,
    CapExceededError,
    FactoredModulus,
    residue_table,
)


class Method(enum.Enum):
    BRUTE_FORCE = "brute-force"
    HENSEL_CRITERION = "hensel-criterion"
    RIVEST = "rivest"
    CRT_COMPOSITE = "crt-composite"


@dataclass(frozen=True)
class MissingValue:
    """A residue that no input maps to."""

    value: int


@dataclass(frozen=True)
class CriticalDerivative:
    """A residue where the derivative vanishes mod the prime."""

    residue: int
    prime: int


@dataclass(frozen=True)
class CollidingPair:
    """Two incongruent inputs with congruent images."""

    first: int
    second: int


Witness = Union[MissingValue, CriticalDerivative, CollidingPair]


@dataclass(frozen=True)
class PermutationVerdict:
    """Outcome of a permutation test, with a re-checkable witness on failure."""

    is_permutation: bool
    method: Method
    modulus: int
    witness: Witness | None = None
    sub_verdicts: tuple[PermutationVerdict, ...] = ()

    def __bool__(self) -> bool:
        return self.is_permutation


def is_permutation_brute(
    f: IntPolynomial, m: int, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> PermutationVerdict:
    """Decide by enumerating all residues and counting distinct images.

    On failure the witness is the smallest residue missing from the image,
    which always exists over a finite ring.
    """
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    if m > cap:
        raise CapExceededError(f"modulus {m} exceeds the enumeration cap {cap}")
    seen = np.zeros(m, dtype=bool)
    seen[residue_table(f, m)] = True
    if seen.all():
        return PermutationVerdict(True, Method.BRUTE_FORCE, m)
    missing = int(np.flatnonzero(~seen)[0])
    return PermutationVerdict(False, Method.BRUTE_FORCE, m, witness=MissingValue(missing))


def is_permutation_prime_power(f: IntPolynomial, p: int, r: int) -> PermutationVerdict:
    """Decide permutation-ness mod p**r.

    For r = 1 this is brute force over [0, p).  For r >= 2 the function is
    a permutation iff f mod p permutes Z/pZ and f'(a) is nonzero mod p for
    every a; since f' mod p is periodic mod p, the p representatives
    suffice.  The derivative condition is checked first, so when both fail
    the witness is the critical residue.
    """
    require_prime(p)
    if r < 1:
        raise ValueError("exponent must be a positive integer")
    if r == 1:
        return is_permutation_brute(f, p)
    m = p**r
    fprime = derivative(f)
    for a in range(p):
        if eval_mod(fprime, a, p) == 0:
            return PermutationVerdict(
                False, Method.HENSEL_CRITERION, m, witness=CriticalDerivative(a, p)
            )
    base = is_permutation_brute(f, p)
    if not base.is_permutation:
        return PermutationVerdict(False, Method.HENSEL_CRITERION, m, witness=base.witness)
    return PermutationVerdict(True, Method.HENSEL_CRITERION, m)


def is_permutation_rivest(f: IntPolynomial, r: int) -> PermutationVerdict:
    """Decide permutation-ness mod 2**r (r >= 2) from coefficient parities.

    The function permutes Z/2**rZ iff a1 is odd and both a2+a4+a6+... and
    a3+a5+a7+... are even.  On failure the witness is derived from which
    parity broke: an even a1 or an odd a3+a5+... pins a residue with even
    derivative, otherwise f(0) and f(1) share parity and the opposite
    parity class is missed entirely.
    """
    if r < 2:
        raise ValueError("the parity test applies to moduli 2**r with r >= 2")
    m = 2**r
    a1 = f.coeff(1)
    even_sum = sum(f.coeffs[2::2])
    odd_sum = sum(f.coeffs[3::2])
    if a1 % 2 == 1 and even_sum % 2 == 0 and odd_sum % 2 == 0:
        return PermutationVerdict(True, Method.RIVEST, m)
    if a1 % 2 == 0:
        witness: Witness = CriticalDerivative(0, 2)
    elif odd_sum % 2 == 1:
        witness = CriticalDerivative(1, 2)
    else:
        witness = MissingValue((f.coeff(0) + 1) % 2)
    return PermutationVerdict(False, Method.RIVEST, m, witness=witness)


def is_permutation(f: IntPolynomial, m: int | FactoredModulus) -> PermutationVerdict:
    """Compose the prime-power criterion across the factorization of m.

    The verdict is positive iff every prime-power sub-verdict is; the
    witness of the first failing factor is lifted (a value missing mod
    p**r is also missing mod m).
    """
    fm = FactoredModulus.of(m)
    subs = tuple(is_permutation_prime_power(f, p, r) for p, r in fm.factors)
    failing = next((s for s in subs if not s.is_permutation), None)
    return PermutationVerdict(
        failing is None,
        Method.CRT_COMPOSITE,
        fm.m,
        witness=None if failing is None else failing.witness,
        sub_verdicts=subs,
    )
