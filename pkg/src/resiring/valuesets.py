"""Value sets of polynomial functions on Z/mZ and their CRT structure.

The direct path enumerates all m residues; the CRT path computes one value
set per prime power and recombines.  Each validates the other, and the
product law ties their sizes together.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .poly import IntPolynomial, eval_mod, require_prime

#: Default bound on the number of residues an enumeration may touch.
DEFAULT_ENUMERATION_CAP = 10**7

# int64 Horner with per-step reduction stays exact below this modulus.
_NUMPY_MODULUS_LIMIT = 1 << 31


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured resource cap."""


def factorize(m: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of m >= 1 as (prime, exponent) pairs, ascending."""
    if m < 1:
        raise ValueError("can only factor a positive integer")
    out = []
    n = m
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out.append((d, e))
        d += 1 if d == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


@dataclass(frozen=True)
class FactoredModulus:
    """A positive modulus together with its prime factorization."""

    m: int
    factors: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "factors", tuple(tuple(pr) for pr in self.factors))
        if self.m < 1:
            raise ValueError("modulus must be a positive integer")
        product = 1
        previous = 1
        for p, r in self.factors:
            if p <= previous:
                raise ValueError("prime factors must be distinct and ascending")
            require_prime(p)
            if r < 1:
                raise ValueError("exponents must be positive")
            product *= p**r
            previous = p
        if product != self.m:
            raise ValueError(f"factorization product {product} does not equal {self.m}")

    @classmethod
    def of(cls, m: int | FactoredModulus) -> FactoredModulus:
        if isinstance(m, FactoredModulus):
            return m
        return cls(m, factorize(m))

    @classmethod
    def parse(cls, text: str) -> FactoredModulus:
        """Parse a decimal modulus, or a factored form such as ``2^3*3^2``."""
        text = text.strip()
        if not text:
            raise ValueError("empty modulus")
        if text.isdigit():
            return cls.of(int(text))
        factors = []
        m = 1
        for chunk in text.split("*"):
            base, caret, exp = chunk.strip().partition("^")
            if not base.isdigit() or (caret and not exp.isdigit()):
                raise ValueError(f"cannot parse modulus part {chunk!r}")
            p = int(base)
            r = int(exp) if caret else 1
            factors.append((p, r))
            m *= p**r
        return cls(m, tuple(factors))

    def exponent_of(self, p: int) -> int:
        for q, r in self.factors:
            if q == p:
                return r
        return 0

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{r}" if r > 1 else str(p) for p, r in self.factors)


@dataclass(frozen=True)
class PrimePowerValueSet:
    """Value set of f taken modulo a single prime power p**r."""

    prime: int
    exponent: int
    values: tuple[int, ...]
    size: int


@dataclass(frozen=True)
class ValueSetReport:
    """V(f mod m) with its size and per-prime-power CRT factors.

    ``values`` is None when a CRT recombination was too large to
    materialize; ``size`` is exact either way (factor sizes multiply).
    """

    modulus: FactoredModulus
    values: tuple[int, ...] | None
    size: int
    factors: tuple[PrimePowerValueSet, ...]
    is_surjective: bool


def residue_table(f: IntPolynomial, m: int) -> np.ndarray:
    """int64 array of f(a) mod m for a in [0, m); exact for m < 2**31."""
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    if m >= _NUMPY_MODULUS_LIMIT:
        return np.array(
            [eval_mod(f, a, m, reduce_each_step=True) for a in range(m)], dtype=object
        )
    a = np.arange(m, dtype=np.int64)
    acc = np.zeros(m, dtype=np.int64)
    for c in reversed(f.coeffs):
        acc = (acc * a + (c % m)) % m
    return acc


def _factor_report(f: IntPolynomial, p: int, r: int) -> PrimePowerValueSet:
    vals = np.unique(residue_table(f, p**r))
    return PrimePowerValueSet(p, r, tuple(int(v) for v in vals), len(vals))


def value_set(
    f: IntPolynomial, m: int | FactoredModulus, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> ValueSetReport:
    """Enumerate V(f mod m) directly over all m residues."""
    fm = FactoredModulus.of(m)
    if fm.m > cap:
        raise CapExceededError(f"modulus {fm.m} exceeds the enumeration cap {cap}")
    vals = np.unique(residue_table(f, fm.m))
    values = tuple(int(v) for v in vals)
    factors = tuple(_factor_report(f, p, r) for p, r in fm.factors)
    return ValueSetReport(fm, values, len(values), factors, len(values) == fm.m)


def n_value(
    f: IntPolynomial, m: int | FactoredModulus, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> int:
    """Size of V(f mod m), skipping materialization of the sorted set."""
    fm = FactoredModulus.of(m)
    if fm.m > cap:
        raise CapExceededError(f"modulus {fm.m} exceeds the enumeration cap {cap}")
    seen = np.zeros(fm.m, dtype=bool)
    seen[residue_table(f, fm.m)] = True
    return int(seen.sum())


def crt_combine(residues, moduli) -> int:
    """Solve x = residues[i] (mod moduli[i]) for pairwise coprime moduli."""
    x = 0
    modulus = 1
    for r, q in zip(residues, moduli, strict=True):
        if math.gcd(modulus, q) != 1:
            raise ValueError("moduli must be pairwise coprime")
        t = (r - x) * pow(modulus, -1, q) % q
        x += modulus * t
        modulus *= q
    return x % modulus


def value_set_via_crt(
    f: IntPolynomial, m: int | FactoredModulus, *, cap: int = DEFAULT_ENUMERATION_CAP
) -> ValueSetReport:
    """Compute V(f mod m) from its prime-power factors.

    Every factor value set is enumerated independently, then all residue
    combinations are recombined.  When the predicted size (product of
    factor sizes) exceeds the cap, only sizes are reported and ``values``
    is None.
    """
    fm = FactoredModulus.of(m)
    for p, r in fm.factors:
        if p**r > cap:
            raise CapExceededError(f"factor {p}^{r} exceeds the enumeration cap {cap}")
    factors = tuple(_factor_report(f, p, r) for p, r in fm.factors)
    size = math.prod(fr.size for fr in factors)
    if size > cap:
        return ValueSetReport(fm, None, size, factors, size == fm.m)
    if not factors:
        return ValueSetReport(fm, (0,), 1, (), fm.m == 1)

    moduli = [p**r for p, r in fm.factors]
    total = fm.m
    # basis[i] is 1 mod moduli[i] and 0 mod the others
    basis = []
    for q in moduli:
        rest = total // q
        basis.append(rest * pow(rest, -1, q) % total)
    if total < (1 << 62) // max(2, len(factors)):
        acc = np.zeros(1, dtype=np.int64)
        for fr, e in zip(factors, basis):
            term = (np.array(fr.values, dtype=np.int64) * (e % total)) % total
            acc = (acc[:, None] + term[None, :]).reshape(-1) % total
        values = tuple(int(v) for v in np.sort(acc))
    else:
        combos = itertools.product(*(fr.values for fr in factors))
        values = tuple(
            sorted(sum(v * e for v, e in zip(combo, basis)) % total for combo in combos)
        )
    return ValueSetReport(fm, values, size, factors, size == fm.m)


@dataclass(frozen=True)
class CarvedResidueSet:
    """Residues mod p**r whose images are redundant around a critical residue.

    When f'(a0) = 0 (mod p) every member's image is already attained on the
    complement, so removing the set bounds the value set from above.
    """

    prime: int
    exponent: int
    critical_residue: int
    members: frozenset[int]

    @property
    def sorted_members(self) -> tuple[int, ...]:
        return tuple(sorted(self.members))


def carved_set(p: int, r: int, a0: int) -> CarvedResidueSet:
    """The set {a0 + l*p + k*p**(r-1)} with l in [0, p**(r-2)) and k in [1, p).

    Cardinality is p**(r-2) * (p-1), and a0 + l*p itself is never a member.
    """
    require_prime(p)
    if r < 2:
        raise ValueError("exponent must be at least 2")
    if not 0 <= a0 < p:
        raise ValueError("critical residue must lie in [0, p)")
    high = p ** (r - 1)
    members = frozenset(
        a0 + l * p + k * high for l in range(p ** (r - 2)) for k in range(1, p)
    )
    return CarvedResidueSet(p, r, a0, members)


def restricted_injectivity_check(f: IntPolynomial, p: int, r: int, a0: int) -> bool:
    """Whether f mod p**r is injective on [0, p**r) minus the carved set."""
    carved = carved_set(p, r, a0)
    q = p**r
    keep = np.ones(q, dtype=bool)
    keep[list(carved.members)] = False
    images = residue_table(f, q)[keep]
    return len(np.unique(images)) == int(keep.sum())
