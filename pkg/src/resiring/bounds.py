"""Sharp bounds on value-set sizes of non-permutation polynomials.

M(m) is the largest N(f, m) over polynomials f that do not permute Z/mZ.
For a prime power p**r it equals p - 1 (r = 1) or p**(r-2) * (p*p - p + 1)
(r >= 2); for general m it is the maximum of the per-prime quantities
m(p), and a witness polynomial attaining it is assembled coefficientwise
by the Chinese remainder theorem.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .poly import IntPolynomial, require_prime
from .valuesets import FactoredModulus, crt_combine


def extremal_poly(p: int) -> IntPolynomial:
    """x**(2p-1) + p*x: permutes Z/pZ yet attains M(p**r) for every r >= 2.

    Its derivative is -a**(p-1) mod p, so the class of 0 is critical while
    every other class lifts cleanly.
    """
    require_prime(p)
    coeffs = [0] * (2 * p)
    coeffs[1] = p
    coeffs[2 * p - 1] = 1
    return IntPolynomial(tuple(coeffs))


def m_prime_power(p: int, r: int) -> int:
    """M(p**r): p - 1 when r = 1, else p**(r-2) * (p*p - p + 1)."""
    require_prime(p)
    if r < 1:
        raise ValueError("exponent must be a positive integer")
    if r == 1:
        return p - 1
    return p ** (r - 2) * (p * p - p + 1)


def m_of_p(m: int | FactoredModulus, p: int) -> int:
    """The per-prime candidate bound m(p), in exact integer arithmetic.

    m * (1 - 1/p) when p divides m exactly once, and
    m * (1 - 1/p + 1/p**2) when p divides m at least twice.
    """
    fm = FactoredModulus.of(m)
    r = fm.exponent_of(p)
    if r == 0:
        raise ValueError(f"{p} does not divide {fm.m}")
    if r == 1:
        return fm.m - fm.m // p
    return fm.m - fm.m // p + fm.m // (p * p)


@dataclass(frozen=True)
class BoundReport:
    """M(m) with its per-prime candidates and a witness polynomial.

    ``achieving_poly`` is a non-permutation mod m whose value set has
    exactly ``bound`` elements.  ``exception_flag`` marks the moduli
    2**r * 3 (r >= 2) where the maximum comes from the prime 2 rather
    than the largest prime factor.
    """

    modulus: FactoredModulus
    bound: int
    per_prime: dict[int, int]
    achieving_poly: IntPolynomial
    exception_flag: bool


def interpolate_mod_p(table, p: int) -> IntPolynomial:
    """The unique polynomial of degree < p hitting table[a] at each a mod p."""
    require_prime(p)
    if len(table) != p:
        raise ValueError("table must list one value per residue")
    coeffs = [0] * p
    for y, val in enumerate(table):
        if val % p == 0:
            continue
        num = [1]
        den = 1
        for z in range(p):
            if z == y:
                continue
            # multiply the running numerator by (x - z)
            nxt = [0] * (len(num) + 1)
            for i, c in enumerate(num):
                nxt[i] = (nxt[i] - c * z) % p
                nxt[i + 1] = (nxt[i + 1] + c) % p
            num = nxt
            den = den * (y - z) % p
        scale = val * pow(den, -1, p) % p
        for i, c in enumerate(num):
            coeffs[i] = (coeffs[i] + scale * c) % p
    return IntPolynomial(tuple(coeffs))


def _non_permutation_mod_p(p: int) -> IntPolynomial:
    """A polynomial inducing a non-permutation mod p with exactly p-1 values.

    For small p this is the lexicographically first coefficient vector in
    [0, p)**p whose image has p - 1 elements; beyond that, interpolating
    the map that fixes [1, p) and sends 0 to 1 avoids the p**p search.
    """
    if p <= 7:
        for coeffs in itertools.product(range(p), repeat=p):
            table = set()
            for a in range(p):
                acc = 0
                for c in reversed(coeffs):
                    acc = (acc * a + c) % p
                table.add(acc)
            if len(table) == p - 1:
                return IntPolynomial(coeffs)
        raise AssertionError("unreachable: p >= 2 always admits such a map")
    return interpolate_mod_p([1] + list(range(1, p)), p)


def assemble_crt_poly(parts) -> IntPolynomial:
    """Combine per-prime-power polynomials coefficientwise by CRT.

    ``parts`` is a sequence of (p, r, poly) with distinct primes.  The
    result f satisfies f = poly_i (mod p_i**r_i) coefficient by
    coefficient, hence induces the same function as poly_i modulo each
    p_i**r_i.
    """
    parts = list(parts)
    if not parts:
        raise ValueError("need at least one part")
    primes = [p for p, _, _ in parts]
    if len(set(primes)) != len(primes):
        raise ValueError("primes must be distinct")
    moduli = []
    for p, r, _ in parts:
        require_prime(p)
        if r < 1:
            raise ValueError("exponents must be positive")
        moduli.append(p**r)
    if len(parts) == 1:
        q = moduli[0]
        return IntPolynomial(tuple(c % q for c in parts[0][2].coeffs))
    width = max(len(poly.coeffs) for _, _, poly in parts)
    coeffs = tuple(
        crt_combine([poly.coeff(i) for _, _, poly in parts], moduli)
        for i in range(width)
    )
    return IntPolynomial(coeffs)


def big_m(m: int | FactoredModulus) -> BoundReport:
    """M(m) for m >= 2, with a verified-constructible achieving polynomial.

    The bound is max over prime factors p of m(p); ties prefer the larger
    prime.  The achieving polynomial glues the extremal polynomial at the
    argmax prime (or a one-short non-permutation when that prime divides m
    only once) with the identity at all other primes.
    """
    fm = FactoredModulus.of(m)
    if fm.m < 2:
        raise ValueError("every function on a one-element ring is a permutation")
    per_prime = {p: m_of_p(fm, p) for p, _ in fm.factors}
    best_p = max(fm.factors, key=lambda pr: (per_prime[pr[0]], pr[0]))[0]
    parts = []
    for p, r in fm.factors:
        if p == best_p:
            piece = extremal_poly(p) if r >= 2 else _non_permutation_mod_p(p)
        else:
            piece = IntPolynomial((0, 1))
        parts.append((p, r, piece))
    exception = (
        len(fm.factors) == 2
        and fm.factors[0][0] == 2
        and fm.factors[0][1] >= 2
        and fm.factors[1] == (3, 1)
    )
    return BoundReport(fm, per_prime[best_p], per_prime, assemble_crt_poly(parts), exception)
