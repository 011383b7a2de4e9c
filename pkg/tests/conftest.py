"""Shared brute-force oracles, kept independent of the library internals.

Everything here evaluates polynomials term by term with pow(), never
through the library's Horner/vectorized paths, so tests can pit the two
routes against each other.
"""

from __future__ import annotations

import random

from resiring import IntPolynomial


def naive_eval(coeffs, a: int, m: int) -> int:
    return sum(c * pow(a, i) for i, c in enumerate(coeffs)) % m


def naive_value_set(coeffs, m: int) -> list[int]:
    return sorted({naive_eval(coeffs, a, m) for a in range(m)})


def naive_n(coeffs, m: int) -> int:
    return len(naive_value_set(coeffs, m))


def naive_is_permutation(coeffs, m: int) -> bool:
    return naive_n(coeffs, m) == m


def random_poly(rng: random.Random, max_degree: int, lo: int, hi: int) -> IntPolynomial:
    degree = rng.randint(0, max_degree)
    return IntPolynomial(tuple(rng.randint(lo, hi) for _ in range(degree + 1)))
