"""Executable checks for lifting congruences between powers of a prime.

For s = ord_p(f'(a)) the central equivalence is

    a = b (mod p**(r-s))  <=>  f(a) = f(b) (mod p**r)

whose forward direction holds whenever r >= 2s, and whose backward
direction propagates upward from any base exponent r0 >= 2s + 1 where the
full equivalence has been verified.  Everything here checks concrete
instances exhaustively over finite ranges; nothing is symbolic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .poly import IntPolynomial, Valuation, derivative, eval_mod, evaluate, ord_p, require_prime
from .valuesets import residue_table


class InfiniteValuationError(ValueError):
    """f'(a) is exactly zero, so valuation-based lifting does not apply."""


def derivative_order(f: IntPolynomial, p: int, a: int) -> Valuation:
    """s = ord_p(f'(a)), computed at the specific integer a."""
    return ord_p(evaluate(derivative(f), a), p)


def _finite_order(f: IntPolynomial, p: int, a: int) -> int:
    s = derivative_order(f, p, a)
    if math.isinf(s):
        raise InfiniteValuationError(f"derivative of {f} vanishes at {a}")
    return int(s)


@dataclass(frozen=True)
class HenselProfile:
    """Derivative valuations s(a) = ord_p(f'(a)) at the p residue classes.

    Only the distinction s(a) = 0 versus s(a) >= 1 is invariant across all
    lifts of a class; finer orders can differ between representatives.
    """

    prime: int
    poly: IntPolynomial
    orders: Mapping[int, Valuation]

    @property
    def has_infinite_order(self) -> bool:
        return any(math.isinf(s) for s in self.orders.values())

    @property
    def max_finite_order(self) -> int | None:
        finite = [int(s) for s in self.orders.values() if not math.isinf(s)]
        return max(finite) if finite else None


@dataclass(frozen=True)
class EquivalenceCheckResult:
    """Both directions of the lifting equivalence at one concrete instance."""

    holds_forward: bool
    holds_backward: bool
    derivative_order: int
    input_modulus: int
    image_modulus: int
    inputs_congruent: bool
    images_congruent: bool


def hensel_profile(f: IntPolynomial, p: int) -> HenselProfile:
    """Compute s(a) for each representative a in [0, p)."""
    require_prime(p)
    return HenselProfile(p, f, {a: derivative_order(f, p, a) for a in range(p)})


def check_forward_lift(f: IntPolynomial, p: int, a: int, b: int, r: int) -> bool:
    """Truth of: a = b (mod p**(r-s)) implies f(a) = f(b) (mod p**r).

    Requires r >= 2s with s = ord_p(f'(a)) finite; under that precondition
    the implication always holds, so this exists as an executable check and
    should always return True.
    """
    require_prime(p)
    s = _finite_order(f, p, a)
    if r < 2 * s:
        raise ValueError(f"requires r >= 2s (r={r}, s={s})")
    if (a - b) % p ** (r - s) != 0:
        return True
    return (evaluate(f, a) - evaluate(f, b)) % p**r == 0


def check_lifting_base(f: IntPolynomial, p: int, a: int, r0: int) -> bool:
    """Exhaustively test the lifting-base equivalence at exponent r0.

    True iff for every b in [0, p**r0):
    a = b (mod p**(r0-s)) <=> f(a) = f(b) (mod p**r0), with s = ord_p(f'(a)).
    A True result is the base hypothesis from which the equivalence
    propagates to every r >= r0; the requirement r0 >= 2s + 1 is enforced.
    """
    require_prime(p)
    s = _finite_order(f, p, a)
    if r0 < 2 * s + 1:
        raise ValueError(f"requires r0 >= 2s + 1 (r0={r0}, s={s})")
    q = p**r0
    step = p ** (r0 - s)
    table = residue_table(f, q)
    fa = eval_mod(f, a, q)
    inputs = (np.arange(q) - (a % q)) % step == 0
    images = table == fa
    return bool((inputs == images).all())


def check_equivalence_at(
    f: IntPolynomial, p: int, a: int, b: int, r: int
) -> EquivalenceCheckResult:
    """Evaluate both directions of the lifting equivalence at (a, b, r)."""
    require_prime(p)
    s = _finite_order(f, p, a)
    if r < s:
        raise ValueError(f"requires r >= s (r={r}, s={s})")
    input_modulus = p ** (r - s)
    image_modulus = p**r
    inputs_congruent = (a - b) % input_modulus == 0
    images_congruent = (evaluate(f, a) - evaluate(f, b)) % image_modulus == 0
    return EquivalenceCheckResult(
        holds_forward=not inputs_congruent or images_congruent,
        holds_backward=not images_congruent or inputs_congruent,
        derivative_order=s,
        input_modulus=input_modulus,
        image_modulus=image_modulus,
        inputs_congruent=inputs_congruent,
        images_congruent=images_congruent,
    )
