import math
import random

import pytest

from conftest import random_poly
from resiring import (
    InfiniteValuationError,
    IntPolynomial,
    check_equivalence_at,
    check_forward_lift,
    check_lifting_base,
    derivative_order,
    evaluate,
    hensel_profile,
    parse_poly,
)


def counterexample_poly(p: int) -> IntPolynomial:
    """x^2 + p(p-1)x: its lifting-base hypothesis fails at a = 0, r0 = 3."""
    return IntPolynomial((0, p * (p - 1), 1))


class TestProfile:
    def test_cubic_mod_2(self):
        profile = hensel_profile(parse_poly("x^3+2*x"), 2)
        assert profile.orders == {0: 1, 1: 0}
        assert profile.max_finite_order == 1
        assert not profile.has_infinite_order

    def test_identity(self):
        profile = hensel_profile(parse_poly("x"), 3)
        assert profile.orders == {0: 0, 1: 0, 2: 0}

    def test_extremal_mod_3(self):
        profile = hensel_profile(parse_poly("x^5+3*x"), 3)
        assert profile.orders == {0: 1, 1: 0, 2: 0}

    def test_infinite_order_flagged(self):
        # f' = 3x^2 - 3 vanishes at 1
        profile = hensel_profile(parse_poly("x^3 - 3*x"), 3)
        assert profile.has_infinite_order
        assert math.isinf(profile.orders[1])

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            hensel_profile(parse_poly("x"), 4)


class TestForwardLift:
    def test_cubic_instance(self):
        f = parse_poly("x^3+2*x")
        assert evaluate(f, 4) % 8 == evaluate(f, 0) % 8
        assert check_forward_lift(f, 2, 0, 4, 3)

    def test_identity(self):
        assert check_forward_lift(parse_poly("x"), 3, 5, 14, 2)

    def test_counterexample_shape_still_lifts_forward(self):
        f = parse_poly("x^2+6*x")
        assert check_forward_lift(f, 3, 0, 9, 3)

    def test_precondition(self):
        f = parse_poly("x^3+2*x")  # s = 1 at a = 0
        with pytest.raises(ValueError):
            check_forward_lift(f, 2, 0, 2, 1)

    def test_inapplicable_when_derivative_vanishes(self):
        with pytest.raises(InfiniteValuationError):
            check_forward_lift(parse_poly("x^3 - 3*x"), 3, 1, 4, 4)

    def test_always_true_over_random_sweep(self):
        rng = random.Random(41)
        for _ in range(25):
            f = random_poly(rng, 8, -50, 50)
            for p in (2, 3, 5):
                for a in range(p**3):
                    s = derivative_order(f, p, a)
                    if math.isinf(s) or s > 2:
                        continue
                    s = int(s)
                    for r in range(2 * s, 2 * s + 4):
                        step = p ** (r - s)
                        for b in range(a % step, p**r, step):
                            assert check_forward_lift(f, p, a, b, r)


class TestLiftingBase:
    def test_cubic_base_holds(self):
        assert check_lifting_base(parse_poly("x^3+2*x"), 2, 0, 3)

    def test_counterexample_fails(self):
        f = parse_poly("x^2+6*x")
        assert evaluate(f, 3) % 27 == evaluate(f, 0) % 27
        assert (3 - 0) % 9 != 0
        assert not check_lifting_base(f, 3, 0, 3)

    def test_identity_at_base_one(self):
        assert check_lifting_base(parse_poly("x"), 5, 0, 1)

    def test_requires_minimum_exponent(self):
        with pytest.raises(ValueError):
            check_lifting_base(parse_poly("x^3+2*x"), 2, 0, 2)

    @pytest.mark.parametrize("p", [2, 3, 5, 7])
    def test_counterexample_family(self, p):
        f = counterexample_poly(p)
        assert derivative_order(f, p, 0) == 1
        assert not check_lifting_base(f, p, 0, 3)

    def test_true_base_propagates_upward(self):
        # once the equivalence holds exhaustively at r0, it holds at r0+1..r0+3
        rng = random.Random(43)
        checked = 0
        for _ in range(90):
            f = random_poly(rng, 6, -30, 30)
            p = rng.choice([2, 3])
            a = rng.randrange(p)
            s = derivative_order(f, p, a)
            if math.isinf(s) or s > 1:
                continue
            r0 = 2 * int(s) + 1
            if not check_lifting_base(f, p, a, r0):
                continue
            checked += 1
            for r in range(r0, r0 + 4):
                step = p ** (r - int(s))
                q = p**r
                fa = evaluate(f, a)
                for b in range(q):
                    inputs = (a - b) % step == 0
                    images = (fa - evaluate(f, b)) % q == 0
                    assert inputs == images
        assert checked >= 10


class TestEquivalence:
    def test_unit_class_instance(self):
        f = parse_poly("x^3+2*x")
        res = check_equivalence_at(f, 2, 1, 3, 2)
        assert res.derivative_order == 0
        assert res.holds_forward and res.holds_backward
        assert not res.inputs_congruent and not res.images_congruent

    def test_identity(self):
        res = check_equivalence_at(parse_poly("x"), 5, 3, 28, 2)
        assert res.holds_forward and res.holds_backward

    def test_backward_fails_on_counterexample(self):
        res = check_equivalence_at(parse_poly("x^2+6*x"), 3, 0, 3, 3)
        assert res.holds_forward
        assert not res.holds_backward
        assert res.derivative_order == 1
        assert res.input_modulus == 9 and res.image_modulus == 27

    def test_infinite_order_rejected(self):
        with pytest.raises(InfiniteValuationError):
            check_equivalence_at(parse_poly("x^3 - 3*x"), 3, 1, 2, 3)

    def test_zero_order_equivalence_within_class(self):
        # s = 0 and a = b mod p force the congruence levels to track exactly
        rng = random.Random(47)
        for _ in range(30):
            f = random_poly(rng, 6, -30, 30)
            for p in (2, 3, 5):
                for a in range(p):
                    if derivative_order(f, p, a) != 0:
                        continue
                    for r in range(1, 6):
                        q = p**r
                        for b in range(a % p, min(q, a % p + p * 40), p):
                            res = check_equivalence_at(f, p, a, b, r)
                            assert res.holds_forward and res.holds_backward
