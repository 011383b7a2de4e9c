import math
import random

import pytest

from conftest import naive_eval, naive_is_permutation, naive_n
from resiring import (
    FactoredModulus,
    IntPolynomial,
    assemble_crt_poly,
    big_m,
    derivative,
    extremal_poly,
    interpolate_mod_p,
    is_permutation,
    is_permutation_prime_power,
    m_of_p,
    m_prime_power,
    n_value,
    parse_poly,
    render_poly,
)


class TestExtremalPoly:
    @pytest.mark.parametrize(
        "p,text", [(2, "x^3 + 2*x"), (3, "x^5 + 3*x"), (5, "x^9 + 5*x")]
    )
    def test_shape(self, p, text):
        assert render_poly(extremal_poly(p)) == text

    def test_permutes_the_prime_but_nothing_higher(self):
        for p in (2, 3, 5, 7):
            f = extremal_poly(p)
            assert naive_is_permutation(f.coeffs, p)
            for r in (2, 3):
                assert not is_permutation_prime_power(f, p, r).is_permutation

    def test_derivative_orders(self):
        # the critical class is 0 and only 0, with order exactly one
        for p in (2, 3, 5):
            fprime = derivative(extremal_poly(p))
            assert naive_eval(fprime.coeffs, 0, p) == 0
            assert naive_eval(fprime.coeffs, 0, p * p) != 0
            for a in range(1, p):
                assert naive_eval(fprime.coeffs, a, p) != 0


class TestPrimePowerBound:
    def test_table(self):
        assert m_prime_power(2, 1) == 1
        assert m_prime_power(3, 1) == 2
        assert m_prime_power(2, 3) == 6
        assert m_prime_power(3, 2) == 7
        assert m_prime_power(5, 2) == 21

    def test_attained_by_the_extremal_family(self):
        cases = [(2, r) for r in range(2, 7)] + [(3, r) for r in range(2, 6)] + [
            (5, r) for r in range(2, 5)
        ]
        for p, r in cases:
            assert n_value(extremal_poly(p), p**r) == m_prime_power(p, r)

    def test_lifting_from_the_cube(self):
        # the exact count at p^3 together with the derivative hypothesis
        # pins every higher exponent
        for p in (2, 3):
            f = extremal_poly(p)
            assert n_value(f, p**3) == p**3 - p**2 + p
            for r in range(4, 7):
                assert n_value(f, p**r) == m_prime_power(p, r)


class TestPerPrimeQuantity:
    def test_examples(self):
        assert m_of_p(12, 2) == 9
        assert m_of_p(12, 3) == 8
        assert m_of_p(6, 3) == 4

    def test_coincides_with_prime_power_bound(self):
        for p in (2, 3, 5):
            for r in range(1, 5):
                assert m_of_p(p**r, p) == m_prime_power(p, r)

    def test_rejects_non_divisor(self):
        with pytest.raises(ValueError):
            m_of_p(12, 5)


class TestInterpolation:
    def test_reproduces_tables(self):
        rng = random.Random(53)
        for p in (2, 3, 5, 7, 11, 13):
            for _ in range(5):
                table = [rng.randrange(p) for _ in range(p)]
                f = interpolate_mod_p(table, p)
                assert [naive_eval(f.coeffs, a, p) for a in range(p)] == table


class TestAssembleCrtPoly:
    def test_two_parts(self):
        f = assemble_crt_poly([(2, 2, parse_poly("x^3+2*x")), (3, 1, parse_poly("x"))])
        for i in range(4):
            assert f.coeff(i) % 4 == parse_poly("x^3+2*x").coeff(i) % 4
            assert f.coeff(i) % 3 == parse_poly("x").coeff(i) % 3
        assert naive_n(f.coeffs, 12) == 9

    def test_single_part_reduces(self):
        f = assemble_crt_poly([(2, 2, parse_poly("5*x + 7"))])
        assert f.coeffs == (3, 1)

    def test_identity_parts(self):
        f = assemble_crt_poly([(2, 1, parse_poly("x")), (5, 1, parse_poly("x"))])
        assert naive_n(f.coeffs, 10) == 10

    def test_rejects_duplicate_primes(self):
        with pytest.raises(ValueError):
            assemble_crt_poly([(2, 1, parse_poly("x")), (2, 2, parse_poly("x"))])

    def test_value_sets_match_the_parts(self):
        rng = random.Random(59)
        for _ in range(20):
            parts = []
            for p in rng.sample([2, 3, 5, 7], k=rng.randint(1, 3)):
                r = rng.randint(1, 2)
                poly = IntPolynomial(tuple(rng.randrange(p**r) for _ in range(4)))
                parts.append((p, r, poly))
            f = assemble_crt_poly(parts)
            total = math.prod(p**r for p, r, _ in parts)
            expect = math.prod(naive_n(piece.coeffs, p**r) for p, r, piece in parts)
            assert naive_n(f.coeffs, total) == expect


class TestBigM:
    def test_prime_power_table(self):
        assert big_m(8).bound == 6
        assert big_m(9).bound == 7
        assert big_m(27).bound == 21

    def test_composites(self):
        assert big_m(6).bound == 4
        assert big_m(12).bound == 9

    def test_exception_family_flag(self):
        assert big_m(12).exception_flag
        assert big_m(24).exception_flag
        assert big_m(48).exception_flag
        for m in (6, 8, 9, 18, 36, 30):
            assert not big_m(m).exception_flag

    def test_rejects_one(self):
        with pytest.raises(ValueError):
            big_m(1)

    def test_per_prime_values(self):
        report = big_m(12)
        assert report.per_prime == {2: 9, 3: 8}
        assert report.bound == max(report.per_prime.values())

    def test_achieving_poly_everywhere(self):
        # the witness must attain the bound without being a permutation
        for m in range(2, 61):
            report = big_m(m)
            f = report.achieving_poly
            assert n_value(f, m) == report.bound
            assert not is_permutation(f, m).is_permutation

    def test_largest_prime_wins_outside_the_exception_family(self):
        for m in range(2, 61):
            report = big_m(m)
            largest = report.modulus.factors[-1][0]
            if report.exception_flag:
                assert report.bound > report.per_prime[largest]
            else:
                assert report.bound == report.per_prime[largest]

    def test_accepts_factored_modulus(self):
        assert big_m(FactoredModulus.parse("2^2*3")).bound == 9
