import itertools
import math

import numpy as np
import pytest

from conftest import naive_eval
from resiring import (
    CapExceededError,
    IntPolynomial,
    canonical_enumeration,
    canonical_polynomial,
    criterion_agreement_canonical,
    criterion_agreement_monomial,
    enumerate_functions,
    falling_factorial_poly,
    is_permutation_brute,
    is_permutation_prime_power,
    iter_canonical_coefficients,
    iter_canonical_polynomials,
    kempner,
    oracle_big_m,
    oracle_feasible,
    oracle_value_distribution,
)
from resiring import oracle as oracle_mod


class TestKempner:
    def test_examples(self):
        assert kempner(8) == 4
        assert kempner(1) == 1
        assert kempner(9) == 6

    def test_definition(self):
        for m in range(1, 200):
            k = kempner(m)
            assert math.factorial(k) % m == 0
            assert k == 1 or math.factorial(k - 1) % m != 0


class TestCanonicalEnumeration:
    def test_ranges(self):
        enum = canonical_enumeration(4)
        assert enum.ranges == (4, 4, 2, 2)
        assert enum.total == 64

    def test_range_formula(self):
        for m in (2, 3, 4, 5, 6, 8, 9, 12, 16):
            enum = canonical_enumeration(m)
            assert enum.kempner == kempner(m)
            for k, size in enumerate(enum.ranges):
                assert size == m // math.gcd(m, math.factorial(k))

    def test_falling_factorial_polys(self):
        assert falling_factorial_poly(0).coeffs == (1,)
        assert falling_factorial_poly(1).coeffs == (0, 1)
        assert falling_factorial_poly(2).coeffs == (0, -1, 1)
        assert falling_factorial_poly(3).coeffs == (0, 2, -3, 1)


class TestEnumerateFunctions:
    @pytest.mark.parametrize("m,count", [(2, 4), (3, 27), (4, 64)])
    def test_counts(self, m, count):
        visited = []
        assert enumerate_functions(m, visited.append) == count
        assert len(visited) == count

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_functions(16, lambda t: None, cap=100)

    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8, 9, 12])
    def test_canonicity(self, m):
        # distinct tuples induce distinct tables, and the count matches
        # the range-product formula
        seen = set()
        count = enumerate_functions(m, seen.add)
        assert count == len(seen) == canonical_enumeration(m).total

    def test_tables_match_polynomials(self):
        # the incrementally built tables agree with term-by-term evaluation
        # of the corresponding canonical polynomial
        for m in (4, 6, 9):
            tables = []
            enumerate_functions(m, tables.append)
            coeff_tuples = list(iter_canonical_coefficients(m))
            assert len(tables) == len(coeff_tuples)
            stride = max(1, len(tables) // 50)
            for i in range(0, len(tables), stride):
                f = canonical_polynomial(m, coeff_tuples[i])
                assert tables[i] == tuple(naive_eval(f.coeffs, a, m) for a in range(m))

    @pytest.mark.parametrize("m", [2, 3, 4, 6])
    def test_completeness_against_monomial_brute_force(self, m):
        # every polynomial with coefficients in [0, m) of degree < kempner(m)
        # induces a table the canonical enumeration also produces
        canonical = set()
        enumerate_functions(m, canonical.add)
        mu = kempner(m)
        monomial = set()
        for coeffs in itertools.product(range(m), repeat=mu):
            monomial.add(tuple(naive_eval(coeffs, a, m) for a in range(m)))
        assert monomial == canonical

    def test_high_degree_polynomials_fold_in(self, ):
        import random

        rng = random.Random(61)
        for m in (4, 6, 9):
            canonical = set()
            enumerate_functions(m, canonical.add)
            for _ in range(25):
                coeffs = tuple(rng.randrange(-30, 30) for _ in range(rng.randint(1, 13)))
                table = tuple(naive_eval(coeffs, a, m) for a in range(m))
                assert table in canonical


class TestStatisticsSweep:
    @pytest.mark.parametrize("m", [2, 3, 4, 5, 6, 8, 9, 12])
    def test_histogram_matches_full_enumeration(self, m):
        reference: dict[int, int] = {}

        def tally(table):
            n = len(set(table))
            reference[n] = reference.get(n, 0) + 1

        enumerate_functions(m, tally)
        assert oracle_value_distribution(m) == reference

    def test_python_and_kernel_paths_agree(self):
        if not oracle_mod._HAVE_NUMBA:
            pytest.skip("kernel unavailable")
        for m in (4, 6, 8, 9, 10, 12):
            tables, ranges, _ = oracle_mod._quotient_space(m)
            hist_py, best_py, at_py, wit_py = oracle_mod._stats_python(tables, ranges, m)
            hists, bests, wits = oracle_mod._stats_kernel(
                tables, oracle_mod._wrap_rows(tables, ranges, m), ranges, m, 5
            )
            assert (hists.sum(axis=0) == hist_py).all()
            best_n, best_at, wit = -1, -1, None
            for ci in range(len(bests)):
                n, at = int(bests[ci, 0]), int(bests[ci, 1])
                if n > best_n or (n == best_n and 0 <= at < best_at):
                    best_n, best_at, wit = n, at, wits[ci]
            assert (best_n, best_at) == (best_py, at_py)
            assert (wit == wit_py).all()


class TestOracleBigM:
    @pytest.mark.parametrize("m,expected", [(3, 2), (4, 3), (12, 9)])
    def test_examples(self, m, expected):
        value, witness = oracle_big_m(m)
        assert value == expected
        assert len(witness) == m
        assert len(set(witness)) == expected

    def test_rejects_one(self):
        with pytest.raises(ValueError):
            oracle_big_m(1)

    def test_infeasible_composite(self):
        with pytest.raises(CapExceededError):
            oracle_value_distribution(22, cap=10**6)
        assert not oracle_feasible(22, cap=10**6)

    def test_prime_shortcut_agrees_with_enumeration(self):
        for p in (2, 3, 5, 7):
            enumerated, _ = oracle_big_m(p)
            shortcut, witness = oracle_mod._prime_big_m(p)
            assert enumerated == shortcut == p - 1
            assert len(set(witness)) == p - 1

    def test_large_prime_uses_shortcut(self):
        value, witness = oracle_big_m(31, cap=10**6)
        assert value == 30
        assert len(set(witness)) == 30

    def test_witness_is_a_polynomial_function(self):
        # the witness table must be realized by some canonical polynomial
        for m in (4, 6, 8, 9):
            _, witness = oracle_big_m(m)
            tables = set()
            enumerate_functions(m, tables.add)
            assert witness in tables


class TestValueDistribution:
    def test_mod_2(self):
        assert oracle_value_distribution(2) == {1: 2, 2: 2}

    def test_mod_3(self):
        hist = oracle_value_distribution(3)
        assert sum(hist.values()) == 27
        assert hist[3] == 6

    def test_mod_4_gap(self):
        hist = oracle_value_distribution(4)
        assert hist.get(3, 0) > 0
        assert sum(hist.values()) == 64
        assert all(not (3 < n < 4) for n in hist)

    def test_permutation_bucket_passes_the_criterion(self):
        for m, factor in ((4, (2, 2)), (8, (2, 3)), (9, (3, 2))):
            perms = 0
            for coeffs in iter_canonical_coefficients(m):
                f = canonical_polynomial(m, coeffs)
                table = tuple(naive_eval(f.coeffs, a, m) for a in range(m))
                if len(set(table)) == m:
                    perms += 1
                    assert is_permutation_prime_power(f, *factor).is_permutation
            assert perms == oracle_value_distribution(m)[m]


class TestAgreementSweeps:
    @pytest.mark.parametrize("p", [2, 3])
    def test_canonical_sweep_matches_api(self, p):
        m = p * p
        report = criterion_agreement_canonical(p)
        assert report.disagreements == 0
        enum = canonical_enumeration(m)
        assert report.checked == enum.total // m
        for f in iter_canonical_polynomials(m):
            crit = is_permutation_prime_power(f, p, 2).is_permutation
            brute = is_permutation_brute(f, m).is_permutation
            assert crit == brute

    @pytest.mark.parametrize("p", [2, 3, 5])
    def test_monomial_sweep(self, p):
        report = criterion_agreement_monomial(p, 4, p * p)
        assert report.disagreements == 0
        assert report.checked == (p * p) ** 4

    def test_python_and_kernel_agree(self):
        if not oracle_mod._HAVE_NUMBA:
            pytest.skip("kernel unavailable")
        enum = canonical_enumeration(9)
        basis = [falling_factorial_poly(k) for k in range(len(enum.ranges))]
        kernel = oracle_mod._run_agreement(basis, list(enum.ranges), 9, 3, 10**8)
        original = oracle_mod._HAVE_NUMBA
        oracle_mod._HAVE_NUMBA = False
        try:
            python = oracle_mod._run_agreement(basis, list(enum.ranges), 9, 3, 10**8)
        finally:
            oracle_mod._HAVE_NUMBA = original
        assert kernel == python

    def test_sweep_actually_compares_verdicts(self):
        # negative control: zeroing the derivative tables forces the
        # criterion side to reject everything, so the mismatch count must
        # equal the number of permutations in the space
        p, m = 2, 4
        basis = [IntPolynomial((0,) * k + (1,)) for k in range(3)]
        ranges = np.array([4, 4], dtype=np.int64)
        polys = basis[1:]
        tables_m = np.array(
            [[naive_eval(f.coeffs, x, m) for x in range(m)] for f in polys], np.int64
        )
        tables_p = np.array(
            [[naive_eval(f.coeffs, x, p) for x in range(p)] for f in polys], np.int64
        )
        tables_d = np.zeros((2, p), dtype=np.int64)
        bad, first = oracle_mod._agreement_python(
            tables_m, tables_p, tables_d, ranges, m, p
        )
        perms = sum(
            len({(c1 * x + c2 * x * x) % m for x in range(m)}) == m
            for c1 in range(4)
            for c2 in range(4)
        )
        assert perms > 0
        assert bad == perms
        assert first >= 0
