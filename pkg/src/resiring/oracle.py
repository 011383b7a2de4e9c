"""Independent exhaustive ground truth over all polynomial functions mod m.

Polynomial functions on Z/mZ are enumerated without duplication through the
falling-factorial basis F_k(x) = x(x-1)...(x-k+1): the coefficient of F_k
ranges over [0, m / gcd(m, k!)), for k below the least k with m dividing k!.
Distinct coefficient tuples induce distinct functions, and every polynomial
function appears exactly once; both facts are property-tested at small m
rather than assumed.

Value-set statistics (the histogram of value-set sizes, the largest
non-permutation value set, and a witness table) are computed by a sweep
that pins the constant coefficient to zero: adding a constant shifts the
image set bijectively, so each visited table stands for exactly m functions
with identical statistics.  The sweep runs in a jit-compiled kernel when
numba is available, with a pure Python fallback used for small moduli and
for cross-checking the kernel.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .bounds import interpolate_mod_p
from .poly import IntPolynomial, derivative, eval_mod, is_prime
from .valuesets import CapExceededError

#: Default bound on the number of function tables a sweep may visit.
DEFAULT_FUNCTION_CAP = 10**8

# Moduli up to this fit the uint64 bitmask distinct-counting fast path.
_MASK_LIMIT = 64

try:  # pragma: no cover - exercised indirectly
    from numba import njit, prange

    _HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    _HAVE_NUMBA = False


def kempner(m: int) -> int:
    """Least k >= 1 such that m divides k!."""
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    fact = 1 % m
    k = 1
    while True:
        fact = fact * k % m
        if fact == 0:
            return k
        k += 1


@dataclass(frozen=True)
class CanonicalFunctionEnumeration:
    """Coefficient ranges enumerating each polynomial function exactly once."""

    modulus: int
    kempner: int
    ranges: tuple[int, ...]
    total: int


def canonical_enumeration(m: int) -> CanonicalFunctionEnumeration:
    mu = kempner(m)
    ranges = []
    fact = 1 % m
    for k in range(mu):
        ranges.append(m // math.gcd(m, fact))
        fact = fact * (k + 1) % m
    return CanonicalFunctionEnumeration(m, mu, tuple(ranges), math.prod(ranges))


@functools.lru_cache(maxsize=None)
def falling_factorial_poly(k: int) -> IntPolynomial:
    """x(x-1)...(x-k+1) as an exact integer polynomial (1 for k = 0)."""
    if k < 0:
        raise ValueError("index must be nonnegative")
    coeffs = [1]
    for j in range(k):
        nxt = [0] * (len(coeffs) + 1)
        for i, c in enumerate(coeffs):
            nxt[i] -= c * j
            nxt[i + 1] += c
        coeffs = nxt
    return IntPolynomial(tuple(coeffs))


def canonical_polynomial(m: int, coefficients: Sequence[int]) -> IntPolynomial:
    """The integer polynomial sum_k c_k * F_k for a canonical tuple."""
    width = max((len(falling_factorial_poly(k).coeffs) for k in range(len(coefficients))), default=0)
    out = [0] * max(width, 1)
    for k, c in enumerate(coefficients):
        for i, fc in enumerate(falling_factorial_poly(k).coeffs):
            out[i] += c * fc
    return IntPolynomial(tuple(out))


def _basis_tables(m: int, count: int) -> np.ndarray:
    """(count, m) int64 array with row k holding F_k(x) mod m."""
    x = np.arange(m, dtype=np.int64)
    out = np.empty((count, m), dtype=np.int64)
    row = np.ones(m, dtype=np.int64) % m
    for k in range(count):
        out[k] = row
        row = row * ((x - k) % m) % m
    return out


def iter_canonical_coefficients(
    m: int, *, cap: int = DEFAULT_FUNCTION_CAP
) -> Iterator[tuple[int, ...]]:
    """All canonical coefficient tuples, lexicographically ascending."""
    enum = canonical_enumeration(m)
    if enum.total > cap:
        raise CapExceededError(f"{enum.total} functions exceed the cap {cap}")
    return itertools.product(*(range(n) for n in enum.ranges))


def iter_canonical_polynomials(
    m: int, *, cap: int = DEFAULT_FUNCTION_CAP
) -> Iterator[IntPolynomial]:
    """One integer polynomial per polynomial function on Z/mZ, lex order."""
    for coefficients in iter_canonical_coefficients(m, cap=cap):
        yield canonical_polynomial(m, coefficients)


def enumerate_functions(
    m: int, visit: Callable[[tuple[int, ...]], None], *, cap: int = DEFAULT_FUNCTION_CAP
) -> int:
    """Visit the value table of every polynomial function on Z/mZ once.

    Tables are visited in lexicographic order of the canonical coefficient
    tuple and built incrementally by pointwise basis-row additions; the
    callback receives an immutable copy.  Returns the number visited.
    """
    enum = canonical_enumeration(m)
    if enum.total > cap:
        raise CapExceededError(f"{enum.total} functions exceed the cap {cap}")
    ranges = enum.ranges
    count = len(ranges)
    tables = [[int(v) for v in row] for row in _basis_tables(m, count)]
    wraps = [[(-(ranges[k] - 1) * v) % m for v in tables[k]] for k in range(count)]
    table = [0] * m
    c = [0] * count
    visited = 0
    while True:
        visit(tuple(table))
        visited += 1
        j = count - 1
        while j >= 0:
            c[j] += 1
            if c[j] < ranges[j]:
                row = tables[j]
                for x in range(m):
                    t = table[x] + row[x]
                    table[x] = t - m if t >= m else t
                break
            c[j] = 0
            row = wraps[j]
            for x in range(m):
                t = table[x] + row[x]
                table[x] = t % m
            j -= 1
        else:
            return visited


# ---------------------------------------------------------------------------
# Value-set statistics sweep (constant coefficient quotiented out)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FunctionStatistics:
    """Aggregate value-set statistics over all polynomial functions mod m."""

    modulus: int
    histogram: dict[int, int]
    max_nonpermutation: int
    witness: tuple[int, ...] | None
    total: int


_stats_cache: dict[int, FunctionStatistics] = {}


def _quotient_space(m: int) -> tuple[np.ndarray, np.ndarray, int]:
    """Basis tables and ranges with the constant dimension removed.

    Dimensions are reordered so the largest range iterates innermost,
    which minimizes odometer carries; the order is deterministic.
    """
    enum = canonical_enumeration(m)
    ranges = np.array(enum.ranges[1:], dtype=np.int64)
    tables = _basis_tables(m, len(enum.ranges))[1:]
    order = np.argsort(ranges, kind="stable")
    return np.ascontiguousarray(tables[order]), ranges[order], enum.total


def _wrap_rows(tables: np.ndarray, ranges: np.ndarray, m: int) -> np.ndarray:
    return np.ascontiguousarray((-(ranges[:, None] - 1) * tables) % m)


def _stats_python(
    tables: np.ndarray, ranges: np.ndarray, m: int
) -> tuple[np.ndarray, int, int, np.ndarray]:
    """Reference implementation of the statistics sweep."""
    count = len(ranges)
    rows = [[int(v) for v in row] for row in tables]
    wraps = [[int(v) for v in row] for row in _wrap_rows(tables, ranges, m)]
    table = [0] * m
    c = [0] * count
    visits = math.prod(int(n) for n in ranges)
    hist = np.zeros(m + 1, dtype=np.int64)
    best_n = -1
    best_at = -1
    witness = np.zeros(m, dtype=np.int64)
    for step in range(visits):
        n = len(set(table))
        hist[n] += 1
        if n < m and n > best_n:
            best_n = n
            best_at = step
            witness[:] = table
        if step + 1 == visits:
            break
        j = count - 1
        while True:
            c[j] += 1
            if c[j] < ranges[j]:
                row = rows[j]
                for x in range(m):
                    t = table[x] + row[x]
                    table[x] = t - m if t >= m else t
                break
            c[j] = 0
            row = wraps[j]
            for x in range(m):
                table[x] = (table[x] + row[x]) % m
            j -= 1
    return hist, best_n, best_at, witness


if _HAVE_NUMBA:
    _M1 = np.uint64(0x5555555555555555)
    _M2 = np.uint64(0x3333333333333333)
    _M4 = np.uint64(0x0F0F0F0F0F0F0F0F)
    _H01 = np.uint64(0x0101010101010101)
    _U1 = np.uint64(1)
    _U2 = np.uint64(2)
    _U4 = np.uint64(4)
    _U56 = np.uint64(56)

    @njit(inline="always", cache=True)
    def _popcount(v):
        v = v - ((v >> _U1) & _M1)
        v = (v & _M2) + ((v >> _U2) & _M2)
        v = (v + (v >> _U4)) & _M4
        return np.int64((v * _H01) >> _U56)

    @njit(cache=True, parallel=True)
    def _stats_kernel(tables, wraps, ranges, m, nchunks):
        count = ranges.shape[0]
        total = np.int64(1)
        for k in range(count):
            total *= ranges[k]
        chunk = (total + nchunks - 1) // nchunks
        hists = np.zeros((nchunks, m + 1), dtype=np.int64)
        bests = np.full((nchunks, 2), -1, dtype=np.int64)
        wits = np.zeros((nchunks, m), dtype=np.int64)
        for ci in prange(nchunks):
            start = ci * chunk
            end = min(start + chunk, total)
            if start >= end:
                continue
            c = np.zeros(count, dtype=np.int64)
            table = np.zeros(m, dtype=np.int64)
            idx = start
            for k in range(count - 1, -1, -1):
                c[k] = idx % ranges[k]
                idx //= ranges[k]
            for k in range(count):
                if c[k]:
                    for x in range(m):
                        table[x] = (table[x] + c[k] * tables[k, x]) % m
            hist = np.zeros(m + 1, dtype=np.int64)
            best_n = np.int64(-1)
            best_at = np.int64(-1)
            mask = np.uint64(0)
            for x in range(m):
                mask |= _U1 << np.uint64(table[x])
            for step in range(start, end):
                n = _popcount(mask)
                hist[n] += 1
                if n < m and n > best_n:
                    best_n = n
                    best_at = step
                    for x in range(m):
                        wits[ci, x] = table[x]
                if step + 1 == end:
                    break
                j = count - 1
                while True:
                    c[j] += 1
                    if c[j] < ranges[j]:
                        break
                    c[j] = 0
                    for x in range(m):
                        table[x] = (table[x] + wraps[j, x]) % m
                    j -= 1
                mask = np.uint64(0)
                for x in range(m):
                    t = table[x] + tables[j, x]
                    if t >= m:
                        t -= m
                    table[x] = t
                    mask |= _U1 << np.uint64(t)
            hists[ci] = hist
            bests[ci, 0] = best_n
            bests[ci, 1] = best_at
        return hists, bests, wits

    @njit(cache=True, parallel=True)
    def _agreement_kernel(tables_m, tables_p, tables_d, ranges, m, p, nchunks):
        count = ranges.shape[0]
        total = np.int64(1)
        for k in range(count):
            total *= ranges[k]
        chunk = (total + nchunks - 1) // nchunks
        wraps_m = np.empty_like(tables_m)
        wraps_p = np.empty_like(tables_p)
        wraps_d = np.empty_like(tables_d)
        for k in range(count):
            back = -(ranges[k] - 1)
            for x in range(m):
                wraps_m[k, x] = back * tables_m[k, x] % m
            for x in range(p):
                wraps_p[k, x] = back * tables_p[k, x] % p
                wraps_d[k, x] = back * tables_d[k, x] % p
        mismatches = np.zeros(nchunks, dtype=np.int64)
        firsts = np.full(nchunks, -1, dtype=np.int64)
        for ci in prange(nchunks):
            start = ci * chunk
            end = min(start + chunk, total)
            if start >= end:
                continue
            c = np.zeros(count, dtype=np.int64)
            table = np.zeros(m, dtype=np.int64)
            table_p = np.zeros(p, dtype=np.int64)
            table_d = np.zeros(p, dtype=np.int64)
            idx = start
            for k in range(count - 1, -1, -1):
                c[k] = idx % ranges[k]
                idx //= ranges[k]
            for k in range(count):
                if c[k]:
                    for x in range(m):
                        table[x] = (table[x] + c[k] * tables_m[k, x]) % m
                    for x in range(p):
                        table_p[x] = (table_p[x] + c[k] * tables_p[k, x]) % p
                        table_d[x] = (table_d[x] + c[k] * tables_d[k, x]) % p
            bad = np.int64(0)
            first = np.int64(-1)
            mask = np.uint64(0)
            for x in range(m):
                mask |= _U1 << np.uint64(table[x])
            for step in range(start, end):
                brute = _popcount(mask) == m
                crit = True
                mask_p = np.uint64(0)
                for x in range(p):
                    if table_d[x] == 0:
                        crit = False
                    mask_p |= _U1 << np.uint64(table_p[x])
                if crit:
                    crit = _popcount(mask_p) == p
                if brute != crit:
                    bad += 1
                    if first < 0:
                        first = step
                if step + 1 == end:
                    break
                j = count - 1
                while True:
                    c[j] += 1
                    if c[j] < ranges[j]:
                        break
                    c[j] = 0
                    for x in range(m):
                        table[x] = (table[x] + wraps_m[j, x]) % m
                    for x in range(p):
                        table_p[x] = (table_p[x] + wraps_p[j, x]) % p
                        table_d[x] = (table_d[x] + wraps_d[j, x]) % p
                    j -= 1
                mask = np.uint64(0)
                for x in range(m):
                    t = table[x] + tables_m[j, x]
                    if t >= m:
                        t -= m
                    table[x] = t
                    mask |= _U1 << np.uint64(t)
                for x in range(p):
                    t = table_p[x] + tables_p[j, x]
                    table_p[x] = t - p if t >= p else t
                    t = table_d[x] + tables_d[j, x]
                    table_d[x] = t - p if t >= p else t
            mismatches[ci] = bad
            firsts[ci] = first
        return mismatches, firsts


def set_threads(n: int) -> None:
    """Limit worker threads used by the jit sweeps (no-op without numba)."""
    if n < 1:
        raise ValueError("thread count must be positive")
    if _HAVE_NUMBA:
        import numba

        numba.set_num_threads(min(n, numba.config.NUMBA_NUM_THREADS))


def _nchunks(visits: int) -> int:
    return int(min(256, max(1, visits // 65536)))


def _quotient_visits_capped(m: int, cap: int) -> int | None:
    """Number of tables the statistics sweep would visit, or None above cap.

    Computed with early bailout so that moduli whose enumeration is
    astronomically large never materialize the full product.
    """
    fact = 1 % m
    k = 0
    visits = 1
    while fact != 0:
        if k > 0:
            visits *= m // math.gcd(m, fact)
            if visits > cap:
                return None
        k += 1
        fact = fact * k % m
    return visits


def _function_statistics(m: int, cap: int) -> FunctionStatistics:
    if m < 1:
        raise ValueError("modulus must be a positive integer")
    if m in _stats_cache:
        return _stats_cache[m]
    if m == 1:
        stats = FunctionStatistics(1, {1: 1}, -1, None, 1)
        _stats_cache[1] = stats
        return stats
    visits = _quotient_visits_capped(m, cap)
    if visits is None:
        raise CapExceededError(
            f"sweeping modulus {m} needs more table visits than the cap {cap}"
        )
    tables, ranges, total = _quotient_space(m)
    if _HAVE_NUMBA and m <= _MASK_LIMIT:
        hists, bests, wits = _stats_kernel(
            tables, _wrap_rows(tables, ranges, m), ranges, m, _nchunks(visits)
        )
        hist = hists.sum(axis=0)
        best_n = -1
        best_at = -1
        witness = None
        for ci in range(len(bests)):
            n, at = int(bests[ci, 0]), int(bests[ci, 1])
            if n > best_n or (n == best_n and at < best_at):
                best_n, best_at = n, at
                witness = tuple(int(v) for v in wits[ci])
    else:
        hist, best_n, _, wit = _stats_python(tables, ranges, m)
        witness = tuple(int(v) for v in wit) if best_n >= 0 else None
    histogram = {n: int(hist[n]) * m for n in range(m + 1) if hist[n]}
    stats = FunctionStatistics(
        m, histogram, best_n, witness if best_n >= 0 else None, total
    )
    _stats_cache[m] = stats
    return stats


def _prime_big_m(p: int) -> tuple[int, tuple[int, ...]]:
    """M(p) for prime p without enumeration.

    A non-permutation of a finite set misses at least one value, so p - 1
    bounds every non-permutation value set.  Over a prime modulus every
    table is induced by a polynomial; interpolating the map that fixes
    [1, p) and sends 0 to 1 exhibits one attaining p - 1 values, and the
    interpolant is re-evaluated here to confirm it reproduces the table.
    """
    table = tuple([1] + list(range(1, p)))
    witness_poly = interpolate_mod_p(list(table), p)
    realized = tuple(eval_mod(witness_poly, a, p) for a in range(p))
    if realized != table:
        raise AssertionError("interpolation failed to reproduce the witness table")
    return p - 1, table


def oracle_big_m(m: int, *, cap: int = DEFAULT_FUNCTION_CAP) -> tuple[int, tuple[int, ...]]:
    """Largest value-set size among non-permutation polynomial functions.

    Returns (M, witness_table).  Computed by exhaustive sweep whenever the
    enumeration fits the cap; for a prime modulus beyond the cap the
    pigeonhole bound p - 1 with an interpolated witness is used instead.
    """
    if m < 2:
        raise ValueError("every function on a one-element ring is a permutation")
    if m in _stats_cache or _quotient_visits_capped(m, cap) is not None:
        stats = _function_statistics(m, cap)
        assert stats.witness is not None
        return stats.max_nonpermutation, stats.witness
    if is_prime(m):
        return _prime_big_m(m)
    raise CapExceededError(f"modulus {m} is not enumerable within the cap {cap}")


def oracle_feasible(m: int, *, cap: int = DEFAULT_FUNCTION_CAP) -> bool:
    """Whether oracle_big_m(m) can produce a value under the given cap."""
    if m < 2:
        return False
    return (
        m in _stats_cache
        or _quotient_visits_capped(m, cap) is not None
        or is_prime(m)
    )


def oracle_value_distribution(m: int, *, cap: int = DEFAULT_FUNCTION_CAP) -> dict[int, int]:
    """Histogram mapping value-set size to the number of polynomial functions."""
    return dict(_function_statistics(m, cap).histogram)


# ---------------------------------------------------------------------------
# Criterion-versus-brute-force agreement sweeps
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AgreementReport:
    """Outcome of sweeping two permutation tests against each other."""

    checked: int
    disagreements: int
    first_disagreement: int | None


def _agreement_python(
    tables_m: np.ndarray, tables_p: np.ndarray, tables_d: np.ndarray,
    ranges: np.ndarray, m: int, p: int,
) -> tuple[int, int]:
    count = len(ranges)
    visits = math.prod(int(n) for n in ranges)
    wraps_m = _wrap_rows(tables_m, ranges, m)
    wraps_p = _wrap_rows(tables_p, ranges, p)
    wraps_d = _wrap_rows(tables_d, ranges, p)
    table = [0] * m
    table_p = [0] * p
    table_d = [0] * p
    c = [0] * count
    bad = 0
    first = -1
    for step in range(visits):
        brute = len(set(table)) == m
        crit = all(v != 0 for v in table_d) and len(set(table_p)) == p
        if brute != crit:
            bad += 1
            if first < 0:
                first = step
        if step + 1 == visits:
            break
        j = count - 1
        while True:
            c[j] += 1
            if c[j] < ranges[j]:
                for x in range(m):
                    table[x] = (table[x] + tables_m[j, x]) % m
                for x in range(p):
                    table_p[x] = (table_p[x] + tables_p[j, x]) % p
                    table_d[x] = (table_d[x] + tables_d[j, x]) % p
                break
            c[j] = 0
            for x in range(m):
                table[x] = (table[x] + wraps_m[j, x]) % m
            for x in range(p):
                table_p[x] = (table_p[x] + wraps_p[j, x]) % p
                table_d[x] = (table_d[x] + wraps_d[j, x]) % p
            j -= 1
    return bad, first


def _run_agreement(
    basis_polys: Sequence[IntPolynomial], ranges: Sequence[int], m: int, p: int, cap: int
) -> AgreementReport:
    """Sweep coefficient space over the given basis, comparing the
    prime-power derivative criterion against brute-force distinct counting.

    The constant basis element is assumed to sit at index 0 and is
    quotiented out: both verdicts are invariant under adding constants.
    """
    visits = math.prod(ranges[1:])
    if visits > cap:
        raise CapExceededError(f"{visits} table visits exceed the cap {cap}")
    polys = list(basis_polys)[1:]
    rng = np.array(ranges[1:], dtype=np.int64)
    order = np.argsort(rng, kind="stable")
    rng = rng[order]
    polys = [polys[int(k)] for k in order]
    tables_m = np.array(
        [[eval_mod(f, x, m) for x in range(m)] for f in polys], dtype=np.int64
    )
    tables_p = np.array(
        [[eval_mod(f, x, p) for x in range(p)] for f in polys], dtype=np.int64
    )
    tables_d = np.array(
        [[eval_mod(derivative(f), x, p) for x in range(p)] for f in polys],
        dtype=np.int64,
    )
    if _HAVE_NUMBA and m <= _MASK_LIMIT and p <= _MASK_LIMIT:
        mism, firsts = _agreement_kernel(
            tables_m, tables_p, tables_d, rng, m, p, _nchunks(visits)
        )
        bad = int(mism.sum())
        first = min((int(f) for f in firsts if f >= 0), default=-1)
    else:
        bad, first = _agreement_python(tables_m, tables_p, tables_d, rng, m, p)
    return AgreementReport(visits, bad, None if first < 0 else first)


def criterion_agreement_canonical(
    p: int, *, cap: int = DEFAULT_FUNCTION_CAP
) -> AgreementReport:
    """Compare criterion and brute force over every polynomial function mod p**2.

    Functions are enumerated through the canonical falling-factorial basis
    (constants quotiented out); zero disagreements means the derivative
    criterion matched exhaustive enumeration on all of them.
    """
    m = p * p
    enum = canonical_enumeration(m)
    basis = [falling_factorial_poly(k) for k in range(len(enum.ranges))]
    return _run_agreement(basis, list(enum.ranges), m, p, cap)


def criterion_agreement_monomial(
    p: int, max_degree: int, coeff_bound: int, *, cap: int = DEFAULT_FUNCTION_CAP
) -> AgreementReport:
    """Compare criterion and brute force mod p**2 over monomial coefficients.

    Sweeps all polynomials sum c_k x**k with 0 <= c_k < coeff_bound and
    k <= max_degree (constants quotiented out).
    """
    m = p * p
    basis = [IntPolynomial((0,) * k + (1,)) for k in range(max_degree + 1)]
    return _run_agreement(basis, [coeff_bound] * (max_degree + 1), m, p, cap)
