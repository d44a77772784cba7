import math
from decimal import Decimal, getcontext

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from groupiso.errors import NotADivisor, ResourceLimit
from groupiso.numbers import (SPORADIC_ORDERS, density, density_csv, factorize, floor_log2,
                              in_upsilon, is_isolated, is_prime, loglog_at_least, lsi_part,
                              omega_ok, omega_threshold, pi_lsi, pi_si, primes_in_range, sieve,
                              simple_orders_upto, smallest_prime_factors, strongly_isolated,
                              upsilon_check, upsilon_mask)

from oracles import is_isolated_naive


def naive_is_prime(n):
    return n >= 2 and all(n % d for d in range(2, math.isqrt(n) + 1))


def test_sieve_matches_trial_division():
    primes = sieve(5000).tolist()
    assert primes == [n for n in range(5001) if naive_is_prime(n)]


def test_segmented_primes_match_plain_sieve():
    lo, hi = 10**7 - 5000, 10**7 + 5000
    seg = primes_in_range(lo, hi).tolist()
    assert seg == [n for n in range(lo, hi) if naive_is_prime(n)]


def test_smallest_prime_factors():
    spf = smallest_prime_factors(3000)
    for n in range(2, 3001):
        assert spf[n] == next(d for d in range(2, n + 1) if n % d == 0)


@given(st.integers(1, 10**12))
@settings(max_examples=200, deadline=None)
def test_factorize_reconstructs(n):
    f = factorize(n)
    assert math.prod(p**e for p, e in f.prime_powers) == n
    assert all(naive_is_prime(p) for p in f.primes) if n < 10**9 else True
    assert list(f.primes) == sorted(set(f.primes))


def test_factorization_fields():
    f = factorize(2**4 * 5**2 * 31)
    assert f.prime_powers == ((2, 4), (5, 2), (31, 1))
    assert f.omega == 3
    assert f.mu == 4
    assert f.divisors()[:6] == [1, 2, 4, 5, 8, 10]
    assert len(f.divisors()) == 5 * 3 * 2
    assert is_prime(31) and not is_prime(1) and not is_prime(91)


def test_isolated_fixtures_from_the_definition():
    # 31 is isolated in 2^4 5^2 31 but not in 2^5 5^2 31 or 2^4 5^3 31
    got = tuple(is_isolated(31, n) for n in (2**4 * 5**2 * 31, 2**5 * 5**2 * 31, 2**4 * 5**3 * 31))
    assert got == (True, False, False)


@given(st.integers(2, 20000))
@settings(max_examples=300, deadline=None)
def test_is_isolated_matches_naive(n):
    for p in factorize(n).primes:
        assert is_isolated(p, n) == is_isolated_naive(p, n)


def test_is_isolated_requires_divisor():
    with pytest.raises(NotADivisor):
        is_isolated(7, 30)


@given(st.integers(2, 10**6), st.integers(0, 5))
def test_loglog_comparison_is_exact(n, p):
    # p <= log2 log2 n  iff  2**(2**p) <= n
    assert loglog_at_least(n, p) == (2 ** (2**p) <= n)
    assert floor_log2(n) == n.bit_length() - 1


def _two_loglog(n):
    getcontext().prec = 60
    return 2 * (Decimal(n).ln() / Decimal(2).ln()).ln() / Decimal(2).ln()


@pytest.mark.parametrize('w', range(1, 10))
def test_omega_threshold_is_least_solution(w):
    m = omega_threshold(w)
    assert _two_loglog(m) >= w
    assert _two_loglog(m - 1) < w
    assert omega_ok(w, m) and not omega_ok(w, m - 1)


def test_omega_threshold_values():
    # [DERIVED] ceil(2**(2**(w/2)))
    assert [omega_threshold(w) for w in range(1, 9)] == [3, 4, 8, 16, 51, 256, 2546, 65536]


def test_simple_order_table_starts_correctly():
    # smallest orders of non-abelian simple groups: A5, PSL(2,7), A6, PSL(2,8), ...
    orders = simple_orders_upto(10**4).orders
    assert list(orders[:12]) == [60, 168, 360, 504, 660, 1092, 2448, 2520, 3420, 4080, 5616, 6048]


def test_simple_orders_include_sporadics_and_large_families():
    assert len(SPORADIC_ORDERS) == 26
    table = simple_orders_upto(10**10)
    for order in (7920, 95040, 175560, 443520, 10200960, 20160, 25920, 1451520):
        assert order in table.orders
    assert 20160 in table.dividing(40320)  # A8 and PSL(3,4) share this order


def test_strongly_isolated_excludes_primes_dividing_simple_orders():
    # 420 = 2^2 3 5 7: A5 has order 60 | 420, so 3 and 5 are not strongly isolated
    assert is_isolated(5, 420) and not strongly_isolated(5, 420)
    assert pi_si(420) == {7}
    assert pi_lsi(420) == {7}
    assert lsi_part(420) == 7


def test_lsi_part_small_orders():
    assert lsi_part(15) == 15
    assert lsi_part(22) == 11
    assert lsi_part(46) == 23
    assert lsi_part(1) == 1


def test_upsilon_certificates():
    c = upsilon_check(22)
    assert (c.member, c.a, c.b) == (True, 2, 11)
    assert c.summary() == ['n=22', 'member=true', 'a=2', 'b=11']
    assert upsilon_check(15).member and upsilon_check(33).member
    c = upsilon_check(21)  # 3 | 7 - 1
    assert not c.member and c.failing_condition == 'b'
    c = upsilon_check(1000)
    assert not c.member and c.failing_condition == 'c'


def test_small_order_conventions():
    assert in_upsilon(1)
    c = upsilon_check(2)
    assert not c.member and c.failing_condition == 'd'
    # excluded by convention even though 2 log2 log2 3 = 1.33 >= omega(3)
    c = upsilon_check(3)
    assert not c.member and c.failing_condition == 'd'
    assert upsilon_mask(1, 5).tolist() == [True, False, False, False]


@given(st.integers(1, 10**7))
@settings(max_examples=200, deadline=None)
def test_certificate_recheck(n):
    c = upsilon_check(n)
    assert c.a * c.b == n
    assert c.recheck()


def test_batch_mask_matches_pointwise():
    lo, hi = 1, 30001
    mask = upsilon_mask(lo, hi)
    assert [int(x) + lo for x in np.flatnonzero(mask)] == [n for n in range(lo, hi) if in_upsilon(n)]
    lo, hi = 10**6, 10**6 + 20000
    mask = upsilon_mask(lo, hi)
    assert [int(x) + lo for x in np.flatnonzero(mask)] == [n for n in range(lo, hi) if in_upsilon(n)]


def test_density_small_bound_and_csv():
    rows = density(10**4, checkpoints=[1000, 10**4], segment=777)
    assert rows[0][1] == sum(in_upsilon(n) for n in range(1, 1001))
    assert rows[1][1] == sum(in_upsilon(n) for n in range(1, 10**4 + 1))
    csv = density_csv(rows).splitlines()
    assert csv[0] == 'checkpoint,count,ratio'
    assert csv[1].startswith('1000,')


def test_density_cap():
    with pytest.raises(ResourceLimit):
        density(10**10)
