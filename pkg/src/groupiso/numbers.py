"""Number theory for group orders.

Sieving and factorization, isolated and strongly isolated primes, membership
certificates for the dense order set Upsilon, a generated table of orders of
non-abelian simple groups, and batch density counts.

All logarithms are base 2.  Every comparison against ``log2 n`` or
``log2 log2 n`` is decided in exact integer arithmetic:

* ``p <= log2 log2 n``  iff  ``2**p <= floor(log2 n)``  (``p`` integral);
* ``p**e <= log2 n``    iff  ``p**e <= floor(log2 n)``;
* ``w <= 2 log2 log2 n`` is compared against a precomputed integer threshold
  (see :func:`omega_threshold`).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import Decimal, getcontext, localcontext
from functools import lru_cache
from math import gcd, isqrt

import numpy as np

from .errors import BoundTooLarge, NotADivisor, ResourceLimit

SEGMENT_THRESHOLD = 10**7
DENSITY_CAP = 10**9
SIMPLE_ORDER_CAP = 10**10


# ---------------------------------------------------------------------------
# sieving and factorization

def _simple_sieve(limit):
    """Boolean primality array for ``0..limit`` (inclusive)."""
    is_p = np.ones(limit + 1, dtype=bool)
    is_p[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if is_p[p]:
            is_p[p * p::p] = False
    return is_p


def smallest_prime_factors(N):
    """Smallest-prime-factor table ``spf[0..N]`` (``spf[0] = spf[1] = 0``)."""
    spf = np.zeros(N + 1, dtype=np.int32 if N < 2**31 else np.int64)
    for p in range(2, isqrt(N) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    rest = np.flatnonzero(spf == 0)
    rest = rest[rest >= 2]
    spf[rest] = rest
    return spf


def primes_in_range(lo, hi, base_primes=None):
    """Primes in ``[lo, hi)`` by a segmented sieve over ``base_primes``."""
    lo = max(lo, 2)
    if hi <= lo:
        return np.zeros(0, dtype=np.int64)
    if base_primes is None:
        base_primes = np.flatnonzero(_simple_sieve(isqrt(hi - 1) + 1))
    seg = np.ones(hi - lo, dtype=bool)
    for p in base_primes:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, -(-lo // p) * p)
        seg[start - lo::p] = False
    return np.flatnonzero(seg).astype(np.int64) + lo


def sieve(N, segment=2**22):
    """All primes ``<= N``.

    Plain Eratosthenes up to ``10**7``; beyond that the range is processed in
    independent segments against the base primes up to ``sqrt(N)``.
    """
    if N < 2:
        return np.zeros(0, dtype=np.int64)
    if N <= SEGMENT_THRESHOLD:
        return np.flatnonzero(_simple_sieve(N)).astype(np.int64)
    base = np.flatnonzero(_simple_sieve(isqrt(N) + 1))
    parts = [primes_in_range(lo, min(lo + segment, N + 1), base)
             for lo in range(2, N + 1, segment)]
    return np.concatenate(parts)


@dataclass(frozen=True)
class Factorization:
    n: int
    prime_powers: tuple  # ((p, e), ...) with p ascending

    def __post_init__(self):
        prod = 1
        for p, e in self.prime_powers:
            prod *= p**e
        if prod != self.n:
            raise ValueError(f'prime powers multiply to {prod}, not {self.n}')

    @property
    def primes(self):
        return tuple(p for p, _ in self.prime_powers)

    @property
    def omega(self):
        return len(self.prime_powers)

    @property
    def mu(self):
        """Largest exponent of a prime power dividing n."""
        return max((e for _, e in self.prime_powers), default=0)

    def exponent(self, p):
        for q, e in self.prime_powers:
            if q == p:
                return e
        return 0

    def divisors(self):
        divs = [1]
        for p, e in self.prime_powers:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)


def factorize(n):
    """Factor ``n >= 1`` by trial division on a 2,3-wheel."""
    if n < 1:
        raise ValueError('n must be positive')
    out = []
    m = n
    for p in (2, 3):
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            out.append((p, e))
    p = 5
    step = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((m, 1))
    return Factorization(n, tuple(out))


def _as_fact(fact):
    return fact if isinstance(fact, Factorization) else factorize(fact)


def is_prime(n):
    return n >= 2 and factorize(n).prime_powers == ((n, 1),)


# ---------------------------------------------------------------------------
# exact logarithm comparisons

def floor_log2(n):
    return n.bit_length() - 1


def loglog_at_least(n, p):
    """``log2 log2 n >= p`` for a non-negative integer ``p`` and ``n >= 2``."""
    return floor_log2(n) >= 2**p


@lru_cache(maxsize=None)
def omega_threshold(w):
    """Smallest ``n >= 2`` with ``w <= 2 log2 log2 n``.

    The condition is ``n >= 2**(2**(w/2))``.  For odd ``w`` the exponent is
    irrational and the bound is never an integer, so the ceiling is exact once
    computed with enough digits.
    """
    if w < 0:
        return 2
    if w % 2 == 0:
        return max(2, 2 ** (2 ** (w // 2)))
    with localcontext() as ctx:
        t = Decimal(2) ** (Decimal(w) / 2)
        ctx.prec = int(t * Decimal('0.30103')) + 40
        t = Decimal(2) ** (Decimal(w) / 2)
        value = (t * Decimal(2).ln()).exp()
        return int(value.to_integral_value(rounding='ROUND_CEILING'))


def omega_ok(w, n):
    """``w <= 2 log2 log2 n`` (n >= 2)."""
    return n >= omega_threshold(w)


# ---------------------------------------------------------------------------
# isolated primes

def is_isolated(p, fact):
    """True iff no prime power ``q**k`` dividing n has ``p | q**k - 1``."""
    fact = _as_fact(fact)
    if fact.exponent(p) == 0:
        raise NotADivisor(f'{p} does not divide {fact.n}')
    return _isolation_witness(p, fact) is None


def _isolation_witness(p, fact):
    for q, f in fact.prime_powers:
        if q == p:
            continue
        r = q % p
        cur = 1
        for k in range(1, f + 1):
            cur = cur * r % p
            if cur == 1:
                return (q, k)
    return None


# ---------------------------------------------------------------------------
# orders of non-abelian finite simple groups

SPORADIC_ORDERS = {
    'M11': 7920,
    'M12': 95040,
    'J1': 175560,
    'M22': 443520,
    'J2': 604800,
    'M23': 10200960,
    'HS': 44352000,
    'J3': 50232960,
    'M24': 244823040,
    'McL': 898128000,
    'He': 4030387200,
    'Ru': 145926144000,
    'Suz': 448345497600,
    "O'N": 460815505920,
    'Co3': 495766656000,
    'Co2': 42305421312000,
    'Fi22': 64561751654400,
    'HN': 273030912000000,
    'Ly': 51765179004000000,
    'Th': 90745943887872000,
    'Fi23': 4089470473293004800,
    'Co1': 4157776806543360000,
    'J4': 86775571046077562880,
    "Fi24'": 1255205709190661721292800,
    'B': 4154781481226426191177580544000000,
    'M': 808017424794512875886459904961710757005754368000000000,
}
TITS_ORDER = 17971200  # 2F4(2)'


def _prod(it):
    out = 1
    for x in it:
        out *= x
    return out


def _order_A(l, q):  # PSL(l+1, q)
    d = l + 1
    return q ** (d * (d - 1) // 2) * _prod(q**i - 1 for i in range(2, d + 1)) // gcd(d, q - 1)


def _order_2A(l, q):  # PSU(l+1, q)
    d = l + 1
    return (q ** (d * (d - 1) // 2)
            * _prod(q**i - (-1) ** i for i in range(2, d + 1)) // gcd(d, q + 1))


def _order_BC(l, q):  # PSp(2l, q), POmega(2l+1, q)
    return q ** (l * l) * _prod(q ** (2 * i) - 1 for i in range(1, l + 1)) // gcd(2, q - 1)


def _order_D(l, q):
    return (q ** (l * (l - 1)) * (q**l - 1)
            * _prod(q ** (2 * i) - 1 for i in range(1, l)) // gcd(4, q**l - 1))


def _order_2D(l, q):
    return (q ** (l * (l - 1)) * (q**l + 1)
            * _prod(q ** (2 * i) - 1 for i in range(1, l)) // gcd(4, q**l + 1))


def _order_3D4(q):
    return q**12 * (q**8 + q**4 + 1) * (q**6 - 1) * (q**2 - 1)


def _order_G2(q):
    return q**6 * (q**6 - 1) * (q**2 - 1)


def _order_F4(q):
    return q**24 * (q**12 - 1) * (q**8 - 1) * (q**6 - 1) * (q**2 - 1)


def _order_E6(q):
    return (q**36 * _prod(q**i - 1 for i in (2, 5, 6, 8, 9, 12)) // gcd(3, q - 1))


def _order_2E6(q):
    return (q**36 * (q**2 - 1) * (q**5 + 1) * (q**6 - 1) * (q**8 - 1) * (q**9 + 1)
            * (q**12 - 1) // gcd(3, q + 1))


def _order_E7(q):
    return (q**63 * _prod(q**i - 1 for i in (2, 6, 8, 10, 12, 14, 18)) // gcd(2, q - 1))


def _order_E8(q):
    return q**120 * _prod(q**i - 1 for i in (2, 8, 12, 14, 18, 20, 24, 30))


def _order_2B2(q):
    return q**2 * (q**2 + 1) * (q - 1)


def _order_2G2(q):
    return q**3 * (q**3 + 1) * (q - 1)


def _order_2F4(q):
    return q**12 * (q**6 + 1) * (q**4 - 1) * (q**3 + 1) * (q - 1)


def _prime_powers_upto(limit):
    """Sorted list of ``(q, p)`` with ``q = p**k <= limit``, ``k >= 1``."""
    out = []
    for p in sieve(limit).tolist():
        q = p
        while q <= limit:
            out.append((q, p))
            q *= p
    out.sort()
    return out


def _lie_type_orders(N):
    """Orders ``<= N`` of simple groups of Lie type (with their exclusions)."""
    qmax = int(round((2 * N) ** (1 / 3))) + 2
    pps = _prime_powers_upto(qmax)
    found = set()

    def sweep(order_fn, min_rank, skip=()):
        l = min_rank
        while True:
            any_small = False
            for q, _ in pps:
                if (l, q) in skip:
                    continue
                t = order_fn(l, q)
                if t > N:
                    break
                any_small = True
                found.add(t)
            # orders grow with q for fixed rank, and with rank for fixed q
            if not any_small and order_fn(l, 2) > N and order_fn(l, 3) > N:
                return
            l += 1

    sweep(_order_A, 1, skip={(1, 2), (1, 3)})
    sweep(_order_2A, 2, skip={(2, 2)})
    sweep(_order_BC, 2, skip={(2, 2)})
    sweep(_order_D, 4)
    sweep(_order_2D, 4)
    for fn, min_q in ((_order_3D4, 2), (_order_G2, 3), (_order_F4, 2),
                      (_order_E6, 2), (_order_2E6, 2), (_order_E7, 2), (_order_E8, 2)):
        for q, _ in pps:
            if q < min_q:
                continue
            t = fn(q)
            if t > N:
                break
            found.add(t)
    # twisted families over odd powers of 2 or 3, excluding the smallest
    for base, fn in ((2, _order_2B2), (3, _order_2G2), (2, _order_2F4)):
        m = 1
        while True:
            t = fn(base ** (2 * m + 1))
            if t > N:
                break
            found.add(t)
            m += 1
    if TITS_ORDER <= N:
        found.add(TITS_ORDER)
    return found


@dataclass(frozen=True)
class SimpleOrderTable:
    bound: int
    orders: tuple

    def dividing(self, n):
        return [t for t in self.orders if t <= n and n % t == 0]


@lru_cache(maxsize=32)
def simple_orders_upto(N, cap=SIMPLE_ORDER_CAP):
    """Ascending, deduplicated orders of non-abelian simple groups ``<= N``."""
    if N > cap:
        raise BoundTooLarge(f'simple order table bound {N} exceeds {cap}')
    orders = set()
    k = 5
    while math.factorial(k) // 2 <= N:
        orders.add(math.factorial(k) // 2)
        k += 1
    orders |= _lie_type_orders(N)
    orders |= {t for t in SPORADIC_ORDERS.values() if t <= N}
    return SimpleOrderTable(N, tuple(sorted(orders)))


def strongly_isolated(p, fact):
    fact = _as_fact(fact)
    if not is_isolated(p, fact):
        return False
    return all(t % p for t in simple_orders_upto(fact.n).dividing(fact.n))


def pi_si(fact):
    fact = _as_fact(fact)
    return frozenset(p for p in fact.primes if strongly_isolated(p, fact))


def pi_lsi(fact):
    """Strongly isolated primes of n with ``p > log2 log2 n``."""
    fact = _as_fact(fact)
    if fact.n < 2:
        return frozenset()
    return frozenset(p for p in pi_si(fact) if not loglog_at_least(fact.n, p))


def lsi_part(n):
    """Product of the primes in ``pi_lsi(n)``: the order of the cyclic normal Hall subgroup."""
    return _prod(sorted(pi_lsi(n)))


# ---------------------------------------------------------------------------
# Upsilon membership

@dataclass(frozen=True)
class UpsilonCertificate:
    n: int
    a: int
    b: int
    small_primes: tuple  # ((p, e), ...) making up a
    big_primes: tuple  # (p, ...) dividing b
    member: bool
    failing_condition: str | None = None  # 'a' | 'b' | 'c' | 'd'
    witness: object = None
    big_exponents: tuple = field(default=(), repr=False)

    def recheck(self):
        """Re-derive the verdict from the stored fields alone."""
        if self.a * self.b != self.n:
            return False
        if self.n == 1:
            return self.member
        n = self.n
        fl = floor_log2(n)
        fact = factorize(n)
        ok_a = all(2**p <= fl and p**e <= fl for p, e in self.small_primes)
        ok_b = all(2**p > fl and is_isolated(p, fact) for p in self.big_primes)
        ok_c = all(e == 1 for e in self.big_exponents)
        ok_d = omega_ok(len(self.big_primes), n) and n not in SMALL_NON_MEMBERS
        return (ok_a and ok_b and ok_c and ok_d) == self.member

    def summary(self):
        lines = [f'n={self.n}', f'member={str(self.member).lower()}',
                 f'a={self.a}', f'b={self.b}']
        if self.failing_condition:
            lines.append(f'failing={self.failing_condition}')
            lines.append(f'witness={self.witness}')
        return lines


# log2 log2 n is at most 0.67 here; by convention both orders are excluded
SMALL_NON_MEMBERS = (2, 3)


def upsilon_check(n):
    """Decide membership of ``n`` in Upsilon and return the evidence.

    ``a`` collects every prime power whose prime satisfies
    ``p <= log2 log2 n`` and ``b = n / a``.  Conditions are reported in the
    order a, b, c, d; the first failure is recorded.
    """
    if n < 1:
        raise ValueError('n must be positive')
    if n == 1:
        return UpsilonCertificate(1, 1, 1, (), (), True)
    fact = factorize(n)
    fl = floor_log2(n)
    small = tuple((p, e) for p, e in fact.prime_powers if 2**p <= fl)
    big = tuple((p, e) for p, e in fact.prime_powers if 2**p > fl)
    a = _prod(p**e for p, e in small)
    b = n // a
    failing, witness = None, None
    for p, e in small:
        if p**e > fl:
            failing, witness = 'a', (p, e)
            break
    if failing is None:
        for p, _ in big:
            w = _isolation_witness(p, fact)
            if w is not None:
                failing, witness = 'b', (p, w)
                break
    if failing is None:
        for p, e in big:
            if e > 1:
                failing, witness = 'c', (p, e)
                break
    if failing is None and not omega_ok(len(big), n):
        failing, witness = 'd', len(big)
    if failing is None and n in SMALL_NON_MEMBERS:
        failing, witness = 'd', len(big)
    return UpsilonCertificate(
        n, a, b, small, tuple(p for p, _ in big), failing is None,
        failing, witness, tuple(e for _, e in big))


def in_upsilon(n):
    return upsilon_check(n).member


# ---------------------------------------------------------------------------
# batch membership and density

def _max_distinct_primes(hi):
    k, prod = 0, 1
    for p in sieve(200).tolist():
        if prod * p > hi:
            return max(k, 1)
        prod *= p
        k += 1
    return k


def upsilon_mask(lo, hi, base_primes=None):
    """Boolean membership array for ``lo <= n < hi`` computed in bulk.

    Each number in the window is fully factored by a segmented sieve into a
    slot matrix of (prime, exponent) pairs; conditions a, c and d are then
    vectorized, and isolation is tested pairwise between slots only for the
    numbers that survive the cheaper conditions.
    """
    lo = max(lo, 1)
    m = hi - lo
    if m <= 0:
        return np.zeros(0, dtype=bool)
    top = hi - 1
    if base_primes is None:
        base_primes = sieve(isqrt(top) + 1)
    K = _max_distinct_primes(top)
    vals = np.arange(lo, hi, dtype=np.int64)
    rem = vals.copy()
    P = np.zeros((m, K), dtype=np.int64)
    E = np.zeros((m, K), dtype=np.int16)
    cnt = np.zeros(m, dtype=np.int16)
    for p in base_primes.tolist():
        if p * p > top:
            break
        first = -(-lo // p) * p
        if first > top:
            continue
        idx = np.arange(first - lo, m, p)
        slot = cnt[idx].astype(np.intp)
        P[idx, slot] = p
        cnt[idx] += 1
        pk = p
        while True:
            first = -(-lo // pk) * pk
            if first > top:
                break
            ik = np.arange(first - lo, m, pk)
            E[ik, cnt[ik].astype(np.intp) - 1] += 1
            rem[ik] //= p
            if pk > top // p:
                break
            pk *= p
    big_rem = np.flatnonzero(rem > 1)
    slot = cnt[big_rem].astype(np.intp)
    P[big_rem, slot] = rem[big_rem]
    E[big_rem, slot] = 1
    cnt[big_rem] += 1

    # floor(log2 n) exactly
    pow2 = np.array([1 << k for k in range(63)], dtype=np.int64)
    fl = np.searchsorted(pow2, vals, side='right') - 1
    valid = np.arange(K)[None, :] < cnt[:, None]
    two_p = np.left_shift(np.int64(1), np.minimum(P, 62))
    small = valid & (P <= 62) & (two_p <= fl[:, None])
    big = valid & ~small
    pe = np.where(small, np.power(P, E.astype(np.int64)), 0)
    ok = ~np.any(small & (pe > fl[:, None]), axis=1)
    ok &= ~np.any(big & (E > 1), axis=1)
    omega_b = big.sum(axis=1)
    thresholds = np.array([omega_threshold(w) for w in range(K + 2)], dtype=np.int64)
    w_max = np.searchsorted(thresholds, vals, side='right') - 1
    ok &= omega_b <= w_max

    rows = np.flatnonzero(ok)
    for i in range(K):
        for j in range(K):
            if i == j or rows.size == 0:
                continue
            sel = rows[big[rows, i] & valid[rows, j]]
            if sel.size == 0:
                continue
            p = P[sel, i]
            r = P[sel, j] % p
            f = E[sel, j]
            cur = r.copy()
            bad = cur == 1
            k = 1
            live = np.flatnonzero(~bad & (f > k))
            while live.size:
                k += 1
                cur[live] = cur[live] * r[live] % p[live]
                hit = cur[live] == 1
                bad[live[hit]] = True
                live = live[~hit]
                live = live[f[live] > k]
            if bad.any():
                ok[sel[bad]] = False
                rows = np.flatnonzero(ok)
    if lo == 1:
        ok[0] = True
    for n in SMALL_NON_MEMBERS:
        if lo <= n < hi:
            ok[n - lo] = False
    return ok


def density_checkpoints(N):
    pts = []
    m = 10**6
    while m <= N:
        pts.append(m)
        m *= 10
    if not pts or pts[-1] != N:
        pts.append(N)
    return pts


def density(N, checkpoints=None, segment=2**21, cap=DENSITY_CAP, allow_large=False,
            progress=None):
    """Exact counts ``|Upsilon ∩ [m]|`` at each checkpoint ``m <= N``.

    Returns rows ``(checkpoint, count, ratio)``.  ``progress``, when given, is
    called with the upper end of each finished segment.
    """
    if N < 1:
        raise ValueError('N must be positive')
    if N > cap and not allow_large:
        raise ResourceLimit(f'density bound {N} exceeds cap {cap}; pass allow_large')
    if checkpoints is None:
        checkpoints = density_checkpoints(N)
    checkpoints = sorted(c for c in checkpoints if c <= N)
    base = sieve(isqrt(N) + 1)
    rows = []
    total = 0
    ci = 0
    lo = 1
    while lo <= N and ci < len(checkpoints):
        hi = min(lo + segment, checkpoints[ci] + 1)
        total += int(np.count_nonzero(upsilon_mask(lo, hi, base)))
        lo = hi
        if lo == checkpoints[ci] + 1:
            c = checkpoints[ci]
            rows.append((c, total, total / c))
            ci += 1
        if progress is not None:
            progress(lo - 1)
    return rows


def density_csv(rows):
    out = ['checkpoint,count,ratio']
    out += [f'{c},{k},{r:.6f}' for c, k, r in rows]
    return '\n'.join(out) + '\n'
