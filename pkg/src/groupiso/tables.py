"""Multiplication tables: parsing, emitting, validation and synthetic families.

Every interface speaks 1-based labels, matching the table file format; the
array behind a :class:`GroupTable` is stored 0-based.

File format::

    # optional comment lines
    n
    row 1 (n integers)
    ...
    row n

Tokens after ``n`` are read in row-major order and may be split across lines
arbitrarily; the emitter writes one row per line.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (InvalidParams, InvalidPermutation, MalformedInput,
                     NotLatinColumn, NotLatinRow, NotReduced)


def label_dtype(n):
    # int16 keeps numpy's stable sort on the radix path
    return np.int16 if n < 2**15 else np.int32


@dataclass(frozen=True, eq=False)
class GroupTable:
    n: int
    data: np.ndarray  # 0-based; data[i, j] is the label of (i+1)*(j+1), minus one

    def __post_init__(self):
        if self.data.shape != (self.n, self.n):
            raise MalformedInput(f'expected a {self.n}x{self.n} array, got {self.data.shape}')
        self.data.setflags(write=False)

    @classmethod
    def from_rows(cls, rows, check_reduced=True):
        """Build from 1-based rows (nested sequences)."""
        arr = np.asarray(rows, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise MalformedInput('table must be square')
        n = arr.shape[0]
        if n == 0:
            raise MalformedInput('empty table')
        if arr.min() < 1 or arr.max() > n:
            raise MalformedInput(f'entries must lie in [1..{n}]')
        t = cls(n, (arr - 1).astype(label_dtype(n)))
        if check_reduced:
            check_reduced_form(t)
        return t

    def entry(self, i, j):
        """The product ``i * j`` of two 1-based labels."""
        return int(self.data[i - 1, j - 1]) + 1

    def rows(self):
        return (self.data.astype(np.int64) + 1).tolist()

    def __eq__(self, other):
        return (isinstance(other, GroupTable) and self.n == other.n
                and np.array_equal(self.data, other.data))

    def __hash__(self):
        return hash((self.n, self.data.tobytes()))

    def __repr__(self):
        return f'GroupTable(n={self.n})'


def check_reduced_form(t):
    ident = np.arange(t.n)
    if not np.array_equal(t.data[0], ident):
        raise NotReduced('first row is not 1..n', witness=('row', 1))
    if not np.array_equal(t.data[:, 0], ident):
        raise NotReduced('first column is not 1..n', witness=('column', 1))


def _tokens(text):
    if isinstance(text, (bytes, bytearray)):
        try:
            text = text.decode('ascii')
        except UnicodeDecodeError as exc:
            raise MalformedInput('table file must be ASCII') from exc
    out = []
    for line in text.splitlines():
        if line.lstrip().startswith('#'):
            continue
        out.extend(line.split())
    return out


def parse_table(text):
    """Parse a table file (``str`` or ``bytes``) into a reduced :class:`GroupTable`.

    The latin property is not checked here; see :func:`validate_latin`.
    """
    toks = _tokens(text)
    if not toks:
        raise MalformedInput('no table order found')
    try:
        vals = [int(tok) for tok in toks]
    except ValueError as exc:
        raise MalformedInput(f'bad integer token: {exc}') from exc
    n = vals[0]
    if n < 1:
        raise MalformedInput(f'table order must be positive, got {n}')
    body = vals[1:]
    if len(body) != n * n:
        raise MalformedInput(f'expected {n * n} entries for n={n}, found {len(body)}')
    arr = np.array(body, dtype=np.int64).reshape(n, n)
    bad = np.argwhere((arr < 1) | (arr > n))
    if bad.size:
        i, j = (int(x) + 1 for x in bad[0])
        raise MalformedInput(f'entry ({i},{j}) = {arr[i - 1, j - 1]} outside [1..{n}]')
    return GroupTable.from_rows(arr)


def read_table(path):
    with open(path, 'rb') as fh:
        return parse_table(fh.read())


def emit_table(t):
    lines = [str(t.n)]
    lines += [' '.join(map(str, row)) for row in t.rows()]
    return '\n'.join(lines) + '\n'


def write_table(t, path):
    with open(path, 'w', encoding='ascii') as fh:
        fh.write(emit_table(t))


def _first_bad_line(arr):
    """Index of the first row of ``arr`` that is not a permutation, and its repeated symbol."""
    srt = np.sort(arr, axis=1, kind='stable')
    bad = np.flatnonzero(np.any(srt != np.arange(arr.shape[1], dtype=srt.dtype), axis=1))
    if bad.size == 0:
        return None
    i = int(bad[0])
    line = srt[i]
    dup = np.flatnonzero(line[1:] == line[:-1])
    return i, int(line[dup[0]])


def validate_latin(t):
    """Raise unless every row and every column of ``t`` is a permutation of [1..n].

    Each line is sorted and compared against ``0..n-1``.
    """
    hit = _first_bad_line(t.data)
    if hit is not None:
        raise NotLatinRow(hit[0] + 1, hit[1] + 1)
    hit = _first_bad_line(np.ascontiguousarray(t.data.T))
    if hit is not None:
        raise NotLatinColumn(hit[0] + 1, hit[1] + 1)


# ---------------------------------------------------------------------------
# synthetic families

FAMILY_KINDS = ('cyclic', 'dihedral', 'direct_product', 'semidirect_cyclic')


@dataclass(frozen=True)
class FamilySpec:
    """A group to synthesize.

    ``cyclic (n,)``; ``dihedral (m,)`` of order ``2m``; ``direct_product``
    with factors given as ``FamilySpec`` or ints (cyclic orders);
    ``semidirect_cyclic (q, r, k)`` is ``C_r`` acting on ``C_q`` by
    ``b -> b * k**h`` with ``q`` prime and ``k**r = 1 (mod q)``.
    """

    kind: str
    params: tuple

    def __post_init__(self):
        if self.kind not in FAMILY_KINDS:
            raise InvalidParams(f'unknown family {self.kind!r}')
        object.__setattr__(self, 'params', tuple(self.params))

    @property
    def order(self):
        if self.kind == 'cyclic':
            return self.params[0]
        if self.kind == 'dihedral':
            return 2 * self.params[0]
        if self.kind == 'semidirect_cyclic':
            return self.params[0] * self.params[1]
        out = 1
        for f in self.params:
            out *= f.order if isinstance(f, FamilySpec) else f
        return out

    def __str__(self):
        if self.kind == 'direct_product':
            return ' x '.join(str(f) if isinstance(f, FamilySpec) else f'C{f}'
                              for f in self.params)
        short = {'cyclic': 'C', 'dihedral': 'D'}
        if self.kind in short:
            return f'{short[self.kind]}{self.params[0]}'
        q, r, k = self.params
        return f'C{q}:C{r}[{k}]'


def cyclic(n):
    return FamilySpec('cyclic', (n,))


def dihedral(m):
    return FamilySpec('dihedral', (m,))


def direct_product(*factors):
    return FamilySpec('direct_product', factors)


def semidirect_cyclic(q, r, k):
    return FamilySpec('semidirect_cyclic', (q, r, k))


def _cyclic_data(n):
    i = np.arange(n)
    return (i[:, None] + i[None, :]) % n


def _twisted_data(r, q, k):
    """Pairs (h, b), index h*q + b, with (h1,b1)(h2,b2) = (h1+h2, b1*k**h2 + b2)."""
    h = np.repeat(np.arange(r), q)
    b = np.tile(np.arange(q), r)
    kp = np.array([pow(k, e, q) for e in range(r)], dtype=np.int64)
    hh = (h[:, None] + h[None, :]) % r
    bb = (b[:, None] * kp[h][None, :] + b[None, :]) % q
    return hh * q + bb


def _product_data(d1, d2):
    n1, n2 = d1.shape[0], d2.shape[0]
    return (d1[:, None, :, None] * n2 + d2[None, :, None, :]).reshape(n1 * n2, n1 * n2)


def _is_prime(q):
    return q >= 2 and all(q % d for d in range(2, int(q**0.5) + 1))


def _family_data(spec):
    p = spec.params
    if spec.kind == 'cyclic':
        if len(p) != 1 or p[0] < 1:
            raise InvalidParams('cyclic needs one positive order')
        return _cyclic_data(p[0])
    if spec.kind == 'dihedral':
        if len(p) != 1 or p[0] < 1:
            raise InvalidParams('dihedral needs one positive m')
        return _twisted_data(2, p[0], -1 % p[0] if p[0] > 1 else 0)
    if spec.kind == 'semidirect_cyclic':
        if len(p) != 3:
            raise InvalidParams('semidirect_cyclic needs (q, r, k)')
        q, r, k = p
        if not _is_prime(q) or r < 1:
            raise InvalidParams(f'semidirect_cyclic needs prime q and r >= 1, got {p}')
        if pow(k, r, q) != 1:
            raise InvalidParams(f'{k}^{r} is not 1 mod {q}')
        return _twisted_data(r, q, k % q)
    if not p:
        raise InvalidParams('direct_product needs at least one factor')
    data = np.zeros((1, 1), dtype=np.int64)
    for f in p:
        sub = _family_data(f if isinstance(f, FamilySpec) else cyclic(int(f)))
        data = _product_data(data, sub)
    return data


def make_family(spec):
    """Reduced multiplication table of the group described by ``spec``.

    Products enumerate pairs in row-major order (first factor slowest) with
    the identity first; twisted groups enumerate ``(h, b)`` as ``h*q + b``.
    """
    data = _family_data(spec)
    n = data.shape[0]
    return GroupTable(n, data.astype(label_dtype(n)))


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def families_of_order(n):
    """Deterministic list of family specs of order ``n`` (isomorphic repeats allowed).

    Cyclic, dihedral, ``C_d x C_(n/d)`` with non-coprime factors,
    ``D_m x C_c``, and ``C_q : C_r`` for each prime ``q`` and each action
    order, using the smallest ``k`` of that multiplicative order.
    """
    out = [cyclic(n)]
    if n % 2 == 0 and n >= 6:
        out.append(dihedral(n // 2))
    for d in _divisors(n):
        if 2 <= d <= n // d and math.gcd(d, n // d) > 1:
            out.append(direct_product(d, n // d))
    for m in range(3, n // 4 + 1):
        if n % (2 * m) == 0:
            out.append(direct_product(dihedral(m), n // (2 * m)))
    for q in _divisors(n):
        if not _is_prime(q) or q < 3:
            continue
        r = n // q
        for o in _divisors(r):
            if o == 1 or (q - 1) % o:
                continue
            k = next(k for k in range(2, q) if _mult_order(k, q) == o)
            out.append(semidirect_cyclic(q, r, k))
    return out


def _mult_order(k, q):
    e, x = 1, k % q
    while x != 1:
        x = (x * k) % q
        e += 1
    return e


def cayley_table(elements, op):
    """Table of a finite group given its elements (identity first) and product."""
    index = {e: i for i, e in enumerate(elements)}
    n = len(elements)
    data = np.empty((n, n), dtype=np.int64)
    for i, x in enumerate(elements):
        for j, y in enumerate(elements):
            data[i, j] = index[op(x, y)]
    t = GroupTable(n, data.astype(label_dtype(n)))
    check_reduced_form(t)
    return t


def permutation_group_table(generators):
    """Table of the group generated by permutations (tuples on 0..m-1)."""
    gens = [tuple(g) for g in generators]
    m = len(gens[0]) if gens else 1
    ident = tuple(range(m))
    elements = [ident]
    seen = {ident}
    for x in elements:
        for g in gens:
            y = tuple(g[i] for i in x)
            if y not in seen:
                seen.add(y)
                elements.append(y)
    return cayley_table(elements, lambda x, y: tuple(x[i] for i in y))


def check_permutation(sigma, n):
    """Validate a 1-based permutation fixing 1 and return it 0-based."""
    s = np.asarray(sigma, dtype=np.int64)
    if s.shape != (n,) or not np.array_equal(np.sort(s), np.arange(1, n + 1)):
        raise InvalidPermutation(f'not a permutation of [1..{n}]')
    if s[0] != 1:
        raise InvalidPermutation('sigma must fix 1')
    return s - 1


def relabel(t, sigma):
    """Table ``T'`` with ``T'[sigma(i), sigma(j)] = sigma(T[i, j])``."""
    s = check_permutation(sigma, t.n)
    out = np.empty_like(t.data)
    out[s[:, None], s[None, :]] = s[t.data]
    return GroupTable(t.n, out)


def invert_permutation(sigma):
    s = np.asarray(sigma, dtype=np.int64) - 1
    inv = np.empty_like(s)
    inv[s] = np.arange(s.size)
    return (inv + 1).tolist()


def random_relabeling(n, rng):
    """Uniformly random 1-based permutation of [1..n] fixing 1."""
    rest = rng.permutation(np.arange(2, n + 1)) if n > 1 else np.zeros(0, dtype=np.int64)
    return [1] + [int(x) for x in rest]


# ---------------------------------------------------------------------------
# random latin squares

def _jacobson_matthews(n, rng, steps):
    """Latin square from the Jacobson–Matthews chain started at the cyclic square."""
    M = np.zeros((n, n, n), dtype=np.int8)
    i = np.arange(n)
    M[i[:, None], i[None, :], (i[:, None] + i[None, :]) % n] = 1
    improper = None
    done = 0
    while done < steps or improper is not None:
        if improper is None:
            while True:
                r, c, s = (int(x) for x in rng.integers(0, n, size=3))
                if M[r, c, s] == 0:
                    break
            r2 = int(np.flatnonzero(M[:, c, s] == 1)[0])
            c2 = int(np.flatnonzero(M[r, :, s] == 1)[0])
            s2 = int(np.flatnonzero(M[r, c, :] == 1)[0])
        else:
            r, c, s = improper
            r2 = int(rng.choice(np.flatnonzero(M[:, c, s] == 1)))
            c2 = int(rng.choice(np.flatnonzero(M[r, :, s] == 1)))
            s2 = int(rng.choice(np.flatnonzero(M[r, c, :] == 1)))
        M[r, c, s] += 1
        M[r, c2, s2] += 1
        M[r2, c, s2] += 1
        M[r2, c2, s] += 1
        M[r, c, s2] -= 1
        M[r, c2, s] -= 1
        M[r2, c, s] -= 1
        M[r2, c2, s2] -= 1
        improper = (r2, c2, s2) if M[r2, c2, s2] < 0 else None
        done += 1
    return np.argmax(M, axis=2)


def reduce_latin(square):
    """Permute columns then rows of a latin square so row and column 0 read 0..n-1."""
    sq = np.asarray(square)
    sq = sq[:, np.argsort(sq[0])]
    sq = sq[np.argsort(sq[:, 0])]
    return sq


def random_loop(n, rng, steps=None):
    """A random reduced latin square of order ``n`` (the table of a loop).

    Usually not associative for ``n >= 5``; callers decide group-ness.
    """
    if n < 1:
        raise InvalidParams('n must be positive')
    if steps is None:
        steps = max(n**3, 64)
    sq = reduce_latin(_jacobson_matthews(n, rng, steps)) if n > 1 else np.zeros((1, 1))
    return GroupTable(n, sq.astype(label_dtype(n)))
