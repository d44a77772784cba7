"""Split a group of order ``n`` as ``H ⋉ B`` with ``B`` cyclic normal Hall.

``B`` has order ``b``, the product of the strongly isolated primes of ``n``
exceeding ``log2 log2 n``.  Its elements are exactly those with ``x**b = 1``,
which gives a cheap membership test.  The steps are:

* coset graph of ``B`` and Schreier generators of ``B``;
* a generator ``gB`` of ``B`` assembled prime by prime, with discrete logs;
* a presentation of ``G/B`` on the generators of the permutation rep;
* a complement, found by solving for ``m_i in B`` such that every relator
  vanishes at ``s_i m_i`` (linear congruences mod ``b``);
* the action exponents ``theta(h) = dlog(h^-1 gB h)``.

All conventions use words of a :class:`~groupiso.permrep.PermRep`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (InternalInconsistency, NoComplement, NotAUnit, NotCyclic,
                     NotInUpsilon, NotNormalHall, RelatorOutsideB, ResourceLimit)
from .numbers import factorize, lsi_part, upsilon_check
from .permrep import (hall_membership, inverse_word, schreier_generators,
                      schreier_graph)
from .tables import GroupTable, label_dtype

H_TABLE_LIMIT = 2**16


def _crt(residues):
    """Combine ``[(r, p), ...]`` with pairwise coprime moduli."""
    x, m = 0, 1
    for r, p in residues:
        t = ((r - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x % m if m > 1 else 0


def hall_generators(rep, b):
    """Schreier generators of the normal Hall subgroup of order ``b``.

    Returns ``(words, coset_graph)``.  The closure of the words is enumerated
    and must have exactly ``b`` elements.
    """
    member = hall_membership(rep, b)
    cg = schreier_graph(rep, member, index_bound=rep.n // b)
    if cg.index * b != rep.n:
        raise NotNormalHall(f'{cg.index} cosets for a subgroup of order {b} in order {rep.n}')
    if b == 1:
        return [], cg
    gens = schreier_generators(cg)
    for w in gens:
        if not member(w):
            raise NotNormalHall('a Schreier generator fails the membership test')
    size = len(rep.closure(gens))
    if size != b:
        raise NotNormalHall(f'generated subgroup has order {size}, expected {b}')
    return gens, cg


@dataclass
class CyclicPart:
    """Generator ``gB`` of the cyclic group ``B`` plus discrete logarithms.

    For each prime ``p | b`` the powers of ``gB**(b/p)`` are tabulated once, so
    ``dlog`` costs one exponentiation per prime and then a CRT.
    """

    rep: object
    b: int
    gB: tuple
    primes: tuple
    _tables: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        rep = self.rep
        for p in self.primes:
            base = rep.pow(self.gB, self.b // p)
            table = {}
            cur = ()
            for j in range(p):
                table[rep.label(cur)] = j
                cur = rep.mul(cur, base)
            if len(table) != p:
                raise NotCyclic(f'gB^(b/{p}) does not have order {p}')
            self._tables[p] = table

    def dlog(self, w):
        """``k`` in ``[0, b)`` with ``gB**k = w``; ``w`` must lie in ``B``."""
        rep = self.rep
        residues = []
        for p in self.primes:
            y = rep.label(rep.pow(w, self.b // p))
            j = self._tables[p].get(y)
            if j is None:
                raise InternalInconsistency('element is not in B')
            residues.append((j, p))
        k = _crt(residues)
        if not rep.eq(rep.pow(self.gB, k), w):
            raise InternalInconsistency('element is not in B')
        return k

    def power(self, k):
        return self.rep.pow(self.gB, k % self.b) if self.b > 1 else ()


def cyclic_generator(rep, b, gens):
    """Generator of ``B = <gens>`` built from one element of order ``p`` per prime."""
    primes = factorize(b).primes if b > 1 else ()
    gB = ()
    for p in primes:
        piece = None
        for w in gens:
            x = rep.pow(w, b // p)
            if not rep.is_identity(x):
                piece = x
                break
        if piece is None:
            raise NotCyclic(f'no generator has a nontrivial {p}-part')
        gB = rep.mul(gB, piece)
    if b > 1 and rep.order_of(gB) != b:
        raise NotCyclic(f'assembled generator has order {rep.order_of(gB)}, expected {b}')
    return CyclicPart(rep, b, gB, tuple(primes))


@dataclass
class Presentation:
    """Presentation of ``G/B`` on symbols ``1..d`` (the rep's generators).

    Relators are words over signed symbols; the defining property is that
    each evaluates into ``B`` at the actual generators.
    """

    d: int
    relators: list

    def __len__(self):
        return len(self.relators)


def quotient_presentation(rep, cg):
    """Relators ``w_ts^-1 s w_t`` over every coset ``t`` and generator ``s``.

    The transversal words are tree words of the rep, so each relator has
    length at most ``2 * depth + 1``.
    """
    relators = []
    seen = set()
    for u, v, s in cg.edges:
        w = inverse_word(cg.reps[v]) + (s,) + cg.reps[u]
        rep.check(w)
        if not cg.member(w):
            raise RelatorOutsideB(f'relator {w} does not evaluate into B')
        if w not in seen:
            seen.add(w)
            relators.append(w)
    return Presentation(rep.k, relators)


def evaluate(rep, w, images):
    """Value of the symbolic word ``w`` with symbol ``i`` sent to ``images[i-1]``."""
    inv = {}
    out = ()
    for l in w:
        if l > 0:
            x = images[l - 1]
        else:
            x = inv.get(l)
            if x is None:
                x = inv[l] = rep.inv(images[-l - 1])
        out = rep.mul(out, x)
    return out


def conjugation_exponent(rep, cyc, h):
    """``e`` with ``h^-1 gB h = gB**e``."""
    return cyc.dlog(rep.conj(cyc.gB, h))


def _solve_mod_p(rows, rhs, p):
    """Some solution of ``rows . mu = rhs`` over GF(p), free variables zero; ``None`` if inconsistent."""
    A = [list(r) + [c] for r, c in zip(rows, rhs)]
    d = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(d):
        piv = next((i for i in range(r, len(A)) if A[i][col] % p), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][col], -1, p)
        A[r] = [(x * inv) % p for x in A[r]]
        for i in range(len(A)):
            if i != r and A[i][col] % p:
                f = A[i][col]
                A[i] = [(x - f * y) % p for x, y in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
    if any(row[d] % p for row in A[r:]):
        return None
    mu = [0] * d
    for i, col in enumerate(pivots):
        mu[col] = A[i][d] % p
    return mu


def complement_system(rep, pres, cyc, gens_exp):
    """Linear congruences ``r_w + sum_i C[w, i] mu_i = 0 (mod b)``, one per relator.

    Writing each letter as ``s_i m_i`` (or ``(s_i m_i)^-1 = s_i^-1 * gB^(-mu_i / e_i)``)
    and pushing the ``B`` parts to the right, a part standing before letters
    ``sigma_{j+1} .. sigma_m`` picks up the product of their exponents.
    """
    b = cyc.b
    d = pres.d
    unit_inv = [pow(e, -1, b) for e in gens_exp]
    C, r = [], []
    gens = [(i,) for i in range(1, d + 1)]
    for w in pres.relators:
        row = [0] * d
        E = 1  # product of exponents of the letters to the right
        for l in reversed(w):
            i = abs(l) - 1
            if l > 0:
                row[i] = (row[i] + E) % b
                E = (E * gens_exp[i]) % b
            else:
                row[i] = (row[i] - unit_inv[i] * E) % b
                E = (E * unit_inv[i]) % b
        C.append(row)
        r.append(cyc.dlog(evaluate(rep, w, gens)))
    return C, r


def bigsplit(rep, pres, cyc):
    """Complement generators ``s_i gB**mu_i`` solving the relator congruences.

    Returns ``(H_gens, mu)`` before any deduplication.  Raises
    :class:`NoComplement` when the system is inconsistent at some prime.
    """
    b = cyc.b
    d = pres.d
    gens = [(i,) for i in range(1, d + 1)]
    if b == 1:
        return gens, [0] * d
    e = [conjugation_exponent(rep, cyc, g) for g in gens]
    C, r = complement_system(rep, pres, cyc, e)
    residues = [[] for _ in range(d)]
    for p in cyc.primes:
        rows = [[c % p for c in row] for row in C]
        rhs = [(-x) % p for x in r]
        mu_p = _solve_mod_p(rows, rhs, p)
        if mu_p is None:
            raise NoComplement(f'relator congruences are inconsistent mod {p}')
        for i in range(d):
            residues[i].append((mu_p[i], p))
    mu = [_crt(res) for res in residues]
    H = [rep.mul(g, cyc.power(m)) for g, m in zip(gens, mu)]
    return H, mu


def theta_map(rep, cyc, H_gens):
    """Exponents ``e_i`` with ``h_i^-1 gB h_i = gB**e_i``, checked to be units and multiplicative."""
    b = cyc.b
    if b == 1:
        return [1] * len(H_gens)
    thetas = []
    for h in H_gens:
        e = conjugation_exponent(rep, cyc, h)
        if math.gcd(e, b) != 1:
            raise NotAUnit(f'conjugation exponent {e} is not a unit mod {b}')
        thetas.append(e)
    for i, hi in enumerate(H_gens):
        for j, hj in enumerate(H_gens):
            e = conjugation_exponent(rep, cyc, rep.mul(hi, hj))
            if e != (thetas[i] * thetas[j]) % b:
                raise InternalInconsistency('theta is not multiplicative')
    return thetas


@dataclass
class Decomposition:
    """``G = H ⋉ B`` for a fixed permutation rep.

    ``H_labels[i]`` is the 1-based label in ``G`` of the element with 0-based
    index ``i`` in ``H_table``; index 0 is the identity.  ``theta[i]`` is the
    conjugation exponent of ``H_gens[i]`` on ``gB``.
    """

    rep: object
    b: int
    gB: tuple
    H_gens: list
    theta: list
    H_table: GroupTable
    H_labels: list
    cyclic: CyclicPart
    presentation: Presentation
    B_gens: list = field(default_factory=list)
    mu: list = field(default_factory=list)  # lifts s_i gB**mu_i before deduplication
    forced: bool = False

    @property
    def n(self):
        return self.rep.n

    @property
    def H_order(self):
        return len(self.H_labels)

    @property
    def H_gen_indices(self):
        """0-based ``H_table`` indices of the ``H_gens``."""
        pos = {x: i for i, x in enumerate(self.H_labels)}
        return [pos[self.rep.label(h)] for h in self.H_gens]

    def theta_of(self, hidx):
        """Conjugation exponent of the ``H`` element with table index ``hidx``."""
        if self.b == 1:
            return 1
        h = self.rep.element_of(self.H_labels[hidx])
        return conjugation_exponent(self.rep, self.cyclic, h)

    def factor_map(self):
        """Arrays ``(hidx, k)`` over 0-based labels: element ``x`` equals ``H[hidx] * gB**k``.

        Built by walking every coset ``hB`` along powers of ``gB``; each label
        must be reached exactly once.
        """
        n = self.n
        rep = self.rep
        hidx = np.full(n, -1, dtype=np.int64)
        kexp = np.full(n, -1, dtype=np.int64)
        gB = self.gB
        for a, lab in enumerate(self.H_labels):
            cur = rep.element_of(lab)
            for k in range(self.b):
                x = rep.label(cur) - 1
                if hidx[x] >= 0:
                    raise InternalInconsistency(f'label {x + 1} factors twice')
                hidx[x] = a
                kexp[x] = k
                cur = rep.mul(cur, gB)
        if (hidx < 0).any():
            raise InternalInconsistency('factorization misses labels')
        return hidx, kexp

    def summary(self):
        lines = [f'n={self.n}', f'b={self.b}', f'H={self.H_order}',
                 f'gens={len(self.H_gens)}',
                 'theta=' + ','.join(str(e) for e in self.theta)]
        if self.forced:
            lines.append('forced=true')
        return lines


def subgroup_table(rep, labels):
    """Multiplication table of the subgroup on ``labels`` (identity first) and its label map."""
    m = len(labels)
    if m > H_TABLE_LIMIT:
        raise ResourceLimit(f'subgroup of order {m} exceeds the table limit {H_TABLE_LIMIT}')
    pos = {x: i for i, x in enumerate(labels)}
    words = [rep.element_of(x) for x in labels]
    data = np.empty((m, m), dtype=label_dtype(m))
    for i, u in enumerate(words):
        for j, v in enumerate(words):
            data[i, j] = pos[rep.label(u + v)]
    return GroupTable(m, data)


def check_decomposition(dec):
    """Re-verify every structural invariant; raise on the first failure."""
    rep = dec.rep
    b = dec.b
    member = hall_membership(rep, b)
    if b > 1 and rep.order_of(dec.gB) != b:
        raise InternalInconsistency('gB has the wrong order')
    if dec.H_order * b != rep.n:
        raise InternalInconsistency(f'|H| * b = {dec.H_order * b} differs from n = {rep.n}')
    for x in dec.H_labels[1:]:
        if member(rep.element_of(x)):
            raise InternalInconsistency(f'H meets B in label {x}')
    for h in dec.H_gens:
        if (rep.n // b) % rep.order_of(h):
            raise InternalInconsistency('an H generator has order not dividing n/b')
    for h, e in zip(dec.H_gens, dec.theta):
        g = rep.conj(dec.gB, h)
        if not rep.eq(g, rep.pow(dec.gB, e)):
            raise InternalInconsistency('theta exponent does not match conjugation')
    # H_gens were deduplicated; the relator sweep uses the full list of lifts
    lifts = [rep.mul((i,), dec.cyclic.power(m)) for i, m in enumerate(dec.mu, start=1)]
    for w in dec.presentation.relators:
        if not rep.is_identity(evaluate(rep, w, lifts)):
            raise InternalInconsistency(f'relator {w} does not vanish on the complement')
    return True


def decompose(rep, cert=None, force=False):
    """Compute and verify ``G = H ⋉ B``.

    Requires ``n`` in Upsilon unless ``force`` is set; a forced run may raise
    :class:`NoComplement`, :class:`NotNormalHall` or :class:`NotCyclic`
    legitimately.
    """
    n = rep.n
    if cert is None:
        cert = upsilon_check(n)
    if not cert.member and not force:
        raise NotInUpsilon(f'{n} is not in Upsilon (condition {cert.failing_condition})')
    b = lsi_part(n)
    B_gens, cg = hall_generators(rep, b)
    cyc = cyclic_generator(rep, b, B_gens)
    pres = quotient_presentation(rep, cg)
    try:
        lifts, mu = bigsplit(rep, pres, cyc)
    except NoComplement as exc:
        if cert.member:
            raise InternalInconsistency(f'no complement for n = {n} in Upsilon') from exc
        raise
    H_gens = []
    seen = {1}
    for h in lifts:
        x = rep.label(h)
        if x not in seen:
            seen.add(x)
            H_gens.append(rep.element_of(x))
    theta = theta_map(rep, cyc, H_gens)
    H_labels = rep.closure(H_gens)
    H_table = subgroup_table(rep, H_labels)
    dec = Decomposition(rep, b, cyc.gB, H_gens, theta, H_table, H_labels, cyc, pres,
                        B_gens, mu, forced=not cert.member)
    check_decomposition(dec)
    return dec
