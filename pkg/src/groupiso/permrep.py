"""Group elements as short words over a shallow Schreier tree.

A :class:`PermRep` holds ``k = O(log n)`` generating permutations of a
regular permutation group on ``[n]`` together with a Schreier tree rooted at
the base point 1.  Because the group is regular, an element is pinned down
by the image of the base point, so

* equality of two words compares two images of 1;
* a product is a concatenation followed by renormalization, i.e. reading the
  image of 1 and walking the tree back to the root.

Words are tuples of signed generator indices: letter ``i`` stands for
generator ``g_i`` (1-based) and ``-i`` for its inverse.  A word
``(l1, ..., lm)`` denotes the product ``l1 * l2 * ... * lm``; as a map on
points it applies ``lm`` first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOverflow, WordTooLong
from .numbers import factorize

Word = tuple


def compose(a, b):
    """``a`` then ``b``, i.e. ``i -> b[a[i]]``."""
    return np.asarray(b)[np.asarray(a)]


def compose_rows(A, b):
    """Row-wise ``compose(A[r], b)`` for a stack of permutations ``A``."""
    return np.asarray(b)[A]


def invert(a):
    a = np.asarray(a)
    out = np.empty_like(a)
    out[a] = np.arange(a.size, dtype=a.dtype)
    return out


def naive_compose(a, b):
    return [b[x] for x in a]


def word_cap(n):
    return 8 * math.ceil(math.log2(n)) if n > 1 else 0


def inverse_word(w):
    return tuple(-l for l in reversed(w))


def free_reduce(w):
    out = []
    for l in w:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


class PermRep:
    """Regular permutation group with ``k`` generators and a shallow Schreier tree.

    ``gens[i]`` is the 0-based image array of generator ``i+1``; ``parent`` and
    ``edge`` describe the tree: point ``x != 0`` equals ``edge[x]`` applied to
    ``parent[x]``.
    """

    def __init__(self, n, gens, parent, edge):
        self.n = n
        self.gens = [np.asarray(g) for g in gens]
        self.k = len(self.gens)
        self.inv_gens = [invert(g) for g in self.gens]
        self.parent = [int(x) for x in parent]
        self.edge = [int(x) for x in edge]
        self.cap = word_cap(n)
        img = {}
        for i, (g, gi) in enumerate(zip(self.gens, self.inv_gens), start=1):
            img[i] = g.tolist()
            img[-i] = gi.tolist()
        self._img = img
        self._words = [None] * n
        self._fact = factorize(n)
        self.depth = self._tree_depth()

    def _tree_depth(self):
        return max((len(self.element_of(x)) for x in range(1, self.n + 1)), default=0)

    @property
    def letters(self):
        return tuple(range(1, self.k + 1))

    @property
    def generator_labels(self):
        """1-based labels of the generators (their images of 1)."""
        return tuple(int(g[0]) + 1 for g in self.gens)

    identity = ()

    def check(self, w):
        if len(w) > self.cap:
            raise WordTooLong(f'word of length {len(w)} exceeds cap {self.cap}')
        return w

    def image(self, w, point=0):
        """Image of a 0-based point under the map of ``w``."""
        img = self._img
        x = point
        for l in reversed(w):
            x = img[l][x]
        return x

    def label(self, w):
        """1-based label of the element represented by ``w``."""
        return self.image(w) + 1

    def element_of(self, x):
        """Tree word of the element with label ``x``; its length is at most the tree depth."""
        i = x - 1
        w = self._words[i]
        if w is None:
            out = []
            y = i
            while y:
                out.append(self.edge[y])
                y = self.parent[y]
            w = self._words[i] = tuple(out)
        return w

    def normalize(self, w):
        return self.element_of(self.image(w) + 1)

    def mul(self, u, v):
        self.check(u)
        self.check(v)
        return self.normalize(u + v)

    def inv(self, u):
        return self.normalize(inverse_word(self.check(u)))

    def eq(self, u, v):
        return self.image(u) == self.image(v)

    def is_identity(self, u):
        return self.image(u) == 0

    def pow(self, u, e):
        self.check(u)
        if e < 0:
            u, e = self.inv(u), -e
        result = ()
        base = self.normalize(u)
        while e:
            if e & 1:
                result = self.normalize(result + base)
            e >>= 1
            if e:
                base = self.normalize(base + base)
        return result

    def order_of(self, u):
        """Least ``e >= 1`` with ``u**e = 1``, by refining ``n`` over its prime divisors."""
        e = self.n
        for p, _ in self._fact.prime_powers:
            while e % p == 0 and self.is_identity(self.pow(u, e // p)):
                e //= p
        return e

    def conj(self, u, h):
        """``h^-1 u h``."""
        return self.mul(self.mul(self.inv(h), u), h)

    def permutation(self, w):
        """Full image array of ``w`` (for inspection; never needed for arithmetic)."""
        perm = np.arange(self.n)
        for l in reversed(w):
            g = self.gens[l - 1] if l > 0 else self.inv_gens[-l - 1]
            perm = compose(perm, g)
        return perm

    # label-level conveniences built on words
    def product_label(self, x, y):
        return self.label(self.element_of(x) + self.element_of(y))

    def closure(self, words):
        """Labels of the subgroup generated by ``words``, identity first."""
        gens = [self.normalize(w) for w in words]
        gens = [g for g in gens if g]
        seen = {1}
        out = [1]
        for z in out:
            zw = self.element_of(z)
            for g in gens:
                x = self.label(zw + g)
                if x not in seen:
                    seen.add(x)
                    out.append(x)
        return out


@dataclass
class CosetGraph:
    """Schreier coset graph for ``B`` under left multiplication by generators.

    ``reps[i]`` is the representative word of vertex ``i`` (vertex 0 is ``B``
    itself with the empty word); ``inv_reps`` stores their inverses;
    ``parent``/``label`` give the spanning tree and ``edges`` every
    ``(u, v, s)`` with ``s * reps[u] * B = reps[v] * B``.
    """

    rep: PermRep
    member: object
    reps: list = field(default_factory=list)
    inv_reps: list = field(default_factory=list)
    parent: list = field(default_factory=list)
    label: list = field(default_factory=list)
    edges: list = field(default_factory=list)
    generators: tuple = ()

    @property
    def index(self):
        return len(self.reps)

    def coset_index(self, g):
        """Index of the vertex whose coset contains ``g`` (linear scan)."""
        rep = self.rep
        for i, yi in enumerate(self.inv_reps):
            if self.member(rep.mul(yi, g)):
                return i
        return None


def schreier_graph(rep, member, index_bound, generators=None):
    """Build the coset graph of the subgroup decided by ``member``.

    Raises :class:`IndexOverflow` once more than ``index_bound`` distinct
    cosets appear.
    """
    gens = tuple(generators) if generators is not None else rep.letters
    cg = CosetGraph(rep, member, generators=gens)
    cg.reps.append(())
    cg.inv_reps.append(())
    cg.parent.append(None)
    cg.label.append(None)
    u = 0
    while u < len(cg.reps):
        x = cg.reps[u]
        for s in gens:
            g = rep.mul((s,), x)
            v = cg.coset_index(g)
            if v is None:
                if len(cg.reps) >= index_bound:
                    raise IndexOverflow(f'more than {index_bound} cosets')
                v = len(cg.reps)
                cg.reps.append(g)
                cg.inv_reps.append(rep.inv(g))
                cg.parent.append(u)
                cg.label.append(s)
            cg.edges.append((u, v, s))
        u += 1
    return cg


def coset_rewrite(cg, g):
    """Transversal word ``t`` with ``t B = g B``."""
    i = cg.coset_index(g)
    if i is None:
        raise IndexOverflow('element lies in no recorded coset')
    return cg.reps[i]


def schreier_generators(cg):
    """Generators ``(bar(st))^-1 s t`` of ``B``, identities and repeats dropped."""
    rep = cg.rep
    out = []
    seen = set()
    for t in cg.reps:
        for s in cg.generators:
            st = rep.mul((s,), t)
            w = rep.mul(rep.inv(coset_rewrite(cg, st)), st)
            x = rep.label(w)
            if x != 1 and x not in seen:
                seen.add(x)
                out.append(w)
    return out


def hall_membership(rep, b):
    """Membership test ``w -> w**b == 1`` for the normal Hall subgroup of order ``b``."""
    def member(w):
        return rep.is_identity(rep.pow(w, b))
    member.order = b
    return member
