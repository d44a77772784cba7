"""Decide whether a multiplication table is a group.

The rows of a reduced latin table are the left multiplications
``lambda_i(a) = i * a``.  The table is a group iff these generate a regular
permutation group whose transversal from the base point reproduces every
row.  The procedure:

1. pick ``O(log n)`` rows whose group is transitive on ``[n]``;
2. rebuild the generators as a nondegenerate cube ``g_1..g_k`` whose orbit
   construction gives a Schreier tree of depth at most ``2k``;
3. check every Schreier relation ``lambda_r lambda_(x) = lambda_(r(x))``,
   which makes the point stabilizer trivial;
4. compare each transversal permutation ``lambda_(x)`` with row ``x``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCube, InternalInconsistency, NotGroup
from .permrep import PermRep, compose, compose_rows, invert
from .tables import check_reduced_form, validate_latin


def generator_cap(n):
    return 2 * math.ceil(math.log2(n)) + 2 if n > 1 else 2


def _orbit_of_base(perms, n):
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    frontier = np.array([0])
    stack = np.stack(perms) if perms else np.zeros((0, n), dtype=np.int64)
    while frontier.size:
        imgs = np.unique(stack[:, frontier])
        new = imgs[~mask[imgs]]
        mask[new] = True
        frontier = new
    return mask


def transitive_generating_rows(t):
    """Labels ``S`` (identity row first) whose rows generate a transitive group.

    Rows are added in increasing label order among the points missing from
    the current orbit of 1.  For a group the orbit is the generated subgroup,
    so it must at least double at each step; a smaller growth proves the
    rows do not form a regular group and raises :class:`NotGroup`.
    """
    n = t.n
    S = [1]
    perms = []
    mask = _orbit_of_base(perms, n)
    size = 1
    while size < n:
        j = int(np.flatnonzero(~mask)[0])
        S.append(j + 1)
        perms.append(t.data[j])
        mask = _orbit_of_base(perms, n)
        new_size = int(mask.sum())
        if new_size < 2 * size or new_size % size:
            raise NotGroup('NotRegular',
                           f'orbit grew from {size} to {new_size} after adding row {j + 1}',
                           witness=('orbit', j + 1))
        size = new_size
    return S


@dataclass
class CubeChain:
    """Nondegenerate cube ``g_1..g_k`` and the orbit tree it spans.

    ``parent[x]``/``edge[x]`` encode the provenance of point ``x``: it was
    reached as ``edge[x]`` applied to ``parent[x]``, with letter ``i`` for
    ``g_i`` and ``-i`` for its inverse.  ``order`` lists points by insertion.
    """

    n: int
    gens: list
    parent: np.ndarray
    edge: np.ndarray
    order: np.ndarray

    @property
    def k(self):
        return len(self.gens)

    def provenance(self, x):
        """Tuple ``[x; j_1..j_l]`` of letters with ``lambda_(x) = h_{j_1} ... h_{j_l}`` (1-based x)."""
        out = []
        y = x - 1
        while y:
            out.append(int(self.edge[y]))
            y = int(self.parent[y])
        return (x,) + tuple(out)

    def depth(self):
        return max((len(self.provenance(x)) - 1 for x in range(1, self.n + 1)), default=0)


def _letter_perm(gens, inv_gens, l):
    return gens[l - 1] if l > 0 else inv_gens[-l - 1]


def _cube_orbit(gens, inv_gens, n):
    """``Delta_2k`` from the list ``g_k^-1 .. g_1^-1, g_1 .. g_k`` with provenance."""
    k = len(gens)
    seq = [-i for i in range(k, 0, -1)] + list(range(1, k + 1))
    mask = np.zeros(n, dtype=bool)
    mask[0] = True
    parent = np.full(n, -1, dtype=np.int64)
    edge = np.zeros(n, dtype=np.int64)
    pts = np.array([0])
    order = [pts]
    for l in seq:
        h = _letter_perm(gens, inv_gens, l)
        imgs = h[pts]
        fresh = ~mask[imgs]
        new = imgs[fresh]
        mask[new] = True
        parent[new] = pts[fresh]
        edge[new] = l
        order.append(new)
        pts = np.concatenate([pts, new])
    return mask, parent, edge, np.concatenate(order)


def _transversal_perm(gens, inv_gens, parent, edge, x):
    """``lambda_(x)`` as an image array, following provenance from the root."""
    path = []
    while x:
        path.append(int(edge[x]))
        x = int(parent[x])
    perm = np.arange(len(parent))
    for l in reversed(path):
        perm = compose(perm, _letter_perm(gens, inv_gens, l))
    return perm


def shallow_rebuild(gens):
    """Replace a transitive generating set by a nondegenerate cube with full orbit.

    Starting with the first non-identity generator, while the orbit ``O_i``
    misses a point, the smallest ``j`` in ``O_i`` (then smallest generator
    index ``r``) with ``s_r(j)`` outside ``O_i`` gives the next cube element
    ``g_{i+1} = s_r lambda_(j)``.

    The points ``C_i(1)`` of the cube are tracked; for a regular group they
    are pairwise distinct, so a collision raises :class:`DegenerateCube`
    carrying the two colliding cube words.
    """
    gens = [np.asarray(g) for g in gens]
    n = gens[0].size if gens else 1
    ident = np.arange(n)
    cube = []
    inv_cube = []
    first = next((g for g in gens if not np.array_equal(g, ident)), None)
    cube_pts = {0: ()}  # point of C_i(1) -> exponent word
    if first is not None:
        cube.append(first)
        inv_cube.append(invert(first))
        _grow_cube(cube_pts, cube, 1)
    while True:
        mask, parent, edge, order = _cube_orbit(cube, inv_cube, n)
        if mask.all():
            break
        best = None
        for r, s in enumerate(gens):
            outside = np.flatnonzero(mask & ~mask[s])
            if outside.size:
                cand = (int(outside[0]), r)
                if best is None or cand < best:
                    best = cand
        if best is None:
            raise InternalInconsistency('generating set is not transitive')
        j, r = best
        g = compose(_transversal_perm(cube, inv_cube, parent, edge, j), gens[r])
        cube.append(g)
        inv_cube.append(invert(g))
        _grow_cube(cube_pts, cube, len(cube))
    return CubeChain(n, cube, parent, edge, order)


def _cube_word_perm(cube, word):
    perm = np.arange(cube[0].size)
    for idx in reversed(word):
        perm = compose(perm, cube[idx - 1])
    return perm


def _grow_cube(cube_pts, cube, idx):
    g = cube[idx - 1]
    added = {}
    for x, w in cube_pts.items():
        y = int(g[x])
        other = cube_pts.get(y, added.get(y))
        if other is not None:
            w1 = (idx,) + w
            raise DegenerateCube(
                f'cube point {y + 1} reached twice',
                words=(w1, other),
                perms=(_cube_word_perm(cube, w1), _cube_word_perm(cube, other)))
        added[y] = (idx,) + w
    cube_pts.update(added)


@dataclass
class SchreierRelations:
    """Relations ``h_r lambda_(x) = lambda_(y)`` with ``y = h_r(x)``.

    Stored as parallel arrays of letters ``r``, source points ``x`` and
    target points ``y`` (0-based), one entry for every letter and point.
    """

    letters: np.ndarray
    source: np.ndarray
    target: np.ndarray

    def __len__(self):
        return self.letters.size

    def as_words(self, chain, i):
        """Relation ``i`` as ``(lhs letters, rhs letters)``."""
        x = int(self.source[i]) + 1
        y = int(self.target[i]) + 1
        return ((int(self.letters[i]),) + chain.provenance(x)[1:], chain.provenance(y)[1:])


def cube_letters(chain):
    return [i for i in range(1, chain.k + 1)] + [-i for i in range(1, chain.k + 1)]


def schreier_relations(chain, letters=None):
    """Relations for every point and each letter in ``letters``.

    The default uses the positive letters only: if ``g lambda_(x) = lambda_(g(x))``
    holds for every ``x`` then substituting ``x = g^-1(y)`` gives the relation
    for ``g^-1``, so checking the inverse letters again would be redundant.
    """
    if letters is None:
        letters = list(range(1, chain.k + 1))
    inv = [invert(g) for g in chain.gens]
    n = chain.n
    pts = np.arange(n)
    L, X, Y = [], [], []
    for l in letters:
        h = _letter_perm(chain.gens, inv, l)
        L.append(np.full(n, l))
        X.append(pts)
        Y.append(h)
    if not L:
        z = np.zeros(0, dtype=np.int64)
        return SchreierRelations(z, z, z)
    return SchreierRelations(np.concatenate(L), np.concatenate(X), np.concatenate(Y))


def transversal_perms(chain):
    """All ``lambda_(x)`` as an ``n x n`` array (row ``x`` maps 1 to ``x``), level by level."""
    n = chain.n
    inv = [invert(g) for g in chain.gens]
    P = np.empty((n, n), dtype=chain.gens[0].dtype if chain.gens else np.int64)
    P[0] = np.arange(n)
    # insertion order fills parents first; consecutive points share a letter
    order = chain.order[1:]
    if order.size:
        edges = chain.edge[order]
        cuts = np.flatnonzero(np.diff(edges)) + 1
        for block in np.split(order, cuts):
            l = int(chain.edge[block[0]])
            P[block] = compose_rows(P[chain.parent[block]], _letter_perm(chain.gens, inv, l))
    return P


_CHUNK = 2**17


def _first_failing_relation(R, chain, P):
    """Index into ``R`` of a relation whose two sides differ, or ``None``.

    Each letter's block lists the points in order, so the block is checked as
    the array identity ``h[P] == P[h]`` (row ``x`` of each side is one
    relation).  Rows are taken in chunks, all letters per chunk, so that the
    chunk of ``P`` stays in cache.
    """
    inv = [invert(g) for g in chain.gens]
    n = chain.n
    starts = list(range(0, len(R), n))
    perms = [_letter_perm(chain.gens, inv, int(R.letters[s])) for s in starts]
    step = max(1, _CHUNK // n)
    for r0 in range(0, n, step):
        r1 = min(n, r0 + step)
        block = P[r0:r1]
        for start, h in zip(starts, perms):
            bad = np.flatnonzero(np.any(h[block] != P[h[r0:r1]], axis=1))
            if bad.size:
                return start + r0 + int(bad[0])
    return None


def stabilizer_trivial(R, chain, P=None):
    """True iff both sides of every relation agree as permutations."""
    if P is None:
        P = transversal_perms(chain)
    return _first_failing_relation(R, chain, P) is None


def recognize(t):
    """Return a :class:`PermRep` for ``t`` or raise :class:`NotGroup`.

    ``NotGroup.reason`` is ``NotReduced``, ``NotLatin``, ``NotRegular`` or
    ``TransversalMismatch``.
    """
    n = t.n
    check_reduced_form(t)
    validate_latin(t)
    if n == 1:
        return PermRep(1, [], [-1], [0])
    S = transitive_generating_rows(t)
    rows = [t.data[s - 1] for s in S]
    try:
        chain = shallow_rebuild(rows)
    except DegenerateCube as exc:
        _reverify_collision(exc)
        raise NotGroup('NotRegular', str(exc), witness=exc.words) from None
    if 2 * chain.k > generator_cap(n):
        raise InternalInconsistency(f'{2 * chain.k} generators exceed cap {generator_cap(n)}')
    # each cube element must itself be a row of the table
    inv = [invert(g) for g in chain.gens]
    for l in cube_letters(chain):
        g = _letter_perm(chain.gens, inv, l)
        u = int(g[0])
        if not np.array_equal(g, t.data[u]):
            raise NotGroup('NotRegular', f'cube generator {l} differs from row {u + 1}',
                           witness=('generator', l, u + 1))
    R = schreier_relations(chain)
    P = transversal_perms(chain)
    bad = _first_failing_relation(R, chain, P)
    if bad is not None:
        raise NotGroup('NotRegular', 'a Schreier relation fails',
                       witness=('relation', R.as_words(chain, bad)))
    mismatch = np.flatnonzero(np.any(P != t.data, axis=1))
    if mismatch.size:
        x = int(mismatch[0]) + 1
        raise NotGroup('TransversalMismatch', f'row {x} is not the transversal element',
                       witness=('row', x))
    return PermRep(n, chain.gens, chain.parent, chain.edge)


def _reverify_collision(exc):
    """A cube collision is a non-identity stabilizer element only if the two words differ as maps."""
    u, v = exc.perms
    if np.array_equal(u, v):
        raise InternalInconsistency('degenerate cube from equal elements') from exc


def is_group(t):
    try:
        recognize(t)
    except NotGroup:
        return False
    return True
