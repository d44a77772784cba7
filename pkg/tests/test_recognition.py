import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from groupiso.errors import NotGroup, NotLatin, NotReduced
from groupiso.recognition import (generator_cap, is_group, recognize, schreier_relations,
                                  shallow_rebuild, stabilizer_trivial, transitive_generating_rows,
                                  transversal_perms)
from groupiso.tables import (GroupTable, cyclic, dihedral, direct_product, make_family,
                             permutation_group_table, random_loop, random_relabeling, relabel,
                             semidirect_cyclic)

from oracles import is_group_table

SPECS = [cyclic(1), cyclic(2), cyclic(3), cyclic(8), direct_product(2, 2), direct_product(2, 2, 2),
         dihedral(3), dihedral(11), semidirect_cyclic(7, 3, 2), direct_product(dihedral(3), 23),
         cyclic(97), direct_product(3, 3, 3)]


@pytest.mark.parametrize('spec', SPECS, ids=str)
def test_recognized_rep_reproduces_every_row(spec):
    t = make_family(spec)
    rep = recognize(t)
    for x in range(1, t.n + 1):
        w = rep.element_of(x)
        assert rep.label(w) == x
        assert np.array_equal(rep.permutation(w), t.data[x - 1])


@pytest.mark.parametrize('spec', SPECS, ids=str)
def test_structural_bounds(spec):
    t = make_family(spec)
    rep = recognize(t)
    cap = generator_cap(t.n)
    assert 2 * rep.k <= cap
    assert rep.depth <= cap


def test_c3_has_one_generator():
    rep = recognize(make_family(cyclic(3)))
    assert rep.k == 1 and rep.depth == 1


def test_alternating_group_a5():
    # even permutations of 5 points generated by a 3-cycle and a 5-cycle
    t = permutation_group_table([(1, 2, 0, 3, 4), (1, 2, 3, 4, 0)])
    assert t.n == 60
    rep = recognize(t)
    assert len(rep.closure([(i,) for i in rep.letters])) == 60
    assert 2 * rep.k <= generator_cap(60)


def test_transitive_rows_grow_orbit_by_doubling():
    t = make_family(direct_product(2, 2, 2, 2))
    S = transitive_generating_rows(t)
    assert S[0] == 1 and len(S) == 5


def test_cube_is_nondegenerate_and_relations_hold():
    t = make_family(dihedral(11))
    rows = [t.data[s - 1] for s in transitive_generating_rows(t)]
    chain = shallow_rebuild(rows)
    assert chain.depth() <= 2 * chain.k
    R = schreier_relations(chain)
    assert len(R) == chain.k * t.n
    assert stabilizer_trivial(R, chain)
    assert np.array_equal(transversal_perms(chain), t.data)


def test_rejects_unreduced_table():
    t = GroupTable(2, np.array([[1, 0], [0, 1]], dtype=np.int16))
    with pytest.raises(NotReduced):
        recognize(t)


def test_rejects_non_latin_table():
    rows = make_family(cyclic(5)).rows()
    rows[1][1] = 1
    rows[1][2] = 1
    with pytest.raises(NotLatin):
        recognize(GroupTable.from_rows(rows))


def test_rejects_smallest_nonassociative_loop():
    # order-5 loops are the smallest non-group loops
    rows = [[1, 2, 3, 4, 5], [2, 1, 4, 5, 3], [3, 5, 1, 2, 4], [4, 3, 5, 1, 2], [5, 4, 2, 3, 1]]
    assert not is_group_table(rows)
    with pytest.raises(NotGroup) as exc:
        recognize(GroupTable.from_rows(rows))
    assert exc.value.reason in ('NotRegular', 'TransversalMismatch')


@given(st.integers(5, 16), st.integers(0, 2**32 - 1))
@settings(max_examples=80, deadline=None)
def test_random_loops_agree_with_oracle(n, seed):
    t = random_loop(n, np.random.default_rng(seed))
    assert is_group(t) == is_group_table(t.rows())


@given(st.sampled_from(SPECS), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_relabeled_groups_are_groups(spec, seed):
    t = make_family(spec)
    r = relabel(t, random_relabeling(t.n, np.random.default_rng(seed)))
    assert is_group(r)


@given(st.sampled_from(SPECS[3:]), st.integers(0, 2**32 - 1))
@settings(max_examples=60, deadline=None)
def test_tampered_entry_is_rejected(spec, seed):
    rng = np.random.default_rng(seed)
    t = make_family(spec)
    rows = t.rows()
    i, j = (int(x) for x in rng.integers(1, t.n, size=2))
    rows[i][j] = int(rng.choice([v for v in range(1, t.n + 1) if v != rows[i][j]]))
    tampered = GroupTable.from_rows(rows)
    assert not is_group_table(rows)
    assert not is_group(tampered)


def intercalate_switches(rows, limit):
    """Latin tables obtained from ``rows`` by swapping one 2x2 subsquare away from row/column 1."""
    n = len(rows)
    out = []
    for i1 in range(1, n):
        for i2 in range(i1 + 1, n):
            for j1 in range(1, n):
                a, b = rows[i1][j1], rows[i2][j1]
                j2 = rows[i1].index(b)
                if j2 > 0 and rows[i2][j2] == a:
                    new = [list(r) for r in rows]
                    new[i1][j1], new[i1][j2] = b, a
                    new[i2][j1], new[i2][j2] = a, b
                    out.append(new)
                    if len(out) >= limit:
                        return out
    return out


@pytest.mark.parametrize('spec', [direct_product(2, 2, 2), dihedral(4), direct_product(2, 6),
                                  dihedral(6), direct_product(2, 2, 4)], ids=str)
def test_intercalate_switched_loops_agree_with_oracle(spec):
    rows = make_family(spec).rows()
    loops = intercalate_switches(rows, 25)
    assert loops
    for new in loops:
        assert is_group(GroupTable.from_rows(new)) == is_group_table(new)
