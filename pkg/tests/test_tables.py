import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from groupiso.errors import (InvalidParams, InvalidPermutation, MalformedInput, NotLatinColumn,
                             NotLatinRow, NotReduced)
from groupiso.tables import (GroupTable, cyclic, dihedral, direct_product, emit_table,
                             families_of_order, invert_permutation, make_family, parse_table,
                             permutation_group_table, random_loop, random_relabeling, read_table,
                             relabel, semidirect_cyclic, validate_latin, write_table)

from oracles import element_order, is_group_table, is_latin


def test_parse_skips_comments_and_accepts_any_line_breaks():
    t = parse_table('# Klein group\n4\n1 2 3 4 2 1 4 3\n3 4 1 2\n4 3\n2 1\n')
    assert t.n == 4
    assert t.entry(2, 3) == 4
    assert t.rows()[3] == [4, 3, 2, 1]


def test_parse_bytes():
    assert parse_table(b'1\n1\n').n == 1


@pytest.mark.parametrize('text', ['', '# only a comment\n', '2\n1 2 2', '2\n1 2 2 x',
                                  '0\n', '2\n1 2 2 3'])
def test_parse_rejects_malformed(text):
    with pytest.raises(MalformedInput):
        parse_table(text)


def test_parse_rejects_unreduced():
    with pytest.raises(NotReduced):
        parse_table('2\n2 1 1 2')


def test_emit_parse_roundtrip(tmp_path):
    t = make_family(dihedral(5))
    assert parse_table(emit_table(t)) == t
    path = tmp_path / 'd5.tbl'
    write_table(t, path)
    assert read_table(path) == t
    assert path.read_text().splitlines()[0] == '10'


def test_validate_latin_reports_one_based_line_and_symbol():
    rows = make_family(cyclic(5)).rows()
    rows[2][3] = rows[2][4]  # row 3 now repeats a symbol
    t = GroupTable.from_rows(rows)
    with pytest.raises(NotLatinRow) as exc:
        validate_latin(t)
    assert exc.value.index == 3
    assert exc.value.symbol == rows[2][4]


def test_validate_latin_column_failure():
    # rows are permutations but column 2 repeats symbol 3
    t = GroupTable.from_rows([[1, 2, 3], [2, 3, 1], [3, 1, 2]])
    validate_latin(t)
    bad = GroupTable.from_rows([[1, 2, 3, 4], [2, 3, 4, 1], [3, 4, 1, 2], [4, 3, 2, 1]])
    with pytest.raises(NotLatinColumn) as exc:
        validate_latin(bad)
    assert exc.value.kind == 'column'
    assert exc.value.index == 2


@pytest.mark.parametrize('spec', [cyclic(1), cyclic(7), dihedral(3), dihedral(11),
                                  direct_product(2, 2), direct_product(dihedral(3), 2),
                                  semidirect_cyclic(7, 3, 2), semidirect_cyclic(11, 2, 10)])
def test_families_are_groups(spec):
    t = make_family(spec)
    assert t.n == spec.order
    assert is_group_table(t.rows())


def test_dihedral_has_m_plus_one_involutions_for_odd_m():
    rows = make_family(dihedral(11)).rows()
    orders = [element_order(rows, x) for x in range(1, 23)]
    assert orders.count(2) == 11
    assert orders.count(11) == 10


def test_semidirect_needs_valid_action():
    with pytest.raises(InvalidParams):
        make_family(semidirect_cyclic(7, 2, 2))  # 2 has order 3 mod 7
    with pytest.raises(InvalidParams):
        make_family(semidirect_cyclic(9, 2, 8))  # q must be prime


def test_family_names():
    assert str(direct_product(dihedral(3), 23)) == 'D3 x C23'
    assert str(semidirect_cyclic(11, 2, 10)) == 'C11:C2[10]'


def test_families_of_order_are_all_of_that_order():
    for n in (12, 22, 30, 60):
        specs = families_of_order(n)
        assert str(specs[0]) == f'C{n}'
        assert all(s.order == n for s in specs)


def test_permutation_group_table_s3():
    t = permutation_group_table([(1, 0, 2), (1, 2, 0)])
    assert t.n == 6
    assert is_group_table(t.rows())


@given(st.integers(1, 12), st.integers(0, 2**32 - 1))
@settings(max_examples=40, deadline=None)
def test_relabel_preserves_structure(m, seed):
    t = make_family(dihedral(m)) if m > 2 else make_family(cyclic(m))
    sigma = random_relabeling(t.n, np.random.default_rng(seed))
    r = relabel(t, sigma)
    rows, rrows = t.rows(), r.rows()
    for i in range(t.n):
        for j in range(t.n):
            assert rrows[sigma[i] - 1][sigma[j] - 1] == sigma[rows[i][j] - 1]
    assert relabel(r, invert_permutation(sigma)) == t


def test_relabel_requires_fixing_one():
    with pytest.raises(InvalidPermutation):
        relabel(make_family(cyclic(3)), [2, 1, 3])


@given(st.integers(1, 14), st.integers(0, 2**32 - 1))
@settings(max_examples=30, deadline=None)
def test_random_loop_is_reduced_latin(n, seed):
    t = random_loop(n, np.random.default_rng(seed))
    rows = t.rows()
    assert is_latin(rows)
    assert rows[0] == list(range(1, n + 1))
    assert [r[0] for r in rows] == list(range(1, n + 1))
