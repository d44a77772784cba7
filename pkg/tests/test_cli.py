import subprocess
import sys

import pytest

from groupiso.cli import parse_count, run
from groupiso.tables import cyclic, dihedral, make_family, write_table


@pytest.fixture
def corpus(tmp_path):
    files = {}
    for name, spec in [('c3', cyclic(3)), ('d11', dihedral(11)), ('c22', cyclic(22)),
                       ('c8', cyclic(8))]:
        files[name] = tmp_path / f'{name}.tbl'
        write_table(make_family(spec), files[name])
    return tmp_path, files


def call(argv, capsys):
    code = run([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_verify(corpus, capsys):
    _, f = corpus
    code, out, _ = call(['verify', f['c3']], capsys)
    assert code == 0
    assert out.splitlines() == ['group=true', 'n=3', 'gens=1', 'depth=1']


def test_verify_not_group(tmp_path, capsys):
    path = tmp_path / 'loop.tbl'
    path.write_text('5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n')
    code, out, err = call(['verify', path], capsys)
    assert code == 3
    assert 'group=false' in out and err


def test_verify_malformed(tmp_path, capsys):
    path = tmp_path / 'bad.tbl'
    path.write_text('3\n1 2 3\n')
    assert call(['verify', path], capsys)[0] == 2


def test_upsilon(capsys):
    code, out, _ = call(['upsilon', '22'], capsys)
    assert code == 0 and 'member=true' in out and 'a=2' in out and 'b=11' in out
    code, out, _ = call(['upsilon', '2'], capsys)
    assert code == 1 and 'failing=d' in out


def test_density_csv(tmp_path, capsys):
    code, out, _ = call(['density', '10**6', '--limit', '2000'], capsys)
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == 'checkpoint,count,ratio' and lines[1].startswith('2000,')
    path = tmp_path / 'd.csv'
    code, out, _ = call(['density', '3000', '--csv', path], capsys)
    assert code == 0 and path.read_text().startswith('checkpoint,count,ratio\n3000,')
    assert out.startswith('checkpoint=3000')


def test_decompose(corpus, capsys):
    tmp, f = corpus
    h = tmp / 'h.tbl'
    code, out, _ = call(['decompose', f['d11'], '--emit-h', h], capsys)
    assert code == 0
    assert {'n=22', 'b=11', 'H=2', 'theta=10'} <= set(out.splitlines())
    assert h.read_text().split() == ['2', '1', '2', '2', '1']
    assert call(['decompose', f['c8']], capsys)[0] == 3


def test_iso_exit_codes_and_witness(corpus, capsys):
    tmp, f = corpus
    code, out, _ = call(['iso', f['d11'], f['c22']], capsys)
    assert code == 1 and out.startswith('verdict=not_isomorphic method=pipeline')
    wfile = tmp / 'w.txt'
    code, out, _ = call(['iso', f['d11'], f['d11'], '--emit-witness', wfile], capsys)
    assert code == 0 and out.startswith('verdict=isomorphic method=pipeline')
    assert wfile.read_text().split() == [str(i) for i in range(1, 23)]
    code, out, _ = call(['iso', f['d11'], f['c22'], '--mode=brute'], capsys)
    assert code == 1 and 'method=brute' in out
    assert call(['iso', f['c8'], f['c8'], '--mode=pipeline'], capsys)[0] == 3


def test_iso_rejects_non_group(tmp_path, corpus, capsys):
    _, f = corpus
    path = tmp_path / 'loop.tbl'
    path.write_text('5\n1 2 3 4 5\n2 1 4 5 3\n3 5 1 2 4\n4 3 5 1 2\n5 4 2 3 1\n')
    assert call(['iso', path, f['c3']], capsys)[0] == 2


def test_gen(tmp_path, capsys):
    code, out, _ = call(['gen', 'dihedral', '3'], capsys)
    assert code == 0 and out.splitlines()[0] == '6'
    path = tmp_path / 'x.tbl'
    assert call(['gen', 'semidirect_cyclic', '7', '3', '2', '-o', path], capsys)[0] == 0
    assert path.read_text().splitlines()[0] == '21'
    a = call(['gen', 'latin', '9', '--seed', '4'], capsys)[1]
    b = call(['gen', 'latin', '9', '--seed', '4'], capsys)[1]
    assert a == b
    assert call(['gen', 'cyclic', '0'], capsys)[0] == 64


@pytest.mark.parametrize('argv', [[], ['frobnicate'], ['iso', 'a'], ['upsilon', 'x'],
                                  ['iso', 'a', 'b', '--mode', 'quick']])
def test_usage_errors(argv, capsys):
    assert call(argv, capsys)[0] == 64


def test_parse_count():
    assert parse_count('1e8') == 10**8
    assert parse_count('10**7') == 10**7
    assert parse_count('1_000') == 1000


def test_module_entry_point(corpus):
    _, f = corpus
    proc = subprocess.run([sys.executable, '-m', 'groupiso', 'verify', str(f['d11'])],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith('group=true')
