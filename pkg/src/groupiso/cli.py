"""Command-line interface.

Every command writes machine-readable output to stdout (``key=value``
lines, CSV, or the table file format) and diagnostics to stderr.

Exit codes: ``verify`` 0 group / 3 not a group; ``upsilon`` 0 member /
1 non-member; ``iso`` 0 isomorphic / 1 not / 2 bad input / 3 mode or
resource error; ``decompose`` 0 / 2 bad input / 3 mode or resource error;
bad flags give 64 everywhere.
"""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from . import tables
from .errors import (GroupIsoError, InputError, InvalidParams, NotGroup, NotInUpsilon,
                     ResourceLimit)
from .iso import iso_main
from .numbers import density, density_csv, upsilon_check
from .recognition import recognize
from .split import decompose

EXIT_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_count(text):
    """Positive integer, also accepting ``1e8`` and ``10**8`` spellings."""
    s = text.strip().replace('_', '')
    try:
        if '**' in s:
            base, exp = s.split('**')
            v = int(base) ** int(exp)
        elif 'e' in s.lower():
            mant, exp = s.lower().split('e')
            v = int(mant) * 10 ** int(exp)
        else:
            v = int(s)
    except ValueError:
        raise argparse.ArgumentTypeError(f'not an integer: {text!r}') from None
    if v < 1:
        raise argparse.ArgumentTypeError(f'must be positive: {text!r}')
    return v


def _err(msg):
    print(msg, file=sys.stderr)


def _out(lines):
    for line in lines:
        print(line)


def cmd_verify(args):
    try:
        t = tables.read_table(args.file)
    except InputError as exc:
        if isinstance(exc, NotGroup):
            _out(['group=false', f'reason={exc.reason}'])
            _err(str(exc))
            return 3
        _err(f'malformed input: {exc}')
        return 2
    try:
        rep = recognize(t)
    except NotGroup as exc:
        _out(['group=false', f'n={t.n}', f'reason={exc.reason}'])
        _err(str(exc))
        return 3
    _out(['group=true', f'n={t.n}', f'gens={rep.k}', f'depth={rep.depth}'])
    return 0


def cmd_upsilon(args):
    cert = upsilon_check(args.n)
    _out(cert.summary())
    return 0 if cert.member else 1


def cmd_density(args):
    N = min(args.n, args.limit) if args.limit else args.n
    try:
        rows = density(N, allow_large=args.allow_large,
                       progress=(lambda m: _err(f'sieved up to {m}')) if args.verbose else None)
    except ResourceLimit as exc:
        _err(str(exc))
        return 3
    csv = density_csv(rows)
    if args.csv:
        with open(args.csv, 'w') as fh:
            fh.write(csv)
        c, k, r = rows[-1]
        _out([f'checkpoint={c}', f'count={k}', f'ratio={r:.6f}'])
    else:
        sys.stdout.write(csv)
    return 0


def cmd_decompose(args):
    try:
        t = tables.read_table(args.file)
        rep = recognize(t)
    except InputError as exc:
        _err(f'input rejected: {exc}')
        return 2
    try:
        dec = decompose(rep, force=args.force)
    except NotInUpsilon as exc:
        _err(f'{exc}; pass --force to try anyway')
        return 3
    except GroupIsoError as exc:
        _err(f'{type(exc).__name__}: {exc}')
        return 3
    _out(dec.summary())
    _out(['H_labels=' + ','.join(str(x) for x in dec.H_labels)])
    if args.emit_h:
        tables.write_table(dec.H_table, args.emit_h)
    return 0


def cmd_iso(args):
    try:
        t1 = tables.read_table(args.file1)
        t2 = tables.read_table(args.file2)
        w = iso_main(t1, t2, args.mode)
    except InputError as exc:
        _err(f'input rejected: {exc}')
        return 2
    except GroupIsoError as exc:
        _err(f'{type(exc).__name__}: {exc}')
        return 3
    _out(w.summary())
    if args.emit_witness and w.sigma is not None:
        with open(args.emit_witness, 'w') as fh:
            fh.write(' '.join(str(x) for x in w.sigma) + '\n')
    return 0 if w.isomorphic else 1


def _spec_from_args(family, params):
    try:
        if family == 'direct_product':
            return tables.direct_product(*params)
        return tables.FamilySpec(family, params)
    except TypeError as exc:
        raise InvalidParams(str(exc)) from None


def cmd_gen(args):
    rng = np.random.default_rng(args.seed)
    try:
        if args.family == 'latin':
            if len(args.params) != 1:
                raise InvalidParams('latin needs one order')
            t = tables.random_loop(args.params[0], rng)
        else:
            t = tables.make_family(_spec_from_args(args.family, args.params))
        if args.relabel:
            t = tables.relabel(t, tables.random_relabeling(t.n, rng))
    except (InvalidParams, ValueError, IndexError) as exc:
        _err(f'invalid parameters: {exc}')
        return EXIT_USAGE
    if args.output:
        tables.write_table(t, args.output)
    else:
        sys.stdout.write(tables.emit_table(t))
    return 0


def build_parser():
    p = _Parser(prog='groupiso', description='Group recognition and isomorphism for Cayley tables.')
    p.add_argument('-v', '--verbose', action='store_true', help='progress on stderr')
    sub = p.add_subparsers(dest='command', required=True, parser_class=_Parser)

    s = sub.add_parser('verify', help='decide whether a table is a group')
    s.add_argument('file')
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser('upsilon', help='membership certificate for an order')
    s.add_argument('n', type=parse_count)
    s.set_defaults(func=cmd_upsilon)

    s = sub.add_parser('density', help='count orders in Upsilon up to N')
    s.add_argument('n', type=parse_count)
    s.add_argument('--csv', metavar='FILE')
    s.add_argument('--limit', type=parse_count, help='stop at min(N, LIMIT)')
    s.add_argument('--base2-exact', action='store_true', default=True,
                   help='exact integer comparisons for base-2 logarithms (always on)')
    s.add_argument('--allow-large', action='store_true', help='permit N above 10^9')
    s.set_defaults(func=cmd_density)

    s = sub.add_parser('decompose', help='split a group as H ⋉ B')
    s.add_argument('file')
    s.add_argument('--emit-h', metavar='FILE')
    s.add_argument('--force', action='store_true', help='run even if n is not in Upsilon')
    s.set_defaults(func=cmd_decompose)

    s = sub.add_parser('iso', help='decide isomorphism of two tables')
    s.add_argument('file1')
    s.add_argument('file2')
    s.add_argument('--mode', choices=('auto', 'pipeline', 'brute'), default='auto')
    s.add_argument('--emit-witness', metavar='FILE')
    s.set_defaults(func=cmd_iso)

    s = sub.add_parser('gen', help='write a family table')
    s.add_argument('family', choices=tables.FAMILY_KINDS + ('latin',))
    s.add_argument('params', type=int, nargs='+')
    s.add_argument('-o', '--output', metavar='FILE')
    s.add_argument('--seed', type=int, default=0)
    s.add_argument('--relabel', action='store_true', help='apply a random relabeling fixing 1')
    s.set_defaults(func=cmd_gen)
    return p


def run(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        _err(f'usage error: {exc}')
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format='%(levelname)s: %(message)s', stream=sys.stderr)
    return args.func(args)


def main():
    sys.exit(run())


if __name__ == '__main__':
    main()
