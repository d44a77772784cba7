"""Decide isomorphism of relabelled tables with the split pipeline and by brute force."""

import time

import numpy as np

from groupiso.iso import brute_iso, iso_main, pipeline_iso, verify_witness
from groupiso.tables import families_of_order, make_family, random_relabeling, relabel

rng = np.random.default_rng(3)
n = 282  # 2 * 3 * 47
specs = families_of_order(n)
tables = [make_family(s) for s in specs]
hidden = [relabel(t, random_relabeling(n, rng)) for t in tables]
print(f'{len(specs)} family tables of order {n}: {", ".join(map(str, specs))}')

for name, method in (('pipeline', pipeline_iso), ('brute', brute_iso)):
    start = time.perf_counter()
    verdicts = [[method(a, b).isomorphic for b in hidden] for a in tables]
    elapsed = time.perf_counter() - start
    print(f'{name:>8}: {sum(map(sum, verdicts))} isomorphic pairs of {len(specs) ** 2}, {elapsed:.2f}s')

w = iso_main(tables[1], hidden[1], 'auto')
print(' '.join(w.summary()), 'witness ok:', verify_witness(tables[1], hidden[1], [x - 1 for x in w.sigma]))
