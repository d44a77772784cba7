"""Recognise groups among Cayley tables and look at the resulting representation."""

import numpy as np

from groupiso.errors import NotGroup
from groupiso.recognition import generator_cap, recognize
from groupiso.tables import dihedral, direct_product, make_family, random_loop

rng = np.random.default_rng(1)

for spec in (dihedral(11), direct_product(2, 2, 2, 2), direct_product(dihedral(3), 23)):
    t = make_family(spec)
    rep = recognize(t)
    print(f'{str(spec):>14}: n={t.n:4d} generators={rep.k} tree depth={rep.depth} '
          f'(bound {generator_cap(t.n)})')

# words multiply by normalising through the Schreier tree
t = make_family(dihedral(11))
rep = recognize(t)
r, s = rep.element_of(2), rep.element_of(12)
print('r^11 is identity:', rep.is_identity(rep.pow(r, 11)))
print('s^-1 r s == r^-1:', rep.eq(rep.conj(r, s), rep.inv(r)))

# random loops of order 8 are almost never groups
rejected = 0
for _ in range(50):
    try:
        recognize(random_loop(8, rng))
    except NotGroup as exc:
        rejected += 1
        reason = exc.reason
print(f'{rejected}/50 random loops of order 8 rejected (last reason: {reason})')
