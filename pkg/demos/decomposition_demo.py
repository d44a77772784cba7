"""Split groups of order in Upsilon as H acting on a cyclic normal subgroup B."""

from groupiso.recognition import recognize
from groupiso.split import check_decomposition, decompose
from groupiso.tables import cyclic, dihedral, direct_product, make_family, semidirect_cyclic

for spec in (dihedral(11), cyclic(22), cyclic(15), semidirect_cyclic(23, 2, 22),
             direct_product(dihedral(3), 23), cyclic(420)):
    t = make_family(spec)
    dec = decompose(recognize(t))
    print(f'{str(spec):>14}: |B|={dec.b:3d} |H|={dec.H_order:3d} theta={dec.theta} '
          f'checked={check_decomposition(dec)}')
