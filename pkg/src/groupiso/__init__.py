"""Group recognition and isomorphism testing for multiplication tables."""

from .errors import GroupIsoError, InputError, NotGroup
from .iso import IsoWitness, aut_group, brute_iso, iso_main, verify_witness
from .numbers import density, factorize, in_upsilon, is_isolated, lsi_part, upsilon_check
from .permrep import PermRep
from .recognition import is_group, recognize
from .split import Decomposition, decompose
from .tables import (GroupTable, cyclic, dihedral, direct_product, make_family,
                     parse_table, read_table, relabel, semidirect_cyclic, write_table)

__version__ = '0.1.0'
