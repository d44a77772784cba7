"""Membership certificates for the order class Upsilon and its density."""

from groupiso.numbers import density, density_csv, pi_lsi, upsilon_check

for n in (15, 22, 33, 21, 420, 1000):
    c = upsilon_check(n)
    line = ' '.join(c.summary())
    print(f'{line:50} lsi primes={sorted(pi_lsi(n))}')

rows = density(2 * 10**6)
print(density_csv(rows))
