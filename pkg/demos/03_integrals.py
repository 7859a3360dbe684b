"""The symmetrized integral, the central elements z_a, and the Gauss sums.

mu reads off one coefficient in normal form; z_a solves a trace linear
system and lands in the center; delta_+ delta_- detects ell in 8Z.
"""

import random
from fractions import Fraction

from hvsl2 import Color, RootData, as_tensor, in_commutant, monomial_elem, unit
from hvsl2.integrals import (DegenerateTwistError, check_ambidexterity,
                             check_integral_axioms, check_mod_compat,
                             commutant_samples, delta_closed_form, delta_pm,
                             mu, mu_mod, solve_z)

r = RootData(4)
a, b = Color(Fraction(1, 2)), Color(Fraction(2, 3))
lp = r.ellprime

top = monomial_elem(r, a, lp - 1, lp - 1, 0)
print("mu(E^top F^top) =", mu(r, a, top), "  mu(1) =", mu(r, a, unit(r, a)))

rng = random.Random(3)
fails = check_integral_axioms(r, a, b, 100, rng)
print("integral axioms on 100 random coset elements:",
      "all pass" if not fails else fails[:1])

z = solve_z(r, a)
print("\nz_a =", z)
print("central:", in_commutant(as_tensor(z)))
print("mu'(1) = mu(z_a) =", mu_mod(r, a, unit(r, a)))

dp, dm = delta_pm(r)
print("\ndelta+ =", dp, " delta- =", dm)
print("matches the closed Gauss-sum form (lambda = eta):",
      (dp - delta_closed_form(r)).is_zero())
try:
    delta_pm(RootData(8))
except DegenerateTwistError as exc:
    print("ell = 8:", exc)

xts = commutant_samples(r, a, b, 6, rng)
print("\nambidexterity on", len(xts), "commutant elements:",
      all(check_ambidexterity(r, a, b, xt) for xt in xts))
print("modified-integral compatibility:",
      all(check_mod_compat(r, a, b, xt) for xt in xts))
