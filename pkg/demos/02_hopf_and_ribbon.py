"""The quasitriangular and ribbon structure, checked live.

The R-matrix is a finite Fourier expansion of the Cartan part times a
truncated quantum exponential; the twist comes out central and its two
defining expressions coincide.
"""

import random
from fractions import Fraction

from hvsl2 import Color, RootData, unit
from hvsl2.pbw import random_elem
from hvsl2.ribbon import (check_antipode_r, check_cabling_left,
                          check_cabling_right, check_lift_independence,
                          check_r_intertwines, check_r_invertible,
                          check_yang_baxter, r_matrix, twist, twist_alt,
                          twist_inv, twist_is_central)

r = RootData(4)
a, b, c = Color(Fraction(1, 2)), Color(Fraction(1, 3)), Color(Fraction(7, 5))

R = r_matrix(r, a, b)
print(f"R-matrix at (1/2, 1/3): {len(R.terms)} terms")
print("lift independence:", check_lift_independence(r, a, b))
print("invertible (both antipode formulas):", check_r_invertible(r, a, b))

rng = random.Random(1)
x = random_elem(r, a + b, rng)
print("intertwines the coproduct on a random element:",
      check_r_intertwines(r, a, b, x))
print("cabling identities:", check_cabling_right(r, a, b, c),
      check_cabling_left(r, a, b, c))
print("Yang-Baxter:", check_yang_baxter(r, a, b, c))
print("(S x S) R = R at opposite grades:", check_antipode_r(r, a, b))

th = twist(r, a)
print("\ntwist theta_a =", th)
print("two defining expressions agree:", th == twist_alt(r, a))
print("central:", twist_is_central(r, a))
print("theta theta^-1 =", th * twist_inv(r, a) == unit(r, a))
