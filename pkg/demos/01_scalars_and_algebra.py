"""Exact cyclotomic arithmetic and the PBW algebras.

Everything downstream rests on two layers: scalars that are honest elements
of Q(roots of unity) with decidable equality, and the graded algebras in
normal form E^a F^b K^gamma.
"""

from fractions import Fraction

from hvsl2 import (Color, RootData, coproduct, antipode, counit, gen_E,
                   gen_F, gen_K, pivot, pivot_inv, tilde_basis, unit)

r = RootData(5)
print(f"ring: ell = {r.ell}, ell' = {r.ellprime}")

# xi^x is ell-periodic and multiplicative; zero testing is exact
s = r.xi_pow(1) + r.xi_pow(2) + r.xi_pow(3) + r.xi_pow(4) + r.one
print("1 + xi + xi^2 + xi^3 + xi^4 =", s, "-> zero?", s.is_zero())

q = r.qint(Fraction(3, 2))
print("[3/2] =", q, "=", f"{q.to_complex():.6f}")
print("[3/2] * [3/2]^-1 =", q * q.inv())

# the defining relations, computed rather than assumed
a = Color(Fraction(1, 2))
E, F, K = gen_E(r, a), gen_F(r, a), gen_K(r, a, 1)
print("\ngrade a = 1/2:")
print("F E           =", F * E)
print("K E K^-1      =", K * E * gen_K(r, a, -1))
print("E^ell'        =", E ** r.ellprime)
print("K^(ell/2)     =", gen_K(r, a, Fraction(r.ell, 2)), " (the grade enters here)")

# the finite subalgebra has dimension ell'^3
print("\nfinite subalgebra basis size:", len(tilde_basis(r)))

# Hopf structure
print("\nDelta(E) =", coproduct(gen_E(r, a), a, Color(0)))
print("S(E)     =", antipode(E))
print("S(S(E))  =", antipode(antipode(E)), " (pivot conjugation)")
print("g        =", pivot(r, a), ", g g^-1 =", pivot(r, a) * pivot_inv(r, a))
print("eps(K^(3/2)) =", counit(gen_K(r, Color(0), Fraction(3, 2))))
