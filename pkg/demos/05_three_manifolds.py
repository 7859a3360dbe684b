"""Surgery presentations and the Hennings-Virelizier invariants.

HV vanishes on S^2 x S^1 (zero quantum dimensions); the modified integral
repairs it: HV' is nonzero and matches the sum of squared modified
dimensions computed from the representation oracle.
"""

from fractions import Fraction

from hvsl2 import Color, RootData
from hvsl2.diagrams import round_unknot, slide_pair_one
from hvsl2.integrals import mu, solve_z
from hvsl2.manifolds import (SurgeryPresentation, hv, hv_mod, hv_result,
                             kirby1, linking_data, stabilize_computable)
from hvsl2.repeval import modified_dimension

r = RootData(4)
a = Fraction(1, 2)

empty = SurgeryPresentation(round_unknot(r, Fraction(0), kinks=1))
print("HV(S^3 via +1-framed unknot) =", hv(empty))

p = SurgeryPresentation(round_unknot(r, a))
print("\nS^2 x S^1, color", a)
print("linking:", linking_data(p.diagram).matrix)
print("HV  =", hv(p))
print("HV' =", hv_mod(p, 0))
print("mu(z_a)       =", mu(r, Color(a), solve_z(r, Color(a))))
print("sum d_k^2     =", sum((modified_dimension(r, Color(a), k) ** 2).to_complex()
                             for k in range(r.ellprime)))

print("\nKirby I invariance:",
      (hv_mod(kirby1(p, +1), 0) - hv_mod(p, 0)).is_zero())
d1, d2 = slide_pair_one(r, a)
print("handle-slide pair agreement:",
      (hv_mod(SurgeryPresentation(d2), 0) - hv_mod(p, 0)).is_zero())

q = stabilize_computable(p, 1, 1, 1)
print("stabilized presentation colors:",
      [str(c.color) for c in q.diagram.components],
      "-> HV' unchanged:", (hv_mod(q, 1) - hv_mod(p, 0)).is_zero())

print("\nserialized result:", hv_result(p, cut=0))
