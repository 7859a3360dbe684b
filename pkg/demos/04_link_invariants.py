"""Diagrams and the universal invariant.

A diagram is rows of cups, caps and crossings; beads from the R-matrix and
the pivot multiply along each component. The invariant of the round unknot
is the pivot itself; move pairs agree under every evaluation.
"""

from fractions import Fraction

from hvsl2 import Color, RootData, pivot
from hvsl2.diagrams import (check_moves, curated_pairs, curl_pair,
                            load_diagram, open_strand, parse_diagram,
                            round_unknot, serialize_diagram,
                            universal_invariant)

r = RootData(4)
a = Fraction(1, 2)

d = round_unknot(r, a)
print("unknot J =", universal_invariant(d).factor(), "= pivot?",
      universal_invariant(d).factor() == pivot(r, Color(a)))
print("open strand J =", universal_invariant(open_strand(r, a)).factor())

dr, dl = curl_pair(r, a)
print("same-writhe curls give the same open invariant:",
      universal_invariant(dr).factor() == universal_invariant(dl).factor())

print("\ncurated move pairs (RII, RIII, curl, marked point):")
for item in check_moves(curated_pairs(r), reps=True, hh0=True):
    print(f"  {item['name']:14s} ok={item['ok']}")

hopf = load_diagram("hopf.gdt", r)
print("\nhopf file round-trips:",
      serialize_diagram(parse_diagram(serialize_diagram(hopf))) ==
      serialize_diagram(hopf))
print("linking number:", hopf.linking(0, 1))
