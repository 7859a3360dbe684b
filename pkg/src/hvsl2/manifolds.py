"""Surgery presentations, linking data, and the 3-manifold invariants.

HV is normalized with separate exponents for the positive and negative
eigenvalue counts of the linking matrix:

    HV = delta_+^(-b+) delta_-^(-b-) prod_i mu_{a_i}(J_i)

which agrees with the delta^(-signature) normalization whenever
delta_+ delta_- = 1 and avoids extracting square roots.  HV' cuts one
admissible component open at its marked point, evaluates the open leg with
the modified integral (after unwinding the diagram rotation by a pivot
power) and the closed legs with mu.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .diagrams import Component, DiagramError, Event, GDiagram, universal_invariant
from .integrals import (NonAdmissibleColorError, delta_pm, mu_functional,
                        mu_mod_functional)
from .pbw import Color
from .scalars import RootData, Scalar


@dataclass
class LinkingData:
    matrix: list
    b_plus: int
    b_minus: int

    @property
    def signature(self) -> int:
        return self.b_plus - self.b_minus

    @property
    def nullity(self) -> int:
        return len(self.matrix) - self.b_plus - self.b_minus


def linking_data(d: GDiagram) -> LinkingData:
    """Exact linking matrix and its eigenvalue sign counts.

    The counts come from Descartes' rule on the characteristic polynomial,
    which is exact for symmetric (all real rooted) integer matrices."""
    if d.open_component is not None:
        raise DiagramError("linking data needs a closed diagram")
    n = len(d.components)
    mat = [[d.linking(i, j) for j in range(n)] for i in range(n)]
    coeffs = _charpoly(mat)
    while coeffs and coeffs[0] == 0:
        coeffs = coeffs[1:]  # strip zero eigenvalues
    b_plus = _descartes(coeffs)
    b_minus = _descartes([c if i % 2 == 0 else -c for i, c in enumerate(coeffs)])
    return LinkingData(mat, b_plus, b_minus)


def _charpoly(mat) -> list[Fraction]:
    """Coefficients [c_0, ..., c_n] of det(xI - M), low degree first, by the
    Faddeev-LeVerrier recursion over exact rationals."""
    n = len(mat)
    M = [[Fraction(v) for v in row] for row in mat]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    A = [row[:] for row in M]
    for k in range(1, n + 1):
        tr = sum(A[i][i] for i in range(n))
        c = -tr / k
        coeffs[n - k] = c
        if k < n:
            for i in range(n):
                A[i][i] += c
            A = [[sum(M[i][t] * A[t][j] for t in range(n)) for j in range(n)]
                 for i in range(n)]
    return coeffs


def _descartes(coeffs) -> int:
    signs = [c for c in coeffs if c != 0]
    return sum(1 for x, y in zip(signs, signs[1:]) if (x > 0) != (y > 0))


class SurgeryPresentation:
    """A closed blackboard-framed diagram with meridian colors (recorded as
    given; consistency is the caller's responsibility)."""

    def __init__(self, diagram: GDiagram):
        if diagram.open_component is not None:
            raise DiagramError("surgery presentations are closed diagrams")
        self.diagram = diagram
        self.ring = diagram.ring

    @property
    def colors(self):
        return self.diagram.colors()

    def linking(self) -> LinkingData:
        return linking_data(self.diagram)

    def is_computable(self) -> bool:
        return any(c.in_Gprime() for c in self.colors)


def _normalization(ring: RootData, lk: LinkingData) -> Scalar:
    dp, dm = delta_pm(ring)
    return dp.inv() ** lk.b_plus * dm.inv() ** lk.b_minus


def hv(p: SurgeryPresentation) -> Scalar:
    """The graded Hennings-Virelizier invariant of the presented manifold."""
    ring = p.ring
    lk = p.linking()
    norm = _normalization(ring, lk)  # raises on degenerate twist
    t = universal_invariant(p.diagram)
    colors = p.colors
    for _ in range(len(colors)):
        a = t.grades[0]
        t = t.contract_at(0, mu_functional(ring, a))
    if isinstance(t, Scalar):
        return norm * t
    # zero components: empty surgery presents S^3
    (coef,) = t.terms.values() if t.terms else (ring.one,)
    return norm * coef


def hv_mod(p: SurgeryPresentation, j: int, segment: tuple | None = None) -> Scalar:
    """The renormalized invariant from the computable presentation: cut
    component j open at its marked point (an honest 1-string diagram),
    evaluate mu on the closed legs and the modified integral on the open one."""
    from .diagrams import cut_component
    ring = p.ring
    colors = p.colors
    if not 0 <= j < len(colors):
        raise DiagramError(f"component {j} out of range")
    aj = colors[j]
    if not aj.in_Gprime():
        raise NonAdmissibleColorError(
            f"cut component must carry an admissible color, got {aj}")
    lk = p.linking()
    norm = _normalization(ring, lk)
    t = universal_invariant(cut_component(p.diagram, j, segment))
    for i in sorted((i for i in range(len(colors)) if i != j), reverse=True):
        t = t.contract_at(i, mu_functional(ring, colors[i]))
    out = t.contract_at(0, mu_mod_functional(ring, aj))
    return norm * out


def hv_result(p: SurgeryPresentation, cut: int | None = None) -> dict:
    """Invariant plus provenance metadata, serialization ready."""
    ring = p.ring
    lk = p.linking()
    value = hv(p) if cut is None else hv_mod(p, cut)
    from .serialize import scalar_payload
    return {
        "value": scalar_payload(value),
        "ell": ring.ell,
        "eta": scalar_payload(ring.eta),
        "colors": [str(c.lift()) for c in p.colors],
        "b_plus": lk.b_plus,
        "b_minus": lk.b_minus,
        "cut_component": cut,
        "normalization": "bpm",
    }


# ---------------------------------------------------------------------------
# Kirby moves


def kirby1(p: SurgeryPresentation, sign: int) -> SurgeryPresentation:
    """Disjoint +-1 framed 0-colored unknot on top of the diagram."""
    if sign not in (1, -1):
        raise ValueError("sign must be +-1")
    d = p.diagram
    tr = d.validate()
    kink = Event("x-" if sign == 1 else "x+", 0)
    rows = [list(r) for r in d.rows] + [[Event("cup", 0)], [kink], [Event("cap", 0)]]
    comps = []
    for ci, c in enumerate(d.components):
        comps.append(Component(c.color, c.orient, c.anchor or tr.discovery[ci]))
    comps.append(Component(Color(0), "up", (len(rows) - 2, 0)))
    return SurgeryPresentation(GDiagram(d.ring, rows, comps))


def stabilize_computable(p: SurgeryPresentation, boundary: int, first: int,
                         count: int) -> SurgeryPresentation:
    """Encircle ``count`` adjacent strands (columns first..first+count-1 at
    the given row boundary) with a 0-colored +1-framed circle together with
    its 0-framed meridian, colored so the meridian relations stay consistent.
    The signed color sum of the selected strands must land in G'."""
    d = p.diagram
    ring = d.ring
    tr = d.validate()
    width = tr.widths[boundary]
    if count < 1:
        raise DiagramError("empty strand selection")
    if not (0 <= first and first + count <= width):
        raise DiagramError("selected strands out of range")
    c = first
    k = count
    colors = d.colors()
    total = Color(0)
    for pcol in range(first, first + count):
        seg = (boundary, pcol)
        comp = tr.seg_comp[seg]
        sgn = tr.seg_dir[seg]
        total = total + (colors[comp] if sgn > 0 else -colors[comp])
    if not total.in_Gprime():
        raise NonAdmissibleColorError(
            f"signed color sum {total} of the selection is not in G'")
    block: list[list[Event]] = []
    block.append([Event("cup", c + k)])                      # meridian circle
    block.append([Event("cup", c)])                          # encircling circle
    for jj in range(k + 1):
        block.append([Event("x-", c + 1 + jj)])
    for jj in range(k + 1):
        block.append([Event("x+", c + jj)])
    block.append([Event("x-", c + k + 1)])                   # +1 framing kink
    block.append([Event("cap", c + k + 1)])
    block.append([Event("cap", c + k)])
    nb = len(block)
    rows = [list(r) for r in d.rows[:boundary]] + block + \
        [list(r) for r in d.rows[boundary:]]
    comps = []
    for ci, cc in enumerate(d.components):
        b0, p0 = cc.anchor or tr.discovery[ci]
        if b0 > boundary:
            b0 += nb
        comps.append(Component(cc.color, cc.orient, (b0, p0)))
    new_color = -total
    comps.append(Component(new_color, "up", (boundary + 1, c + k)))   # meridian
    comps.append(Component(Color(0), "up", (boundary + 2, c)))        # circle
    return SurgeryPresentation(GDiagram(ring, rows, comps))
