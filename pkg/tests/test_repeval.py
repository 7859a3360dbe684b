from fractions import Fraction

import pytest

from hvsl2 import Color, GradeError, unit
from hvsl2.integrals import NonAdmissibleColorError, mu, solve_z
from hvsl2.linalg import identity_matrix, mat_eq, mat_mul, mat_trace
from hvsl2.pbw import random_elem
from hvsl2.repeval import (build_module, central_idempotents,
                           modified_dimension, modified_dimension_formula,
                           module_relations_hold, morse_module_evaluate,
                           quantum_dimension, rep_evaluate_link,
                           rep_evaluate_tangle, represent)
from conftest import get_ring

A = Color(Fraction(1, 3))


def test_module_relations(small_ring):
    r = small_ring
    for k in range(r.ellprime):
        assert module_relations_hold(build_module(r, A, k))


def test_module_relations_ell5_all_k():
    r = get_ring(5)
    a = Color(Fraction(1, 3))
    for k in range(5):
        assert module_relations_hold(build_module(r, a, k))


def test_k_spectrum(small_ring):
    r = small_ring
    mod = build_module(r, A, 1)
    K = mod.k_power(Fraction(1))
    alpha = A.lift()
    for i in range(mod.dim):
        assert (K[i][i] - r.xi_pow(alpha + 2 - 2 * i)).is_zero()


def test_represent_multiplicative(small_ring, rng):
    r = small_ring
    mod = build_module(r, A, 0)
    for _ in range(6):
        x = random_elem(r, A, rng)
        y = random_elem(r, A, rng)
        assert mat_eq(represent(x * y, mod),
                      mat_mul(represent(x, mod), represent(y, mod), r))


def test_represent_identity_and_quotient(small_ring):
    r = small_ring
    mod = build_module(r, A, 0)
    assert mat_eq(represent(unit(r, A), mod), identity_matrix(r, mod.dim))
    half = Fraction(r.ell, 2)
    s = r.xi_pow(half * A.lift())
    Kh = mod.k_power(half)
    for i in range(mod.dim):
        assert (Kh[i][i] - s).is_zero()


def test_represent_grade_guard(ring4):
    mod = build_module(ring4, A, 0)
    with pytest.raises(GradeError):
        represent(unit(ring4, Color(Fraction(1, 2))), mod)


def test_build_module_guards(ring4):
    with pytest.raises(NonAdmissibleColorError):
        build_module(ring4, Color(0), 0)
    with pytest.raises(ValueError):
        build_module(ring4, A, ring4.ellprime)


def test_central_idempotents(small_ring):
    r = small_ring
    es = central_idempotents(r, A)
    assert len(es) == r.ellprime
    total = None
    for e in es:
        total = e if total is None else total + e
        assert e * e == e
    assert total == unit(r, A)
    for i, ei in enumerate(es):
        for j, ej in enumerate(es):
            if i != j:
                assert (ei * ej).is_zero()
        for k in range(r.ellprime):
            m = represent(ei, build_module(r, A, k))
            expect = identity_matrix(r, r.ellprime) if k == i else \
                [[r.zero] * r.ellprime for _ in range(r.ellprime)]
            assert mat_eq(m, expect)


def test_z_expansion_matches_solve(small_ring):
    r = small_ring
    es = central_idempotents(r, A)
    z = None
    inv_lp = r.scalar(Fraction(1, r.ellprime))
    for k, e in enumerate(es):
        t = e.scale(modified_dimension(r, A, k) * inv_lp)
        z = t if z is None else z + t
    assert z == solve_z(r, A)


def test_modified_dimension_closed_form_even():
    for ell in (4, 6):
        r = get_ring(ell)
        for col in (Fraction(1, 2), Fraction(2, 3), Fraction(6, 5)):
            a = Color(col)
            for k in range(r.ellprime):
                got = modified_dimension(r, a, k)
                want = modified_dimension_formula(r, a, k)
                assert (got - want).is_zero()


def test_quantum_dimension_vanishes_even():
    for ell in (4, 6):
        r = get_ring(ell)
        for k in range(r.ellprime):
            assert quantum_dimension(r, A, k).is_zero()


def test_two_pipeline_unknot(small_ring):
    from hvsl2.diagrams import braid_closure_diagram
    r = small_ring
    d = braid_closure_diagram(r, [], [A], 1)
    for k in range(r.ellprime):
        vj, vd = rep_evaluate_link(r, d, {0: k})
        assert (vj - vd).is_zero()


def test_two_pipeline_open_curl(ring4):
    from hvsl2.diagrams import curl_pair
    r = ring4
    dr, dl = curl_pair(r, Fraction(1, 3))
    for k in range(r.ellprime):
        mj, md = rep_evaluate_tangle(r, dr, {0: k})
        assert mat_eq(mj, md)
        assert any(not v.is_zero() for row in mj for v in row)
        mj, md = rep_evaluate_tangle(r, dl, {0: k})
        assert mat_eq(mj, md)


def test_two_pipeline_cut_hopf_nonzero(ring4):
    from hvsl2.diagrams import braid_closure_diagram, cut_component
    r = ring4
    h = braid_closure_diagram(r, [(0, "x+")] * 2, [Fraction(1, 3), Fraction(2, 3)], 2)
    tr = h.validate()
    seg = max(((b, p) for (b, p), c in tr.seg_comp.items()
               if c == 0 and p == tr.widths[b] - 1), key=lambda s: s[0])
    th = cut_component(h, 0, segment=seg)
    mj, md = rep_evaluate_tangle(r, th, {0: 0, 1: 1})
    assert mat_eq(mj, md)
    assert any(not v.is_zero() for row in mj for v in row)


def test_morse_requires_upward_crossings(ring4):
    from hvsl2.diagrams import Component, Event, GDiagram
    r = ring4
    rows = [[Event("cup", 0)], [Event("x+", 0)], [Event("cap", 0)]]
    d = GDiagram(r, rows, [Component(A)])
    from hvsl2.diagrams import DiagramError
    with pytest.raises(DiagramError):
        morse_module_evaluate(r, d, {0: 0})
