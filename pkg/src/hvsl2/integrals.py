"""Symmetrized integral, central elements z_a, modified integral, partial
traces and the compatibility checks.

In reduced PBW coordinates the symmetrized integral is simply

    mu_a( E^(ell'-1) F^(ell'-1) K^0 ) = eta,   all other monomials -> 0:

the phase xi^(n*ell*a/2) attached to K-exponents in (ell/2)Z is already
folded into the coefficient by gamma reduction, and non-lattice exponents
never reduce to 0.  The modified integral on admissible colors is
mu'_a = mu_a composed with left multiplication by the central element z_a
solving tr(L_{z_a x}) = mu_a(x) on the finite subalgebra.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable

from .linalg import SingularSystemError, solve_square
from .pbw import (AlgElem, Color, GradeError, Monomial, TensorElem,
                  in_commutant, pivot, pivot_inv, tensor_from_factors,
                  tilde_basis, unit)
from .ribbon import twist, twist_inv
from .scalars import RootData, Scalar


class NonAdmissibleColorError(ValueError):
    """Raised for modified-integral operations at colors 0 or 1 mod 2Z."""


class DegenerateTwistError(ArithmeticError):
    """Raised when mu_0(g theta) mu_0(g^-1 theta^-1) = 0 (ell in 8Z)."""


def mu(ring: RootData, a, x: AlgElem) -> Scalar:
    """The symmetrized integral of grade a."""
    a = Color(a)
    if x.grade != a:
        raise GradeError("mu grade mismatch")
    lp = ring.ellprime
    return x.coeff(Monomial(lp - 1, lp - 1, Fraction(0))) * ring.eta


def mu_functional(ring: RootData, a) -> Callable[[AlgElem], Scalar]:
    a = Color(a)
    return lambda x: mu(ring, a, x)


def _trace_left_table(ring: RootData, a: Color) -> dict:
    """tr(L_m) over the finite subalgebra for each basis monomial m."""
    key = ("trL", a)
    val = ring.cache.get(key)
    if val is not None:
        return val
    basis = tilde_basis(ring)
    table = {m: ring.zero for m in basis}
    for b in basis:
        belem = AlgElem(ring, a, {b: ring.one}, clean=False)
        for m in basis:
            if m.weight() != 0:
                continue  # weight-graded: only weight 0 contributes to traces
            prod = AlgElem(ring, a, {m: ring.one}, clean=False) * belem
            c = prod.coeff(b)
            if not c.is_zero():
                table[m] = table[m] + c
    ring.cache[key] = table
    return table


def trace_left(ring: RootData, a, y: AlgElem) -> Scalar:
    """Trace of left multiplication by y on the finite subalgebra."""
    a = Color(a)
    table = _trace_left_table(ring, a)
    s = ring.zero
    for m, c in y.terms.items():
        t = table.get(m)
        if t is None:
            raise GradeError("trace_left needs integral K-exponents")
        s = s + c * t
    return s


def solve_z(ring: RootData, a) -> AlgElem:
    """The central element with tr(L_{z x}) = mu(x) on every basis monomial,
    obtained from the trace linear system (organized by weight blocks).
    A singular system signals a non-semisimple grade (colors 0 and 1)."""
    a = Color(a)
    key = ("z", a)
    val = ring.cache.get(key)
    if val is not None:
        return val
    basis = tilde_basis(ring)
    trL = _trace_left_table(ring, a)
    lp = ring.ellprime
    by_weight: dict[int, list[int]] = {}
    for idx, m in enumerate(basis):
        by_weight.setdefault(m.weight(), []).append(idx)
    top = Monomial(lp - 1, lp - 1, Fraction(0))
    coeffs = [ring.zero] * len(basis)
    for w, eq_idx in by_weight.items():
        unk_idx = by_weight[-w]
        A = []
        rhs = []
        for i in eq_idx:
            xi_elem = AlgElem(ring, a, {basis[i]: ring.one}, clean=False)
            row = []
            for j in unk_idx:
                prod = AlgElem(ring, a, {basis[j]: ring.one}, clean=False) * xi_elem
                s = ring.zero
                for m, c in prod.terms.items():
                    s = s + c * trL[m]
                row.append(s)
            A.append(row)
            rhs.append(ring.eta if basis[i] == top else ring.zero)
        try:
            sol = solve_square(A, rhs, ring)
        except SingularSystemError as exc:
            raise SingularSystemError(
                f"trace system singular at color {a}: non-semisimple grade") from exc
        for j, s in zip(unk_idx, sol):
            coeffs[j] = s
    z = AlgElem(ring, a, {basis[j]: coeffs[j] for j in range(len(basis))})
    ring.cache[key] = z
    return z


def mu_mod(ring: RootData, a, x: AlgElem) -> Scalar:
    """The modified integral mu'_a = mu_a after left multiplication by z_a;
    only admissible colors (outside {0,1}) are accepted."""
    a = Color(a)
    if not a.in_Gprime():
        raise NonAdmissibleColorError(f"color {a} is not in G'")
    if x.grade != a:
        raise GradeError("mu_mod grade mismatch")
    return mu(ring, a, solve_z(ring, a) * x)


def mu_mod_functional(ring: RootData, a) -> Callable[[AlgElem], Scalar]:
    a = Color(a)
    z = solve_z(ring, a)
    return lambda x: mu(ring, a, z * x)


# ---------------------------------------------------------------------------
# integral axioms


def right_integral_holds(ring: RootData, a, b, x: AlgElem) -> bool:
    """(mu_a (x) g_b . ) Delta_{a,b}(x) = mu_{a+b}(x) 1_b."""
    from .pbw import coproduct
    a, b = Color(a), Color(b)
    t = coproduct(x, a, b)
    w = t.contract_at(0, mu_functional(ring, a)).factor()
    lhs = pivot(ring, b) * w
    return lhs == unit(ring, b).scale(mu(ring, a + b, x))


def cyclicity_holds(ring: RootData, a, x: AlgElem, y: AlgElem) -> bool:
    return (mu(ring, a, x * y) - mu(ring, a, y * x)).is_zero()


def antipode_invariance_holds(ring: RootData, a, x: AlgElem) -> bool:
    from .pbw import antipode
    return (mu(ring, -Color(a), antipode(x)) - mu(ring, a, x)).is_zero()


def check_integral_axioms(ring: RootData, a, b, samples: int, rng) -> list[str]:
    """Run the three integral axioms on random coset elements; returns the
    list of failure descriptions (empty = all pass)."""
    from .pbw import random_coset_offset, random_elem
    a, b = Color(a), Color(b)
    failures = []
    for i in range(samples):
        qa = random_coset_offset(ring, a + b, rng)
        x = random_elem(ring, a + b, rng, coset=qa)
        if not right_integral_holds(ring, a, b, x):
            failures.append(f"right-integral failed on sample {i}: {x!r}")
        q = random_coset_offset(ring, a, rng)
        u = random_elem(ring, a, rng, coset=q)
        v = random_elem(ring, a, rng, coset=-q)
        if not cyclicity_holds(ring, a, u, v):
            failures.append(f"cyclicity failed on sample {i}")
        if not antipode_invariance_holds(ring, a, u):
            failures.append(f"antipode-invariance failed on sample {i}")
    return failures


# ---------------------------------------------------------------------------
# twist nondegeneracy


def delta_pm(ring: RootData) -> tuple[Scalar, Scalar]:
    """delta_+ = mu_0(g theta_0), delta_- = mu_0(g^-1 theta_0^-1); raises on
    degenerate twist (exactly when ell is a multiple of 8)."""
    key = ("delta_pm",)
    val = ring.cache.get(key)
    if val is None:
        z = Color(0)
        dp = mu(ring, z, pivot(ring, z) * twist(ring, z))
        dm = mu(ring, z, pivot_inv(ring, z) * twist_inv(ring, z))
        val = (dp, dm)
        ring.cache[key] = val
    dp, dm = val
    if (dp * dm).is_zero():
        raise DegenerateTwistError(
            f"twist-degenerate ring at ell={ring.ell} (ell in 8Z)")
    return val


def delta_raw(ring: RootData) -> tuple[Scalar, Scalar]:
    """Like delta_pm but without the nondegeneracy gate (for reporting)."""
    try:
        return delta_pm(ring)
    except DegenerateTwistError:
        return ring.cache[("delta_pm",)]


# Empirical proportionality between the first-principles mu_0(g theta_0) and
# the closed Gauss-sum form with lambda = eta, determined once at ell = 4 and
# asserted across ell by the acceptance suite.
GAUSS_SUM_NORMALIZATION = Fraction(1)


def delta_closed_form(ring: RootData) -> Scalar:
    """The closed Gauss-sum expression for mu_0(g theta_0) with lambda = eta
    times the frozen normalization constant."""
    lp = ring.ellprime
    sign = ring.one if (ring.ell + 1) % 2 == 0 else -ring.one
    gauss = ring.zero
    for k in range(lp):
        gauss = gauss + ring.xi_pow(2 * k * k + 2 * k)
    val = ring.eta * sign * ring.xi_pow(-1) * ring.scalar(Fraction(1, lp * lp)) \
        * (ring.qint(1) ** (2 * lp - 2)) * gauss
    return val * ring.scalar(GAUSS_SUM_NORMALIZATION)


# ---------------------------------------------------------------------------
# partial traces of operators on the finite tensor square


def partial_trace_right(ring: RootData, a, b,
                        f: Callable[[Monomial, Monomial], TensorElem]
                        ) -> Callable[[AlgElem], AlgElem]:
    """Right partial trace of an operator on Utilde_a (x) Utilde_b given by
    its action on basis monomial pairs."""
    a, b = Color(a), Color(b)
    basis = tilde_basis(ring)

    def op(v: AlgElem) -> AlgElem:
        out: dict = {}
        for m, c in v.terms.items():
            for w in basis:
                img = f(m, w)
                for (k1, k2), s in img.terms.items():
                    if k2 == w:
                        nc = out.get(k1)
                        nc = c * s if nc is None else nc + c * s
                        if nc.is_zero():
                            out.pop(k1, None)
                        else:
                            out[k1] = nc
        return AlgElem(ring, a, out, clean=False)

    return op


def partial_trace_left(ring: RootData, a, b,
                       f: Callable[[Monomial, Monomial], TensorElem]
                       ) -> Callable[[AlgElem], AlgElem]:
    a, b = Color(a), Color(b)
    basis = tilde_basis(ring)

    def op(v: AlgElem) -> AlgElem:
        out: dict = {}
        for m, c in v.terms.items():
            for w in basis:
                img = f(w, m)
                for (k1, k2), s in img.terms.items():
                    if k1 == w:
                        nc = out.get(k2)
                        nc = c * s if nc is None else nc + c * s
                        if nc.is_zero():
                            out.pop(k2, None)
                        else:
                            out[k2] = nc
        return AlgElem(ring, b, out, clean=False)

    return op


def operator_trace(ring: RootData, a, op: Callable[[AlgElem], AlgElem]) -> Scalar:
    a = Color(a)
    s = ring.zero
    for m in tilde_basis(ring):
        img = op(AlgElem(ring, a, {m: ring.one}, clean=False))
        s = s + img.coeff(m)
    return s


def left_mul_operator(xt: TensorElem) -> Callable[[Monomial, Monomial], TensorElem]:
    ring = xt.ring

    def f(m1: Monomial, m2: Monomial) -> TensorElem:
        v = TensorElem(ring, xt.grades, {(m1, m2): ring.one}, clean=False)
        return xt * v

    return f


# ---------------------------------------------------------------------------
# ambidexterity, modified-integral compatibility, equivariance


def check_ambidexterity(ring: RootData, a, b, xt: TensorElem,
                        generic: bool = False) -> bool:
    """mu_a(ptr_right((id (x) L_g) L_xt)(1_a)) =
    mu_b(ptr_left((L_{g^-1} (x) id) L_xt)(1_b)) for module-morphism L_xt.

    For left multiplications the partial trace contracts exactly:
    ptr_right((id (x) L_g) L_xt)(1) = sum xt' tr(L_{g xt''}), and likewise on
    the left, so the default path pairs each tensor term against the trace
    table; ``generic=True`` forces the basis-sweep partial-trace operators
    (the two routes are compared in the tests)."""
    a, b = Color(a), Color(b)
    if not in_commutant(xt):
        raise GradeError("ambidexterity requires a commutant element")
    gb = pivot(ring, b)
    gai = pivot_inv(ring, a)
    from .pbw import is_integral_gamma
    integral = all(is_integral_gamma(ring, m.gamma)
                   for k in xt.terms for m in k)
    if not integral or generic:
        base = left_mul_operator(xt)

        def f_right(m1, m2):
            return base(m1, m2).left_mul_at(1, gb)

        def f_left(m1, m2):
            return base(m1, m2).left_mul_at(0, gai)

        lhs = mu(ring, a, partial_trace_right(ring, a, b, f_right)(unit(ring, a)))
        rhs = mu(ring, b, partial_trace_left(ring, a, b, f_left)(unit(ring, b)))
        return (lhs - rhs).is_zero()
    lhs = ring.zero
    rhs = ring.zero
    for (m1, m2), c in xt.terms.items():
        e1 = AlgElem(ring, a, {m1: ring.one}, clean=False)
        e2 = AlgElem(ring, b, {m2: ring.one}, clean=False)
        lhs = lhs + c * mu(ring, a, e1) * trace_left(ring, b, gb * e2)
        rhs = rhs + c * trace_left(ring, a, gai * e1) * mu(ring, b, e2)
    return (lhs - rhs).is_zero()


def check_mod_compat(ring: RootData, a, b, xt: TensorElem) -> bool:
    """mu_a L_{g^-1} (x) mu'_b = mu'_a (x) mu_b L_g on commutant elements."""
    a, b = Color(a), Color(b)
    if not (a.in_Gprime() and b.in_Gprime()):
        raise NonAdmissibleColorError("mod-compat needs admissible colors")
    if not in_commutant(xt):
        raise GradeError("mod-compat requires a commutant element")
    gai = pivot_inv(ring, a)
    gb = pivot(ring, b)
    mua = mu_functional(ring, a)
    mub = mu_functional(ring, b)
    mpa = mu_mod_functional(ring, a)
    mpb = mu_mod_functional(ring, b)
    lhs = xt.contract_at(0, lambda x: mua(gai * x)).contract_at(0, mpb)
    rhs = xt.contract_at(0, mpa).contract_at(0, lambda y: mub(gb * y))
    return (lhs - rhs).is_zero()


def check_equivariance(xt: TensorElem) -> bool:
    """Contracting the first leg with mu L_{g^-1} (or the last with mu L_g)
    keeps the element in the commutant of the remaining legs."""
    ring = xt.ring
    if not in_commutant(xt):
        raise GradeError("equivariance check requires a commutant element")
    a1 = xt.grades[0]
    an = xt.grades[-1]
    gai = pivot_inv(ring, a1)
    gn = pivot(ring, an)
    mua = mu_functional(ring, a1)
    mun = mu_functional(ring, an)
    first = xt.contract_at(0, lambda x: mua(gai * x))
    last = xt.contract_at(xt.nlegs - 1, lambda x: mun(gn * x))
    ok = True
    if isinstance(first, TensorElem):
        ok = ok and in_commutant(first)
    if isinstance(last, TensorElem):
        ok = ok and in_commutant(last)
    return ok


def commutant_samples(ring: RootData, a, b, count: int, rng) -> list[TensorElem]:
    """A generated family of commutant elements: the unit, z_a (x) z_b,
    coproducts of central elements and of their products, and (while the
    center is small) (z_a (x) z_b) Delta(c)."""
    from .pbw import center_basis, coproduct
    a, b = Color(a), Color(b)
    out = [tensor_from_factors(unit(ring, a), unit(ring, b))]
    za, zb = solve_z(ring, a), solve_z(ring, b)
    zz = tensor_from_factors(za, zb)
    out.append(zz)
    cb = center_basis(ring, a + b)
    for c in cb:
        out.append(coproduct(c, a, b))
        if len(cb) <= 3:
            out.append(zz * coproduct(c, a, b))
        if len(out) >= count:
            return out[:count]
    i = 0
    while len(out) < count and i < 3 * count:
        c1 = cb[rng.randrange(len(cb))]
        c2 = cb[rng.randrange(len(cb))]
        out.append(coproduct(c1 * c2, a, b))
        i += 1
    return out[:count]
