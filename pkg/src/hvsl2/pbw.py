"""The graded PBW algebras at a root of unity and their Hopf operations.

For each color a in C/2Z the algebra carries generators E, F, K^gamma with

    K^g E K^-g = xi^2g E,   K^g F K^-g = xi^-2g F,
    [E, F] = (K - K^-1)/(xi - xi^-1),   E^ell' = F^ell' = 0,
    K^(ell/2) = xi^(ell*a/2)  (the grade-a quotient relation)

and elements are kept in PBW normal form: finitely supported sums of
monomials E^nE F^nF K^gamma with 0 <= nE, nF < ell' and the real part of
gamma reduced into [0, ell/2).  The finite subalgebra generated by E, F, K
has dimension ell'^3; its reduced K-exponents form the lattice returned by
:func:`gamma_lattice`.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Callable, NamedTuple

from .linalg import SparseEchelon, nullspace
from .scalars import RootData, Scalar

_F0 = Fraction(0)
_F1 = Fraction(1)


class GradeError(ValueError):
    pass


# ---------------------------------------------------------------------------
# colors


class Color:
    """An element of C/2Z; rational values stay exact (reduced into [0,2))."""

    __slots__ = ("v",)

    def __init__(self, v):
        if isinstance(v, Color):
            self.v = v.v
        elif isinstance(v, (int, Fraction)):
            self.v = Fraction(v) % 2
        else:
            z = complex(v)
            self.v = complex(z.real % 2.0, z.imag)

    @property
    def is_rational(self) -> bool:
        return isinstance(self.v, Fraction)

    def lift(self):
        """The canonical representative with real part in [0, 2)."""
        return self.v

    def half(self):
        """Canonical lift of a/2 used when building R-matrices."""
        return self.v / 2

    def in_Gprime(self) -> bool:
        return self.v != 0 and self.v != 1

    def __add__(self, other):
        return Color(self.v + Color(other).v)

    __radd__ = __add__

    def __neg__(self):
        return Color(-self.v)

    def __sub__(self, other):
        return Color(self.v - Color(other).v)

    def __eq__(self, other):
        if not isinstance(other, (Color, int, Fraction, float, complex)):
            return NotImplemented
        return self.v == Color(other).v

    def __hash__(self):
        return hash(self.v)

    def __repr__(self):
        return f"Color({self.v})"

    def __str__(self):
        return str(self.v)


ZERO_COLOR = Color(0)


def color_sum(colors) -> Color:
    out = Color(0)
    for c in colors:
        out = out + c
    return out


# ---------------------------------------------------------------------------
# monomials and gamma reduction


class Monomial(NamedTuple):
    nE: int
    nF: int
    gamma: object  # Fraction (exact lane) or complex

    def weight(self) -> int:
        return 2 * (self.nE - self.nF)

    def __str__(self):
        bits = []
        if self.nE:
            bits.append("E" if self.nE == 1 else f"E^{self.nE}")
        if self.nF:
            bits.append("F" if self.nF == 1 else f"F^{self.nF}")
        if self.gamma != 0:
            bits.append("K" if self.gamma == 1 else f"K^({self.gamma})")
        return " ".join(bits) if bits else "1"


ONE_MON = Monomial(0, 0, _F0)


def reduce_gamma(ring: RootData, a: Color, gamma):
    """Reduce the real part of gamma into [0, ell/2).

    Returns (reduced gamma, coefficient or None); removing one unit of ell/2
    multiplies the coefficient by xi^(ell*a/2).
    """
    half = Fraction(ring.ell, 2)
    if isinstance(gamma, int):
        gamma = Fraction(gamma)
    if isinstance(gamma, Fraction):
        k = math.floor(gamma / half)
        if k == 0:
            return gamma, None
        return gamma - k * half, ring.xi_pow(k * half * a.lift())
    z = complex(gamma)
    k = math.floor(z.real / float(half))
    if k == 0:
        return gamma, None
    red = complex(z.real - k * float(half), z.imag)
    return red, ring.xi_pow(k * half * a.lift())


def gamma_lattice(ring: RootData) -> list[Fraction]:
    """Reduced K-exponents of the finite subalgebra: the ell' values that the
    integer powers K^0..K^(ell'-1) reduce to."""
    half = Fraction(ring.ell, 2)
    vals = sorted({Fraction(k) % half for k in range(ring.ellprime)})
    assert len(vals) == ring.ellprime
    return vals


def is_integral_gamma(ring: RootData, gamma) -> bool:
    """True iff a reduced exponent lies on the finite-subalgebra lattice."""
    if isinstance(gamma, int):
        return True
    if isinstance(gamma, Fraction):
        den = 2 if ring.ell % 2 else 1
        return (gamma * den).denominator == 1
    return False


def tilde_basis(ring: RootData) -> list[Monomial]:
    """PBW basis (ell'^3 monomials) of the finite subalgebra."""
    key = ("tilde_basis",)
    if key not in ring.cache:
        lat = gamma_lattice(ring)
        lp = ring.ellprime
        ring.cache[key] = [Monomial(e, f, g) for e in range(lp)
                           for f in range(lp) for g in lat]
    return ring.cache[key]


# ---------------------------------------------------------------------------
# free-word rewriting engine (single-step oracle and FE-table builder)


def word_normalize(ring: RootData, word: tuple, grade: Color | None,
                   coeff: Scalar | None = None, order: str = "left"):
    """Normalize a free word in the generators by single-step rewriting.

    ``word`` is a tuple of tokens "E", "F" or ("K", exponent).  With
    ``grade=None`` the K-exponents are left unreduced (the ungraded algebra);
    otherwise the grade-a quotient relation is applied.  ``order`` picks which
    reducible pair is rewritten first ("left", "right" or "random:<seed>"),
    used by the confluence tests.
    """
    if coeff is None:
        coeff = ring.one
    rng = None
    if order.startswith("random"):
        rng = random.Random(order.partition(":")[2] or 0)
    q1inv = ring.qint(1).inv()
    pending: dict[tuple, Scalar] = {tuple(word): coeff}
    out: dict[Monomial, Scalar] = {}
    while pending:
        w, c = pending.popitem()
        spots = _reducible_spots(w)
        if not spots:
            _emit_normal(ring, grade, w, c, out)
            continue
        if rng is not None:
            i = rng.choice(spots)
        elif order == "right":
            i = spots[-1]
        else:
            i = spots[0]
        x, y = w[i], w[i + 1]
        if x == "F" and y == "E":
            _acc_word(pending, w[:i] + ("E", "F") + w[i + 2:], c)
            _acc_word(pending, w[:i] + (("K", _F1),) + w[i + 2:], -(c * q1inv))
            _acc_word(pending, w[:i] + (("K", -_F1),) + w[i + 2:], c * q1inv)
        elif isinstance(x, tuple) and y in ("E", "F"):
            g = x[1]
            phase = ring.xi_pow(2 * g if y == "E" else -2 * g)
            _acc_word(pending, w[:i] + (y, x) + w[i + 2:], c * phase)
        else:  # two adjacent K powers
            g = x[1] + y[1]
            mid = (("K", g),) if g != 0 else ()
            _acc_word(pending, w[:i] + mid + w[i + 2:], c)
    return {m: c for m, c in out.items() if not c.is_zero()}


def _reducible_spots(w):
    spots = []
    for i in range(len(w) - 1):
        x, y = w[i], w[i + 1]
        if x == "F" and y == "E":
            spots.append(i)
        elif isinstance(x, tuple) and (y in ("E", "F") or isinstance(y, tuple)):
            spots.append(i)
    return spots


def _acc_word(pending, w, c):
    # strip K^0 tokens
    if any(isinstance(t, tuple) and t[1] == 0 for t in w):
        w = tuple(t for t in w if not (isinstance(t, tuple) and t[1] == 0))
    old = pending.get(w)
    nc = c if old is None else old + c
    if nc.is_zero():
        pending.pop(w, None)
    else:
        pending[w] = nc


def _emit_normal(ring, grade, w, c, out):
    nE = nF = 0
    gam = _F0
    for t in w:
        if t == "E":
            nE += 1
        elif t == "F":
            nF += 1
        else:
            gam = gam + t[1]
    if nE >= ring.ellprime or nF >= ring.ellprime:
        return
    if grade is not None:
        gam, rc = reduce_gamma(ring, grade, gam)
        if rc is not None:
            c = c * rc
    m = Monomial(nE, nF, gam)
    old = out.get(m)
    out[m] = c if old is None else old + c


def _fe_single(ring: RootData, e: int) -> dict:
    """Normal form of F E^e in the ungraded algebra, from the recursion
    F E^e = E (F E^(e-1)) - ((K - K^-1)/[1]) E^(e-1); validated against the
    single-step word engine in the tests."""
    key = ("FE1", e)
    tab = ring.cache.get(key)
    if tab is not None:
        return tab
    if e == 0:
        tab = {(0, 1, 0): ring.one}
    else:
        prev = _fe_single(ring, e - 1)
        acc: dict = {}
        for (a, b, dk), c in prev.items():
            if a + 1 < ring.ellprime:
                acc[(a + 1, b, dk)] = acc.get((a + 1, b, dk), ring.zero) + c
        q1i = ring.qint(1).inv()
        for dk, sgn, phase in ((1, -1, 2 * (e - 1)), (-1, 1, -2 * (e - 1))):
            c = ring.xi_pow(phase) * q1i
            if sgn < 0:
                c = -c
            k = (e - 1, 0, dk)
            acc[k] = acc.get(k, ring.zero) + c
        tab = {k: c for k, c in acc.items() if not c.is_zero()}
    ring.cache[key] = tab
    return tab


def fe_table(ring: RootData, f: int, e: int) -> dict:
    """Normal form of F^f E^e in the ungraded algebra (integer K-exponents)."""
    key = ("FE", f, e)
    tab = ring.cache.get(key)
    if tab is not None:
        return tab
    if f == 0 or e == 0:
        tab = {(e, f, 0): ring.one}
    else:
        prev = fe_table(ring, f - 1, e)
        acc: dict = {}
        for (a, b, dk), c in prev.items():
            # multiply one F on the left: F E^a F^b K^dk
            for (a2, b2, dk2), c2 in _fe_single(ring, a).items():
                nb = b2 + b
                if nb >= ring.ellprime:
                    continue
                cc = c * c2
                if dk2 and b:
                    cc = cc * ring.xi_pow(-2 * dk2 * b)
                k = (a2, nb, dk2 + dk)
                acc[k] = acc.get(k, ring.zero) + cc
        tab = {k: c for k, c in acc.items() if not c.is_zero()}
    ring.cache[key] = tab
    return tab


# ---------------------------------------------------------------------------
# algebra elements


def _clean(terms: dict) -> dict:
    return {m: c for m, c in terms.items() if not c.is_zero()}


class AlgElem:
    """A graded algebra element in PBW normal form."""

    __slots__ = ("ring", "grade", "terms")

    def __init__(self, ring: RootData, grade: Color, terms: dict, *, clean: bool = True):
        self.ring = ring
        self.grade = grade
        self.terms = _clean(terms) if clean else terms

    # construction helpers ---------------------------------------------------

    def _check(self, other: "AlgElem"):
        if self.ring is not other.ring:
            raise GradeError("elements from different rings")
        if self.grade != other.grade:
            raise GradeError(f"grade mismatch: {self.grade} vs {other.grade}")

    def __add__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for m, c in other.terms.items():
            nc = terms.get(m)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                terms.pop(m, None)
            else:
                terms[m] = nc
        return AlgElem(self.ring, self.grade, terms, clean=False)

    def __sub__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return AlgElem(self.ring, self.grade,
                       {m: -c for m, c in self.terms.items()}, clean=False)

    def scale(self, s) -> "AlgElem":
        s = self.ring.scalar(s) if not isinstance(s, Scalar) else s
        if s.is_zero():
            return AlgElem(self.ring, self.grade, {}, clean=False)
        return AlgElem(self.ring, self.grade,
                       {m: c * s for m, c in self.terms.items()}, clean=False)

    def __mul__(self, other):
        if isinstance(other, AlgElem):
            self._check(other)
            out: dict = {}
            for m1, c1 in self.terms.items():
                for m2, c2 in other.terms.items():
                    _mul_mon(self.ring, self.grade, m1, m2, c1 * c2, out)
            return AlgElem(self.ring, self.grade, out)
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, n: int):
        out = unit(self.ring, self.grade)
        for _ in range(n):
            out = out * self
        return out

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, AlgElem):
            return NotImplemented
        if self.grade != other.grade:
            return False
        return (self - other).is_zero()

    __hash__ = None

    def coeff(self, m: Monomial) -> Scalar:
        return self.terms.get(m, self.ring.zero)

    def is_integral(self) -> bool:
        """True iff the element lies in the finite subalgebra."""
        return all(is_integral_gamma(self.ring, m.gamma) for m in self.terms)

    def weights(self) -> set:
        return {m.weight() for m in self.terms}

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for m in sorted(self.terms, key=lambda m: (m.nE, m.nF, str(m.gamma))):
            bits.append(f"({self.terms[m]}) {m}")
        return " + ".join(bits)


def _mul_mon(ring: RootData, a: Color, m1: Monomial, m2: Monomial,
             coef: Scalar, out: dict) -> None:
    """Accumulate the PBW product of two normal monomials into ``out``."""
    e1, f1, g1 = m1
    e2, f2, g2 = m2
    lp = ring.ellprime
    # commutator terms lower nE and nF together, so these products vanish
    if (f1 == 0 and e1 + e2 >= lp) or (e2 == 0 and f1 + f2 >= lp):
        return
    base = coef
    if g1 != 0 and (e2 or f2):
        base = base * ring.xi_pow(2 * g1 * (e2 - f2))
    gam12 = g1 + g2
    for (de, df, dk), c in fe_table(ring, f1, e2).items():
        nE = e1 + de
        nF = df + f2
        if nE >= lp or nF >= lp:
            continue
        cc = base * c
        if dk != 0:
            if f2:
                cc = cc * ring.xi_pow(-2 * dk * f2)
            g = gam12 + dk
        else:
            g = gam12
        g, rc = reduce_gamma(ring, a, g)
        if rc is not None:
            cc = cc * rc
        key = Monomial(nE, nF, g)
        old = out.get(key)
        nc = cc if old is None else old + cc
        if nc.is_zero():
            out.pop(key, None)
        else:
            out[key] = nc


# element constructors -------------------------------------------------------


def from_terms(ring: RootData, a, terms: dict) -> AlgElem:
    """Build an element, reducing the supplied gammas into normal form."""
    a = Color(a)
    out: dict = {}
    for m, c in terms.items():
        if not isinstance(m, Monomial):
            m = Monomial(*m)
        c = c if isinstance(c, Scalar) else ring.scalar(c)
        g, rc = reduce_gamma(ring, a, m.gamma)
        if rc is not None:
            c = c * rc
        key = Monomial(m.nE, m.nF, g)
        old = out.get(key)
        out[key] = c if old is None else old + c
    return AlgElem(ring, a, out)


def unit(ring: RootData, a) -> AlgElem:
    return AlgElem(ring, Color(a), {ONE_MON: ring.one}, clean=False)


def zero_elem(ring: RootData, a) -> AlgElem:
    return AlgElem(ring, Color(a), {}, clean=False)


def gen_E(ring: RootData, a) -> AlgElem:
    return AlgElem(ring, Color(a), {Monomial(1, 0, _F0): ring.one}, clean=False)


def gen_F(ring: RootData, a) -> AlgElem:
    return AlgElem(ring, Color(a), {Monomial(0, 1, _F0): ring.one}, clean=False)


def gen_K(ring: RootData, a, gamma=1) -> AlgElem:
    return from_terms(ring, a, {Monomial(0, 0, gamma): ring.one})


def monomial_elem(ring: RootData, a, nE: int, nF: int, gamma, coeff=1) -> AlgElem:
    return from_terms(ring, a, {Monomial(nE, nF, gamma): ring.scalar(coeff)})


def pivot(ring: RootData, a) -> AlgElem:
    """The pivot K^(1-ell') in grade a, gamma-reduced."""
    return gen_K(ring, a, 1 - ring.ellprime)


def pivot_inv(ring: RootData, a) -> AlgElem:
    return gen_K(ring, a, ring.ellprime - 1)


# Hopf structure --------------------------------------------------------------


def counit(x: AlgElem) -> Scalar:
    """E, F -> 0 and K^gamma -> 1, on grade-0 elements."""
    if x.grade != ZERO_COLOR:
        raise GradeError("counit requires grade 0")
    s = x.ring.zero
    for m, c in x.terms.items():
        if m.nE == 0 and m.nF == 0:
            s = s + c
    return s


def antipode(x: AlgElem) -> AlgElem:
    """S(E) = -E K^-1, S(F) = -K F, S(K^g) = K^-g, anti-homomorphism; the
    result lives in the opposite grade."""
    ring = x.ring
    b = -x.grade
    out = zero_elem(ring, b)
    for m, c in x.terms.items():
        part = gen_K(ring, b, -m.gamma)
        if m.nF:
            part = part * _neg_gen_pow(ring, b, "KF", m.nF)
        if m.nE:
            part = part * _neg_gen_pow(ring, b, "EKi", m.nE)
        out = out + part.scale(c)
    return out


def _neg_gen_pow(ring: RootData, b: Color, kind: str, n: int) -> AlgElem:
    key = ("Spow", kind, b, n)
    val = ring.cache.get(key)
    if val is None:
        if kind == "KF":
            base = -(gen_K(ring, b, 1) * gen_F(ring, b))
        else:
            base = -(gen_E(ring, b) * gen_K(ring, b, -1))
        val = base ** n
        ring.cache[key] = val
    return val


def antipode_inv(y: AlgElem) -> AlgElem:
    """The inverse antipode: for y in grade b returns the x in grade -b with
    S(x) = y, namely g^-1 S_b(y) g computed in grade -b."""
    ring = y.ring
    b = -y.grade
    return pivot_inv(ring, b) * antipode(y) * pivot(ring, b)


def coproduct(x: AlgElem, a, b) -> "TensorElem":
    """Delta_{a,b} on grade a+b."""
    ring = x.ring
    a, b = Color(a), Color(b)
    if x.grade != a + b:
        raise GradeError("coproduct grades must sum to the element grade")
    out = tensor_zero(ring, (a, b))
    for m, c in x.terms.items():
        t = _delta_mon(ring, a, b, m)
        out = out + t.scale(c)
    return out


def _delta_mon(ring: RootData, a: Color, b: Color, m: Monomial) -> "TensorElem":
    key = ("dmon", a, b, m)
    val = ring.cache.get(key)
    if val is not None:
        return val
    t = _delta_gen_pow(ring, a, b, "E", m.nE) * _delta_gen_pow(ring, a, b, "F", m.nF)
    if m.gamma != 0:
        kk = tensor_from_factors(gen_K(ring, a, m.gamma), gen_K(ring, b, m.gamma))
        t = t * kk
    ring.cache[key] = t
    return t


def _delta_gen_pow(ring: RootData, a: Color, b: Color, gen: str, n: int) -> "TensorElem":
    key = ("dpow", gen, a, b, n)
    val = ring.cache.get(key)
    if val is None:
        if n == 0:
            val = tensor_unit(ring, (a, b))
        else:
            if gen == "E":
                base = tensor_from_factors(unit(ring, a), gen_E(ring, b)) + \
                    tensor_from_factors(gen_E(ring, a), gen_K(ring, b, 1))
            else:
                base = tensor_from_factors(gen_K(ring, a, -1), gen_F(ring, b)) + \
                    tensor_from_factors(gen_F(ring, a), unit(ring, b))
            val = _delta_gen_pow(ring, a, b, gen, n - 1) * base
        ring.cache[key] = val
    return val


def iterated_coproduct(x: AlgElem, colors) -> "TensorElem":
    """The (n-1)-fold coproduct Delta_{a1,...,an}; n = 1 is the identity."""
    colors = [Color(c) for c in colors]
    if x.grade != color_sum(colors):
        raise GradeError("colors must sum to the element grade")
    if len(colors) == 1:
        return as_tensor(x)
    t = as_tensor(x)
    for i in range(len(colors) - 1):
        t = t.coproduct_at(i, colors[i], color_sum(colors[i + 1:]))
    return t


# ---------------------------------------------------------------------------
# tensor elements


class TensorElem:
    """An element of a tensor product of graded algebras, one factor per leg."""

    __slots__ = ("ring", "grades", "terms")

    def __init__(self, ring: RootData, grades: tuple, terms: dict, *, clean: bool = True):
        self.ring = ring
        self.grades = tuple(grades)
        self.terms = _clean(terms) if clean else terms

    @property
    def nlegs(self) -> int:
        return len(self.grades)

    def _check(self, other: "TensorElem"):
        if self.ring is not other.ring or self.grades != other.grades:
            raise GradeError("tensor grade mismatch")

    def __add__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        self._check(other)
        terms = dict(self.terms)
        for k, c in other.terms.items():
            nc = terms.get(k)
            nc = c if nc is None else nc + c
            if nc.is_zero():
                terms.pop(k, None)
            else:
                terms[k] = nc
        return TensorElem(self.ring, self.grades, terms, clean=False)

    def __sub__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        return self + (-other)

    def __neg__(self):
        return TensorElem(self.ring, self.grades,
                          {k: -c for k, c in self.terms.items()}, clean=False)

    def scale(self, s) -> "TensorElem":
        s = self.ring.scalar(s) if not isinstance(s, Scalar) else s
        if s.is_zero():
            return tensor_zero(self.ring, self.grades)
        return TensorElem(self.ring, self.grades,
                          {k: c * s for k, c in self.terms.items()}, clean=False)

    def __mul__(self, other):
        """Factorwise product."""
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        if not isinstance(other, TensorElem):
            return NotImplemented
        self._check(other)
        n = self.nlegs
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                parts = [None] * n
                for i in range(n):
                    acc: dict = {}
                    _mul_mon(self.ring, self.grades[i], k1[i], k2[i],
                             self.ring.one, acc)
                    if not acc:
                        parts = None
                        break
                    parts[i] = acc
                if parts is None:
                    continue
                base = c1 * c2
                _expand_into(out, parts, base)
        return TensorElem(self.ring, self.grades, out)

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if not isinstance(other, TensorElem):
            return NotImplemented
        if self.grades != other.grades:
            return False
        return (self - other).is_zero()

    __hash__ = None

    # leg surgery -------------------------------------------------------------

    def tensor(self, other: "TensorElem") -> "TensorElem":
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                out[k1 + k2] = c1 * c2
        return TensorElem(self.ring, self.grades + other.grades, out, clean=False)

    def permute(self, perm) -> "TensorElem":
        """New tensor with leg i holding old leg perm[i]."""
        grades = tuple(self.grades[p] for p in perm)
        terms = {}
        for k, c in self.terms.items():
            nk = tuple(k[p] for p in perm)
            old = terms.get(nk)
            terms[nk] = c if old is None else old + c
        return TensorElem(self.ring, grades, terms)

    def flip(self) -> "TensorElem":
        """tau: x tensor y -> y tensor x (two legs)."""
        return self.permute((1, 0))

    def insert_unit(self, i: int, color) -> "TensorElem":
        color = Color(color)
        grades = self.grades[:i] + (color,) + self.grades[i:]
        terms = {k[:i] + (ONE_MON,) + k[i:]: c for k, c in self.terms.items()}
        return TensorElem(self.ring, grades, terms, clean=False)

    def embed(self, n: int, positions: tuple, colors) -> "TensorElem":
        """Place the legs at the given positions among n legs, units elsewhere,
        with the supplied grades for the unit legs."""
        colors = [Color(c) for c in colors]
        grades = list(colors)
        for leg, p in enumerate(positions):
            grades[p] = self.grades[leg]
        out = {}
        for k, c in self.terms.items():
            key = [ONE_MON] * n
            for leg, p in enumerate(positions):
                key[p] = k[leg]
            out[tuple(key)] = c
        return TensorElem(self.ring, tuple(grades), out, clean=False)

    def apply_at(self, i: int, f: Callable[[AlgElem], AlgElem],
                 new_grade=None) -> "TensorElem":
        """Apply a linear map to leg i (e.g. an antipode or left multiplication)."""
        ring = self.ring
        cache: dict = {}
        sample_grade = None
        out: dict = {}
        for k, c in self.terms.items():
            img = cache.get(k[i])
            if img is None:
                img = f(AlgElem(ring, self.grades[i], {k[i]: ring.one}, clean=False))
                cache[k[i]] = img
            sample_grade = img.grade
            for m, mc in img.terms.items():
                nk = k[:i] + (m,) + k[i + 1:]
                nc = out.get(nk)
                nc = c * mc if nc is None else nc + c * mc
                if nc.is_zero():
                    out.pop(nk, None)
                else:
                    out[nk] = nc
        if new_grade is None:
            new_grade = sample_grade if sample_grade is not None else self.grades[i]
        grades = self.grades[:i] + (Color(new_grade),) + self.grades[i + 1:]
        return TensorElem(ring, grades, out, clean=False)

    def coproduct_at(self, i: int, a, b) -> "TensorElem":
        ring = self.ring
        a, b = Color(a), Color(b)
        if self.grades[i] != a + b:
            raise GradeError("coproduct grades must sum to the leg grade")
        grades = self.grades[:i] + (a, b) + self.grades[i + 1:]
        out: dict = {}
        for k, c in self.terms.items():
            dm = _delta_mon(ring, a, b, k[i])
            for dk, dc in dm.terms.items():
                nk = k[:i] + dk + k[i + 1:]
                nc = out.get(nk)
                nc = c * dc if nc is None else nc + c * dc
                if nc.is_zero():
                    out.pop(nk, None)
                else:
                    out[nk] = nc
        return TensorElem(ring, grades, out, clean=False)

    def contract_at(self, i: int, functional: Callable[[AlgElem], Scalar]):
        """Apply a linear functional to leg i; returns a TensorElem with one
        fewer leg, or a Scalar when no leg remains."""
        ring = self.ring
        cache: dict = {}
        if self.nlegs == 1:
            s = ring.zero
            for k, c in self.terms.items():
                v = cache.get(k[i])
                if v is None:
                    v = functional(AlgElem(ring, self.grades[i], {k[i]: ring.one},
                                           clean=False))
                    cache[k[i]] = v
                s = s + c * v
            return s
        grades = self.grades[:i] + self.grades[i + 1:]
        out: dict = {}
        for k, c in self.terms.items():
            v = cache.get(k[i])
            if v is None:
                v = functional(AlgElem(ring, self.grades[i], {k[i]: ring.one},
                                       clean=False))
                cache[k[i]] = v
            nk = k[:i] + k[i + 1:]
            nc = out.get(nk)
            nc = c * v if nc is None else nc + c * v
            if nc.is_zero():
                out.pop(nk, None)
            else:
                out[nk] = nc
        return TensorElem(ring, grades, out)

    def factor(self, i: int = 0) -> AlgElem:
        """Projection usable only on single-leg tensors."""
        if self.nlegs != 1:
            raise GradeError("factor() needs a single-leg tensor")
        return AlgElem(self.ring, self.grades[0],
                       {k[0]: c for k, c in self.terms.items()}, clean=False)

    def left_mul_at(self, i: int, y: AlgElem) -> "TensorElem":
        return self.apply_at(i, lambda x: y * x, self.grades[i])

    def right_mul_at(self, i: int, y: AlgElem) -> "TensorElem":
        return self.apply_at(i, lambda x: x * y, self.grades[i])

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for k in sorted(self.terms, key=lambda k: tuple((m.nE, m.nF, str(m.gamma)) for m in k)):
            mon = " (x) ".join(str(m) for m in k)
            bits.append(f"({self.terms[k]}) {mon}")
        return " + ".join(bits)


def _expand_into(out: dict, parts: list, base: Scalar):
    keys = [()]
    coefs = [base]
    for acc in parts:
        nkeys = []
        ncoefs = []
        for k, c in zip(keys, coefs):
            for m, mc in acc.items():
                nkeys.append(k + (m,))
                ncoefs.append(c * mc)
        keys, coefs = nkeys, ncoefs
    for k, c in zip(keys, coefs):
        old = out.get(k)
        nc = c if old is None else old + c
        if nc.is_zero():
            out.pop(k, None)
        else:
            out[k] = nc


def tensor_zero(ring: RootData, grades) -> TensorElem:
    return TensorElem(ring, tuple(Color(g) for g in grades), {}, clean=False)


def tensor_unit(ring: RootData, grades) -> TensorElem:
    grades = tuple(Color(g) for g in grades)
    return TensorElem(ring, grades, {(ONE_MON,) * len(grades): ring.one}, clean=False)


def tensor_from_factors(*factors: AlgElem) -> TensorElem:
    ring = factors[0].ring
    out = TensorElem(ring, (factors[0].grade,),
                     {(m,): c for m, c in factors[0].terms.items()}, clean=False)
    for f in factors[1:]:
        out = out.tensor(TensorElem(ring, (f.grade,),
                                    {(m,): c for m, c in f.terms.items()}, clean=False))
    return out


def as_tensor(x: AlgElem) -> TensorElem:
    return TensorElem(x.ring, (x.grade,), {(m,): c for m, c in x.terms.items()},
                      clean=False)


# ---------------------------------------------------------------------------
# commutants, centers, Hochschild degree zero


def in_commutant(xt: TensorElem) -> bool:
    """Does xt commute with the iterated coproduct of E, F and K?

    Generators suffice: the iterated coproduct is an algebra map, and the
    working exponent lattices are generated by K.
    """
    ring = xt.ring
    total = color_sum(xt.grades)
    for gen in (gen_E(ring, total), gen_F(ring, total), gen_K(ring, total, 1)):
        d = iterated_coproduct(gen, xt.grades)
        if not (xt * d - d * xt).is_zero():
            return False
    return True


def center_basis(ring: RootData, a) -> list[AlgElem]:
    """Basis of the centralizer of {E, F, K} inside the finite subalgebra."""
    a = Color(a)
    key = ("center", a)
    val = ring.cache.get(key)
    if val is not None:
        return val
    lat = gamma_lattice(ring)
    lp = ring.ellprime
    # [x, K] = 0 forces weight zero, so restrict to E^n F^n K^gamma
    basis = [Monomial(n, n, g) for n in range(lp) for g in lat]
    E = gen_E(ring, a)
    F = gen_F(ring, a)
    rows_index: dict[Monomial, int] = {}
    cols = []
    for bm in basis:
        x = AlgElem(ring, a, {bm: ring.one}, clean=False)
        cx = x * E - E * x
        cf = x * F - F * x
        col: dict[int, Scalar] = {}
        for src, elem in ((0, cx), (1, cf)):
            for m, c in elem.terms.items():
                mk = (src, m)
                if mk not in rows_index:
                    rows_index[mk] = len(rows_index)
                col[rows_index[mk]] = c
        cols.append(col)
    nrows = len(rows_index)
    mat = [[ring.zero] * len(basis) for _ in range(nrows)]
    for j, col in enumerate(cols):
        for i, c in col.items():
            mat[i][j] = c
    kernel = nullspace(mat, ring, ncols=len(basis)) if nrows else \
        [[ring.one if i == j else ring.zero for i in range(len(basis))]
         for j in range(len(basis))]
    out = []
    for vec in kernel:
        terms = {basis[j]: vec[j] for j in range(len(basis)) if not vec[j].is_zero()}
        out.append(AlgElem(ring, a, terms, clean=False))
    ring.cache[key] = out
    return out


class HH0Basis:
    """Echelonized commutator span of the finite subalgebra, giving canonical
    coordinates in a complement of [A, A]."""

    def __init__(self, ring: RootData, a):
        self.ring = ring
        self.a = Color(a)
        self.echelon = SparseEchelon(ring)
        basis = tilde_basis(ring)
        elems = [AlgElem(ring, self.a, {m: ring.one}, clean=False) for m in basis]
        for i in range(len(basis)):
            for j in range(i + 1, len(basis)):
                if basis[i].nE == basis[i].nF == 0 and basis[j].nE == basis[j].nF == 0:
                    continue  # K powers commute
                comm = elems[i] * elems[j] - elems[j] * elems[i]
                if comm.terms:
                    self.echelon.add(dict(comm.terms))

    @property
    def commutator_dim(self) -> int:
        return self.echelon.rank

    def reduce(self, x: AlgElem) -> dict:
        """Coordinates of x in the canonical complement of [A, A]."""
        if x.grade != self.a:
            raise GradeError("grade mismatch")
        if not x.is_integral():
            raise GradeError("hh0 reduction needs integral K-exponents")
        return self.echelon.residual(dict(x.terms))


def hh0_basis(ring: RootData, a) -> HH0Basis:
    a = Color(a)
    key = ("hh0", a)
    val = ring.cache.get(key)
    if val is None:
        val = HH0Basis(ring, a)
        ring.cache[key] = val
    return val


def hh0_reduce(x: AlgElem) -> dict:
    return hh0_basis(x.ring, x.grade).reduce(x)


# ---------------------------------------------------------------------------
# random sampling (property tests and the check suites)


def random_elem(ring: RootData, a, rng: random.Random, nterms: int = 3,
                coset=None) -> AlgElem:
    """Random element of grade a; ``coset`` shifts all K-exponents."""
    a = Color(a)
    lp = ring.ellprime
    if coset is None:
        coset = _F0
    terms: dict = {}
    for _ in range(nterms):
        m = Monomial(rng.randrange(lp), rng.randrange(lp),
                     Fraction(coset) + rng.randrange(lp))
        c = ring.scalar(Fraction(rng.randrange(-4, 5), rng.randrange(1, 4)))
        if rng.random() < 0.4:
            c = c * ring.xi_pow(Fraction(rng.randrange(2 * ring.ell), 2))
        terms[m] = terms.get(m, ring.zero) + c
    return from_terms(ring, a, terms)


def random_coset_offset(ring: RootData, a, rng: random.Random):
    a = Color(a)
    opts = [_F0, _F1 / 2, -_F1 / 2]
    if a.is_rational:
        opts += [a.lift() / 2, -a.lift() / 2]
    opts.append(Fraction(rng.randrange(1, 8), rng.choice([3, 4, 5, 7])))
    return rng.choice(opts)
