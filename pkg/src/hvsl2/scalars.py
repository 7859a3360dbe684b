"""Exact and floating arithmetic over the ring generated by roots of unity.

Every quantity in this package is a rational combination of powers
``xi^x = exp(2*pi*i*x/ell)`` with rational ``x``, or (fallback) a complex
double.  Exact scalars are stored as finitely supported maps
``exponent -> rational coefficient`` with exponents reduced mod ell; this
representation is not canonical (e.g. ``1 + xi^(ell/2) = 0`` for even ell),
so zero testing reduces once modulo the N-th cyclotomic polynomial, where N
is ell times the lcm of the exponent denominators present.  A cheap numeric
prefilter answers "definitely nonzero" without exact work.
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from math import gcd
from typing import Union

Rational = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)

# numeric prefilter margin: |value| above this times the coefficient mass is
# provably nonzero (double roundoff is ~1e-16 per term)
_PREFILTER = 1e-9


class ScalarError(ArithmeticError):
    pass


class DivisionByZero(ScalarError):
    pass


# ---------------------------------------------------------------------------
# cyclotomic polynomial tables (shared across rings)

_cyclotomic_cache: dict[int, list[int]] = {}
_reduction_cache: dict[int, tuple[int, list[list[int]]]] = {}


def cyclotomic_poly(n: int) -> list[int]:
    """Coefficients of the n-th cyclotomic polynomial, low degree first."""
    if n in _cyclotomic_cache:
        return _cyclotomic_cache[n]
    # Phi_n = (x^n - 1) / prod_{d|n, d<n} Phi_d, by exact division
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _polydiv_exact(poly, cyclotomic_poly(d))
    _cyclotomic_cache[n] = poly
    return poly


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    dd = len(den) - 1
    out = [0] * (len(num) - dd)
    for i in range(len(num) - 1, dd - 1, -1):
        c = num[i] // den[dd]
        out[i - dd] = c
        if c:
            for j, dj in enumerate(den):
                num[i - dd + j] -= c * dj
    assert all(v == 0 for v in num), "non-exact polynomial division"
    return out


def _reduction_rows(n: int) -> tuple[int, list[list[int]]]:
    """Degree of Phi_n and the expansions of t^k (deg <= k < n) in the basis
    1, t, ..., t^(deg-1) of Z[t]/Phi_n."""
    if n in _reduction_cache:
        return _reduction_cache[n]
    phi = cyclotomic_poly(n)
    deg = len(phi) - 1
    rows: list[list[int]] = []
    # t^deg = -(phi - t^deg)
    cur = [-c for c in phi[:deg]]
    for _ in range(deg, n):
        rows.append(cur)
        nxt = [0] + cur[:-1]
        top = cur[-1]
        if top:
            for i in range(deg):
                nxt[i] -= top * phi[i]
        nxt = nxt[:deg]
        cur = nxt
    _reduction_cache[n] = (deg, rows)
    return deg, rows


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


class Scalar:
    """One element of the coefficient ring, exact or floating.

    Exact payload: dict mapping exponent x (Fraction, reduced mod ell) to a
    rational coefficient, standing for sum c_x * xi^x.  Floating payload: a
    complex double.  Mixing the two demotes to floating.
    """

    __slots__ = ("ring", "ex", "z")

    def __init__(self, ring: "RootData", ex: dict | None, z: complex | None):
        self.ring = ring
        self.ex = ex
        self.z = z

    # -- constructors ------------------------------------------------------

    @property
    def is_exact(self) -> bool:
        return self.ex is not None

    def _promote(self, other):
        if isinstance(other, Scalar):
            if other.ring is not self.ring:
                raise ScalarError("scalars from different rings")
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.scalar(other)
        if isinstance(other, (float, complex)):
            return self.ring.approx(complex(other))
        return None

    # -- ring operations ---------------------------------------------------

    def __add__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        if self.ex is not None and other.ex is not None:
            if not self.ex:
                return other
            if not other.ex:
                return self
            terms = dict(self.ex)
            for x, c in other.ex.items():
                nc = terms.get(x, _ZERO) + c
                if nc:
                    terms[x] = nc
                elif x in terms:
                    del terms[x]
            return Scalar(self.ring, terms, None)
        return Scalar(self.ring, None, self.to_complex() + other.to_complex())

    __radd__ = __add__

    def __neg__(self):
        if self.ex is not None:
            return Scalar(self.ring, {x: -c for x, c in self.ex.items()}, None)
        return Scalar(self.ring, None, -self.z)

    def __sub__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        if self.ex is not None and other.ex is not None:
            a, b = self.ex, other.ex
            if not a or not b:
                return self.ring.zero
            ell = self.ring.ell
            if len(a) == 1 and len(b) == 1:
                (x, c), = a.items()
                (y, d), = b.items()
                return Scalar(self.ring, {(x + y) % ell: c * d}, None)
            if len(a) > len(b):
                a, b = b, a
            terms: dict = {}
            for x, c in a.items():
                for y, d in b.items():
                    k = (x + y) % ell
                    nc = terms.get(k, _ZERO) + c * d
                    if nc:
                        terms[k] = nc
                    elif k in terms:
                        del terms[k]
            return Scalar(self.ring, terms, None)
        return Scalar(self.ring, None, self.to_complex() * other.to_complex())

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        return other * self.inv()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inv() ** (-n)
        out = self.ring.one
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- zero test and equality --------------------------------------------

    def to_complex(self) -> complex:
        if self.ex is None:
            return self.z
        xi = self.ring._xi_numeric
        return sum((float(c) * xi(x) for x, c in self.ex.items()), 0j)

    def is_zero(self) -> bool:
        if self.ex is None:
            return abs(self.z) <= self.ring.tol
        if not self.ex:
            return True
        # numeric prefilter: large value certifies nonzero
        try:
            mass = sum(abs(float(c)) for c in self.ex.values())
            if abs(self.to_complex()) > _PREFILTER * max(1.0, mass):
                return False
        except OverflowError:
            pass  # coefficients beyond float range; decide exactly
        return not any(self._canonical_vector())

    def canonical(self) -> "Scalar":
        """Equivalent scalar with exponents on the lattice (ell/N) Z and at
        most phi(N) terms; collapses hidden cancellations."""
        if self.ex is None or len(self.ex) <= 1:
            return self
        n = self._field_modulus()
        vec = self._canonical_vector(n)
        ell = self.ring.ell
        terms = {Fraction(k * ell, n) % ell: c for k, c in enumerate(vec) if c}
        return Scalar(self.ring, terms, None)

    def _field_modulus(self) -> int:
        den = 1
        for x in self.ex:
            den = _lcm(den, x.denominator)
        return self.ring.ell * den

    def _canonical_vector(self, n: int | None = None) -> list[Fraction]:
        """Coordinates in the power basis of Q[t]/Phi_n, t = exp(2*pi*i/n)."""
        if n is None:
            n = self._field_modulus()
        deg, rows = _reduction_rows(n)
        acc = [_ZERO] * deg
        scale = n // self.ring.ell  # xi^x = t^(x*scale)
        for x, c in self.ex.items():
            e = x * scale
            assert e.denominator == 1
            e = int(e) % n
            if e < deg:
                acc[e] += c
            else:
                row = rows[e - deg]
                for i in range(deg):
                    if row[i]:
                        acc[i] += c * row[i]
        return acc

    def __eq__(self, other):
        other = self._promote(other)
        if other is None:
            return NotImplemented
        d = self - other
        if d.ex is not None:
            return d.is_zero()
        m = max(1.0, abs(self.to_complex()), abs(other.to_complex()))
        return abs(d.z) <= self.ring.tol * m

    __hash__ = None  # non-canonical representation; do not use as dict keys

    # -- inverse ------------------------------------------------------------

    def inv(self) -> "Scalar":
        if self.ex is None:
            if abs(self.z) <= self.ring.tol:
                raise DivisionByZero("division by (approximately) zero")
            return Scalar(self.ring, None, 1 / self.z)
        if not self.ex:
            raise DivisionByZero("division by zero")
        if len(self.ex) == 1:
            (x, c), = self.ex.items()
            return Scalar(self.ring, {(-x) % self.ring.ell: 1 / c}, None)
        n = self._field_modulus()
        vec = self._canonical_vector(n)
        if not any(vec):
            raise DivisionByZero("division by zero")
        num_gcd, den_lcm = 0, 1
        for c in vec:
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = _lcm(den_lcm, c.denominator)
        cont = Fraction(num_gcd, den_lcm)
        if cont != 1:
            vec = [c / cont for c in vec]
        inv_vec = _field_inverse(vec, n)
        if cont != 1:
            inv_vec = [c / cont for c in inv_vec]
        ell = self.ring.ell
        terms: dict = {}
        for k, c in enumerate(inv_vec):
            if c:
                x = Fraction(k * ell, n) % ell
                nc = terms.get(x, _ZERO) + c
                if nc:
                    terms[x] = nc
                elif x in terms:
                    del terms[x]
        return Scalar(self.ring, terms, None)

    def content(self) -> Fraction | None:
        """Positive rational c with self/c integer-coefficient and primitive;
        None for floating or zero scalars."""
        if self.ex is None or not self.ex:
            return None
        num_gcd, den_lcm = 0, 1
        for c in self.ex.values():
            num_gcd = gcd(num_gcd, abs(c.numerator))
            den_lcm = _lcm(den_lcm, c.denominator)
        return Fraction(num_gcd, den_lcm)

    def conjugate(self) -> "Scalar":
        if self.ex is None:
            return Scalar(self.ring, None, self.z.conjugate())
        ell = self.ring.ell
        return Scalar(self.ring, {(-x) % ell: c for x, c in self.ex.items()}, None)

    # -- display ------------------------------------------------------------

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.ex is None:
            return f"{self.z:.6g}"
        if not self.ex:
            return "0"
        bits = []
        for x in sorted(self.ex):
            c = self.ex[x]
            if x == 0:
                bits.append(str(c))
            elif c == 1:
                bits.append(f"xi^{x}")
            elif c == -1:
                bits.append(f"-xi^{x}")
            else:
                bits.append(f"{c}*xi^{x}")
        out = bits[0]
        for b in bits[1:]:
            out += " - " + b[1:] if b.startswith("-") else " + " + b
        return out


def _field_inverse(vec: list[Fraction], n: int) -> list[Fraction]:
    """Inverse of sum vec[k] t^k in Q[t]/Phi_n, via the multiplication matrix
    in the power basis (rational Gaussian elimination)."""
    deg, rows = _reduction_rows(n)
    # columns of multiplication by x: x * t^j reduced mod Phi_n
    cols = []
    cur = list(vec)
    for j in range(deg):
        cols.append(cur)
        if j == deg - 1:
            break
        nxt = [_ZERO] + cur[:-1]
        top = cur[-1]
        if top:
            row0 = rows[0]
            nxt = [nxt[i] + top * row0[i] for i in range(deg)]
        cur = nxt[:deg]
    # solve M v = e_0 where M[i][j] = cols[j][i]
    M = [[cols[j][i] for j in range(deg)] + [_ONE if i == 0 else _ZERO]
         for i in range(deg)]
    for col in range(deg):
        piv = None
        for r in range(col, deg):
            if M[r][col]:
                piv = r
                break
        if piv is None:
            raise DivisionByZero("zero divisor in cyclotomic reduction")
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        if pv != 1:
            M[col] = [v / pv for v in M[col]]
        for r in range(deg):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [vr - f * vc for vr, vc in zip(M[r], M[col])]
    return [M[i][deg] for i in range(deg)]


class RootData:
    """Arithmetic context at a fixed root order ell >= 3.

    Holds ell, ell' = ell/gcd(ell,2), the integral normalization eta, the
    scalar backend selection, and caches shared by the other modules.
    """

    def __init__(self, ell: int, eta: Rational | complex = 1,
                 backend: str = "exact", tol: float = 1e-9):
        if not isinstance(ell, int) or ell < 3:
            raise ValueError(f"ell must be an integer >= 3, got {ell!r}")
        if backend not in ("exact", "approx"):
            raise ValueError(f"unknown backend {backend!r}")
        self.ell = ell
        self.ellprime = ell if ell % 2 else ell // 2
        self.backend = backend
        self.tol = tol
        self._exp_cache: dict = {}
        self._qfact: list[Scalar] = []
        self.cache: dict = {}  # cross-module memo (R-matrices, z_a, modules...)
        self.zero = Scalar(self, {} if backend == "exact" else None,
                           None if backend == "exact" else 0j)
        self.one = self.scalar(1)
        self.eta = self.scalar(eta) if isinstance(eta, (int, Fraction)) \
            else self.approx(complex(eta))
        if self.eta.is_zero():
            raise ValueError("eta must be nonzero")

    def __repr__(self):
        return f"RootData(ell={self.ell}, backend={self.backend!r})"

    # -- scalar constructors -------------------------------------------------

    def scalar(self, v) -> Scalar:
        if isinstance(v, Scalar):
            if v.ring is not self:
                raise ScalarError("scalar from a different ring")
            return v
        if isinstance(v, (int, Fraction)) and self.backend == "exact":
            v = Fraction(v)
            return Scalar(self, {Fraction(0): v} if v else {}, None)
        return self.approx(complex(v))

    def approx(self, z: complex) -> Scalar:
        return Scalar(self, None, complex(z))

    def _xi_numeric(self, x) -> complex:
        c = self._exp_cache.get(x)
        if c is None:
            c = cmath.exp(2j * cmath.pi * complex(x) / self.ell)
            self._exp_cache[x] = c
        return c

    def xi_pow(self, x) -> Scalar:
        """xi^x = exp(2*pi*i*x/ell); exact for rational x."""
        if isinstance(x, (int, Fraction)) and self.backend == "exact":
            return Scalar(self, {Fraction(x) % self.ell: _ONE}, None)
        return Scalar(self, None, self._xi_numeric(complex(x)))

    def qint(self, x) -> Scalar:
        """The balanced quantum number xi^x - xi^(-x)."""
        return self.xi_pow(x) - self.xi_pow(-x)

    def qfact(self, n: int) -> Scalar:
        """Product qint(n) qint(n-1) ... qint(1); empty product for n = 0."""
        if n < 0:
            raise ValueError("qfact of negative integer")
        while len(self._qfact) <= n:
            k = len(self._qfact)
            self._qfact.append(self.one if k == 0 else self._qfact[k - 1] * self.qint(k))
        return self._qfact[n]
