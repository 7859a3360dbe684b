"""JSON-ready payloads for scalars, algebra elements and tensor elements;
parse(serialize(x)) round-trips every value kind."""

from __future__ import annotations

from fractions import Fraction

from .pbw import AlgElem, Color, Monomial, TensorElem
from .scalars import RootData, Scalar


def _num_payload(v):
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, int):
        return str(Fraction(v))
    z = complex(v)
    return [z.real, z.imag]


def _num_parse(payload):
    if isinstance(payload, str):
        return Fraction(payload)
    re, im = payload
    return complex(re, im)


def scalar_payload(s: Scalar) -> dict:
    if s.is_exact:
        s = s.canonical()
    out = {"approx": [s.to_complex().real, s.to_complex().imag]}
    if s.is_exact:
        out["exact"] = sorted((str(x), str(c)) for x, c in s.ex.items())
    return out


def parse_scalar(ring: RootData, payload: dict) -> Scalar:
    if "exact" in payload:
        terms = {Fraction(x): Fraction(c) for x, c in payload["exact"]}
        return Scalar(ring, terms, None)
    re, im = payload["approx"]
    return ring.approx(complex(re, im))


def monomial_payload(m: Monomial) -> list:
    return [m.nE, m.nF, _num_payload(m.gamma)]


def parse_monomial(payload) -> Monomial:
    nE, nF, g = payload
    return Monomial(nE, nF, _num_parse(g))


def color_payload(c: Color):
    return _num_payload(c.lift())


def parse_color_payload(payload) -> Color:
    return Color(_num_parse(payload))


def algelem_payload(x: AlgElem) -> dict:
    return {
        "grade": color_payload(x.grade),
        "terms": [[monomial_payload(m), scalar_payload(c)]
                  for m, c in sorted(x.terms.items(),
                                     key=lambda kv: (kv[0].nE, kv[0].nF, str(kv[0].gamma)))],
    }


def parse_algelem(ring: RootData, payload: dict) -> AlgElem:
    grade = parse_color_payload(payload["grade"])
    terms = {parse_monomial(m): parse_scalar(ring, c) for m, c in payload["terms"]}
    return AlgElem(ring, grade, terms)


def tensor_payload(t: TensorElem) -> dict:
    return {
        "grades": [color_payload(g) for g in t.grades],
        "terms": [[[monomial_payload(m) for m in key], scalar_payload(c)]
                  for key, c in sorted(
                      t.terms.items(),
                      key=lambda kv: tuple((m.nE, m.nF, str(m.gamma)) for m in kv[0]))],
    }


def parse_tensor(ring: RootData, payload: dict) -> TensorElem:
    grades = tuple(parse_color_payload(g) for g in payload["grades"])
    terms = {tuple(parse_monomial(m) for m in key): parse_scalar(ring, c)
             for key, c in payload["terms"]}
    return TensorElem(ring, grades, terms)
