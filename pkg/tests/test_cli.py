import json
from fractions import Fraction

import pytest

from hvsl2.cli import main
from conftest import get_ring


@pytest.fixture
def unknot_file(tmp_path):
    p = tmp_path / "unknot.gdt"
    p.write_text("ring ell=4\ncomponent 0 color=1/2 orient=down\n"
                 "row: cup@0\nrow: cap@0\n")
    return str(p)


@pytest.fixture
def open_file(tmp_path):
    p = tmp_path / "open.gdt"
    p.write_text("ring ell=4\ncomponent 0 color=1/2\nopen 0\nrow: id@0\n")
    return str(p)


def test_jinv_unknot(unknot_file, capsys):
    assert main(["jinv", unknot_file]) == 0
    out = capsys.readouterr().out
    assert "K" in out


def test_jinv_open_strand(open_file, capsys):
    assert main(["--json", "jinv", open_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["open_component"] == 0
    terms = payload["invariant"]["terms"]
    assert len(terms) == 1
    assert terms[0][0] == [[0, 0, "0"]]


def test_jinv_malformed(tmp_path, capsys):
    p = tmp_path / "bad.gdt"
    p.write_text("ring ell=4\ncomponent 0 color=1/2\nrow: cap@0\n")
    assert main(["jinv", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_hv_s2xs1(unknot_file, capsys):
    assert main(["--json", "hv", unknot_file]) == 0
    payload = json.loads(capsys.readouterr().out)
    val = payload["value"]["approx"]
    assert abs(complex(val[0], val[1])) < 1e-9
    assert payload["normalization"] == "bpm"


def test_hvprime_s2xs1(unknot_file, capsys):
    assert main(["--json", "hvprime", unknot_file, "--cut", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    val = payload["value"]["approx"]
    assert abs(complex(val[0], val[1]) - 1) < 1e-9


def test_hvprime_bad_cut_color(tmp_path, capsys):
    p = tmp_path / "zero.gdt"
    p.write_text("ring ell=4\ncomponent 0 color=0\nrow: cup@0\nrow: cap@0\n")
    rc = main(["hvprime", str(p), "--cut", "0"])
    assert rc == 2


def test_cli_rejects_small_ell(unknot_file):
    assert main(["--ell", "2", "integral", "--colors", "1/2"]) == 2


def test_integral_command(capsys):
    assert main(["--ell", "4", "integral", "--colors", "1/2,2/3"]) == 0
    out = capsys.readouterr().out
    assert "z_a" in out


def test_repcheck(tmp_path, capsys):
    p = tmp_path / "hopf.gdt"
    from hvsl2.diagrams import braid_closure_diagram, serialize_diagram
    d = braid_closure_diagram(get_ring(4), [(0, "x+")] * 2,
                              [Fraction(1, 3), Fraction(2, 3)], 2)
    p.write_text(serialize_diagram(d))
    assert main(["--json", "repcheck", str(p)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["overall"] == "pass"


def test_check_command_small(capsys):
    rc = main(["--ell", "3", "--seed", "5", "check", "--samples", "4"])
    out = capsys.readouterr().out
    assert rc == 0, out
    assert "overall: PASS" in out


def test_check_degenerate_ell8(capsys):
    rc = main(["--ell", "8", "--seed", "5", "check", "--samples", "3"])
    out = capsys.readouterr().out
    assert rc == 0, out
    assert "SKIP" in out  # twist-degenerate HV checks are skipped, not failed


def test_serialization_roundtrips(rng):
    from hvsl2.serialize import (algelem_payload, parse_algelem, parse_scalar,
                                 parse_tensor, scalar_payload, tensor_payload)
    from hvsl2.pbw import Color, random_elem, tensor_from_factors
    r = get_ring(5)
    for _ in range(10):
        s = r.xi_pow(Fraction(rng.randrange(10), rng.choice([1, 2, 3]))) \
            + r.scalar(Fraction(rng.randrange(-3, 4), 2))
        assert (parse_scalar(r, scalar_payload(s)) - s).is_zero()
    za = r.approx(1.25 - 0.5j)
    assert (parse_scalar(r, scalar_payload(za)) - za).is_zero()
    a, b = Color(Fraction(1, 2)), Color(Fraction(1, 3))
    for _ in range(5):
        x = random_elem(r, a, rng, coset=Fraction(1, 2))
        assert parse_algelem(r, algelem_payload(x)) == x
        t = tensor_from_factors(x, random_elem(r, b, rng))
        assert parse_tensor(r, tensor_payload(t)) == t
