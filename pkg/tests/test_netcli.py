import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from hamantash.assembly import NORTH, SOUTH, SamosaAssembly
from hamantash.dtrep import action_angle, prepare
from hamantash.netcli import (FormatError, ValidationFailed, assembly_from_dict, assembly_to_dict, dumps,
                              edges_from_dict, edges_to_dict, fmt_number, intrinsics_from_dict,
                              intrinsics_to_dict, main, parse_eps, rep_from_dict, rep_to_dict)
from hamantash.realize import edge_vector, intrinsics
from hamantash.sampling import random_assembly, random_rep

finite = st.floats(allow_nan=False, allow_infinity=False)


def reload(d):
    return json.loads(dumps(d))


def write(path, d):
    path.write_text(dumps(d) + "\n")
    return str(path)


# -- number policy and round trips ------------------------------------------------------

@given(finite)
def test_numbers_round_trip_bit_exact(x):
    s = fmt_number(x)
    y = json.loads(s)
    assert isinstance(y, float) and y == x and math.copysign(1, y) == math.copysign(1, x)
    assert "e" not in s.lower()


def test_non_finite_numbers_are_rejected():
    with pytest.raises(FormatError):
        fmt_number(float("nan"))


@given(st.lists(finite, min_size=5, max_size=5), st.lists(finite, min_size=2, max_size=2),
       st.lists(st.floats(0, 10), min_size=6, max_size=6), st.lists(st.booleans(), min_size=4, max_size=4))
def test_assembly_round_trip(alpha, beta, rest, flags):
    hems = [SOUTH if f else NORTH for f in flags]
    a = SamosaAssembly(alpha, beta, rest[:2], rest[2:4], rest[4:], hems[:2], hems[2:])
    b = assembly_from_dict(reload(assembly_to_dict(a)))
    assert b == a
    assert dumps(assembly_to_dict(b)) == dumps(assembly_to_dict(a))


def test_rep_round_trip(rng):
    for n in range(4, 9):
        rep = random_rep(rng, n, braids=2)
        back = rep_from_dict(reload(rep_to_dict(rep)))
        for g, h in zip(rep.gens, back.gens):
            assert (g.a, g.b, g.c, g.d) == (h.a, h.b, h.c, h.d)
        assert back.alpha == rep.alpha


def test_rep_checks_determinant_and_sign(rng):
    d = reload(rep_to_dict(random_rep(rng, 5)))
    d["gens"][0] = [2 * x for x in d["gens"][0]]
    with pytest.raises(ValidationFailed, match="determinant"):
        rep_from_dict(d)
    d = reload(rep_to_dict(random_rep(rng, 5)))
    d["gens"][1] = [-x for x in d["gens"][1]]
    with pytest.raises(ValidationFailed, match="canonical sign"):
        rep_from_dict(d)


def test_intrinsics_and_edges_round_trip(rng):
    for _ in range(20):
        a = random_assembly(rng, int(rng.integers(4, 9)), eps="random")
        p = intrinsics(a)
        text = dumps(intrinsics_to_dict(p))
        assert dumps(intrinsics_to_dict(intrinsics_from_dict(json.loads(text)))) == text
        ev = edge_vector(a)
        back = edges_from_dict(reload(edges_to_dict(ev, a.n)))
        assert back.lengths == ev.lengths and back.names == ev.names


def test_headers():
    d = assembly_to_dict(random_assembly(np.random.default_rng(0), 5))
    assert d["version"] == 1 and d["case"] == "large-angle" and d["kind"] == "assembly"
    bad = dict(d, version=2)
    with pytest.raises(FormatError):
        assembly_from_dict(bad)


def test_parse_eps():
    assert parse_eps("nnsn") == (NORTH, NORTH, SOUTH, NORTH)
    assert parse_eps("north,south") == (NORTH, SOUTH)
    with pytest.raises(FormatError):
        parse_eps("nx")


# -- command line ------------------------------------------------------------------------

@pytest.fixture
def files(tmp_path):
    rng = np.random.default_rng(11)
    return {
        "asm": write(tmp_path / "a.json", assembly_to_dict(random_assembly(rng, 6, eps="random"))),
        "north": write(tmp_path / "n.json", assembly_to_dict(random_assembly(rng, 6, eps=NORTH))),
        "rep": write(tmp_path / "r.json", rep_to_dict(random_rep(rng, 6, braids=2))),
        "dir": tmp_path,
    }


def test_validate_exit_codes(files, capsys):
    assert main(["validate", files["asm"]]) == 0
    assert main(["validate", files["rep"]]) == 0
    d = json.loads(open(files["asm"]).read())
    d["curves"][0]["ell"] = -1.0
    bad = write(files["dir"] / "bad.json", d)
    capsys.readouterr()
    assert main(["validate", bad]) == 1
    assert "slit-length[0]" in capsys.readouterr().out


def test_format_errors_exit_2(files):
    junk = files["dir"] / "junk.json"
    junk.write_text("{not json")
    assert main(["validate", str(junk)]) == 2
    assert main(["validate", str(files["dir"] / "missing.json")]) == 2
    assert main(["synth", files["asm"]]) == 2  # an assembly where a rep is expected


def test_realize_invert_round_trip(files):
    out = files["dir"] / "p.json"
    back = files["dir"] / "b.json"
    a = assembly_from_dict(json.loads(open(files["asm"]).read()))
    assert main(["realize", files["asm"], "--out", str(out)]) == 0
    eps = "".join(h[0] for h in a.eps)
    assert main(["invert", str(out), "--eps", eps, "--out", str(back)]) == 0
    b = assembly_from_dict(json.loads(back.read_text()))
    assert max(abs(x - y) for x, y in zip(a.ell + a.phi + a.phi_prime, b.ell + b.phi + b.phi_prime)) < 1e-8


def test_synth_then_holonomy(files):
    asm = files["dir"] / "s.json"
    hol = files["dir"] / "h.json"
    assert main(["synth", files["rep"], "--out", str(asm)]) == 0
    assert main(["holonomy", str(asm), "--out", str(hol)]) == 0
    got = json.loads(hol.read_text())["coordinates"]
    want = action_angle(prepare(rep_from_dict(json.loads(open(files["rep"]).read()))))
    assert got["beta"] == pytest.approx(want.beta, abs=1e-8)
    assert got["gamma"] == pytest.approx(want.gamma, abs=1e-8)


def test_game_lengths_and_unfold(files, capsys):
    game = files["dir"] / "g.json"
    assert main(["game", files["rep"], "--out", str(game)]) == 0
    g = json.loads(game.read_text())
    assert sorted(g["order"]) == list(range(1, 7)) and min(g["areas"]) > 1e-6
    ev = files["dir"] / "e.json"
    assert main(["lengths", files["asm"], "--out", str(ev)]) == 0
    assert len(json.loads(ev.read_text())["lengths"]) == 6 * 6 - 15
    svg = files["dir"] / "net.svg"
    capsys.readouterr()
    assert main(["unfold", files["north"], "--svg", str(svg)]) == 0
    assert "polygons: pentagon hexagon hexagon pentagon" in capsys.readouterr().out
    first = svg.read_text()
    assert main(["unfold", files["north"], "--svg", str(svg)]) == 0
    assert svg.read_text() == first


def test_unfold_refuses_mixed_hemispheres(files):
    d = json.loads(open(files["north"]).read())
    c = d["curves"][1]
    c["hem_phi_prime"], c["phi_prime"] = SOUTH, -c["phi_prime"]
    mixed = write(files["dir"] / "m.json", d)
    assert main(["validate", mixed]) == 0
    assert main(["unfold", mixed]) == 1


def test_sample_is_seeded(files, capsys):
    assert main(["sample", "rep", "--n", "5", "--seed", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["sample", "rep", "--n", "5", "--seed", "3"]) == 0
    assert capsys.readouterr().out == first


def test_selftest_is_deterministic(capsys):
    assert main(["selftest", "--seed", "7", "--count", "3"]) == 0
    first = capsys.readouterr().out
    assert main(["selftest", "--seed", "7", "--count", "3"]) == 0
    assert capsys.readouterr().out == first
    assert first.count("PASS") >= 10 and "FAIL" not in first
