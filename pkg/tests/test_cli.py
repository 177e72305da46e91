import json
import subprocess
import sys

import pytest

from involutions.cli import load_pencil, main

CONCRETE = {
    "w": {"a1": "1", "a2": "2/3", "b1": "-1", "b2": "0", "b3": "5", "c1": "1/2", "c2": "3"},
    "wp": {"a1": "0", "a2": "1", "b1": "2", "b2": "-7/5", "b3": "1", "c1": "4", "c2": "1"},
}


def write(tmp_path, doc, name="pencil.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc))
    return str(path)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def rational(tmp_path):
    return write(tmp_path, CONCRETE)


@pytest.fixture
def modular(tmp_path, capsys):
    main(["random-pencil", "--seed", "4"])
    return write(tmp_path, json.loads(capsys.readouterr()[0]), "fp.json")


@pytest.fixture
def geiser_file(tmp_path, capsys):
    main(["random-pencil", "--seed", "4", "--geiser"])
    return write(tmp_path, json.loads(capsys.readouterr()[0]), "g.json")


def test_eval_twice_returns(capsys, rational, modular):
    for pencil, point in ((rational, "1,1,1"), (modular, "1,2,3")):
        code, out, _ = run(capsys, "eval", "--pencil", pencil, "--point", point)
        assert code == 0
        code, back, _ = run(capsys, "eval", "--pencil", pencil, "--point", out.strip())
        assert code == 0 and back.strip() == point


def test_eval_distinguished_basepoint(capsys, rational):
    code, out, err = run(capsys, "eval", "--pencil", rational, "--point", "0,0,1")
    assert code == 3
    assert out == ""
    assert "degenerate: basepoint or contracted locus" in err


def test_eval_geiser(capsys, rational, geiser_file):
    assert run(capsys, "eval", "--pencil", rational, "--point", "1,1,1", "--geiser")[0] == 2
    code, out, _ = run(capsys, "eval", "--pencil", geiser_file, "--point", "1,2,3", "--geiser")
    assert code == 0
    assert run(capsys, "eval", "--pencil", geiser_file, "--point", out.strip(), "--geiser")[1].strip() == "1,2,3"


@pytest.mark.parametrize("bad", ["1,2", "a,b,c", "0,0,0", "1,2,1/0"])
def test_eval_bad_points(capsys, rational, bad):
    assert run(capsys, "eval", "--pencil", rational, "--point", bad)[0] == 2


def test_pencil_file_validation(tmp_path):
    from involutions.cli import UsageError

    doc = json.loads(json.dumps(CONCRETE))
    doc["w"]["a1"] = 1
    with pytest.raises(UsageError):
        load_pencil(write(tmp_path, doc))
    doc = json.loads(json.dumps(CONCRETE))
    del doc["wp"]["c2"]
    with pytest.raises(UsageError):
        load_pencil(write(tmp_path, doc))
    doc = dict(CONCRETE, field={"prime": "100"})
    with pytest.raises(UsageError):
        load_pencil(write(tmp_path, doc))
    doc = dict(CONCRETE, field={"prime": "7"})
    spec = load_pencil(write(tmp_path, doc))
    assert spec.domain.p == 7 and spec["a2"] == 3  # 2/3 = 3 mod 7
    with pytest.raises(UsageError):
        load_pencil(str(tmp_path / "missing.json"))


def test_ram_generic(capsys):
    code, out, _ = run(capsys, "ram", "--generic")
    doc = json.loads(out)
    assert code == 0
    assert doc["s"][0] == "1*a2*c1 - 1*a1*c2"
    assert [len(doc[k]) for k in "spqr"] == [3, 3, 5, 4]
    code, out, _ = run(capsys, "ram", "--generic", "--geiser")
    doc = json.loads(out)
    assert [len(doc[k]) for k in ("st", "p", "qt", "rt")] == [2, 3, 4, 3]


def test_ram_concrete_matches_substitution(capsys, rational):
    from fractions import Fraction

    code, out, _ = run(capsys, "ram", "--pencil", rational)
    doc = json.loads(out)
    w, wp = CONCRETE["w"], CONCRETE["wp"]
    a1, a2, c1, c2 = (Fraction(w[k]) for k in ("a1", "a2", "c1", "c2"))
    assert Fraction(doc["s"][0]) == a2 * c1 - a1 * c2
    a1p, a2p, c1p, c2p = (Fraction(wp[k]) for k in ("a1", "a2", "c1", "c2"))
    assert Fraction(doc["s"][2]) == a2p * c1p - a1p * c2p


def test_ram_requires_a_source(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["ram"])
    assert exc.value.code == 2


def test_poly(capsys):
    code, out, _ = run(capsys, "poly", "--name", "kappa", "--generic")
    assert code == 0 and out.strip() == "-1*b1*a1p + 1*a1*b1p"
    code, out, _ = run(capsys, "poly", "--name", "gamma4", "--generic")
    from involutions.ring import parse_text

    g = parse_text(out.strip())
    assert g.is_homogeneous(("y1", "y2", "y3")) and g.degree(("y1", "y2", "y3")) == 4
    assert run(capsys, "poly", "--name", "nosuch", "--generic")[0] == 2
    code, out, _ = run(capsys, "poly", "--name", "phi3", "--generic")
    assert code == 0 and "a1*" not in out.replace("a1p", "")


def test_poly_geiser_name_on_bertini_file(capsys, rational):
    assert run(capsys, "poly", "--name", "Kt", "--pencil", rational)[0] == 2


def test_map_targets(capsys, modular, geiser_file):
    from involutions.ring import MERSENNE61

    code, out, _ = run(capsys, "map", "--pencil", modular, "--point", "1,2,3", "--target", "cone")
    z0, z1, z2, z3 = (int(x) for x in out.strip().split(","))
    assert code == 0 and (z1 * z3 - z2 * z2) % MERSENNE61 == 0
    code, out, _ = run(capsys, "map", "--pencil", modular, "--point", "1,2,3", "--target", "sigma2")
    assert code == 0 and len(out.strip().split(",")) == 2
    assert run(capsys, "map", "--pencil", modular, "--point", "1,2,3", "--target", "plane")[0] == 2
    code, out, _ = run(capsys, "map", "--pencil", geiser_file, "--point", "1,2,3", "--target", "plane")
    assert code == 0 and len(out.strip().split(",")) == 3
    # the distinguished basepoint goes to the vertex; the other vertices are degenerate
    assert run(capsys, "map", "--pencil", modular, "--point", "0,0,1", "--target", "cone")[1].strip() == "1,0,0,0"
    assert run(capsys, "map", "--pencil", modular, "--point", "1,0,0", "--target", "cone")[0] == 3


def test_verify_flags(capsys):
    assert run(capsys, "verify", "--mode", "modular", "--trials", "0")[0] == 2
    assert run(capsys, "verify", "--prime", "12")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["verify", "--suite", "nosuch"])
    assert exc.value.code == 2
    code, out, _ = run(capsys, "verify", "--suite", "geiser", "--mode", "modular", "--trials", "2")
    doc = json.loads(out)
    assert code == 0 and "q0r0s0_vanish" in [c["name"] for c in doc["checks"]]


def test_verify_reports_failures(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "bertini", "--mode", "modular",
                       "--trials", "2", "--corrupt", "K")
    assert code == 1 and json.loads(out)["status"] == "fail"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "involutions", "poly", "--name", "w", "--generic"],
                          capture_output=True, text=True, check=True)
    assert proc.stdout.startswith("1*c1*y1^2*y2")
