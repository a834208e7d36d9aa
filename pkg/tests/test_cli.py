import csv
import io
import json

import pytest

from pdmosc.cli import main, parse
from pdmosc.ordering import SCHEMES, derived_means, load_ordering, named_scheme

ML = ["--ordering", "mathews-lakshmanan", "--k", "1", "--lambda", "1", "--hbar", "1"]
BAD = {"name": "bad", "terms": [{"w": 0.5, "alpha": 2, "beta": -2, "gamma": -1},
                                {"w": 0.5, "alpha": -2, "beta": 0, "gamma": 1}]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_spectrum():
    cmd = parse(["spectrum", *ML, "--levels", "6", "--format", "json"])
    assert cmd.subcommand == "spectrum" and cmd.fmt == "json"
    assert cmd.ordering.name == "mathews-lakshmanan" and cmd.options["levels"] == 6
    assert (cmd.params.k, cmd.params.lam, cmd.params.hbar) == (1, 1, 1)


def test_parse_wavefunction():
    cmd = parse(["wavefunction", "--ordering", "carinena", "--k", "1", "--lambda", "1", "--n", "0",
                 "--xmin", "-0.99", "--xmax", "0.99", "--samples", "201"])
    assert cmd.options["samples"] == 201 and cmd.options["n"] == 0


@pytest.mark.parametrize("argv", [
    ["spectrum", "--lambda", "1"],
    ["spectrum", *ML, "--bogus"],
    ["spectrum", *ML, "--ordering-file", "x.json"],
    ["spectrum", "--ordering", "no-such-scheme"],
    ["spectrum", *ML, "--k", "nan"],
    ["spectrum", *ML, "--hbar", "-1"],
    ["wavefunction", *ML, "--samples", "1"],
    ["wavefunction", *ML, "--xmin", "0.5", "--xmax", "0.1"],
    ["spectrum", "--ordering-file", "/nonexistent/ordering.json"],
    ["frobnicate"],
    [],
])
def test_usage_errors(argv, capsys):
    code, out, err = run(capsys, *argv)
    assert code == 3 and out == ""
    assert err


def test_help(capsys):
    for sub in ("orderings", "spectrum", "wavefunction", "potential", "verify", "oracle"):
        code, out, _ = run(capsys, sub, "--help")
        assert code == 0 and "--format" in out


def test_spectrum_json(capsys):
    code, out, err = run(capsys, "spectrum", *ML, "--levels", "6")
    assert code == 0 and err == ""
    d = json.loads(out)
    assert [lv["E"] for lv in d["levels"]] == [1.0, 3.0, 6.0, 10.0, 15.0, 21.0]
    assert d["regime"] == "PositiveLambdaInterior" and d["finite"] is False


def test_csv_json_agree(capsys):
    _, js, _ = run(capsys, "spectrum", "--ordering", "carinena", "--levels", "4")
    _, cs, _ = run(capsys, "spectrum", "--ordering", "carinena", "--levels", "4", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(cs)))
    levels = json.loads(js)["levels"]
    assert [float(r["E"]) for r in rows] == [lv["E"] for lv in levels]
    assert [float(r["nu"]) for r in rows] == [lv["nu"] for lv in levels]


def test_orderings_catalog(capsys):
    code, out, _ = run(capsys, "orderings")
    cat = {e["name"]: e for e in json.loads(out)}
    assert code == 0 and set(cat) == set(SCHEMES)
    ml = cat["mathews-lakshmanan"]
    assert ml["hermiticity"] == "Hermitian"
    assert (ml["means"]["alpha_bar"], ml["means"]["gamma_bar"], ml["means"]["alphagamma_bar"]) == (-0.5, -0.5, 0.0)


@pytest.mark.parametrize("name", SCHEMES)
def test_orderings_round_trip(name, capsys, tmp_path):
    _, out, _ = run(capsys, "orderings", "--scheme", name)
    f = tmp_path / "o.json"
    f.write_text(out)
    assert derived_means(load_ordering(str(f))) == derived_means(named_scheme(name))
    _, a, _ = run(capsys, "spectrum", "--ordering-file", str(f))
    _, b, _ = run(capsys, "spectrum", "--ordering", name)
    assert a == b


def test_imaginary_mu_exit(capsys, tmp_path):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(BAD))
    code, out, err = run(capsys, "spectrum", "--ordering-file", str(f))
    assert code == 2 and out == ""
    assert err.strip() == "pdmosc: imaginary mu: radicand = -7"


def test_invalid_json_file(capsys, tmp_path):
    f = tmp_path / "broken.json"
    f.write_text("{not json")
    assert run(capsys, "spectrum", "--ordering-file", str(f))[0] == 3


def test_no_bound_states_exit(capsys):
    code, out, err = run(capsys, "spectrum", *ML[:4], "--lambda", "-1", "--k", "0.16")
    assert code == 2 and out == "" and err.startswith("pdmosc: ")


def test_negative_spectrum_capped(capsys):
    _, out, _ = run(capsys, "spectrum", "--ordering", "mathews-lakshmanan", "--k", "25", "--lambda", "-1",
                    "--levels", "10")
    d = json.loads(out)
    assert [lv["E"] for lv in d["levels"]] == pytest.approx([2, 6, 9, 11, 12], abs=1e-12)
    assert d["n_max"] == 4 and d["finite"] is True


def test_wavefunction_clamps_edges(capsys):
    code, out, err = run(capsys, "wavefunction", *ML, "--xmin", "-1", "--xmax", "1", "--samples", "5")
    d = json.loads(out)
    assert code == 0 and "clamped" in err
    assert [c["index"] for c in d["metadata"]["clamped"]] == [0, 4]
    xs = [r["x"] for r in d["rows"]]
    assert xs[0] == pytest.approx(-1 + 1e-9, abs=1e-15) and xs[-1] == pytest.approx(1 - 1e-9, abs=1e-15)
    assert d["rows"][2]["psi"] == pytest.approx(3**0.5 / 2, rel=1e-14)
    assert abs(d["rows"][0]["psi"]) < 1e-4


def test_wavefunction_csv_matches_json(capsys):
    args = ["wavefunction", "--ordering", "carinena", "--n", "2", "--samples", "11"]
    _, js, _ = run(capsys, *args)
    _, cs, _ = run(capsys, *args, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(cs)))
    assert [float(r["psi"]) for r in rows] == [r["psi"] for r in json.loads(js)["rows"]]


def test_wavefunction_continuum(capsys):
    code, out, _ = run(capsys, "wavefunction", *ML, "--rho", "0.5", "--xmin", "1.1", "--xmax", "3", "--samples", "5")
    d = json.loads(out)
    assert code == 0 and d["metadata"]["E"] == pytest.approx(-0.25)
    assert all(r["psi"] != 0 for r in d["rows"])


def test_wavefunction_continuum_needs_positive_lambda(capsys):
    assert run(capsys, "wavefunction", *ML[:4], "--lambda", "-1", "--rho", "0.5")[0] == 2


def test_potential_rows(capsys):
    code, out, _ = run(capsys, "potential", *ML, "--xmin", "0", "--xmax", "0.5", "--samples", "2", "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and list(rows[0]) == ["x", "V", "V_eff", "m"]
    assert float(rows[1]["V"]) == pytest.approx(0.25 / (2 * 0.75))
    assert float(rows[1]["m"]) == pytest.approx(1 / 0.75)


def test_verify_exit_codes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", *ML)
    assert code == 0 and all(r["passed"] for r in json.loads(out))
    f = tmp_path / "bad.json"
    f.write_text(json.dumps(BAD))
    code, out, err = run(capsys, "verify", "--ordering-file", str(f))
    assert code == 2 and json.loads(out)[0]["check_name"] == "validity" and "validity" in err


def test_oracle_report(capsys):
    code, out, _ = run(capsys, "oracle", *ML, "--grid-points", "1000")
    d = json.loads(out)
    assert code == 0 and set(d) >= {"grid", "epsilon", "values", "convergence_slope"}
    assert d["values"] == pytest.approx([2, 6, 12], rel=1e-3)
    assert 1.7 <= d["convergence_slope"] <= 2.3


def test_oracle_negative(capsys):
    code, out, _ = run(capsys, "oracle", "--ordering", "mathews-lakshmanan", "--k", "22.09", "--lambda", "-1",
                       "--coordinate", "angle", "--grid-points", "2000")
    d = json.loads(out)
    assert code == 0 and d["energies"] == pytest.approx([1.85, 5.55, 8.25], rel=1e-3)
    assert d["bound"] == [True, True, True]


def test_oracle_wrong_coordinate(capsys):
    assert run(capsys, "oracle", *ML, "--coordinate", "box")[0] == 2


def test_output_file(capsys, tmp_path):
    f = tmp_path / "levels.json"
    code, out, _ = run(capsys, "spectrum", *ML, "--output", str(f))
    assert code == 0 and out == ""
    assert json.loads(f.read_text())["levels"][0]["E"] == 1.0
    assert [p.name for p in tmp_path.iterdir()] == ["levels.json"]


def test_output_unwritable(capsys, tmp_path):
    assert run(capsys, "spectrum", *ML, "--output", str(tmp_path / "missing" / "x.json"))[0] == 3
