"""CLI plumbing: parsing, emission formats, determinism, verify registry."""

import csv
import io
import json
from fractions import Fraction

import pytest

from pretzeljones import cli, degree as dg, pretzel, qring, skein


def run(*argv):
    out = io.StringIO()
    status = cli.main(list(argv), out=out)
    return status, out.getvalue()


def test_jones_both_trefoil():
    status, text = run("jones", "--pretzel", "-1,-1,-1", "--color", "2",
                       "--method", "both")
    assert status == 0
    assert "equal" in text and "UNEQUAL" not in text


def test_jones_single_region_usage_error(capsys):
    status, _ = run("jones", "--pretzel", "1", "--color", "5")
    assert status == 2
    assert "error:" in capsys.readouterr().err


def test_jones_rejects_links(capsys):
    status, _ = run("jones", "--pretzel", "2,2", "--color", "2")
    assert status == 2
    assert "link" in capsys.readouterr().err


def test_jones_degree_matches_prediction():
    status, text = run("jones", "--pretzel", "-5,4,3", "--color", "3",
                       "--emit", "json")
    assert status == 0
    doc = json.loads(text)
    want = dg.predicted_degree((-5, 4, 3), 3)
    assert doc["results"][0]["degree"] == str(want)


def test_jones_json_terms_reconstruct_polynomial():
    status, text = run("jones", "--pretzel", "2,3", "--color", "2",
                       "--emit", "json")
    assert status == 0
    doc = json.loads(text)
    terms = [(int(2 * Fraction(e)), c) for e, c in doc["results"][0]["terms"]]
    got = qring.HalfLaurent.from_terms(terms)
    assert got == pretzel.colored_jones_statesum(pretzel.PretzelSpec((2, 3)), 2)


def test_jones_csv_shape():
    status, text = run("jones", "--pretzel", "-1,-1,-1", "--colors", "2,3",
                       "--method", "both", "--emit", "csv")
    assert status == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["color", "exponent", "coefficient", "equal"]
    assert {r[0] for r in rows[1:]} == {"2", "3"}
    assert all(r[3] == "true" for r in rows[1:])


def test_jones_bracket_guard(capsys):
    status, _ = run("jones", "--pretzel", "-5,4,3", "--color", "5",
                    "--method", "both")
    assert status == 2
    assert "infeasible" in capsys.readouterr().err


def test_jones_diagram_input(tmp_path):
    # a Laurent-valued diagram emits term pairs
    path = tmp_path / "ring.json"
    path.write_text(skein.unknot_diagram(2).to_json())
    status, text = run("jones", "--diagram-in", str(path), "--emit", "json")
    assert status == 0
    doc = json.loads(text)
    assert doc["results"][0]["terms"] == [["2", "1"], ["0", "1"], ["-2", "1"]]
    # a rational-valued projector network is emitted reduced, not mangled
    path = tmp_path / "net.json"
    path.write_text(skein.theta_network(2, 2, 2).to_json())
    status, text = run("jones", "--diagram-in", str(path))
    assert status == 0
    assert text.splitlines()[0].endswith(repr(qring.theta(2, 2, 2).reduced()))
    status, _ = run("jones", "--diagram-in", str(path), "--emit", "csv")
    assert status == 2
    status, _ = run("jones", "--diagram-in", str(path), "--color", "2")
    assert status == 2


def test_colors_parsing():
    assert cli._parse_colors("2..5") == (2, 3, 4, 5)
    assert cli._parse_colors("4,2,3,3") == (2, 3, 4)
    assert cli._parse_colors("7") == (7,)
    with pytest.raises(cli.UsageError):
        cli._parse_colors("1..3")
    with pytest.raises(cli.UsageError):
        cli._parse_colors("x")


def test_config_file(tmp_path):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({
        "pretzel": [-1, -1, -1], "colors": "2..3",
        "method": "both", "emit": "csv"}))
    status, text = run("jones", "--config", str(conf))
    assert status == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert {r[0] for r in rows[1:]} == {"2", "3"}
    # explicit flags win over the config file
    status, text = run("jones", "--config", str(conf), "--emit", "json",
                       "--colors", "2")
    doc = json.loads(text)
    assert [r["color"] for r in doc["results"]] == [2]


def test_config_rejects_unknown_keys(tmp_path, capsys):
    conf = tmp_path / "run.json"
    conf.write_text(json.dumps({"pretzel": [2, 3], "color": 2}))
    status, _ = run("jones", "--config", str(conf))
    assert status == 2
    assert "unknown config keys" in capsys.readouterr().err


def test_degree_report_table():
    status, text = run("degree", "--pretzel", "-5,4,3", "--colors", "2..20")
    assert status == 0
    assert "js=4/5" in text and "modulus=5" in text
    assert "residue 0: jx=-19/5" in text and "(cancellation)" in text


def test_degree_caveat_row():
    status, text = run("degree", "--pretzel", "-3,3,3", "--colors", "2..6")
    assert status == 0
    assert "caveat" in text and "no cancellation analysis" in text
    status, text = run("degree", "--pretzel", "-3,3,3", "--colors", "2..6",
                       "--emit", "csv")
    assert status == 0
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["N", "lattice_max_degree", "caveat"]
    assert len(rows) == 6


def test_degree_csv_round_trip():
    status, text = run("degree", "--pretzel", "-5,4,3", "--colors", "2..20",
                       "--emit", "csv")
    assert status == 0
    parsed = [list(r) for r in csv.reader(io.StringIO(text))]
    degrees = {N: dg.predicted_degree((-5, 4, 3), N) for N in range(2, 21)}
    report = dg.empirical_degree_fit((-5, 4, 3), degrees)
    assert parsed == report.csv_rows()


def test_output_deterministic():
    for argv in [("jones", "--pretzel", "-5,4,3", "--colors", "2,3",
                  "--emit", "json"),
                 ("degree", "--pretzel", "-5,4,3", "--emit", "json")]:
        _, a = run(*argv)
        _, b = run(*argv)
        assert a == b


def test_threaded_emission_matches_serial(monkeypatch):
    argv = ("jones", "--pretzel", "-3,3,2", "--colors", "2,3", "--emit", "csv")
    _, serial = run(*argv)
    monkeypatch.setenv("PRETZELJONES_THREADS", "4")
    _, threaded = run(*argv)
    assert serial == threaded


def test_verify_fast_passes():
    status, text = run("verify", "--level", "fast")
    assert status == 0
    lines = text.strip().splitlines()
    assert all(l.startswith("ok ") for l in lines[:-1])
    assert lines[-1].startswith("passed")


def test_verify_catches_twist_mutation(monkeypatch):
    real = qring.twist_coeff

    def skewed(w, k, n):
        return real(w, k, n) * qring.HalfLaurent.monomial(1)

    monkeypatch.setattr(qring, "twist_coeff", skewed)
    status, text = run("verify", "--level", "fast")
    assert status == 1
    assert "FAIL" in text


def test_diagram_file_errors(tmp_path, capsys):
    status, _ = run("jones", "--diagram-in", str(tmp_path / "missing.json"))
    assert status == 2 and "cannot read" in capsys.readouterr().err
    empty = tmp_path / "empty.json"
    empty.write_text("")
    status, _ = run("jones", "--diagram-in", str(empty))
    assert status == 2 and "bad diagram file" in capsys.readouterr().err
    bad = tmp_path / "bad.json"
    bad.write_text('{"nodes": "nope"}')
    status, _ = run("jones", "--diagram-in", str(bad))
    assert status == 2 and "bad diagram file" in capsys.readouterr().err


def test_degree_narrow_colors_hint(capsys):
    status, _ = run("degree", "--pretzel=-5,4,3", "--colors", "2..12")
    assert status == 2
    err = capsys.readouterr().err
    assert "widen --colors" in err and "2..17" in err
