import json
import math

import pytest

from efimov import __version__
from efimov.cli import ConfigError, main, read_config
from efimov.numerics import ConvergenceError


def run(argv):
    return main(argv)


def test_channels_output_deterministic(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    assert run(["channels", "--rho", "0.0", "-0.5", "--output", str(out1)]) == 0
    assert run(["channels", "--rho", "0.0", "-0.5", "--output", str(out2)]) == 0
    b1, b2 = out1.read_bytes(), out2.read_bytes()
    assert b1 == b2
    text = b1.decode("utf-8")
    assert "\r" not in text
    assert text.splitlines()[0] == "quantity,value"
    vals = dict(line.split(",") for line in text.splitlines()[1:])
    assert float(vals["s0"]) == pytest.approx(1.00624, abs=1e-5)
    assert float(vals["lambda0"]) == pytest.approx(22.694, abs=1e-3)


def test_universal_csv_and_manifest(tmp_path):
    out = tmp_path / "u.csv"
    man = tmp_path / "u.json"
    const = tmp_path / "c.json"
    rc = run(
        [
            "universal", "--points", "5", "--inv-a-min", "-0.4", "--inv-a-max", "1.0",
            "--levels", "2", "--output", str(out), "--manifest", str(man),
            "--constants", str(const),
        ]
    )
    assert rc == 0
    lines = out.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "inv_a,level,kappa"
    for line in lines[1:]:
        inv_a, level, kappa = line.split(",")
        assert float(kappa) < 0
        assert int(level) in (0, 1)
    doc = json.loads(man.read_text())
    assert doc["version"] == __version__
    assert doc["subcommand"] == "universal"
    assert doc["inputs"]["points"] == 5
    assert str(out) in doc["outputs"]
    cdoc = json.loads(const.read_text())
    assert cdoc["kappa_star_a_minus_from_delta"] == pytest.approx(-1.507, abs=5e-3)


def test_config_file_round_trip(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("points = 4\ninv-a-min = -0.2  # comment\n\n", encoding="utf-8")
    parsed = read_config(str(cfg))
    assert parsed == {"points": 4, "inv_a_min": -0.2}
    out = tmp_path / "u.csv"
    rc = run(["universal", "--config", str(cfg), "--output", str(out)])
    assert rc == 0


def test_config_errors_exit_2(tmp_path):
    assert run(["universal", "--config", str(tmp_path / "missing.cfg")]) == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("this has no equals sign\n", encoding="utf-8")
    assert run(["universal", "--config", str(bad)]) == 2
    unknown = tmp_path / "unknown.cfg"
    unknown.write_text("no_such_key = 1\n", encoding="utf-8")
    assert run(["universal", "--config", str(unknown)]) == 2
    with pytest.raises(ConfigError):
        read_config(str(bad))


def test_invalid_values_exit_2(tmp_path):
    out = str(tmp_path / "x.csv")
    # kappa_star <= 0 is a domain error in the universal formula
    assert run(["universal", "--kappa-star", "-1.0", "--output", out]) == 2
    assert run(["stm", "--a", "bogus", "--output", out]) == 2
    assert run(["stm", "--E-min", "-1.0", "--E-max", "1.0", "--output", out]) == 2


def test_solver_failure_exits_3(monkeypatch, tmp_path):
    import efimov.cli as cli

    def boom(args):
        raise ConvergenceError("did not converge")

    # build_parser resolves cmd_channels from module globals on each call,
    # so the patched function is picked up by main
    monkeypatch.setattr(cli, "cmd_channels", boom)
    assert cli.main(["channels", "--output", str(tmp_path / "x.csv")]) == 3


def test_hbar2_over_m_scales_energies(tmp_path):
    out1, out2 = tmp_path / "n.csv", tmp_path / "s.csv"
    args = ["hyperradial", "--kappa-min", "1e-3", "--kappa-max", "1.0"]
    assert run(args + ["--output", str(out1)]) == 0
    assert run(args + ["--hbar2-over-m", "41.46", "--output", str(out2)]) == 0
    rows1 = [l.split(",") for l in out1.read_text().splitlines()[1:]]
    rows2 = [l.split(",") for l in out2.read_text().splitlines()[1:]]
    for r1, r2 in zip(rows1, rows2):
        assert float(r2[3]) == pytest.approx(41.46 * float(r1[1]), rel=1e-12)


def test_bo_subcommand(tmp_path):
    out = tmp_path / "bo.csv"
    rc = run(
        ["bo", "--a", "-2.0", "--mass-ratio", "25", "--points", "40",
         "--R-min", "0.01", "--R-max", "10", "--output", str(out)]
    )
    assert rc == 0
    rows = [l.split(",") for l in out.read_text().splitlines()[1:]]
    # channel closes at R = |a|: no rows beyond
    assert all(float(r[0]) <= 2.0 + 1e-9 for r in rows)
    assert all(float(r[1]) > 0 for r in rows)


def test_twobody_subcommand(tmp_path):
    out = tmp_path / "tb.csv"
    rc = run(
        ["twobody", "--potential", "poschl_teller", "--param", "lambda=1.3",
         "--param", "range=1.0", "--output", str(out)]
    )
    assert rc == 0
    vals = dict(l.split(",") for l in out.read_text().splitlines()[1:])
    assert float(vals["a"]) > 0
    assert float(vals["dimer_effective_range"]) < 0
    assert run(["twobody", "--param", "broken", "--output", str(out)]) == 2


def test_verify_passes_on_this_build(capsys):
    assert run(["verify"]) == 0
    out = capsys.readouterr().out
    assert "all constants verified" in out
    assert "FAIL" not in out


def test_verify_reports_failures(monkeypatch, capsys):
    import efimov.cli as cli

    monkeypatch.setattr(
        cli, "_verify_table", lambda: [("broken_constant", 1.0, 2.0, 1e-6)]
    )
    assert cli.main(["verify"]) == 1
    assert "FAIL broken_constant" in capsys.readouterr().out


def test_version_format():
    parts = __version__.split(".")
    assert len(parts) == 3 and all(p.isdigit() for p in parts)
