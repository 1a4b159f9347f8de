import json
import math

import pytest

import latticebounds as lb
from latticebounds.cli import main


def run(args):
    return main(args)


def test_spectrum_command_writes_valid_file(tmp_path):
    out = tmp_path / "z2.json"
    assert run(["spectrum", "--lattice", "Z2", "--radius", "2.3", "--out", str(out)]) == 0
    spec = lb.load_spectrum(out)
    assert spec.entries == ((1.0, 4), (2.0, 4), (4.0, 4), (5.0, 8))


def test_spectrum_command_user_generator(tmp_path):
    gen_file = tmp_path / "gen.json"
    gen_file.write_text(json.dumps({"name": "scaledZ2", "generator": [[2, 0], [0, 2]]}))
    out = tmp_path / "s.json"
    assert run(["spectrum", "--generator", str(gen_file), "--radius", "2.5", "--out", str(out)]) == 0
    spec = lb.load_spectrum(out)
    assert spec.entries == ((4.0, 4),)
    assert spec.log_density == pytest.approx(-math.log(4.0) / 2.0)


def test_spectrum_command_unknown_lattice(capsys):
    assert run(["spectrum", "--lattice", "K12", "--radius", "1.0"]) == 2
    assert "unknown lattice" in capsys.readouterr().err


def test_spectrum_command_bad_radius():
    with pytest.raises(SystemExit):
        run(["spectrum", "--lattice", "Z2", "--radius", "0"])


def test_alpha_command_opt_flat(tmp_path):
    src = tmp_path / "z2.json"
    run(["spectrum", "--lattice", "Z2", "--radius", "2.3", "--out", str(src)])
    out = tmp_path / "alpha.csv"
    assert (
        run(
            [
                "alpha",
                "--spectrum",
                str(src),
                "--mode",
                "opt",
                "--lambda-max",
                str(math.sqrt(5.0)),
                "--out",
                str(out),
            ]
        )
        == 0
    )
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "shell_index,lambda_lo,lambda_hi,alpha_value"
    values = [float(line.split(",")[3]) for line in lines[1:]]
    assert values == pytest.approx([4 / math.pi] * 4, rel=1e-12)


def test_alpha_command_rng_levels(tmp_path):
    out = tmp_path / "alpha.csv"
    run(["alpha", "--lattice", "Z2", "--radius", "2.3", "--mode", "rng", "--M", "4", "--out", str(out)])
    lines = out.read_text().strip().splitlines()
    values = [float(line.split(",")[3]) for line in lines[1:]]
    assert values == pytest.approx(
        [4 / math.pi, 4 / math.pi, 2 / math.pi, 8 / math.pi], rel=1e-12
    )


def test_bound_command_rows_and_exit(tmp_path):
    out = tmp_path / "bound.csv"
    code = run(
        [
            "bound",
            "--lattice",
            "Z2",
            "--radius",
            "4.0",
            "--methods",
            "ub,mhs,dmhs,sub,slb",
            "--sigma",
            "0.2:0.4:3",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    header = lines[0].split(",")
    assert header == [
        "sigma",
        "vnr_db",
        "method",
        "r_opt",
        "ubt",
        "sbt",
        "total",
        "M_used",
        "alpha_used",
        "iterations",
        "status",
    ]
    assert len(lines) == 1 + 5 * 3
    assert all(line.endswith(",ok") for line in lines[1:])


def test_bound_command_marks_errors(tmp_path):
    # spectrum too shallow for the DMHS radius -> error rows, exit 1
    spec = lb.DistanceSpectrum(
        n=2, log_density=0.0, entries=((1.0, 4),), complete_radius=0.95, name="trunc"
    )
    src = tmp_path / "trunc.json"
    lb.save_spectrum(spec, src)
    out = tmp_path / "bound.csv"
    code = run(
        [
            "bound",
            "--spectrum",
            str(src),
            "--methods",
            "dmhs",
            "--sigma",
            "0.2:0.2:1",
            "--out",
            str(out),
        ]
    )
    assert code == 1
    rows = out.read_text().strip().splitlines()[1:]
    assert all("error:" in row for row in rows)


def test_bound_command_leech_catalog(tmp_path):
    out = tmp_path / "leech.csv"
    code = run(
        [
            "bound",
            "--lattice",
            "Leech",
            "--methods",
            "dmhs,slb",
            "--vnr-db",
            "1:3:2",
            "--out",
            str(out),
        ]
    )
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 5


def test_bound_command_requires_one_grid(tmp_path):
    with pytest.raises(SystemExit):
        run(["bound", "--lattice", "Z2", "--radius", "2.3"])


def test_exponent_command(tmp_path):
    paths = []
    for name in ("D4", "E8", "BW16"):
        p = tmp_path / f"{name}.json"
        lb.save_spectrum(lb.catalog_spectrum(name), p)
        paths.append(str(p))
    out = tmp_path / "nu.csv"
    code = run(["exponent", "--spectra", *paths, "--sigma", "0.2", "--out", str(out)])
    assert code == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0] == "n,delta,alpha_n,nu,exponent"
    nus = [float(line.split(",")[3]) for line in lines[1:]]
    assert nus[0] > nus[1] > nus[2]


def test_simulate_command_deterministic(tmp_path):
    out1 = tmp_path / "sim1.csv"
    out2 = tmp_path / "sim2.csv"
    args = ["simulate", "--lattice", "Z2", "--sigma", "0.5:0.5:1", "--trials", "20000", "--seed", "9"]
    assert run(args + ["--out", str(out1)]) == 0
    assert run(args + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    row = out1.read_text().strip().splitlines()[1].split(",")
    assert row[0] == "Z2" and row[2] == "20000" and row[6] == "9"


def test_bound_command_byte_identical(tmp_path):
    out1 = tmp_path / "b1.csv"
    out2 = tmp_path / "b2.csv"
    args = [
        "bound", "--lattice", "D4", "--radius", "3.2",
        "--methods", "sub,dmhs", "--sigma", "0.2:0.3:2",
    ]
    run(args + ["--out", str(out1)])
    run(args + ["--out", str(out2)])
    assert out1.read_bytes() == out2.read_bytes()


def test_json_format(tmp_path):
    out = tmp_path / "sim.json"
    run(
        [
            "simulate",
            "--lattice",
            "Z1",
            "--sigma",
            "0.5:0.5:1",
            "--trials",
            "1000",
            "--format",
            "json",
            "--out",
            str(out),
        ]
    )
    payload = json.loads(out.read_text())
    assert payload[0]["lattice"] == "Z1"
    assert int(payload[0]["trials"]) == 1000
