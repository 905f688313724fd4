"""CLI surface: exit codes, schemas, determinism, and thin-adapter checks."""

import json

import pytest

from anchorsim import diameter_sweep, load_media
from anchorsim.cli import main
from anchorsim.report import TableResult
from anchorsim.scenario import geometry_to_dict, parse_geometry


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def read_bytes(path):
    with open(path, "rb") as handle:
        return handle.read()


# ----------------------------------------------------------------------
# Basic command behaviour and exit codes
# ----------------------------------------------------------------------

def test_critical_depth_summary_reports_crossover(capsys):
    code, out, err = run_cli(
        capsys,
        "critical-depth",
        "--media", "loose_sand_calibrated",
        "--diameter-m", "0.015",
        "--length-m", "0.15",
    )
    assert code == 0, err
    value = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert float(value["critical_depth_m"]) == pytest.approx(0.12, abs=1e-3)


def test_malformed_media_missing_zeta_exits_2(capsys, tmp_path):
    profile = json.loads(
        json.dumps(load_media("generic_sand").to_dict())
    )
    del profile["zeta"]
    bad = tmp_path / "bad_media.json"
    bad.write_text(json.dumps(profile))
    code, out, err = run_cli(
        capsys,
        "critical-depth",
        "--media", str(bad),
        "--diameter-m", "0.015",
        "--length-m", "0.15",
    )
    assert code == 2
    assert "zeta" in err


def test_invalid_json_reports_line(capsys, tmp_path):
    bad = tmp_path / "broken.json"
    bad.write_text('{\n "schema": 1,\n broken\n}\n')
    code, out, err = run_cli(
        capsys,
        "critical-depth",
        "--media", str(bad),
        "--diameter-m", "0.015",
        "--length-m", "0.15",
    )
    assert code == 2
    assert "line 3" in err


def test_model_error_exits_1(capsys):
    code, out, err = run_cli(
        capsys,
        "sweep-angle",
        "--media", "loose_sand_calibrated",
        "--diameter-m", "0.015",
        "--length-m", "0.15",
        "--angles", "0,70",
    )
    assert code == 1
    assert "range" in err


def test_unknown_scenario_command_exits_2(capsys, tmp_path):
    doc = {"schema": 1, "command": "launch", "media": "generic_sand"}
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "run", str(path))
    assert code == 2
    assert "command" in err


def test_missing_schema_version_exits_2(capsys, tmp_path):
    doc = {"command": "critical-depth", "media": "generic_sand"}
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(doc))
    code, out, err = run_cli(capsys, "run", str(path))
    assert code == 2
    assert "schema" in err


def test_seed_and_element_size_flags_accepted(capsys):
    code, out, err = run_cli(
        capsys,
        "critical-depth",
        "--media", "loose_sand_calibrated",
        "--diameter-m", "0.015",
        "--length-m", "0.15",
        "--seed", "7",
        "--element-size", "0.0005",
    )
    assert code == 0, err


def test_centimeter_convenience_flags(capsys):
    code, out, err = run_cli(
        capsys,
        "critical-depth",
        "--media", "loose_sand_calibrated",
        "--diameter-cm", "1.5",
        "--length-cm", "15",
    )
    assert code == 0, err
    value = dict(line.split(": ", 1) for line in out.strip().splitlines())
    assert float(value["critical_depth_m"]) == pytest.approx(0.12, abs=1e-3)


# ----------------------------------------------------------------------
# CSV output: columns, footer, determinism, thin adapter
# ----------------------------------------------------------------------

def sweep_args(out_path):
    return (
        "sweep-diameter",
        "--media", "loose_sand_calibrated",
        "--depth-m", "0.15",
        "--diameter-span", "0.007", "0.03", "8",
        "--format", "csv",
        "--out", str(out_path),
    )


def test_sweep_csv_columns_and_footer(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    code, _, err = run_cli(capsys, *sweep_args(out))
    assert code == 0, err
    lines = out.read_text().splitlines()
    assert lines[0] == "diameter_m,insertion_N,extraction_N,ratio"
    footer = lines[-1].split(",")
    assert footer[0] == "loglog_exponent"
    assert float(footer[1]) == pytest.approx(2.0, abs=0.05)
    assert float(footer[2]) == pytest.approx(1.0, abs=0.05)


def test_sweep_csv_uses_crlf(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    run_cli(capsys, *sweep_args(out))
    assert b"\r\n" in read_bytes(out)


def test_sweep_csv_is_byte_identical_across_runs(capsys, tmp_path):
    out1 = tmp_path / "a.csv"
    out2 = tmp_path / "b.csv"
    run_cli(capsys, *sweep_args(out1))
    run_cli(capsys, *sweep_args(out2))
    assert read_bytes(out1) == read_bytes(out2)


def test_sweep_csv_matches_library_values(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    run_cli(capsys, *sweep_args(out))
    media = load_media("loose_sand_calibrated")
    step = (0.03 - 0.007) / 7
    sweep = diameter_sweep([0.007 + i * step for i in range(8)], 0.15, media)
    lines = out.read_text().splitlines()[1:-1]
    for line, d, f_in, f_ex in zip(lines, sweep.diameters, sweep.insertion, sweep.extraction):
        cells = line.split(",")
        assert float(cells[0]) == pytest.approx(d, rel=1e-5)
        assert float(cells[1]) == pytest.approx(f_in, rel=1e-5)
        assert float(cells[2]) == pytest.approx(f_ex, rel=1e-5)


def test_no_temp_files_left_behind(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    run_cli(capsys, *sweep_args(out))
    assert sorted(p.name for p in tmp_path.iterdir()) == ["sweep.csv"]


def test_unwritable_output_path_exits_1(capsys, tmp_path):
    blocker = tmp_path / "not_a_dir"
    blocker.write_text("plain file")
    code, out, err = run_cli(capsys, *sweep_args(blocker / "out.csv"))
    assert code == 1
    assert err.strip()


# ----------------------------------------------------------------------
# SVG output
# ----------------------------------------------------------------------

def test_critical_depth_svg_marks_the_crossover(capsys, tmp_path):
    out = tmp_path / "net.svg"
    code, _, err = run_cli(
        capsys,
        "critical-depth",
        "--media", "loose_sand_calibrated",
        "--diameter-m", "0.015",
        "--length-m", "0.15",
        "--format", "svg",
        "--out", str(out),
    )
    assert code == 0, err
    svg = out.read_text()
    assert svg.startswith("<?xml")
    assert "h* = 0.120 m" in svg
    assert "depth [m]" in svg


def test_svg_is_byte_identical_across_runs(capsys, tmp_path):
    paths = []
    for name in ("a.svg", "b.svg"):
        out = tmp_path / name
        run_cli(
            capsys,
            "simulate",
            "--media", "loose_sand_calibrated",
            "--diameter-m", "0.015",
            "--length-m", "0.15",
            "--format", "svg",
            "--out", str(out),
        )
        paths.append(out)
    assert read_bytes(paths[0]) == read_bytes(paths[1])


def test_plot_flag_renders_figure_next_to_csv(capsys, tmp_path):
    out = tmp_path / "sweep.csv"
    fig = tmp_path / "sweep.svg"
    code, _, err = run_cli(capsys, *sweep_args(out), "--plot", str(fig))
    assert code == 0, err
    assert out.exists()
    assert fig.read_text().startswith("<?xml")


# ----------------------------------------------------------------------
# Scenario documents
# ----------------------------------------------------------------------

def test_scenario_run_matches_subcommand(capsys, tmp_path):
    direct = tmp_path / "direct.csv"
    run_cli(capsys, *sweep_args(direct))
    scenario = {
        "schema": 1,
        "command": "sweep-diameter",
        "media": "loose_sand_calibrated",
        "params": {
            "depth_m": 0.15,
            "diameters_m": [0.007 + i * (0.03 - 0.007) / 7 for i in range(8)],
        },
        "output": {"path": str(tmp_path / "scenario.csv"), "format": "csv"},
    }
    doc = tmp_path / "scenario.json"
    doc.write_text(json.dumps(scenario))
    code, _, err = run_cli(capsys, "run", str(doc))
    assert code == 0, err
    assert read_bytes(direct) == read_bytes(tmp_path / "scenario.csv")


def test_evaluate_scenario_with_config_file(capsys, tmp_path):
    from importlib import resources

    config_path = resources.files("anchorsim").joinpath("data/staged_demo_config.json")
    code, out, err = run_cli(capsys, "evaluate", "--config", str(config_path))
    assert code == 0, err
    assert "feasible: yes" in out


def test_calibrate_cli_writes_media_profile(capsys, tmp_path):
    from importlib import resources

    samples = resources.files("anchorsim").joinpath("data/selfanchor_weights.csv")
    out_media = tmp_path / "calibrated.json"
    code, out, err = run_cli(
        capsys,
        "calibrate",
        "--media", "generic_sand",
        "--samples", str(samples),
        "--diameter-m", "0.015",
        "--length-m", "0.15",
        "--out-media", str(out_media),
    )
    assert code == 0, err
    profile = load_media(str(out_media))
    ratio = profile.tip_coefficient / profile.side_coefficient
    assert ratio == pytest.approx(16.0, rel=1e-3)


def test_calibrate_cli_peak_ratios(capsys):
    code, out, err = run_cli(
        capsys,
        "calibrate",
        "--media", "generic_sand",
        "--peak-intruder", "2.0",
        "--peak-hairless", "5.0",
        "--peak-hairy", "7.0",
    )
    assert code == 0, err
    assert "rho: 2.5" in out
    assert "hair_factor: 1.4" in out


# ----------------------------------------------------------------------
# Report primitives
# ----------------------------------------------------------------------

def test_empty_table_renders_header_only():
    table = TableResult(columns=("a_m", "b_N"))
    assert table.to_csv() == "a_m,b_N\r\n"


def test_repeated_emission_is_identical():
    table = TableResult(
        columns=("a_m", "b_N"),
        rows=[(0.1, 2.0 / 3.0)],
        footer=[("note", 1.0)],
        summary={"x": 1.23456789},
    )
    assert table.to_csv() == table.to_csv()
    assert table.to_summary() == table.to_summary()


def test_six_significant_digits():
    table = TableResult(columns=("v",), rows=[(1.23456789,), (1234567.89,)])
    lines = table.to_csv().splitlines()
    assert lines[1] == "1.23457"
    assert lines[2] == "1.23457e+06"


def test_degree_round_trip_is_exact_to_twelve_digits():
    for angle in (0.0, 7.5, 15.0, 33.333333, 45.0, 59.999999):
        doc = geometry_to_dict(
            parse_geometry({"diameter_m": 0.015, "length_m": 0.15, "tilt_deg": angle})
        )
        assert doc["tilt_deg"] == pytest.approx(angle, rel=1e-12, abs=1e-12)
