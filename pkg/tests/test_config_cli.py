"""Config parsing/validation and the command-line workflow."""

import json
import math
import os

import pytest

from nstirap import cli
from nstirap.config import load_config
from nstirap.errors import ParseError, ValidationError

TWO_PI = 2.0 * math.pi

MINIMAL = """\
output_stem: t
lasers:
  B: {{rabi_over_2pi_MHz: 400.0, detuning_over_2pi_MHz: 100.0}}
  R: {{rabi_over_2pi_MHz: 40.0, detuning_over_2pi_MHz: "auto_resonance:weak"}}
  C: {{rabi_over_2pi_MHz: 10.0, detuning_over_2pi_MHz: 100.0}}
pulses: {{direction: D_to_Q, tau_us: {tau}}}
scenario: {{preset: full_transfer}}
"""


def write(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def preset_path(name):
    return str(cli._preset_dir() / f"{name}.yaml")


def test_fig3_preset_resolves_caption_parameters():
    cfg = load_config(preset_path("fig3"))
    p = cfg.params
    assert p.omega_b0 == pytest.approx(TWO_PI * 400.0)
    assert p.omega_r0 == pytest.approx(TWO_PI * 40.0)
    assert p.omega_c == pytest.approx(TWO_PI * 10.0)
    assert p.delta_b == pytest.approx(TWO_PI * 100.0)
    assert p.delta_c == pytest.approx(TWO_PI * 100.0)
    assert p.tau == 20.0 and p.delta_t == 20.0
    assert p.atom.gamma_P == pytest.approx(1.0 / 7.0e-3)
    # the derived R detuning is echoed in the snapshot: -0.25 MHz
    assert cfg.snapshot["resolved"]["delta_R_over_2pi_MHz"] == pytest.approx(
        -0.25)
    assert cfg.snapshot["schema_version"]


def test_all_shipped_presets_load():
    for name in cli.list_preset_names():
        for member in cli.PRESET_GROUPS.get(name, (name,)):
            cfg = load_config(preset_path(member))
            assert cfg.output_stem == member


def test_scientific_notation_and_comments():
    text = MINIMAL.format(tau="20.0") + "integrator: {rtol: 1e-10}  # tight\n"
    cfg = load_config(write_tmp(text))
    assert cfg.params.integrator.rtol == 1e-10


# module-level scratch dir helper for the one test above
def write_tmp(text):
    import tempfile
    fd, path = tempfile.mkstemp(suffix=".yaml")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    return path


def test_validation_lists_every_problem(tmp_path):
    text = """\
lasers:
  B: {rabi_over_2pi_MHz: -5.0, detuning_over_2pi_MHz: 100.0}
  R: {rabi_over_2pi_MHz: 40.0, detuning_over_2pi_MHz: "auto_resonance:weak"}
pulses: {direction: sideways, tau_us: -2.0}
scenario: {preset: full_transfer}
"""
    with pytest.raises(ValidationError) as err:
        load_config(write(tmp_path, text))
    problems = "\n".join(err.value.problems)
    assert "pulses.tau_us" in problems
    assert "lasers.B.rabi_over_2pi_MHz" in problems
    assert "lasers.C" in problems  # missing section reported by field path
    assert "pulses.direction" in problems
    assert len(err.value.problems) >= 4  # all violations, not just the first


def test_auto_resonance_only_for_r_laser(tmp_path):
    text = MINIMAL.format(tau="20.0").replace(
        'B: {rabi_over_2pi_MHz: 400.0, detuning_over_2pi_MHz: 100.0}',
        'B: {rabi_over_2pi_MHz: 400.0, detuning_over_2pi_MHz: "auto_resonance:weak"}')
    with pytest.raises(ValidationError, match="only defined for the R laser"):
        load_config(write(tmp_path, text))


def test_parse_error_reports_line(tmp_path):
    with pytest.raises(ParseError, match="line"):
        load_config(write(tmp_path, "lasers:\n  B: {rabi: [unclosed\n"))
    with pytest.raises(ParseError):
        load_config(str(tmp_path / "missing.yaml"))


def test_cli_exit_codes(tmp_path, capsys):
    bad = write(tmp_path, MINIMAL.format(tau="-1.0"))
    assert cli.main(["validate", "--config", bad]) == 1
    err = capsys.readouterr().err
    record = json.loads(err)
    assert record["error"] == "validation"
    assert any("pulses.tau_us" in p for p in record["problems"])
    good = write(tmp_path, MINIMAL.format(tau="20.0"))
    assert cli.main(["validate", "--config", good]) == 0


def test_cli_run_scan_kind_mismatch(tmp_path):
    good = write(tmp_path, MINIMAL.format(tau="20.0"))
    assert cli.main(["scan", "--config", good,
                     "--out", str(tmp_path / "o")]) == 1


def test_cli_run_writes_outputs_and_snapshot_roundtrip(tmp_path):
    text = MINIMAL.format(tau="5.0")
    cfg_path = write(tmp_path, text)
    out = tmp_path / "out"
    assert cli.main(["run", "--config", cfg_path, "--out", str(out)]) == 0
    ts_file = out / "t_timeseries.csv"
    summary = json.loads((out / "t_summary.json").read_text())
    header = ts_file.read_text().splitlines()
    assert header[0] == "# schema: nstirap-timeseries-1"
    assert header[2].split(",") == list(cli.TIMESERIES_COLUMNS)
    assert summary["schema"] == "nstirap-summary-1"
    assert "wall" not in json.dumps(summary)  # no wall time in data files
    assert 0.99 < summary["results"]["F_after_stirap"] <= 1.0

    # re-running from the embedded snapshot reproduces the file byte-for-byte
    snap = header[1].removeprefix("# config: ")
    snap_path = write(tmp_path, snap, "snapshot.yaml")  # JSON is valid YAML
    out2 = tmp_path / "out2"
    assert cli.main(["run", "--config", snap_path, "--out", str(out2)]) == 0
    assert (out2 / "t_timeseries.csv").read_bytes() == ts_file.read_bytes()


def test_cli_scan_worker_independence(tmp_path):
    text = """\
output_stem: s
lasers:
  B: {rabi_over_2pi_MHz: 400.0, detuning_over_2pi_MHz: 100.0}
  R: {rabi_over_2pi_MHz: 40.0, detuning_over_2pi_MHz: "auto_resonance:weak"}
  C: {rabi_over_2pi_MHz: 10.0, detuning_over_2pi_MHz: 100.0}
pulses: {direction: D_to_Q, tau_us: 5.0}
scenario:
  preset: scan_tau
  scan: {parameter: tau_us, values: [4.0, 5.0, 6.0]}
"""
    cfg_path = write(tmp_path, text)
    a, b = tmp_path / "w1", tmp_path / "w4"
    assert cli.main(["scan", "--config", cfg_path, "--out", str(a),
                     "--workers", "1"]) == 0
    assert cli.main(["scan", "--config", cfg_path, "--out", str(b),
                     "--workers", "4"]) == 0
    assert (a / "s_scan.csv").read_bytes() == (b / "s_scan.csv").read_bytes()
    lines = (a / "s_scan.csv").read_text().splitlines()
    assert lines[2].split(",") == list(cli.SCAN_COLUMNS)
    assert all(line.endswith(",ok") for line in lines[3:])


def test_cli_rtol_override_recorded(tmp_path):
    cfg_path = write(tmp_path, MINIMAL.format(tau="5.0"))
    out = tmp_path / "o"
    assert cli.main(["run", "--config", cfg_path, "--out", str(out),
                     "--rtol", "1e-8"]) == 0
    summary = json.loads((out / "t_summary.json").read_text())
    assert summary["config"]["integrator"]["rtol"] == 1e-8


def test_cli_json_format(tmp_path):
    cfg_path = write(tmp_path, MINIMAL.format(tau="5.0"))
    out = tmp_path / "oj"
    assert cli.main(["run", "--config", cfg_path, "--out", str(out),
                     "--format", "json"]) == 0
    doc = json.loads((out / "t_timeseries.json").read_text())
    assert doc["columns"] == list(cli.TIMESERIES_COLUMNS)
    assert len(doc["rows"]) > 10


def test_list_presets_contains_required_names():
    names = cli.list_preset_names()
    for required in ("fig3", "fig4_weak", "fig4_strong", "fig5",
                     "fig6_strong_near", "fig6_strong_far", "fig6_weak_near",
                     "fig6_weak_far", "fig7", "fig8", "reverse"):
        assert required in names
    with pytest.raises(ParseError, match="unknown preset"):
        cli._preset_configs("not_a_preset", None)
