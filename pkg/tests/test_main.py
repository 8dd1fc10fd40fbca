import io
import json
import math
from pathlib import Path

import pandas as pd
import pytest

from src.event_logger import RunLogger
from src.main import main

GOLDEN = Path(__file__).parent / "golden"


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("FSOPLAN_CONFIG", raising=False)
    monkeypatch.delenv("FSOPLAN_SETTINGS", raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def csv_rows(text):
    return pd.read_csv(io.StringIO(text))


def test_optimize_matches_golden(capsys):
    code, out, _ = run(capsys, "optimize")
    assert code == 0

    payload = json.loads(out)
    golden = json.loads((GOLDEN / "optimize_default.json").read_text(encoding="utf-8"))
    for key, expected in golden.items():
        if isinstance(expected, float):
            assert payload[key] == pytest.approx(expected, rel=2e-3), key
        elif key == "fov_interval_deg":
            assert payload[key] == pytest.approx(expected, rel=2e-3)
        else:
            assert payload[key] == expected, key
    assert payload["monotone_chain"]["holds"]


def test_optimize_infeasible_exits_one(capsys, workdir):
    scenario = workdir / "narrow.json"
    scenario.write_text(json.dumps({"hsl_m": 25}), encoding="utf-8")

    code, out, err = run(capsys, "optimize", "--config", str(scenario))

    assert code == 1
    assert json.loads(out)["feasible"] is False
    assert "swath < HSL" in err


def test_optimize_csv(capsys):
    code, out, _ = run(capsys, "optimize", "--format", "csv")
    row = csv_rows(out).iloc[0]
    assert code == 0
    assert row["altitude_opt_m"] == pytest.approx(200.0)
    assert row["binding_constraints"] == "swath >= hsl;focal range"


def test_profile_table(capsys):
    code, out, _ = run(capsys, "profile", "--alt-min", "0", "--alt-max", "3000", "--step", "100")
    table = csv_rows(out)
    assert code == 0
    assert list(table.columns) == ["altitude_m", "cn2"]
    assert len(table) == 31
    assert table["cn2"].iloc[0] == pytest.approx(1.27e-14)
    assert table["cn2"].is_monotonic_decreasing


def test_profile_single_altitude(capsys):
    code, out, _ = run(capsys, "profile", "--alt-min", "100", "--alt-max", "100")
    assert code == 0
    assert len(csv_rows(out)) == 1


def test_profile_inverted_range(capsys):
    code, out, err = run(capsys, "profile", "--alt-min", "500", "--alt-max", "100")
    assert code == 2
    assert out == ""
    assert "alt-min" in err


def test_margin_curve_columns(capsys):
    code, out, _ = run(capsys, "margin-curve", "--fov", "120,90,10", "--points", "5")
    table = csv_rows(out)
    assert code == 0
    assert list(table.columns) == ["p0", "margin_db_fov120", "margin_db_fov90", "margin_db_fov10"]
    assert table["p0"].is_monotonic_increasing
    assert (table["margin_db_fov120"] > table["margin_db_fov10"]).all()


def test_margin_curve_rejects_half_outage(capsys):
    code, _, _ = run(capsys, "margin-curve", "--fov", "90", "--po-max", "0.5")
    assert code == 2


def test_fov_sweep_gain(capsys):
    code, out, _ = run(
        capsys, "fov-sweep", "--po", "1e-10", "--fov-min", "10", "--fov-max", "120", "--step", "10",
        "--link-length-m", "2000",
    )
    table = csv_rows(out)
    assert code == 0
    assert len(table) == 12
    assert table["fov_deg"].iloc[-1] == pytest.approx(120.0)
    assert table["margin_db"].iloc[-1] - table["margin_db"].iloc[0] == pytest.approx(9.47, abs=0.05)


def test_fov_sweep_json(capsys):
    code, out, _ = run(capsys, "fov-sweep", "--fov-min", "5", "--fov-max", "6", "--format", "json")
    rows = json.loads(out)
    assert code == 0
    assert [row["fov_deg"] for row in rows] == pytest.approx([5.0, 5.5, 6.0])


def test_gain_table_command(capsys):
    code, out, _ = run(capsys, "gain-table", "--fov", "120,90,10", "--po", "1e-10")
    table = csv_rows(out)
    assert code == 0
    assert table["gain_db"].iloc[0] == pytest.approx(9.47, abs=0.05)


def test_simulate_validation(capsys):
    code, out, _ = run(capsys, "simulate", "--s", "0.5", "--po", "1e-2", "--samples", "1e6", "--seed", "42")
    payload = json.loads(out)
    assert code == 0
    assert payload["passed"]
    assert payload["samples"] == 1_000_000
    assert payload["exact_outage"] == pytest.approx(2.58e-3, rel=5e-3)


def test_simulate_direct_margin(capsys):
    pm_db = 10.0 * math.log10(math.exp(0.25))
    code, out, _ = run(capsys, "simulate", "--s", "0.5", "--pm-db", repr(pm_db), "--samples", "100000")
    payload = json.loads(out)
    assert code == 0
    assert payload["empirical_outage"] == pytest.approx(0.5, abs=0.01)


def test_simulate_statistical_floor(capsys):
    code, out, err = run(capsys, "simulate", "--s", "0.5", "--po", "1e-6", "--samples", "1e6")
    assert code == 1
    assert out == ""
    assert "deep-tail" in err


def test_simulate_needs_one_target(capsys):
    assert run(capsys, "simulate", "--s", "0.5")[0] == 2
    assert run(capsys, "simulate", "--s", "0.5", "--po", "1e-2", "--pm-db", "3")[0] == 2


def test_unknown_scenario_key(capsys, workdir):
    scenario = workdir / "typo.json"
    scenario.write_text(json.dumps({"link_lenght_m": 2000}), encoding="utf-8")
    code, _, err = run(capsys, "optimize", "--config", str(scenario))
    assert code == 2
    assert "unknown scenario key 'link_lenght_m'" in err


def test_settings_pick_output_format(capsys, workdir):
    settings = workdir / "custom.yaml"
    settings.write_text("output:\n  format: json\nrun_log:\n  enabled: false\n", encoding="utf-8")
    code, out, _ = run(capsys, "--settings", str(settings), "profile", "--alt-max", "200")
    assert code == 0
    assert json.loads(out)[0]["altitude_m"] == 0.0
    assert not (workdir / "logs").exists()


def test_runs_are_logged(capsys, workdir):
    run(capsys, "profile", "--alt-max", "200")
    run(capsys, "profile", "--alt-min", "9", "--alt-max", "1")
    events = RunLogger(str(workdir / "logs" / "runs.jsonl")).get_recent()
    assert [e["details"]["exit_code"] for e in events] == [2, 0]
    assert events[0]["details"]["command"] == "profile"


def test_margin_curve_single_point(capsys):
    code, out, _ = run(capsys, "margin-curve", "--fov", "90", "--points", "1", "--po-min", "1e-6", "--po-max", "1e-6")
    assert code == 0
    assert len(csv_rows(out)) == 1


def test_margin_curve_without_turbulence(capsys, workdir):
    scenario = workdir / "calm.json"
    scenario.write_text(
        json.dumps({"ground_cn2": 0, "turbulence": {"high_alt_coeff": 0, "mid_alt_coeff": 0}}),
        encoding="utf-8",
    )
    code, out, _ = run(capsys, "margin-curve", "--fov", "90", "--points", "5", "--config", str(scenario))
    assert code == 0
    assert (csv_rows(out)["margin_db_fov90"] == 0.0).all()


def test_fov_sweep_long_link_is_monotone(capsys):
    code, out, _ = run(capsys, "fov-sweep", "--po", "1e-10", "--link-length-m", "5000")
    table = csv_rows(out)
    assert code == 0
    assert len(table) == 231
    assert table["margin_db"].is_monotonic_increasing


def test_fov_sweep_wide_step_gives_one_row(capsys):
    code, out, _ = run(capsys, "fov-sweep", "--fov-min", "30", "--fov-max", "40", "--step", "20")
    table = csv_rows(out)
    assert code == 0
    assert list(table["fov_deg"]) == pytest.approx([30.0])


def test_csv_and_json_agree(capsys):
    argv = ["fov-sweep", "--fov-min", "5", "--fov-max", "120", "--step", "15"]
    _, csv_out, _ = run(capsys, *argv, "--format", "csv")
    _, json_out, _ = run(capsys, *argv, "--format", "json")
    from_csv = csv_rows(csv_out)
    from_json = pd.DataFrame(json.loads(json_out))
    pd.testing.assert_frame_equal(from_csv, from_json[from_csv.columns], check_exact=False, rtol=1e-12)


def test_bad_log_level(capsys):
    assert run(capsys, "--log-level", "chatty", "profile")[0] == 2


@pytest.mark.parametrize("pm_db", ["4000", "inf", "nan"])
def test_simulate_margin_out_of_range(capsys, pm_db):
    code, out, err = run(capsys, "simulate", "--s", "0.5", "--pm-db", pm_db, "--samples", "1000")
    assert code == 2
    assert out == ""
    assert "pm-db" in err
