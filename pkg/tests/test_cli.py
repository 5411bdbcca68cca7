import json

import pytest

from scenograph.cli import main

from conftest import FIXTURES


def run_cli(*argv):
    with pytest.raises(SystemExit) as status:
        main(list(argv))
    return status.value.code or 0


def fixture(name: str) -> str:
    return str(FIXTURES / name)


# -- validate -----------------------------------------------------------------


def test_validate_valid_scenario(capsys):
    assert run_cli("validate", fixture("uis1.json")) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_bad_join(capsys):
    assert run_cli("validate", fixture("bad_join.json")) == 1
    assert "R5" in capsys.readouterr().out


def test_validate_missing_file(capsys):
    assert run_cli("validate", "does_not_exist.json") == 2


def test_validate_strict_turns_warnings_into_failure(capsys):
    assert run_cli("validate", fixture("ped_50kmh.json")) == 0
    assert run_cli("validate", fixture("ped_50kmh.json"), "--strict") == 1


def test_validate_structured_output(capsys):
    assert run_cli("validate", fixture("bad_join.json"), "--format", "structured") == 1
    report = json.loads(capsys.readouterr().out)
    assert report["is_valid"] is False
    assert report["findings"][0]["rule_id"] == "R5"


# -- export -------------------------------------------------------------------


def test_export_matches_golden(tmp_path, capsys):
    out = tmp_path / "uis1.xosc"
    assert run_cli("export", fixture("uis1.json"), "--out", str(out)) == 0
    assert out.read_bytes() == (FIXTURES / "golden" / "uis1.xosc").read_bytes()


def test_export_uis2_matches_golden(tmp_path):
    out = tmp_path / "uis2.xosc"
    assert run_cli("export", fixture("uis2.json"), "--out", str(out)) == 0
    assert out.read_bytes() == (FIXTURES / "golden" / "uis2.xosc").read_bytes()


def test_export_logical_fails_with_level_error(tmp_path, capsys):
    out = tmp_path / "x.xosc"
    assert run_cli("export", fixture("uis1_logical.json"), "--out", str(out)) == 1
    assert "LevelError" in capsys.readouterr().err
    assert not out.exists()


# -- run ----------------------------------------------------------------------


def test_run_uis1(capsys):
    assert run_cli("run", fixture("uis1.json")) == 0
    assert "Completed" in capsys.readouterr().out


def test_run_logical_variant_by_index(capsys):
    assert run_cli("run", fixture("uis1_logical.json"), "--index", "7") == 0
    assert "Collision(ego,bike)" in capsys.readouterr().out


def test_run_logical_without_index_fails(capsys):
    assert run_cli("run", fixture("uis1_logical.json")) == 1
    assert "LevelError" in capsys.readouterr().err


def test_run_bad_index_is_usage_error(capsys):
    assert run_cli("run", fixture("uis1_logical.json"), "--index", "99") == 2


def test_run_zero_dt_is_usage_error(capsys):
    assert run_cli("run", fixture("uis1.json"), "--dt", "0") == 2


def test_run_writes_trace(tmp_path, capsys):
    out = tmp_path / "trace.json"
    assert run_cli("run", fixture("uis1.json"), "--out", str(out)) == 0
    trace = json.loads(out.read_text())
    assert trace["outcome"]["kind"] == "Completed"
    assert trace["tick_config"]["dt"] == 0.05
    assert trace["events"][0]["node"] == "root"


def test_run_does_not_mutate_input(tmp_path):
    source = (FIXTURES / "uis1.json").read_bytes()
    assert run_cli("run", fixture("uis1.json")) == 0
    assert (FIXTURES / "uis1.json").read_bytes() == source


# -- sweep ----------------------------------------------------------------------


def test_sweep_reproduces_committed_oracle(capsys):
    assert run_cli("sweep", fixture("uis1_logical.json")) == 0
    table = capsys.readouterr().out
    committed = (FIXTURES / "uis1_logical_sweep.csv").read_text()
    assert table == committed


def test_sweep_parallel_output_is_identical(capsys):
    assert run_cli("sweep", fixture("uis1_logical.json"), "--jobs", "4") == 0
    table = capsys.readouterr().out
    assert table == (FIXTURES / "uis1_logical_sweep.csv").read_text()


def test_sweep_concrete_scenario_is_single_row(capsys):
    assert run_cli("sweep", fixture("uis1.json")) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 2  # header + one row
    assert lines[1].startswith("0,Completed,")


def test_sweep_functional_fails(capsys):
    assert run_cli("sweep", fixture("uis1_functional.json")) == 1


def test_sweep_out_dir_writes_variants(tmp_path, capsys):
    assert run_cli("sweep", fixture("uis1_logical.json"),
                   "--out-dir", str(tmp_path)) == 0
    assert (tmp_path / "sweep.csv").read_text() == \
        (FIXTURES / "uis1_logical_sweep.csv").read_text()
    assert (tmp_path / "variant_0000.json").exists()
    assert (tmp_path / "variant_0011.json").exists()


# -- lib --------------------------------------------------------------------------


def test_lib_add_list_show(tmp_path, capsys):
    catalog = str(tmp_path / "catalog")
    assert run_cli("lib", "add", fixture("crossing_maneuver.module.json"),
                   "--catalog", catalog) == 0
    revision = capsys.readouterr().out.split()[-1]
    assert run_cli("lib", "list", "--catalog", catalog) == 0
    listing = capsys.readouterr().out
    assert "CrossingManeuver" in listing and revision in listing
    assert run_cli("lib", "show", "CrossingManeuver", "--catalog", catalog) == 0
    shown = json.loads(capsys.readouterr().out)
    assert shown["name"] == "CrossingManeuver"
    assert shown["roles"] == ["crosser", "trigger"]


def test_lib_show_unknown(tmp_path, capsys):
    assert run_cli("lib", "show", "Nothing", "--catalog", str(tmp_path)) == 2


# -- registry overrides ------------------------------------------------------------


def test_config_overrides_r8_bounds(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({
        "limits": {"Pedestrian": {"max_speed": 20.0}}
    }))
    assert run_cli("validate", fixture("ped_50kmh.json"), "--strict",
                   "--config", str(config)) == 0


def test_run_logical_variant_by_seed(capsys):
    assert run_cli("run", fixture("uis1_logical.json"), "--seed", "42") == 0
    first = capsys.readouterr().out
    assert run_cli("run", fixture("uis1_logical.json"), "--seed", "42") == 0
    assert capsys.readouterr().out == first  # sampling is seed-deterministic


def test_export_with_catalog_locations(tmp_path, capsys):
    out = tmp_path / "uis1.xosc"
    assert run_cli("export", fixture("uis1.json"), "--out", str(out),
                   "--catalog-locations", "Vehicle=../catalogs/vehicles") == 0
    text = out.read_text()
    assert "<VehicleCatalog>" in text
    assert 'path="../catalogs/vehicles"' in text
