import csv
import json

import pytest

from ioshock import file_digest
from ioshock.cli import _grid_values, build_parser, run_command

ECONOMY = """\
industry,upstream,parts,goods,final_demand
upstream,0,4,2,4
parts,0,0,0,6
goods,0,0,0,8
"""

SHOCKS = """\
industry,supply_shock,demand_shock
upstream,0.5,0
parts,0,0
goods,0,0
"""


@pytest.fixture
def files(tmp_path):
    e = tmp_path / "economy.csv"
    s = tmp_path / "shocks.csv"
    e.write_text(ECONOMY, encoding="utf-8")
    s.write_text(SHOCKS, encoding="utf-8")
    return {"economy": str(e), "shocks": str(s), "out": str(tmp_path / "out")}


def read_table(path):
    lines = open(path, encoding="utf-8").read().splitlines()
    assert lines[0].startswith("# ")
    return json.loads(lines[0][2:]), list(csv.DictReader(lines[1:]))


class TestGridValues:
    def test_scalar(self):
        assert _grid_values("0.3") == [0.3]

    def test_range(self):
        assert _grid_values("0:1:0.25") == [0.0, 0.25, 0.5, 0.75, 1.0]

    def test_range_avoids_float_drift(self):
        vals = _grid_values("0:1:0.1")
        assert len(vals) == 11
        assert vals[3] == 0.3


class TestParser:
    def test_subcommands_exist(self):
        parser = build_parser()
        for cmd in ("validate", "shock", "run", "sweep-scale", "sweep-density"):
            args = parser.parse_args(
                [cmd, "--economy", "e.csv"]
                + (["--shocks", "s.csv"] if cmd != "validate" else [])
                + (["--densities", "0.1"] if cmd == "sweep-density" else []))
            assert args.command == cmd

    def test_missing_subcommand_fails(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args([])


class TestValidate:
    def test_economy_only(self, files, capsys):
        assert run_command(["validate", "--economy", files["economy"]]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["industries"] == 3
        assert report["total_output"] == 24.0
        assert report["density"] == pytest.approx(2.0 / 9.0)

    def test_with_shocks(self, files, capsys):
        code = run_command(["validate", "--economy", files["economy"],
                            "--shocks", files["shocks"]])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["aggregate_supply_shock"] == pytest.approx(5.0 / 24.0)
        assert report["aggregate_demand_shock"] == 0.0

    def test_bad_economy_exits_one(self, tmp_path, files, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text(ECONOMY.replace(",4,2,", ",-4,2,"), encoding="utf-8")
        assert run_command(["validate", "--economy", str(bad)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_unknown_industry_exits_one(self, tmp_path, files):
        bad = tmp_path / "bad_shocks.csv"
        bad.write_text(SHOCKS.replace("upstream,", "steel,", 1),
                       encoding="utf-8")
        assert run_command(["validate", "--economy", files["economy"],
                            "--shocks", str(bad)]) == 1


class TestShock:
    def test_ceilings_on_stdout(self, files, capsys):
        assert run_command(["shock", "--economy", files["economy"],
                            "--shocks", files["shocks"]]) == 0
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert rows[0] == {"industry": "upstream", "x_max": "5.0",
                           "f_max": "4.0"}
        assert rows[2]["x_max"] == "8.0"

    def test_alpha_scaling(self, files, capsys):
        run_command(["shock", "--economy", files["economy"],
                     "--shocks", files["shocks"], "--alpha-supply", "0.5"])
        rows = list(csv.DictReader(capsys.readouterr().out.splitlines()))
        assert rows[0]["x_max"] == "7.5"

    def test_grid_alpha_rejected(self, files, capsys):
        assert run_command(["shock", "--economy", files["economy"],
                            "--shocks", files["shocks"],
                            "--alpha-supply", "0:1:0.5"]) == 1


class TestRun:
    def test_end_to_end(self, files, capsys):
        code = run_command(["run", "--economy", files["economy"],
                            "--shocks", files["shocks"],
                            "--out", files["out"], "--samples", "5"])
        assert code == 0
        paths = capsys.readouterr().out.splitlines()
        assert [p.split("/")[-1] for p in paths] == [
            "allocations.csv", "sweep.csv", "summary.csv"]
        prov, rows = read_table(paths[0])
        assert prov["economy_sha256"] == file_digest(files["economy"])
        assert prov["shocks_sha256"] == file_digest(files["shocks"])
        # 8 methods x 3 industries
        assert len(rows) == 24
        lp = {r["industry"]: r for r in rows if r["method"] == "lp_output"}
        assert float(lp["upstream"]["x"]) == pytest.approx(5.0)
        assert float(lp["parts"]["x"]) == pytest.approx(4.5)
        _, sweep_rows = read_table(paths[1])
        assert len(sweep_rows) == 7 + 5  # non-random methods + samples
        _, summary_rows = read_table(paths[2])
        assert len(summary_rows) == 8

    def test_method_subset(self, files, capsys):
        run_command(["run", "--economy", files["economy"],
                     "--shocks", files["shocks"], "--out", files["out"],
                     "--methods", "proportional,lp_output"])
        paths = capsys.readouterr().out.splitlines()
        _, rows = read_table(paths[0])
        assert {r["method"] for r in rows} == {"proportional", "lp_output"}

    def test_unknown_method_exits_two(self, files, capsys):
        assert run_command(["run", "--economy", files["economy"],
                            "--shocks", files["shocks"], "--out", files["out"],
                            "--methods", "oracle"]) == 2

    def test_reruns_byte_identical(self, tmp_path, files, capsys):
        argv = ["run", "--economy", files["economy"], "--shocks",
                files["shocks"], "--samples", "8", "--seed", "42"]
        run_command(argv + ["--out", str(tmp_path / "o1")])
        run_command(argv + ["--out", str(tmp_path / "o2")])
        a, b, *_ = capsys.readouterr().out.splitlines(), None
        o1 = sorted((tmp_path / "o1").glob("*.csv"))
        o2 = sorted((tmp_path / "o2").glob("*.csv"))
        assert [file_digest(p) for p in o1] == [file_digest(p) for p in o2]


class TestSweepScale:
    def test_grid_record_count(self, files, capsys):
        code = run_command(["sweep-scale", "--economy", files["economy"],
                            "--shocks", files["shocks"],
                            "--alpha-supply", "0:1:0.1",
                            "--methods", "proportional,direct",
                            "--out", files["out"]])
        assert code == 0
        paths = capsys.readouterr().out.splitlines()
        _, rows = read_table(paths[1])
        assert len(rows) == 11 * 2
        assert len({r["alpha_supply"] for r in rows}) == 11
        baseline = [r for r in rows if float(r["alpha_supply"]) == 0.0]
        assert all(float(r["norm_output"]) == 1.0 for r in baseline)


class TestSweepDensity:
    def test_smallest_first(self, files, capsys):
        code = run_command(["sweep-density", "--economy", files["economy"],
                            "--shocks", files["shocks"],
                            "--densities", "0", "--removal-mode",
                            "smallest_first", "--methods", "proportional",
                            "--out", files["out"]])
        assert code == 0
        paths = capsys.readouterr().out.splitlines()
        prov, rows = read_table(paths[1])
        assert prov["removal_mode"] == "smallest_first"
        assert len(rows) == 1
        assert float(rows[0]["total_output"]) == pytest.approx(16.0)

    def test_density_above_current_exits_two(self, files, capsys):
        assert run_command(["sweep-density", "--economy", files["economy"],
                            "--shocks", files["shocks"],
                            "--densities", "0.9",
                            "--out", files["out"]]) == 2
