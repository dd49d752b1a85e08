"""Tests for the ``fogflow`` command line."""

import csv

import pytest

from fogflow.cli import EXIT_CONFIG, EXIT_INPUT, main


def _rows(path):
    with path.open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


class TestDescribe:
    def test_prints_summary(self, dax_path, capsys):
        assert main(["describe", str(dax_path / "chain.dax")]) == 0
        out = capsys.readouterr().out
        assert out.strip() == "tasks: 2, edges: 1, depth: 2, total_mi: 2300, total_mb: 20"

    def test_missing_file_is_an_input_error(self, tmp_path, capsys):
        assert main(["describe", str(tmp_path / "absent.dax")]) == EXIT_INPUT
        assert "input error" in capsys.readouterr().err

    @pytest.mark.parametrize("name", ["malformed.dax", "cycle.dax"])
    def test_invalid_dax_is_an_input_error(self, dax_path, name):
        assert main(["describe", str(dax_path / name)]) == EXIT_INPUT


class TestOracle:
    def test_prints_optimum(self, dax_path, capsys):
        assert main(["oracle", "--workflow", str(dax_path / "diamond.dax"), "--pool", "1,1,1"]) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].startswith("mapping: ")
        genes = [int(v) for v in lines[0].split(":")[1].split()]
        assert len(genes) == 4
        assert all(1 <= g <= 3 for g in genes)
        assert lines[-1].startswith("fitness: ")

    def test_pool_table(self, dax_path, reference_data_path):
        code = main(
            [
                "oracle",
                "--workflow",
                str(dax_path / "chain.dax"),
                "--pool-table",
                str(reference_data_path / "pool_table.csv"),
            ]
        )
        assert code == 0

    def test_over_cap_is_a_config_error(self, dax_path):
        assert main(
            ["oracle", "--workflow", str(dax_path / "diamond.dax"), "--pool", "1,500,499"]
        ) == EXIT_CONFIG

    def test_bad_weights(self, dax_path):
        assert main(
            ["oracle", "--workflow", str(dax_path / "chain.dax"), "--weights", "1,2"]
        ) == EXIT_CONFIG

    def test_bad_pool(self, dax_path):
        assert main(["oracle", "--workflow", str(dax_path / "chain.dax"), "--pool", "0,0,0"]) == EXIT_INPUT


class TestRun:
    def test_config_with_overrides(self, reference_data_path, tmp_path, capsys):
        code = main(
            [
                "run",
                "--config",
                str(reference_data_path / "example_diamond.yaml"),
                "--algorithms",
                "ga,pso",
                "--repeats",
                "2",
                "--pop",
                "6",
                "--iters",
                "3",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert "wrote 4 runs" in capsys.readouterr().out
        runs = _rows(tmp_path / "runs.csv")
        assert [row[:2] for row in runs[1:]] == [["ga", "0"], ["ga", "1"], ["pso", "0"], ["pso", "1"]]
        convergence = _rows(tmp_path / "convergence" / "pso_seed1.csv")
        assert len(convergence) == 1 + 4

    def test_flags_without_config(self, dax_path, tmp_path):
        code = main(
            [
                "run",
                "--workflow",
                str(dax_path / "chain.dax"),
                "--algorithms",
                "de",
                "--repeats",
                "1",
                "--seed",
                "5",
                "--pop",
                "4",
                "--iters",
                "2",
                "--pool",
                "1,1,1",
                "--weights",
                "0.5,0.25,0.25",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == 0
        assert (tmp_path / "convergence" / "de_seed5.csv").exists()

    def test_unknown_config_key(self, reference_data_path, tmp_path, capsys):
        code = main(
            [
                "run",
                "--config",
                str(reference_data_path / "badexample_unknown_key.yaml"),
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_CONFIG
        assert "populaton" in capsys.readouterr().err

    def test_missing_workflow(self, tmp_path):
        code = main(["run", "--workflow", str(tmp_path / "none.dax"), "--out", str(tmp_path)])
        assert code == EXIT_INPUT

    def test_de_population_too_small(self, dax_path, tmp_path):
        code = main(
            [
                "run",
                "--workflow",
                str(dax_path / "chain.dax"),
                "--algorithms",
                "de",
                "--pop",
                "3",
                "--iters",
                "1",
                "--repeats",
                "1",
                "--out",
                str(tmp_path),
            ]
        )
        assert code == EXIT_CONFIG

    def test_negative_seed_is_a_config_error(self, dax_path, tmp_path, capsys):
        code = main(_chain_run(dax_path, tmp_path) + ["--seed", "-3"])
        assert code == EXIT_CONFIG
        assert "non-negative" in capsys.readouterr().err

    def test_output_path_that_is_a_file(self, dax_path, tmp_path, capsys):
        target = tmp_path / "taken"
        target.write_text("", encoding="utf-8")
        code = main(_chain_run(dax_path, target))
        assert code == EXIT_INPUT
        assert "file error" in capsys.readouterr().err

    def test_unwritable_output_is_reported(self, dax_path, tmp_path, capsys, mocker):
        mocker.patch("fogflow.cli.run_experiment", side_effect=PermissionError("permission denied"))
        code = main(_chain_run(dax_path, tmp_path))
        assert code == EXIT_INPUT
        assert "permission denied" in capsys.readouterr().err


def _chain_run(dax_path, out):
    return [
        "run",
        "--workflow",
        str(dax_path / "chain.dax"),
        "--algorithms",
        "de",
        "--pop",
        "4",
        "--iters",
        "1",
        "--repeats",
        "1",
        "--out",
        str(out),
    ]


class TestArguments:
    def test_missing_subcommand_exits_with_config_code(self):
        with pytest.raises(SystemExit) as excinfo:
            main([])
        assert excinfo.value.code == EXIT_CONFIG

    def test_bad_integer_flag(self):
        with pytest.raises(SystemExit) as excinfo:
            main(["run", "--repeats", "two"])
        assert excinfo.value.code == EXIT_CONFIG
