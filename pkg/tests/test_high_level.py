"""Tests for experiment configuration, the multi-seed runner and CSV results."""

import csv
from pathlib import Path

import numpy as np
import pytest

from fogflow.high_level import (
    CONVERGENCE_HEADER,
    MAPPINGS_HEADER,
    RUNS_HEADER,
    SUMMARY_HEADER,
    ExperimentConfig,
    RunRecord,
    build_problem,
    describe,
    format_oracle,
    read_inputs,
    run_experiment,
    run_oracle,
)
from fogflow.infra import default_testbed
from fogflow.optimizers import ConfigError, OptimizerConfig, run
from fogflow.workflow import LayeredSpec, generate_layered


def _read_csv(path):
    with Path(path).open(newline="", encoding="utf-8") as handle:
        return list(csv.reader(handle))


def _layered_config(reference_data_path, out, **overrides):
    mapping = read_inputs(reference_data_path / "example_layered.yaml")
    mapping["out"] = str(out)
    mapping.update(overrides)
    return ExperimentConfig.from_mapping(mapping)


class TestReadInputs:
    def test_relative_paths_resolve_against_config_dir(self, reference_data_path):
        inputs = read_inputs(reference_data_path / "example_diamond.yaml")
        assert Path(inputs["workflow"]) == reference_data_path / "dax" / "diamond.dax"
        assert Path(inputs["out"]) == reference_data_path / "results"

    def test_missing_config_file(self, tmp_path):
        with pytest.raises(ConfigError, match="cannot read"):
            read_inputs(tmp_path / "absent.yaml")

    def test_non_mapping_document(self, tmp_path):
        path = tmp_path / "list.yaml"
        path.write_text("- 1\n- 2\n", encoding="utf-8")
        with pytest.raises(ConfigError, match="key-value"):
            read_inputs(path)


class TestExperimentConfig:
    def test_layered_example(self, reference_data_path, tmp_path):
        config = _layered_config(reference_data_path, tmp_path)
        assert config.layered == LayeredSpec((1, 3, 1), (1000.0, 10000.0), (0.0, 20.0), 1.0)
        assert config.algorithms == ("ga", "de")
        assert config.seeds == (11, 12)
        assert config.pool_counts == (1, 2, 2)
        assert (config.population, config.iterations) == (8, 5)
        assert config.wall_time is False

    def test_defaults(self):
        config = ExperimentConfig.from_mapping({"layers": "2,2"})
        assert config.algorithms == ("pso", "ga", "de", "gapso")
        assert config.pool_counts == (1, 5, 5)
        assert (config.population, config.iterations, config.repeats) == (50, 100, 10)
        assert config.output_dir == Path("results")

    def test_unknown_key(self, reference_data_path):
        inputs = read_inputs(reference_data_path / "badexample_unknown_key.yaml")
        with pytest.raises(ConfigError, match="populaton"):
            ExperimentConfig.from_mapping(inputs)

    @pytest.mark.parametrize(
        "mapping",
        [
            {},
            {"workflow": "a.dax", "layers": "1,1"},
            {"layers": "1,1", "repeats": 0},
            {"layers": "1,1", "algorithms": "ga,annealing"},
            {"layers": "1,1", "algorithms": ""},
            {"layers": "1,1", "pop": 1},
            {"layers": "1,1", "pop": "many"},
            {"layers": "1,1", "weights": "1,2"},
            {"layers": "1,1", "pool": "1,2"},
            {"layers": "1,0"},
            {"layers": "1,1", "mutation_rate": 3},
            {"layers": "1,1", "wall_time": "sometimes"},
            {"layers": "1,1", "seed": -1},
            {"layers": "1,1", "layered_seed": -2},
        ],
    )
    def test_invalid_mappings(self, mapping):
        with pytest.raises(ConfigError):
            ExperimentConfig.from_mapping(mapping)

    def test_missing_workflow_file(self, tmp_path):
        config = ExperimentConfig.from_mapping({"workflow": str(tmp_path / "none.dax")})
        with pytest.raises(FileNotFoundError):
            build_problem(config)


class TestRunExperiment:
    def test_single_repeat_summary_equals_the_run(self, reference_data_path, tmp_path):
        config = _layered_config(reference_data_path, tmp_path, algorithms="ga", repeats=1)
        report = run_experiment(config, write=False)
        assert len(report.records) == 1
        (summary,) = report.summary()
        record = report.records[0]
        assert summary["runs"] == 1
        assert summary["fitness_mean"] == record.fitness
        assert summary["makespan_s_mean"] == record.makespan_s
        assert summary["fitness_std"] == 0.0
        assert not (tmp_path / "runs.csv").exists()

    def test_writes_expected_files(self, reference_data_path, tmp_path):
        config = _layered_config(reference_data_path, tmp_path)
        run_experiment(config)

        runs = _read_csv(tmp_path / "runs.csv")
        assert tuple(runs[0]) == RUNS_HEADER
        assert [(row[0], row[1]) for row in runs[1:]] == [
            ("ga", "11"),
            ("ga", "12"),
            ("de", "11"),
            ("de", "12"),
        ]
        assert all(row[-1] == "0" for row in runs[1:])

        summary = _read_csv(tmp_path / "summary.csv")
        assert tuple(summary[0]) == SUMMARY_HEADER
        assert [row[:2] for row in summary[1:]] == [["ga", "2"], ["de", "2"]]
        for algorithm, summary_row in zip(("ga", "de"), summary[1:]):
            fitness = [float(row[5]) for row in runs[1:] if row[0] == algorithm]
            assert float(summary_row[8]) == pytest.approx(np.mean(fitness), rel=1e-5)
            assert float(summary_row[9]) == pytest.approx(np.std(fitness, ddof=1), abs=1e-5)

        convergence = _read_csv(tmp_path / "convergence" / "de_seed12.csv")
        assert tuple(convergence[0]) == CONVERGENCE_HEADER
        assert [row[0] for row in convergence[1:]] == [str(k) for k in range(6)]

        mappings = _read_csv(tmp_path / "mappings.csv")
        assert tuple(mappings[0]) == MAPPINGS_HEADER
        for row in mappings[1:]:
            genes = [int(v) for v in row[2].split()]
            assert len(genes) == 5
            assert all(1 <= g <= 5 for g in genes)

    def test_summary_matches_recomputed_statistics(self, reference_data_path, tmp_path):
        config = _layered_config(reference_data_path, tmp_path, repeats=3)
        report = run_experiment(config, write=False)
        for row in report.summary():
            chosen = [r for r in report.records if r.algorithm == row["algorithm"]]
            assert row["runs"] == len(chosen) == 3
            for name in ("makespan_s", "cost_usd", "energy_j", "fitness"):
                values = np.array([getattr(r, name) for r in chosen])
                assert row[f"{name}_mean"] == pytest.approx(np.mean(values), rel=1e-12)
                assert row[f"{name}_std"] == pytest.approx(np.std(values, ddof=1), rel=1e-12)

    def test_repeated_runs_are_byte_identical(self, reference_data_path, tmp_path):
        first, second = tmp_path / "first", tmp_path / "second"
        run_experiment(_layered_config(reference_data_path, first))
        run_experiment(_layered_config(reference_data_path, second))
        for name in ("runs.csv", "summary.csv", "mappings.csv"):
            assert (first / name).read_bytes() == (second / name).read_bytes()

    def test_seed_stream_does_not_depend_on_other_algorithms(self, reference_data_path, tmp_path):
        both = run_experiment(_layered_config(reference_data_path, tmp_path), write=False)
        alone = run_experiment(
            _layered_config(reference_data_path, tmp_path, algorithms="de"), write=False
        )
        assert [r for r in both.records if r.algorithm == "de"] == list(alone.records)

    def test_records_match_direct_optimizer_runs(self, reference_data_path, tmp_path):
        config = _layered_config(reference_data_path, tmp_path, algorithms="de", repeats=1)
        report = run_experiment(config, write=False)
        direct = run("de", build_problem(config), OptimizerConfig(population=8, iterations=5, seed=11))
        assert report.results[0].convergence == direct.convergence
        assert report.records[0].fitness == direct.best.fitness

    @pytest.mark.integration
    @pytest.mark.serial
    def test_parallel_jobs_give_same_records(self, reference_data_path, tmp_path):
        serial = run_experiment(_layered_config(reference_data_path, tmp_path), write=False)
        parallel = run_experiment(_layered_config(reference_data_path, tmp_path, jobs=2), write=False)
        assert parallel.records == serial.records

    def test_wall_time_is_recorded_when_enabled(self, reference_data_path, tmp_path):
        config = _layered_config(
            reference_data_path, tmp_path, algorithms="ga", repeats=1, wall_time=True
        )
        report = run_experiment(config, write=False)
        assert report.records[0].wall_time_ms > 0.0


class TestGoldenFiles:
    """Every mapping of a chain on one end device is the same schedule:
    2.3 s makespan, no cost, 700 W x 2.3 s = 1610 J, fitness 0."""

    FILES = ("runs.csv", "summary.csv", "mappings.csv", "convergence/ga_seed1.csv")

    @pytest.mark.parametrize("name", FILES)
    def test_outputs_match_committed_files(self, reference_data_path, tmp_path, name):
        golden = reference_data_path / "golden"
        mapping = read_inputs(golden / "chain_single_device.yaml")
        mapping["out"] = str(tmp_path)
        run_experiment(ExperimentConfig.from_mapping(mapping))
        assert (tmp_path / name).read_bytes() == (golden / name).read_bytes()

    def test_negative_fitness_is_written_as_is(self):
        record = RunRecord("ga", 2, 5.5, 0.0, 3850.0, -0.0226912)
        assert record.row() == ["ga", "2", "5.5", "0", "3850", "-0.0226912", "0"]


class TestDescribe:
    def test_chain(self, dax_path):
        assert describe(dax_path / "chain.dax") == (
            "tasks: 2, edges: 1, depth: 2, total_mi: 2300, total_mb: 20"
        )

    def test_diamond(self, dax_path):
        assert describe(dax_path / "diamond.dax") == (
            "tasks: 4, edges: 4, depth: 3, total_mi: 5500, total_mb: 35"
        )

    def test_layered_workflow(self):
        workflow = generate_layered(LayeredSpec((1, 3, 1), inter_layer_density=1.0), seed=0)
        assert describe(workflow).startswith("tasks: 5, edges: 6, depth: 3,")


class TestOracleReport:
    def test_matches_brute_force(self, diamond_workflow, tiny_pool):
        best = run_oracle(diamond_workflow, tiny_pool)
        lines = format_oracle(best).splitlines()
        assert [line.split(":")[0] for line in lines] == [
            "mapping",
            "makespan_s",
            "cost_usd",
            "energy_j",
            "fitness",
        ]
        genes = [int(v) for v in lines[0].split(":")[1].split()]
        assert [g - 1 for g in genes] == list(best.genome)

    def test_single_resource(self, diamond_workflow):
        best = run_oracle(diamond_workflow, default_testbed(1, 0, 0))
        assert format_oracle(best).splitlines()[0] == "mapping: 1 1 1 1"

    def test_cap_is_enforced(self, diamond_workflow, tiny_pool):
        with pytest.raises(ConfigError):
            run_oracle(diamond_workflow, tiny_pool, cap=10)


@pytest.mark.main
class TestMainScript:
    def test_main_configuration_runs(self, tmp_path):
        import dataclasses

        import main

        assert main.config.algorithms == ("pso", "ga", "de", "gapso")
        assert main.config.layered is not None
        config = dataclasses.replace(
            main.config, population=6, iterations=2, repeats=1, output_dir=tmp_path
        )
        report = run_experiment(config)
        assert len(report.records) == 4
        assert (tmp_path / "summary.csv").exists()
