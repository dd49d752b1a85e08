"""Tests for the Pegasus DAX reader and writer."""

import pytest

from fogflow.dax import (
    DaxParseError,
    bytes_to_megabits,
    megabits_to_bytes,
    parse_dax,
    read_dax,
    save_dax,
    write_dax,
)
from fogflow.workflow import LayeredSpec, WorkflowValidationError, generate_layered


def _edge_triples(workflow):
    return [(e.parent, e.child, e.size) for e in workflow.edges]


class TestReadFixtures:
    def test_single_job(self, dax_path):
        workflow = read_dax(dax_path / "single_job.dax")
        assert workflow.n == 1
        assert workflow.edges == ()
        assert workflow.tasks[0].length == pytest.approx(2500.0)
        assert workflow.name == "single_job"

    def test_chain_lengths_and_edge_size(self, dax_path):
        workflow = read_dax(dax_path / "chain.dax")
        assert [t.length for t in workflow.tasks] == pytest.approx([1000.0, 1300.0])
        assert [t.label for t in workflow.tasks] == ["ID00000", "ID00001"]
        assert _edge_triples(workflow) == [(0, 1, 20.0)]

    def test_diamond_matches_fixture(self, dax_path, diamond_workflow):
        workflow = read_dax(dax_path / "diamond.dax")
        assert [t.length for t in workflow.tasks] == pytest.approx(
            [t.length for t in diamond_workflow.tasks]
        )
        assert _edge_triples(workflow) == _edge_triples(diamond_workflow)

    def test_files_per_pair_are_summed_and_explicit_edges_merge(self, dax_path):
        workflow = read_dax(dax_path / "shared_files.dax")
        assert _edge_triples(workflow) == [(0, 1, 14.0), (0, 2, 0.0)]

    @pytest.mark.parametrize("name", ["cycle.dax", "duplicate_id.dax", "unknown_ref.dax"])
    def test_invalid_workflows_raise_validation_error(self, dax_path, name):
        with pytest.raises(WorkflowValidationError):
            read_dax(dax_path / name)

    def test_malformed_xml_reports_position(self, dax_path):
        with pytest.raises(DaxParseError) as excinfo:
            read_dax(dax_path / "malformed.dax")
        assert excinfo.value.line is not None
        assert "line" in str(excinfo.value)


class TestParseContent:
    def test_unknown_link_is_a_parse_error(self):
        document = """<adag><job id="a" runtime="1"><uses file="f" link="sideways"/></job></adag>"""
        with pytest.raises(DaxParseError, match="unknown link"):
            parse_dax(document)

    def test_checkpoint_link_is_a_parse_error(self):
        document = """<adag><job id="a" runtime="1"><uses file="f" link="checkpoint"/></job></adag>"""
        with pytest.raises(DaxParseError, match="unknown link 'checkpoint'"):
            parse_dax(document)

    def test_inout_file_is_read_and_written_by_its_job(self):
        document = """
        <adag>
          <job id="a" runtime="1"><uses file="f" link="output" size="125000"/></job>
          <job id="b" runtime="1"><uses file="f" link="inout" size="125000"/></job>
          <job id="c" runtime="1"><uses file="f" link="input" size="125000"/></job>
        </adag>
        """
        workflow = parse_dax(document)
        assert _edge_triples(workflow) == [(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0)]

    def test_missing_runtime_is_a_parse_error(self):
        with pytest.raises(DaxParseError, match="runtime"):
            parse_dax("<adag><job id='a'/></adag>")

    def test_consumer_size_is_used_when_producer_omits_it(self):
        document = """
        <adag>
          <job id="a" runtime="1"><uses file="f" link="output"/></job>
          <job id="b" runtime="1"><uses file="f" link="input" size="125000"/></job>
        </adag>
        """
        workflow = parse_dax(document)
        assert _edge_triples(workflow) == [(0, 1, 1.0)]


class TestUnitConversion:
    def test_bytes_to_megabits(self):
        assert bytes_to_megabits(1_250_000) == 10.0
        assert megabits_to_bytes(20.0) == 2_500_000.0


class TestWriter:
    def test_round_trip_keeps_tasks_and_edges(self, diamond_workflow):
        parsed = parse_dax(write_dax(diamond_workflow))
        assert parsed.n == diamond_workflow.n
        assert [t.length for t in parsed.tasks] == pytest.approx(
            [t.length for t in diamond_workflow.tasks]
        )
        original = _edge_triples(diamond_workflow)
        assert [(p, c) for p, c, _ in _edge_triples(parsed)] == [(p, c) for p, c, _ in original]
        assert [s for _, _, s in _edge_triples(parsed)] == pytest.approx([s for _, _, s in original])

    def test_round_trip_of_generated_workflow(self, tmp_path):
        workflow = generate_layered(LayeredSpec((2, 3, 2)), seed=5)
        path = tmp_path / "layered.dax"
        save_dax(workflow, path)
        parsed = read_dax(path)
        assert parsed.n == workflow.n
        assert len(parsed.edges) == len(workflow.edges)
        assert [s for _, _, s in _edge_triples(parsed)] == pytest.approx(
            [s for _, _, s in _edge_triples(workflow)]
        )
