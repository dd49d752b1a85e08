"""Pytest configuration and shared fixtures for FogFlow tests."""

import pytest
from pathlib import Path

from fogflow.infra import default_testbed
from fogflow.workflow import workflow_from_edges


@pytest.fixture
def repo_root():
    """Get repository root directory."""
    return Path(__file__).parent.parent


@pytest.fixture
def reference_data_path(repo_root):
    """Path to reference test data directory."""
    return repo_root / "test_data"


@pytest.fixture
def dax_path(reference_data_path):
    """Directory of committed DAX fixtures."""
    return reference_data_path / "dax"


@pytest.fixture
def default_pool():
    """Default (1 end, 5 fog, 5 cloud) testbed."""
    return default_testbed()


@pytest.fixture
def tiny_pool():
    """One resource per layer: end device 0, fog node 1, cloud server 2."""
    return default_testbed(1, 1, 1)


@pytest.fixture
def chain_workflow():
    """A (1000 MI) -> B (1300 MI) carrying 20 Mb."""
    return workflow_from_edges([1000.0, 1300.0], [(0, 1, 20.0)], name="chain")


@pytest.fixture
def diamond_workflow():
    """A -> {B, C} -> D with mixed edge sizes, matching test_data/dax/diamond.dax."""
    return workflow_from_edges(
        [1000.0, 2000.0, 1500.0, 1000.0],
        [(0, 1, 10.0), (0, 2, 20.0), (1, 3, 5.0), (2, 3, 0.0)],
        name="diamond",
    )
