"""Test suite for FogFlow."""
