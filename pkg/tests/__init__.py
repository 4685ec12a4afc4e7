"""Test suite for cyclotome."""
