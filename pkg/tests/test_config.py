"""Tests for runtime settings."""

import dataclasses
from pathlib import Path

import pytest

from cyclotome.config import CACHE_DIR_ENV, SCHEMA, Settings


class TestSettings:
    """Test cases for Settings."""

    def test_defaults(self):
        """Test the default thresholds."""
        settings = Settings()
        assert settings.threads >= 1
        assert settings.cache_dir is None
        assert settings.direct_limit == 10**4
        assert settings.census_limit == 10**8
        assert settings.materialize_limit == 2**31

    def test_from_env(self, monkeypatch, tmp_path):
        """Test that the cache directory comes from the environment."""
        monkeypatch.setenv(CACHE_DIR_ENV, str(tmp_path))
        assert Settings.from_env().cache_dir == Path(tmp_path)

    def test_from_env_unset(self, monkeypatch):
        """Test that an unset variable disables the cache."""
        monkeypatch.delenv(CACHE_DIR_ENV, raising=False)
        assert Settings.from_env().cache_dir is None

    def test_frozen(self):
        """Test that settings are immutable and replaced instead."""
        settings = Settings(threads=2)
        with pytest.raises(dataclasses.FrozenInstanceError):
            settings.threads = 3
        assert dataclasses.replace(settings, threads=3).threads == 3

    def test_schema(self):
        """Test the report schema tag."""
        assert SCHEMA == "cyclotome/1"
