"""Runtime settings shared by the library and the command line."""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

CACHE_DIR_ENV = "CYCLOTOME_CACHE_DIR"
SCHEMA = "cyclotome/1"
VERSION = "0.1.0"


def _default_threads() -> int:
    return os.cpu_count() or 1


@dataclass(frozen=True)
class Settings:
    """
    Knobs for the expensive sweeps and the oracle thresholds.

    Attributes:
        threads: Worker count for the period-table sweep
        cache_dir: Directory for binary field tables (None disables the cache)
        direct_limit: Largest v for brute-force SRG checks and direct intersection numbers
        census_limit: Largest |D|^2 for the difference census
        materialize_limit: Largest field order that will be built
        gauss_tolerance_scale: Gauss sums match when within scale * sqrt(q)
    """

    threads: int = field(default_factory=_default_threads)
    cache_dir: Optional[Path] = None
    direct_limit: int = 10**4
    census_limit: int = 10**8
    materialize_limit: int = 2**31
    gauss_tolerance_scale: float = 1e-6

    @classmethod
    def from_env(cls) -> "Settings":
        """Build settings, taking the cache directory from ``CYCLOTOME_CACHE_DIR`` if set."""
        cache = os.environ.get(CACHE_DIR_ENV)
        return cls(cache_dir=Path(cache) if cache else None)
