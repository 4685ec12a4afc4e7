"""Utility functions shared by the pipeline, the exporters and the command line."""

import json
import logging
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional

import numpy as np

logger = logging.getLogger(__name__)


def to_jsonable(value: Any) -> Any:
    """
    Convert report values into plain JSON types.

    Objects exposing ``to_dict`` are expanded, numpy scalars and arrays become
    Python numbers and lists, exact values with ``render`` become strings.

    Args:
        value: Any report value

    Returns:
        A structure of dicts, lists, strings, numbers and None
    """
    if isinstance(value, Enum):
        return value.value
    if hasattr(value, "to_dict"):
        return to_jsonable(value.to_dict())
    if hasattr(value, "render"):
        return value.render()
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def dump_json(data: Any) -> str:
    """Deterministic JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(to_jsonable(data), sort_keys=True, indent=2) + "\n"


def format_power(p: int, f: int) -> str:
    return f"{p}^{f}"


def format_table(rows: List[Dict[str, Any]], columns: List[str]) -> str:
    """
    Render rows as a fixed-width text table.

    Args:
        rows: Row dicts
        columns: Keys to print, in order

    Returns:
        Table text with a header line
    """
    cells = [[str(to_jsonable(row.get(c, ""))) for c in columns] for row in rows]
    widths = [max([len(c)] + [len(r[i]) for r in cells]) for i, c in enumerate(columns)]
    lines = ["  ".join(c.rjust(w) for c, w in zip(columns, widths))]
    for r in cells:
        lines.append("  ".join(v.rjust(w) for v, w in zip(r, widths)))
    return "\n".join(lines) + "\n"


@dataclass
class PhaseTimer:
    """Wall-clock milliseconds per named phase."""

    timings: Dict[str, float] = field(default_factory=dict)

    @contextmanager
    def phase(self, name: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            elapsed = (time.perf_counter() - start) * 1000.0
            self.timings[name] = round(self.timings.get(name, 0.0) + elapsed, 3)
            logger.debug("phase %s took %.1f ms", name, elapsed)

    def as_dict(self, enabled: bool = True) -> Optional[Dict[str, float]]:
        return dict(self.timings) if enabled else None
