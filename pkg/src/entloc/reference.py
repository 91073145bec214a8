"""Loader for the published reference constants used by the benchmark command.

All regression constants live in one versioned data file
(`data/reference_values.json`) together with their source descriptions,
tolerances and comparison conventions, so every benchmarked number can be
audited in one place.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources


@lru_cache(maxsize=1)
def load_reference_values() -> dict:
    """Parsed contents of the reference data file (cached)."""
    path = resources.files("entloc").joinpath("data/reference_values.json")
    with path.open("r", encoding="utf-8") as fh:
        return json.load(fh)


def table_names() -> tuple[str, ...]:
    return tuple(load_reference_values()["tables"])
