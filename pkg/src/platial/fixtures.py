"""Location and integrity checks for the bundled case-study fixtures.

The fixture directory defaults to the package's ``fixtures/`` folder and
can be overridden with the ``PLATIAL_FIXTURES`` environment variable.
"""

from __future__ import annotations

import os
from pathlib import Path

from platial.errors import ValidationError

ENV_VAR = "PLATIAL_FIXTURES"

# reported figures for the Eferding relocation zone; the area is stored as
# given in the source (a bare "24.35 km"), interpreted as km^2
EFERDING_FACTS = {
    "zone_area_km2": 24.35,
    "buildings": 612,
    "housing_buildings": 138,
    "eligible_households": 146,
}

ATTABAD_FACTS = {
    "villages": 5,
    "submerged_households": 240,
    "displaced_families": 380,
}

_CASE_FACTS = {"eferding": EFERDING_FACTS, "attabad": ATTABAD_FACTS}


def fixture_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path(__file__).parent / "fixtures"


def fixture_path(name: str) -> Path:
    """Path of a bundled fixture; ``name`` may omit the ``.json`` suffix."""
    if not name.endswith(".json"):
        name += ".json"
    return fixture_dir() / name


def check_fixture_metadata(metadata: dict) -> None:
    """Raise if a case fixture's metadata disagrees with the reported figures."""
    facts = _CASE_FACTS.get(metadata.get("case"))
    if facts is None:
        return
    wrong = [f"{k}={metadata.get(k)!r} (expected {v!r})" for k, v in facts.items() if metadata.get(k) != v]
    if wrong:
        raise ValidationError(f"{metadata['case']} fixture metadata mismatch: " + ", ".join(wrong))
