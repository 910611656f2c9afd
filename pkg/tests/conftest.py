from __future__ import annotations

from pathlib import Path

import pytest

from shakedrill import ScenarioBundle, SitePoint, load_bundle

FIXTURES = Path(__file__).resolve().parents[1] / "fixtures"

# Demo-bundle anchor sites.
PALM_SPRINGS = SitePoint(-116.5, 33.8)
ZERO_SITE = SitePoint(-119.4, 33.3)
LA_DOWNTOWN = SitePoint(-118.25, 34.05)


@pytest.fixture(scope="session")
def demo_manifest() -> Path:
    return FIXTURES / "shakeout_demo" / "manifest.json"


@pytest.fixture(scope="session")
def demo_bundle(demo_manifest: Path) -> ScenarioBundle:
    return load_bundle(demo_manifest)
