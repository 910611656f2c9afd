"""Record a drill-console service session into frontend/tests/fixtures/session.json.

Drives the real HTTP app over the shipped demo bundle so the frontend's
contract tests replay genuine payloads, byte-for-byte.
"""

from __future__ import annotations

import json
from pathlib import Path

from fastapi.testclient import TestClient

from shakedrill.scenario import load_bundle
from shakedrill.service import build_app

ROOT = Path(__file__).resolve().parents[1]
OUT = ROOT / "frontend" / "tests" / "fixtures" / "session.json"

PALM_SPRINGS = {"lat": 33.8, "lon": -116.5}
ZERO_SITE = {"lat": 33.3, "lon": -119.4}
SEED = 42


def main() -> None:
    bundle = load_bundle(ROOT / "fixtures" / "shakeout_demo" / "manifest.json")
    client = TestClient(build_app(bundle))

    def get(path: str, **params) -> dict:
        response = client.get(path, params=params)
        response.raise_for_status()
        return response.json()

    session = {
        "field": get("/api/field"),
        "palm_springs": {
            "site": PALM_SPRINGS,
            "report": get("/api/report", room="residence", seed=SEED, **PALM_SPRINGS),
            "warning": get("/api/warning", **PALM_SPRINGS),
            "envelope": get("/api/envelope", seed=SEED, **PALM_SPRINGS),
        },
        "zero_site": {
            "site": ZERO_SITE,
            "report": get("/api/report", room="residence", seed=SEED, **ZERO_SITE),
            "warning": get("/api/warning", **ZERO_SITE),
            "envelope": get("/api/envelope", seed=SEED, **ZERO_SITE),
        },
    }
    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps(session, indent=2) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
