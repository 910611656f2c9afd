from __future__ import annotations

import json
import math
import random

import numpy as np
import pytest
from fastapi.testclient import TestClient

from shakedrill import cli
from shakedrill.scenario import report_from_text, report_to_text, run_drill
from shakedrill.service import ServiceConfig, _field_stride, build_app
from tests.conftest import LA_DOWNTOWN, PALM_SPRINGS, ZERO_SITE


@pytest.fixture(scope="module")
def client(demo_bundle) -> TestClient:
    return TestClient(build_app(demo_bundle, cors_allowed=True))


def resonance_record_text() -> str:
    dt = 0.005
    values = [0.1 * math.sin(2 * math.pi * i * dt) for i in range(8001)]
    return "NPTS=8001 DT=0.005\n" + "\n".join(str(v) for v in values) + "\n"


class TestCliSimulate:
    def test_valid_invocation_writes_parsable_report(self, tmp_path, demo_manifest):
        out = tmp_path / "report.json"
        code = cli.main(
            [
                "simulate",
                "--lat", "34.05", "--lon", "-118.25",
                "--room", "residence",
                "--seed", "42",
                "--bundle", str(demo_manifest),
                "--out", str(out),
            ]
        )
        assert code == 0
        report = report_from_text(out.read_text())
        assert report.seed == 42

    def test_out_of_bounds_site_exit_3(self, tmp_path, demo_manifest, capsys):
        code = cli.main(
            [
                "simulate",
                "--lat", "50.0", "--lon", "-118.25",
                "--room", "residence",
                "--seed", "1",
                "--bundle", str(demo_manifest),
                "--out", str(tmp_path / "r.json"),
            ]
        )
        assert code == 3
        assert "out of bounds" in capsys.readouterr().err

    def test_missing_manifest_exit_2(self, tmp_path):
        code = cli.main(
            [
                "simulate",
                "--lat", "34.0", "--lon", "-118.0",
                "--room", "residence",
                "--seed", "1",
                "--bundle", str(tmp_path / "absent.json"),
            ]
        )
        assert code == 2

    def test_bad_room_usage_exit_1(self, demo_manifest):
        with pytest.raises(SystemExit) as exc:
            cli.main(
                [
                    "simulate",
                    "--lat", "34.0", "--lon", "-118.0",
                    "--room", "spaceship",
                    "--seed", "1",
                    "--bundle", str(demo_manifest),
                ]
            )
        assert exc.value.code == 1


class TestCliSpectrum:
    def test_zero_motion_all_zero_column(self, tmp_path):
        record = tmp_path / "zero.acc"
        record.write_text("NPTS=100 DT=0.01\n" + "\n".join(["0.0"] * 100) + "\n")
        out = tmp_path / "spec.csv"
        code = cli.main(
            [
                "spectrum",
                "--input", str(record),
                "--periods", "0.3,1.0,2.0",
                "--damping", "0.05",
                "--out", str(out),
            ]
        )
        assert code == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "period_s,psa_g"
        assert [float(line.split(",")[1]) for line in lines[1:]] == [0.0, 0.0, 0.0]

    def test_resonance_peaks_at_forcing_period(self, tmp_path):
        record = tmp_path / "resonance.acc"
        record.write_text(resonance_record_text())
        out = tmp_path / "spec.csv"
        code = cli.main(
            [
                "spectrum",
                "--input", str(record),
                "--periods", "0.5,1.0,2.0",
                "--damping", "0.05",
                "--out", str(out),
            ]
        )
        assert code == 0
        rows = [line.split(",") for line in out.read_text().splitlines()[1:]]
        psa = {float(p): float(v) for p, v in rows}
        assert psa[1.0] == max(psa.values())

    def test_non_increasing_periods_exit_1(self, tmp_path, capsys):
        record = tmp_path / "zero.acc"
        record.write_text("NPTS=10 DT=0.01\n" + "0.0 " * 10 + "\n")
        code = cli.main(
            [
                "spectrum",
                "--input", str(record),
                "--periods", "1.0,0.5",
                "--damping", "0.05",
                "--out", str(tmp_path / "s.csv"),
            ]
        )
        assert code == 1


class TestCliValidate:
    def test_demo_bundle_validates(self, demo_manifest, capsys):
        assert cli.main(["validate", "--bundle", str(demo_manifest)]) == 0
        assert "bundle OK" in capsys.readouterr().out

    def test_broken_bundle_exit_2(self, tmp_path):
        bad = tmp_path / "manifest.json"
        bad.write_text("{not json")
        assert cli.main(["validate", "--bundle", str(bad)]) == 2


class TestServiceConfig:
    def test_port_range_enforced(self):
        with pytest.raises(ValueError):
            ServiceConfig(port=0, bundle_path="x")
        ServiceConfig(port=8080, bundle_path="x")

    def test_field_stride_budget(self):
        assert _field_stride(15, 11) == 1
        assert _field_stride(200, 200, max_points=10_000) == 2
        assert _field_stride(1000, 1000, max_points=10_000) == 10
        for ncols, nrows in ((321, 77), (999, 1001), (10000, 3)):
            stride = _field_stride(ncols, nrows)
            assert math.ceil(ncols / stride) * math.ceil(nrows / stride) <= 10_000


class TestHttpApi:
    def test_health(self, client):
        body = client.get("/api/health").json()
        assert body == {"status": "ok", "scenario": "shakeout_demo"}

    def test_field_matches_grid_nodes(self, client, demo_bundle):
        body = client.get("/api/field").json()
        assert body["stride"] == 1
        assert body["ncols"] == 15
        assert len(body["points"]) == 15 * 11
        node = demo_bundle.field.node(3, 12)  # palm springs
        point = next(
            p
            for p in body["points"]
            if abs(p["lon"] - -116.5) < 1e-9 and abs(p["lat"] - 33.8) < 1e-9
        )
        assert point["pga_g"] == node.pga
        assert point["pgv_cms"] == node.pgv

    def test_field_full_flag(self, client):
        full = client.get("/api/field", params={"full": "true"}).json()
        assert full["stride"] == 1

    def test_report_equals_engine_output(self, client, demo_bundle):
        response = client.get(
            "/api/report",
            params={"lat": 33.8, "lon": -116.5, "room": "residence", "seed": 42},
        )
        assert response.status_code == 200
        expected = report_to_text(run_drill(demo_bundle, PALM_SPRINGS, "residence", 42))
        assert response.text == expected

    def test_report_out_of_bounds_422(self, client):
        response = client.get(
            "/api/report",
            params={"lat": 50.0, "lon": -118.0, "room": "residence", "seed": 1},
        )
        assert response.status_code == 422
        assert "error" in response.json()

    def test_report_unknown_room_422(self, client):
        response = client.get(
            "/api/report",
            params={"lat": 34.0, "lon": -118.0, "room": "stadium", "seed": 1},
        )
        assert response.status_code == 422

    def test_report_malformed_query_400(self, client):
        assert (
            client.get(
                "/api/report",
                params={"lat": "north", "lon": -118.0, "room": "residence", "seed": 1},
            ).status_code
            == 400
        )
        assert client.get("/api/report", params={"lat": 34.0}).status_code == 400

    def test_warning_countdown_clamped_near_fault(self, client):
        body = client.get("/api/warning", params={"lat": 33.8, "lon": -116.5}).json()
        assert body["warning_time_s"] < 0.0
        assert body["countdown_s"] == [0.0]

    def test_warning_positive_far_from_epicenter(self, client):
        body = client.get("/api/warning", params={"lat": 34.9, "lon": -119.4}).json()
        assert body["warning_time_s"] > 0.0
        track = body["countdown_s"]
        assert track[-1] == 0.0
        assert all(b <= a for a, b in zip(track, track[1:]))

    def test_envelope_matches_report(self, client, demo_bundle):
        body = client.get(
            "/api/envelope", params={"lat": 34.05, "lon": -118.25, "seed": 9}
        ).json()
        report = run_drill(demo_bundle, LA_DOWNTOWN, "residence", 9)
        assert body["values"] == report.envelope.values.tolist()
        assert body["dt_s"] == report.envelope.dt

    def test_zero_site_envelope_all_zero(self, client):
        body = client.get(
            "/api/envelope", params={"lat": 33.3, "lon": -119.4, "seed": 3}
        ).json()
        assert set(body["values"]) == {0.0}

    def test_stateless_shuffled_replay(self, client):
        script = []
        for seed in range(5):
            script.append(("/api/report", {"lat": 33.8, "lon": -116.5, "room": "residence", "seed": seed}))
            script.append(("/api/warning", {"lat": 34.0 + 0.1 * seed, "lon": -118.0}))
            script.append(("/api/envelope", {"lat": 34.05, "lon": -118.25, "seed": seed}))
            script.append(("/api/field", {}))
        baseline = [client.get(path, params=params).text for path, params in script]
        order = list(range(len(script)))
        random.Random(1234).shuffle(order)
        replay = {i: client.get(script[i][0], params=script[i][1]).text for i in order}
        assert all(replay[i] == baseline[i] for i in range(len(script)))


class TestCliHttpEquivalence:
    def test_byte_identical_report(self, tmp_path, demo_manifest, client):
        out = tmp_path / "cli_report.json"
        code = cli.main(
            [
                "simulate",
                "--lat", "33.8", "--lon", "-116.5",
                "--room", "residence",
                "--seed", "2024",
                "--bundle", str(demo_manifest),
                "--out", str(out),
            ]
        )
        assert code == 0
        response = client.get(
            "/api/report",
            params={"lat": 33.8, "lon": -116.5, "room": "residence", "seed": 2024},
        )
        assert out.read_bytes() == response.content
