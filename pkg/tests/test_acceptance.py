"""Acceptance suite: one test per release criterion, each printing PASS/FAIL.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines. Every tolerance is pinned here; nothing is calibrated elsewhere.
"""

from __future__ import annotations

import math
import time

import numpy as np
import pytest
from scipy import special

from shakedrill import cli
from shakedrill.fragility import (
    DamagePMF,
    EDPType,
    FragilityCurve,
    TagColor,
    ds_pmf,
    p_exceed,
    parse_fragility_library,
    sample_ds,
)
from shakedrill.early_warning import RuptureScenario, warning_for_distance
from shakedrill.gm_field import SitePoint, parse_gm_grid, serialize_gm_grid
from shakedrill.scenario import monte_carlo_loss, report_from_text, report_to_text, run_drill
from shakedrill.service import build_app
from shakedrill.timeseries import G_CMS2, AccelTimeSeries, SDOFConfig, newmark_response
from tests.conftest import FIXTURES, PALM_SPRINGS, ZERO_SITE


def check(name: str, ok: bool, detail: str = "") -> None:
    print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  [{detail}]" if detail else ""))
    assert ok, f"{name}: {detail}"


def resonance_fixture() -> AccelTimeSeries:
    t = np.arange(0.0, 40.0 + 0.0025, 0.005)
    return AccelTimeSeries(dt=0.005, samples=0.1 * np.sin(2.0 * math.pi * t))


def test_newmark_resonance_oracle():
    ts = resonance_fixture()
    started = time.perf_counter()
    result = newmark_response(ts, SDOFConfig(1.0, 0.05))
    elapsed = time.perf_counter() - started
    omega = 2.0 * math.pi
    analytic = 0.1 * G_CMS2 / (omega**2 * 2.0 * 0.05)
    rel_err = abs(result.peak_rel_disp - analytic) / analytic
    check(
        "newmark resonance within 2% of magnification oracle",
        rel_err < 0.02,
        f"peak {result.peak_rel_disp:.4f} cm vs {analytic:.4f} cm, rel err {rel_err:.2e}",
    )
    check("newmark resonance runtime < 1 s", elapsed < 1.0, f"{elapsed:.3f} s")


def test_newmark_convergence_halving_dt():
    cfg = SDOFConfig(1.0, 0.05)
    coarse = newmark_response(resonance_fixture(), cfg).peak_rel_disp
    t = np.arange(0.0, 40.0 + 0.00125, 0.0025)
    fine_ts = AccelTimeSeries(dt=0.0025, samples=0.1 * np.sin(2.0 * math.pi * t))
    fine = newmark_response(fine_ts, cfg).peak_rel_disp
    change = abs(fine - coarse) / fine
    check("newmark dt-halving changes peak by < 1%", change < 0.01, f"change {change:.2e}")


def test_fragility_oracles():
    curve = FragilityCurve(EDPType.PFA_G, 1.0, 0.5)
    at_median = p_exceed(FragilityCurve(EDPType.PFA_G, 0.73, 0.41), 0.73)
    check("p_exceed(median) = 0.5 to 1e-12", abs(at_median - 0.5) <= 1e-12, f"{at_median!r}")

    got = p_exceed(curve, 2.0)
    # independent oracle: Phi(ln(2)/0.5) via scipy's error function
    oracle = 0.5 * (1.0 + special.erf(math.log(2.0) / 0.5 / math.sqrt(2.0)))
    check(
        "p_exceed(theta=1, beta=0.5, edp=2) = 0.9172 +/- 0.0005",
        abs(got - 0.9172) <= 5e-4 and abs(got - oracle) <= 1e-12,
        f"got {got:.6f}, erf oracle {oracle:.6f}",
    )


def test_pmf_conservation_on_fixture_library():
    components = parse_fragility_library((FIXTURES / "fragility_library.json").read_text())
    worst = 0.0
    for component in components:
        lo = 0.01 * component.curves[0].median
        hi = 100.0 * component.curves[-1].median
        for edp in np.logspace(math.log10(lo), math.log10(hi), 50):
            pmf = ds_pmf(component, float(edp))
            worst = max(worst, abs(math.fsum(pmf.probs) - 1.0))
    check(
        f"ds_pmf mass conserved to 1e-12 over 50-point sweep x {len(components)} components",
        worst <= 1e-12,
        f"worst |sum-1| = {worst:.2e}",
    )


def test_monte_carlo_frequencies_and_loss(demo_bundle):
    pmf = DamagePMF(probs=(0.2, 0.5, 0.3))
    rng = np.random.default_rng(20240)
    n = 100_000
    counts = np.bincount([sample_ds(pmf, rng) for _ in range(n)], minlength=3)
    worst = float(np.max(np.abs(counts / n - np.asarray(pmf.probs))))
    check(
        "empirical DS frequencies within 0.005 of pmf at n=100000",
        worst <= 0.005,
        f"worst abs dev {worst:.4f}",
    )

    site = SitePoint(-118.25, 34.05)
    seed = 314
    analytic = run_drill(demo_bundle, site, "residence", seed=seed).total_expected_loss
    stats = monte_carlo_loss(demo_bundle, site, "residence", n=n, seed=seed)
    bound = 3.0 * stats["std"] / math.sqrt(n)
    check(
        "monte_carlo_loss mean within 3*std/sqrt(n) of analytic expectation",
        abs(stats["mean"] - analytic) <= bound,
        f"|{stats['mean']:.2f} - {analytic:.2f}| <= {bound:.2f}",
    )


def test_early_warning_arithmetic():
    sc = RuptureScenario(epicenter=PALM_SPRINGS, p_speed=6.0, s_speed=3.2, alert_latency=0.0)
    est = warning_for_distance(sc, 32.0)
    check("32 km / 3.2 km/s = 10.0 s s-wave delay, exact", est.s_arrival == 10.0, f"{est.s_arrival!r}")

    sc5 = RuptureScenario(epicenter=PALM_SPRINGS, p_speed=6.0, s_speed=3.2, alert_latency=5.0)
    est5 = warning_for_distance(sc5, 2.80)
    check(
        "2.80 km, 5 s latency -> warning_time = -4.125 s, exact",
        est5.warning_time == -4.125,
        f"{est5.warning_time!r}",
    )


def test_end_to_end_zero_case(demo_bundle):
    report = run_drill(demo_bundle, ZERO_SITE, "residence", seed=7)
    ok = (
        all(c.tag is TagColor.GREEN for c in report.components)
        and report.total_expected_loss == 0.0
        and bool(np.all(report.envelope.values == 0.0))
    )
    check(
        "zero-IM site -> all-Green report, zero loss, zero envelope",
        ok,
        f"tags {[c.tag.value for c in report.components]}, loss {report.total_expected_loss}",
    )


def test_palm_springs_red_tag_narrative(demo_bundle):
    reds = 0
    for seed in range(100):
        report = run_drill(demo_bundle, PALM_SPRINGS, "residence", seed=seed)
        if report.components[0].tag is TagColor.RED:
            reds += 1
    check("palm springs bookcase tagged Red for >= 95 of 100 seeds", reds >= 95, f"{reds}/100")


def test_cli_http_determinism(tmp_path, demo_manifest, demo_bundle):
    out_a = tmp_path / "a.json"
    out_b = tmp_path / "b.json"
    args = [
        "simulate",
        "--lat", "33.8", "--lon", "-116.5",
        "--room", "residence",
        "--seed", "1234",
        "--bundle", str(demo_manifest),
    ]
    assert cli.main([*args, "--out", str(out_a)]) == 0
    assert cli.main([*args, "--out", str(out_b)]) == 0
    cli_identical = out_a.read_bytes() == out_b.read_bytes()

    from fastapi.testclient import TestClient

    client = TestClient(build_app(demo_bundle))
    params = {"lat": 33.8, "lon": -116.5, "room": "residence", "seed": 1234}
    http_a = client.get("/api/report", params=params).content
    http_b = client.get("/api/report", params=params).content
    check(
        "identical (bundle, site, room, seed) -> byte-identical CLI and HTTP reports",
        cli_identical and http_a == http_b and out_a.read_bytes() == http_a,
        f"cli repeat {cli_identical}, http repeat {http_a == http_b}, cross {out_a.read_bytes() == http_a}",
    )


def test_round_trips(demo_bundle):
    grid_text = (FIXTURES / "shakeout_demo" / "grid.txt").read_text()
    field = parse_gm_grid(grid_text)
    grid_ok = parse_gm_grid(serialize_gm_grid(field)) == field

    report = run_drill(demo_bundle, PALM_SPRINGS, "residence", seed=42)
    text = report_to_text(report)
    report_ok = report_to_text(report_from_text(text)) == text
    check("grid file round-trips bit-exactly", grid_ok)
    check("report serialization round-trips to full precision", report_ok)
