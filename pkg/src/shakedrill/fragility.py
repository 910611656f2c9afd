"""Lognormal fragility curves, damage-state PMFs, color tags, and expected loss.

Components carry an ordered list of lognormal fragility curves (one per damage
state DS1..DSn, all on the same demand parameter), a tag color per damage
state, and a repair cost per damage state. Damage-state probabilities come
from differencing exceedance curves; realizations are inverse-CDF draws from
a caller-owned seeded generator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

_SQRT2 = math.sqrt(2.0)
_MASS_TOL = 1e-12
_ORDERING_PROBE_POINTS = 50


class FragilityError(ValueError):
    """Base class for fragility contract violations."""


class NegativeEDPError(FragilityError):
    pass


class OrderingViolationError(FragilityError):
    pass


class UnknownDamageStateError(FragilityError):
    pass


class SchemaError(FragilityError):
    pass


class NegativeCostError(FragilityError):
    pass


class TagColor(str, Enum):
    GREEN = "Green"
    YELLOW = "Yellow"
    RED = "Red"


class EDPType(str, Enum):
    """Demand parameter a fragility curve consumes."""

    PFA_G = "PFA_g"
    PFV_CMS = "PFV_cms"
    PGA_G = "PGA_g"
    PGV_CMS = "PGV_cms"
    SDR = "SDR"


@dataclass(frozen=True)
class FragilityCurve:
    """Lognormal exceedance curve: median in EDP units, logarithmic dispersion."""

    edp_type: EDPType
    median: float
    dispersion: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.median) and self.median > 0.0):
            raise ValueError(f"median must be positive, got {self.median}")
        if not (math.isfinite(self.dispersion) and self.dispersion > 0.0):
            raise ValueError(f"dispersion must be positive, got {self.dispersion}")


@dataclass(frozen=True)
class ComponentSpec:
    """A non-structural component: curves DS1..DSn plus per-state tags and repair costs.

    tag_map and repair_cost are indexed by damage state 0..n (DS0 = undamaged,
    cost 0).
    """

    id: str
    name: str
    curves: tuple[FragilityCurve, ...]
    tag_map: tuple[TagColor, ...]
    repair_cost: tuple[float, ...]

    def __post_init__(self) -> None:
        n = len(self.curves)
        if n < 1:
            raise ValueError(f"{self.id}: need at least one damage state")
        edp_types = {curve.edp_type for curve in self.curves}
        if len(edp_types) != 1:
            raise ValueError(f"{self.id}: curves mix EDP types {sorted(t.value for t in edp_types)}")
        if len(self.tag_map) != n + 1:
            raise ValueError(f"{self.id}: tag_map must cover DS0..DS{n}")
        if len(self.repair_cost) != n + 1:
            raise ValueError(f"{self.id}: repair_cost must cover DS0..DS{n}")
        if self.repair_cost[0] != 0.0:
            raise ValueError(f"{self.id}: DS0 repair cost must be 0")
        for ds, cost in enumerate(self.repair_cost):
            if not math.isfinite(cost) or cost < 0.0:
                raise NegativeCostError(f"{self.id}: DS{ds} repair cost {cost} is negative")

    @property
    def edp_type(self) -> EDPType:
        return self.curves[0].edp_type

    @property
    def n_damage_states(self) -> int:
        return len(self.curves)


@dataclass(frozen=True)
class DamagePMF:
    """Probability mass over DS0..DSn; sums to 1 within 1e-12."""

    probs: tuple[float, ...]

    def __post_init__(self) -> None:
        if any(p < 0.0 or p > 1.0 for p in self.probs):
            raise ValueError(f"pmf entries outside [0, 1]: {self.probs}")
        total = math.fsum(self.probs)
        if abs(total - 1.0) > _MASS_TOL:
            raise ValueError(f"pmf sums to {total}, not 1")


def default_tag_map(n_damage_states: int) -> tuple[TagColor, ...]:
    """DS0 green, highest state red, everything between yellow."""
    if n_damage_states < 1:
        raise ValueError("need at least one damage state")
    return (
        (TagColor.GREEN,)
        + (TagColor.YELLOW,) * (n_damage_states - 1)
        + (TagColor.RED,)
    )


def _std_normal_cdf(z: float) -> float:
    return 0.5 * math.erfc(-z / _SQRT2)


def p_exceed(curve: FragilityCurve, edp: float) -> float:
    """P(damage state reached or exceeded | demand), lognormal CDF in the demand."""
    if not math.isfinite(edp) or edp < 0.0:
        raise NegativeEDPError(f"edp must be finite and >= 0, got {edp}")
    if edp == 0.0:
        return 0.0
    return _std_normal_cdf(math.log(edp / curve.median) / curve.dispersion)


def ds_pmf(component: ComponentSpec, edp: float) -> DamagePMF:
    """P(DS = i) by differencing exceedance probabilities; DS0 absorbs non-exceedance."""
    exceed = [1.0] + [p_exceed(curve, edp) for curve in component.curves] + [0.0]
    masses = [exceed[i] - exceed[i + 1] for i in range(len(exceed) - 1)]
    clamped = False
    for i, mass in enumerate(masses):
        if mass < -_MASS_TOL:
            raise OrderingViolationError(
                f"{component.id}: negative P(DS={i}) = {mass} at edp {edp}; "
                "curves are not exceedance-ordered here"
            )
        if mass < 0.0:
            masses[i] = 0.0
            clamped = True
    if clamped:
        total = math.fsum(masses)
        masses = [m / total for m in masses]
    return DamagePMF(probs=tuple(masses))


def sample_ds(pmf: DamagePMF, rng: np.random.Generator) -> int:
    """Inverse-CDF draw: smallest i with cumulative probability > u, u ~ U[0, 1)."""
    u = float(rng.random())
    cumulative = 0.0
    for i, p in enumerate(pmf.probs):
        cumulative += p
        if cumulative > u:
            return i
    return len(pmf.probs) - 1  # unreachable for an exact pmf; guards fsum round-off


def tag_for(component: ComponentSpec, ds: int) -> TagColor:
    if not 0 <= ds <= component.n_damage_states:
        raise UnknownDamageStateError(
            f"{component.id}: DS{ds} outside 0..{component.n_damage_states}"
        )
    return component.tag_map[ds]


def expected_loss(component: ComponentSpec, pmf: DamagePMF) -> float:
    """Probability-weighted repair cost."""
    return math.fsum(p * c for p, c in zip(pmf.probs, component.repair_cost))


def _check_exceedance_ordering(component: ComponentSpec) -> None:
    """Probe the ordering invariant over a log-spaced EDP sweep."""
    lo = 0.01 * component.curves[0].median
    hi = 100.0 * component.curves[-1].median
    probes = np.logspace(math.log10(lo), math.log10(hi), _ORDERING_PROBE_POINTS)
    for edp in probes:
        values = [p_exceed(curve, float(edp)) for curve in component.curves]
        for i in range(len(values) - 1):
            if values[i] < values[i + 1] - _MASS_TOL:
                raise OrderingViolationError(
                    f"{component.id}: DS{i + 2} exceedance {values[i + 1]} > "
                    f"DS{i + 1} exceedance {values[i]} at edp {float(edp)}"
                )


def parse_fragility_library(text: str) -> list[ComponentSpec]:
    """Parse and fully validate the JSON component library.

    Top level is a list of components:
    {id, name, edp_type, damage_states: [{median, dispersion, repair_cost, tag?}]}.
    """
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"library is not valid JSON: {exc}") from exc
    if not isinstance(raw, list):
        raise SchemaError("library top level must be a list of components")

    components: list[ComponentSpec] = []
    seen: set[str] = set()
    for entry in raw:
        if not isinstance(entry, dict) or "id" not in entry:
            raise SchemaError(f"component entry missing id: {entry!r}")
        cid = str(entry["id"])
        if cid in seen:
            raise SchemaError(f"{cid}: duplicate component id")
        seen.add(cid)
        try:
            edp_type = EDPType(entry["edp_type"])
        except (KeyError, ValueError) as exc:
            raise SchemaError(f"{cid}: bad or missing edp_type: {exc}") from exc
        states = entry.get("damage_states")
        if not isinstance(states, list) or not states:
            raise SchemaError(f"{cid}: damage_states must be a non-empty list")

        curves: list[FragilityCurve] = []
        costs: list[float] = [0.0]
        tags: list[TagColor | None] = [None]
        for k, state in enumerate(states):
            ds = k + 1
            if not isinstance(state, dict):
                raise SchemaError(f"{cid}: DS{ds} entry must be an object")
            try:
                median = float(state["median"])
                dispersion = float(state["dispersion"])
                cost = float(state["repair_cost"])
            except (KeyError, TypeError, ValueError) as exc:
                raise SchemaError(f"{cid}: DS{ds}: {exc}") from exc
            if cost < 0.0:
                raise NegativeCostError(f"{cid}: DS{ds} repair cost {cost} is negative")
            try:
                curves.append(FragilityCurve(edp_type=edp_type, median=median, dispersion=dispersion))
            except ValueError as exc:
                raise SchemaError(f"{cid}: DS{ds}: {exc}") from exc
            costs.append(cost)
            if "tag" in state:
                try:
                    tags.append(TagColor(state["tag"]))
                except ValueError as exc:
                    raise SchemaError(f"{cid}: DS{ds}: unknown tag {state['tag']!r}") from exc
            else:
                tags.append(None)

        defaults = default_tag_map(len(curves))
        tag_map = tuple(
            tag if tag is not None else defaults[ds] for ds, tag in enumerate(tags)
        )
        try:
            component = ComponentSpec(
                id=cid,
                name=str(entry.get("name", cid)),
                curves=tuple(curves),
                tag_map=tag_map,
                repair_cost=tuple(costs),
            )
        except NegativeCostError:
            raise
        except ValueError as exc:
            raise SchemaError(str(exc)) from exc
        _check_exceedance_ordering(component)
        components.append(component)
    return components
