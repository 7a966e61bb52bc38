"""Surface-code footprint and runtime estimates for a Toffoli workload.

Logical algorithm costs (Toffoli count, logical qubit count) are mapped to
physical-qubit counts and wall-clock time under a simple model: rotated
surface-code tiles of 2(d+1)^2 physical qubits, magic-state factories with
a 15d x 8d footprint refreshed every 5d-ish rounds, and a consumption clock
set by whichever is slower, factory output ("beat") or the classical
reaction time ("tick").
"""

from __future__ import annotations

import dataclasses
import math

from .costs import CostReport

MAX_CODE_DISTANCE = 51


@dataclasses.dataclass(frozen=True)
class PhysicalAssumptions:
    """Hardware model parameters.

    factory_rate_per_factory is the calibrated magic-state output rate of a
    single factory at distance 31 with a 1 microsecond cycle; the period
    scales linearly with distance and cycle time from that anchor.
    """

    phys_error_rate: float = 1e-3
    cycle_time: float = 1e-6
    reaction_time: float = 1e-5
    total_error_budget: float = 0.01
    factory_count: int = 4
    factory_rate_per_factory: float = 6250.0

    def __post_init__(self):
        if not 0.0 < self.phys_error_rate < 0.01:
            raise ValueError("phys_error_rate must lie in (0, 0.01)")
        if self.cycle_time <= 0 or self.reaction_time <= 0:
            raise ValueError("cycle_time and reaction_time must be positive")
        if not 0.0 < self.total_error_budget < 1.0:
            raise ValueError("total_error_budget must lie in (0, 1)")
        if self.factory_count < 1:
            raise ValueError("factory_count must be at least 1")
        if self.factory_rate_per_factory <= 0:
            raise ValueError("factory_rate_per_factory must be positive")


@dataclasses.dataclass(frozen=True)
class PhysicalEstimate:
    """Physical resources for one operating point."""

    data_distance: int
    factory_l1_distance: int
    factory_l2_distance: int
    data_tiles: float
    factory_tiles: int
    tiles: float
    physical_qubits_total: int
    runtime_seconds: float
    limiting_constraint: str
    logical_error_total: float

    @property
    def runtime_days(self) -> float:
        return self.runtime_seconds / 86400.0

    def to_dict(self) -> dict:
        out = dataclasses.asdict(self)
        out["runtime_days"] = self.runtime_days
        return out


def logical_error_rate(distance: int, phys_error_rate: float) -> float:
    """Per-round logical failure rate of one tile, 0.1 (p/0.01)^((d+1)/2)."""
    if distance < 3 or distance % 2 == 0:
        raise ValueError("distance must be an odd integer >= 3")
    if not 0.0 < phys_error_rate < 0.01:
        raise ValueError("phys_error_rate must lie in (0, 0.01)")
    return 0.1 * (phys_error_rate / 0.01) ** ((distance + 1) / 2)


def tile_qubits(distance: int) -> int:
    """Physical qubits per tile, data plus measure, with boundary padding."""
    return 2 * (distance + 1) ** 2


def factory_period(distance: int, assumptions: PhysicalAssumptions) -> float:
    """Seconds between magic states from a single factory."""
    return (
        (1.0 / assumptions.factory_rate_per_factory)
        * (distance / 31.0)
        * (assumptions.cycle_time / 1e-6)
    )


def toffoli_interval(distance: int, assumptions: PhysicalAssumptions):
    """Seconds per consumed Toffoli and which clock sets it.

    Returns (seconds, "beat" | "tick"): "beat" when the factories are the
    bottleneck, "tick" when the classical reaction time is.
    """
    beat = factory_period(distance, assumptions) / assumptions.factory_count
    if beat >= assumptions.reaction_time:
        return beat, "beat"
    return assumptions.reaction_time, "tick"


def factory_tiles(distance: int, assumptions: PhysicalAssumptions) -> int:
    """Tiles occupied by all factories; each has a 15d x 8d physical footprint."""
    per_factory = math.ceil(120 * distance * distance / tile_qubits(distance))
    return assumptions.factory_count * per_factory


def factory_distances(distance: int):
    """(first-level, second-level) code distances inside a factory.

    The second level runs at the data distance; the first level is the
    largest odd distance at most 19d/31.
    """
    l1 = int(19 * distance / 31)
    if l1 % 2 == 0:
        l1 -= 1
    return max(1, l1), distance


def choose_distance(logical_qubits: float, toffoli_count: float,
                    assumptions: PhysicalAssumptions) -> int:
    """Smallest odd distance keeping data-qubit failure within half the budget.

    The round count is self-consistent with the candidate distance, since
    the Toffoli consumption clock depends on it.
    """
    if toffoli_count < 0 or logical_qubits < 0:
        raise ValueError("counts must be nonnegative")
    if toffoli_count == 0:
        return 3
    for distance in range(3, MAX_CODE_DISTANCE + 1, 2):
        tau, _ = toffoli_interval(distance, assumptions)
        rounds = toffoli_count * tau / assumptions.cycle_time
        failure = (
            logical_qubits
            * rounds
            * logical_error_rate(distance, assumptions.phys_error_rate)
        )
        if failure <= assumptions.total_error_budget / 2.0:
            return distance
    raise ValueError(
        f"no distance up to {MAX_CODE_DISTANCE} meets the error budget"
    )


def _assemble(distance: int, data_tiles: float, toffoli_count: float,
              logical_qubits: float,
              assumptions: PhysicalAssumptions) -> PhysicalEstimate:
    if toffoli_count == 0:
        ftiles = 0
        tau, limiting = 0.0, "tick"
        runtime = 0.0
        rounds = 0.0
    else:
        ftiles = factory_tiles(distance, assumptions)
        tau, limiting = toffoli_interval(distance, assumptions)
        runtime = toffoli_count * tau
        rounds = runtime / assumptions.cycle_time
    tiles = data_tiles + ftiles
    l1, l2 = factory_distances(distance)
    return PhysicalEstimate(
        data_distance=distance,
        factory_l1_distance=l1,
        factory_l2_distance=l2,
        data_tiles=data_tiles,
        factory_tiles=ftiles,
        tiles=tiles,
        physical_qubits_total=int(round(tiles * tile_qubits(distance))),
        runtime_seconds=runtime,
        limiting_constraint=limiting,
        logical_error_total=(
            logical_qubits
            * rounds
            * logical_error_rate(distance, assumptions.phys_error_rate)
        ),
    )


def layout_estimate(report: CostReport | None = None, *,
                    assumptions: PhysicalAssumptions | None = None,
                    tiles: float | None = None,
                    toffoli: float | None = None) -> PhysicalEstimate:
    """Physical estimate from a cost report, or from a fixed tile budget.

    With a report: data tiles are 1.5 per logical qubit (routing overhead)
    and factories are added on top.  With a tile budget: the factory tiles
    are carved out of the budget first, so the logical qubit count and the
    distance are solved together by fixed-point iteration.
    """
    if assumptions is None:
        assumptions = PhysicalAssumptions()
    if report is not None:
        lq = report.logical_qubits
        count = report.toffoli_total
        distance = choose_distance(lq, count, assumptions)
        data_tiles = float(math.ceil(1.5 * lq))
        return _assemble(distance, data_tiles, count, lq, assumptions)
    if tiles is None or toffoli is None:
        raise ValueError("need either a cost report or tiles and toffoli")
    distance = 3
    lq = 0.0
    for _ in range(10):
        ftiles = factory_tiles(distance, assumptions) if toffoli else 0
        data_tiles = tiles - ftiles
        if data_tiles <= 0:
            raise ValueError("tile budget smaller than the factory footprint")
        lq = data_tiles / 1.5
        new_distance = choose_distance(lq, toffoli, assumptions)
        if new_distance == distance:
            break
        distance = new_distance
    ftiles = factory_tiles(distance, assumptions) if toffoli else 0
    data_tiles = tiles - ftiles
    lq = data_tiles / 1.5
    return _assemble(distance, data_tiles, toffoli, lq, assumptions)
