"""
Experiment Runner
Expands an ExperimentConfig into sweep points, evaluates them on a worker
pool and returns rows in sorted point order.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple, Union

import numpy as np

from ..analysis.alias import Precoder, make_precoder
from ..analysis.metrics import ConstraintViolationError, Violation, check_constraints
from ..analysis.modwave import ModConfig
from ..config.loader import ExperimentConfig

PARAM_COLUMNS = ["N", "A", "O_tau", "d", "K_b", "N_cp"]
VIOLATION_COLUMN = "violations"

Row = Dict[str, Any]


@dataclass(frozen=True, order=True)
class SweepPoint:
    """One parameter tuple (N, A, O_tau, d, K_b, N_cp) of a sweep."""

    n_states: int
    alias_factor: int
    oversampling: int
    delay: int
    block_size: int
    cp_length: Union[int, Fraction]

    def params(self) -> Row:
        return {
            "N": self.n_states,
            "A": self.alias_factor,
            "O_tau": self.oversampling,
            "d": self.delay,
            "K_b": self.block_size,
            "N_cp": self.cp_length,
        }

    @property
    def subcarriers(self) -> int:
        return self.alias_factor * self.block_size

    @property
    def integer_cp(self) -> Optional[int]:
        cp = Fraction(self.cp_length)
        return int(cp) if cp.denominator == 1 else None


@dataclass
class PointResult:
    point: SweepPoint
    rows: List[Row]
    violations: List[str]


class Experiment:
    """
    Base class for every experiment type.

    Subclasses set `name` and `columns` and implement evaluate(); the base
    class owns point expansion and turns domain errors into annotated rows.
    """

    name = ""
    columns: List[str] = []
    check_cp = True

    def __init__(self, config: ExperimentConfig):
        self.config = config

    @property
    def header(self) -> List[str]:
        return PARAM_COLUMNS + self.columns + [VIOLATION_COLUMN]

    def block_size_for(self, n_states: int, alias_factor: int) -> int:
        if self.config.block_size is not None:
            return self.config.block_size
        base = self.config.default_block_size
        return n_states * -(-base // n_states)

    def cp_length_for(self, alias_factor: int, block_size: int) -> Union[int, Fraction]:
        if self.config.cp_length is not None:
            return self.config.cp_length
        cp = Fraction(self.config.cp_fraction).limit_denominator(10**6)
        value = cp * alias_factor * block_size
        return int(value) if value.denominator == 1 else value

    def allocations(self) -> List[Tuple[int, int]]:
        if self.config.allocations:
            return list(self.config.allocations)
        return [
            (a, o) for a in self.config.alias_factor for o in self.config.oversampling
        ]

    def delays_for(self, n_states: int, oversampling: int) -> List[int]:
        if self.config.all_delays:
            return list(range(n_states * oversampling))
        return list(self.config.delay)

    def points(self) -> List[SweepPoint]:
        found = set()
        for n in self.config.n_states:
            for a, o in self.allocations():
                kb = self.block_size_for(n, a)
                cp = self.cp_length_for(a, kb)
                for d in self.delays_for(n, o):
                    found.add(SweepPoint(n, a, o, d, kb, cp))
        return sorted(found)

    def precoder(self, alias_factor: int) -> Precoder:
        return make_precoder(self.config.precoder, alias_factor)

    def mod_config(self, point: SweepPoint) -> ModConfig:
        return ModConfig(
            n_states=point.n_states,
            alias_factor=point.alias_factor,
            oversampling=point.oversampling,
            sample_rate=self.config.sample_rate,
        )

    def violations_for(self, cfg: ModConfig, point: SweepPoint) -> List[Violation]:
        if not self.check_cp:
            return check_constraints(cfg, point.block_size)
        found = check_constraints(cfg, point.block_size, point.integer_cp)
        if point.integer_cp is None:
            found.append(
                Violation(
                    rule="cp_length_not_integer",
                    message=f"N_cp={point.cp_length} is not a whole sample count",
                )
            )
        return found

    def evaluate(
        self, cfg: ModConfig, point: SweepPoint, rng: np.random.Generator
    ) -> List[Row]:
        raise NotImplementedError

    def extras(self) -> Dict[str, Any]:
        """Experiment-level facts for the JSON sidecar."""
        return {}

    def run_point(self, point: SweepPoint) -> PointResult:
        rng = np.random.default_rng(
            np.random.SeedSequence(
                [
                    self.config.seed,
                    point.n_states,
                    point.alias_factor,
                    point.oversampling,
                    point.delay,
                ]
            )
        )
        try:
            cfg = self.mod_config(point)
            cfg.check_delay(point.delay)
            found = self.violations_for(cfg, point)
            if found:
                raise ConstraintViolationError(found)
            rows = self.evaluate(cfg, point, rng)
        except ConstraintViolationError as e:
            return self._annotated(point, [str(v) for v in e.violations])
        except ValueError as e:
            return self._annotated(point, [str(e)])
        for row in rows:
            row.setdefault(VIOLATION_COLUMN, "")
        return PointResult(point, [{**point.params(), **row} for row in rows], [])

    def _annotated(self, point: SweepPoint, messages: List[str]) -> PointResult:
        row: Row = {**point.params(), VIOLATION_COLUMN: "; ".join(messages)}
        return PointResult(point, [row], messages)


def run_experiment(
    experiment: Experiment,
    jobs: int = 1,
    on_point: Optional[Callable[[PointResult], None]] = None,
) -> List[PointResult]:
    """
    Evaluate every sweep point. Results come back in sorted point order
    regardless of the order in which workers finish.
    """
    points = experiment.points()
    if jobs <= 1 or len(points) <= 1:
        results = []
        for point in points:
            result = experiment.run_point(point)
            if on_point:
                on_point(result)
            results.append(result)
        return results

    with ThreadPoolExecutor(max_workers=jobs) as pool:
        results = list(pool.map(experiment.run_point, points))
    if on_point:
        for result in results:
            on_point(result)
    return results
