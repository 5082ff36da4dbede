"""
Scenario and report models for CausalLab.
A scenario names a spacetime, a point source, slices and an ordered list of
checks with expectations; a report records the verdict of each check.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple

import config
from utils.file_utils import to_jsonable

from .errors import ScenarioValidationError
from .spacetime import Event, SpacetimeModel


class Expectation(Enum):
    """What a check is expected to do."""
    MUST_HOLD = "must-hold"
    MUST_FAIL = "must-fail"
    REPORT = "report"


class SourceKind(Enum):
    SPRINKLE = "sprinkle"
    POINTS = "points"
    RELATIONS = "relations"


SCENARIO_KEYS = {'name', 'seed', 'model', 'sprinkle', 'points', 'relations', 'slices',
                 'marked_point', 'tolerances', 'budgets', 'fail_fast', 'checks', 'description'}
CHECK_KEYS = {'name', 'expect', 'params', 'raises'}


def _require(condition: bool, message: str, field_name: str) -> None:
    if not condition:
        raise ScenarioValidationError(message, field_name)


def _reject_unknown(data: Dict[str, Any], allowed: set, prefix: str) -> None:
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ScenarioValidationError(f"Unknown key '{unknown[0]}'", f"{prefix}{unknown[0]}")


@dataclass(frozen=True)
class CheckSpec:
    name: str
    expect: Expectation = Expectation.MUST_HOLD
    params: Dict[str, Any] = field(default_factory=dict)
    raises: Optional[str] = None  # error name that counts as the expected failure


@dataclass(frozen=True)
class SliceSpec:
    levels: Tuple[float, ...] = ()
    antichains: Tuple[Tuple[int, ...], ...] = ()


@dataclass(frozen=True)
class Scenario:
    """A validated scenario file."""
    name: str
    model: Optional[SpacetimeModel]
    source: SourceKind
    source_data: Dict[str, Any]
    checks: Tuple[CheckSpec, ...]
    seed: int = 0
    slices: SliceSpec = SliceSpec()
    marked_point: Optional[Dict[str, Any]] = None
    grid_h: float = config.DEFAULT_GRID_H
    eps: float = 0.1
    samples: int = config.DEFAULT_SAMPLE_BUDGET
    fail_fast: bool = False
    description: str = ""

    @classmethod
    def from_dict(cls, data: Any) -> "Scenario":
        _require(isinstance(data, dict), "Scenario must be a JSON object", "")
        _reject_unknown(data, SCENARIO_KEYS, "")
        _require(isinstance(data.get('name'), str) and data['name'], "Scenario needs a name", "name")

        sources = [key for key in ('sprinkle', 'points', 'relations') if key in data]
        _require(len(sources) == 1, "Exactly one of sprinkle, points or relations is required", "sprinkle")
        source = SourceKind(sources[0])
        source_data = data[sources[0]]

        model = None
        if 'model' in data:
            try:
                model = SpacetimeModel.from_dict(data['model'])
            except (KeyError, TypeError, ValueError) as exc:
                raise ScenarioValidationError(f"Invalid model: {exc}", "model") from exc
        _require(model is not None or source is SourceKind.RELATIONS,
                 f"A '{source.value}' source needs a model", "model")

        if source is SourceKind.SPRINKLE:
            _require(isinstance(source_data, dict), "sprinkle must be an object", "sprinkle")
            _reject_unknown(source_data, {'density', 'seed'}, "sprinkle.")
            _require(isinstance(source_data.get('density'), (int, float)) and source_data['density'] >= 0,
                     "sprinkle.density must be a non-negative number", "sprinkle.density")
            _require(isinstance(source_data.get('seed', 0), int), "sprinkle.seed must be an integer", "sprinkle.seed")
        elif source is SourceKind.POINTS:
            _require(isinstance(source_data, list), "points must be a list", "points")
            for i, point in enumerate(source_data):
                _require(isinstance(point, list) and len(point) == model.d + 1,
                         f"points[{i}] must have {model.d + 1} coordinates", f"points[{i}]")
        else:
            _require(isinstance(source_data, dict), "relations must be an object", "relations")
            _reject_unknown(source_data, {'n', 'edges'}, "relations.")
            _require(isinstance(source_data.get('n'), int) and source_data['n'] >= 0,
                     "relations.n must be a non-negative integer", "relations.n")
            for i, edge in enumerate(source_data.get('edges', [])):
                _require(isinstance(edge, list) and len(edge) == 2, f"relations.edges[{i}] must be a pair",
                         f"relations.edges[{i}]")

        slices = SliceSpec()
        if 'slices' in data:
            spec = data['slices']
            _require(isinstance(spec, dict), "slices must be an object", "slices")
            _reject_unknown(spec, {'levels', 'antichains'}, "slices.")
            slices = SliceSpec(tuple(float(t) for t in spec.get('levels', [])),
                               tuple(tuple(int(i) for i in a) for a in spec.get('antichains', [])))
            _require(not slices.levels or source is not SourceKind.RELATIONS,
                     "Level slices need embedded points", "slices.levels")

        marked = data.get('marked_point')
        if marked is not None:
            _require(isinstance(marked, dict) and len(marked) == 1 and set(marked) <= {'id', 'nearest'},
                     "marked_point needs exactly one of id or nearest", "marked_point")

        tolerances = data.get('tolerances', {})
        _reject_unknown(tolerances, {'grid_h', 'eps'}, "tolerances.")
        budgets = data.get('budgets', {})
        _reject_unknown(budgets, {'samples'}, "budgets.")

        checks_data = data.get('checks')
        _require(isinstance(checks_data, list) and checks_data, "checks must be a nonempty list", "checks")
        checks = []
        for i, check in enumerate(checks_data):
            _require(isinstance(check, dict), f"checks[{i}] must be an object", f"checks[{i}]")
            _reject_unknown(check, CHECK_KEYS, f"checks[{i}].")
            _require(isinstance(check.get('name'), str), f"checks[{i}] needs a name", f"checks[{i}].name")
            try:
                expect = Expectation(check.get('expect', Expectation.MUST_HOLD.value))
            except ValueError as exc:
                raise ScenarioValidationError(str(exc), f"checks[{i}].expect") from exc
            params = check.get('params', {})
            _require(isinstance(params, dict), f"checks[{i}].params must be an object", f"checks[{i}].params")
            raises = check.get('raises')
            _require(raises is None or (isinstance(raises, str) and expect is Expectation.MUST_FAIL),
                     f"checks[{i}].raises must name an error of a must-fail check", f"checks[{i}].raises")
            checks.append(CheckSpec(check['name'], expect, dict(params), raises))

        return cls(
            name=data['name'],
            model=model,
            source=source,
            source_data=source_data,
            checks=tuple(checks),
            seed=int(data.get('seed', 0)),
            slices=slices,
            marked_point=marked,
            grid_h=float(tolerances.get('grid_h', config.DEFAULT_GRID_H)),
            eps=float(tolerances.get('eps', 0.1)),
            samples=int(budgets.get('samples', config.DEFAULT_SAMPLE_BUDGET)),
            fail_fast=bool(data.get('fail_fast', False)),
            description=str(data.get('description', '')),
        )

    def events(self) -> List[Event]:
        return [Event.from_sequence(p) for p in self.source_data] if self.source is SourceKind.POINTS else []


@dataclass
class CheckResult:
    name: str
    expect: Expectation
    verdict: bool
    satisfied: bool
    details: Dict[str, Any] = field(default_factory=dict)
    witnesses: Any = None
    flags: Dict[str, Any] = field(default_factory=dict)
    wall_time: float = 0.0

    @staticmethod
    def is_satisfied(expect: Expectation, verdict: bool, flags: Optional[Dict[str, Any]] = None,
                     error: Optional[str] = None, raises: Optional[str] = None) -> bool:
        """A must-fail is met only by an explained failure or by the named error."""
        flags = flags or {}
        if flags.get('parameter_error'):
            return False
        if expect is Expectation.MUST_HOLD:
            return verdict and error is None
        if expect is Expectation.MUST_FAIL:
            if verdict:
                return False
            if error is not None or raises is not None:
                return error == raises
            return bool(flags.get('failure_explained', True))
        return True


@dataclass
class Report:
    scenario: str
    artifact_version: str
    provenance: Dict[str, Any]
    checks: List[CheckResult]
    generated_at: str = ""

    @property
    def exit_code(self) -> int:
        return config.EXIT_OK if all(c.satisfied for c in self.checks) else config.EXIT_CHECK_FAILED

    def summary(self) -> Dict[str, int]:
        return {'total': len(self.checks), 'satisfied': sum(c.satisfied for c in self.checks),
                'exit_code': self.exit_code}

    def to_dict(self) -> Dict[str, Any]:
        return {
            'scenario': self.scenario,
            'artifact_version': self.artifact_version,
            'generated_at': self.generated_at,
            'provenance': to_jsonable(self.provenance),
            'checks': [to_jsonable(c) for c in self.checks],
            'summary': self.summary(),
        }


TIMING_FIELDS: Sequence[str] = ('wall_time', 'generated_at')
