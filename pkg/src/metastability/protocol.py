"""
Scenario and report wire format.

Scenario files and reports are JSON. Rationals travel as ``"num/den"``
strings and big naturals as decimal strings, so nothing on the wire is a
binary float.
"""
from __future__ import annotations

import csv
import enum
import io
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, TypeVar, Union

from metastability.functions import PwlFunction
from metastability.iterations import Scheme
from metastability.numerics import (
    Caps,
    format_rational,
    nat,
    pos_rational,
    to_rational,
    unit_rational,
)
from metastability.oracle import Outcome, Status
from metastability.schedules import (
    CounterFunc,
    Modulus,
    ParamSchedule,
    Rate,
    counter_from_json,
    modulus_from_json,
    rate_from_json,
    schedule_from_json,
)

logger = logging.getLogger(__name__)

VERSION = 1

CAP_FIELDS = ("nat_bits", "horizon", "search")

SCENARIO_FIELDS = (
    "id",
    "theorem",
    "scheme",
    "f",
    "t",
    "s",
    "x0",
    "epsilon",
    "g",
    "omega",
    "beta",
    "gamma",
    "delta",
    "caps",
)

T = TypeVar("T")


class Theorem(str, enum.Enum):
    """Which convergence statement a scenario exercises."""

    FMCP = "fmcp"
    KM = "km"
    ISHIKAWA = "ishikawa"
    LIPSCHITZ = "lipschitz"


# Fields a theorem needs in addition to id, f, x0, epsilon and g.
REQUIRED_FIELDS: Dict[Theorem, tuple] = {
    Theorem.FMCP: (),
    Theorem.KM: ("omega", "beta"),
    Theorem.ISHIKAWA: ("omega", "beta", "gamma", "s"),
    Theorem.LIPSCHITZ: ("delta",),
}

ALLOWED_SCHEMES: Dict[Theorem, tuple] = {
    Theorem.FMCP: (Scheme.PICARD, Scheme.KM, Scheme.ISHIKAWA),
    Theorem.KM: (Scheme.PICARD, Scheme.KM),
    Theorem.ISHIKAWA: (Scheme.ISHIKAWA,),
    Theorem.LIPSCHITZ: (Scheme.PICARD, Scheme.KM),
}


class ScenarioError(ValueError):
    """
    Invalid scenario input.

    :ivar path: dotted field path such as ``scenarios[3].g``, if known.
    :ivar line: line of a JSON syntax error.
    :ivar column: column of a JSON syntax error.
    """

    def __init__(
        self,
        message: str,
        path: Optional[str] = None,
        line: Optional[int] = None,
        column: Optional[int] = None,
    ):
        location = ""
        if path is not None:
            location = "%s: " % path
        elif line is not None:
            location = "line %d column %d: " % (line, column or 0)
        super(ScenarioError, self).__init__(location + message)
        self.message = message
        self.path = path
        self.line = line
        self.column = column


def _parse(path: str, parser: Callable[[Any], T], value: Any) -> T:
    try:
        return parser(value)
    except ScenarioError:
        raise
    except (ValueError, TypeError, KeyError) as e:
        raise ScenarioError(str(e), path=path)


@dataclass
class Scenario(object):
    """
    One verification scenario.

    :ivar caps: per-scenario cap overrides, keys from ``nat_bits``,
        ``horizon`` and ``search``.
    """

    id: str
    theorem: Theorem
    f: PwlFunction
    x0: Fraction
    epsilon: Fraction
    g: CounterFunc
    scheme: Scheme = Scheme.KM
    t: Optional[ParamSchedule] = None
    s: Optional[ParamSchedule] = None
    omega: Optional[Modulus] = None
    beta: Optional[Rate] = None
    gamma: Optional[Rate] = None
    delta: Optional[Fraction] = None
    caps: Dict[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        self.theorem = Theorem(self.theorem)
        self.scheme = Scheme(self.scheme)
        self.validate()

    def validate(self, path: str = "scenario") -> None:
        """:raise ScenarioError: if the theorem's required fields are missing."""
        if self.scheme not in ALLOWED_SCHEMES[self.theorem]:
            raise ScenarioError(
                "theorem %r does not apply to scheme %r"
                % (self.theorem.value, self.scheme.value),
                path="%s.scheme" % path,
            )
        if self.scheme != Scheme.PICARD and self.t is None:
            raise ScenarioError(
                "scheme %r needs t" % self.scheme.value, path="%s.t" % path
            )
        if self.scheme == Scheme.ISHIKAWA and self.s is None:
            raise ScenarioError("scheme 'ishikawa' needs s", path="%s.s" % path)
        for name in REQUIRED_FIELDS[self.theorem]:
            if getattr(self, name) is None:
                raise ScenarioError(
                    "theorem %r requires %r" % (self.theorem.value, name),
                    path="%s.%s" % (path, name),
                )
        if self.delta is not None and not 0 < self.delta < 1:
            raise ScenarioError("delta must lie in (0, 1)", path="%s.delta" % path)
        unknown = set(self.caps) - set(CAP_FIELDS)
        if unknown:
            raise ScenarioError(
                "unknown caps %s" % ", ".join(sorted(unknown)), path="%s.caps" % path
            )
        for key, limit in self.caps.items():
            if isinstance(limit, bool) or not isinstance(limit, int) or limit <= 0:
                raise ScenarioError(
                    "cap %r must be a positive integer" % key, path="%s.caps" % path
                )

    def resolve_caps(self, base: Caps, **overrides: Optional[int]) -> Caps:
        """
        Effective caps: `overrides` (command line) over the scenario's own
        caps over `base` (environment and defaults).
        """
        return base.override(**self.caps).override(**overrides)

    @classmethod
    def from_json(cls, data: Any, path: str = "scenario") -> Scenario:
        if not isinstance(data, dict):
            raise ScenarioError("scenario must be an object", path=path)

        def get(name: str, parser: Callable[[Any], T]) -> Optional[T]:
            if name not in data:
                return None
            return _parse("%s.%s" % (path, name), parser, data[name])

        def require(name: str, parser: Callable[[Any], T]) -> T:
            if name not in data:
                raise ScenarioError("missing field", path="%s.%s" % (path, name))
            return _parse("%s.%s" % (path, name), parser, data[name])

        unknown = set(data) - set(SCENARIO_FIELDS)
        if unknown:
            names = ", ".join(sorted(unknown))
            raise ScenarioError("unknown fields %s" % names, path=path)

        theorem = require("theorem", Theorem)
        default_scheme = Scheme.ISHIKAWA if theorem == Theorem.ISHIKAWA else Scheme.KM
        try:
            return cls(
                id=require("id", _string),
                theorem=theorem,
                scheme=get("scheme", Scheme) or default_scheme,
                f=require("f", PwlFunction.from_json),
                t=get("t", schedule_from_json),
                s=get("s", schedule_from_json),
                x0=require("x0", unit_rational),
                epsilon=require("epsilon", pos_rational),
                g=require("g", counter_from_json),
                omega=get("omega", modulus_from_json),
                beta=get("beta", rate_from_json),
                gamma=get("gamma", rate_from_json),
                delta=get("delta", pos_rational),
                caps=get("caps", _caps) or {},
            )
        except ScenarioError as e:
            # Re-anchor paths reported by validate() at this scenario.
            if e.path is not None and e.path.startswith("scenario."):
                raise ScenarioError(e.message, path=path + e.path[len("scenario") :])
            raise

    def to_json(self) -> Dict[str, Any]:
        result: Dict[str, Any] = dict(
            id=self.id,
            theorem=self.theorem.value,
            scheme=self.scheme.value,
            f=self.f.to_json(),
            x0=format_rational(self.x0),
            epsilon=format_rational(self.epsilon),
            g=self.g.to_json(),
        )
        for name in ("t", "s", "omega", "beta", "gamma"):
            value = getattr(self, name)
            if value is not None:
                result[name] = value.to_json()
        if self.delta is not None:
            result["delta"] = format_rational(self.delta)
        if self.caps:
            result["caps"] = dict(self.caps)
        return result


def _string(value: Any) -> str:
    if not isinstance(value, str) or not value:
        raise ValueError("expected a non-empty string")
    return value


def _caps(value: Any) -> Dict[str, int]:
    if not isinstance(value, dict):
        raise ValueError("caps must be an object")
    result: Dict[str, int] = {}
    for key, limit in value.items():
        limit = nat(limit)
        if limit == 0:
            raise ValueError("cap %r must be positive" % key)
        result[key] = limit
    return result


def _canonical(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def loads(text: str) -> List[Scenario]:
    """
    Parse a scenario file.

    :raise ScenarioError: with a line and column for malformed JSON, or a
        field path for invalid content.
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(e.msg, line=e.lineno, column=e.colno)
    if not isinstance(data, dict):
        raise ScenarioError("scenario file must be an object", path="$")
    if data.get("version") != VERSION:
        raise ScenarioError(
            "unsupported version %r" % data.get("version"), path="version"
        )
    items = data.get("scenarios")
    if not isinstance(items, list):
        raise ScenarioError("'scenarios' must be a list", path="scenarios")
    scenarios = [
        Scenario.from_json(item, "scenarios[%d]" % i) for i, item in enumerate(items)
    ]
    ids = [s.id for s in scenarios]
    for i, name in enumerate(ids):
        if name in ids[:i]:
            raise ScenarioError("duplicate id %r" % name, path="scenarios[%d].id" % i)
    logger.debug("Loaded %d scenarios" % len(scenarios))
    return scenarios


def load(path: str) -> List[Scenario]:
    with open(path, "r", encoding="utf-8") as f:
        return loads(f.read())


def dumps(scenarios: List[Scenario]) -> str:
    """Canonical scenario file: sorted keys, two-space indent, final newline."""
    return _canonical(dict(version=VERSION, scenarios=[s.to_json() for s in scenarios]))


@dataclass
class ReportEntry(object):
    """Outcome of one scenario, tagged with its id."""

    id: str
    theorem: Theorem
    epsilon: Fraction
    outcome: Outcome
    wall_time: Optional[float] = None

    @property
    def status(self) -> Status:
        return self.outcome.status

    def to_json(self) -> Dict[str, Any]:
        result = self.outcome.to_json()
        result.update(
            id=self.id,
            theorem=self.theorem.value,
            epsilon=format_rational(self.epsilon),
        )
        if self.wall_time is not None:
            result["wall_time"] = "%.3f" % self.wall_time
        return result


@dataclass
class Report(object):
    """Entries sorted by scenario id plus per-status counts."""

    entries: List[ReportEntry] = field(default_factory=list)

    def counts(self) -> Dict[str, int]:
        result = {status.value: 0 for status in Status}
        for entry in self.entries:
            result[entry.status.value] += 1
        result["total"] = len(self.entries)
        return result

    @property
    def failed(self) -> int:
        return self.counts()[Status.FAILED.value]

    def to_json(self) -> Dict[str, Any]:
        return dict(
            version=VERSION,
            entries=[entry.to_json() for entry in self.entries],
            summary=self.counts(),
        )

    def dumps(self) -> str:
        return _canonical(self.to_json())


PLOT_HEADER = ("id", "epsilon", "bound", "least_n", "ratio")


def emit_plot_data(report: Union[Report, Dict[str, Any]]) -> str:
    """
    CSV rows ``id, epsilon, bound, least_n, ratio`` for external plotting.

    `ratio` is ``least_n/bound`` as an exact ``"num/den"``, ``"0/0 exact"``
    when the bound is 0, and empty when either value is missing.
    """
    data = report.to_json() if isinstance(report, Report) else report
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(PLOT_HEADER)
    for entry in data.get("entries", []):
        bound = entry.get("bound")
        least_n = (entry.get("meta") or {}).get("least_n")
        ratio = ""
        if bound is not None and least_n is not None:
            if int(bound) == 0:
                ratio = "0/0 exact"
            else:
                ratio = format_rational(Fraction(int(least_n), int(bound)))
        writer.writerow(
            (
                entry["id"],
                format_rational(to_rational(entry["epsilon"])),
                "" if bound is None else bound,
                "" if least_n is None else least_n,
                ratio,
            )
        )
    return buffer.getvalue()
