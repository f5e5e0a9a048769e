"""Result containers: one inequality evaluation, and aggregated reports."""
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import __version__

__all__ = ["SlackRecord", "Report", "to_jsonable", "REPORT_FIELDS"]

REPORT_FIELDS = (
    "case", "params", "trials", "violations", "marginal", "min_slack",
    "argmin_inputs", "seed", "tolerance", "runtime_ms", "tool_version",
)


def to_jsonable(obj):
    """Convert arrays, specs and non-finite floats into plain JSON values.

    Infinite floats become the strings ``"inf"`` / ``"-inf"``.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer, int)):
        return int(obj)
    if isinstance(obj, (np.floating, float)):
        x = float(obj)
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return x
    if obj is None or isinstance(obj, str):
        return obj
    if hasattr(obj, "matrix"):
        return to_jsonable(obj.matrix)
    return str(obj)


@dataclass
class SlackRecord:
    """Outcome of one inequality check ``lhs <= rhs``.

    ``slack`` is ``rhs - lhs`` and the check holds when it is at least
    ``-tolerance``.
    """

    case_name: str
    lhs: float
    rhs: float
    inputs: dict = field(default_factory=dict)
    tolerance: float = 1e-9
    seed: int | None = None
    trial: int | None = None

    @property
    def slack(self):
        return self.rhs - self.lhs

    @property
    def holds(self):
        return bool(self.slack >= -self.tolerance)

    def to_dict(self):
        return {
            "case": self.case_name,
            "lhs": to_jsonable(self.lhs),
            "rhs": to_jsonable(self.rhs),
            "slack": to_jsonable(self.slack),
            "holds": self.holds,
            "tolerance": to_jsonable(self.tolerance),
            "seed": to_jsonable(self.seed),
            "trial": to_jsonable(self.trial),
            "inputs": to_jsonable(self.inputs),
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            case_name=d["case"], lhs=_num(d["lhs"]), rhs=_num(d["rhs"]),
            inputs=d.get("inputs", {}), tolerance=d.get("tolerance", 1e-9),
            seed=d.get("seed"), trial=d.get("trial"),
        )


def _num(x):
    return float(x) if isinstance(x, str) else x


@dataclass
class Report:
    """Aggregate of a suite, search or reproduction run."""

    case: str
    params: dict = field(default_factory=dict)
    trials: int = 0
    violations: int = 0
    marginal: int = 0
    min_slack: float = math.inf
    argmin_inputs: dict = field(default_factory=dict)
    seed: int | None = None
    tolerance: float = 1e-9
    runtime_ms: int = 0
    tool_version: str = __version__
    holds: bool = True
    records: list = field(default_factory=list)

    def to_dict(self):
        d = {name: to_jsonable(getattr(self, name)) for name in REPORT_FIELDS}
        d["holds"] = bool(self.holds)
        d["records"] = [r.to_dict() for r in self.records]
        return d

    def to_json(self, **kw):
        return json.dumps(self.to_dict(), sort_keys=True, **kw)

    @classmethod
    def from_dict(cls, d):
        kw = {name: d[name] for name in REPORT_FIELDS if name in d}
        kw["min_slack"] = _num(kw.get("min_slack", math.inf))
        kw["holds"] = d.get("holds", True)
        kw["records"] = [SlackRecord.from_dict(r) for r in d.get("records", [])]
        return cls(**kw)
