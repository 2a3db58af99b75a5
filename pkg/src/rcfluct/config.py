"""Experiment configuration: validation plus JSON/TOML loading."""

import json
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path

import tomli

from .distributions import BUILTIN_KINDS

__all__ = ["ExperimentConfig", "load_config", "TRACE_PATHS", "CENTERINGS"]

TRACE_PATHS = ("dense", "spectral", "fast")
CENTERINGS = ("auto", "exact", "empirical")


@dataclass(frozen=True)
class ExperimentConfig:
    """One simulation setting: matrix size, statistics, sampling and numerics.

    `ps` lists the monomial exponents ``p`` (statistic ``w_p``).  `q_coeffs`
    optionally defines ``Q(x) = sum_k a_k x**(2k)`` for the statistic ``w_Q``.
    """

    n: int
    ps: tuple = (1,)
    q_coeffs: tuple = None
    distribution: str = "gaussian"
    replicates: int = 1000
    seed: int = 0
    trace_path: str = "fast"
    centering: str = "auto"
    budget: int = None
    workers: int = 1
    extra: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        ps = tuple(int(p) for p in self.ps)
        object.__setattr__(self, "ps", ps)
        if self.q_coeffs is not None:
            coeffs = tuple(Fraction(a) for a in self.q_coeffs)
            if not coeffs or coeffs[-1] == 0:
                raise ValueError(f"Q coefficients need a nonzero leading term, got {self.q_coeffs}")
            object.__setattr__(self, "q_coeffs", coeffs)
        if not ps and self.q_coeffs is None:
            raise ValueError("need at least one exponent or a polynomial Q")
        if any(p == 0 for p in ps):
            raise ValueError("p = 0 gives w_0 = (n - n)/sqrt(n) = 0 identically: it has no fluctuation")
        if any(p < 0 for p in ps):
            raise ValueError(f"exponents must be >= 1, got {ps}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.replicates < 2:
            raise ValueError(f"need at least 2 replicates, got {self.replicates}")
        if isinstance(self.distribution, str) and self.distribution not in BUILTIN_KINDS:
            raise ValueError(f"unknown distribution {self.distribution!r}; expected one of {BUILTIN_KINDS}")
        if self.trace_path not in TRACE_PATHS:
            raise ValueError(f"trace_path must be one of {TRACE_PATHS}, got {self.trace_path!r}")
        if self.centering not in CENTERINGS:
            raise ValueError(f"centering must be one of {CENTERINGS}, got {self.centering!r}")

    @property
    def exponents(self):
        """Every exponent whose trace is needed (``ps`` plus ``1..d`` for Q)."""
        need = set(self.ps)
        if self.q_coeffs is not None:
            need.update(range(1, len(self.q_coeffs) + 1))
        return tuple(sorted(need))

    def replace(self, **changes):
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        data.update(changes)
        return ExperimentConfig(**data)

    def to_dict(self):
        data = asdict(self)
        data.pop("extra")
        data["ps"] = list(self.ps)
        if self.q_coeffs is not None:
            data["Q_coeffs"] = [str(a) for a in self.q_coeffs]
        data.pop("q_coeffs")
        if not isinstance(self.distribution, str):
            data["distribution"] = self.distribution.kind
        return data

    @classmethod
    def from_mapping(cls, data):
        data = dict(data)
        known = {k for k in cls.__dataclass_fields__ if k != "extra"}
        if "Q_coeffs" in data:
            data["q_coeffs"] = data.pop("Q_coeffs")
        if "reps" in data:
            data["replicates"] = data.pop("reps")
        if "dist" in data:
            data["distribution"] = data.pop("dist")
        if isinstance(data.get("ps"), (int, str)):
            data["ps"] = _int_list(data["ps"])
        if isinstance(data.get("q_coeffs"), str):
            data["q_coeffs"] = [Fraction(t) for t in data["q_coeffs"].split(",") if t.strip()]
        extra = {k: data.pop(k) for k in list(data) if k not in known}
        return cls(**data, extra=extra)


def _int_list(value):
    if isinstance(value, int):
        return (value,)
    return tuple(int(t) for t in str(value).split(",") if t.strip())


def load_config(path):
    """Read an :class:`ExperimentConfig` from a ``.json`` or ``.toml`` file."""
    path = Path(path)
    text = path.read_text()
    if path.suffix.lower() == ".json":
        data = json.loads(text)
    elif path.suffix.lower() == ".toml":
        data = tomli.loads(text)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError:
            data = tomli.loads(text)
    return ExperimentConfig.from_mapping(data)
