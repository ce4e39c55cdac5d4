"""Convergence, extrapolation, eps-sweep and conditioning runs driven by a JSON
run configuration, with CSV tables and a JSON provenance sidecar."""

from __future__ import annotations

import csv
import io
import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np

from .assembly import (
    AssemblyError,
    Direct,
    Indirect,
    assemble_calderon_v,
    assemble_system,
    assemble_w,
)
from .dense_solver import cond2
from .geometry import ScattererConfig, curve_from_dict, reduce_eps
from .kernels import point_source, point_source_trace
from .potential import (
    NearBoundaryWarning,
    boundary_error,
    evaluate_potential,
    observation_error,
    richardson,
    solve,
)
from .spectral import c1_minima, local_minima
from .specfun import DomainError

EXPERIMENTS = ("convergence", "richardson", "sweep-eps", "cond")
FORMULATIONS = ("indirect", "direct")
NUMERICAL_ERRORS = (np.linalg.LinAlgError, AssemblyError, DomainError, FloatingPointError)

DEFAULT_CURVES = [
    {"kind": "ellipse", "center": [0.0, 0.0], "semiaxes": [1.0, 2.0]},
    {"kind": "ellipse", "center": [4.0, 5.0], "semiaxes": [2.0, 1.0]},
]
DEFAULT_POINTS = [[-4.0, -4.0], [-5.0, -5.5], [-6.0, -7.0], [7.0, 7.6], [-6.8, -6.0]]
DEFAULT_SOURCE = [0.1, 0.2]


class ConfigError(ValueError):
    pass


class NumericalFailure(RuntimeError):
    """A solve failed; ``partial`` holds whatever rows were completed."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class TheoryWarning(UserWarning):
    pass


def parse_number(value) -> float:
    """Plain decimals, or fractions such as ``"1/6"``."""
    if isinstance(value, str):
        try:
            return float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"not a number: {value!r}") from exc
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"not a number: {value!r}")
    return float(value)


@dataclass
class SweepSettings:
    N: int = 80
    step: float = 0.005
    guard: float = 0.02

    def grid(self) -> np.ndarray:
        count = int(math.floor((1.0 - 2.0 * self.guard) / self.step + 1e-9)) + 1
        return np.round(self.guard + self.step * np.arange(count), 12)


@dataclass
class RunConfig:
    experiment: str = "convergence"
    curves: List[dict] = field(default_factory=lambda: [dict(c) for c in DEFAULT_CURVES])
    k: float = 1.0
    eps: float = 1.0 / 6.0
    N_list: List[int] = field(default_factory=lambda: [10, 20, 40, 80, 160, 320, 640])
    formulation: str = "indirect"
    source: List[float] = field(default_factory=lambda: list(DEFAULT_SOURCE))
    observation_points: List[List[float]] = field(default_factory=lambda: [list(p) for p in DEFAULT_POINTS])
    out: Optional[str] = None
    sweep: SweepSettings = field(default_factory=SweepSettings)

    def __post_init__(self):
        if isinstance(self.sweep, dict):
            try:
                self.sweep = SweepSettings(**self.sweep)
            except TypeError as exc:
                raise ConfigError(f"bad sweep settings: {exc}") from exc
        self.validate()

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        known = set(cls.__dataclass_fields__)
        unknown = set(data) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        data = dict(data)
        for key in ("k", "eps"):
            if key in data:
                data[key] = parse_number(data[key])
        return cls(**data)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            data = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(data)

    def to_dict(self) -> dict:
        return asdict(self)

    def with_(self, **changes) -> "RunConfig":
        data = self.to_dict()
        data.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig.from_dict(data)

    def validate(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if self.formulation not in FORMULATIONS:
            raise ConfigError(f"formulation must be one of {FORMULATIONS}, got {self.formulation!r}")
        if not self.k > 0:
            raise ConfigError("k must be positive")
        try:
            reduce_eps(self.eps)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        Ns = list(self.N_list)
        if not Ns or any(int(n) != n or n < 4 for n in Ns):
            raise ConfigError(f"N_list must hold integers >= 4, got {Ns}")
        if any(b <= a for a, b in zip(Ns, Ns[1:])):
            raise ConfigError("N_list must be strictly increasing")
        if any(b % a for a, b in zip(Ns, Ns[1:])):
            raise ConfigError("each N must be a multiple of the previous one")
        if len(self.source) != 2 or any(len(p) != 2 for p in self.observation_points):
            raise ConfigError("source and observation points must be 2D")
        if not self.observation_points:
            raise ConfigError("at least one observation point is required")
        s = self.sweep
        if not (0.0 < s.guard < 0.5 and 0.0 < s.step and s.N >= 4):
            raise ConfigError(f"bad sweep settings {s}")
        try:
            [curve_from_dict(c) for c in self.curves]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad curve description: {exc}") from exc

    def scatterer(self, N: int, eps: Optional[float] = None) -> ScattererConfig:
        try:
            curves = [curve_from_dict(c) for c in self.curves]
            return ScattererConfig(curves, self.k, N, self.eps if eps is None else eps)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def formulation_object(self):
        return (Indirect if self.formulation == "indirect" else Direct)(tuple(self.source))

    def exact(self, z) -> complex:
        return point_source(z, self.source, self.k)


def default_config(experiment: str = "convergence", **changes) -> RunConfig:
    """Two ellipses, ``k = 1``, source ``(0.1, 0.2)`` and the five observation points."""
    return RunConfig(experiment=experiment).with_(**changes)


def ecr(errors: Sequence[float]) -> List[Optional[float]]:
    """``log2(e_{r-1} / e_r)``; ``None`` for the first row and next to nonpositive errors."""
    out: List[Optional[float]] = [None]
    for a, b in zip(errors, errors[1:]):
        ok = a is not None and b is not None and a > 0 and b > 0
        out.append(math.log2(a / b) if ok else None)
    return out[: len(errors)]


@dataclass
class TableRow:
    N: int
    error: float
    ecr: Optional[float] = None
    flagged: bool = False


@dataclass
class ConvergenceTable:
    rows: List[TableRow]
    metadata: dict

    @classmethod
    def build(cls, Ns, errors, metadata) -> "ConvergenceTable":
        rates = ecr(list(errors))
        rows = [
            TableRow(int(n), float(e), r, not (e > 0)) for n, e, r in zip(Ns, errors, rates)
        ]
        return cls(rows, metadata)

    @property
    def Ns(self) -> List[int]:
        return [r.N for r in self.rows]

    @property
    def errors(self) -> List[float]:
        return [r.error for r in self.rows]

    @property
    def rates(self) -> List[Optional[float]]:
        return [r.ecr for r in self.rows]

    header = ("N", "error", "ecr")

    def csv_rows(self):
        for r in self.rows:
            yield [r.N, _fmt(r.error), "" if r.ecr is None else _fmt(r.ecr)]


@dataclass
class CondTable:
    rows: List[tuple]
    metadata: dict

    header = ("N", "cond_VW", "cond_W")

    @property
    def Ns(self):
        return [r[0] for r in self.rows]

    @property
    def cond_vw(self):
        return [r[1] for r in self.rows]

    @property
    def cond_w(self):
        return [r[2] for r in self.rows]

    def csv_rows(self):
        for n, a, b in self.rows:
            yield [n, _fmt(a), _fmt(b)]


@dataclass
class SweepResult:
    eps: List[float]
    errors: List[float]
    metadata: dict

    header = ("epsilon", "error")

    def minima(self) -> List[float]:
        return [self.eps[i] for i in local_minima(self.errors)]

    def error_at(self, eps: float) -> float:
        i = int(np.argmin(np.abs(np.asarray(self.eps) - eps)))
        if abs(self.eps[i] - eps) > 1e-9:
            raise KeyError(f"eps={eps} not in sweep")
        return self.errors[i]

    def csv_rows(self):
        for e, err in zip(self.eps, self.errors):
            yield [f"{e:.6f}", _fmt(err)]


def _fmt(x: float) -> str:
    return f"{x:.10e}"


def _metadata(config: RunConfig, **extra) -> dict:
    meta = {"eps": reduce_eps(config.eps), "formulation": config.formulation, "k": config.k}
    meta.update(extra)
    return meta


def _warn_half(eps: float) -> None:
    if reduce_eps(eps) == 0.5:
        warnings.warn(
            "eps = 1/2 lies outside the convergence theory; it is run as requested",
            TheoryWarning,
            stacklevel=2,
        )


def _potential(sol, pts):
    # Coarse grids routinely flag the fixed observation points; the error column reports the effect.
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NearBoundaryWarning)
        return evaluate_potential(sol, pts)


def _solution(config: RunConfig, N: int, eps: Optional[float] = None):
    system = assemble_system(config.scatterer(N, eps), config.formulation_object())
    return solve(system)


def _error(config: RunConfig, sol) -> float:
    if config.formulation == "indirect":
        pts = np.asarray(config.observation_points, dtype=float)
        return observation_error(_potential(sol, pts), config.exact, pts)
    curves = sol.curves
    return boundary_error(
        sol, lambda p, t: point_source_trace(curves[p], t, config.source, config.k)
    )


def run_convergence(config: RunConfig) -> ConvergenceTable:
    kind = "observation_max" if config.formulation == "indirect" else "boundary_linf"
    meta = _metadata(config, error_kind=kind, experiment="convergence")
    Ns, errors = [], []
    for N in config.N_list:
        try:
            errors.append(_error(config, _solution(config, N)))
        except NUMERICAL_ERRORS as exc:
            partial = ConvergenceTable.build(Ns, errors, meta)
            raise NumericalFailure(f"solve failed at N={N}: {exc}", partial) from exc
        Ns.append(N)
    return ConvergenceTable.build(Ns, errors, meta)


def run_richardson(config: RunConfig) -> ConvergenceTable:
    """Row ``N`` combines the fields computed with ``N`` and ``2N`` points per curve."""
    if config.formulation != "indirect":
        raise ConfigError("Richardson extrapolation acts on the indirect potential")
    if abs(abs(reduce_eps(config.eps)) - 1.0 / 6.0) > 1e-9:
        warnings.warn("extrapolation targets eps = +-1/6", TheoryWarning, stacklevel=2)
    meta = _metadata(config, error_kind="observation_max", experiment="richardson")
    pts = np.asarray(config.observation_points, dtype=float)
    fields = {}

    def field_at(N):
        if N not in fields:
            fields[N] = _potential(_solution(config, N), pts)
        return fields[N]

    Ns, errors = [], []
    for N in config.N_list:
        try:
            extrapolated = richardson(field_at(N), field_at(2 * N))
        except NUMERICAL_ERRORS as exc:
            partial = ConvergenceTable.build(Ns, errors, meta)
            raise NumericalFailure(f"solve failed at N={N}: {exc}", partial) from exc
        errors.append(observation_error(extrapolated, config.exact, pts))
        Ns.append(N)
    return ConvergenceTable.build(Ns, errors, meta)


def run_sweep_eps(config: RunConfig) -> SweepResult:
    """Indirect solve at fixed ``sweep.N`` for every eps on the guarded grid."""
    s = config.sweep
    grid = s.grid()
    config = config.with_(formulation="indirect")
    eps_ok, errors, failed = [], [], []
    for eps in grid:
        try:
            errors.append(_error(config, _solution(config, s.N, eps)))
            eps_ok.append(float(eps))
        except NUMERICAL_ERRORS:
            failed.append(float(eps))
    meta = _metadata(
        config,
        experiment="sweep-eps",
        N=s.N,
        step=s.step,
        guard=s.guard,
        failed=failed,
        c1_minima=[float(e) for e in c1_minima(grid)],
    )
    meta.pop("eps")
    result = SweepResult(eps_ok, errors, meta)
    meta["observed_minima"] = result.minima()
    return result


def run_cond(config: RunConfig) -> CondTable:
    """Spectral condition numbers of ``W`` and of ``V W``."""
    meta = _metadata(config, experiment="cond")
    meta.pop("formulation")
    rows = []
    for N in config.N_list:
        try:
            sc = config.scatterer(N)
            W = np.block(assemble_w(sc))
            V = assemble_calderon_v(sc)
            rows.append((N, cond2(V @ W), cond2(W)))
        except NUMERICAL_ERRORS as exc:
            raise NumericalFailure(f"failed at N={N}: {exc}", CondTable(rows, meta)) from exc
    return CondTable(rows, meta)


RUNNERS = {
    "convergence": run_convergence,
    "richardson": run_richardson,
    "sweep-eps": run_sweep_eps,
    "cond": run_cond,
}


def run(config: RunConfig):
    if config.experiment != "sweep-eps":
        _warn_half(config.eps)
    return RUNNERS[config.experiment](config)


def to_csv(result) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.header)
    writer.writerows(result.csv_rows())
    return buf.getvalue()


def sidecar_path(path) -> Path:
    return Path(path).with_suffix(".json")


def write_result(result, config: RunConfig, path) -> Path:
    """Write the CSV table and its JSON sidecar; returns the CSV path."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_csv(result))
    sidecar = {"config": config.to_dict(), "metadata": result.metadata}
    sidecar_path(path).write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
    return path
