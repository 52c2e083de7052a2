"""Run configurations, figure presets, time-series evaluation and file output."""

from __future__ import annotations

import dataclasses
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .coherent_states import CoherentStateSpec, chi_from_mean, coherent_amplitudes
from .dynamics import (
    ModelParams,
    couplings,
    detunings,
    evolve_closed_form_grid,
    evolve_ode_grid,
    initial_state,
    rabi_frequencies,
    schrodinger_rates,
)
from .errors import InvalidParameterError
from .observables import ObservableRecord, series_records, standard_jcm_inversion
from .spin_algebra import SpinRepresentation, raising_coeffs

__all__ = [
    "RunConfig",
    "ObservableSeries",
    "OBSERVABLES",
    "FIGURES",
    "run",
    "figure_preset",
    "emit",
    "format_value",
    "ORACLE_TOL",
]

OBSERVABLES = ("inversion", "mandel_q", "quadratures")
_COLUMNS = {
    "inversion": ("sigma3",),
    "mandel_q": ("q_mandel",),
    "quadratures": ("var_x", "var_y", "robertson_bound"),
}
COLUMN_ORDER = ("t", "sigma3", "q_mandel", "var_x", "var_y", "robertson_bound")
FORMATS = ("csv", "doc")
ORACLE_TOL = 1e-8
ORACLE_CHECKPOINTS = 10


@dataclass(frozen=True)
class RunConfig:
    """One computation.  ``t_max`` is in units of 1/lambda."""

    two_j: int | None = 1000
    mean_n: float | None = 20.0
    chi: float | None = None
    omega: float = 1.0
    omega0: float = 1.0
    lam: float = 1.0
    t_max: float = 60.0
    steps: int = 3000
    observables: tuple[str, ...] = ("inversion",)
    picture: str = "schrodinger"
    atom_init: str = "excited"
    phase_phi: float = 0.0
    model: str = "spin"
    output_path: str | None = None
    format: str = "csv"
    oracle_check: bool = False
    label: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "observables", tuple(self.observables))
        self.validate()

    def validate(self) -> None:
        if self.model not in ("spin", "standard"):
            raise InvalidParameterError(f"model must be 'spin' or 'standard', got {self.model!r}")
        if (self.mean_n is None) == (self.chi is None):
            raise InvalidParameterError("give exactly one of mean_n and chi")
        for name in ("omega", "omega0", "lam", "t_max"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise InvalidParameterError(f"{name} must be a positive finite number, got {value!r}")
        if isinstance(self.steps, bool) or not isinstance(self.steps, int) or self.steps < 2:
            raise InvalidParameterError(f"steps must be an integer >= 2, got {self.steps!r}")
        if not self.observables:
            raise InvalidParameterError("no observables requested")
        unknown = set(self.observables) - set(OBSERVABLES)
        if unknown:
            raise InvalidParameterError(f"unknown observables {sorted(unknown)}; choose from {OBSERVABLES}")
        if len(set(self.observables)) != len(self.observables):
            raise InvalidParameterError("observables listed more than once")
        if self.picture not in ("schrodinger", "interaction"):
            raise InvalidParameterError(f"picture must be 'schrodinger' or 'interaction', got {self.picture!r}")
        if self.atom_init not in ("excited", "ground"):
            raise InvalidParameterError(f"atom_init must be 'excited' or 'ground', got {self.atom_init!r}")
        if self.format not in FORMATS:
            raise InvalidParameterError(f"format must be one of {FORMATS}, got {self.format!r}")
        if not math.isfinite(self.phase_phi):
            raise InvalidParameterError("phase_phi must be finite")
        if self.model == "standard":
            if self.mean_n is None or not self.mean_n > 0:
                raise InvalidParameterError("the standard JCM reference needs a positive mean_n")
            if self.observables != ("inversion",):
                raise InvalidParameterError("the standard JCM reference only provides the inversion")
            if self.atom_init != "excited":
                raise InvalidParameterError("the standard JCM reference starts from the excited atom")
            if self.oracle_check:
                raise InvalidParameterError("oracle_check applies to the spin model only")
            return
        if self.two_j is None or isinstance(self.two_j, bool) or int(self.two_j) != self.two_j or self.two_j < 1:
            raise InvalidParameterError(f"two_j must be an integer >= 1, got {self.two_j!r}")
        if self.mean_n is not None and not 0 <= self.mean_n <= self.two_j:
            raise InvalidParameterError(f"mean_n must lie in [0, two_j={self.two_j}], got {self.mean_n}")
        if self.chi is not None and not 0 <= self.chi <= 1:
            raise InvalidParameterError(f"chi must lie in [0, 1], got {self.chi}")

    @property
    def filling(self) -> float:
        if self.chi is not None:
            return float(self.chi)
        return chi_from_mean(SpinRepresentation(self.two_j), self.mean_n)

    @property
    def columns(self) -> tuple[str, ...]:
        wanted = {"t"}
        for obs in self.observables:
            wanted.update(_COLUMNS[obs])
        return tuple(c for c in COLUMN_ORDER if c in wanted)

    def to_dict(self) -> dict:
        """Echo of everything that affects the numbers (the output path does not)."""
        d = dataclasses.asdict(self)
        d["observables"] = list(self.observables)
        d.pop("output_path")
        return d

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise InvalidParameterError(f"unknown configuration keys {sorted(unknown)}")
        data = dict(data)
        if "observables" in data:
            data["observables"] = tuple(data["observables"])
        return cls(**data)

    def replace(self, **changes) -> "RunConfig":
        return dataclasses.replace(self, **changes)


@dataclass
class ObservableSeries:
    config: RunConfig
    columns: dict[str, np.ndarray]
    metadata: dict = field(default_factory=dict)

    @property
    def rows(self) -> list[ObservableRecord]:
        names = list(self.columns)
        return [
            ObservableRecord(**{k: float(v) for k, v in zip(names, vals)})
            for vals in zip(*(self.columns[n] for n in names))
        ]

    def __len__(self) -> int:
        return len(self.columns["t"])


def _model_params(config: RunConfig) -> ModelParams:
    return ModelParams(config.omega, config.omega0, config.lam, SpinRepresentation(config.two_j))


def run(config: RunConfig) -> ObservableSeries:
    """Evaluate the requested observables on the uniform grid t in [0, t_max].

    Every sample is computed directly from t = 0, so the grid can be split
    across threads without changing a single bit of the result.
    """
    config.validate()
    times = np.linspace(0.0, config.t_max, config.steps)
    metadata = {
        "spinjcm_version": __version__,
        "time_axis": "lambda * t",
        "t_max_raw": config.t_max,
        "lambda": config.lam,
    }
    if config.model == "standard":
        sigma3 = standard_jcm_inversion(config.mean_n, config.omega0 - config.omega, config.lam, times)
        metadata["mean_n"] = config.mean_n
        cols = {"t": times * config.lam, "sigma3": sigma3}
        return ObservableSeries(config, cols, metadata)

    params = _model_params(config)
    rep = params.rep
    chi = config.filling
    field_amps = coherent_amplitudes(rep, CoherentStateSpec(chi, config.phase_phi))
    state0 = initial_state(rep, field_amps, config.atom_init)
    metadata.update(chi=chi, mean_n=rep.two_j * chi, picture=config.picture)

    if config.picture == "schrodinger":
        rate_a, rate_b = schrodinger_rates(params)
    else:
        rate_a = rate_b = np.zeros(rep.dim)
    table = _kernels.series_moments(
        state0.a, state0.b, detunings(params), rabi_frequencies(params), couplings(params),
        rate_a, rate_b, np.sqrt(rep.two_j) * raising_coeffs(rep), times,
    )
    records = series_records(times, table, rep, scale=config.lam)
    cols = {name: records[name] for name in config.columns}

    if config.oracle_check:
        checkpoints = np.linspace(0.0, config.t_max, ORACLE_CHECKPOINTS)
        a_ode, b_ode = evolve_ode_grid(params, state0, checkpoints)
        a_cf, b_cf = evolve_closed_form_grid(params, state0, checkpoints)
        deviation = float(max(np.abs(a_ode - a_cf).max(), np.abs(b_ode - b_cf).max()))
        metadata["oracle_checkpoints"] = ORACLE_CHECKPOINTS
        metadata["oracle_max_deviation"] = deviation
        metadata["oracle_passed"] = deviation < ORACLE_TOL
    return ObservableSeries(config, cols, metadata)


# ---------------------------------------------------------------------------
# figure presets

_FIG_2J = {"a": 1000, "b": 100, "c": 50}
FIGURES = ("figure1", "figure2a", "figure2b", "figure2c", "figure3a", "figure3b", "figure3c", "figure4")


def figure_preset(name: str) -> list[RunConfig]:
    """Configurations behind a published figure (one per plotted curve).

    All use <n> = 20, an excited atom and omega = omega0 = lambda = 1.
    """
    base = RunConfig(mean_n=20.0, omega=1.0, omega0=1.0, lam=1.0, t_max=60.0, steps=3000, label=name)
    if name == "figure1":
        return [base.replace(model="standard", two_j=None)]
    if name[:-1] in ("figure2", "figure3") and name[-1] in _FIG_2J:
        obs = ("inversion",) if name.startswith("figure2") else ("mandel_q",)
        return [base.replace(two_j=_FIG_2J[name[-1]], observables=obs)]
    if name == "figure4":
        return [
            base.replace(two_j=two_j, observables=("quadratures",), picture="interaction")
            for two_j in (1000, 50)
        ]
    raise InvalidParameterError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")


# ---------------------------------------------------------------------------
# output

def format_value(v: float) -> str:
    """Positional decimal with 12 significant digits."""
    v = float(v)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    s = np.format_float_positional(v, precision=12, unique=False, fractional=False, trim="-")
    return "0" if s in ("-0", "0") else s


def _to_csv(series: ObservableSeries) -> str:
    names = list(series.columns)
    buf = io.StringIO()
    buf.write(",".join(names) + "\n")
    for vals in zip(*(series.columns[n] for n in names)):
        buf.write(",".join(format_value(v) for v in vals) + "\n")
    return buf.getvalue()


def _json_number(v: float):
    s = format_value(v)
    return s if s in ("nan", "inf", "-inf") else float(s)


def _to_doc(series: ObservableSeries) -> str:
    names = list(series.columns)
    meta = {
        k: (_json_number(v) if isinstance(v, float) else v) for k, v in sorted(series.metadata.items())
    }
    doc = {
        "format": "spinjcm-series/1",
        "config": series.config.to_dict(),
        "metadata": meta,
        "columns": names,
        "rows": [[_json_number(v) for v in vals] for vals in zip(*(series.columns[n] for n in names))],
    }
    return json.dumps(doc, indent=1, sort_keys=False) + "\n"


def render(series: ObservableSeries, fmt: str = "csv") -> str:
    if fmt == "csv":
        return _to_csv(series)
    if fmt == "doc":
        return _to_doc(series)
    raise InvalidParameterError(f"format must be one of {FORMATS}, got {fmt!r}")


def emit(series: ObservableSeries, fmt: str = "csv", path: str | Path | None = None) -> str:
    """Write ``series`` to ``path`` (or just return the text when path is None)."""
    text = render(series, fmt)
    if path is not None:
        path = Path(path)
        try:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    return text


def read_csv(path: str | Path) -> dict[str, np.ndarray]:
    """Parse a file written by ``emit(..., 'csv')``."""
    with open(path, encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return {name: data[:, k] for k, name in enumerate(header)}
