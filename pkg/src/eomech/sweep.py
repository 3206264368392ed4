"""
Declarative 1D/2D parameter sweeps and the figure presets.

Drives inside a sweep are described relative to kappa_a (see
:class:`DriveSettings`) so that ties such as "G_c = 0.6 G-" survive when
G- itself is swept.
"""

from __future__ import annotations

import itertools
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Sequence

import numpy as np

from . import __version__
from .errors import ConfigurationError
from .steady import SteadyStateReport, steady_state_report
from .system import DriveConfig, SystemParams

AXIS_NAMES = ("g_plus_ratio", "g_minus_over_kappa", "g_c_over_kappa", "g_c_ratio", "temperature_K")
OBSERVABLE_NAMES = ("s_b", "s_c", "en_ab", "en_bc", "st_ab", "st_ba", "stable",
                    "bogoliubov_occupation", "lyapunov_residual", "max_eig_real")
THREADS_ENV = "EOMECH_THREADS"


@dataclass(frozen=True)
class DriveSettings:
    """Couplings in units of kappa_a, with optional ties to G-.

    Exactly one of ``g_plus`` / ``g_plus_ratio`` and exactly one of
    ``g_c`` / ``g_c_ratio`` must be set. Ratios are taken relative to G-.
    """

    g_minus: float
    g_plus: float | None = None
    g_plus_ratio: float | None = None
    g_c: float | None = None
    g_c_ratio: float | None = None

    def __post_init__(self):
        if (self.g_plus is None) == (self.g_plus_ratio is None):
            raise ConfigurationError("give exactly one of g_plus and g_plus_ratio")
        if (self.g_c is None) == (self.g_c_ratio is None):
            raise ConfigurationError("give exactly one of g_c and g_c_ratio")
        for name in ("g_minus", "g_plus", "g_plus_ratio", "g_c", "g_c_ratio"):
            v = getattr(self, name)
            if v is not None and not (np.isfinite(v) and v >= 0):
                raise ConfigurationError(f"{name} must be a finite non-negative number, got {v!r}")

    def to_config(self, params: SystemParams) -> DriveConfig:
        gm = self.g_minus
        gp = self.g_plus if self.g_plus is not None else self.g_plus_ratio * gm
        gc = self.g_c if self.g_c is not None else self.g_c_ratio * gm
        return DriveConfig.in_units_of_kappa(params, gm, gp, gc)

    @classmethod
    def from_config(cls, drives: DriveConfig, params: SystemParams) -> "DriveSettings":
        ka = params.kappa_a
        return cls(g_minus=drives.g_minus / ka, g_plus=drives.g_plus / ka, g_c=drives.g_c / ka)


def _apply(params: SystemParams, drives: DriveSettings, name: str, value: float):
    if name == "temperature_K":
        return params.with_temperature(float(value)), drives
    if name == "g_minus_over_kappa":
        return params, replace(drives, g_minus=float(value))
    if name == "g_plus_ratio":
        return params, replace(drives, g_plus=None, g_plus_ratio=float(value))
    if name == "g_c_over_kappa":
        return params, replace(drives, g_c=float(value), g_c_ratio=None)
    if name == "g_c_ratio":
        return params, replace(drives, g_c=None, g_c_ratio=float(value))
    raise ConfigurationError(f"unknown sweep axis {name!r}; valid axes: {', '.join(AXIS_NAMES)}")


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple[float, ...]

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ConfigurationError(f"unknown sweep axis {self.name!r}; valid axes: {', '.join(AXIS_NAMES)}")
        vals = tuple(float(v) for v in self.values)
        if not vals:
            raise ConfigurationError(f"axis {self.name} has no points")
        if not all(np.isfinite(vals)):
            raise ConfigurationError(f"axis {self.name} has non-finite values")
        if any(b <= a for a, b in zip(vals, vals[1:])):
            raise ConfigurationError(f"axis {self.name} values must be strictly increasing")
        object.__setattr__(self, "values", vals)

    @classmethod
    def linspace(cls, name: str, start: float, stop: float, count: int = 101) -> "Axis":
        if count < 1:
            raise ConfigurationError(f"axis {name}: count must be >= 1")
        if count > 1 and not start < stop:
            raise ConfigurationError(f"axis {name}: min must be < max")
        return cls(name, tuple(np.linspace(start, stop, count)))

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class SweepSpec:
    params: SystemParams
    drives: DriveSettings
    axes: tuple[Axis, ...]
    observables: tuple[str, ...] = ("s_b", "s_c")
    name: str = ""

    def __post_init__(self):
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 2:
            raise ConfigurationError("a sweep needs one or two axes")
        if len({a.name for a in axes}) != len(axes):
            raise ConfigurationError("sweep axes must be distinct")
        obs = tuple(self.observables)
        for o in obs:
            if o not in OBSERVABLE_NAMES:
                raise ConfigurationError(f"unknown observable {o!r}; valid: {', '.join(OBSERVABLE_NAMES)}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "observables", obs)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.axes)

    def point(self, index: Sequence[int]) -> tuple[SystemParams, DriveConfig]:
        params, drives = self.params, self.drives
        for axis, i in zip(self.axes, index):
            params, drives = _apply(params, drives, axis.name, axis.values[i])
        return params, drives.to_config(params)


@dataclass
class SweepResult:
    """Observable grids of a sweep.

    ``data[name]`` is a masked array of shape ``spec.shape``; cells are
    masked exactly where the steady state is unstable. ``stable`` and
    ``max_eig_real`` are always fully populated.
    """

    spec: SweepSpec
    grids: tuple[np.ndarray, ...]
    data: dict[str, np.ma.MaskedArray]
    stable: np.ndarray
    max_eig_real: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __getitem__(self, name: str) -> np.ma.MaskedArray:
        return self.data[name]


def _evaluate(spec: SweepSpec, flat: Sequence[int]) -> list[dict[str, float]]:
    shape = spec.shape
    out = []
    for k in flat:
        params, drives = spec.point(np.unravel_index(k, shape))
        out.append(steady_state_report(params, drives).observables())
    return out


def default_workers() -> int:
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            n = int(env)
        except ValueError:
            raise ConfigurationError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
        if n < 1:
            raise ConfigurationError(f"{THREADS_ENV} must be >= 1")
        return n
    return 1


def run_sweep(spec: SweepSpec, workers: int | None = None) -> SweepResult:
    """Evaluate the steady state on every grid point of ``spec``.

    Grid points are independent; with ``workers > 1`` they are farmed out
    to a process pool in contiguous chunks and reassembled in grid order,
    so the result does not depend on the worker count.
    """
    if workers is None:
        workers = default_workers()
    shape = spec.shape
    total = int(np.prod(shape))
    started = time.time()
    if workers <= 1 or total < 2 * workers:
        rows = _evaluate(spec, range(total))
    else:
        n_chunks = min(total, 8 * workers)
        bounds = np.linspace(0, total, n_chunks + 1).astype(int)
        chunks = [range(a, b) for a, b in zip(bounds[:-1], bounds[1:])]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = pool.map(_evaluate, itertools.repeat(spec), chunks)
            rows = [row for part in parts for row in part]

    stable = np.array([r["stable"] > 0 for r in rows]).reshape(shape)
    max_eig = np.array([r["max_eig_real"] for r in rows]).reshape(shape)
    data = {}
    for name in spec.observables:
        values = np.array([r[name] for r in rows], dtype=float).reshape(shape)
        if name in ("stable", "max_eig_real"):
            data[name] = np.ma.masked_array(values, mask=np.zeros(shape, bool))
        else:
            data[name] = np.ma.masked_array(values, mask=~stable)
    metadata = {
        "name": spec.name,
        "code_version": __version__,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime(started)),
        "elapsed_s": time.time() - started,
        "workers": workers,
    }
    return SweepResult(spec, tuple(np.array(a.values) for a in spec.axes), data, stable, max_eig, metadata)


def report_at(spec: SweepSpec, index: Sequence[int]) -> SteadyStateReport:
    """Full report for a single grid point of a sweep."""
    return steady_state_report(*spec.point(index))


# --- figure presets -------------------------------------------------------

# axis ranges are a choice made here; they cover the squeezing and steering
# optima and the onset of instability with margin
_FIG2_RATIO = (0.0, 0.999)
_FIG2_GC = (0.01, 1.0)
_FIG5_RATIO = (0.0, 2.0)
_FIG5_GMINUS = (0.004, 0.4)
_FIG7_T = (0.0, 0.3)


def figure_preset(name: str, resolution: int = 101, params: SystemParams | None = None) -> SweepSpec:
    """Sweep specification reproducing one figure panel.

    Valid names: fig2a, fig2b, fig3a, fig3b, fig4a, fig4b, fig5a, fig5b,
    fig6a, fig6b, fig7.
    """
    if name not in PRESET_NAMES:
        raise KeyError(f"unknown figure preset {name!r}; valid presets: {', '.join(PRESET_NAMES)}")
    p = SystemParams.reference_device() if params is None else params
    n = resolution
    ratio_fine = Axis.linspace("g_plus_ratio", *_FIG2_RATIO, n)

    if name in ("fig2a", "fig2b"):
        obs = ("s_c",) if name == "fig2a" else ("s_b",)
        return SweepSpec(p, DriveSettings(g_minus=1.0, g_plus_ratio=0.78, g_c=0.6),
                         (ratio_fine, Axis.linspace("g_c_over_kappa", *_FIG2_GC, n)), obs, name)
    if name in ("fig3a", "fig3b"):
        obs = ("s_b",) if name == "fig3a" else ("s_c",)
        return SweepSpec(p, DriveSettings(g_minus=1.0, g_plus_ratio=0.78, g_c_ratio=0.6),
                         (Axis("g_minus_over_kappa", (0.4, 0.6, 0.8, 1.0)), ratio_fine), obs, name)
    if name in ("fig4a", "fig4b"):
        obs = ("s_b",) if name == "fig4a" else ("s_c",)
        return SweepSpec(p, DriveSettings(g_minus=1.0, g_plus_ratio=0.78, g_c_ratio=0.6),
                         (Axis("temperature_K", (0.010, 0.100, 0.180)), ratio_fine), obs, name)
    if name in ("fig5a", "fig6a"):
        obs = ("en_ab",) if name == "fig5a" else ("st_ab", "st_ba")
        return SweepSpec(p, DriveSettings(g_minus=0.2, g_plus_ratio=1.15, g_c_ratio=0.4),
                         (Axis.linspace("g_plus_ratio", *_FIG5_RATIO, n),), obs, name)
    if name in ("fig5b", "fig6b"):
        obs = ("en_ab",) if name == "fig5b" else ("st_ba",)
        return SweepSpec(p, DriveSettings(g_minus=0.2, g_plus_ratio=1.15, g_c=0.4),
                         (Axis.linspace("g_minus_over_kappa", *_FIG5_GMINUS, n),), obs, name)
    # fig7: steering over drive ratio and temperature
    return SweepSpec(p, DriveSettings(g_minus=0.2, g_plus_ratio=1.15, g_c_ratio=0.4),
                     (Axis.linspace("g_plus_ratio", *_FIG5_RATIO, n),
                      Axis.linspace("temperature_K", *_FIG7_T, n)),
                     ("st_ab", "st_ba"), name)


PRESET_NAMES = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b",
                "fig5a", "fig5b", "fig6a", "fig6b", "fig7")
