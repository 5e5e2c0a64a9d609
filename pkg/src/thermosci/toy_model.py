"""Toy efficiency law, strategy comparisons, and phase-diagram sweeps.

The model reduces each strategy to two levers: an effective prior-entropy
ratio ``c`` (generalist ``c = 1``; specialist ``c_spec``; federated
``c_fed(N) = c_min + (1 - c_min) / N**gamma``) and a dimensionless overhead
``alpha`` capturing outcome entropy and irreversibility. Efficiency at a
normalized budget ``omega`` is

    eta(omega, c, alpha) = min(c / omega, 1 / (1 + alpha))

i.e. a prior-limited branch ``c/omega`` under a budget-limited ceiling.
Pairwise differences of this law over (omega, c_spec) or (omega, N) grids
produce the strategy phase diagrams; their zero contours are the phase
boundaries. For the fed-vs-gen pair the analytic boundary is
``omega*(N) = (1 + alpha_gen) * c_fed(N)``, which decreases as N grows.
"""

from __future__ import annotations

import csv
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from enum import Enum

import numpy as np

from ._marching import zero_isolines
from .errors import (
    InvalidParameter,
    MalformedGrid,
    NBelowOne,
    NonPositiveOmega,
)

THREADS_ENV_VAR = "THERMOSCI_THREADS"


class Pair(str, Enum):
    SPEC_GEN = "spec-gen"
    FED_GEN = "fed-gen"
    FED_SPEC = "fed-spec"


@dataclass(frozen=True)
class ToyParams:
    """Parameters of the toy law: compression floor, decay, overheads, specialist focus."""

    c_min: float = 0.05
    gamma: float = 1.0
    alpha_gen: float = 0.3
    alpha_fed: float = 0.3
    alpha_spec: float = 0.3
    c_spec: float = 0.05

    def __post_init__(self):
        if not 0.0 < self.c_min <= 1.0:
            raise InvalidParameter("c_min must be in (0, 1]")
        if self.gamma <= 0.0:
            raise InvalidParameter("gamma must be > 0")
        if min(self.alpha_gen, self.alpha_fed, self.alpha_spec) < 0.0:
            raise InvalidParameter("alphas must all be >= 0")
        if not self.c_min <= self.c_spec <= 1.0:
            raise InvalidParameter("c_spec must be in [c_min, 1]")

    @classmethod
    def symmetric(cls, alpha: float = 0.3, c_min: float = 0.05,
                  gamma: float = 1.0) -> "ToyParams":
        return cls(c_min=c_min, gamma=gamma, alpha_gen=alpha, alpha_fed=alpha,
                   alpha_spec=alpha, c_spec=c_min)

    @classmethod
    def asymmetric(cls, alphas: tuple[float, float, float] = (0.8, 0.4, 0.2),
                   c_min: float = 0.05, gamma: float = 1.0) -> "ToyParams":
        return cls(c_min=c_min, gamma=gamma, alpha_gen=alphas[0], alpha_fed=alphas[1],
                   alpha_spec=alphas[2], c_spec=c_min)


def eta_toy(omega: float, c: float, alpha: float) -> float:
    """Efficiency of one strategy at normalized budget ``omega``."""
    if omega <= 0.0:
        raise NonPositiveOmega(f"omega must be > 0, got {omega!r}")
    if not 0.0 < c <= 1.0:
        raise InvalidParameter(f"c must be in (0, 1], got {c!r}")
    if alpha < 0.0:
        raise InvalidParameter(f"alpha must be >= 0, got {alpha!r}")
    return min(c / omega, 1.0 / (1.0 + alpha))


def c_fed(n: float, c_min: float = 0.05, gamma: float = 1.0) -> float:
    """Effective prior-entropy ratio of an N-way federated decomposition."""
    if n < 1.0:
        raise NBelowOne(f"partition count must be >= 1, got {n!r}")
    if not 0.0 < c_min <= 1.0:
        raise InvalidParameter("c_min must be in (0, 1]")
    if gamma <= 0.0:
        raise InvalidParameter("gamma must be > 0")
    return c_min + (1.0 - c_min) / n**gamma


def crossover_omega(c: float, alpha: float) -> float:
    """Budget at which the prior-limited branch meets the overhead ceiling."""
    if not 0.0 < c <= 1.0:
        raise InvalidParameter(f"c must be in (0, 1], got {c!r}")
    if alpha < 0.0:
        raise InvalidParameter(f"alpha must be >= 0, got {alpha!r}")
    return c * (1.0 + alpha)


def _pair_levers(pair: Pair, params: ToyParams, axis_value: float):
    """(c, alpha) for the first and second strategy of a comparison pair."""
    if pair == Pair.SPEC_GEN:
        c_spec = float(axis_value)
        if not 0.0 < c_spec <= 1.0:
            raise InvalidParameter(f"c_spec must be in (0, 1], got {c_spec!r}")
        return (c_spec, params.alpha_spec), (1.0, params.alpha_gen)
    n = float(axis_value)
    fed = (c_fed(n, params.c_min, params.gamma), params.alpha_fed)
    if pair == Pair.FED_GEN:
        return fed, (1.0, params.alpha_gen)
    # fed-spec compares against the maximally focused specialist
    return fed, (params.c_min, params.alpha_spec)


def strategy_etas(pair: Pair | str, omega: float, params: ToyParams,
                  axis_value: float) -> tuple[float, float]:
    """Efficiencies of both strategies in a comparison pair at one grid point."""
    (c1, a1), (c2, a2) = _pair_levers(Pair(pair), params, axis_value)
    return eta_toy(omega, c1, a1), eta_toy(omega, c2, a2)


def delta_eta(pair: Pair | str, omega: float, params: ToyParams,
              axis_value: float) -> float:
    """Efficiency difference (first strategy minus second) at one grid point."""
    e1, e2 = strategy_etas(pair, omega, params, axis_value)
    return e1 - e2


# ---------------------------------------------------------------------------
# sweep grids


@dataclass(frozen=True)
class SecondAxis:
    """The non-budget sweep axis: specialist focus ``c_spec`` or partition count ``n``."""

    kind: str  # "c_spec" | "n"
    minimum: float
    maximum: float
    steps: int
    continuous: bool = True

    def __post_init__(self):
        if self.kind not in ("c_spec", "n"):
            raise InvalidParameter(f"unknown axis kind {self.kind!r}")
        if not self.minimum < self.maximum:
            raise InvalidParameter("axis minimum must be below maximum")
        if self.steps < 2:
            raise InvalidParameter("axis needs at least 2 steps")
        if self.kind == "c_spec" and (self.minimum <= 0.0 or self.maximum > 1.0):
            raise InvalidParameter("c_spec axis must lie in (0, 1]")
        if self.kind == "n" and self.minimum < 1.0:
            raise InvalidParameter("n axis must start at 1 or above")

    def values(self) -> np.ndarray:
        vals = np.linspace(self.minimum, self.maximum, self.steps)
        if self.kind == "n" and not self.continuous:
            vals = np.unique(np.round(vals))
        return vals


@dataclass(frozen=True)
class SweepAxes:
    """Budget axis plus second axis for one phase-diagram grid."""

    second: SecondAxis
    omega_min: float = 1e-2
    omega_max: float = 1e2
    omega_steps: int = 200
    omega_scale: str = "log"  # "log" | "linear"

    def __post_init__(self):
        if self.omega_scale not in ("log", "linear"):
            raise InvalidParameter(f"unknown omega scale {self.omega_scale!r}")
        if self.omega_min <= 0.0 or self.omega_max <= 0.0:
            raise InvalidParameter("omega endpoints must be > 0")
        if not self.omega_min < self.omega_max:
            raise InvalidParameter("omega_min must be below omega_max")
        if self.omega_steps < 2:
            raise InvalidParameter("omega axis needs at least 2 steps")

    def omega_values(self) -> np.ndarray:
        if self.omega_scale == "log":
            return np.geomspace(self.omega_min, self.omega_max, self.omega_steps)
        return np.linspace(self.omega_min, self.omega_max, self.omega_steps)

    @classmethod
    def default_cspec(cls, params: ToyParams, steps: int = 100) -> "SweepAxes":
        return cls(SecondAxis("c_spec", params.c_min, 1.0, steps))

    @classmethod
    def default_n(cls, n_max: float = 20.0, steps: int = 100) -> "SweepAxes":
        return cls(SecondAxis("n", 1.0, n_max, steps))


@dataclass
class SweepGrid:
    """Evaluated efficiency-difference surface plus its zero contours.

    Arrays have shape ``(len(axis2), len(omega))``; contour polylines are in
    ``(omega, axis2)`` data coordinates. ``regime_marker_omega`` records the
    budget-to-prior crossover annotation.
    """

    pair: str | None
    params: ToyParams | None
    omega: np.ndarray
    axis2: np.ndarray
    axis2_kind: str
    omega_scale: str
    eta_first: np.ndarray
    eta_second: np.ndarray
    delta: np.ndarray
    contours: list[np.ndarray]
    regime_marker_omega: float = 1.0

    def __post_init__(self):
        for arr in (self.eta_first, self.eta_second, self.delta):
            if arr.shape != (self.axis2.size, self.omega.size):
                raise InvalidParameter("grid arrays do not match the axes")
            if not np.all(np.isfinite(arr)):
                raise InvalidParameter("grid contains non-finite values")
        if np.any(np.abs(self.delta) > 1.0 + 1e-12):
            raise InvalidParameter("efficiency differences must lie in [-1, 1]")


def _eta_row(omega: np.ndarray, c: float, alpha: float) -> np.ndarray:
    return np.minimum(c / omega, 1.0 / (1.0 + alpha))


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR, "1")
        try:
            threads = int(raw)
        except ValueError:
            threads = 1
    return max(1, threads)


def sweep(pair: Pair | str, params: ToyParams, axes: SweepAxes,
          threads: int | None = None) -> SweepGrid:
    """Evaluate a comparison pair over a grid and attach its zero contours.

    Row evaluation may fan out over a thread pool (capped by the
    ``THERMOSCI_THREADS`` env var when ``threads`` is not given); the result
    is identical for any parallelism degree.
    """
    pair = Pair(pair)
    expected_kind = "c_spec" if pair == Pair.SPEC_GEN else "n"
    if axes.second.kind != expected_kind:
        raise InvalidParameter(
            f"pair {pair.value} needs a {expected_kind!r} axis, got {axes.second.kind!r}"
        )
    omega = axes.omega_values()
    axis2 = axes.second.values()

    def eval_row(j: int) -> tuple[np.ndarray, np.ndarray]:
        (c1, a1), (c2, a2) = _pair_levers(pair, params, float(axis2[j]))
        return _eta_row(omega, c1, a1), _eta_row(omega, c2, a2)

    n_threads = _resolve_threads(threads)
    if n_threads > 1:
        with ThreadPoolExecutor(max_workers=n_threads) as pool:
            rows = list(pool.map(eval_row, range(axis2.size)))
    else:
        rows = [eval_row(j) for j in range(axis2.size)]

    eta_first = np.vstack([r[0] for r in rows])
    eta_second = np.vstack([r[1] for r in rows])
    delta = eta_first - eta_second
    grid = SweepGrid(pair.value, params, omega, axis2, axes.second.kind,
                     axes.omega_scale, eta_first, eta_second, delta, contours=[])
    grid.contours = zero_contours(grid)
    return grid


def zero_contours(grid: SweepGrid) -> list[np.ndarray]:
    """Zero-level polylines of the grid's efficiency difference, in data coordinates."""
    return zero_isolines(grid.delta, grid.omega, grid.axis2,
                         x_log=grid.omega_scale == "log")


# ---------------------------------------------------------------------------
# file formats

GRID_CSV_HEADER = ("omega", "axis2", "eta_first", "eta_second", "delta_eta")


def write_grid_csv(grid: SweepGrid, path) -> None:
    """Write the grid row-major (omega varying fastest), 9 significant digits."""
    lines = [",".join(GRID_CSV_HEADER)]
    for j in range(grid.axis2.size):
        a2 = grid.axis2[j]
        for i in range(grid.omega.size):
            lines.append(
                f"{grid.omega[i]:.9g},{a2:.9g},{grid.eta_first[j, i]:.9g},"
                f"{grid.eta_second[j, i]:.9g},{grid.delta[j, i]:.9g}"
            )
    with open(path, "w", newline="") as fh:
        fh.write("\n".join(lines))
        fh.write("\n")


def _infer_scale(axis: np.ndarray) -> str:
    if axis.size < 3 or np.any(axis <= 0.0):
        return "linear"
    diffs = np.diff(axis)
    ratios = axis[1:] / axis[:-1]
    diff_dev = float(np.max(np.abs(diffs - diffs[0])) / max(abs(diffs[0]), 1e-30))
    ratio_dev = float(np.max(np.abs(ratios - ratios[0])) / max(abs(ratios[0]), 1e-30))
    return "log" if ratio_dev < diff_dev else "linear"


def read_grid_csv(path) -> SweepGrid:
    """Reconstruct a grid written by :func:`write_grid_csv`."""
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader, None)
            if header is None or tuple(h.strip() for h in header) != GRID_CSV_HEADER:
                raise MalformedGrid(
                    f"expected header {','.join(GRID_CSV_HEADER)!r}, got {header!r}"
                )
            rows = [tuple(float(v) for v in row) for row in reader if row]
    except OSError as exc:
        raise MalformedGrid(f"cannot read grid file: {exc}") from exc
    except ValueError as exc:
        raise MalformedGrid(f"non-numeric grid entry: {exc}") from exc
    if not rows:
        raise MalformedGrid("grid file has no data rows")
    if any(len(r) != 5 for r in rows):
        raise MalformedGrid("grid rows must have 5 columns")

    first_omega = rows[0][0]
    n_omega = next((k for k in range(1, len(rows)) if rows[k][0] == first_omega), len(rows))
    if len(rows) % n_omega != 0:
        raise MalformedGrid("row count is not a multiple of the omega resolution")
    n_axis2 = len(rows) // n_omega
    if n_omega < 2 or n_axis2 < 2:
        raise MalformedGrid("grid needs at least 2 points on each axis")

    data = np.array(rows)
    omega = data[:n_omega, 0]
    axis2 = data[::n_omega, 1]
    shape = (n_axis2, n_omega)
    for j in range(n_axis2):
        block = data[j * n_omega:(j + 1) * n_omega]
        if not np.array_equal(block[:, 0], omega) or not np.all(block[:, 1] == axis2[j]):
            raise MalformedGrid("grid rows are not row-major with omega varying fastest")
    eta_first = data[:, 2].reshape(shape)
    eta_second = data[:, 3].reshape(shape)
    delta = data[:, 4].reshape(shape)
    return SweepGrid(None, None, omega, axis2, "axis2", _infer_scale(omega),
                     eta_first, eta_second, delta, contours=[])


def contours_to_json_dict(grid: SweepGrid, pair: str | None = None) -> dict:
    """JSON payload for extracted contours: pair label, polylines, parameters."""
    polylines = [[[float(x), float(y)] for x, y in line] for line in grid.contours]
    return {
        "pair": pair if pair is not None else (grid.pair or "unspecified"),
        "polylines": polylines,
        "params": None if grid.params is None else asdict(grid.params),
    }
