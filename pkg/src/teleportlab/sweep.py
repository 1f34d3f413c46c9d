"""Parameter sweeps, figure datasets, thresholds and curve crossings."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import entanglement as ent
from . import teleport as tp
from .states import (
    CHANNEL_PARAMS,
    ChannelKind,
    ParameterError,
    epsilon_bound,
    make_channel,
    nmes,
    werner,
)

METRICS = (
    "concurrence",
    "concurrence_pure",
    "negativity",
    "nu",
    "avg_fidelity_closed",
    "avg_fidelity_numeric",
    "avg_fidelity_horodecki",
)
BISECT_TOL = 1e-10


@dataclass(frozen=True)
class SweepSpec:
    family: ChannelKind
    param: str
    start: float
    stop: float
    steps: int
    metrics: tuple
    fixed: Mapping[str, float] = field(default_factory=dict)
    quadrature_n: int = 64

    def __post_init__(self):
        object.__setattr__(self, "family", ChannelKind.parse(self.family))
        object.__setattr__(self, "metrics", tuple(self.metrics))
        object.__setattr__(self, "fixed", dict(self.fixed))
        if not self.start < self.stop:
            raise ValueError(f"sweep needs from < to, got {self.start} >= {self.stop}")
        if self.steps < 2:
            raise ValueError(f"sweep needs at least 2 steps, got {self.steps}")
        if not self.metrics:
            raise ValueError("sweep needs at least one metric")
        for m in self.metrics:
            if m not in METRICS:
                raise ValueError(f"unknown metric {m!r}; choose from {', '.join(METRICS)}")
        allowed = CHANNEL_PARAMS[self.family]
        for name in (self.param, *self.fixed):
            if name not in allowed:
                raise ValueError(
                    f"parameter {name!r} does not apply to channel family '{self.family.value}'"
                )
        if self.param in self.fixed:
            raise ValueError(f"parameter {self.param!r} is both swept and fixed")
        if "concurrence_pure" in self.metrics and not self.family.is_pure:
            raise ValueError(
                f"metric 'concurrence_pure' requires a pure channel; "
                f"family '{self.family.value}' is mixed"
            )

    def grid(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, self.steps)


@dataclass(frozen=True)
class SweepRow:
    param: float
    values: tuple


def _metric(name: str, spec: SweepSpec, params: dict, channel_cache: list) -> float:
    if name == "avg_fidelity_closed":
        return tp.avg_fidelity_closed(spec.family, **params).value
    if not channel_cache:
        channel_cache.append(make_channel(spec.family, **params))
    ch = channel_cache[0]
    if name == "concurrence_pure":
        return ent.concurrence_pure(ch.pure_vector)
    if name == "concurrence":
        return ent.concurrence_pure(ch.pure_vector) if ch.is_pure else ent.concurrence_mixed(ch.rho)
    if name == "negativity":
        return ent.negativity(ch.rho)
    if name == "nu":
        return ent.horodecki_nu(ch.rho)
    if name == "avg_fidelity_numeric":
        return tp.avg_fidelity_numeric(ch, "quadrature", spec.quadrature_n)
    return tp.avg_fidelity_horodecki(ch)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    rows = []
    for t in spec.grid():
        params = {**spec.fixed, spec.param: float(t)}
        cache: list = []
        values = tuple(float(_metric(m, spec, params, cache)) for m in spec.metrics)
        rows.append(SweepRow(float(t), values))
    return rows


# tables and their serialization


def format_float(x) -> str:
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    x = float(x)
    if x == 0.0:
        x = 0.0  # drop the sign of -0.0
    return f"{x:.12g}"


@dataclass(frozen=True)
class Table:
    """Column-named rows; a ``None`` cell marks an omitted value."""

    columns: tuple
    rows: tuple

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines += [",".join(format_float(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def to_json(self) -> str:
        def cell(v):
            if v is None:
                return None
            if isinstance(v, (bool, np.bool_)):
                return bool(v)
            return float(format_float(v))

        payload = {"columns": list(self.columns), "rows": [[cell(v) for v in row] for row in self.rows]}
        return json.dumps(payload, indent=2) + "\n"


def sweep_table(spec: SweepSpec, rows: Sequence[SweepRow]) -> Table:
    return Table((spec.param, *spec.metrics), tuple((r.param, *r.values) for r in rows))


# named curves on [0, 1]


def curve(name: str, **fixed) -> Callable[[float], float]:
    """A scalar function of the shared channel parameter t.

    ``noes_point`` / ``nmes_point`` need ``ysq``; ``nonorth_mixed_avg``
    needs ``eps``.
    """
    if name == "noes_point":
        return lambda t: tp.fidelity_noes_closed(t, fixed["ysq"])
    if name == "nmes_point":
        return lambda t: tp.fidelity_nmes_closed(t, fixed["ysq"])
    if name == "nonorth_mixed_avg":
        return lambda t: tp.avg_fidelity_nonorth_mixed(t, fixed["eps"])
    simple = {
        "noes_avg": tp.avg_fidelity_noes,
        "werner_avg": tp.avg_fidelity_werner,
        "nmes_avg": tp.avg_fidelity_nmes,
        "rho_new_avg": tp.avg_fidelity_rho_new,
        "noes_concurrence": ent.concurrence_noes_closed,
        "nmes_concurrence": ent.concurrence_nmes_closed,
        "werner_concurrence": ent.concurrence_werner_closed,
    }
    if name not in simple:
        raise ValueError(f"unknown curve {name!r}")
    return simple[name]


CURVES = (
    "noes_point", "nmes_point", "nonorth_mixed_avg", "noes_avg", "werner_avg",
    "nmes_avg", "rho_new_avg", "noes_concurrence", "nmes_concurrence", "werner_concurrence",
)


def _bisect(f: Callable[[float], float], lo: float, hi: float) -> float:
    flo = f(lo)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if fm == 0.0:
            return mid
        if (fm > 0.0) == (flo > 0.0):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_threshold(f: Callable[[float], float], target: float = 2.0 / 3.0,
                   lo: float = 0.0, hi: float = 1.0, grid: int = 201) -> float:
    """Parameter where a monotone curve crosses ``target``, by bisection."""
    ts = np.linspace(lo, hi, grid)
    vals = np.array([f(t) for t in ts])
    d = np.diff(vals)
    if not (np.all(d >= -1e-15) or np.all(d <= 1e-15)):
        raise ValueError("curve is not monotone on the scan grid")
    g = lambda t: f(t) - target
    glo, ghi = g(lo), g(hi)
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    if (glo > 0.0) == (ghi > 0.0):
        raise ValueError("threshold not bracketed")
    root = _bisect(g, lo, hi)
    if abs(g(root)) >= BISECT_TOL:
        raise ValueError(f"bisection stalled at residual {abs(g(root)):.3g}")
    return root


def sign_change_brackets(f: Callable[[float], float], lo: float = 0.0, hi: float = 1.0,
                         grid: int = 201) -> list[tuple[float, float]]:
    """Grid brackets where ``f`` changes sign; exact zeros are skipped."""
    ts = np.linspace(lo, hi, grid)
    prev = None
    brackets = []
    for t in ts:
        v = f(t)
        if abs(v) <= 1e-15:
            continue
        if prev is not None and (v > 0.0) != (prev[1] > 0.0):
            brackets.append((prev[0], float(t)))
        prev = (float(t), v)
    return brackets


def find_crossing(f: Callable[[float], float], g: Callable[[float], float],
                  lo: float = 0.0, hi: float = 1.0, grid: int = 201) -> float:
    """The single interior point where two curves cross."""
    diff = lambda t: f(t) - g(t)
    brackets = sign_change_brackets(diff, lo, hi, grid)
    if len(brackets) != 1:
        listed = ", ".join(f"({a:g}, {b:g})" for a, b in brackets) or "none"
        raise ValueError(f"expected exactly one sign change, found {len(brackets)}: {listed}")
    a, b = brackets[0]
    return _bisect(diff, a, b)


# figure datasets

FIGURE_EPS = {4: 0.2, 5: 0.4}


def figure_dataset(fig: int, points: int = 101, eps: Optional[float] = None) -> Table:
    """Data behind one of the five comparison figures.

    1: average fidelity of the three channels against the shared parameter t.
    2: their concurrences.  3: (concurrence, average fidelity) pairs for the
    two pure channels.  4 and 5: mixed non-orthogonal channel at fixed eps
    against rho_new, plus the classical 2/3 line.
    """
    if fig not in (1, 2, 3, 4, 5):
        raise ValueError(f"figure id must be 1..5, got {fig}")
    if points < 10:
        raise ValueError(f"figure needs at least 10 points, got {points}")
    ts = [float(t) for t in np.linspace(0.0, 1.0, points)]
    if fig == 1:
        cols = ("t", "f_noes", "f_werner", "f_nmes")
        rows = [(t, tp.avg_fidelity_noes(t), tp.avg_fidelity_werner(t), tp.avg_fidelity_nmes(t)) for t in ts]
    elif fig == 2:
        cols = ("t", "c_noes", "c_werner", "c_nmes")
        rows = [
            (t, ent.concurrence_noes_closed(t), ent.concurrence_mixed(werner(t).rho),
             ent.concurrence_nmes_closed(t))
            for t in ts
        ]
    elif fig == 3:
        cols = ("t", "c_noes", "f_noes", "c_nmes", "f_nmes")
        rows = [
            (t, ent.concurrence_noes_closed(t), tp.avg_fidelity_noes(t),
             ent.concurrence_pure(nmes(t).pure_vector), tp.avg_fidelity_nmes(t))
            for t in ts
        ]
    else:
        eps = FIGURE_EPS[fig] if eps is None else float(eps)
        if eps <= 0.0:
            raise ParameterError("eps", f"must be positive, got {eps:g}")
        cols = ("t", "f_nonorth_mixed", "f_rho_new", "classical", "nonorth_admissible")
        rows = []
        for t in ts:
            ok = eps <= epsilon_bound(t) + 1e-12
            f_n = tp.avg_fidelity_nonorth_mixed(t, eps) if ok else None
            rows.append((t, f_n, tp.avg_fidelity_rho_new(t), tp.CLASSICAL_FIDELITY, ok))
    return Table(cols, tuple(tuple(r) for r in rows))


_FIG_TITLES = {
    1: ("average teleportation fidelity", "channel parameter"),
    2: ("concurrence", "channel parameter"),
    3: ("average teleportation fidelity", "concurrence"),
    4: ("average teleportation fidelity", "channel parameter"),
    5: ("average teleportation fidelity", "channel parameter"),
}


def gnuplot_script(fig: int, table: Table, csv_name: str) -> str:
    """Plain gnuplot script plotting ``csv_name`` (path relative to the script)."""
    ylabel, xlabel = _FIG_TITLES[fig]
    lines = [
        f"# figure {fig}",
        "set datafile separator ','",
        "set datafile missing ''",
        "set key autotitle columnhead",
        f"set xlabel '{xlabel}'",
        f"set ylabel '{ylabel}'",
        "set terminal pngcairo size 800,600",
        f"set output '{csv_name.rsplit('.', 1)[0]}.png'",
    ]
    if fig == 3:
        plots = [f"'{csv_name}' using 2:3 with lines", f"'{csv_name}' using 4:5 with lines"]
    else:
        n_curves = len(table.columns) - 1
        if fig in (4, 5):
            n_curves = 3  # skip the admissibility marker
        plots = []
        for i in range(2, 2 + n_curves):
            style = "lines dashtype 2" if table.columns[i - 1] == "classical" else "lines"
            plots.append(f"'{csv_name}' using 1:{i} with {style}")
    lines.append("plot " + ", \\\n     ".join(plots))
    return "\n".join(lines) + "\n"


def line_fit_residual(xs, ys) -> float:
    """Max absolute residual of a least-squares line through (xs, ys)."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    A = np.column_stack([xs, np.ones_like(xs)])
    coef, *_ = np.linalg.lstsq(A, ys, rcond=None)
    return float(np.max(np.abs(A @ coef - ys)))

