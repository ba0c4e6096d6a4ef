"""Batch experiments: convergence sweeps, commutator scaling, reports.

Configs are plain ``key = value`` text: ``#`` starts a comment, lists are
comma-separated, expressions are quoted strings, and numeric tokens may
be plain floats, fractions like ``1/64``, or ``pi``/``-pi``. Defaults
reproduce the reference setup: V(x) = cos(x) on [-pi, pi], N = 64,
t = 0.5, time steps 1/4 ... 1/64 at h = 1/64 for the dt sweep, and
h = 1/32 ... 1/1024 at fixed dt = 0.1 for the h sweep.

The h sweep, the commutator sweep and the beta experiment couple the
grid to the semiclassical parameter (N = 1/h) unless the config pins N
explicitly; the uniform error and commutator bounds concern the
resolved regime where the grid tracks the oscillation scale, and a
fixed grid leaves the small-h tail unresolved (observable error then
grows like a power of 1/h instead of staying flat).

CSV rows carry exactly the columns
``experiment,p,scheme,N,h,dt,t,metric,value`` with RFC-4180-style
quoting; identical configs produce byte-identical files. Plots are
self-contained log-log SVGs, one polyline per series plus dashed
reference lines.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .commutator_lab import compute_beta_comm
from .discretize import Grid, SchemeKind
from .expr import Expr, ExprError, parse_expr
from .linalg import commutator, spectral_norm
from .model import ModelParams, PolyObservableSpec, build_A, build_B, build_observable
from .splitting import exact_unitary, suzuki_plan, trotter_step
from .symbolic_lie import SymOp, sym_commutator, verify_height_width

EXPERIMENTS = ("dt-sweep", "h-sweep", "comm-sweep", "beta", "verify-symbolic")

CSV_HEADER = "experiment,p,scheme,N,h,dt,t,metric,value"

COMM_WORD_LABELS = ("[A,B]", "[[A,B],O]", "[A,[[A,B],O]]", "[A,[A,[[A,B],O]]]")

# fixed Gaussian wavepacket for expectation-value reporting
STATE_CENTER = 0.0
STATE_WIDTH = 0.5
STATE_MOMENTUM = 1.0


class ConfigError(Exception):
    """Invalid or inconsistent run configuration."""


@dataclass(frozen=True)
class RunConfig:
    experiment: str
    a: float = -math.pi
    b: float = math.pi
    n: int | None = 64
    h_values: tuple[float, ...] = (1.0 / 64,)
    dt_values: tuple[float, ...] = ()
    t_final: float = 0.5
    orders: tuple[int, ...] = (2,)
    potential: str = "cos(x)"
    observable: str = "0:cos(x), 1:sin(x)"
    scheme: SchemeKind = SchemeKind.FINITE_DIFFERENCE
    seed: int = 0
    output_dir: str = "out"
    trials: int = 1000
    state: bool = False


@dataclass(frozen=True)
class Row:
    experiment: str
    p: int | None
    scheme: str
    n: int
    h: float | None
    dt: float | None
    t: float | None
    metric: str
    value: float


@dataclass
class SlopeFit:
    slope: float
    intercept: float
    r2: float
    points: list[tuple[float, float]] = field(default_factory=list)


# -- configuration ----------------------------------------------------------


def _parse_scalar(token: str) -> float:
    token = token.strip()
    if "/" in token:
        num, den = token.split("/", 1)
        return _parse_scalar(num) / _parse_scalar(den)
    if token == "pi":
        return math.pi
    if token == "-pi":
        return -math.pi
    try:
        return float(token)
    except ValueError as exc:
        raise ConfigError(f"cannot parse number {token!r}") from exc


def _parse_value(raw: str):
    raw = raw.strip()
    if raw.startswith('"'):
        end = raw.find('"', 1)
        if end < 0:
            raise ConfigError(f"unterminated string: {raw}")
        trailer = raw[end + 1:].strip()
        if trailer and not trailer.startswith("#"):
            raise ConfigError(f"trailing text after string: {raw}")
        return raw[1: end]
    raw = raw.split("#", 1)[0].strip()
    if not raw:
        raise ConfigError("empty value")
    return raw


def parse_config_text(text: str) -> dict[str, object]:
    """Parse ``key = value`` lines into a raw dictionary."""
    out: dict[str, object] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        if "=" not in stripped:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {stripped!r}")
        key, raw = stripped.split("=", 1)
        out[key.strip()] = _parse_value(raw)
    return out


_DEFAULT_DT_LIST = (0.25, 0.125, 0.0625, 0.03125, 0.015625)
_DEFAULT_H_LIST = tuple(1.0 / 2**k for k in range(5, 11))  # 1/32 ... 1/1024


def _experiment_defaults(experiment: str) -> dict[str, object]:
    if experiment == "dt-sweep":
        return {
            "n": 64,
            "h_values": (1.0 / 64,),
            "dt_values": _DEFAULT_DT_LIST,
            "orders": (1, 2, 4, 6),
        }
    if experiment == "h-sweep":
        return {
            "n": None,
            "h_values": _DEFAULT_H_LIST,
            "dt_values": (0.1,),
            "orders": (2, 4, 6),
        }
    if experiment == "comm-sweep":
        return {"n": None, "h_values": _DEFAULT_H_LIST, "orders": (2,)}
    if experiment == "beta":
        return {"n": None, "h_values": (1.0 / 32, 1.0 / 256), "orders": (2,)}
    if experiment == "verify-symbolic":
        return {"seed": 42}
    raise ConfigError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")


def _as_float_tuple(value) -> tuple[float, ...]:
    if isinstance(value, tuple):
        return value
    return tuple(_parse_scalar(tok) for tok in str(value).split(","))


def _as_int(value, key: str) -> int:
    number = _parse_scalar(str(value))
    if abs(number - round(number)) > 1e-9:
        raise ConfigError(f"{key} must be an integer, got {value!r}")
    return int(round(number))


def _parse_scheme(value: str) -> SchemeKind:
    normalized = str(value).strip().lower().replace("_", "-")
    if normalized in ("fd", "finite-difference", "finitedifference"):
        return SchemeKind.FINITE_DIFFERENCE
    if normalized == "spectral":
        return SchemeKind.SPECTRAL
    raise ConfigError(f"unknown scheme {value!r}")


def build_config(experiment: str, raw: dict[str, object] | None = None, state: bool = False) -> RunConfig:
    """Merge raw config values over per-experiment defaults and validate."""
    if experiment not in EXPERIMENTS:
        raise ConfigError(f"unknown experiment {experiment!r}; expected one of {EXPERIMENTS}")
    raw = dict(raw or {})
    declared = raw.pop("experiment", None)
    if declared is not None and str(declared) != experiment:
        raise ConfigError(f"config is for {declared!r}, requested {experiment!r}")

    cfg = RunConfig(experiment=experiment, state=state)
    cfg = replace(cfg, **_experiment_defaults(experiment))

    for key, value in raw.items():
        if key == "a":
            cfg = replace(cfg, a=_parse_scalar(str(value)))
        elif key == "b":
            cfg = replace(cfg, b=_parse_scalar(str(value)))
        elif key == "N":
            if str(value).strip().lower() == "auto":
                cfg = replace(cfg, n=None)
            else:
                cfg = replace(cfg, n=_as_int(value, "N"))
        elif key == "h":
            cfg = replace(cfg, h_values=_as_float_tuple(value))
        elif key == "dt":
            cfg = replace(cfg, dt_values=_as_float_tuple(value))
        elif key == "t_final":
            cfg = replace(cfg, t_final=_parse_scalar(str(value)))
        elif key == "orders":
            cfg = replace(
                cfg, orders=tuple(_as_int(tok, "orders") for tok in str(value).split(","))
            )
        elif key == "potential":
            cfg = replace(cfg, potential=str(value))
        elif key == "observable":
            cfg = replace(cfg, observable=str(value))
        elif key == "scheme":
            cfg = replace(cfg, scheme=_parse_scheme(str(value)))
        elif key == "seed":
            cfg = replace(cfg, seed=_as_int(value, "seed"))
        elif key == "output_dir":
            cfg = replace(cfg, output_dir=str(value))
        elif key == "trials":
            cfg = replace(cfg, trials=_as_int(value, "trials"))
        else:
            raise ConfigError(f"unknown config key {key!r}")

    _validate(cfg)
    return cfg


def load_config(experiment: str, path: str | None, state: bool = False) -> RunConfig:
    raw = None
    if path is not None:
        try:
            with open(path, "r", encoding="utf-8") as fh:
                raw = parse_config_text(fh.read())
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from exc
    return build_config(experiment, raw, state=state)


def _validate(cfg: RunConfig) -> None:
    if not cfg.b > cfg.a:
        raise ConfigError(f"need b > a, got [{cfg.a}, {cfg.b}]")
    if cfg.n is not None and (cfg.n < 4 or cfg.n % 2 != 0):
        raise ConfigError(f"N must be even and >= 4, got {cfg.n}")
    if not cfg.h_values or any(h <= 0 for h in cfg.h_values):
        raise ConfigError(f"h list must be non-empty and positive: {cfg.h_values}")
    if any(h > 1.0 for h in cfg.h_values):
        raise ConfigError(f"semiclassical parameter must satisfy h <= 1: {cfg.h_values}")
    if cfg.t_final <= 0:
        raise ConfigError(f"t_final must be positive, got {cfg.t_final}")
    if not cfg.orders or any(p != 1 and (p < 2 or p % 2 or p > 10) for p in cfg.orders):
        raise ConfigError(f"orders must be 1 or even <= 10: {cfg.orders}")
    if cfg.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {cfg.trials}")
    if cfg.experiment == "dt-sweep" and cfg.n is None:
        raise ConfigError("dt-sweep requires an explicit N")
    if cfg.experiment in ("dt-sweep", "h-sweep"):
        if not cfg.dt_values or any(dt <= 0 for dt in cfg.dt_values):
            raise ConfigError(f"dt list must be non-empty and positive: {cfg.dt_values}")
        for dt in cfg.dt_values:
            steps = cfg.t_final / dt
            if abs(steps - round(steps)) > 1e-9:
                raise ConfigError(
                    f"t_final/dt = {steps} is not integral for dt={dt}; "
                    "configs are rejected, not rounded"
                )
    try:
        parse_expr(cfg.potential)
        parse_observable_spec(cfg.observable, h=cfg.h_values[0])
    except ExprError as exc:
        raise ConfigError(f"bad expression in config: {exc}") from exc


def parse_observable_spec(text: str, h: float) -> PolyObservableSpec:
    """Parse ``m:expr`` pairs, e.g. ``0:cos(x), 1:sin(x)``."""
    terms: list[tuple[int, Expr]] = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ":" not in chunk:
            raise ConfigError(f"observable term {chunk!r} is not of the form m:expr")
        degree_text, expr_text = chunk.split(":", 1)
        try:
            degree = int(degree_text)
        except ValueError as exc:
            raise ConfigError(f"bad observable degree {degree_text!r}") from exc
        terms.append((degree, parse_expr(expr_text)))
    if not terms:
        raise ConfigError(f"observable spec {text!r} has no terms")
    try:
        return PolyObservableSpec(terms=tuple(terms), h=h)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


# -- shared machinery --------------------------------------------------------


def _pool_size() -> int:
    raw = os.environ.get("SEMITROTTER_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _run_jobs(fn, jobs):
    size = _pool_size()
    if size <= 1 or len(jobs) <= 1:
        return [fn(job) for job in jobs]
    with ThreadPoolExecutor(max_workers=size) as pool:
        return list(pool.map(fn, jobs))


_METRIC_ORDER = {
    "observable_error": 0,
    "unitary_error": 1,
    "expectation_error": 2,
}


def _sort_rows(rows: list[Row]) -> list[Row]:
    return sorted(
        rows,
        key=lambda r: (
            r.p if r.p is not None else -1,
            r.h if r.h is not None else -1.0,
            r.dt if r.dt is not None else -1.0,
            _METRIC_ORDER.get(r.metric, 99),
            r.metric,
        ),
    )


def _scheme_tag(scheme: SchemeKind) -> str:
    return "fd" if scheme is SchemeKind.FINITE_DIFFERENCE else "spectral"


def _grid_size_for(cfg: RunConfig, h: float) -> int:
    """Config N when pinned, else the resolved grid N = 1/h (even, >= 4)."""
    if cfg.n is not None:
        return cfg.n
    size = int(round(1.0 / h))
    if size % 2:
        size += 1
    return max(size, 4)


def _build_operators(cfg: RunConfig, h: float, n: int):
    grid = Grid(cfg.a, cfg.b, n)
    params = ModelParams(
        h=h, potential=parse_expr(cfg.potential), grid=grid, scheme=cfg.scheme
    )
    a = build_A(params)
    b = build_B(params)
    obs_spec = parse_observable_spec(cfg.observable, h=h)
    obs = build_observable(obs_spec, grid, cfg.scheme)
    return grid, a, b, obs


def _gaussian_state(grid: Grid) -> np.ndarray:
    x = grid.nodes
    psi = np.exp(
        -((x - STATE_CENTER) ** 2) / (2.0 * STATE_WIDTH**2) + 1j * STATE_MOMENTUM * x
    )
    return psi / np.linalg.norm(psi)


def _evolution_rows(cfg: RunConfig, h: float, n_grid: int, p: int, dt: float) -> list[Row]:
    grid, a, b, obs = _build_operators(cfg, h, n_grid)
    hamiltonian = a + b
    steps = int(round(cfg.t_final / dt))
    u_exact = exact_unitary(hamiltonian, cfg.t_final)
    u_trot = np.linalg.matrix_power(trotter_step(suzuki_plan(p), a, b, dt), steps)

    # Evaluate both error norms through the deviation unitary
    # W = U_trot U_exact^dagger: by unitary invariance,
    #   || T_trot - T_exact || = || W^dagger O W - O || = || [O, W - I] ||
    #   || U_trot^n - e^{-iHt} || = || W - I ||,
    # which avoids the cancellation of two separately conjugated
    # observables and keeps the high-order tails above roundoff.
    deviation = u_trot @ u_exact.conj().T - np.eye(n_grid, dtype=np.complex128)
    obs_comm = commutator(obs, deviation)

    common = dict(
        experiment=cfg.experiment,
        p=p,
        scheme=_scheme_tag(cfg.scheme),
        n=n_grid,
        h=h,
        dt=dt,
        t=cfg.t_final,
    )
    rows = [
        Row(metric="observable_error", value=spectral_norm(obs_comm), **common),
        Row(metric="unitary_error", value=spectral_norm(deviation), **common),
    ]
    if cfg.state:
        # witness for the expectation-error inequality: the state-level
        # error is bounded by the operator-norm observable error
        psi = _gaussian_state(grid)
        phi = u_exact @ psi
        w = deviation + np.eye(n_grid, dtype=np.complex128)
        value = abs(np.vdot(phi, w.conj().T @ obs_comm @ phi))
        rows.append(Row(metric="expectation_error", value=float(value), **common))
    return rows


def run_dt_sweep(cfg: RunConfig) -> list[Row]:
    """Observable and unitary error against dt at fixed h."""
    h = cfg.h_values[0]
    jobs = [(p, dt) for p in cfg.orders for dt in cfg.dt_values]
    results = _run_jobs(lambda job: _evolution_rows(cfg, h, cfg.n, *job), jobs)
    return _sort_rows([row for rows in results for row in rows])


def run_h_sweep(cfg: RunConfig) -> list[Row]:
    """Observable and unitary error against h at fixed dt.

    By default the grid resolves the oscillation scale (N = 1/h); pin N
    in the config to study the unresolved fixed-grid regime instead.
    """
    dt = cfg.dt_values[0]
    jobs = [(p, h) for p in cfg.orders for h in cfg.h_values]
    results = _run_jobs(
        lambda job: _evolution_rows(cfg, job[1], _grid_size_for(cfg, job[1]), job[0], dt),
        jobs,
    )
    return _sort_rows([row for rows in results for row in rows])


def _comm_rows(cfg: RunConfig, h: float) -> list[Row]:
    n_grid = _grid_size_for(cfg, h)
    _, a, b, obs = _build_operators(cfg, h, n_grid)
    chain = commutator(a, b)
    values = [spectral_norm(chain)]
    chain = commutator(chain, obs)
    values.append(spectral_norm(chain))
    for _ in range(2):
        chain = commutator(a, chain)
        values.append(spectral_norm(chain))

    common = dict(
        experiment=cfg.experiment,
        scheme=_scheme_tag(cfg.scheme),
        n=n_grid,
        h=h,
        dt=None,
        t=None,
    )
    rows = [
        Row(metric=label, value=value, p=None, **common)
        for label, value in zip(COMM_WORD_LABELS, values)
    ]
    p = cfg.orders[0]
    rows.append(
        Row(metric="beta_comm", value=compute_beta_comm(p, a, b, obs), p=p, **common)
    )
    return rows


def run_comm_sweep(cfg: RunConfig) -> list[Row]:
    """Norms of [A,B] and its nestings with O, plus beta, per h."""
    results = _run_jobs(lambda h: _comm_rows(cfg, h), list(cfg.h_values))
    return _sort_rows([row for rows in results for row in rows])


def _beta_rows(cfg: RunConfig, h: float) -> list[Row]:
    n_grid = _grid_size_for(cfg, h)
    _, a, b, obs = _build_operators(cfg, h, n_grid)
    return [
        Row(
            experiment=cfg.experiment,
            p=p,
            scheme=_scheme_tag(cfg.scheme),
            n=n_grid,
            h=h,
            dt=None,
            t=None,
            metric="beta_comm",
            value=compute_beta_comm(p, a, b, obs),
        )
        for p in cfg.orders
    ]


def run_beta(cfg: RunConfig) -> list[Row]:
    results = _run_jobs(lambda h: _beta_rows(cfg, h), list(cfg.h_values))
    return _sort_rows([row for rows in results for row in rows])


def run_verify_symbolic(cfg: RunConfig) -> list[Row]:
    """Randomized lemma verification plus the [V, d^2] hand check."""
    report = verify_height_width(cfg.trials, cfg.seed)

    v_op = SymOp.term(1, (("V", 0),))
    d2_op = SymOp.term(1, (), hpow=0, dord=2)
    expected = SymOp.term(-1, (("V", 2),)) + SymOp.term(-2, (("V", 1),), dord=1)
    hand_check = sym_commutator(v_op, d2_op) == expected

    def row(metric: str, value: float) -> Row:
        return Row(
            experiment=cfg.experiment,
            p=None,
            scheme=_scheme_tag(cfg.scheme),
            n=0,
            h=None,
            dt=None,
            t=None,
            metric=metric,
            value=value,
        )

    rows = [
        row("ht_wd_trials", float(report.trials)),
        row("ht_wd_checks", float(report.checks)),
        row("ht_wd_violations", float(report.failures)),
        row("hand_check_v_d2", 1.0 if hand_check else 0.0),
    ]
    if report.first_failure:
        rows.append(row("first_failure_flag", 1.0))
    return rows


RUNNERS = {
    "dt-sweep": run_dt_sweep,
    "h-sweep": run_h_sweep,
    "comm-sweep": run_comm_sweep,
    "beta": run_beta,
    "verify-symbolic": run_verify_symbolic,
}


def run_experiment(cfg: RunConfig) -> list[Row]:
    return RUNNERS[cfg.experiment](cfg)


# -- slope fitting ------------------------------------------------------------


def fit_slope(points) -> SlopeFit:
    """Ordinary least squares on (log x, log y)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError(f"need at least 2 points, got {len(pts)}")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("log-log fit requires strictly positive coordinates")
    xs = np.log([x for x, _ in pts])
    ys = np.log([y for _, y in pts])
    if np.ptp(xs) == 0.0:
        raise ValueError("degenerate fit: all x values coincide")
    slope, intercept = np.polyfit(xs, ys, 1)
    residuals = ys - (slope * xs + intercept)
    ss_res = float(np.sum(residuals**2))
    ss_tot = float(np.sum((ys - ys.mean()) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else max(0.0, min(1.0, 1.0 - ss_res / ss_tot))
    return SlopeFit(slope=float(slope), intercept=float(intercept), r2=r2, points=pts)


def series_from_rows(
    rows: list[Row], metric: str, x_field: str
) -> list[tuple[str, list[tuple[float, float]]]]:
    """Group rows with the given metric into (label, points) series by order p."""
    grouped: dict[int | None, list[tuple[float, float]]] = {}
    for row in rows:
        if row.metric != metric:
            continue
        x = getattr(row, x_field)
        if x is None:
            continue
        grouped.setdefault(row.p, []).append((x, row.value))
    series = []
    for p in sorted(grouped, key=lambda v: (v is None, v)):
        label = metric if p is None else f"{metric} p={p}"
        series.append((label, sorted(grouped[p])))
    return series


# -- CSV ----------------------------------------------------------------------


def _csv_quote(fieldtext: str) -> str:
    if any(ch in fieldtext for ch in ',"\n'):
        return '"' + fieldtext.replace('"', '""') + '"'
    return fieldtext


def _format_number(value: float | int | None) -> str:
    if value is None:
        return ""
    if isinstance(value, int):
        return str(value)
    return repr(float(value))


def rows_to_csv(rows: list[Row]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        fields = [
            r.experiment,
            _format_number(r.p),
            r.scheme,
            _format_number(r.n),
            _format_number(r.h),
            _format_number(r.dt),
            _format_number(r.t),
            r.metric,
            _format_number(r.value),
        ]
        lines.append(",".join(_csv_quote(f) for f in fields))
    return "\n".join(lines) + "\n"


def emit_csv(rows: list[Row], path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(rows_to_csv(rows))
    return path


# -- SVG ----------------------------------------------------------------------

_SVG_W, _SVG_H = 720, 520
_MARGIN_L, _MARGIN_R, _MARGIN_T, _MARGIN_B = 70, 170, 40, 50
_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf")


def emit_svg(
    series,
    ref_lines=(),
    path: str = "plot.svg",
    title: str = "",
    xlabel: str = "",
    ylabel: str = "",
) -> str:
    """Write a self-contained log-log SVG plot.

    series: iterable of (label, [(x, y), ...]) with positive coordinates.
    ref_lines: iterable of (label, slope) drawn dashed through the
    lower-right anchor of the data, giving x^slope guide lines.
    """
    series = [(label, sorted((float(x), float(y)) for x, y in pts)) for label, pts in series]
    all_pts = [pt for _, pts in series for pt in pts]
    if any(x <= 0 or y <= 0 for x, y in all_pts):
        raise ValueError("log-log plot requires positive data")

    if all_pts:
        lx0, lx1 = (min(math.log10(x) for x, _ in all_pts), max(math.log10(x) for x, _ in all_pts))
        ly0, ly1 = (min(math.log10(y) for _, y in all_pts), max(math.log10(y) for _, y in all_pts))
    else:
        lx0, lx1, ly0, ly1 = -1.0, 1.0, -1.0, 1.0
    if lx1 - lx0 < 1e-9:
        lx0, lx1 = lx0 - 0.5, lx1 + 0.5
    if ly1 - ly0 < 1e-9:
        ly0, ly1 = ly0 - 0.5, ly1 + 0.5
    pad_x, pad_y = 0.05 * (lx1 - lx0), 0.05 * (ly1 - ly0)
    lx0, lx1 = lx0 - pad_x, lx1 + pad_x
    ly0, ly1 = ly0 - pad_y, ly1 + pad_y

    plot_w = _SVG_W - _MARGIN_L - _MARGIN_R
    plot_h = _SVG_H - _MARGIN_T - _MARGIN_B

    def to_px(x: float, y: float) -> tuple[float, float]:
        px = _MARGIN_L + (math.log10(x) - lx0) / (lx1 - lx0) * plot_w
        py = _MARGIN_T + (ly1 - math.log10(y)) / (ly1 - ly0) * plot_h
        return px, py

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_SVG_W}" height="{_SVG_H}" '
        f'viewBox="0 0 {_SVG_W} {_SVG_H}">',
        f'<rect width="{_SVG_W}" height="{_SVG_H}" fill="white"/>',
        f'<text x="{_SVG_W // 2}" y="24" text-anchor="middle" font-size="15">{title}</text>',
    ]
    # axes
    x_axis_y = _MARGIN_T + plot_h
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{x_axis_y}" x2="{_MARGIN_L + plot_w}" y2="{x_axis_y}" '
        'stroke="black"/>'
    )
    parts.append(
        f'<line x1="{_MARGIN_L}" y1="{_MARGIN_T}" x2="{_MARGIN_L}" y2="{x_axis_y}" stroke="black"/>'
    )
    for decade in range(math.ceil(lx0), math.floor(lx1) + 1):
        px = _MARGIN_L + (decade - lx0) / (lx1 - lx0) * plot_w
        parts.append(f'<line x1="{px:.1f}" y1="{x_axis_y}" x2="{px:.1f}" y2="{x_axis_y + 5}" stroke="black"/>')
        parts.append(
            f'<text x="{px:.1f}" y="{x_axis_y + 20}" text-anchor="middle" font-size="11">1e{decade}</text>'
        )
    for decade in range(math.ceil(ly0), math.floor(ly1) + 1):
        py = _MARGIN_T + (ly1 - decade) / (ly1 - ly0) * plot_h
        parts.append(f'<line x1="{_MARGIN_L - 5}" y1="{py:.1f}" x2="{_MARGIN_L}" y2="{py:.1f}" stroke="black"/>')
        parts.append(
            f'<text x="{_MARGIN_L - 8}" y="{py + 4:.1f}" text-anchor="end" font-size="11">1e{decade}</text>'
        )
    if xlabel:
        parts.append(
            f'<text x="{_MARGIN_L + plot_w // 2}" y="{_SVG_H - 10}" text-anchor="middle" '
            f'font-size="13">{xlabel}</text>'
        )
    if ylabel:
        parts.append(
            f'<text x="18" y="{_MARGIN_T + plot_h // 2}" font-size="13" text-anchor="middle" '
            f'transform="rotate(-90 18 {_MARGIN_T + plot_h // 2})">{ylabel}</text>'
        )

    legend_y = _MARGIN_T + 10
    for idx, (label, pts) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        if pts:
            coords = " ".join(f"{px:.2f},{py:.2f}" for px, py in (to_px(x, y) for x, y in pts))
            parts.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{coords}"/>')
            for x, y in pts:
                px, py = to_px(x, y)
                parts.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="2.5" fill="{color}"/>')
        legend_x = _MARGIN_L + plot_w + 12
        parts.append(
            f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 22}" y2="{legend_y}" '
            f'stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{legend_x + 28}" y="{legend_y + 4}" font-size="11">{_xml_escape(label)}</text>'
        )
        legend_y += 18

    # dashed reference guides anchored at the max-x, min-y corner of the data
    if all_pts and ref_lines:
        x_hi = max(x for x, _ in all_pts)
        x_lo = min(x for x, _ in all_pts)
        y_anchor = min(y for _, y in all_pts)
        for idx, (label, slope) in enumerate(ref_lines):
            y_at = lambda x: y_anchor * (x / x_hi) ** slope
            p0, p1 = to_px(x_lo, y_at(x_lo)), to_px(x_hi, y_at(x_hi))
            parts.append(
                f'<polyline fill="none" stroke="#555555" stroke-dasharray="6,4" '
                f'points="{p0[0]:.2f},{p0[1]:.2f} {p1[0]:.2f},{p1[1]:.2f}"/>'
            )
            legend_x = _MARGIN_L + plot_w + 12
            parts.append(
                f'<line x1="{legend_x}" y1="{legend_y}" x2="{legend_x + 22}" y2="{legend_y}" '
                'stroke="#555555" stroke-dasharray="6,4"/>'
            )
            parts.append(
                f'<text x="{legend_x + 28}" y="{legend_y + 4}" font-size="11">{_xml_escape(label)}</text>'
            )
            legend_y += 18

    parts.append("</svg>")
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(parts) + "\n")
    return path


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
