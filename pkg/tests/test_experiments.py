"""Config, sweep, CSV/SVG, and CLI surface tests."""

import csv
import io
import math
import xml.etree.ElementTree as ET

import pytest

from semitrotter.cli import main
from semitrotter.discretize import SchemeKind
from semitrotter.experiments import (
    ConfigError,
    RunConfig,
    build_config,
    emit_csv,
    emit_svg,
    fit_slope,
    parse_config_text,
    parse_observable_spec,
    rows_to_csv,
    run_beta,
    run_dt_sweep,
    run_verify_symbolic,
    series_from_rows,
)

FAST_DT = {"N": "16", "h": "1/8", "dt": "1/4, 1/8", "orders": "1, 2", "t_final": "1/2"}


def test_config_defaults_follow_reference_setup():
    cfg = build_config("dt-sweep")
    assert cfg.a == pytest.approx(-math.pi)
    assert cfg.b == pytest.approx(math.pi)
    assert cfg.n == 64
    assert cfg.h_values == (1.0 / 64,)
    assert cfg.dt_values == (0.25, 0.125, 0.0625, 0.03125, 0.015625)
    assert cfg.orders == (1, 2, 4, 6)
    assert cfg.t_final == 0.5
    assert cfg.potential == "cos(x)"
    assert cfg.scheme is SchemeKind.FINITE_DIFFERENCE

    h_cfg = build_config("h-sweep")
    assert h_cfg.dt_values == (0.1,)
    assert h_cfg.h_values[0] == pytest.approx(1.0 / 32)
    assert h_cfg.h_values[-1] == pytest.approx(1.0 / 1024)
    assert h_cfg.n is None  # grid resolves the oscillation scale by default

    beta_cfg = build_config("beta")
    assert beta_cfg.h_values == (1.0 / 32, 1.0 / 256)


def test_config_text_parsing():
    raw = parse_config_text(
        """
        # reference run
        N = 32
        h = 1/64
        dt = 1/4, 1/8   # list
        potential = "cos(x) + 0.5*sin(x)"
        scheme = spectral
        """
    )
    cfg = build_config("dt-sweep", raw)
    assert cfg.n == 32
    assert cfg.h_values == (1.0 / 64,)
    assert cfg.dt_values == (0.25, 0.125)
    assert cfg.potential == "cos(x) + 0.5*sin(x)"
    assert cfg.scheme is SchemeKind.SPECTRAL


def test_config_pi_tokens():
    raw = {"a": "-pi", "b": "pi"}
    cfg = build_config("dt-sweep", raw)
    assert cfg.a == pytest.approx(-math.pi)
    assert cfg.b == pytest.approx(math.pi)


def test_config_rejections():
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"dt": "0.3"})  # t/dt not integral
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"N": "15"})  # odd
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"orders": "3"})
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"h": "2.0"})  # h > 1
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"nope": "1"})
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"potential": "cos(q)"})
    with pytest.raises(ConfigError):
        build_config("no-such-experiment")
    with pytest.raises(ConfigError):
        build_config("dt-sweep", {"experiment": "h-sweep"})
    with pytest.raises(ConfigError):
        parse_config_text("just some words\n")


def test_observable_spec_parsing():
    spec = parse_observable_spec("0:cos(x), 1:sin(x)", h=0.5)
    assert [m for m, _ in spec.terms] == [0, 1]
    with pytest.raises(ConfigError):
        parse_observable_spec("cos(x)", h=0.5)
    with pytest.raises(ConfigError):
        parse_observable_spec("0:cos(x), 0:sin(x)", h=0.5)


def test_fit_slope_exact_power_law():
    fit = fit_slope([(x, x**2) for x in (1.0, 2.0, 4.0, 8.0)])
    assert fit.slope == pytest.approx(2.0, abs=1e-12)
    assert fit.r2 == pytest.approx(1.0, abs=1e-12)


def test_fit_slope_constant():
    fit = fit_slope([(1.0, 3.0), (2.0, 3.0), (4.0, 3.0)])
    assert fit.slope == pytest.approx(0.0, abs=1e-12)
    assert fit.r2 == 1.0


def test_fit_slope_errors():
    with pytest.raises(ValueError):
        fit_slope([(1.0, 1.0)])
    with pytest.raises(ValueError):
        fit_slope([(1.0, 1.0), (1.0, 2.0)])
    with pytest.raises(ValueError):
        fit_slope([(1.0, -1.0), (2.0, 1.0)])


def test_dt_sweep_row_count_and_order():
    cfg = build_config("dt-sweep", FAST_DT)
    rows = run_dt_sweep(cfg)
    assert len(rows) == 2 * len(cfg.orders) * len(cfg.dt_values)
    keys = [(r.p, r.dt, r.metric) for r in rows]
    assert keys == sorted(keys, key=lambda k: (k[0], k[1], 0 if k[2] == "observable_error" else 1))
    for r in rows:
        assert r.t == cfg.t_final
        assert round(r.t / r.dt) * r.dt == pytest.approx(r.t, abs=1e-12)


def test_dt_sweep_exact_for_constant_potential():
    # constant V commutes with the kinetic term's... it does not, but V
    # constant makes B a multiple of the identity, so splitting is exact
    cfg = build_config("dt-sweep", dict(FAST_DT, potential="1", observable="0:cos(x)"))
    rows = run_dt_sweep(cfg)
    for r in rows:
        assert r.value <= 1e-9


def test_dt_sweep_state_metric_bounded_by_operator_norm():
    cfg = build_config("dt-sweep", FAST_DT, state=True)
    rows = run_dt_sweep(cfg)
    by_key = {(r.p, r.dt, r.metric): r.value for r in rows}
    for (p, dt, metric), value in by_key.items():
        if metric == "expectation_error":
            assert value <= by_key[(p, dt, "observable_error")] * (1 + 1e-9)


def test_h_sweep_exact_for_zero_potential():
    cfg = build_config(
        "h-sweep",
        {"h": "1/8, 1/16", "N": "16", "dt": "1/4", "t_final": "1/2",
         "orders": "2", "potential": "0", "observable": "0:cos(x)"},
    )
    from semitrotter.experiments import run_h_sweep

    for r in run_h_sweep(cfg):
        assert r.value <= 1e-9


def test_comm_sweep_constant_potential_commutes():
    from semitrotter.experiments import run_comm_sweep
    from semitrotter.discretize import Grid
    from semitrotter.expr import parse_expr
    from semitrotter.model import ModelParams, build_A, build_B
    from semitrotter.linalg import spectral_norm

    cfg = build_config("comm-sweep", {"h": "1/8", "N": "16", "potential": "2"})
    rows = run_comm_sweep(cfg)
    ab = next(r.value for r in rows if r.metric == "[A,B]")
    params = ModelParams(h=1 / 8, potential=parse_expr("2"), grid=Grid(cfg.a, cfg.b, 16))
    bound = 1e-12 * spectral_norm(build_A(params)) * spectral_norm(build_B(params))
    assert ab <= bound


def test_csv_format_and_roundtrip():
    cfg = build_config("dt-sweep", FAST_DT)
    rows = run_dt_sweep(cfg)
    text = rows_to_csv(rows)
    lines = text.strip().split("\n")
    assert lines[0] == "experiment,p,scheme,N,h,dt,t,metric,value"
    parsed = list(csv.reader(io.StringIO(text)))
    assert len(parsed) == len(rows) + 1
    assert all(len(rec) == 9 for rec in parsed)
    # values survive the round trip exactly via repr
    assert float(parsed[1][8]) == rows[0].value


def test_csv_quoting_of_comm_metrics():
    cfg = build_config("beta", {"h": "1/8", "N": "8"})
    rows = run_beta(cfg)
    comm_cfg = RunConfig(experiment="comm-sweep", n=8, h_values=(1.0 / 8,))
    from semitrotter.experiments import run_comm_sweep

    comm_rows = run_comm_sweep(comm_cfg)
    text = rows_to_csv(comm_rows + rows)
    assert '"[A,B]"' in text  # commas force quotes
    parsed = list(csv.reader(io.StringIO(text)))
    metrics = {rec[7] for rec in parsed[1:]}
    assert "[A,B]" in metrics and "[[A,B],O]" in metrics


def test_csv_determinism_across_thread_counts(tmp_path, monkeypatch):
    cfg = build_config("dt-sweep", FAST_DT)
    monkeypatch.delenv("SEMITROTTER_THREADS", raising=False)
    serial = rows_to_csv(run_dt_sweep(cfg))
    monkeypatch.setenv("SEMITROTTER_THREADS", "4")
    threaded = rows_to_csv(run_dt_sweep(cfg))
    assert serial == threaded

    p1 = emit_csv(run_dt_sweep(cfg), str(tmp_path / "a.csv"))
    p2 = emit_csv(run_dt_sweep(cfg), str(tmp_path / "b.csv"))
    with open(p1, "rb") as f1, open(p2, "rb") as f2:
        assert f1.read() == f2.read()


def test_verify_symbolic_rows():
    cfg = build_config("verify-symbolic", {"trials": "50"})
    rows = run_verify_symbolic(cfg)
    by_metric = {r.metric: r.value for r in rows}
    assert by_metric["ht_wd_trials"] == 50.0
    assert by_metric["ht_wd_violations"] == 0.0
    assert by_metric["hand_check_v_d2"] == 1.0


def test_svg_empty_series(tmp_path):
    path = emit_svg([], [], str(tmp_path / "empty.svg"), title="nothing")
    tree = ET.parse(path)
    root = tree.getroot()
    assert root.tag.endswith("svg")
    polylines = root.findall(".//{http://www.w3.org/2000/svg}polyline")
    assert len(polylines) == 0
    lines = root.findall(".//{http://www.w3.org/2000/svg}line")
    assert len(lines) >= 2  # both axes present


def test_svg_series_and_refs(tmp_path):
    series = [
        ("alpha", [(1.0, 1.0), (2.0, 4.0), (4.0, 16.0)]),
        ("beta", [(1.0, 2.0), (2.0, 2.0)]),
    ]
    path = emit_svg(series, [("x^2", 2.0)], str(tmp_path / "plot.svg"), xlabel="x", ylabel="y")
    root = ET.parse(path).getroot()
    polylines = root.findall(".//{http://www.w3.org/2000/svg}polyline")
    assert len(polylines) == len(series) + 1  # one per series plus the dashed ref
    dashed = [p for p in polylines if p.get("stroke-dasharray")]
    assert len(dashed) == 1
    texts = [t.text for t in root.findall(".//{http://www.w3.org/2000/svg}text")]
    assert "alpha" in texts and "x^2" in texts


def test_svg_rejects_nonpositive(tmp_path):
    with pytest.raises(ValueError):
        emit_svg([("s", [(0.0, 1.0)])], [], str(tmp_path / "bad.svg"))


def test_series_from_rows_grouping():
    cfg = build_config("dt-sweep", FAST_DT)
    rows = run_dt_sweep(cfg)
    series = series_from_rows(rows, "observable_error", "dt")
    assert [label for label, _ in series] == ["observable_error p=1", "observable_error p=2"]
    assert all(len(pts) == 2 for _, pts in series)


def test_cli_dt_sweep_writes_artifacts(tmp_path, capsys):
    config = tmp_path / "run.cfg"
    config.write_text(
        "N = 16\nh = 1/8\ndt = 1/4, 1/8\norders = 1, 2\nt_final = 1/2\n", encoding="utf-8"
    )
    out = tmp_path / "out"
    code = main(["dt-sweep", "--config", str(config), "--out", str(out)])
    assert code == 0
    assert (out / "dt_sweep.csv").exists()
    assert (out / "dt_sweep_observable_error.svg").exists()
    assert (out / "dt_sweep_unitary_error.svg").exists()
    printed = capsys.readouterr().out
    assert "slope" in printed


def test_cli_config_error_exit_code(tmp_path):
    config = tmp_path / "bad.cfg"
    config.write_text("dt = 0.3\n", encoding="utf-8")
    assert main(["dt-sweep", "--config", str(config), "--out", str(tmp_path / "o")]) == 2
    assert main(["h-sweep", "--config", str(tmp_path / "missing.cfg"), "--out", "o"]) == 2


def test_cli_verify_symbolic(tmp_path, capsys):
    config = tmp_path / "v.cfg"
    config.write_text("trials = 25\nseed = 42\n", encoding="utf-8")
    out = tmp_path / "out"
    assert main(["verify-symbolic", "--config", str(config), "--out", str(out)]) == 0
    assert (out / "verify_symbolic.csv").exists()
    assert "violations 0" in capsys.readouterr().out


def test_cli_beta(tmp_path, capsys):
    config = tmp_path / "b.cfg"
    config.write_text("h = 1/8, 1/16\nN = 16\n", encoding="utf-8")
    out = tmp_path / "out"
    assert main(["beta", "--config", str(config), "--out", str(out)]) == 0
    assert (out / "beta.csv").exists()
    assert "ratio" in capsys.readouterr().out


def test_cli_convergence_failure_exit_code(tmp_path, monkeypatch):
    from semitrotter import experiments as exp_mod
    from semitrotter.linalg import ConvergenceError

    def boom(cfg):
        raise ConvergenceError("stalled", 20000)

    monkeypatch.setitem(exp_mod.RUNNERS, "beta", boom)
    assert main(["beta", "--out", str(tmp_path)]) == 3


def test_cli_requires_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
