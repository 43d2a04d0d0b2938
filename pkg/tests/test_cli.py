import math
import os

import numpy as np
import pytest

from sphlb import cli, diagnostics, model, optim, pma, sht


CONVEX = ["--bandlimit", "15", "--epsilon", "0.5", "--lambda", "0",
          "--radius", "3.0", "--init", "random", "--seed", "1",
          "--method", "aa-bpg-2", "--alpha0", "0.5", "--alpha_min", "1e-6",
          "--alpha_max", "10", "--tau", "1e-8", "--n_tol", "500"]


def _convex_cfg(tmp_path=None, **extra):
    overrides = cli._split_overrides(CONVEX)
    cfg = cli.parse_config(None, overrides)
    if tmp_path is not None:
        cfg.out_dir = str(tmp_path)
    for k, v in extra.items():
        setattr(cfg, k, v)
    return cfg


def test_parse_config_file_and_overrides(tmp_path):
    p = tmp_path / "run.cfg"
    p.write_text("""
# model
bandlimit = 31
epsilon = -0.4        # temperature-like
lambda = 0.4
init = preset:S10
radius = auto
method = aa-bpg-2
sis.alpha = 0.6
nesterov.alpha = 0.8
""")
    cfg = cli.parse_config(str(p), [("bandlimit", "15"), ("seed", "7")])
    assert cfg.bandlimit == 15          # override wins
    assert cfg.seed == 7
    assert cfg.lambda_coeff == 0.4
    assert cfg.optimizer["method"] == "aa-bpg-2"
    assert cfg.method_overrides["sis"]["alpha"] == 0.6
    assert cfg.method_overrides["nesterov"]["alpha"] == 0.8


def test_parse_config_rejects_unknown_keys(tmp_path):
    p = tmp_path / "bad.cfg"
    p.write_text("frobnicate = 1\n")
    with pytest.raises(cli.ConfigError):
        cli.parse_config(str(p))
    p.write_text("sis.frobnicate = 1\n")
    with pytest.raises(cli.ConfigError):
        cli.parse_config(str(p))
    p.write_text("no_equals_here\n")
    with pytest.raises(cli.ConfigError):
        cli.parse_config(str(p))


def test_run_writes_artifacts_and_is_deterministic(tmp_path):
    out1 = tmp_path / "a"
    out2 = tmp_path / "b"
    s1, r1 = cli.run(_convex_cfg(out1, emit_grid=True))
    s2, r2 = cli.run(_convex_cfg(out2, emit_grid=True))
    assert s1.converged
    assert s1.iterations == s2.iterations
    c1 = (out1 / "aa-bpg-2_coeffs.txt").read_text()
    c2 = (out2 / "aa-bpg-2_coeffs.txt").read_text()
    assert c1 == c2
    for suffix in ("trace.csv", "coeffs.txt", "grid.csv", "summary.txt"):
        assert (out1 / f"aa-bpg-2_{suffix}").exists()


def test_summary_energy_matches_fresh_evaluation(tmp_path):
    cfg = _convex_cfg(tmp_path)
    summary, result = cli.run(cfg)
    c = sht.read_coeffs(tmp_path / "aa-bpg-2_coeffs.txt")
    plan = sht.build_plan(cfg.bandlimit)
    params = model.ModelParams(cfg.xi, cfg.epsilon, cfg.lambda_coeff, 3.0)
    fresh = model.energy(c, params, plan).total
    assert abs(fresh - summary.energy) < 1e-12
    assert summary.converged and summary.grad_sup < 1e-8


def test_exit_codes(tmp_path):
    assert cli.main(["run"] + CONVEX) == cli.EXIT_OK
    # nonconvergence
    argv = list(CONVEX)
    argv[argv.index("--n_tol") + 1] = "1"
    argv[argv.index("--tau") + 1] = "1e-14"
    assert cli.main(["run"] + argv) == cli.EXIT_NONCONVERGED
    # invalid configuration
    assert cli.main(["run", "--bogus_key", "1"]) == cli.EXIT_BAD_CONFIG
    assert cli.main(["run", "--init", "preset:NOPE"]) == cli.EXIT_BAD_CONFIG
    # capacity violation is a config error
    assert cli.main(["run", "--bandlimit", "31", "--n_theta", "16",
                     "--n_phi", "32", "--init", "random", "--radius", "2",
                     "--epsilon", "0.5"]) == cli.EXIT_BAD_CONFIG


def test_compare_single_method_matches_run(tmp_path):
    cfg = _convex_cfg()
    s_run, _ = cli.run(cfg)
    summaries = cli.compare_methods(cfg, ["aa-bpg-2"])
    assert len(summaries) == 1
    assert summaries[0].energy == s_run.energy
    assert summaries[0].iterations == s_run.iterations


def test_compare_methods_table(tmp_path):
    cfg = _convex_cfg(tmp_path)
    cfg.method_overrides = {"sis": {"alpha": 0.5}, "nesterov": {"alpha": 0.5}}
    summaries = cli.compare_methods(cfg, ["sis", "nesterov", "aa-bpg-2"])
    table = cli.comparison_table(summaries)
    assert "sis" in table and "nesterov" in table
    assert all(s.converged for s in summaries)
    csv_path = tmp_path / "comparison.csv"
    cli.write_comparison_csv(csv_path, summaries)
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("method,iterations")
    assert len(lines) == 4


def test_grid_csv_round_trip(tmp_path):
    plan = sht.build_plan(15)
    rng = np.random.default_rng(0)
    values = rng.standard_normal((plan.grid.n_theta, plan.grid.n_phi))
    path = tmp_path / "grid.csv"
    cli.write_grid_csv(path, values, plan.grid)
    thetas, phis, back = cli.read_grid_csv(path)
    assert np.array_equal(back, values)
    assert np.array_equal(thetas, plan.grid.thetas)
    assert np.array_equal(phis, plan.grid.phis)


def test_transform_round_trip(tmp_path):
    c = pma.preset_field("S10", seed=2)[0]
    src = tmp_path / "in.txt"
    sht.write_coeffs(src, c)
    grid_path = tmp_path / "f.csv"
    assert cli.main(["transform", "--coeffs", str(src), "--out", str(grid_path),
                     "--bandlimit", "15"]) == cli.EXIT_OK
    back_path = tmp_path / "back.txt"
    assert cli.main(["transform", "--grid-csv", str(grid_path), "--out",
                     str(back_path), "--bandlimit", "15"]) == cli.EXIT_OK
    back = sht.read_coeffs(back_path)
    assert np.abs(back.coeffs[:11, :11] - c.coeffs[:11, :11]).max() < 1e-12


def test_count_subcommand(tmp_path, capsys):
    c = sht.zero_field(15)
    c.coeffs[15, 0] = 1.0
    path = tmp_path / "zonal.txt"
    sht.write_coeffs(path, c)
    assert cli.main(["count", "--kind", "stripes", "--coeffs", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "16"
    with pytest.raises(SystemExit):
        cli.main(["count"])  # missing required --kind
    assert cli.main(["count", "--kind", "spots"]) == cli.EXIT_BAD_CONFIG


def test_init_from_coefficient_file_restarts_quickly(tmp_path):
    cfg = _convex_cfg(tmp_path)
    summary, result = cli.run(cfg)
    coeffs = tmp_path / "aa-bpg-2_coeffs.txt"
    cfg2 = _convex_cfg(None, init=f"file:{coeffs}")
    summary2, _ = cli.run(cfg2)
    assert summary2.converged
    assert summary2.iterations <= 1


def test_success_rate_small(tmp_path):
    # convex problem: every converged trial ends flat (count 0)
    cfg = _convex_cfg(None, init="random")
    cfg.optimizer["n_tol"] = 400
    report = cli.success_rate_experiment(cfg, trials=2, expectation=0,
                                         kind="spots",
                                         cases=("random-init/pma-radius",))
    rec = report["random-init/pma-radius"]
    assert rec["trials"] == 2
    assert rec["successes"] == 2  # flat field counts 0 spots
    text = cli.success_table(report, 0, "spots")
    assert "100.0%" in text


def test_count_features_on_synthetic_spots():
    plan = sht.build_plan(15)
    th = plan.grid.thetas[:, None]
    ph = plan.grid.phis[None, :]
    # two gaussian bumps on opposite sides, one crossing the phi seam
    f = (np.exp(-((th - 1.3) ** 2 + (ph - np.pi) ** 2) * 30.0)
         + np.exp(-((th - 1.8) ** 2 + np.minimum(ph, 2 * np.pi - ph) ** 2 * 1.0) * 30.0))
    assert diagnostics.count_spots(f) == 2
    assert diagnostics.count_features(sht.GridField(f), "spots") == 2
    with pytest.raises(ValueError):
        diagnostics.count_features(sht.GridField(f), "blobs")


def test_flat_field_counts_zero():
    vals = np.full((8, 16), 0.7)
    assert diagnostics.count_spots(vals) == 0
    assert diagnostics.count_stripes(vals) == 0
