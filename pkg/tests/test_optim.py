import math

import numpy as np
import pytest

from sphlb import model, optim, sht
from conftest import random_spectral


def _field_from(vals):
    c = sht.zero_field(3)
    for (l, m), v in vals.items():
        c.coeffs[l, m] = v
    return c


def test_bb_step_identity_direction():
    d = _field_from({(1, 0): 2.0, (2, 1): 1.0 + 1.0j})
    assert abs(optim.bb_step(d, d, "first") - 1.0) < 1e-15
    assert abs(optim.bb_step(d, d, "second") - 1.0) < 1e-15


def test_bb_step_scaled_direction():
    d = _field_from({(1, 0): 1.0, (3, 2): 0.5j})
    e = sht.SpectralField(3, 2.0 * d.coeffs)
    assert abs(optim.bb_step(d, e, "first") - 0.5) < 1e-15


def test_bb_step_quadratic_energy():
    # E = ||x||^2 / 2 has identity Hessian: e = d for any pair of iterates
    rng = np.random.default_rng(0)
    x0 = random_spectral(3, rng)
    x1 = random_spectral(3, rng)
    d = sht.SpectralField(3, x1.coeffs - x0.coeffs)
    e = sht.SpectralField(3, x1.coeffs - x0.coeffs)  # grad x = x
    assert abs(optim.bb_step(d, e, "first") - 1.0) < 1e-14
    assert abs(optim.bb_step(d, e, "second") - 1.0) < 1e-14


def test_bb_step_zero_denominator_signals_fallback():
    d = _field_from({(1, 0): 1.0})
    z = sht.zero_field(3)
    assert math.isnan(optim.bb_step(d, z, "first"))   # <d, e> = 0
    assert math.isnan(optim.bb_step(d, z, "second"))  # <e, e> = 0
    with pytest.raises(ValueError):
        optim.bb_step(d, d, "third")


CFG = dict(alpha0=0.5, alpha_min=1e-4, alpha_max=2.0, tau=1e-8, n_tol=100)


def _quad_energy(c):
    return 0.5 * sht.inner(c, c)


def test_line_search_accepts_exact_newton_step():
    cfg = optim.OptimizerConfig(method="agd", **CFG)
    rng = np.random.default_rng(1)
    x = random_spectral(3, rng)
    p = sht.SpectralField(3, -x.coeffs)  # -grad of ||x||^2/2
    res = optim.line_search_descent(x, _quad_energy(x), p, _quad_energy, cfg, 1.0)
    assert res.backtracks == 0
    assert res.alpha == 1.0
    assert res.energy == 0.0


def test_line_search_backtracks_with_golden_factor():
    # scalar double well (u^2-1)^2 on one coefficient: big first step uphill
    cfg = optim.OptimizerConfig(method="agd", **CFG)

    def well(c):
        u = c.coeffs[1, 0].real
        return (u * u - 1.0) ** 2

    x = _field_from({(1, 0): 0.9})
    p = _field_from({(1, 0): 1.0})
    res = optim.line_search_descent(x, well(x), p, well, cfg, 1.0)
    assert res.backtracks >= 1
    golden = (math.sqrt(5.0) - 1.0) / 2.0
    assert abs(res.alpha - golden ** res.backtracks) < 1e-12
    assert res.energy <= well(x)


def test_line_search_clamps_to_alpha_max():
    cfg = optim.OptimizerConfig(method="agd", **CFG)
    rng = np.random.default_rng(2)
    x = random_spectral(3, rng)
    p = sht.SpectralField(3, -x.coeffs)
    res = optim.line_search_descent(x, _quad_energy(x), p, _quad_energy, cfg, 50.0)
    assert res.alpha <= cfg.alpha_max


def test_line_search_breaks_at_alpha_min():
    cfg = optim.OptimizerConfig(method="agd", **CFG)
    x = _field_from({(1, 0): 1.0})
    p = _field_from({(1, 0): 1.0})  # uphill direction for ||x||^2/2
    res = optim.line_search_descent(x, _quad_energy(x), p, _quad_energy, cfg, 1.0)
    assert res.alpha == cfg.alpha_min


def _diag_for(params, n):
    return model.quadratic_diagonal(params, n)


def test_prox_sis_zero_alpha_is_identity():
    params = model.ModelParams(1.0, -0.5, 0.3, 2.0)
    rng = np.random.default_rng(3)
    psi = model.project_mass(random_spectral(5, rng))
    gf = random_spectral(5, rng)
    z = optim.prox_step_sis(psi, gf, 0.0, _diag_for(params, 5))
    assert np.array_equal(z.coeffs, psi.coeffs)


def test_prox_sis_resonant_mode_is_explicit_step():
    # operator factor ~0 at l0: the implicit division is a no-op there
    params = model.ModelParams(1.0, -0.5, 0.0, math.sqrt(12.0))
    psi = _field_from({(3, 1): 1.0 + 0.5j})
    gf = _field_from({(3, 1): 0.2})
    z = optim.prox_step_sis(psi, gf, 0.7, _diag_for(params, 3))
    want = (1.0 + 0.5j) - 0.7 * 0.2
    assert abs(z.coeffs[3, 1] - want) < 1e-14


def test_prox_sis_residual():
    params = model.ModelParams(1.0, -0.5, 0.3, 2.0)
    rng = np.random.default_rng(4)
    psi = model.project_mass(random_spectral(8, rng, scale=0.5))
    gf = random_spectral(8, rng, scale=0.5)
    diag = _diag_for(params, 8)
    alpha = 0.37
    z = optim.prox_step_sis(psi, gf, alpha, diag)
    gfz = gf.coeffs.copy()
    gfz[0, 0] = 0.0
    res = alpha * (diag[:, None] * z.coeffs + gfz) + (z.coeffs - psi.coeffs)
    res[0, 0] = 0.0
    assert np.abs(res).max() < 1e-12
    assert z.coeffs[0, 0] == 0.0


def _quartic_cfg(**kw):
    base = dict(method="aa-bpg-4", alpha0=0.5, alpha_min=1e-4, alpha_max=2.0,
                a=0.05, b=1.3, tau=1e-8, n_tol=10)
    base.update(kw)
    return optim.OptimizerConfig(**base)


def test_prox_quartic_zero_alpha_identity():
    cfg = _quartic_cfg()
    params = model.ModelParams(1.0, -0.5, 0.3, 2.0)
    rng = np.random.default_rng(5)
    psi = model.project_mass(random_spectral(6, rng))
    gf = random_spectral(6, rng)
    z = optim.prox_step_quartic(psi, gf, 0.0, _diag_for(params, 6), cfg)
    assert np.abs(z.coeffs - psi.coeffs).max() < 1e-12


def test_prox_quartic_zero_rhs():
    cfg = _quartic_cfg()
    params = model.ModelParams(1.0, -0.5, 0.3, 2.0)
    psi = sht.zero_field(6)
    gf = sht.zero_field(6)
    z = optim.prox_step_quartic(psi, gf, 0.5, _diag_for(params, 6), cfg)
    assert np.all(z.coeffs == 0.0)


def _bisect_radius(rhs_sq_w, alpha_diag, a, b):
    def g(r):
        den = alpha_diag + a * r + b
        return float((rhs_sq_w / (den * den)).sum()) - r
    lo, hi = 0.0, 1.0
    while g(hi) > 0.0:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_quartic_newton_matches_bisection_and_residual():
    params = model.ModelParams(1.0, -0.5, 0.3, 2.0)
    diag = _diag_for(params, 8)
    cfg = _quartic_cfg()
    rng = np.random.default_rng(6)
    w = np.full(9, 2.0)
    w[0] = 1.0
    for trial in range(50):
        psi = model.project_mass(random_spectral(8, rng, scale=1.5))
        gf = random_spectral(8, rng, scale=1.5)
        alpha = float(rng.uniform(0.01, 2.0))
        z = optim.prox_step_quartic(psi, gf, alpha, diag, cfg)
        # scalar root against the bisection oracle
        gfz = gf.coeffs.copy()
        gfz[0, 0] = 0.0
        nsq = sht.inner(psi, psi)
        rhs = (cfg.a * nsq + cfg.b) * psi.coeffs - alpha * gfz
        rhs[0, 0] = 0.0
        rhs_sq_w = ((rhs.real ** 2 + rhs.imag ** 2) * w[None, :]).sum(axis=1)
        r_newton = sht.inner(z, z)
        r_bisect = _bisect_radius(rhs_sq_w, alpha * diag, cfg.a, cfg.b)
        assert abs(r_newton - r_bisect) < 1e-12 * (1.0 + r_bisect)
        # defining-equation residual
        nz = sht.inner(z, z)
        res = (alpha * diag[:, None] * z.coeffs + alpha * gfz
               + (cfg.a * nz + cfg.b) * z.coeffs
               - (cfg.a * nsq + cfg.b) * psi.coeffs)
        res[0, 0] = 0.0
        assert np.abs(res).max() < 1e-10


def test_step_search_accepts_stationary_point():
    cfg = _quartic_cfg()
    psi = _field_from({(2, 0): 1.0})

    def prox(p, a):
        return p.copy()

    alpha, z, e_z, bt = optim.step_size_search_prox(
        psi, 1.0, prox, lambda c: 1.0, cfg, 0.5)
    assert bt == 0
    assert np.array_equal(z.coeffs, psi.coeffs)


def test_step_search_shrinks_then_accepts():
    cfg = _quartic_cfg()
    psi = _field_from({(2, 0): 1.0})

    def prox(p, a):
        out = p.copy()
        out.coeffs[2, 0] = 1.0 + a  # farther for larger alpha
        return out

    def energy(c):
        u = c.coeffs[2, 0].real
        return (u - 1.0) ** 2  # psi is the minimizer: any move increases

    alpha, z, e_z, bt = optim.step_size_search_prox(
        psi, energy(psi), prox, energy, cfg, 1.0)
    assert bt >= 1
    assert alpha == cfg.alpha_min  # exits by the floor branch


def test_fixed_step_methods_require_alpha():
    with pytest.raises(ValueError):
        optim.OptimizerConfig(method="sis")
    with pytest.raises(ValueError):
        optim.OptimizerConfig(method="nesterov")


def test_config_validation():
    with pytest.raises(ValueError):
        optim.OptimizerConfig(method="unknown")
    with pytest.raises(ValueError):
        optim.OptimizerConfig(alpha_min=0.5, alpha0=0.1)
    with pytest.raises(ValueError):
        optim.OptimizerConfig(method="aa-bpg-4", a=-1.0)
    with pytest.raises(ValueError):
        optim.OptimizerConfig(eta=0.0)


@pytest.fixture(scope="module")
def convex_setup():
    plan = sht.build_plan(15)
    params = model.ModelParams(1.0, 0.5, 0.0, 3.0)
    rng = np.random.default_rng(7)
    c0 = model.project_mass(random_spectral(15, rng, scale=0.1))
    return plan, params, c0


def test_stationary_start_stops_immediately(convex_setup):
    plan, params, _ = convex_setup
    cfg = optim.OptimizerConfig(method="agd", alpha0=0.1, alpha_min=1e-6,
                                alpha_max=1.0, tau=1e-6, n_tol=10)
    res = optim.minimize(sht.zero_field(15), params, cfg, plan)
    assert res.converged and res.iterations == 0


def test_huge_tolerance_stops_immediately(convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="aa-bpg-2", alpha0=0.1, alpha_min=1e-6,
                                alpha_max=1.0, tau=1e3, n_tol=10)
    res = optim.minimize(c0, params, cfg, plan)
    assert res.converged and res.iterations == 0


@pytest.mark.parametrize("method,fixed", [
    ("sis", 0.5), ("asis", None), ("agd", None), ("acg", None),
    ("nesterov", 0.5), ("anesterov", None), ("aa-bpg-2", None), ("aa-bpg-4", None)])
def test_convex_case_reaches_zero(convex_setup, method, fixed):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method=method, alpha0=0.5, alpha_min=1e-6,
                                alpha_max=10.0, tau=1e-9, n_tol=5000, alpha=fixed)
    res = optim.minimize(c0, params, cfg, plan, instrument=True)
    assert res.converged
    l2, _ = sht.norms(res.field)
    assert l2 < 1e-7
    assert res.instrumentation["mass_max"] == 0.0


def test_agd_geometric_decay_on_quadratic(convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="agd", alpha0=0.5, alpha_min=1e-6,
                                alpha_max=10.0, tau=1e-10, n_tol=5000)
    res = optim.minimize(c0, params, cfg, plan)
    sup = np.array(res.trace.grad_sup)
    assert res.converged
    assert sup[-1] < 1e-6 * sup[0]
    assert np.all(np.diff(np.array(res.trace.energy)) <= 1e-13)


def test_nesterov_with_zero_momentum_equals_sis(convex_setup):
    plan, params, c0 = convex_setup
    kw = dict(alpha0=0.5, alpha_min=1e-6, alpha_max=10.0, tau=1e-8,
              n_tol=300, alpha=0.4)
    r_nes = optim.minimize(c0, params, optim.OptimizerConfig(
        method="nesterov", w_bar=0.0, **kw), plan)
    r_sis = optim.minimize(c0, params, optim.OptimizerConfig(
        method="sis", **kw), plan)
    assert r_nes.iterations == r_sis.iterations
    assert r_nes.trace.energy == r_sis.trace.energy
    assert np.array_equal(r_nes.field.coeffs, r_sis.field.coeffs)


def test_acg_first_direction_is_steepest_descent(convex_setup):
    plan, params, c0 = convex_setup
    # one ACG step with fixed alpha0 equals one AGD step
    kw = dict(alpha0=0.2, alpha_min=1e-6, alpha_max=10.0, tau=1e-12, n_tol=1)
    r_acg = optim.minimize(c0, params, optim.OptimizerConfig(method="acg", **kw), plan)
    r_agd = optim.minimize(c0, params, optim.OptimizerConfig(method="agd", **kw), plan)
    assert np.array_equal(r_acg.field.coeffs, r_agd.field.coeffs)


def test_acg_direction_bound_reset(convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="acg", alpha0=0.5, alpha_min=1e-6,
                                alpha_max=10.0, tau=1e-9, n_tol=2000,
                                p_bound=1e-9)
    res = optim.minimize(c0, params, cfg, plan)
    assert res.converged
    assert res.restarts > 0  # every direction trips the bound


def test_nonconvergence_flag(convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="sis", alpha=0.01, alpha0=0.1,
                                alpha_min=1e-6, alpha_max=1.0, tau=1e-14, n_tol=3)
    res = optim.minimize(c0, params, cfg, plan)
    assert not res.converged
    assert res.iterations == 3
    assert len(res.trace.n) == 4


def test_trace_columns_aligned(convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="aa-bpg-4", alpha0=0.5, alpha_min=1e-6,
                                alpha_max=10.0, tau=1e-9, n_tol=500)
    res = optim.minimize(c0, params, cfg, plan)
    tr = res.trace
    assert len(tr.n) == len(tr.energy) == len(tr.alpha) == len(tr.restart)
    assert tr.n == sorted(tr.n)


def test_trace_csv_format(tmp_path, convex_setup):
    plan, params, c0 = convex_setup
    cfg = optim.OptimizerConfig(method="asis", alpha0=0.5, alpha_min=1e-6,
                                alpha_max=10.0, tau=1e-9, n_tol=500)
    res = optim.minimize(c0, params, cfg, plan)
    path = tmp_path / "trace.csv"
    res.trace.write_csv(path)
    lines = path.read_text().splitlines()
    assert lines[0] == "iter,seconds,energy,grad_sup,alpha,restart,backtracks"
    assert len(lines) == len(res.trace.n) + 1
    first = lines[1].split(",")
    assert int(first[0]) == 0
    # >= 12 significant digits on the energy column
    mantissa = first[2].split("e")[0].replace("-", "").replace(".", "")
    assert len(mantissa) >= 12
