import numpy as np, math, time, json
from sphlb import sht, model, optim, pma

# variant a: accept always, reset momentum schedule when the dissipation
# test fails; variant b: keep the iterate on failure (no momentum reset)
def patched_step(variant):
    def step(drv, n, bd, gE, gF, state):
        cfg = drv.cfg
        w = drv.momentum()
        psi = drv.extrapolate(w)
        if w == 0.0:
            e_psi, gf_psi = bd.total, gF
        else:
            e_psi, gf_psi = drv.psi_eval(psi)
        alpha0 = cfg.alpha0 if n == 0 else optim._bb_from_history(drv, gE)
        prox = lambda p_, a_: optim.prox_step_sis(p_, gf_psi, a_, drv.diag)
        alpha, z, e_z, backtracks = optim.step_size_search_prox(
            psi, e_psi, prox, drv.energy, cfg, alpha0)
        diff = sht.SpectralField(drv.x.bandlimit, z.coeffs - drv.x.coeffs)
        ok = bd.total - e_z >= cfg.eta * sht.inner(diff, diff) or alpha < cfg.alpha_min
        if variant == "a":
            if not ok:
                drv.reset_momentum()
            drv.x_prev, drv.x = drv.x, z
        else:
            if ok:
                drv.x_prev, drv.x = drv.x, z
            else:
                drv.x_prev = drv.x.copy()
                drv.pending_eval = (bd, gE, gF)
        drv.g_prev = gE
        return alpha, False, backtracks
    return step

plan = sht.build_plan(127)
cases = {
    "stripe": (model.ModelParams(1.0, -0.8, 0.0, math.sqrt(3660)), pma.preset_field("L60")[0],
               dict(alpha0=0.5, alpha_min=1e-8, alpha_max=45.0)),
    "spot":   (model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240)), pma.preset_field("S15", seed=6)[0],
               dict(alpha0=0.02, alpha_min=1e-5, alpha_max=5.0)),
}
for variant in ("a", "b"):
    optim._STEPPERS["anesterov"] = patched_step(variant)
    for case, (params, c0, kw) in cases.items():
        cfg = optim.OptimizerConfig(method="anesterov", tau=1e-6, n_tol=4000, **kw)
        t0 = time.time()
        res = optim.minimize(c0, params, cfg, plan)
        print(json.dumps(dict(variant=variant, case=case, conv=bool(res.converged),
                              iters=res.iterations, E=round(res.energy, 10),
                              secs=round(time.time()-t0, 1))), flush=True)
