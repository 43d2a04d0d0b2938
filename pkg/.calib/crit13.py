import json, math, time
import numpy as np
from sphlb import sht, model, optim, pma, diagnostics

plan = sht.build_plan(127)

def run(tag, params, c0, method, n_tol=20000, **kw):
    cfg = optim.OptimizerConfig(method=method, tau=1e-6, n_tol=n_tol, **kw)
    t0 = time.time()
    res = optim.minimize(c0, params, cfg, plan)
    print(json.dumps(dict(tag=tag, method=method, conv=bool(res.converged),
                          iters=res.iterations, E=res.energy,
                          secs=round(time.time()-t0,1))), flush=True)

# criterion 1 fast methods on golden seeds
params1 = model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240))
for seed in (6, 9, 17):
    c0, _ = pma.preset_field("S15", seed=seed)
    run(f"c1/s{seed}", params1, c0, "aa-bpg-2", alpha0=0.02, alpha_min=0.01, alpha_max=5.0)
    run(f"c1/s{seed}", params1, c0, "aa-bpg-4", alpha0=0.02, alpha_min=0.01, alpha_max=5.0, a=0.01, b=1.0)
    run(f"c1/s{seed}", params1, c0, "sis", alpha=0.6, alpha0=0.6, alpha_min=0.01, alpha_max=5.0)
    run(f"c1/s{seed}", params1, c0, "asis", alpha0=0.02, alpha_min=0.01, alpha_max=20.0)
    run(f"c1/s{seed}", params1, c0, "nesterov", alpha=0.8, alpha0=0.8, alpha_min=0.01, alpha_max=5.0)

# criterion 3: Table-5 rows (spot, aa-bpg-2) on the same seeds
for eps, lam, target in ((-1.0, 1.0, -5.0930540417), (-0.75, 1.0, -3.2636101949)):
    p = model.ModelParams(1.0, eps, lam, math.sqrt(240))
    for seed in (6, 9, 17):
        c0, _ = pma.preset_field("S15", seed=seed)
        run(f"c3/eps{eps}/lam{lam}/s{seed}", p, c0, "aa-bpg-2",
            alpha0=0.02, alpha_min=0.01, alpha_max=5.0)

# criterion 3: Table-7 rows (stripe, aa-bpg-2, deterministic L60)
for eps, lam, target in ((-0.9, 0.0, -2.8647889426), (-1.0, 0.01, -3.5375809017)):
    p = model.ModelParams(1.0, eps, lam, math.sqrt(3660))
    c0, _ = pma.preset_field("L60")
    run(f"c7/eps{eps}/lam{lam}", p, c0, "aa-bpg-2",
        alpha0=0.5, alpha_min=0.01, alpha_max=5.0)
