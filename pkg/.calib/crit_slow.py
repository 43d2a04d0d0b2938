import json, math, time
import numpy as np
from sphlb import sht, model, optim, pma

plan = sht.build_plan(127)

def run(tag, params, c0, method, **kw):
    cfg = optim.OptimizerConfig(method=method, tau=1e-6, **kw)
    t0 = time.time()
    res = optim.minimize(c0, params, cfg, plan)
    print(json.dumps(dict(tag=tag, method=method, conv=bool(res.converged),
                          iters=res.iterations, E=res.energy,
                          secs=round(time.time()-t0,1))), flush=True)

# criterion 2 remainder: anesterov (new scheme), acg, agd on the stripe
params2 = model.ModelParams(1.0, -0.8, 0.0, math.sqrt(3660))
L60 = pma.preset_field("L60")[0]
run("c2", params2, L60, "anesterov", alpha0=0.5, alpha_min=1e-8, alpha_max=45.0, n_tol=20000)
run("c2", params2, L60, "acg", alpha0=0.8, alpha_min=1e-8, alpha_max=10.0, n_tol=200000)
run("c2", params2, L60, "agd", alpha0=0.8, alpha_min=1e-8, alpha_max=45.0, n_tol=200000)

# criterion 1 marathons: agd, acg on seed 6
params1 = model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240))
c6 = pma.preset_field("S15", seed=6)[0]
run("c1/s6", params1, c6, "agd", alpha0=0.002, alpha_min=1e-5, alpha_max=5.0, n_tol=200000)
run("c1/s6", params1, c6, "acg", alpha0=0.002, alpha_min=1e-5, alpha_max=5.0, n_tol=200000)
