import json, math, time
import numpy as np
from sphlb import sht, model, optim, pma, diagnostics

plan = sht.build_plan(127)
params = model.ModelParams(1.0, -0.8, 0.0, math.sqrt(3660))
c0, _ = pma.preset_field("L60")

# per-method knobs for the stripe experiment
METHODS = [
    ("aa-bpg-2",  dict(alpha0=0.5, alpha_min=0.01, alpha_max=45.0)),
    ("aa-bpg-4",  dict(alpha0=0.5, alpha_min=0.01, alpha_max=45.0, a=0.001, b=1.0)),
    ("sis",       dict(alpha=0.8, alpha0=0.8, alpha_min=0.2, alpha_max=350.0)),
    ("asis",      dict(alpha0=0.8, alpha_min=0.2, alpha_max=350.0)),
    ("nesterov",  dict(alpha=1.5, alpha0=0.5, alpha_min=1e-8, alpha_max=45.0)),
    ("anesterov", dict(alpha0=0.5, alpha_min=1e-8, alpha_max=45.0)),
    ("acg",       dict(alpha0=0.8, alpha_min=1e-8, alpha_max=10.0)),
    ("agd",       dict(alpha0=0.8, alpha_min=1e-8, alpha_max=45.0)),
]
for method, kw in METHODS:
    cfg = optim.OptimizerConfig(method=method, tau=1e-6, n_tol=20000, **kw)
    t0 = time.time()
    res = optim.minimize(c0, params, cfg, plan)
    v = sht.synthesize(res.field, plan)
    print(json.dumps(dict(method=method, conv=bool(res.converged), iters=res.iterations,
                          E=res.energy, stripes=diagnostics.count_stripes(v.values),
                          secs=round(time.time()-t0,1))), flush=True)
