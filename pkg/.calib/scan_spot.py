import numpy as np, math, time, json, sys
from sphlb import sht, model, optim, pma, diagnostics

plan = sht.build_plan(127)
params = model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240))
out = []
for seed in range(6):
    c0, R = pma.preset_field("S15", seed=seed)
    for method, fixed in (("sis", 0.6), ("nesterov", 0.8), ("asis", None), ("aa-bpg-4", None)):
        amax = 20.0 if method == "asis" else 5.0
        cfg = optim.OptimizerConfig(method=method, alpha0=0.02, alpha_min=0.01,
                                    alpha_max=amax, tau=1e-6, n_tol=6000, alpha=fixed,
                                    a=0.01, b=1.0)
        t0 = time.time()
        res = optim.minimize(c0, params, cfg, plan)
        v = sht.synthesize(res.field, plan)
        ns = diagnostics.count_spots(v.values)
        rec = dict(seed=seed, method=method, conv=res.converged, iters=res.iterations,
                   E=res.energy, spots=ns, secs=round(time.time()-t0, 1))
        out.append(rec)
        print(json.dumps(rec), flush=True)
json.dump(out, open(".calib/scan_spot.json", "w"), indent=1)
