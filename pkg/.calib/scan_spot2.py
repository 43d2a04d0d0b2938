import numpy as np, math, time, json
from sphlb import sht, model, optim, pma, diagnostics

plan = sht.build_plan(127)
params = model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240))

def s15_sine(seed):
    rng = np.random.default_rng(seed)
    c = sht.zero_field(15)
    for m in (15, 10, 5):
        a = 1.0 - rng.uniform()
        c.coeffs[15, m] = (-1.0)**m * 0.5j * a
    l2, _ = sht.norms(c); c.coeffs /= l2
    return c

for seed in range(8):
    c0 = s15_sine(seed)
    for method, fixed in (("aa-bpg-2", None), ("aa-bpg-4", None), ("nesterov", 0.8), ("sis", 0.6)):
        cfg = optim.OptimizerConfig(method=method, alpha0=0.02, alpha_min=0.01,
                                    alpha_max=5.0, tau=1e-6, n_tol=3000, alpha=fixed,
                                    a=0.01, b=1.0)
        t0 = time.time()
        res = optim.minimize(c0, params, cfg, plan)
        v = sht.synthesize(res.field, plan)
        ns = diagnostics.count_spots(v.values)
        print(json.dumps(dict(seed=seed, method=method, conv=res.converged,
                              iters=res.iterations, E=round(res.energy, 10),
                              spots=ns, secs=round(time.time()-t0,1))), flush=True)
