import json, math, time
import numpy as np
from sphlb import sht, model, optim, pma, diagnostics

plan = sht.build_plan(127)
params = model.ModelParams(1.0, -1.0, 0.8, math.sqrt(240))
cfg = optim.OptimizerConfig(method="aa-bpg-2", alpha0=0.02, alpha_min=0.01,
                            alpha_max=5.0, tau=1e-6, n_tol=3000)
golden = []
for seed in range(40):
    c0, _ = pma.preset_field("S15", seed=seed)
    res = optim.minimize(c0, params, cfg, plan)
    ok = abs(res.energy - (-4.2399690344)) < 1e-6 and res.converged
    if ok:
        golden.append(seed)
    print(json.dumps(dict(seed=seed, E=round(res.energy, 10), iters=res.iterations,
                          conv=res.converged, golden=bool(ok))), flush=True)
print("GOLDEN SEEDS:", golden, flush=True)
json.dump(golden, open(".calib/golden_seeds.json", "w"))
