from sphlb import cli, sht
plan63 = sht.build_plan(63)
cfg = cli.RunConfig(bandlimit=63, xi=1.0, epsilon=-0.4, lambda_coeff=0.4,
                    radius="auto", init="preset:S10", seed=100, out_dir=None)
cfg.optimizer = dict(method="aa-bpg-2", alpha0=0.02, alpha_min=0.01,
                     alpha_max=5.0, tau=1e-6, n_tol=4000)
report = cli.success_rate_experiment(cfg, trials=20, expectation=32,
                                     kind="spots", plan=plan63)
for case, rec in report.items():
    fails = [r for r in rec["rows"] if not r["success"]]
    print(case, f"rate={rec['rate']:.2f}", flush=True)
    for row in fails[:4]:
        print("   fail:", {k: (round(v,4) if isinstance(v,float) else v) for k,v in row.items()}, flush=True)

cfg3 = cli.RunConfig(bandlimit=63, xi=1.0, epsilon=-0.2, lambda_coeff=0.0,
                     radius="auto", init="preset:L15", seed=100, out_dir=None)
cfg3.optimizer = dict(cfg.optimizer)
rep3 = cli.success_rate_experiment(cfg3, trials=5, expectation=16,
                                   kind="stripes", plan=plan63,
                                   cases=("pma-init/pma-radius",))
print("L15 16-stripe:", rep3["pma-init/pma-radius"]["rate"], flush=True)
