"""Command-line interface: configuration, run orchestration, experiment
drivers, and file output.

Subcommands: run, compare, success-rate, count, transform. Configuration is
a flat `key = value` text file with `#` comments; `--key value` command-line
overrides win. Per-method keys use a dotted prefix (`sis.alpha = 0.6`) and
apply in `compare`. Exit codes: 0 converged, 2 nonconverged, 64 invalid
configuration.
"""

import argparse
import os
import sys
from dataclasses import dataclass, field, fields as dc_fields

import numpy as np

from . import diagnostics, model, optim, pma, sht

EXIT_OK = 0
EXIT_NONCONVERGED = 2
EXIT_BAD_CONFIG = 64


class ConfigError(ValueError):
    pass


# -- configuration ----------------------------------------------------------

_OPT_KEYS = {
    "method": str, "alpha0": float, "alpha_min": float, "alpha_max": float,
    "alpha": float, "eta": float, "w_bar": float, "a": float, "b": float,
    "tau": float, "n_tol": int, "p_bound": float, "newton_tol": float,
    "newton_max": int, "bb_variant": str,
}

_TOP_KEYS = {
    "bandlimit": int, "n_theta": int, "n_phi": int,
    "xi": float, "epsilon": float, "lambda": float, "radius": str,
    "init": str, "seed": int, "out_dir": str,
    "emit_trace": bool, "emit_coeffs": bool, "emit_grid": bool,
    "emit_summary": bool, "gradient_variant": str, "count": str,
}


@dataclass
class RunConfig:
    """Everything one solver run needs; exactly one init source."""

    bandlimit: int = 127
    n_theta: int | None = None
    n_phi: int | None = None
    xi: float = 1.0
    epsilon: float = -1.0
    lambda_coeff: float = 0.0
    radius: str = "auto"          # "auto" derives from the init's degree
    init: str = "preset:L60"
    seed: int = 0
    out_dir: str | None = None
    emit_trace: bool = True
    emit_coeffs: bool = True
    emit_grid: bool = False
    emit_summary: bool = True
    gradient_variant: str = "squared"
    count: str | None = None      # "spots" or "stripes" diagnostic on the result
    optimizer: dict = field(default_factory=dict)          # plain optimizer keys
    method_overrides: dict = field(default_factory=dict)   # method -> {key: value}


def _parse_value(key, raw, typ):
    raw = raw.strip()
    if typ is bool:
        if raw.lower() in ("1", "true", "yes", "on"):
            return True
        if raw.lower() in ("0", "false", "no", "off"):
            return False
        raise ConfigError(f"{key}: expected a boolean, got {raw!r}")
    try:
        return typ(raw)
    except ValueError as exc:
        raise ConfigError(f"{key}: {exc}") from None


def parse_config(path=None, overrides=()):
    """Build a RunConfig from an optional file plus `key=value` overrides."""
    pairs = []
    if path is not None:
        with open(path) as fh:
            for lineno, line in enumerate(fh, 1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key = value")
                k, v = line.split("=", 1)
                pairs.append((k.strip(), v.strip()))
    pairs.extend(overrides)

    cfg = RunConfig()
    for key, raw in pairs:
        if "." in key:
            method, sub = key.split(".", 1)
            if method not in optim.METHODS:
                raise ConfigError(f"unknown method prefix {method!r}")
            if sub not in _OPT_KEYS:
                raise ConfigError(f"unknown optimizer key {sub!r}")
            cfg.method_overrides.setdefault(method, {})[sub] = \
                _parse_value(key, raw, _OPT_KEYS[sub])
        elif key in _OPT_KEYS:
            cfg.optimizer[key] = _parse_value(key, raw, _OPT_KEYS[key])
        elif key in _TOP_KEYS:
            attr = "lambda_coeff" if key == "lambda" else key
            value = _parse_value(key, raw, _TOP_KEYS[key])
            setattr(cfg, attr, value)
        else:
            raise ConfigError(f"unknown configuration key {key!r}")
    return cfg


def _build_init(cfg):
    """(field, radius_hint) from the init spec; radius_hint may be None."""
    spec = cfg.init.strip()
    if spec.startswith("preset:"):
        try:
            c, radius = pma.preset_field(spec.split(":", 1)[1], seed=cfg.seed)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        return c, radius
    if spec.startswith("pma:"):
        body = spec.split(":", 1)[1]
        try:
            group_txt, ell_txt = body.split(",")
            group = pma.parse_subgroup(group_txt)
            ell0 = int(ell_txt)
            return (pma.single_operator_field(group, ell0),
                    pma.radius_for_degree(ell0))
        except ValueError as exc:
            raise ConfigError(f"bad pma init {spec!r}: {exc}") from None
    if spec.startswith("file:"):
        path = spec.split(":", 1)[1]
        if not os.path.exists(path):
            raise ConfigError(f"coefficient file not found: {path}")
        return sht.read_coeffs(path), None
    if spec == "random":
        return pma.random_field(cfg.bandlimit, cfg.seed), None
    raise ConfigError(f"cannot parse init {spec!r}")


def _resolve_radius(cfg, radius_hint):
    if cfg.radius == "auto":
        if radius_hint is None:
            raise ConfigError("radius = auto needs a preset or pma init")
        return radius_hint
    if cfg.radius.startswith("random"):
        return pma.random_radius(cfg.seed + 7919)
    try:
        return float(cfg.radius)
    except ValueError:
        raise ConfigError(f"bad radius {cfg.radius!r}") from None


def _model_params(cfg, radius):
    return model.ModelParams(xi=cfg.xi, epsilon=cfg.epsilon,
                             lambda_coeff=cfg.lambda_coeff, radius=radius)


def _optimizer_config(cfg, method=None, extra=None):
    kw = dict(cfg.optimizer)
    if method is not None:
        kw["method"] = method
        kw.update(cfg.method_overrides.get(method, {}))
    if extra:
        kw.update(extra)
    kw.setdefault("method", "aa-bpg-2")
    variant = (model.GradientVariant.SQUARED if cfg.gradient_variant == "squared"
               else model.GradientVariant.LINEAR)
    try:
        return optim.OptimizerConfig(gradient_variant=variant, **kw)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None


def build_plan(cfg):
    try:
        return sht.build_plan(cfg.bandlimit, cfg.n_theta, cfg.n_phi)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


# -- summaries and artifacts -------------------------------------------------

@dataclass
class RunSummary:
    method: str
    iterations: int
    seconds: float
    energy: float
    grad_sup: float
    converged: bool
    restarts: int
    count_kind: str | None = None
    count: int | None = None

    def lines(self):
        out = [f"method = {self.method}",
               f"iterations = {self.iterations}",
               f"seconds = {self.seconds:.3f}",
               f"energy = {self.energy:.14e}",
               f"grad_sup = {self.grad_sup:.6e}",
               f"converged = {str(self.converged).lower()}",
               f"restarts = {self.restarts}"]
        if self.count is not None:
            out.append(f"{self.count_kind} = {self.count}")
        return out


def write_grid_csv(path, values, grid):
    """Header row of longitudes, first column of latitudes (theta, radians)."""
    thetas = grid.thetas
    with open(path, "w") as fh:
        fh.write("theta," + ",".join(f"{p:.17e}" for p in grid.phis) + "\n")
        for j in range(grid.n_theta):
            fh.write(f"{thetas[j]:.17e}," +
                     ",".join(f"{v:.17e}" for v in values[j]) + "\n")


def read_grid_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        phis = np.array([float(x) for x in header[1:]])
        thetas, rows = [], []
        for line in fh:
            parts = line.strip().split(",")
            if len(parts) < 2:
                continue
            thetas.append(float(parts[0]))
            rows.append([float(x) for x in parts[1:]])
    return np.array(thetas), phis, np.array(rows)


def _summarize(result, cfg, plan):
    count_kind = cfg.count
    count = None
    if count_kind:
        values = sht.synthesize(result.field, plan).values
        count = diagnostics.count_features(sht.GridField(values), count_kind)
    return RunSummary(method=result.method, iterations=result.iterations,
                      seconds=result.seconds, energy=result.energy,
                      grad_sup=result.grad_sup, converged=result.converged,
                      restarts=result.restarts,
                      count_kind=count_kind, count=count)


def _emit(result, summary, cfg, plan, tag=""):
    if cfg.out_dir is None:
        return
    os.makedirs(cfg.out_dir, exist_ok=True)
    stem = os.path.join(cfg.out_dir, (tag + "_" if tag else "") + result.method)
    if cfg.emit_trace:
        result.trace.write_csv(stem + "_trace.csv")
    if cfg.emit_coeffs:
        sht.write_coeffs(stem + "_coeffs.txt", result.field)
    if cfg.emit_grid:
        values = sht.synthesize(result.field, plan).values
        write_grid_csv(stem + "_grid.csv", values, plan.grid)
    if cfg.emit_summary:
        with open(stem + "_summary.txt", "w") as fh:
            fh.write("\n".join(summary.lines()) + "\n")


# -- drivers ------------------------------------------------------------------

def run(cfg, plan=None):
    """Single run per the configuration; returns (RunSummary, RunResult)."""
    c0, radius_hint = _build_init(cfg)
    radius = _resolve_radius(cfg, radius_hint)
    params = _model_params(cfg, radius)
    ocfg = _optimizer_config(cfg, method=cfg.optimizer.get("method"))
    if plan is None:
        plan = build_plan(cfg)
    result = optim.minimize(c0, params, ocfg, plan)
    summary = _summarize(result, cfg, plan)
    _emit(result, summary, cfg, plan)
    return summary, result


def compare_methods(cfg, methods, plan=None):
    """Run each method from the identical initial field; per-method failures
    are isolated into the table rather than raised."""
    c0, radius_hint = _build_init(cfg)
    radius = _resolve_radius(cfg, radius_hint)
    params = _model_params(cfg, radius)
    if plan is None:
        plan = build_plan(cfg)
    summaries = []
    for method in methods:
        try:
            ocfg = _optimizer_config(cfg, method=method)
            result = optim.minimize(c0, params, ocfg, plan)
            summary = _summarize(result, cfg, plan)
            _emit(result, summary, cfg, plan)
        except Exception as exc:  # isolate per-method failures
            summary = RunSummary(method=method, iterations=0, seconds=0.0,
                                 energy=float("nan"), grad_sup=float("nan"),
                                 converged=False, restarts=0)
            print(f"[compare] {method} failed: {exc}", file=sys.stderr)
        summaries.append(summary)
    return summaries


def comparison_table(summaries):
    head = f"{'method':>10s} {'iters':>8s} {'seconds':>10s} {'grad_sup':>12s} {'energy':>18s} {'ok':>3s}"
    rows = [head]
    for s in summaries:
        rows.append(f"{s.method:>10s} {s.iterations:>8d} {s.seconds:>10.2f} "
                    f"{s.grad_sup:>12.2e} {s.energy:>18.10f} "
                    f"{'y' if s.converged else 'n':>3s}")
    return "\n".join(rows)


def write_comparison_csv(path, summaries):
    with open(path, "w") as fh:
        fh.write("method,iterations,seconds,grad_sup,energy,converged\n")
        for s in summaries:
            fh.write(f"{s.method},{s.iterations},{s.seconds:.3f},"
                     f"{s.grad_sup:.6e},{s.energy:.14e},{int(s.converged)}\n")


SUCCESS_CASES = ("pma-init/pma-radius", "pma-init/random-radius",
                 "random-init/pma-radius", "random-init/random-radius")


def success_rate_experiment(cfg, trials, expectation, kind="spots", plan=None,
                            cases=SUCCESS_CASES):
    """PMA-vs-random initialization study.

    Four cases crossing {configured init, random field} x {configured radius,
    random radius}; a trial succeeds when the run converges and the feature
    count matches the expectation. Diverged or nonconverged trials count as
    failures.
    """
    if trials < 1:
        raise ConfigError("trials must be >= 1")
    if plan is None:
        plan = build_plan(cfg)
    # the configured (PMA) radius also serves the random-init cases
    _, base_hint = _build_init(cfg)
    base_radius = _resolve_radius(cfg, base_hint)
    report = {}
    for case in cases:
        init_random = case.startswith("random-init")
        radius_random = case.endswith("random-radius")
        successes = 0
        rows = []
        for t in range(trials):
            seed = cfg.seed + 1000 * t
            if init_random:
                c0 = pma.random_field(cfg.bandlimit, seed)
            else:
                c0, _ = _build_init(_clone(cfg, seed=seed))
            if radius_random:
                radius = pma.random_radius(seed + 7919)
            else:
                radius = base_radius
            params = _model_params(cfg, radius)
            ocfg = _optimizer_config(cfg, method=cfg.optimizer.get("method"))
            result = optim.minimize(c0, params, ocfg, plan)
            values = sht.synthesize(result.field, plan).values
            count = diagnostics.count_features(sht.GridField(values), kind)
            ok = bool(result.converged and count == expectation)
            successes += ok
            rows.append(dict(seed=seed, converged=result.converged,
                             energy=result.energy, count=count, success=ok))
        report[case] = dict(trials=trials, successes=successes,
                            rate=successes / trials, rows=rows)
    return report


def _clone(cfg, **changes):
    kw = {f.name: getattr(cfg, f.name) for f in dc_fields(RunConfig)}
    kw.update(changes)
    out = RunConfig(**kw)
    out.optimizer = dict(cfg.optimizer)
    out.method_overrides = {k: dict(v) for k, v in cfg.method_overrides.items()}
    for k, v in changes.items():
        setattr(out, k, v)
    return out


def success_table(report, expectation, kind):
    rows = [f"{'case':>26s} {'trials':>7s} {'success':>8s} {'rate':>7s}   (target: {expectation} {kind})"]
    for case, rec in report.items():
        rows.append(f"{case:>26s} {rec['trials']:>7d} {rec['successes']:>8d} "
                    f"{100.0 * rec['rate']:>6.1f}%")
    return "\n".join(rows)


# -- argument parsing ---------------------------------------------------------

def _split_overrides(extra):
    out = []
    i = 0
    while i < len(extra):
        tok = extra[i]
        if not tok.startswith("--"):
            raise ConfigError(f"expected --key value, got {tok!r}")
        key = tok[2:]
        if "=" in key:
            k, v = key.split("=", 1)
            out.append((k, v))
            i += 1
        else:
            if i + 1 >= len(extra):
                raise ConfigError(f"missing value for --{key}")
            out.append((key, extra[i + 1]))
            i += 2
    return out


def main(argv=None):
    parser = argparse.ArgumentParser(
        prog="sphlb",
        description="Stationary states of the spherical LB free energy")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="single optimization run")
    p_run.add_argument("-c", "--config", default=None)

    p_cmp = sub.add_parser("compare", help="run several methods from one start")
    p_cmp.add_argument("-c", "--config", default=None)
    p_cmp.add_argument("--methods", default=",".join(optim.METHODS))

    p_sr = sub.add_parser("success-rate", help="init/radius success-rate study")
    p_sr.add_argument("-c", "--config", default=None)
    p_sr.add_argument("--trials", type=int, default=20)
    p_sr.add_argument("--expect", type=int, required=True)
    p_sr.add_argument("--kind", choices=("spots", "stripes"), default="spots")

    p_cnt = sub.add_parser("count", help="feature count of a saved field")
    p_cnt.add_argument("--kind", choices=("spots", "stripes"), required=True)
    p_cnt.add_argument("--grid-csv", default=None)
    p_cnt.add_argument("--coeffs", default=None)

    p_tr = sub.add_parser("transform", help="coefficients <-> grid utility")
    p_tr.add_argument("--coeffs", default=None, help="input coefficient file")
    p_tr.add_argument("--grid-csv", default=None, help="input grid file")
    p_tr.add_argument("--out", required=True)
    p_tr.add_argument("--bandlimit", type=int, default=None)
    p_tr.add_argument("--n-theta", type=int, default=None)
    p_tr.add_argument("--n-phi", type=int, default=None)

    args, extra = parser.parse_known_args(argv)
    try:
        return _dispatch(args, extra)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG


def _dispatch(args, extra):
    if args.command == "run":
        cfg = parse_config(args.config, _split_overrides(extra))
        summary, _ = run(cfg)
        print("\n".join(summary.lines()))
        return EXIT_OK if summary.converged else EXIT_NONCONVERGED

    if args.command == "compare":
        cfg = parse_config(args.config, _split_overrides(extra))
        methods = [m.strip() for m in args.methods.split(",") if m.strip()]
        for m in methods:
            if m not in optim.METHODS:
                raise ConfigError(f"unknown method {m!r}")
        summaries = compare_methods(cfg, methods)
        print(comparison_table(summaries))
        if cfg.out_dir is not None:
            os.makedirs(cfg.out_dir, exist_ok=True)
            write_comparison_csv(os.path.join(cfg.out_dir, "comparison.csv"),
                                 summaries)
        return EXIT_OK if all(s.converged for s in summaries) else EXIT_NONCONVERGED

    if args.command == "success-rate":
        cfg = parse_config(args.config, _split_overrides(extra))
        report = success_rate_experiment(cfg, args.trials, args.expect, args.kind)
        print(success_table(report, args.expect, args.kind))
        if cfg.out_dir is not None:
            os.makedirs(cfg.out_dir, exist_ok=True)
            with open(os.path.join(cfg.out_dir, "success_rate.txt"), "w") as fh:
                fh.write(success_table(report, args.expect, args.kind) + "\n")
        return EXIT_OK

    if args.command == "count":
        if (args.grid_csv is None) == (args.coeffs is None):
            raise ConfigError("count needs exactly one of --grid-csv / --coeffs")
        if args.grid_csv:
            _, _, values = read_grid_csv(args.grid_csv)
        else:
            c = sht.read_coeffs(args.coeffs)
            plan = sht.build_plan(c.bandlimit)
            values = sht.synthesize(c, plan).values
        print(diagnostics.count_features(sht.GridField(values), args.kind))
        return EXIT_OK

    if args.command == "transform":
        if (args.grid_csv is None) == (args.coeffs is None):
            raise ConfigError("transform needs exactly one of --grid-csv / --coeffs")
        if args.coeffs:
            c = sht.read_coeffs(args.coeffs)
            plan = sht.build_plan(args.bandlimit or c.bandlimit,
                                  args.n_theta, args.n_phi)
            values = sht.synthesize(c, plan).values
            write_grid_csv(args.out, values, plan.grid)
        else:
            thetas, phis, values = read_grid_csv(args.grid_csv)
            if args.bandlimit is None:
                raise ConfigError("grid -> coefficients needs --bandlimit")
            plan = sht.build_plan(args.bandlimit, len(thetas), len(phis))
            c = sht.analyze(sht.GridField(values), plan)
            sht.write_coeffs(args.out, c)
        return EXIT_OK

    raise ConfigError(f"unknown command {args.command!r}")


if __name__ == "__main__":
    sys.exit(main())
