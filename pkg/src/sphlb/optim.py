"""Minimization methods for the discretized spherical LB energy.

Eight methods share one driver loop: plain and conjugate descent with
backtracking line searches (agd, acg), semi-implicit splitting with fixed or
adapted steps (sis, asis), extrapolated semi-implicit steps with fixed or
adapted steps (nesterov, anesterov), and the accelerated adaptive Bregman
proximal schemes with energy-dissipation restart (aa-bpg-2, aa-bpg-4).

Conventions used throughout:
  - the optimization variable is the m >= 0 coefficient half; the (0,0)
    entry is pinned to zero (mass constraint), and all gradients/directions
    have their (0,0) entry zeroed, which is exactly the Lagrange-multiplier
    correction for that constraint;
  - step sizes are initialized by a Barzilai-Borwein ratio and backtracked
    with shrink factor (sqrt(5)-1)/2 for the first 8 shrinks of a search,
    0.1 afterwards;
  - stopping: sup-norm (max coefficient magnitude) of the projected
    gradient below tau, re-checked from a fresh gradient each iteration.
"""

import dataclasses
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import model, sht
from ._kernels import tune_allocator
from .model import GradientVariant

METHODS = ("sis", "asis", "agd", "acg", "nesterov", "anesterov",
           "aa-bpg-2", "aa-bpg-4")

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OptimizerConfig:
    method: str = "aa-bpg-2"
    alpha0: float = 0.02          # first step / BB fallback
    alpha_min: float = 0.01
    alpha_max: float = 5.0
    alpha: float | None = None    # fixed step (sis, nesterov)
    rho_first: float = _GOLDEN    # shrink factor for the first rho_switch shrinks
    rho_later: float = 0.1
    rho_switch: int = 8
    eta: float = 1e-14            # sufficient-decrease constant
    w_bar: float = 1.0            # momentum cap
    a: float = 0.01               # quartic Bregman generator coefficients
    b: float = 1.0
    tau: float = 1e-6             # gradient sup-norm tolerance
    n_tol: int = 200000
    p_bound: float = 100.0        # conjugate-direction norm bound
    newton_tol: float = 1e-13
    newton_max: int = 60
    gradient_variant: GradientVariant = GradientVariant.SQUARED
    bb_variant: str = "second"

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}; expected one of {METHODS}")
        if not (0.0 < self.alpha_min <= self.alpha0 <= self.alpha_max):
            raise ValueError("need 0 < alpha_min <= alpha0 <= alpha_max")
        for rho in (self.rho_first, self.rho_later):
            if not (0.0 < rho < 1.0):
                raise ValueError("shrink factors must lie in (0, 1)")
        if self.eta <= 0.0:
            raise ValueError("eta must be positive")
        if self.method == "aa-bpg-4" and not (self.a > 0.0 and self.b > 0.0):
            raise ValueError("aa-bpg-4 needs a > 0 and b > 0")
        if self.p_bound <= 0.0:
            raise ValueError("p_bound must be positive")
        if self.bb_variant not in ("first", "second"):
            raise ValueError("bb_variant must be 'first' or 'second'")
        if self.method in ("sis", "nesterov") and self.alpha is None:
            raise ValueError(f"{self.method} needs a fixed step size (alpha)")


@dataclass
class EnergyTrace:
    """Per-iteration record; column lists stay aligned."""

    n: list = field(default_factory=list)
    seconds: list = field(default_factory=list)
    energy: list = field(default_factory=list)
    grad_sup: list = field(default_factory=list)
    alpha: list = field(default_factory=list)
    restart: list = field(default_factory=list)
    backtracks: list = field(default_factory=list)

    def append(self, n, seconds, energy, grad_sup, alpha, restart, backtracks):
        self.n.append(n)
        self.seconds.append(seconds)
        self.energy.append(energy)
        self.grad_sup.append(grad_sup)
        self.alpha.append(alpha)
        self.restart.append(restart)
        self.backtracks.append(backtracks)

    def write_csv(self, path):
        with open(path, "w") as fh:
            fh.write("iter,seconds,energy,grad_sup,alpha,restart,backtracks\n")
            for i in range(len(self.n)):
                fh.write(f"{self.n[i]},{self.seconds[i]:.6f},{self.energy[i]:.14e},"
                         f"{self.grad_sup[i]:.6e},{self.alpha[i]:.8e},"
                         f"{int(self.restart[i])},{self.backtracks[i]}\n")


@dataclass
class RunResult:
    method: str
    field: sht.SpectralField
    trace: EnergyTrace
    converged: bool
    iterations: int
    energy: float
    grad_sup: float
    restarts: int
    seconds: float
    instrumentation: dict | None = None


def bb_step(d, e, which="first"):
    """Barzilai-Borwein ratio from iterate difference d and gradient
    difference e; NaN signals an unusable (zero-denominator) value."""
    if which == "first":
        den = sht.inner(d, e)
        num = sht.inner(d, d)
    elif which == "second":
        den = sht.inner(e, e)
        num = sht.inner(e, d)
    else:
        raise ValueError(f"unknown BB variant {which!r}")
    if den == 0.0:
        return math.nan
    return num / den


def _clamp(alpha, cfg):
    return max(min(alpha, cfg.alpha_max), cfg.alpha_min)


def _rho(k, cfg):
    return cfg.rho_first if k < cfg.rho_switch else cfg.rho_later


def _axpy(x, alpha, p):
    return sht.SpectralField(x.bandlimit, x.coeffs + alpha * p.coeffs)


@dataclass
class LineSearchResult:
    alpha: float
    candidate: sht.SpectralField
    energy: float
    backtracks: int
    payload: object = None


def line_search_descent(x, energy_x, p, energy_fn, cfg, alpha_init,
                        direction_check=None):
    """Backtracking search along p from x.

    Shrinks alpha while the candidate energy exceeds energy_x or
    direction_check reports an uphill next direction; breaks once alpha
    reaches alpha_min, and clamps the output to [alpha_min, alpha_max].
    direction_check(candidate) -> (violated, payload); the payload of the
    accepted candidate is handed back (the conjugate methods reuse the
    gradient computed there).
    """
    alpha = _clamp(alpha_init, cfg)
    backtracks = 0
    while True:
        cand = _axpy(x, alpha, p)
        e_cand = energy_fn(cand)
        violated = e_cand > energy_x
        payload = None
        if direction_check is not None:
            bad_dir, payload = direction_check(cand)
            violated = violated or bad_dir
        if not violated or alpha <= cfg.alpha_min:
            return LineSearchResult(alpha, cand, e_cand, backtracks, payload)
        alpha = alpha * _rho(backtracks, cfg)
        backtracks += 1
        if alpha < cfg.alpha_min:
            alpha = cfg.alpha_min


def prox_step_sis(psi, grad_f_psi, alpha, diag):
    """Semi-implicit step: (alpha*D + I)^-1 (psi - alpha*grad F(psi)), with
    the (0,0) component pinned to zero (constraint multiplier)."""
    gf = grad_f_psi.coeffs.copy()
    gf[0, 0] = 0.0
    z = (psi.coeffs - alpha * gf) / (1.0 + alpha * diag)[:, np.newaxis]
    z[0, 0] = 0.0
    return sht.SpectralField(psi.bandlimit, z)


class NewtonError(RuntimeError):
    pass


def _quartic_radius(rhs_sq_w, alpha_diag, a, b, r0, tol, max_iter):
    """Root of g(r) = sum rhs_sq_w / (alpha*D + a*r + b)^2 - r.

    g is convex and strictly decreasing, so Newton lands left of the root in
    one step and then increases monotonically; bisection is the fallback.
    """

    def g_and_dg(r):
        den = alpha_diag + (a * r + b)
        t = rhs_sq_w / (den * den)
        return float(t.sum()) - r, float(-2.0 * a * (t / den).sum()) - 1.0

    r = max(r0, 0.0)
    for _ in range(max_iter):
        gv, dgv = g_and_dg(r)
        step = gv / dgv
        r_new = max(r - step, 0.0)
        if abs(r_new - r) <= tol * (1.0 + abs(r_new)):
            return r_new
        r = r_new
    # bracket a sign change and bisect
    lo, hi = 0.0, max(r, 1.0)
    for _ in range(200):
        if g_and_dg(hi)[0] < 0.0:
            break
        hi *= 2.0
    else:
        raise NewtonError("could not bracket the quartic proximal root")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g_and_dg(mid)[0] > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol * (1.0 + hi):
            return 0.5 * (lo + hi)
    return 0.5 * (lo + hi)


def prox_step_quartic(psi, grad_f_psi, alpha, diag, cfg):
    """Bregman proximal step for the quartic generator: solves
    z = (alpha*D + (a||z||^2 + b) I)^-1 ((a||psi||^2 + b) psi - alpha*grad F(psi))
    by reducing to a scalar equation for ||z||^2 solved with Newton."""
    a, b = cfg.a, cfg.b
    gf = grad_f_psi.coeffs.copy()
    gf[0, 0] = 0.0
    nsq_psi = sht.inner(psi, psi)
    rhs = (a * nsq_psi + b) * psi.coeffs - alpha * gf
    rhs[0, 0] = 0.0

    w = np.full(psi.bandlimit + 1, 2.0)
    w[0] = 1.0
    rhs_sq_w = ((rhs.real ** 2 + rhs.imag ** 2) * w[np.newaxis, :]).sum(axis=1)
    r = _quartic_radius(rhs_sq_w, alpha * diag, a, b, nsq_psi,
                        cfg.newton_tol, cfg.newton_max)
    z = rhs / (alpha * diag + (a * r + b))[:, np.newaxis]
    z[0, 0] = 0.0
    return sht.SpectralField(psi.bandlimit, z)


def step_size_search_prox(psi, energy_psi, prox_fn, energy_fn, cfg, alpha_init):
    """Adaptive proximal step search: accept z(alpha) once
    E(psi) - E(z) >= eta * ||z - psi||^2 or alpha has fallen below alpha_min;
    output clamped to [alpha_min, alpha_max]."""
    alpha = _clamp(alpha_init, cfg)
    backtracks = 0
    while True:
        z = prox_fn(psi, alpha)
        e_z = energy_fn(z)
        diff = sht.SpectralField(psi.bandlimit, z.coeffs - psi.coeffs)
        if energy_psi - e_z >= cfg.eta * sht.inner(diff, diff) or alpha < cfg.alpha_min:
            break
        alpha = alpha * _rho(backtracks, cfg)
        backtracks += 1
    clamped = _clamp(alpha, cfg)
    if clamped != alpha:
        alpha = clamped
        z = prox_fn(psi, alpha)
        e_z = energy_fn(z)
    return alpha, z, e_z, backtracks


class _Driver:
    """State shared by all method loops."""

    def __init__(self, c0, params, cfg, plan, instrument=False):
        tune_allocator()
        self.params = params
        self.cfg = cfg
        self.plan = plan
        self.work = sht.Workspace(plan)
        n = plan.bandlimit
        x = sht.zero_field(n)
        b = min(c0.bandlimit, n)
        x.coeffs[:b + 1, :b + 1] = c0.coeffs[:b + 1, :b + 1]
        x.coeffs[0, 0] = 0.0
        self.x = x
        self.x_prev = x.copy()
        self.g_prev = None
        self.diag = model.quadratic_diagonal(params, n, cfg.gradient_variant)
        self.trace = EnergyTrace()
        self.t0 = time.monotonic()
        self.restarts = 0
        self.t_momentum = 1.0
        self.pending_eval = None   # (breakdown, gE, gF) at self.x, if already known
        self.instrument = instrument
        self.ins = {"mass_max": 0.0, "prox_residual_max": 0.0,
                    "accepted_increase_max": 0.0} if instrument else None

    # -- shared evaluations ------------------------------------------------

    def eval_x(self):
        if self.pending_eval is not None:
            out = self.pending_eval
            self.pending_eval = None
            return out
        return model.energy_and_gradient(self.x, self.params, self.plan,
                                         self.cfg.gradient_variant, self.work)

    def energy(self, c):
        return model.energy(c, self.params, self.plan, self.work).total

    def full_eval(self, c):
        return model.energy_and_gradient(c, self.params, self.plan,
                                         self.cfg.gradient_variant, self.work)

    def psi_eval(self, psi):
        """(E(psi), grad F(psi)) sharing one synthesis."""
        values = sht.synthesize_values(psi.coeffs, self.plan, self.work)
        bd = model.energy_from_values(psi, values, self.params, self.plan)
        gf = model.poly_gradient_from_values(psi, values, self.params,
                                             self.plan, self.work)
        return bd.total, gf

    def project(self, g):
        g.coeffs[0, 0] = 0.0
        return g

    def bb_alpha(self, d_field, e_field):
        if d_field is None or e_field is None:
            return self.cfg.alpha0
        val = bb_step(d_field, e_field, self.cfg.bb_variant)
        if not math.isfinite(val) or val <= 0.0:
            return self.cfg.alpha0
        return val

    def momentum(self):
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * self.t_momentum ** 2))
        w = min((self.t_momentum - 1.0) / t_next, self.cfg.w_bar)
        self.t_momentum = t_next
        return w

    def reset_momentum(self):
        self.t_momentum = 1.0

    def extrapolate(self, w):
        psi = sht.SpectralField(
            self.x.bandlimit,
            self.x.coeffs + w * (self.x.coeffs - self.x_prev.coeffs))
        psi.coeffs[0, 0] = 0.0
        return psi

    def note_mass(self, c):
        if self.instrument:
            self.ins["mass_max"] = max(self.ins["mass_max"], abs(c.coeffs[0, 0]))

    def note_prox_residual(self, psi, gf_psi, z, alpha, quartic):
        if not self.instrument:
            return
        gf = gf_psi.coeffs.copy()
        gf[0, 0] = 0.0
        if quartic:
            a, b = self.cfg.a, self.cfg.b
            nz = sht.inner(z, z)
            npsi = sht.inner(psi, psi)
            res = (alpha * self.diag[:, np.newaxis] * z.coeffs + alpha * gf
                   + (a * nz + b) * z.coeffs - (a * npsi + b) * psi.coeffs)
        else:
            res = (alpha * (self.diag[:, np.newaxis] * z.coeffs + gf)
                   + z.coeffs - psi.coeffs)
        res[0, 0] = 0.0
        self.ins["prox_residual_max"] = max(self.ins["prox_residual_max"],
                                            float(np.abs(res).max()))


def _finish(drv, converged, n, e_total, sup):
    return RunResult(
        method=drv.cfg.method, field=drv.x, trace=drv.trace,
        converged=converged, iterations=n, energy=e_total, grad_sup=sup,
        restarts=drv.restarts, seconds=time.monotonic() - drv.t0,
        instrumentation=drv.ins)


def minimize(c0, params, cfg, plan, instrument=False):
    """Run the configured method from c0; never raises on nonconvergence
    (the flag in the result reports it)."""
    drv = _Driver(c0, params, cfg, plan, instrument)
    step = _STEPPERS[cfg.method]
    state = {}
    alpha_rec, restart_rec, bt_rec = 0.0, False, 0
    e_prev_accept = math.inf
    for n in range(cfg.n_tol + 1):
        bd, gE, gF = drv.eval_x()
        drv.project(gE)
        drv.project(gF)
        _, sup = sht.norms(gE)
        drv.trace.append(n, time.monotonic() - drv.t0, bd.total, sup,
                         alpha_rec, restart_rec, bt_rec)
        drv.note_mass(drv.x)
        if drv.instrument and not restart_rec:
            inc = bd.total - e_prev_accept
            if inc > 0.0:
                drv.ins["accepted_increase_max"] = max(
                    drv.ins["accepted_increase_max"], inc)
            e_prev_accept = bd.total
        if sup < cfg.tau:
            return _finish(drv, True, n, bd.total, sup)
        if n == cfg.n_tol:
            return _finish(drv, False, n, bd.total, sup)
        alpha_rec, restart_rec, bt_rec = step(drv, n, bd, gE, gF, state)


# -- method steppers -------------------------------------------------------
# Each stepper advances drv.x (and drv.x_prev, momentum, pending_eval) by one
# iteration and returns (alpha, restart_flag, backtracks) for the trace row
# of the next iterate.

def _bb_from_history(drv, gE):
    if drv.g_prev is None:
        return drv.cfg.alpha0
    d = sht.SpectralField(drv.x.bandlimit, drv.x.coeffs - drv.x_prev.coeffs)
    e = sht.SpectralField(drv.x.bandlimit, gE.coeffs - drv.g_prev.coeffs)
    return drv.bb_alpha(d, e)


def _step_agd(drv, n, bd, gE, gF, state):
    p = sht.SpectralField(gE.bandlimit, -gE.coeffs)
    # next direction is the negative gradient: its descent test never fires,
    # so only the energy condition backtracks; the first step has no BB
    # history and starts from alpha0
    res = line_search_descent(drv.x, bd.total, p, drv.energy, drv.cfg,
                              _bb_from_history(drv, gE))
    drv.x_prev, drv.x = drv.x, res.candidate
    drv.g_prev = gE
    return res.alpha, False, res.backtracks


def _step_acg(drv, n, bd, gE, gF, state):
    cfg = drv.cfg
    p = state.get("p")
    if p is None:
        p = sht.SpectralField(gE.bandlimit, -gE.coeffs)
    gnorm_sq = sht.inner(gE, gE)

    def check(cand):
        bd_c, gE_c, gF_c = drv.full_eval(cand)
        drv.project(gE_c)
        drv.project(gF_c)
        diff = sht.SpectralField(gE.bandlimit, gE_c.coeffs - gE.coeffs)
        beta = min(abs(sht.inner(diff, gE_c)) / gnorm_sq,
                   sht.inner(gE_c, gE_c) / gnorm_sq)
        p_next = sht.SpectralField(gE.bandlimit, -gE_c.coeffs + beta * p.coeffs)
        uphill = sht.inner(p_next, gE_c) > 0.0
        return uphill, (bd_c, gE_c, gF_c, p_next)

    res = line_search_descent(drv.x, bd.total, p, drv.energy, cfg,
                              _bb_from_history(drv, gE),
                              direction_check=check)
    bd_c, gE_c, gF_c, p_next = res.payload
    pn_l2, _ = sht.norms(p_next)
    if pn_l2 > cfg.p_bound or sht.inner(p_next, gE_c) > 0.0:
        p_next = sht.SpectralField(gE.bandlimit, -gE_c.coeffs)
        drv.restarts += 1
    state["p"] = p_next
    drv.x_prev, drv.x = drv.x, res.candidate
    drv.g_prev = gE
    drv.pending_eval = (bd_c, gE_c, gF_c)
    return res.alpha, False, res.backtracks


def _step_sis(drv, n, bd, gE, gF, state):
    z = prox_step_sis(drv.x, gF, drv.cfg.alpha, drv.diag)
    drv.note_prox_residual(drv.x, gF, z, drv.cfg.alpha, quartic=False)
    drv.x_prev, drv.x = drv.x, z
    drv.g_prev = gE
    return drv.cfg.alpha, False, 0


def _step_asis(drv, n, bd, gE, gF, state):
    cfg = drv.cfg
    backtracks = 0
    alpha = _clamp(_bb_from_history(drv, gE), cfg)
    while True:
        z = prox_step_sis(drv.x, gF, alpha, drv.diag)
        e_z = drv.energy(z)
        if e_z <= bd.total or alpha <= cfg.alpha_min:
            break
        alpha = alpha * _rho(backtracks, cfg)
        backtracks += 1
        if alpha < cfg.alpha_min:
            alpha = cfg.alpha_min
    drv.note_prox_residual(drv.x, gF, z, alpha, quartic=False)
    drv.x_prev, drv.x = drv.x, z
    drv.g_prev = gE
    return alpha, False, backtracks


def _dissipation_ok(drv, bd, z, e_z, alpha):
    diff = sht.SpectralField(drv.x.bandlimit, z.coeffs - drv.x.coeffs)
    return (bd.total - e_z >= drv.cfg.eta * sht.inner(diff, diff)
            or alpha < drv.cfg.alpha_min)


def _step_nesterov(drv, n, bd, gE, gF, state):
    # the candidate is always accepted (no iterate restart); when it fails
    # the dissipation test the momentum schedule restarts from zero, which
    # keeps the extrapolation from amplifying an uphill drift
    w = drv.momentum()
    psi = drv.extrapolate(w)
    if w == 0.0:
        e_psi, gf_psi = bd.total, gF
    else:
        e_psi, gf_psi = drv.psi_eval(psi)
    z = prox_step_sis(psi, gf_psi, drv.cfg.alpha, drv.diag)
    drv.note_prox_residual(psi, gf_psi, z, drv.cfg.alpha, quartic=False)
    if not _dissipation_ok(drv, bd, z, drv.energy(z), drv.cfg.alpha):
        drv.reset_momentum()
    drv.x_prev, drv.x = drv.x, z
    drv.g_prev = gE
    return drv.cfg.alpha, False, 0


def _step_anesterov(drv, n, bd, gE, gF, state):
    cfg = drv.cfg
    w = drv.momentum()
    psi = drv.extrapolate(w)
    if w == 0.0:
        e_psi, gf_psi = bd.total, gF
    else:
        e_psi, gf_psi = drv.psi_eval(psi)
    alpha0 = cfg.alpha0 if n == 0 else _bb_from_history(drv, gE)
    prox = lambda p_, a_: prox_step_sis(p_, gf_psi, a_, drv.diag)
    alpha, z, e_z, backtracks = step_size_search_prox(
        psi, e_psi, prox, drv.energy, cfg, alpha0)
    drv.note_prox_residual(psi, gf_psi, z, alpha, quartic=False)
    if not _dissipation_ok(drv, bd, z, e_z, alpha):
        drv.reset_momentum()
    drv.x_prev, drv.x = drv.x, z
    drv.g_prev = gE
    return alpha, False, backtracks


def _step_aabpg(drv, n, bd, gE, gF, state, quartic):
    cfg = drv.cfg
    w = drv.momentum()
    psi = drv.extrapolate(w)
    if w == 0.0:
        e_psi, gf_psi = bd.total, gF
    else:
        e_psi, gf_psi = drv.psi_eval(psi)
    if quartic:
        prox = lambda p_, a_: prox_step_quartic(p_, gf_psi, a_, drv.diag, cfg)
    else:
        prox = lambda p_, a_: prox_step_sis(p_, gf_psi, a_, drv.diag)
    alpha0 = cfg.alpha0 if n == 0 else _bb_from_history(drv, gE)
    alpha, z, e_z, backtracks = step_size_search_prox(
        psi, e_psi, prox, drv.energy, cfg, alpha0)
    diff = sht.SpectralField(drv.x.bandlimit, z.coeffs - drv.x.coeffs)
    if bd.total - e_z >= cfg.eta * sht.inner(diff, diff) or alpha < cfg.alpha_min:
        drv.note_prox_residual(psi, gf_psi, z, alpha, quartic)
        drv.x_prev, drv.x = drv.x, z
        drv.g_prev = gE
        return alpha, False, backtracks
    # restart: keep the current iterate, zero the momentum
    drv.x_prev = drv.x.copy()
    drv.g_prev = gE
    drv.reset_momentum()
    drv.restarts += 1
    drv.pending_eval = (bd, gE, gF)
    return alpha, True, backtracks


def _step_aabpg2(drv, n, bd, gE, gF, state):
    return _step_aabpg(drv, n, bd, gE, gF, state, quartic=False)


def _step_aabpg4(drv, n, bd, gE, gF, state):
    return _step_aabpg(drv, n, bd, gE, gF, state, quartic=True)


_STEPPERS = {
    "agd": _step_agd,
    "acg": _step_acg,
    "sis": _step_sis,
    "asis": _step_asis,
    "nesterov": _step_nesterov,
    "anesterov": _step_anesterov,
    "aa-bpg-2": _step_aabpg2,
    "aa-bpg-4": _step_aabpg4,
}


def _with_method(cfg, method):
    if cfg.method == method:
        return cfg
    return dataclasses.replace(cfg, method=method)


def run_agd(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "agd"), plan, **kw)


def run_acg(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "acg"), plan, **kw)


def run_sis(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "sis"), plan, **kw)


def run_asis(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "asis"), plan, **kw)


def run_nesterov(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "nesterov"), plan, **kw)


def run_anesterov(c0, params, cfg, plan, **kw):
    return minimize(c0, params, _with_method(cfg, "anesterov"), plan, **kw)


def run_aabpg(c0, params, cfg, plan, order="M2", **kw):
    method = {"M2": "aa-bpg-2", "M4": "aa-bpg-4"}[order]
    return minimize(c0, params, _with_method(cfg, method), plan, **kw)
