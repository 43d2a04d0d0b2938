"""Principal-mode initial states: sphere radius from the dominant degree and
symmetric coefficient combinations from O(3)-subgroup data.

The subgroup table couples each symmetry group to generator operators built
from the directional-derivative monomials z^a (xi^b +/- eta^b); applying such
a monomial to 1/r and restricting to the unit sphere lands on a single real
or imaginary harmonic line:

    z^l                      -> (-1)^l l! Y_l^0
    z^(l-m) (xi^m + eta^m)   -> (-1)^(l-m) sqrt(2 (l-m)! (l+m)!) Re Y_l^m
    i z^(l-m) (xi^m - eta^m) -> (-1)^(l-m) sqrt(2 (l-m)! (l+m)!) Im Y_l^(-m)

Only single-operator fields are expanded (every production initial state is
one); compound operator products would need symbolic calculus on the
monomials and are rejected explicitly.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import sht

# degree contributed by each generator: degree = s*deg_s + p*deg_p + q*deg_q
_DEGREE_WEIGHTS = {"T": (6, 4, 3), "O": (9, 6, 4), "I": (15, 10, 6)}


@dataclass(frozen=True)
class SymmetrySubgroup:
    """T, O, I, or Z(n); Z needs the cyclic order n >= 1."""

    name: str
    n: int = 0

    def __post_init__(self):
        if self.name not in ("T", "O", "I", "Z"):
            raise ValueError(f"unknown subgroup {self.name!r}")
        if self.name == "Z" and self.n < 1:
            raise ValueError("Z requires n >= 1")

    def __str__(self):
        return f"Z{self.n}" if self.name == "Z" else self.name


def parse_subgroup(text):
    t = text.strip().upper()
    if t in ("T", "O", "I"):
        return SymmetrySubgroup(t)
    if t.startswith("Z"):
        return SymmetrySubgroup("Z", int(t[1:]))
    raise ValueError(f"cannot parse subgroup {text!r}")


@dataclass
class PMAConfig:
    """Principal degree, symmetry source (subgroup or explicit orders),
    per-mode amplitudes or an RNG seed, and unit-norm scaling."""

    ell0: int
    subgroup: SymmetrySubgroup | None = None
    orders: list | None = None
    amplitudes: list | None = None
    seed: int | None = None
    normalize: bool = False

    def __post_init__(self):
        if self.orders is not None:
            for m in self.orders:
                if abs(m) > self.ell0:
                    raise ValueError(f"order {m} exceeds degree {self.ell0}")
        if self.amplitudes is not None and any(a == 0 for a in self.amplitudes):
            raise ValueError("amplitudes must be nonzero")


def radius_for_degree(ell0):
    """Radius making degree ell0 the resonant (operator-factor-zero) mode."""
    if ell0 < 1:
        raise ValueError("need ell0 >= 1")
    return math.sqrt(ell0 * (ell0 + 1.0))


def degree_decomposition(subgroup, ell0):
    """All (s, p, q) with s in {0,1}, p,q >= 0 hitting the subgroup's degree
    form; empty when the degree is not representable."""
    if ell0 < 0:
        raise ValueError("need ell0 >= 0")
    out = []
    if subgroup.name == "Z":
        dn = subgroup.n
        for q in range(ell0 // dn + 1):
            out.append((0, ell0 - q * dn, q))
        return out
    ws, wp, wq = _DEGREE_WEIGHTS[subgroup.name]
    for s in (0, 1):
        rem_s = ell0 - s * ws
        if rem_s < 0:
            continue
        for p in range(rem_s // wp + 1):
            rem = rem_s - p * wp
            if rem % wq == 0:
                out.append((s, p, rem // wq))
    return out


def _log_mono_factor(ell, m):
    # sqrt(2 (l-m)! (l+m)!), or l! for the pure zonal monomial
    if m == 0:
        return math.lgamma(ell + 1.0)
    return 0.5 * (math.log(2.0) + math.lgamma(ell - m + 1.0) + math.lgamma(ell + m + 1.0))


class UnsupportedComposition(ValueError):
    """Compound (s+p+q > 1) operator products are not expanded."""


# generator operators as lists of (weight, m, kind) monomial terms, with kind
# "re" for z^(l-m)(xi^m + eta^m) (m=0 meaning z^l) and "im" for the
# i z^(l-m)(xi^m - eta^m) form
_OPERATORS = {
    ("T", 3): [(0.25, 2, "im")],
    ("T", 4): [(14.0 / 4.0, 0, "re"), (0.25, 4, "re")],
    ("T", 6): [(1.0 / 32.0, 6, "re"), (-33.0 / 32.0, 2, "re")],
    ("O", 4): [(14.0, 0, "re"), (1.0, 4, "re")],
    ("O", 6): [(1.0, 4, "re"), (-2.0, 0, "re")],
    ("O", 9): [(1.0, 8, "im"), (-34.0, 4, "im")],
    ("I", 6): [(11.0, 0, "re"), (1.0, 5, "re")],
    ("I", 10): [(494.0, 0, "re"), (-228.0, 5, "re"), (1.0, 10, "re")],
    ("I", 15): [(-10005.0, 5, "im"), (522.0, 10, "im"), (1.0, 15, "im")],
}


def _add_harmonic_line(coeffs, ell, m, weight, kind):
    # w * Re Y_l^m adds w/2 at the stored (l, m > 0) entry (w at m = 0);
    # w * Im Y_l^(-m) adds (-1)^m * i * w/2 (realness convention implied)
    if m == 0:
        coeffs[ell, 0] += weight
    elif kind == "re":
        coeffs[ell, m] += 0.5 * weight
    else:
        coeffs[ell, m] += (-1.0) ** m * 0.5j * weight


def single_operator_field(subgroup, ell0, normalize=True):
    """Initial field from one generator operator of the subgroup at degree
    ell0, expanded onto real/imaginary harmonic lines with the monomial
    factors evaluated in log space."""
    solutions = [spq for spq in degree_decomposition(subgroup, ell0)
                 if sum(spq) == 1]
    if subgroup.name == "Z":
        # z^p C_(qn): single operator means q <= 1
        solutions = [(s, p, q) for (s, p, q) in degree_decomposition(subgroup, ell0)
                     if q <= 1]
        if not solutions:
            raise UnsupportedComposition(
                f"no single-operator {subgroup} field at degree {ell0}")
        _, p, q = solutions[0] if len(solutions) == 1 else \
            max(solutions, key=lambda t: t[2])
        m = q * subgroup.n
        terms = [(1.0, m, "re")]
    else:
        if not solutions:
            raise UnsupportedComposition(
                f"{subgroup} at degree {ell0} needs a compound operator product; "
                "only single-operator expansions are supported")
        s, p, q = solutions[0]
        deg_s, deg_p, deg_q = _DEGREE_WEIGHTS[subgroup.name]
        op_degree = deg_s if s else (deg_p if p else deg_q)
        terms = _OPERATORS[(subgroup.name, op_degree)]

    logs = [_log_mono_factor(ell0, m) for (_, m, _) in terms]
    ref = max(logs)
    c = sht.zero_field(ell0)
    for (w, m, kind), lg in zip(terms, logs):
        sign = (-1.0) ** (ell0 - m)
        _add_harmonic_line(c.coeffs, ell0, m, w * sign * math.exp(lg - ref), kind)
    if normalize:
        l2, _ = sht.norms(c)
        c.coeffs /= l2
    return c


def preset_field(name, seed=0):
    """Named initial states; returns (field, radius).

    S10: degree 10, orders 0/5/10 with seeded random amplitudes in (0, 1].
    S15: degree 15, orders -15/-10/-5, unit-norm random amplitudes.
    L<l>: the single zonal harmonic of degree l.
    """
    key = name.strip().upper()
    rng = np.random.default_rng(seed)
    if key == "S10":
        c = sht.zero_field(10)
        for m in (0, 5, 10):
            c.coeffs[10, m] = _uniform_01_open(rng)
        return c, radius_for_degree(10)
    if key == "S15":
        c = sht.zero_field(15)
        for m in (15, 10, 5):
            # negative orders name the sine (imaginary) harmonic lines: a
            # real amplitude a on order -m contributes a * Im Y_15^m, i.e.
            # a purely imaginary stored +m coefficient
            a = _uniform_01_open(rng)
            c.coeffs[15, m] = (-1.0) ** m * 0.5j * a
        l2, _ = sht.norms(c)
        c.coeffs /= l2
        return c, radius_for_degree(15)
    if key.startswith("L"):
        ell = int(key[1:])
        c = sht.zero_field(ell)
        c.coeffs[ell, 0] = 1.0
        return c, radius_for_degree(ell)
    raise ValueError(f"unknown preset {name!r}")


def _uniform_01_open(rng):
    # uniform on (0, 1]: flip the half-open [0, 1) draw
    return 1.0 - rng.uniform()


def random_field(bandlimit, seed, normalize=True):
    """Baseline random start: uniform(-1,1) draws on every stored
    coefficient, mass-projected, unit norm."""
    rng = np.random.default_rng(seed)
    c = sht.zero_field(bandlimit)
    for ell in range(bandlimit + 1):
        c.coeffs[ell, 0] = rng.uniform(-1.0, 1.0)
        for m in range(1, ell + 1):
            c.coeffs[ell, m] = complex(rng.uniform(-1.0, 1.0),
                                       rng.uniform(-1.0, 1.0))
    c.coeffs[0, 0] = 0.0
    if normalize:
        l2, _ = sht.norms(c)
        c.coeffs /= l2
    return c


def random_radius(seed, low=5.0, high=80.0):
    """Baseline random sphere radius, uniform on [low, high]."""
    rng = np.random.default_rng(seed)
    return float(rng.uniform(low, high))
