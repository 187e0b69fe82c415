"""Closed-form test functions with known membership in A(R^d).

The oscillating model is

    m(x) = theta(|x|) exp(i |x|^alpha) / |x|^beta,

with theta a smooth radial cutoff vanishing for |x| <= a and equal to 1
for |x| >= b.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .criteria import Check
from .exponents import Eta, Exponent, _as_fraction, as_eta, check_dim, weight

IN_A = "in_A"
NOT_IN_A = "not_in_A"
BOUNDARY_UNKNOWN = "boundary_unknown"


# --------------------------------------------------------------------------
# smooth cutoff


def _bump_ratio(s):
    """psi(s) = E(s) / (E(s) + E(1-s)), E(s) = exp(-1/s), clamped to [0, 1]."""
    s = np.asarray(s, dtype=float)
    out = np.where(s >= 1, 1.0, 0.0)
    inner = (s > 0) & (s < 1)
    si = s[inner]
    with np.errstate(over="ignore"):
        out[inner] = 1.0 / (1.0 + np.exp(1.0 / si - 1.0 / (1.0 - si)))
    return out


def cutoff_theta(t, a: float = 1.0, b: float = 2.0):
    """C^inf nondecreasing transition: 0 for t <= a, 1 for t >= b."""
    if not a < b:
        raise ValueError(f"cutoff needs a < b, got a={a}, b={b}")
    res = _bump_ratio((np.asarray(t, dtype=float) - a) / (b - a))
    return float(res) if np.ndim(t) == 0 else res


@functools.lru_cache(maxsize=None)
def _psi_derivative(k: int) -> Callable:
    import sympy as sp

    s = sp.Symbol("s")
    expr = sp.diff(1 / (1 + sp.exp(1 / s - 1 / (1 - s))), s, k)
    return sp.lambdify(s, expr, "numpy")


def _theta_derivative(r, k: int, a: float, b: float):
    """k-th derivative of the cutoff in the radial variable."""
    if k == 0:
        return _bump_ratio((r - a) / (b - a))
    s = (np.asarray(r, dtype=float) - a) / (b - a)
    out = np.zeros_like(s)
    # psi^(k) is below 1e-60 outside this window
    inner = (s > 2e-3) & (s < 1 - 2e-3)
    with np.errstate(all="ignore"):
        out[inner] = _psi_derivative(k)(s[inner])
    return out / (b - a) ** k


# --------------------------------------------------------------------------
# the oscillating model


@dataclass(frozen=True)
class ModelParams:
    alpha: Fraction
    beta: Fraction
    d: int = 1
    a: float = 1.0
    b: float = 2.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", _as_fraction(self.alpha))
        object.__setattr__(self, "beta", _as_fraction(self.beta))
        check_dim(self.d, 3)
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("alpha and beta must be positive")
        if not 0 < self.a < self.b:
            raise ValueError("cutoff radii need 0 < a < b")


def evaluate_m(params: ModelParams, x):
    """m_{alpha,beta} at one point (shape (d,)) or many (shape (..., d))."""
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(-1, params.d)
    r = np.sqrt(np.sum(pts**2, axis=-1))
    out = np.zeros(r.shape, dtype=complex)
    live = r > params.a
    rl = r[live]
    al, be = float(params.alpha), float(params.beta)
    out[live] = _bump_ratio((rl - params.a) / (params.b - params.a)) * np.exp(1j * rl**al) * rl**-be
    if single:
        return complex(out[0])
    return out.reshape(x.shape[:-1])


def _radial_terms(k: int, alpha: float, beta: float):
    """Apply L = (1/r) d/dr k times to theta(r) r^-beta exp(i r^alpha).

    Result is a list of (coef, power, theta_order) meaning
    coef * r^power * theta^(theta_order)(r) * exp(i r^alpha).
    """
    terms = {(-beta, 0): 1.0 + 0j}
    for _ in range(k):
        nxt: dict = {}
        for (g, i), c in terms.items():
            for key, val in (
                ((g - 2, i), c * g),
                ((g - 1, i + 1), c),
                ((g + alpha - 2, i), c * 1j * alpha),
            ):
                nxt[key] = nxt.get(key, 0) + val
        terms = {key: v for key, v in nxt.items() if v != 0}
    return [(c, g, i) for (g, i), c in sorted(terms.items())]


def m_derivative(params: ModelParams, eta) -> Callable:
    """Closed-form D^eta m for a 0/1 multi-index.

    For distinct coordinates, D^S g(|x|^2/2) = g^(|S|)(|x|^2/2) prod_{j in S} x_j,
    and d/drho = (1/r) d/dr.
    """
    eta = as_eta(eta, params.d)
    axes = [j for j, e in enumerate(eta) if e]
    terms = _radial_terms(len(axes), float(params.alpha), float(params.beta))
    al = float(params.alpha)

    def deriv(x):
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        pts = x.reshape(-1, params.d)
        r = np.sqrt(np.sum(pts**2, axis=-1))
        out = np.zeros(r.shape, dtype=complex)
        live = r > params.a
        rl = r[live]
        acc = np.zeros(rl.shape, dtype=complex)
        for c, g, i in terms:
            acc += c * rl**g * _theta_derivative(rl, i, params.a, params.b)
        acc *= np.exp(1j * rl**al)
        for j in axes:
            acc *= pts[live, j]
        out[live] = acc
        return complex(out[0]) if single else out.reshape(x.shape[:-1])

    return deriv


@dataclass(frozen=True)
class Membership:
    status: str
    basis: str


def classify_m(params: ModelParams) -> Membership:
    """Membership of m_{alpha,beta} in A(R^d) from the ratio beta/alpha."""
    ratio = params.beta / params.alpha
    half_d = Fraction(params.d, 2)
    if ratio > half_d:
        return Membership(IN_A, f"beta/alpha = {ratio} > d/2")
    if params.d >= 2 or params.alpha != 1:
        return Membership(NOT_IN_A, f"beta/alpha = {ratio} <= d/2")
    # alpha = d = 1: m is a modulation of theta(|x|)|x|^-beta on each half-line,
    # and those monotone pieces lie in A(R) for every beta > 0.
    return Membership(IN_A, "derived-from-remark: alpha = d = 1 gives modulated monotone profiles on each half-line")


@dataclass(frozen=True)
class ExponentRange:
    """{p in [1, inf) : p > lower}; ``lower is None`` means empty."""

    lower: Fraction | None
    description: str = ""

    @property
    def empty(self) -> bool:
        return self.lower is None

    def contains(self, p) -> bool:
        p = Exponent.of(p)
        if self.lower is None or p.is_inf:
            return False
        return p.value > self.lower

    def __str__(self):
        if self.lower is None:
            return "empty"
        if self.lower < 1:
            return "all p >= 1"
        return f"p > {self.lower}"


def m_hypothesis_exponents(params: ModelParams, eta) -> ExponentRange:
    """Finite exponents p with D^eta m in L_p.

    Uses |D^eta m(x)| ~ |x|^{|eta|(alpha-1) - beta} at infinity; only
    eta = 0 and eta = 1 are supported, and for d >= 2 the top derivative
    needs alpha > 1.
    """
    eta = as_eta(eta, params.d)
    k = weight(eta)
    d = params.d
    if 0 < k < d:
        raise ValueError("only |eta| in {0, d} is supported for d >= 2")
    if k == 0:
        decay = params.beta
    else:
        if d >= 2 and params.alpha <= 1:
            raise ValueError("top-derivative asymptotics for d >= 2 need alpha > 1")
        decay = params.beta - k * (params.alpha - 1)
    if decay <= 0:
        return ExponentRange(None, f"decay exponent {decay} <= 0")
    return ExponentRange(Fraction(d) / decay, f"p * {decay} > {d}")


# --------------------------------------------------------------------------
# counterexample parameters for the one-dimensional p/q rule


def counterexample_checks(p, q, alpha: Fraction, beta: Fraction) -> list[Check]:
    p, q = Exponent.of(p), Exponent.of(q)
    pv, qv = p.value, q.value
    return [
        Check("p*beta > 1", pv * beta - 1),
        Check("q*(beta - alpha + 1) > 1", qv * (beta - alpha + 1) - 1),
        Check("beta/alpha < 1/2", Fraction(1, 2) - beta / alpha),
        Check("alpha != 1", abs(alpha - 1)),
    ]


def construct_counterexample_params(p, q) -> tuple[Fraction, Fraction]:
    """Rational (alpha, beta) making m in L_p, m' in L_q, yet m not in A(R).

    Fixes 2*beta - alpha + 1 at the midpoint c of (1/p + 1/q, 1), then takes
    the smallest beta of denominator <= 64 (doubling the bound if needed)
    in the open interval (1/p, c - 1/q), skipping beta = c/2 (alpha = 1).
    """
    p, q = Exponent.of(p), Exponent.of(q)
    if p.is_inf or q.is_inf:
        raise ValueError("p and q must be finite")
    s = p.reciprocal + q.reciprocal
    if not s < 1:
        raise ValueError(f"no counterexample in this region: 1/p + 1/q = {s} >= 1")
    c = (s + 1) / 2
    lo, hi = p.reciprocal, c - q.reciprocal
    bound = 64
    while True:
        best = None
        for den in range(1, bound + 1):
            num = math.floor(lo * den) + 1
            while Fraction(num, den) < hi:
                cand = Fraction(num, den)
                if cand != c / 2:
                    if best is None or cand < best:
                        best = cand
                    break
                num += 1
        if best is not None:
            beta = best
            return 2 * beta + 1 - c, beta
        bound *= 2


# --------------------------------------------------------------------------
# the gallery


def _hat(t):
    return np.maximum(0.0, 1.0 - np.abs(t))


def _hat_prime(t):
    return np.where(np.abs(t) < 1, -np.sign(t), 0.0)


@dataclass(frozen=True)
class GalleryFunction:
    name: str
    d: int
    evaluator: Callable
    derivative_factory: Callable
    membership: Membership
    extent: float
    is_complex: bool = False
    params: dict = field(default_factory=dict)

    def __call__(self, x):
        return self.evaluator(x)

    def derivative(self, eta) -> Callable:
        return self.derivative_factory(as_eta(eta, self.d))

    @property
    def known_status(self) -> str:
        return self.membership.status


def _separable(d, f1, df1):
    def f(x):
        x = np.asarray(x, dtype=float)
        return np.prod(f1(x), axis=-1)

    def factory(eta: Eta):
        def g(x):
            x = np.asarray(x, dtype=float)
            cols = [df1(x[..., j]) if e else f1(x[..., j]) for j, e in enumerate(eta)]
            return np.prod(np.stack(cols, axis=-1), axis=-1)

        return g

    return f, factory


def _gauss(t):
    return np.exp(-(t**2))


def _gauss_prime(t):
    return -2 * t * np.exp(-(t**2))


def parse_function_spec(spec: str) -> tuple[str, dict]:
    """'m:alpha=2,beta=2.5,a=1,b=2' -> ('m', {...})."""
    name, _, rest = spec.strip().partition(":")
    params = {}
    if rest:
        for item in rest.split(","):
            k, sep, v = item.partition("=")
            if not sep:
                raise ValueError(f"bad parameter {item!r} in {spec!r}")
            params[k.strip()] = v.strip()
    return name.strip(), params


def gallery(name: str, d: int | None = None) -> GalleryFunction:
    """Look up a test function: gaussian, hat, gaussian_nd, hat_nd or m:alpha=..,beta=.."""
    base, params = parse_function_spec(name)
    if "d" in params:
        d = int(params.pop("d"))
    if base in ("gaussian", "hat") and d is None:
        d = 1
    if base in ("gaussian_nd", "hat_nd") and d is None:
        d = 2
    d = check_dim(d or 1, 3)
    classical = Membership(IN_A, "nonnegative Fourier transform")
    if base in ("gaussian", "gaussian_nd"):
        f, fac = _separable(d, _gauss, _gauss_prime)
        return GalleryFunction(base, d, f, fac, classical, 8.0)
    if base in ("hat", "hat_nd"):
        f, fac = _separable(d, _hat, _hat_prime)
        return GalleryFunction(base, d, f, fac, classical, 1.0)
    if base == "m":
        unknown = set(params) - {"alpha", "beta", "a", "b"}
        if unknown or not {"alpha", "beta"} <= set(params):
            raise ValueError(f"m needs alpha and beta (optional a, b); got {sorted(params)}")
        mp = ModelParams(
            Fraction(params["alpha"]),
            Fraction(params["beta"]),
            d,
            float(params.get("a", 1.0)),
            float(params.get("b", 2.0)),
        )
        return GalleryFunction(
            f"m:alpha={mp.alpha},beta={mp.beta},a={mp.a:g},b={mp.b:g}",
            d,
            lambda x: evaluate_m(mp, x),
            lambda eta: m_derivative(mp, eta),
            classify_m(mp),
            float("inf"),
            True,
            {"alpha": mp.alpha, "beta": mp.beta, "a": mp.a, "b": mp.b},
        )
    raise ValueError(f"unknown gallery function {name!r}")
