"""Numerical checks of Hardy-Steklov window inequalities and the
difference bound ||Delta_h f||_inf <= 2^{d/q'} (h_1...h_d)^{1/q'} ||D^1 f||_q.

Window integrals are taken of the multilinear interpolant of a field (zero
outside its box) and are exact for that function: along one axis the
antiderivative of a piecewise-linear function is piecewise quadratic.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

from .exponents import Exponent
from .field import (
    DifferenceSpec,
    SampledField,
    _interp_matrix,
    apply_along_axis,
    boundary_vanishes,
    cell_mixed_derivative,
    difference_pieces,
    grid_derivative,
    lp_norm,
)


def _trap_weights(n: int, h: float) -> np.ndarray:
    w = np.full(n, h)
    w[0] = w[-1] = h / 2
    return w


def _integrate_axes(arr: np.ndarray, spacing: Sequence[float], axes: Iterable[int]) -> np.ndarray:
    """Trapezoidal integral over the given axes (highest first so indices stay valid)."""
    for j in sorted(axes, reverse=True):
        w = _trap_weights(arr.shape[j], spacing[j])
        arr = np.tensordot(arr, w, axes=([j], [0]))
    return arr


def _antiderivative(values: np.ndarray, axis: int, origin: float, h: float, pts: np.ndarray) -> np.ndarray:
    """G(t) = integral_{-inf}^t of the piecewise-linear interpolant along ``axis``."""
    v = np.moveaxis(values, axis, 0)
    n = v.shape[0]
    flat = v.reshape(n, -1)
    cum = np.concatenate([np.zeros((1, flat.shape[1])), np.cumsum((flat[1:] + flat[:-1]) * (h / 2), axis=0)])
    idx = (np.asarray(pts, dtype=float) - origin) / h
    k = np.clip(np.floor(idx).astype(int), 0, n - 2)
    tau = (np.clip(idx, 0, n - 1) - k)[:, None] * h
    g = cum[k] + flat[k] * tau + (flat[k + 1] - flat[k]) * tau**2 / (2 * h)
    g = np.where((idx < 0)[:, None], 0.0, g)
    g = np.where((idx > n - 1)[:, None], cum[-1], g)
    out = g.reshape((len(idx),) + v.shape[1:])
    return np.moveaxis(out, 0, axis)


def window_along(values: np.ndarray, axis: int, origin: float, h_grid: float, width: float, pts) -> np.ndarray:
    """integral_{t-width}^{t+width} F(.., s, ..) ds along one axis, at each t in ``pts``."""
    pts = np.asarray(pts, dtype=float)
    return _antiderivative(values, axis, origin, h_grid, pts + width) - _antiderivative(
        values, axis, origin, h_grid, pts - width
    )


def _require_nonnegative(field: SampledField) -> None:
    if field.is_complex or np.min(field.values) < 0:
        raise ValueError("the window inequalities need a real nonnegative field")


def _normalize_axes(field: SampledField, axes) -> tuple[int, ...]:
    if axes is None:
        return tuple(range(1, field.d + 1))
    axes = tuple(sorted({int(a) for a in np.atleast_1d(axes)}))
    if not axes or axes[0] < 1 or axes[-1] > field.d:
        raise ValueError(f"axes must be a nonempty subset of 1..{field.d}")
    return axes


def _steps_for(axes, h) -> tuple[float, ...]:
    h = tuple(float(x) for x in np.atleast_1d(h))
    if len(h) == 1:
        h = h * len(axes)
    if len(h) != len(axes) or any(not x > 0 for x in h):
        raise ValueError("need one positive window half-width per averaged axis")
    return h


def steklov_average(field: SampledField, axes, h, x) -> float:
    """Window integral over prod_{j in axes} [x_j - h_j, x_j + h_j], other coordinates fixed at x."""
    _require_nonnegative(field)
    axes = _normalize_axes(field, axes)
    h = _steps_for(axes, h)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    vals = np.asarray(field.values, dtype=float)
    widths = dict(zip(axes, h))
    for j in range(field.d):
        if j + 1 in widths:
            vals = window_along(vals, j, field.origin[j], field.spacing[j], widths[j + 1], [x[j]])
        else:
            op = _interp_matrix(field.counts[j], field.origin[j], field.spacing[j], np.array([x[j]]))
            vals = apply_along_axis(op, vals, j)
    return float(vals.reshape(-1)[0])


@dataclass(frozen=True)
class HardyReport:
    q: Exponent
    Q: Exponent
    h: tuple[float, ...]
    axes: tuple[int, ...]
    lhs: float
    rhs_core: float
    ratio: float

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "Q": str(self.Q),
            "h": list(self.h),
            "axes": list(self.axes),
            "lhs": self.lhs,
            "rhs_core": self.rhs_core,
            "ratio": self.ratio,
        }


def hardy_check(field: SampledField, q, Q, h, axes=None) -> HardyReport:
    """Compare the L^Q norm of window integrals with (prod h)^{1/Q + 1/q'} times a (mixed) L^q norm.

    The ratio lhs / rhs_core estimates the constant of the inequality for this
    field and these widths.
    """
    q, Q = Exponent.of(q), Exponent.of(Q)
    if q.is_inf or Q.is_inf or q.value == 1:
        raise ValueError("need 1 < q <= Q < inf")
    if q > Q:
        raise ValueError(f"the inequality needs q <= Q, got q = {q}, Q = {Q}")
    _require_nonnegative(field)
    axes = _normalize_axes(field, axes)
    h = _steps_for(axes, h)
    qf, Qf = float(q), float(Q)

    vals = np.asarray(field.values, dtype=float)
    out_spacing = list(field.spacing)
    for j, w in zip(axes, h):
        a, b = field.origin[j - 1], field.upper[j - 1]
        s = field.spacing[j - 1]
        n_out = int(math.ceil((b - a + 2 * w) / s - 1e-9)) + 1
        pts = a - w + s * np.arange(n_out)
        vals = window_along(vals, j - 1, a, s, w, pts)
    lhs = float(_integrate_axes(np.abs(vals) ** Qf, out_spacing, range(field.d))) ** (1 / Qf)

    fq = np.asarray(field.values, dtype=float) ** qf
    inner = _integrate_axes(fq, field.spacing, [j - 1 for j in axes])
    if len(axes) == field.d:
        mixed = float(inner) ** (1 / qf)
    else:
        outer_spacing = [field.spacing[j] for j in range(field.d) if j + 1 not in axes]
        outer = _integrate_axes(inner ** (Qf / qf), outer_spacing, range(inner.ndim))
        mixed = float(outer) ** (1 / Qf)
    power = 1 / Qf + float(q.conjugate().reciprocal)
    rhs = math.prod(h) ** power * mixed
    ratio = lhs / rhs if rhs > 0 else 0.0
    return HardyReport(q, Q, h, axes, lhs, rhs, ratio)


@dataclass(frozen=True)
class PiecewiseConstantSource:
    """Random nonnegative fields on [0,1]^d, constant on a dyadic partition.

    Each draw picks a level L in 1..max_level and i.i.d. heights (a fraction
    ``zero_prob`` of cells set to 0); nodes sit ``samples_per_cell`` per finest cell.
    """

    d: int = 1
    max_level: int = 6
    samples_per_cell: int = 8
    zero_prob: float = 0.3

    def __call__(self, rng: np.random.Generator) -> SampledField:
        level = int(rng.integers(1, self.max_level + 1))
        cells = 2**level
        heights = rng.random((cells,) * self.d)
        heights[rng.random(heights.shape) < self.zero_prob] = 0.0
        n = 2**self.max_level * self.samples_per_cell + 1
        idx = np.minimum((np.arange(n) * cells) // (n - 1), cells - 1)
        vals = heights[np.ix_(*([idx] * self.d))]
        h = 1.0 / (n - 1)
        return SampledField((0.0,) * self.d, (h,) * self.d, vals)


def ratio_table(
    generator: Callable[[np.random.Generator], SampledField],
    q,
    Q,
    axes=None,
    h_list: Sequence = (1.0,),
    trials: int = 1,
    seed: int = 0,
    threads: int = 1,
) -> list[tuple[int, tuple[float, ...], float]]:
    """(trial, h, ratio) for every generated field and width.

    Fields are drawn sequentially from one seeded stream, so rows are
    deterministic in ``seed`` whatever the thread count.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    fields = [generator(rng) for _ in range(trials)]

    def rows(item):
        i, f = item
        out = []
        for h in h_list:
            rep = hardy_check(f, q, Q, h, axes)
            out.append((i, rep.h, rep.ratio))
        return out

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            chunks = list(ex.map(rows, enumerate(fields)))
    else:
        chunks = [rows(item) for item in enumerate(fields)]
    return [r for chunk in chunks for r in chunk]


def empirical_constant(
    generator: Callable[[np.random.Generator], SampledField],
    q,
    Q,
    axes=None,
    h_list: Sequence = (1.0,),
    trials: int = 1,
    seed: int = 0,
    threads: int = 1,
) -> float:
    """Supremum of hardy_check ratios over ``trials`` generated fields and all widths."""
    return max(r for _, _, r in ratio_table(generator, q, Q, axes, h_list, trials, seed, threads))


@dataclass(frozen=True)
class LemmaStarReport:
    q: Exponent
    h: tuple[float, ...]
    lhs_sup: float
    derivative_norm: float
    bound: float
    ratio: float

    def to_dict(self) -> dict:
        return {
            "q": str(self.q),
            "h": list(self.h),
            "lhs_sup": self.lhs_sup,
            "derivative_norm": self.derivative_norm,
            "bound": self.bound,
            "ratio": self.ratio,
        }


def lemma_star_check(field: SampledField, q, h, derivative: str | SampledField = "cell") -> LemmaStarReport:
    """sup |Delta_{h_1..h_d} f| against 2^{d/q'} (h_1...h_d)^{1/q'} ||D^1 f||_q.

    ``derivative`` selects ||D^1 f||_q: "cell" uses the exact mixed derivative
    of the interpolant (cellwise constant), "grid" the finite-difference
    derivative, or pass a sampled derivative field directly.
    """
    q = Exponent.of(q)
    if q.is_inf or q.value == 1:
        raise ValueError("need 1 < q < inf")
    scale = float(np.max(np.abs(field.values))) if field.values.size else 0.0
    if not boundary_vanishes(field, 1e-12 * scale):
        raise ValueError("field must vanish on its box boundary (continuous zero extension)")
    d = field.d
    h = tuple(float(x) for x in np.atleast_1d(h))
    if len(h) == 1:
        h = h * d
    pieces = difference_pieces(field, DifferenceSpec((1,) * d, 1, h))
    lhs = lp_norm(pieces, "inf")
    qf = float(q)
    if isinstance(derivative, SampledField):
        dnorm = lp_norm(derivative, q)
    elif derivative == "grid":
        dnorm = lp_norm(grid_derivative(field, (1,) * d), q)
    elif derivative == "cell":
        cells, vol = cell_mixed_derivative(field)
        dnorm = float(np.sum(np.abs(cells) ** qf) * vol) ** (1 / qf)
    else:
        raise ValueError(f"unknown derivative mode {derivative!r}")
    qc = float(q.conjugate().reciprocal)
    bound = 2.0 ** (d * qc) * math.prod(h) ** qc * dnorm
    ratio = lhs / bound if bound > 0 else 0.0
    return LemmaStarReport(q, h, lhs, dnorm, bound, ratio)
