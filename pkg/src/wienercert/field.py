"""Uniform tensor-grid samplings of functions on boxes in R^d, d <= 3.

A :class:`SampledField` represents the multilinear interpolant of its nodal
values on the box, extended by zero outside it. Difference operators act on
that function exactly: a shifted evaluation along one axis is a sparse
linear-interpolation matrix, and mixed differences are compositions of
per-axis operators.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy import sparse

from .exponents import Exponent, as_eta

MAX_GRID_DIM = 3
_EDGE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class SampledField:
    origin: tuple[float, ...]
    spacing: tuple[float, ...]
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values)
        if not (np.issubdtype(vals.dtype, np.floating) or np.issubdtype(vals.dtype, np.complexfloating)):
            vals = vals.astype(float)
        d = vals.ndim
        if not 1 <= d <= MAX_GRID_DIM:
            raise ValueError(f"grid dimension must be 1..{MAX_GRID_DIM}, got {d}")
        origin = tuple(float(o) for o in np.atleast_1d(self.origin))
        spacing = tuple(float(s) for s in np.atleast_1d(self.spacing))
        if len(origin) != d or len(spacing) != d:
            raise ValueError("origin and spacing must have one entry per axis")
        if any(not s > 0 for s in spacing):
            raise ValueError("spacing must be positive")
        if any(n < 2 for n in vals.shape):
            raise ValueError("need at least 2 samples per axis")
        vals.setflags(write=False)
        object.__setattr__(self, "origin", origin)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "values", vals)

    @property
    def d(self) -> int:
        return self.values.ndim

    @property
    def counts(self) -> tuple[int, ...]:
        return self.values.shape

    @property
    def upper(self) -> tuple[float, ...]:
        return tuple(o + (n - 1) * h for o, n, h in zip(self.origin, self.counts, self.spacing))

    @property
    def is_complex(self) -> bool:
        return np.iscomplexobj(self.values)

    def nodes(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing[axis] * np.arange(self.counts[axis])

    def mesh(self) -> np.ndarray:
        """Node coordinates, shape counts + (d,)."""
        grids = np.meshgrid(*[self.nodes(j) for j in range(self.d)], indexing="ij")
        return np.stack(grids, axis=-1)

    def with_values(self, values) -> "SampledField":
        return SampledField(self.origin, self.spacing, values)

    def scaled(self, c) -> "SampledField":
        return self.with_values(c * self.values)


def sample(fn: Callable, lower: Sequence[float], upper: Sequence[float], counts: Sequence[int]) -> SampledField:
    """Sample ``fn`` (vectorized over points of shape (..., d)) on a box."""
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    counts = tuple(int(n) for n in np.atleast_1d(counts))
    if len(counts) == 1 and len(lower) > 1:
        counts = counts * len(lower)
    spacing = (upper - lower) / (np.asarray(counts) - 1)
    axes = [lower[j] + spacing[j] * np.arange(counts[j]) for j in range(len(counts))]
    pts = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1)
    return SampledField(tuple(lower), tuple(spacing), np.asarray(fn(pts)))


# --------------------------------------------------------------------------
# evaluation


def evaluate(field: SampledField, x):
    """Multilinear interpolation inside the box, exactly 0 outside.

    ``x`` has shape (d,) for one point or (..., d) for many.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x.reshape(-1, field.d)
    n = np.asarray(field.counts)
    idx = (pts - np.asarray(field.origin)) / np.asarray(field.spacing)
    inside = np.all((idx >= -_EDGE_TOL) & (idx <= n - 1 + _EDGE_TOL), axis=1)
    idx = np.clip(idx, 0, n - 1)
    i0 = np.minimum(np.floor(idx).astype(int), n - 2)
    t = idx - i0
    out = np.zeros(len(pts), dtype=field.values.dtype)
    for corner in itertools.product((0, 1), repeat=field.d):
        w = np.ones(len(pts))
        for j, c in enumerate(corner):
            w = w * (t[:, j] if c else 1 - t[:, j])
        out = out + w * field.values[tuple(i0[:, j] + corner[j] for j in range(field.d))]
    out = np.where(inside, out, 0)
    if single:
        return out[0].item()
    return out.reshape(x.shape[:-1])


def _interp_matrix(n: int, origin: float, spacing: float, points: np.ndarray) -> sparse.csr_matrix:
    """Rows of linear-interpolation weights onto ``n`` nodes; zero rows outside."""
    idx = (np.asarray(points, dtype=float) - origin) / spacing
    inside = (idx >= -_EDGE_TOL) & (idx <= n - 1 + _EDGE_TOL)
    idx = np.clip(idx, 0, n - 1)
    i0 = np.minimum(np.floor(idx).astype(int), n - 2)
    t = idx - i0
    rows = np.arange(len(idx))
    w0 = np.where(inside, 1 - t, 0.0)
    w1 = np.where(inside, t, 0.0)
    return sparse.csr_matrix(
        (np.concatenate([w0, w1]), (np.concatenate([rows, rows]), np.concatenate([i0, i0 + 1]))),
        shape=(len(idx), n),
    )


def apply_along_axis(op, values: np.ndarray, axis: int) -> np.ndarray:
    """Left-multiply ``values`` along ``axis`` by a (sparse or dense) matrix."""
    moved = np.moveaxis(values, axis, 0)
    flat = moved.reshape(moved.shape[0], -1)
    res = op @ flat
    res = np.asarray(res).reshape((op.shape[0],) + moved.shape[1:])
    return np.moveaxis(res, 0, axis)


# --------------------------------------------------------------------------
# differences


def _difference_coefficients(r: int) -> list[tuple[int, int]]:
    # (shift multiple, coefficient): sum_k C(r,k) (-1)^(r-k) f(x + (2k - r) u);
    # r = 1 gives f(x+u) - f(x-u)
    return [(2 * k - r, math.comb(r, k) * (-1) ** (r - k)) for k in range(r + 1)]


@dataclass(frozen=True)
class DifferenceSpec:
    eta: tuple[int, ...]
    order: int = 1
    steps: tuple[float, ...] = ()

    def __post_init__(self):
        eta = as_eta(self.eta)
        object.__setattr__(self, "eta", eta)
        if int(self.order) < 1:
            raise ValueError("difference order must be >= 1")
        object.__setattr__(self, "order", int(self.order))
        steps = tuple(float(s) for s in np.atleast_1d(self.steps)) if np.size(self.steps) else ()
        if len(steps) == 1 and len(eta) > 1:
            steps = steps * len(eta)
        if any(e and not (len(steps) == len(eta) and steps[j] > 0) for j, e in enumerate(eta)):
            raise ValueError("need a positive step for every differenced axis")
        object.__setattr__(self, "steps", steps)


def one_sided_difference(field: SampledField, j: int, u: float, r: int, x):
    """Order-r difference along axis j (1-based) with step u, at point(s) x."""
    if not 1 <= j <= field.d:
        raise ValueError(f"axis {j} outside 1..{field.d}")
    x = np.asarray(x, dtype=float)
    e = np.zeros(field.d)
    e[j - 1] = 1.0
    return sum(c * evaluate(field, x + m * u * e) for m, c in _difference_coefficients(r))


def mixed_difference(field: SampledField, spec: DifferenceSpec, x):
    """Product of one-axis differences over the axes selected by eta; eta = 0 gives f(x)."""
    if len(spec.eta) != field.d:
        raise ValueError("difference spec dimension does not match the field")
    x = np.asarray(x, dtype=float)
    axes = [j for j, e in enumerate(spec.eta) if e]
    coeffs = _difference_coefficients(spec.order)
    total = 0
    for combo in itertools.product(coeffs, repeat=len(axes)):
        shift = np.zeros(field.d)
        c = 1
        for j, (m, cj) in zip(axes, combo):
            shift[j] = m * spec.steps[j]
            c *= cj
        total = total + c * evaluate(field, x + shift)
    return total


def _support_intervals(lo: float, hi: float, shifts: Iterable[float]) -> list[tuple[float, float]]:
    """Union of [lo - s, hi - s] over shifts, merged."""
    ivs = sorted((lo - s, hi - s) for s in shifts)
    merged = [list(ivs[0])]
    for a, b in ivs[1:]:
        if a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return [(a, b) for a, b in merged]


def _axis_difference(field: SampledField, axis: int, u: float, r: int):
    """Per-interval (origin, count, operator) for the axis difference."""
    h = field.spacing[axis]
    n = field.counts[axis]
    coeffs = _difference_coefficients(r)
    out = []
    for a, b in _support_intervals(field.origin[axis], field.upper[axis], [m * u for m, _ in coeffs]):
        count = int(math.ceil((b - a) / h - 1e-9)) + 1
        pts = a + h * np.arange(max(count, 2))
        op = None
        for m, c in coeffs:
            term = c * _interp_matrix(n, field.origin[axis], h, pts + m * u)
            op = term if op is None else op + term
        out.append((a, len(pts), op.tocsr()))
    return out


def difference_pieces(field: SampledField, spec: DifferenceSpec) -> list[SampledField]:
    """The difference field Delta_u^{eta,r} f on its (zero-extended) support.

    Returned as disjoint boxes whose union contains the support, each on the
    original spacing, so that norms over all pieces are norms on R^d.
    """
    if len(spec.eta) != field.d:
        raise ValueError("difference spec dimension does not match the field")
    per_axis = []
    for j in range(field.d):
        if spec.eta[j]:
            per_axis.append(_axis_difference(field, j, spec.steps[j], spec.order))
        else:
            per_axis.append([(field.origin[j], field.counts[j], None)])
    pieces = []
    for combo in itertools.product(*per_axis):
        vals = field.values
        for j, (_, _, op) in enumerate(combo):
            if op is not None:
                vals = apply_along_axis(op, vals, j)
        pieces.append(SampledField(tuple(c[0] for c in combo), field.spacing, vals))
    return pieces


# --------------------------------------------------------------------------
# norms and derivatives


def _trapezoid_weights(field: SampledField) -> np.ndarray:
    w = np.ones(1)
    for n, h in zip(field.counts, field.spacing):
        wa = np.full(n, h)
        wa[0] = wa[-1] = h / 2
        w = np.multiply.outer(w, wa)
    return w.reshape(field.counts)


def integrate(field: SampledField) -> complex | float:
    """Trapezoidal integral of the nodal values over the box."""
    return np.sum(_trapezoid_weights(field) * field.values).item()


def lp_norm(field: SampledField | Sequence[SampledField], p=2) -> float:
    """(integral |f|^p)^(1/p) by the trapezoidal rule; p = inf is max |values|.

    A list of fields is treated as one function on the union of disjoint boxes.
    """
    fields = [field] if isinstance(field, SampledField) else list(field)
    pf = float(Exponent.of(p))
    if math.isinf(pf):
        return max(float(np.max(np.abs(f.values))) for f in fields)
    total = sum(float(np.sum(_trapezoid_weights(f) * np.abs(f.values) ** pf)) for f in fields)
    return total ** (1 / pf)


def grid_derivative(field: SampledField, eta) -> SampledField:
    """Second-order finite-difference D^eta f (central inside, one-sided at edges)."""
    eta = as_eta(eta, field.d)
    vals = np.asarray(field.values)
    for j, e in enumerate(eta):
        if e:
            if field.counts[j] < 5:
                raise ValueError(f"grid too small along axis {j + 1}: need >= 5 samples")
            vals = np.gradient(vals, field.spacing[j], axis=j, edge_order=2)
    return field.with_values(vals)


def cell_mixed_derivative(field: SampledField, eta=None) -> tuple[np.ndarray, float]:
    """Exact D^eta of the multilinear interpolant, constant on cells along eta axes.

    Returns (values, cell measure) where values are the cellwise mixed divided
    differences averaged over the non-differentiated axes' cell corners.
    """
    eta = as_eta(eta, field.d) if eta is not None else (1,) * field.d
    vals = np.asarray(field.values)
    for j in range(field.d):
        if eta[j]:
            vals = np.diff(vals, axis=j) / field.spacing[j]
    return vals, float(np.prod(field.spacing))


def boundary_vanishes(field: SampledField, tol: float = 0.0) -> bool:
    """True when the zero extension is continuous (all box-face values are ~0)."""
    v = np.abs(field.values)
    for j in range(field.d):
        if np.max(np.take(v, 0, axis=j)) > tol or np.max(np.take(v, -1, axis=j)) > tol:
            return False
    return True


# --------------------------------------------------------------------------
# file formats


def write_wfield(field: SampledField, path) -> None:
    kind = "complex" if field.is_complex else "real"
    header = "WFIELD d={} counts={} origin={} spacing={} kind={}".format(
        field.d,
        ",".join(str(n) for n in field.counts),
        ",".join(repr(float(o)) for o in field.origin),
        ",".join(repr(float(s)) for s in field.spacing),
        kind,
    )
    flat = field.values.reshape(-1)
    with open(path, "w") as fh:
        fh.write(header + "\n")
        if kind == "complex":
            for v in flat:
                fh.write(f"{float(v.real)!r} {float(v.imag)!r}\n")
        else:
            for v in flat:
                fh.write(f"{float(v)!r}\n")


def read_wfield(path) -> SampledField:
    with open(path) as fh:
        header = fh.readline().split()
        if not header or header[0] != "WFIELD":
            raise ValueError(f"{path}: missing WFIELD header")
        meta = dict(item.split("=", 1) for item in header[1:])
        try:
            d = int(meta["d"])
            counts = tuple(int(x) for x in meta["counts"].split(","))
            origin = tuple(float(x) for x in meta["origin"].split(","))
            spacing = tuple(float(x) for x in meta["spacing"].split(","))
            kind = meta["kind"]
        except KeyError as exc:
            raise ValueError(f"{path}: header lacks {exc.args[0]}") from None
        if len(counts) != d or kind not in ("real", "complex"):
            raise ValueError(f"{path}: inconsistent header")
        rows = [line.split() for line in fh if line.strip()]
    expected = int(np.prod(counts))
    if len(rows) != expected:
        raise ValueError(f"{path}: expected {expected} values, found {len(rows)}")
    if kind == "complex":
        arr = np.array([float(r[0]) + 1j * float(r[1]) for r in rows])
    else:
        arr = np.array([float(r[0]) for r in rows])
    return SampledField(origin, spacing, arr.reshape(counts))


def read_csv_1d(path) -> SampledField:
    """Columns x, value[, imag]; an optional non-numeric header row is skipped."""
    xs, vs = [], []
    with open(path, newline="") as fh:
        for row in csv.reader(fh):
            if not row:
                continue
            try:
                nums = [float(c) for c in row]
            except ValueError:
                if not xs:
                    continue
                raise
            xs.append(nums[0])
            vs.append(nums[1] + (1j * nums[2] if len(nums) > 2 else 0))
    x = np.asarray(xs)
    if len(x) < 2:
        raise ValueError(f"{path}: need at least 2 samples")
    steps = np.diff(x)
    h = (x[-1] - x[0]) / (len(x) - 1)
    if h <= 0 or np.max(np.abs(steps - h)) > 1e-9 * max(1.0, abs(h)) + 1e-12 * np.max(np.abs(x)):
        raise ValueError(f"{path}: samples must be uniformly spaced and increasing")
    vals = np.asarray(vs)
    if not np.any(np.iscomplex(vals)):
        vals = vals.real
    return SampledField((x[0],), (h,), vals)


def load_field(path) -> SampledField:
    path = Path(path)
    if path.suffix.lower() == ".csv":
        return read_csv_1d(path)
    return read_wfield(path)
