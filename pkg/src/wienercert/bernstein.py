"""Truncated dyadic Bernstein-type sums and their tail diagnostics.

For a sampled f the d-dimensional sum is

    sum_s 2^{(s_1 + ... + s_d)/2} || Delta_{pi 2^-s_1, ..., pi 2^-s_d} f ||_2

over a finite box of scale indices; in one dimension the difference is
f(t + h) - f(t - h). Finiteness of the full series implies f in A(R^d), so
the report carries the per-scale terms and a geometric tail fit instead of
a bare yes/no.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .field import SampledField, _axis_difference, apply_along_axis

CERTIFIED = "certified_convergent"
INCONCLUSIVE = "inconclusive"
DIVERGENT = "divergent_trend"

DEFAULT_SHELLS = 4
DEFAULT_DELTA = 0.05


class ResolutionError(ValueError):
    pass


@dataclass(frozen=True)
class ScaleRange:
    lo: int
    hi: int

    def __post_init__(self):
        if int(self.lo) != self.lo or int(self.hi) != self.hi:
            raise ValueError("scale indices must be integers")
        if self.lo > self.hi:
            raise ValueError(f"empty scale range {self.lo}..{self.hi}")
        if self.hi - self.lo > 64:
            raise ValueError("scale range may span at most 64 steps")

    @classmethod
    def parse(cls, text: str) -> "ScaleRange":
        lo, sep, hi = text.partition("..")
        if not sep:
            raise ValueError(f"scale range must look like lo..hi, got {text!r}")
        return cls(int(lo), int(hi))

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1


def dyadic_step(nu: int) -> float:
    """h(nu) = pi * 2^-nu."""
    return math.pi * 2.0 ** (-nu)


@dataclass
class DyadicReport:
    terms: dict[tuple[int, ...], float]
    partial_sum: float
    tail_ratios: tuple[float, ...]
    verdict: str
    ranges: tuple[ScaleRange, ...] = field(default=())

    @property
    def tail_ratio(self) -> float:
        return max(self.tail_ratios) if self.tail_ratios else 0.0

    def to_dict(self) -> dict:
        return {
            "terms": {",".join(str(s) for s in k): v for k, v in self.terms.items()},
            "partial_sum": self.partial_sum,
            "tail_ratio": self.tail_ratio,
            "tail_ratios": list(self.tail_ratios),
            "verdict": self.verdict,
            "ranges": [[r.lo, r.hi] for r in self.ranges],
        }

    def csv_rows(self) -> list[list]:
        d = len(self.ranges) or len(next(iter(self.terms)))
        header = [f"s{j + 1}" for j in range(d)] + ["step_product", "term"]
        rows = [header]
        for k, v in self.terms.items():
            rows.append([*k, math.prod(dyadic_step(s) for s in k), v])
        return rows


def _check_resolution(f: SampledField, ranges: Sequence[ScaleRange]) -> None:
    for j, (rng, h) in enumerate(zip(ranges, f.spacing)):
        if dyadic_step(rng.hi) < h:
            finest = math.floor(math.log2(math.pi / h))
            need = math.ceil((f.upper[j] - f.origin[j]) * 2.0**rng.hi / math.pi) + 1
            raise ResolutionError(
                f"axis {j + 1}: scale {rng.hi} has step {dyadic_step(rng.hi):.3g} below the grid "
                f"spacing {h:.3g}; use scales up to {finest} or at least {need} samples on this axis"
            )


def _difference_norms(f: SampledField, ranges: Sequence[ScaleRange]) -> dict[tuple[int, ...], float]:
    """|| Delta_{h(s_1),...,h(s_d)} f ||_2 for every multi-index, sharing partial products."""
    d = f.d
    ops = [{s: _axis_difference(f, j, dyadic_step(s), 1) for s in ranges[j]} for j in range(d)]
    out: dict[tuple[int, ...], float] = {}

    def recurse(j, blocks, key):
        # blocks: list of (array, origins) after differencing axes < j
        if j == d:
            total = 0.0
            for arr, origin in blocks:
                w = _weights_for(arr.shape, f.spacing)
                total += float(np.sum(w * np.abs(arr) ** 2))
            out[key] = math.sqrt(total)
            return
        for s in ranges[j]:
            nxt = []
            for arr, origin in blocks:
                for o, _, op in ops[j][s]:
                    nxt.append((apply_along_axis(op, arr, j), origin[:j] + (o,) + origin[j + 1 :]))
            recurse(j + 1, nxt, key + (s,))

    recurse(0, [(np.asarray(f.values), f.origin)], ())
    return out


def _weights_for(shape, spacing) -> np.ndarray:
    w = np.ones(1)
    for n, h in zip(shape, spacing):
        wa = np.full(n, h)
        wa[0] = wa[-1] = h / 2
        w = np.multiply.outer(w, wa)
    return w.reshape(shape)


def _shell_sums(terms, ranges, axis):
    sums = {s: 0.0 for s in ranges[axis]}
    for k, v in terms.items():
        sums[k[axis]] += v
    return sums


def _fit_ratio(seq: Sequence[float]) -> tuple[float, list[float]]:
    """Geometric ratio of an outward-ordered shell sequence, plus consecutive ratios."""
    ratios = []
    for a, b in zip(seq, seq[1:]):
        if a > 0:
            ratios.append(b / a)
        else:
            ratios.append(0.0 if b == 0 else math.inf)
    if seq[0] > 0:
        fitted = (seq[-1] / seq[0]) ** (1.0 / (len(seq) - 1))
    else:
        fitted = 0.0 if all(x == 0 for x in seq) else math.inf
    return fitted, ratios


def tail_verdict(
    terms: dict[tuple[int, ...], float],
    ranges: Sequence[ScaleRange],
    shells: int = DEFAULT_SHELLS,
    delta: float = DEFAULT_DELTA,
    ends: str = "both",
) -> tuple[str, tuple[float, ...]]:
    """Classify the tails of a truncated dyadic sum.

    For each axis the shell sums (terms summed over all other indices) on the
    outermost ``shells`` scales of each end are fitted by a geometric ratio.
    Certified iff every fitted ratio is below 1 - delta; divergent iff some end
    shows three consecutive outward ratios >= 1. ``ends`` is "both", "high"
    (fine scales only) or "low".
    """
    if ends not in ("both", "high", "low"):
        raise ValueError("ends must be 'both', 'high' or 'low'")
    ranges = [r if isinstance(r, ScaleRange) else ScaleRange(*r) for r in ranges]
    if any(len(r) < shells for r in ranges) or shells < 2:
        return INCONCLUSIVE, tuple(math.nan for _ in ranges)
    per_axis = []
    divergent = False
    run = min(3, shells - 1)
    for j in range(len(ranges)):
        sums = _shell_sums(terms, ranges, j)
        scales = list(ranges[j])
        seqs = []
        if ends in ("both", "high"):
            seqs.append([sums[s] for s in scales[-shells:]])
        if ends in ("both", "low"):
            seqs.append([sums[s] for s in reversed(scales[:shells])])
        worst = 0.0
        for seq in seqs:
            fitted, ratios = _fit_ratio(seq)
            worst = max(worst, fitted)
            for i in range(len(ratios) - run + 1):
                if all(r >= 1 for r in ratios[i : i + run]):
                    divergent = True
        per_axis.append(worst)
    if divergent:
        return DIVERGENT, tuple(per_axis)
    if all(r < 1 - delta for r in per_axis):
        return CERTIFIED, tuple(per_axis)
    return INCONCLUSIVE, tuple(per_axis)


def bernstein_sum_nd(
    f: SampledField,
    ranges: Sequence[ScaleRange],
    shells: int = DEFAULT_SHELLS,
    delta: float = DEFAULT_DELTA,
) -> DyadicReport:
    """Terms 2^{sum s_j / 2} ||Delta_{h(s)} f||_2 over the product of scale ranges."""
    ranges = tuple(r if isinstance(r, ScaleRange) else ScaleRange(*r) for r in ranges)
    if len(ranges) == 1 and f.d > 1:
        ranges = ranges * f.d
    if len(ranges) != f.d:
        raise ValueError(f"need {f.d} scale ranges, got {len(ranges)}")
    _check_resolution(f, ranges)
    norms = _difference_norms(f, ranges)
    terms = {k: 2.0 ** (sum(k) / 2) * v for k, v in norms.items()}
    verdict, ratios = tail_verdict(terms, ranges, shells, delta)
    return DyadicReport(terms, math.fsum(terms.values()), ratios, verdict, ranges)


def bernstein_sum_1d(
    f: SampledField,
    rng: ScaleRange,
    shells: int = DEFAULT_SHELLS,
    delta: float = DEFAULT_DELTA,
) -> DyadicReport:
    """Terms 2^{nu/2} (integral |f(t+h) - f(t-h)|^2 dt)^{1/2}, h = pi 2^-nu."""
    if f.d != 1:
        raise ValueError("bernstein_sum_1d needs a one-dimensional field")
    return bernstein_sum_nd(f, [rng], shells, delta)
