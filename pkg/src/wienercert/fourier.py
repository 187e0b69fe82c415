"""A-norm estimates from discrete Fourier transforms of truncated samplings.

With f(y) = integral g(x) e^{i(x,y)} dx the A-norm is ||g||_1. Sampling f at
N points per axis on [-R, R)^d with spacing D = 2R/N, the continuum transform
is approximated by D^d * FFT and ||g||_1 by the rectangle rule on the DFT
frequency grid, which reduces to N^-d * sum |FFT|. These are estimates of a
truncation, so every verdict here is trend evidence, not a certificate.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .field import SampledField, evaluate

MAX_POINTS = 2**24
CONVERGED = "converged"
GROWING = "growing"
INCONCLUSIVE = "inconclusive"
EVIDENCE = "trend evidence"


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and n & (n - 1) == 0


def _dimension(fn) -> int:
    return fn.d if hasattr(fn, "d") else 1


def _sample_box(fn, d: int, R: float, N: int) -> np.ndarray:
    spacing = 2.0 * R / N
    axis = -R + spacing * np.arange(N)
    pts = np.stack(np.meshgrid(*([axis] * d), indexing="ij"), axis=-1)
    if isinstance(fn, SampledField):
        return np.asarray(evaluate(fn, pts.reshape(-1, d))).reshape((N,) * d)
    return np.asarray(fn(pts)).reshape((N,) * d)


def truncated_fourier_l1(fn, R: float, N: int, max_points: int = MAX_POINTS) -> tuple[float, float]:
    """(estimate of ||g||_1, relative Parseval residual) from N^d samples on [-R, R)^d."""
    if not _is_power_of_two(int(N)) or int(N) != N:
        raise ValueError(f"N must be a power of two, got {N}")
    if not R > 0:
        raise ValueError("R must be positive")
    N = int(N)
    d = _dimension(fn)
    if not 1 <= d <= 3:
        raise ValueError("dimension must be 1..3")
    if N**d > max_points:
        raise MemoryError(f"N^d = {N**d} samples exceeds the budget of {max_points}")
    vals = _sample_box(fn, d, R, N)
    spectrum = np.fft.fftn(vals)
    l1 = float(np.sum(np.abs(spectrum))) / N**d
    spacing = 2.0 * R / N
    energy = float(np.sum(np.abs(vals) ** 2)) * spacing**d
    # (2 pi)^-d ||f^||^2 with f^ = D^d FFT on frequency cells of volume (2 pi / (N D))^d
    energy_hat = float(np.sum(np.abs(spectrum) ** 2)) * spacing**d / N**d
    residual = abs(energy - energy_hat) / energy if energy > 0 else 0.0
    return l1, residual


def n_for_spacing(R: float, max_spacing: float) -> int:
    """Smallest power of two N with 2R/N <= max_spacing."""
    need = 2.0 * R / max_spacing
    return 1 << max(0, math.ceil(math.log2(need) - 1e-12))


@dataclass(frozen=True)
class TrendEntry:
    R: float
    N: int
    l1: float
    parseval_residual: float


@dataclass
class ATrend:
    entries: list[TrendEntry]
    slope: float
    classification: str
    converged_below: float = 0.05
    growing_above: float = 0.1

    @property
    def parseval_residuals(self) -> list[float]:
        return [e.parseval_residual for e in self.entries]

    def to_dict(self) -> dict:
        return {
            "entries": [[e.R, e.N, e.l1, e.parseval_residual] for e in self.entries],
            "slope": self.slope,
            "classification": self.classification,
            "thresholds": {"converged_below": self.converged_below, "growing_above": self.growing_above},
            "label": EVIDENCE,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["R", "N", "l1", "parseval_residual"])
        for e in self.entries:
            w.writerow([repr(e.R), e.N, repr(e.l1), repr(e.parseval_residual)])
        return buf.getvalue()


def fit_slope(R: Sequence[float], l1: Sequence[float], last: int = 3) -> float:
    """Least-squares slope of log(l1) against log(R) over the last ``last`` points."""
    R, l1 = list(R)[-last:], list(l1)[-last:]
    if len(R) < 2 or any(v <= 0 for v in l1):
        return math.nan
    slope, _ = np.polyfit(np.log(R), np.log(l1), 1)
    return float(slope)


def classify_slope(slope: float, converged_below: float = 0.05, growing_above: float = 0.1) -> str:
    if math.isnan(slope):
        return INCONCLUSIVE
    if slope < converged_below:
        return CONVERGED
    if slope > growing_above:
        return GROWING
    return INCONCLUSIVE


def a_norm_trend(
    fn,
    R_list: Sequence[float],
    N_rule: Callable[[float], int] | float,
    converged_below: float = 0.05,
    growing_above: float = 0.1,
    threads: int = 1,
    max_points: int = MAX_POINTS,
) -> ATrend:
    """Truncation ladder of A-norm estimates; ``N_rule`` is R -> N or a maximal spacing."""
    R_list = [float(r) for r in R_list]
    if any(b <= a for a, b in zip(R_list, R_list[1:])):
        raise ValueError("R_list must be strictly increasing")
    rule = N_rule if callable(N_rule) else (lambda R: n_for_spacing(R, float(N_rule)))

    def entry(R):
        N = int(rule(R))
        l1, res = truncated_fourier_l1(fn, R, N, max_points)
        return TrendEntry(R, N, l1, res)

    if threads > 1:
        with ThreadPoolExecutor(threads) as ex:
            entries = list(ex.map(entry, R_list))
    else:
        entries = [entry(R) for R in R_list]
    slope = fit_slope([e.R for e in entries], [e.l1 for e in entries])
    return ATrend(entries, slope, classify_slope(slope, converged_below, growing_above), converged_below, growing_above)
