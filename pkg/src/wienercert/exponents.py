"""Exact exponent arithmetic and the 0/1 multi-index lattice.

Integrability exponents live in [1, +inf]. Finite values are stored as
``Fraction``; infinity is a distinguished value whose reciprocal is exactly 0.
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

MAX_DIM = 16

Eta = tuple[int, ...]
Rational = Union[int, Fraction, str]


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, float):
        # decimal literal semantics: 1.2 -> 6/5, not the binary expansion
        return Fraction(repr(x))
    return Fraction(str(x).strip())


@functools.total_ordering
@dataclass(frozen=True)
class Exponent:
    """An extended rational exponent p in [1, inf].

    ``value`` is ``None`` for p = inf.
    """

    value: Fraction | None

    def __post_init__(self):
        if self.value is not None:
            v = _as_fraction(self.value)
            if v < 1:
                raise ValueError(f"exponent must be >= 1, got {v}")
            object.__setattr__(self, "value", v)

    @classmethod
    def of(cls, x: "Exponent | Rational | float") -> "Exponent":
        if isinstance(x, Exponent):
            return x
        if isinstance(x, str):
            s = x.strip().lower()
            if s in ("inf", "infinity", "oo"):
                return cls(None)
            return cls(Fraction(s))
        if isinstance(x, float) and x == float("inf"):
            return cls(None)
        return cls(_as_fraction(x))

    @property
    def is_inf(self) -> bool:
        return self.value is None

    @property
    def reciprocal(self) -> Fraction:
        return Fraction(0) if self.value is None else 1 / self.value

    def conjugate(self) -> "Exponent":
        """p' with 1/p + 1/p' = 1; conjugate(1) = inf, conjugate(inf) = 1."""
        r = 1 - self.reciprocal
        return Exponent(None) if r == 0 else Exponent(1 / r)

    def __float__(self) -> float:
        return float("inf") if self.value is None else float(self.value)

    def __lt__(self, other):
        other = Exponent.of(other)
        # larger exponent <-> smaller reciprocal
        return self.reciprocal > other.reciprocal

    def __eq__(self, other):
        if not isinstance(other, Exponent):
            try:
                other = Exponent.of(other)
            except (TypeError, ValueError):
                return NotImplemented
        return self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def __str__(self) -> str:
        if self.value is None:
            return "inf"
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __repr__(self) -> str:
        return f"Exponent({str(self)!r})"


INF = Exponent(None)


def exponent(x) -> Exponent:
    return Exponent.of(x)


def check_dim(d: int, limit: int = MAX_DIM) -> int:
    if not isinstance(d, int) or isinstance(d, bool) or not 1 <= d <= limit:
        raise ValueError(f"dimension must be an integer in [1, {limit}], got {d!r}")
    return d


def enumerate_etas(d: int) -> list[Eta]:
    """All 2**d vectors in {0,1}^d, lexicographic; first is 0, last is 1."""
    check_dim(d)
    return [tuple(e) for e in itertools.product((0, 1), repeat=d)]


def weight(eta: Eta) -> int:
    return sum(eta)


def zero(d: int) -> Eta:
    return (0,) * check_dim(d)


def ones(d: int) -> Eta:
    return (1,) * check_dim(d)


def basis(d: int, j: int) -> Eta:
    """e_j with 1-based axis index j."""
    check_dim(d)
    if not 1 <= j <= d:
        raise ValueError(f"axis {j} outside 1..{d}")
    return tuple(1 if i == j - 1 else 0 for i in range(d))


def as_eta(x, d: int | None = None) -> Eta:
    """Accept a tuple/list of 0/1 entries or a bit string like '011'."""
    if isinstance(x, str):
        entries = tuple(int(c) for c in x.strip())
    else:
        entries = tuple(int(c) for c in x)
    if not entries or any(e not in (0, 1) for e in entries):
        raise ValueError(f"eta entries must be 0 or 1, got {x!r}")
    check_dim(len(entries))
    if d is not None and len(entries) != d:
        raise ValueError(f"eta {x!r} has dimension {len(entries)}, expected {d}")
    return entries


def eta_str(eta: Eta) -> str:
    return "".join(str(e) for e in eta)


@dataclass(frozen=True)
class ExponentAssignment:
    """The table eta -> p_eta over the whole 0/1 lattice.

    ``bounded`` holds the etas declared to have D^eta f essentially bounded;
    only those (and eta = 0, since f is continuous and vanishes at infinity)
    may carry p = inf.
    """

    d: int
    table: Mapping[Eta, Exponent]
    bounded: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        check_dim(self.d)
        table = {as_eta(k, self.d): Exponent.of(v) for k, v in dict(self.table).items()}
        if len(table) != 2**self.d:
            raise ValueError(f"assignment needs {2 ** self.d} entries, got {len(table)}")
        bounded = frozenset(as_eta(e, self.d) for e in self.bounded)
        z = zero(self.d)
        for eta, p in table.items():
            if eta == z:
                continue
            if p.value == 1:
                raise ValueError(f"p_{eta_str(eta)} must exceed 1")
            if p.is_inf and eta not in bounded:
                raise ValueError(f"p_{eta_str(eta)} = inf requires eta to be flagged bounded")
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "bounded", bounded)

    @classmethod
    def build(
        cls,
        d: int,
        p0,
        rest=None,
        overrides: Mapping | None = None,
        bounded: Iterable = (),
    ) -> "ExponentAssignment":
        """p_0 for eta = 0, ``rest`` for every other eta, then ``overrides``."""
        table = {}
        for eta in enumerate_etas(d):
            table[eta] = Exponent.of(p0) if weight(eta) == 0 else rest
        for k, v in (overrides or {}).items():
            table[as_eta(k, d)] = v
        missing = [eta_str(e) for e, v in table.items() if v is None]
        if missing:
            raise ValueError(f"no exponent for eta in {missing}")
        return cls(d, table, frozenset(as_eta(b, d) for b in bounded))

    def __getitem__(self, eta) -> Exponent:
        return self.table[as_eta(eta, self.d)]

    @property
    def p0(self) -> Exponent:
        return self.table[zero(self.d)]

    @property
    def p1(self) -> Exponent:
        return self.table[ones(self.d)]

    def reciprocal_sum(self, include_zero: bool = True) -> Fraction:
        return sum(
            (p.reciprocal for eta, p in self.table.items() if include_zero or weight(eta) > 0),
            Fraction(0),
        )


@dataclass(frozen=True)
class DecayAssignment:
    """Pointwise decay rates gamma_chi of |D^chi f(x)| <= C (1+|x|)^-gamma_chi."""

    d: int
    gamma: Mapping[Eta, Fraction]

    def __post_init__(self):
        check_dim(self.d)
        g = {as_eta(k, self.d): _as_fraction(v) for k, v in dict(self.gamma).items()}
        if len(g) != 2**self.d:
            raise ValueError(f"decay table needs {2 ** self.d} entries, got {len(g)}")
        if any(v <= 0 for v in g.values()):
            raise ValueError("decay rates must be positive")
        object.__setattr__(self, "gamma", g)

    @classmethod
    def uniform(cls, d: int, gamma, overrides: Mapping | None = None) -> "DecayAssignment":
        g = {eta: gamma for eta in enumerate_etas(d)}
        for k, v in (overrides or {}).items():
            g[as_eta(k, d)] = v
        return cls(d, g)


@dataclass(frozen=True)
class RadialAssignment:
    """Exponents p_j for all derivatives of weight j of a radial function."""

    d: int
    p: Sequence[Exponent]
    smoothness_declared: bool = False

    def __post_init__(self):
        check_dim(self.d)
        p = tuple(Exponent.of(x) for x in self.p)
        if len(p) != self.d + 1:
            raise ValueError(f"radial assignment needs p_0..p_{self.d}, got {len(p)} values")
        if p[0].is_inf:
            raise ValueError("p_0 must be finite")
        if any(x.is_inf or x.value == 1 for x in p[1:]):
            raise ValueError("p_j for j >= 1 must lie in (1, inf)")
        object.__setattr__(self, "p", p)


@dataclass(frozen=True)
class PureDerivativeOrders:
    d: int
    beta: Sequence[int]

    def __post_init__(self):
        check_dim(self.d)
        beta = tuple(int(b) for b in self.beta)
        if len(beta) != self.d or any(b < 1 for b in beta):
            raise ValueError("need d positive integer derivative orders")
        object.__setattr__(self, "beta", beta)


@dataclass(frozen=True)
class Theorem213Params:
    d: int
    r: int
    p0: Exponent
    p: Sequence[Exponent]

    def __post_init__(self):
        check_dim(self.d)
        if int(self.r) < 1:
            raise ValueError("r must be a positive integer")
        object.__setattr__(self, "r", int(self.r))
        object.__setattr__(self, "p0", Exponent.of(self.p0))
        p = tuple(Exponent.of(x) for x in self.p)
        if len(p) != self.d:
            raise ValueError(f"need p_1..p_{self.d}")
        object.__setattr__(self, "p", p)
