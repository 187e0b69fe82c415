"""Exact decision procedures for sufficient conditions of A(R^d) membership.

Every rule is a pure function returning a :class:`CriterionVerdict`. All
inequalities are evaluated on ``Fraction`` values, so boundary cases are
decided exactly. A rule whose hypotheses are violated, or whose inequality
fails, reports ``not_applicable``: the sufficient condition says nothing.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import comb
from typing import Any, Iterable, Sequence

from .exponents import (
    DecayAssignment,
    Exponent,
    ExponentAssignment,
    PureDerivativeOrders,
    RadialAssignment,
    Theorem213Params,
    as_eta,
    check_dim,
    enumerate_etas,
    eta_str,
    ones,
    weight,
    zero,
)


class Status(str, Enum):
    CERTIFIED = "certified"
    NOT_APPLICABLE = "not_applicable"
    COUNTEREXAMPLE = "counterexample_exists"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


RULE_IDS = (
    "thm1",
    "thm2",
    "thm2prime",
    "cor-bounded",
    "prop-even",
    "cor-decay",
    "cor-radial",
    "thm213a",
    "thm213b",
    "thm4.1",
    "legacy-a1d",
    "legacy-a2d",
)

# Only the one-dimensional p/q rule is known to be sharp in full (its
# counterexample half covers the whole open complement).  thm213a is sharp
# along equal pure-derivative exponents, witnessed by thm213b.
SHARPNESS = {rid: "unknown" for rid in RULE_IDS}
SHARPNESS.update({"thm4.1": "sharp", "thm213a": "sharp", "thm213b": "sharp"})

C0_AC = (
    "declared: f is continuous and vanishes at infinity",
    "declared: f and D^eta f (eta != 1) are locally absolutely continuous "
    "off the coordinate hyperplanes, in each variable",
)


@dataclass(frozen=True)
class Check:
    """One inequality of a rule, with its exact slack.

    strict:    holds iff slack > 0
    nonstrict: holds iff slack >= 0
    equal:     holds iff slack == 0
    """

    name: str
    slack: Fraction
    kind: str = "strict"

    @property
    def holds(self) -> bool:
        if self.kind == "strict":
            return self.slack > 0
        if self.kind == "nonstrict":
            return self.slack >= 0
        return self.slack == 0


@dataclass(frozen=True)
class CriterionVerdict:
    rule_id: str
    status: Status
    margin: Fraction | None = None
    witness: dict[str, Any] | None = None
    notes: tuple[str, ...] = ()
    checks: tuple[Check, ...] = ()
    branch: str | None = None

    @property
    def certified(self) -> bool:
        return self.status is Status.CERTIFIED

    @property
    def sharpness(self) -> str:
        return SHARPNESS.get(self.rule_id, "unknown")

    def to_dict(self) -> dict[str, Any]:
        def q(x):
            return None if x is None else _fmt(x)

        out = {
            "rule": self.rule_id,
            "status": self.status.value,
            "margin": q(self.margin),
            "branch": self.branch,
            "sharpness": self.sharpness,
            "checks": [
                {"name": c.name, "kind": c.kind, "slack": _fmt(c.slack), "holds": c.holds}
                for c in self.checks
            ],
            "notes": list(self.notes),
        }
        if self.witness is not None:
            out["witness"] = {k: _fmt(v) if isinstance(v, Fraction) else v for k, v in self.witness.items()}
        return out


def _fmt(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def _margin(checks: Sequence[Check]) -> Fraction | None:
    # slack of the tightest strict inequality; rules without one report the tightest overall
    strict = [c.slack for c in checks if c.kind == "strict"]
    pool = strict or [c.slack if c.kind != "equal" else -abs(c.slack) for c in checks]
    return min(pool) if pool else None


def _decide(rule_id, checks, notes=(), branch=None, witness=None) -> CriterionVerdict:
    checks = tuple(checks)
    ok = all(c.holds for c in checks)
    return CriterionVerdict(
        rule_id,
        Status.CERTIFIED if ok else Status.NOT_APPLICABLE,
        _margin(checks),
        witness,
        tuple(notes),
        checks,
        branch,
    )


def _gate(rule_id, reason, notes=()) -> CriterionVerdict:
    return CriterionVerdict(rule_id, Status.NOT_APPLICABLE, None, None, (reason, *notes))


def _infinite_derivatives(a: ExponentAssignment) -> list[str]:
    return [eta_str(e) for e, p in a.table.items() if weight(e) > 0 and p.is_inf]


def check_theorem1(a: ExponentAssignment) -> CriterionVerdict:
    """Pairwise condition 1/p_0 + 1/p_eta > 1 for every eta != 0."""
    rid = "thm1"
    if a.p0.is_inf:
        return _gate(rid, "p_0 must be finite", C0_AC)
    inf = _infinite_derivatives(a)
    if inf:
        return _gate(rid, f"finite p_eta required; infinite for {inf} (see cor-bounded)", C0_AC)
    r0 = a.p0.reciprocal
    checks = [
        Check(f"1/p_0 + 1/p_{eta_str(eta)} > 1", r0 + p.reciprocal - 1)
        for eta, p in a.table.items()
        if weight(eta) > 0
    ]
    notes = C0_AC + ("the eta = 1 inequality is sharp; the others are not known to be",)
    return _decide(rid, checks, notes)


def check_theorem2(a: ExponentAssignment) -> CriterionVerdict:
    """Total reciprocal sum above 2^(d-1), derivative sum at most 2^(d-1).

    For d = 2 the derivative-sum bound may be traded for 1/p_0 + 1/p_1 > 1.
    """
    rid = "thm2"
    if a.p0.is_inf:
        return _gate(rid, "p_0 must be finite (see thm2prime)", C0_AC)
    inf = _infinite_derivatives(a)
    if inf:
        return _gate(rid, f"finite p_eta required; infinite for {inf} (see cor-bounded)", C0_AC)
    half = Fraction(2 ** (a.d - 1))
    total = Check("sum_{0<=eta<=1} 1/p_eta > 2^(d-1)", a.reciprocal_sum() - half)
    deriv = Check(
        "sum_{eta!=0} 1/p_eta <= 2^(d-1)", half - a.reciprocal_sum(include_zero=False), "nonstrict"
    )
    if deriv.holds or a.d != 2:
        return _decide(rid, [total, deriv], C0_AC, branch="derivative-sum")
    pair = Check("1/p_0 + 1/p_1 > 1", a.p0.reciprocal + a.p1.reciprocal - 1)
    if pair.holds:
        return _decide(rid, [total, pair], C0_AC, branch="d2-endpoint-pair")
    v = _decide(rid, [total, deriv, pair], C0_AC)
    return v


def check_theorem2_prime(a: ExponentAssignment, p_strict) -> CriterionVerdict:
    """Equality form: f in L_p for some p < p_0 <= inf and sum 1/p_eta = 2^(d-1)."""
    rid = "thm2prime"
    p = Exponent.of(p_strict)
    if p.is_inf:
        return _gate(rid, "the lower exponent p must be finite")
    if not p < a.p0:
        return _gate(rid, f"requires p < p_0, got p = {p}, p_0 = {a.p0}")
    inf = _infinite_derivatives(a)
    if inf:
        return _gate(rid, f"finite p_eta required for eta != 0; infinite for {inf}")
    half = Fraction(2 ** (a.d - 1))
    checks = [
        Check("sum_{0<=eta<=1} 1/p_eta = 2^(d-1)", a.reciprocal_sum() - half, "equal"),
        Check("p < p_0", p.reciprocal - a.p0.reciprocal),
    ]
    notes = C0_AC + (f"declared: f in L_{p}",)
    return _decide(rid, checks, notes)


def _missing_flags(a: ExponentAssignment, max_weight: Fraction) -> list[str]:
    need = [e for e in enumerate_etas(a.d) if 0 < weight(e) <= max_weight]
    return [eta_str(e) for e in need if e not in a.bounded]


def check_bounded_derivative_corollary(a: ExponentAssignment) -> CriterionVerdict:
    """Sum condition alone, given D^eta f bounded for all |eta| <= d/2.

    Flagged etas whose table entry is inf contribute 0 to the sum; a flagged
    eta with a finite exponent contributes its reciprocal.
    """
    rid = "cor-bounded"
    if a.p0.is_inf:
        return _gate(rid, "p_0 must be finite")
    missing = _missing_flags(a, Fraction(a.d, 2))
    if missing:
        return _gate(rid, f"D^eta f must be declared bounded for |eta| <= d/2; missing {missing}")
    half = Fraction(2 ** (a.d - 1))
    check = Check("sum_{0<=eta<=1} 1/p_eta > 2^(d-1)", a.reciprocal_sum() - half)
    notes = C0_AC + ("declared: D^eta f bounded for |eta| <= d/2",)
    return _decide(rid, [check], notes)


def check_even_d_proposition(a: ExponentAssignment) -> CriterionVerdict:
    rid = "prop-even"
    if a.d % 2:
        return _gate(rid, "dimension must be even")
    if a.p0.is_inf or a.p1.is_inf:
        return _gate(rid, "p_0 and p_1 must be finite")
    missing = _missing_flags(a, Fraction(a.d, 2) - 1)
    if missing:
        return _gate(rid, f"D^eta f must be declared bounded for |eta| <= d/2 - 1; missing {missing}")
    side = Check("1/p_0 + 1/p_1 > 1", a.p0.reciprocal + a.p1.reciprocal - 1)
    if not side.holds:
        return CriterionVerdict(
            rid, Status.NOT_APPLICABLE, side.slack, None, ("side condition 1/p_0 + 1/p_1 > 1 fails",), (side,)
        )
    half = Fraction(2 ** (a.d - 1))
    total = Check("sum_{0<=eta<=1} 1/p_eta > 2^(d-1)", a.reciprocal_sum() - half)
    notes = C0_AC + ("declared: D^eta f bounded for |eta| <= d/2 - 1",)
    return _decide(rid, [side, total], notes)


def check_decay_corollary(g: DecayAssignment) -> CriterionVerdict:
    total = sum(g.gamma.values(), Fraction(0))
    check = Check("sum gamma_chi > d 2^(d-1)", total - g.d * 2 ** (g.d - 1))
    return _decide("cor-decay", [check], ("declared: |D^chi f(x)| <= C (1+|x|)^-gamma_chi",))


def check_radial_corollary(r: RadialAssignment) -> CriterionVerdict:
    rid = "cor-radial"
    notes = C0_AC + (
        "declared: f = f_0(|x|) with f_0^(s) continuous on (0, inf) and t^s f_0^(s)(t) -> 0 "
        "for 0 <= s <= (d-1)/2 (necessary conditions, not checked here)",
    )
    if not r.smoothness_declared:
        return _gate(rid, "radial smoothness/decay hypotheses not declared", notes)
    d = r.d
    rec = [x.reciprocal for x in r.p]
    half = Fraction(2 ** (d - 1))
    total = Check(
        "sum_j C(d,j)/p_j > 2^(d-1)", sum((comb(d, j) * rec[j] for j in range(d + 1)), Fraction(0)) - half
    )
    if d % 2:
        return _decide(rid, [total], notes)
    pair = Check("1/p_0 + 1/p_d > 1", rec[0] + rec[d] - 1)
    if pair.holds:
        return _decide(rid, [total, pair], notes, branch="endpoint-pair")
    m = d // 2
    upper = Fraction(comb(d, m), 2) * rec[m] + sum((comb(d, j) * rec[j] for j in range(m + 1, d + 1)), Fraction(0))
    alt = Check("C(d,d/2)/(2 p_{d/2}) + sum_{j>d/2} C(d,j)/p_j <= 2^(d-1)", half - upper, "nonstrict")
    if alt.holds:
        return _decide(rid, [total, alt], notes, branch="upper-half-sum")
    return _decide(rid, [total, pair, alt], notes)


def check_theorem213a(t: Theorem213Params) -> CriterionVerdict:
    """r < (2r-d)/p_0 + sum 1/p_j <= (2r-d)/p_0 + r, with r > d/2."""
    rid = "thm213a"
    if not 2 * t.r > t.d:
        return _gate(rid, f"requires r > d/2, got r = {t.r}, d = {t.d}")
    if t.p0.is_inf or any(p.is_inf or p.value == 1 for p in t.p):
        return _gate(rid, "requires 1 <= p_0 < inf and 1 < p_j < inf")
    lead = Fraction(2 * t.r - t.d) * t.p0.reciprocal
    middle = lead + sum((p.reciprocal for p in t.p), Fraction(0))
    checks = [
        Check("r < (2r-d)/p_0 + sum 1/p_j", middle - t.r),
        Check("(2r-d)/p_0 + sum 1/p_j <= (2r-d)/p_0 + r", lead + t.r - middle, "nonstrict"),
    ]
    notes = (
        "declared: f continuous, vanishing at infinity, in L_p0",
        "declared: d^(r-1) f/dx_j^(r-1) locally absolutely continuous in x_j",
    )
    return _decide(rid, checks, notes)


def check_theorem213b(d: int, r: int, p, q) -> CriterionVerdict:
    """Counterexample region (2r-d)/p + d/q < r for pure r-th derivatives in L_q."""
    from .gallery import construct_counterexample_params

    rid = "thm213b"
    check_dim(d)
    r = int(r)
    if r < 1:
        raise ValueError("r must be a positive integer")
    p, q = Exponent.of(p), Exponent.of(q)
    if p.is_inf or q.is_inf or q.value == 1:
        return _gate(rid, "requires 1 <= p < inf and 1 < q < inf")
    region = Check("(2r-d)/p + d/q < r", r - (Fraction(2 * r - d) * p.reciprocal + d * q.reciprocal))
    if not region.holds:
        return CriterionVerdict(
            rid, Status.INCONCLUSIVE, region.slack, None, ("outside the counterexample region",), (region,)
        )
    witness: dict[str, Any] = {"d": d, "r": r, "p": str(p), "q": str(q), "region_slack": region.slack}
    if d == 1 and r == 1:
        alpha, beta = construct_counterexample_params(p, q)
        witness.update(alpha=alpha, beta=beta)
    return CriterionVerdict(rid, Status.COUNTEREXAMPLE, region.slack, witness, (), (region,))


def check_dim1(p, q) -> CriterionVerdict:
    """One-dimensional f in L_p, f' in L_q: certified, counterexample or open."""
    from .gallery import construct_counterexample_params, counterexample_checks

    rid = "thm4.1"
    p, q = Exponent.of(p), Exponent.of(q)
    if p.is_inf or q.is_inf or q.value == 1:
        return _gate(rid, "requires 1 <= p < inf and 1 < q < inf")
    s = p.reciprocal + q.reciprocal
    pair = Check("1/p + 1/q > 1", s - 1)
    notes = ("declared: f continuous, vanishing at infinity, locally absolutely continuous",)
    if pair.holds:
        return _decide(rid, [pair], notes, branch="p-q-sum")
    if s == 1:
        if p.value <= 2 and q.value <= 2:
            box = Check("p <= 2 and q <= 2", min(2 - p.value, 2 - q.value), "nonstrict")
            return CriterionVerdict(
                rid, Status.CERTIFIED, Fraction(0), None, notes, (pair, box), "A-1 range"
            )
        return CriterionVerdict(
            rid, Status.INCONCLUSIVE, Fraction(0), None,
            notes + ("1/p + 1/q = 1 outside p, q <= 2 is not decided",), (pair,),
        )
    alpha, beta = construct_counterexample_params(p, q)
    wit_checks = counterexample_checks(p, q, alpha, beta)
    witness = {"alpha": alpha, "beta": beta, "function": "m_{alpha,beta}, d = 1"}
    return CriterionVerdict(rid, Status.COUNTEREXAMPLE, s - 1, witness, (), (pair, *wit_checks))


def check_legacy_a1d(orders: PureDerivativeOrders) -> CriterionVerdict:
    s = sum((Fraction(1, b) for b in orders.beta), Fraction(0))
    check = Check("sum 1/beta_j < 2", 2 - s)
    notes = ("declared: f and d^beta_j f/dx_j^beta_j in L_2",)
    return _decide("legacy-a1d", [check], notes)


def check_legacy_a2d(a: ExponentAssignment) -> CriterionVerdict:
    rid = "legacy-a2d"
    if a.p0.value != 1:
        return _gate(rid, "requires f in L_1 (p_0 = 1)")
    ps = {p for eta, p in a.table.items() if weight(eta) > 0}
    if len(ps) != 1:
        return _gate(rid, "requires one common exponent for all D^eta f, eta != 0")
    (p,) = ps
    if p.is_inf or p.value > 2:
        return _gate(rid, f"requires 1 < p <= 2, got p = {p}")
    return _decide(rid, [Check("p <= 2", 2 - p.value, "nonstrict")], ("declared: f in L_1",))


def check_legacy_rules(x) -> CriterionVerdict:
    if isinstance(x, PureDerivativeOrders):
        return check_legacy_a1d(x)
    if isinstance(x, ExponentAssignment):
        return check_legacy_a2d(x)
    raise TypeError(f"no legacy rule for {type(x).__name__}")


@dataclass
class RuleInputs:
    """Whichever typed inputs are available; rules with missing inputs are skipped."""

    assignment: ExponentAssignment | None = None
    p_strict: Exponent | None = None
    decay: DecayAssignment | None = None
    radial: RadialAssignment | None = None
    thm213: Theorem213Params | None = None
    thm213b: tuple | None = None  # (d, r, p, q)
    dim1: tuple | None = None  # (p, q)
    orders: PureDerivativeOrders | None = None
    extra_notes: list[str] = field(default_factory=list)


def run_all(bundle: RuleInputs) -> list[CriterionVerdict]:
    """Apply every rule whose inputs are present, in ``RULE_IDS`` order."""
    out: dict[str, CriterionVerdict] = {}
    a = bundle.assignment
    if a is not None:
        out["thm1"] = check_theorem1(a)
        out["thm2"] = check_theorem2(a)
        if bundle.p_strict is not None:
            out["thm2prime"] = check_theorem2_prime(a, bundle.p_strict)
        out["cor-bounded"] = check_bounded_derivative_corollary(a)
        if a.d % 2 == 0:
            out["prop-even"] = check_even_d_proposition(a)
        out["legacy-a2d"] = check_legacy_a2d(a)
    if bundle.decay is not None:
        out["cor-decay"] = check_decay_corollary(bundle.decay)
    if bundle.radial is not None:
        out["cor-radial"] = check_radial_corollary(bundle.radial)
    if bundle.thm213 is not None:
        out["thm213a"] = check_theorem213a(bundle.thm213)
    if bundle.thm213b is not None:
        out["thm213b"] = check_theorem213b(*bundle.thm213b)
    dim1 = bundle.dim1
    if dim1 is None and a is not None and a.d == 1:
        dim1 = (a.p0, a.p1)
    if dim1 is not None:
        out["thm4.1"] = check_dim1(*dim1)
    if bundle.orders is not None:
        out["legacy-a1d"] = check_legacy_a1d(bundle.orders)
    return [out[r] for r in RULE_IDS if r in out]


def overall_status(verdicts: Iterable[CriterionVerdict]) -> Status:
    """certified if any rule certifies; else the most informative remaining status."""
    statuses = {v.status for v in verdicts}
    for s in (Status.CERTIFIED, Status.COUNTEREXAMPLE, Status.INCONCLUSIVE):
        if s in statuses:
            return s
    return Status.NOT_APPLICABLE


__all__ = [
    "Check",
    "CriterionVerdict",
    "RULE_IDS",
    "RuleInputs",
    "Status",
    "check_bounded_derivative_corollary",
    "check_decay_corollary",
    "check_dim1",
    "check_even_d_proposition",
    "check_legacy_a1d",
    "check_legacy_a2d",
    "check_legacy_rules",
    "check_radial_corollary",
    "check_theorem1",
    "check_theorem2",
    "check_theorem213a",
    "check_theorem213b",
    "check_theorem2_prime",
    "overall_status",
    "run_all",
]
