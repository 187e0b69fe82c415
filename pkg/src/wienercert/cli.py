"""wienercert command line.

    wienercert <command> [mode] key=value ... [--config FILE] [--out DIR]
               [--seed N] [--threads N] [--json | --csv]

Commands: criteria, region, bernstein, hardy (check | lemma-star | constant),
gallery (info | counterexample | exponents), norms, anorm.

Parameters come from a flat key=value file (``#`` starts a comment) and from
key=value arguments, the latter winning. Every JSON record carries the
resolved configuration, so feeding it back as a config file reproduces the
run. Exit codes: 0 certified/pass, 1 negative, 2 inconclusive, 3 usage.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction
from typing import Callable

import numpy as np

from . import bernstein, criteria, fourier, gallery, hardy
from .criteria import RuleInputs, Status
from .exponents import (
    DecayAssignment,
    Exponent,
    ExponentAssignment,
    PureDerivativeOrders,
    RadialAssignment,
    Theorem213Params,
    as_eta,
    enumerate_etas,
    eta_str,
    ones,
)
from .field import SampledField, grid_derivative, load_field, lp_norm, sample

EXIT_OK, EXIT_NEGATIVE, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 3

DEFAULT_COUNTS = {1: 16385, 2: 513, 3: 65}


class UsageError(Exception):
    pass


# --------------------------------------------------------------------------
# configuration


class Config:
    """Raw key=value settings plus the record of every value a command resolved."""

    def __init__(self, raw: dict[str, tuple[str, str]]):
        self.raw = raw  # key -> (value, where)
        self.resolved: dict[str, str] = {}

    def has(self, key: str) -> bool:
        return key in self.raw

    def keys(self):
        return self.raw.keys()

    def get(self, key: str, parse: Callable = str, default=None, required: bool = False):
        if key in self.raw:
            text, where = self.raw[key]
            try:
                value = parse(text)
            except (ValueError, ZeroDivisionError, TypeError) as exc:
                raise UsageError(f"{where}: bad value for {key}: {exc}") from None
            self.resolved[key] = text
            return value
        if required:
            raise UsageError(f"missing required key {key!r}")
        if default is not None:
            self.resolved[key] = default if isinstance(default, str) else _fmt(default)
            return parse(default) if isinstance(default, str) else default
        return None

    def prefixed(self, prefix: str) -> dict[str, str]:
        return {k[len(prefix) :]: k for k in self.raw if k.startswith(prefix)}


def _fmt(x) -> str:
    if isinstance(x, (list, tuple)):
        return ",".join(_fmt(v) for v in x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def parse_config_text(text: str, source: str) -> dict[str, tuple[str, str]]:
    out = {}
    for n, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep or not key.strip():
            raise UsageError(f"{source}:{n}: expected key=value, got {line!r}")
        out[key.strip()] = (value.strip(), f"{source}:{n}")
    return out


def _parse_assignments(items: list[str]) -> tuple[list[str], dict[str, tuple[str, str]]]:
    positional, out = [], {}
    for item in items:
        key, sep, value = item.partition("=")
        if sep and key:
            out[key.strip()] = (value.strip(), f"argument {item!r}")
        else:
            positional.append(item)
    return positional, out


def _exponent(text: str) -> Exponent:
    return Exponent.of(text)


def _exponent_list(text: str) -> list[Exponent]:
    return [Exponent.of(t) for t in text.split(",") if t.strip()]


def _float_list(text: str) -> list[float]:
    return [float(Fraction(t.strip())) if "/" in t else float(t) for t in text.split(",") if t.strip()]


def _int_list(text: str) -> list[int]:
    return [int(t) for t in text.split(",") if t.strip()]


def _bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"expected true/false, got {text!r}")


def parse_grid(text: str) -> list[Exponent]:
    """'1..4:1/4' (inclusive, rational step), a comma list, or '' for an empty grid."""
    text = text.strip()
    if not text:
        return []
    if ".." in text:
        span, _, step = text.partition(":")
        lo, _, hi = span.partition("..")
        lo, hi = Fraction(lo.strip()), Fraction(hi.strip())
        step = Fraction(step.strip()) if step.strip() else Fraction(1)
        if step <= 0:
            raise ValueError("grid step must be positive")
        out, x = [], lo
        while x <= hi:
            out.append(Exponent.of(x))
            x += step
        return out
    return _exponent_list(text)


def _nice(x):
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, Exponent):
        return str(x)
    return x


# --------------------------------------------------------------------------
# criteria and region


CRITERIA_KEYS = {"d", "p0", "p1", "pd", "bounded", "p_strict", "gamma", "radial", "smooth", "r", "pj", "p", "q", "beta"}
CRITERIA_PREFIXES = ("p.", "gamma.")


def _criteria_inputs(cfg: Config) -> RuleInputs:
    d = cfg.get("d", int, required=True)
    bundle = RuleInputs()
    overrides = {bits: cfg.get(key, _exponent) for bits, key in sorted(cfg.prefixed("p.").items())}
    if cfg.has("p0") and (cfg.has("pd") or cfg.has("p1") or overrides):
        p0 = cfg.get("p0", _exponent)
        pd = cfg.get("pd", _exponent)
        if cfg.has("p1"):
            overrides[eta_str(ones(d))] = cfg.get("p1", _exponent)
        bounded = cfg.get("bounded", lambda t: [b.strip() for b in t.split(",") if b.strip()]) or []
        try:
            bundle.assignment = ExponentAssignment.build(d, p0, pd, overrides, bounded)
        except ValueError as exc:
            raise UsageError(f"exponent assignment: {exc}") from None
        if cfg.has("p_strict"):
            bundle.p_strict = cfg.get("p_strict", _exponent)
    gammas = cfg.prefixed("gamma.")
    if cfg.has("gamma") or gammas:
        base = cfg.get("gamma", Fraction)
        table = {e: base for e in enumerate_etas(d)}
        for bits, key in gammas.items():
            table[as_eta(bits, d)] = cfg.get(key, Fraction)
        if any(v is None for v in table.values()):
            raise UsageError("decay rates: give gamma or gamma.<bits> for every eta")
        bundle.decay = DecayAssignment(d, table)
    if cfg.has("radial"):
        bundle.radial = RadialAssignment(d, cfg.get("radial", _exponent_list), cfg.get("smooth", _bool, "false"))
    if cfg.has("r") and cfg.has("pj"):
        bundle.thm213 = Theorem213Params(d, cfg.get("r", int), cfg.get("p0", _exponent, required=True), cfg.get("pj", _exponent_list))
    if cfg.has("p") and cfg.has("q"):
        p, q = cfg.get("p", _exponent), cfg.get("q", _exponent)
        if cfg.has("r"):
            bundle.thm213b = (d, cfg.get("r", int), p, q)
        elif d == 1:
            bundle.dim1 = (p, q)
        else:
            raise UsageError("p and q without r apply only in d = 1")
    if cfg.has("beta"):
        bundle.orders = PureDerivativeOrders(d, cfg.get("beta", _int_list))
    return bundle


def cmd_criteria(cfg: Config, ctx) -> int:
    try:
        bundle = _criteria_inputs(cfg)
        verdicts = criteria.run_all(bundle)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not verdicts:
        raise UsageError("config supplies no rule inputs")
    if ctx.csv:
        rows = [["rule", "status", "margin", "branch", "sharpness"]]
        for v in verdicts:
            rows.append([v.rule_id, v.status.value, _nice(v.margin) if v.margin is not None else "", v.branch or "", v.sharpness])
        ctx.emit_csv(rows)
    else:
        for v in verdicts:
            ctx.emit({"verdict": v.to_dict()})
    ctx.write_csv("criteria.csv", [["rule", "status"]] + [[v.rule_id, v.status.value] for v in verdicts])
    statuses = {v.status for v in verdicts}
    if Status.CERTIFIED in statuses:
        return EXIT_OK
    if Status.INCONCLUSIVE in statuses:
        return EXIT_INCONCLUSIVE
    return EXIT_NEGATIVE


REGION_RULES = ("thm4.1", "thm213b", "thm1", "thm2")


def _region_status(rule: str, d: int, r: int, p: Exponent, q: Exponent) -> str:
    try:
        if rule == "thm4.1":
            return criteria.check_dim1(p, q).status.value
        if rule == "thm213b":
            return criteria.check_theorem213b(d, r, p, q).status.value
        a = ExponentAssignment.build(d, p, q)
        check = criteria.check_theorem1 if rule == "thm1" else criteria.check_theorem2
        return check(a).status.value
    except ValueError:
        return "invalid"


def cmd_region(cfg: Config, ctx) -> int:
    rule = cfg.get("rule", required=True)
    if rule not in REGION_RULES:
        raise UsageError(f"unknown region rule {rule!r}; choose from {', '.join(REGION_RULES)}")
    d = cfg.get("d", int, 1)
    r = cfg.get("r", int, 1)
    ps = cfg.get("p", parse_grid, "1..4:1/4")
    qs = cfg.get("q", parse_grid, "1..4:1/4")
    rows = [["p", "q", "status"]]
    for p in ps:
        for q in qs:
            rows.append([str(p), str(q), _region_status(rule, d, r, p, q)])
    if ctx.json:
        ctx.emit({"rows": rows[1:], "columns": rows[0]})
    else:
        ctx.emit_csv(rows)
    ctx.write_csv(f"region_{rule}.csv", rows)
    return EXIT_OK


# --------------------------------------------------------------------------
# numerical commands


FIELD_KEYS = {"function", "field", "d", "N", "box"}


def _load_input(cfg: Config):
    """(SampledField, GalleryFunction or None) from function=... or field=path."""
    if cfg.has("field"):
        if cfg.has("function"):
            raise UsageError("give either function= or field=, not both")
        path = cfg.get("field")
        try:
            return load_field(path), None
        except (OSError, ValueError) as exc:
            raise UsageError(f"cannot read field {path!r}: {exc}") from None
    name = cfg.get("function", required=True)
    try:
        fn = gallery.gallery(name, cfg.get("d", int))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cfg.resolved["d"] = str(fn.d)
    default_box = fn.extent if math.isfinite(fn.extent) else None
    box = cfg.get("box", float, default_box)
    if box is None:
        raise UsageError(f"{name} has unbounded support; set box=<half-width>")
    n = cfg.get("N", int, DEFAULT_COUNTS[fn.d])
    if n < 2:
        raise UsageError("N must be at least 2")
    f = sample(fn, [-box] * fn.d, [box] * fn.d, [n] * fn.d)
    return f, fn


def _scale_ranges(cfg: Config, f: SampledField) -> list[bernstein.ScaleRange]:
    finest = min(math.floor(math.log2(math.pi / h)) for h in f.spacing)
    default = f"{max(finest - 64, -6)}..{finest}"
    text = cfg.get("scales", str, default)
    try:
        ranges = [bernstein.ScaleRange.parse(t.strip()) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"scales: {exc}") from None
    if len(ranges) == 1:
        ranges = ranges * f.d
    if len(ranges) != f.d:
        raise UsageError(f"scales: need 1 or {f.d} ranges")
    return ranges


def cmd_bernstein(cfg: Config, ctx) -> int:
    f, _ = _load_input(cfg)
    ranges = _scale_ranges(cfg, f)
    shells = cfg.get("shells", int, bernstein.DEFAULT_SHELLS)
    delta = cfg.get("delta", float, bernstein.DEFAULT_DELTA)
    try:
        rep = bernstein.bernstein_sum_nd(f, ranges, shells, delta)
    except bernstein.ResolutionError as exc:
        raise UsageError(str(exc)) from None
    if ctx.csv:
        ctx.emit_csv(rep.csv_rows())
    else:
        ctx.emit({"report": rep.to_dict()})
    ctx.write_csv("bernstein_terms.csv", rep.csv_rows())
    return {bernstein.CERTIFIED: EXIT_OK, bernstein.INCONCLUSIVE: EXIT_INCONCLUSIVE}.get(rep.verdict, EXIT_NEGATIVE)


LEMMA_TOLERANCE = 1e-2


def cmd_hardy(cfg: Config, ctx) -> int:
    mode = ctx.mode or "check"
    if mode == "constant":
        return _hardy_constant(cfg, ctx)
    if mode not in ("check", "lemma-star"):
        raise UsageError(f"unknown hardy mode {mode!r}; choose check, lemma-star or constant")
    f, _ = _load_input(cfg)
    try:
        if mode == "check":
            rep = hardy.hardy_check(
                f,
                cfg.get("q", _exponent, "2"),
                cfg.get("Q", _exponent, "2"),
                cfg.get("h", _float_list, "1"),
                cfg.get("axes", _int_list),
            )
            code = EXIT_OK
        else:
            rep = hardy.lemma_star_check(
                f, cfg.get("q", _exponent, "2"), cfg.get("h", _float_list, "1"), cfg.get("derivative", str, "cell")
            )
            code = EXIT_OK if rep.ratio <= 1 + LEMMA_TOLERANCE else EXIT_NEGATIVE
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    data = rep.to_dict()
    rows = [list(data), [_fmt(v) for v in data.values()]]
    if ctx.csv:
        ctx.emit_csv(rows)
    else:
        ctx.emit({"report": data})
    ctx.write_csv(f"hardy_{mode}.csv", rows)
    return code


def _hardy_constant(cfg: Config, ctx) -> int:
    if ctx.seed is None:
        raise UsageError("hardy constant is randomized; --seed is required")
    src = hardy.PiecewiseConstantSource(
        cfg.get("d", int, 1), cfg.get("levels", int, 6), cfg.get("samples_per_cell", int, 8), cfg.get("zero_prob", float, 0.3)
    )
    hs = cfg.get("h", _float_list, ",".join(f"{2.0**k!r}" for k in range(-5, 6)))
    trials = cfg.get("trials", int, 200)
    try:
        table = hardy.ratio_table(
            src, cfg.get("q", _exponent, "2"), cfg.get("Q", _exponent, "4"), cfg.get("axes", _int_list), hs, trials, ctx.seed, ctx.threads
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rows = [["trial", "h", "ratio"]] + [[i, _fmt(list(h)), repr(r)] for i, h, r in table]
    sup = max(r for _, _, r in table)
    if ctx.csv:
        ctx.emit_csv(rows)
    else:
        ctx.emit({"report": {"empirical_constant": sup, "trials": trials, "widths": hs}})
    ctx.write_csv("hardy_constant.csv", rows)
    return EXIT_OK if math.isfinite(sup) else EXIT_NEGATIVE


def cmd_gallery(cfg: Config, ctx) -> int:
    mode = ctx.mode or "info"
    if mode == "counterexample":
        p, q = cfg.get("p", _exponent, required=True), cfg.get("q", _exponent, required=True)
        try:
            alpha, beta = gallery.construct_counterexample_params(p, q)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        checks = gallery.counterexample_checks(p, q, alpha, beta)
        data = {
            "alpha": str(alpha),
            "beta": str(beta),
            "checks": {c.name: c.holds for c in checks},
            "membership": gallery.classify_m(gallery.ModelParams(alpha, beta)).status,
        }
        code = EXIT_OK if all(c.holds for c in checks) else EXIT_NEGATIVE
    elif mode in ("info", "exponents"):
        try:
            fn = gallery.gallery(cfg.get("function", required=True), cfg.get("d", int))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        cfg.resolved["d"] = str(fn.d)
        data = {
            "name": fn.name,
            "d": fn.d,
            "membership": fn.membership.status,
            "basis": fn.membership.basis,
            "params": {k: _nice(v) for k, v in fn.params.items()},
        }
        if mode == "exponents":
            if not fn.name.startswith("m:"):
                raise UsageError("exponent ranges are tabulated for m only")
            mp = gallery.ModelParams(fn.params["alpha"], fn.params["beta"], fn.d, fn.params["a"], fn.params["b"])
            ranges = {}
            for eta in (as_eta("0" * fn.d), ones(fn.d)):
                try:
                    ranges[eta_str(eta)] = str(gallery.m_hypothesis_exponents(mp, eta))
                except ValueError as exc:
                    ranges[eta_str(eta)] = f"unavailable: {exc}"
            data["exponent_ranges"] = ranges
        code = EXIT_OK
    else:
        raise UsageError(f"unknown gallery mode {mode!r}; choose info, counterexample or exponents")
    if ctx.csv:
        flat = {k: v for k, v in data.items() if not isinstance(v, dict)}
        ctx.emit_csv([list(flat), [_fmt(v) for v in flat.values()]])
    else:
        ctx.emit({"report": data})
    return code


def cmd_norms(cfg: Config, ctx) -> int:
    f, _ = _load_input(cfg)
    ps = cfg.get("p", _exponent_list, "1,2,inf")
    eta = cfg.get("eta", str)
    target = f
    if eta is not None:
        try:
            target = grid_derivative(f, as_eta(eta, f.d))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    norms = {str(p): lp_norm(target, p) for p in ps}
    rows = [["p", "norm"]] + [[k, repr(v)] for k, v in norms.items()]
    if ctx.csv:
        ctx.emit_csv(rows)
    else:
        ctx.emit({"report": {"norms": norms, "counts": list(f.counts), "spacing": list(f.spacing)}})
    ctx.write_csv("norms.csv", rows)
    return EXIT_OK


def cmd_anorm(cfg: Config, ctx) -> int:
    if cfg.has("field"):
        src, _ = _load_input(cfg)
    else:
        try:
            src = gallery.gallery(cfg.get("function", required=True), cfg.get("d", int))
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        cfg.resolved["d"] = str(src.d)
    R_list = cfg.get("R", _float_list, "16,32,64,128")
    if cfg.has("Nfixed"):
        n = cfg.get("Nfixed", int)
        rule = lambda R: n  # noqa: E731
    else:
        rule = cfg.get("spacing", float, 2.0**-6)
    try:
        trend = fourier.a_norm_trend(
            src, R_list, rule, cfg.get("converged_below", float, 0.05), cfg.get("growing_above", float, 0.1), ctx.threads
        )
    except MemoryError as exc:
        raise UsageError(f"{exc}; lower R or raise spacing") from None
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if ctx.csv:
        ctx.out_stream.write(trend.to_csv())
    else:
        ctx.emit({"report": trend.to_dict()})
    ctx.write_text("anorm_trend.csv", trend.to_csv())
    return {fourier.CONVERGED: EXIT_OK, fourier.GROWING: EXIT_NEGATIVE}.get(trend.classification, EXIT_INCONCLUSIVE)


COMMANDS = {
    "criteria": (cmd_criteria, CRITERIA_KEYS, CRITERIA_PREFIXES),
    "region": (cmd_region, {"rule", "d", "r", "p", "q"}, ()),
    "bernstein": (cmd_bernstein, FIELD_KEYS | {"scales", "shells", "delta"}, ()),
    "hardy": (
        cmd_hardy,
        FIELD_KEYS | {"q", "Q", "h", "axes", "derivative", "levels", "samples_per_cell", "zero_prob", "trials"},
        (),
    ),
    "gallery": (cmd_gallery, {"function", "d", "p", "q"}, ()),
    "norms": (cmd_norms, FIELD_KEYS | {"p", "eta"}, ()),
    "anorm": (cmd_anorm, {"function", "field", "d", "R", "spacing", "Nfixed", "converged_below", "growing_above"}, ()),
}
GLOBAL_KEYS = {"mode", "seed"}


# --------------------------------------------------------------------------
# driver


class Context:
    def __init__(self, command, mode, cfg, out_dir, seed, threads, fmt, stream):
        self.command = command
        self.mode = mode
        self.cfg = cfg
        self.out_dir = out_dir
        self.seed = seed
        self.threads = threads
        self.json = fmt == "json"
        self.csv = fmt == "csv"
        self.out_stream = stream

    def _config_record(self) -> dict:
        rec = {k: v for k, (v, _) in self.cfg.raw.items()}
        rec.update(self.cfg.resolved)
        if self.mode:
            rec["mode"] = self.mode
        if self.seed is not None:
            rec["seed"] = str(self.seed)
        return rec

    def emit(self, obj: dict) -> None:
        record = {"command": self.command, "config": self._config_record(), **obj}
        self.out_stream.write(json.dumps(record, sort_keys=True, default=_nice) + "\n")

    def emit_csv(self, rows) -> None:
        w = csv.writer(self.out_stream, lineterminator="\n")
        w.writerows(rows)

    def write_text(self, name: str, text: str) -> None:
        if self.out_dir is None:
            return
        os.makedirs(self.out_dir, exist_ok=True)
        with open(os.path.join(self.out_dir, name), "w", newline="") as fh:
            fh.write(text)

    def write_csv(self, name: str, rows) -> None:
        buf = io.StringIO()
        csv.writer(buf, lineterminator="\n").writerows(rows)
        self.write_text(name, buf.getvalue())


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="wienercert", description="Wiener algebra membership criteria and numerical certificates.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("params", nargs="*", help="optional mode, then key=value settings")
    p.add_argument("--config", help="flat key=value file; '#' starts a comment")
    p.add_argument("--out", help="directory for CSV data files")
    p.add_argument("--seed", type=int, help="seed for randomized commands (unsigned 64-bit)")
    p.add_argument("--threads", type=int, default=1)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json")
    fmt.add_argument("--csv", dest="fmt", action="store_const", const="csv")
    return p


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_intermixed_args(argv)
        handler, allowed, prefixes = COMMANDS[args.command]
        raw = {}
        if args.config:
            try:
                with open(args.config) as fh:
                    raw.update(parse_config_text(fh.read(), args.config))
            except OSError as exc:
                raise UsageError(f"cannot read config: {exc}") from None
        positional, flags = _parse_assignments(args.params)
        raw.update(flags)
        for key, (_, where) in raw.items():
            if key not in allowed and key not in GLOBAL_KEYS and not key.startswith(prefixes or ("\0",)):
                raise UsageError(f"{where}: unknown key {key!r} for {args.command}")
        if len(positional) > 1:
            raise UsageError(f"unexpected arguments {positional[1:]}")
        mode = positional[0] if positional else (raw.pop("mode")[0] if "mode" in raw else None)
        raw.pop("mode", None)
        seed = args.seed
        if "seed" in raw:
            text, where = raw.pop("seed")
            if seed is None:
                try:
                    seed = int(text)
                except ValueError:
                    raise UsageError(f"{where}: seed must be an integer") from None
        if seed is not None and not 0 <= seed < 2**64:
            raise UsageError("seed must be an unsigned 64-bit integer")
        if args.threads < 1:
            raise UsageError("--threads must be >= 1")
        if mode is not None and args.command not in ("hardy", "gallery"):
            raise UsageError(f"{args.command} takes no mode, got {mode!r}")
        ctx = Context(args.command, mode, Config(raw), args.out, seed, args.threads, args.fmt, stdout)
        return handler(ctx.cfg, ctx)
    except UsageError as exc:
        stderr.write(f"wienercert: error: {exc}\n")
        return EXIT_USAGE


def main(argv=None) -> None:
    np.seterr(all="ignore")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
