"""Command line interface: ``escaperate <command> [options]``.

Exit codes: 0 success, 1 bad input, 2 a numerical cross-check failed.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .constructions import ConstructionParams, construct_property_P, max_m_bound, verify_property_P
from .errors import MethodDisagreementError, SingularMatrixError, ToleranceError, UserInputError
from .escape import (
    AGREEMENT_TOL,
    HoleSpec,
    NoPeriodicPointWarning,
    combinatorial_entropy,
    escape_rate_combinatorial,
    escape_rate_spectral,
    hole_measure,
    minimal_period,
    poincare_recurrence_time,
)
from .oracle import fit_escape_rate, simulate_survival
from .shift import DEFAULT_MAX_DIM, SubshiftSpec, TransitionMatrix, higher_block_matrix
from .spectral import ParryMeasure, perron, topological_entropy
from .svg import survival_svg
from .tables import TABLE_IDS, check_table, compute_table
from .torus import Rectangle, TorusMapSpec, rectangle_to_words
from .words import WordSet


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


class _Output:
    """Collects key/value results and renders them as text, JSON or CSV."""

    def __init__(self, args):
        self.args = args
        self.items: dict[str, Any] = {}

    def add(self, key: str, value: Any) -> None:
        self.items[key] = value

    def _text(self, v: Any) -> str:
        p = self.args.precision
        if isinstance(v, float):
            return "inf" if math.isinf(v) else f"{v:.{p}f}"
        if isinstance(v, (list, tuple)):
            return ",".join(self._text(x) for x in v)
        return str(v)

    def emit(self) -> None:
        if self.args.json:
            print(json.dumps(_jsonable(self.items), indent=2, sort_keys=True))
        else:
            for k, v in self.items.items():
                print(f"{k}: {self._text(v)}")
        if self.args.csv:
            rows = ["key,value"] + [f"{k},\"{self._text(v)}\"" for k, v in self.items.items()]
            _write(self.args.csv, "\n".join(rows) + "\n")


def _jsonable(v: Any) -> Any:
    if isinstance(v, float) and math.isinf(v):
        return "inf" if v > 0 else "-inf"
    if isinstance(v, dict):
        return {k: _jsonable(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, np.generic):
        return v.item()
    return v


def _write(path: str, text: str) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UserInputError(f"cannot read {path}: {exc.strerror}") from exc


def _ambient(args) -> SubshiftSpec:
    if getattr(args, "shift", None):
        text = _read(args.shift)
        first = next((l.strip() for l in text.splitlines() if l.strip() and not l.startswith("#")), "")
        if first.startswith("dim="):
            return SubshiftSpec.from_matrix(TransitionMatrix.from_text(text))
        ws = WordSet.from_text(text)
        return SubshiftSpec(ws.q, ws)
    if args.q is None:
        raise UserInputError("give the number of symbols with --q or a shift file with --shift")
    if getattr(args, "forbid", None):
        return SubshiftSpec.from_strings(args.q, _split(args.forbid))
    return SubshiftSpec.full(args.q)


def _split(text: str) -> list[str]:
    return [t.strip() for t in text.replace(" ", ",").split(",") if t.strip()]


def _hole(args, ambient: SubshiftSpec) -> HoleSpec:
    if args.hole_file:
        words = WordSet.from_text(_read(args.hole_file))
    else:
        words = WordSet.from_strings(_split(args.hole or ""), ambient.q)
    return HoleSpec.build(ambient, words)


def _quiet_tau(h: HoleSpec) -> tuple[int, bool]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", NoPeriodicPointWarning)
        tau = minimal_period(h)
    return tau, bool(caught)


def cmd_escape(args) -> int:
    ambient = _ambient(args)
    h = _hole(args, ambient)
    out = _Output(args)
    out.add("hole", [w.format() for w in h.hole_words])
    results = {}
    if args.method in ("spectral", "both"):
        results["spectral"] = escape_rate_spectral(h, args.max_dim)
    if args.method in ("comb", "both"):
        if not ambient.is_full:
            raise UserInputError("combinatorial method requires full shift")
        results["comb"] = escape_rate_combinatorial(ambient.q, h.hole_words)
    for name, res in results.items():
        out.add(f"rho_{name}", res.rho)
        out.add(f"lambda_ambient_{name}", res.lambda_ambient)
        out.add(f"lambda_with_hole_{name}", res.lambda_with_hole)
    if "comb" in results:
        out.add("F", results["comb"].details["F"])
        out.add("recurrence", results["comb"].details["recurrence"])
    if len(results) == 2:
        a, b = results["spectral"].rho, results["comb"].rho
        diff = 0.0 if math.isinf(a) and math.isinf(b) else abs(a - b)
        out.add("difference", diff)
        if not diff <= AGREEMENT_TOL:
            out.emit()
            raise MethodDisagreementError(a, b, AGREEMENT_TOL)
    if len(h.hole_words):
        tau, fallback = _quiet_tau(h)
        out.add("tau_min", tau)
        if fallback:
            out.add("tau_min_note", "no periodic point of period <= n in the hole; reported n")
        out.add("poincare_time", poincare_recurrence_time(h, args.max_dim))
        out.add("hole_measure", hole_measure(h, ParryMeasure(ambient, max_dim=args.max_dim)))
    out.emit()
    return 0


def cmd_table(args) -> int:
    table = compute_table(args.id, args.max_dim)
    if args.json:
        print(json.dumps(table.to_json(), indent=2, sort_keys=True))
    else:
        text = table.to_csv(args.precision)
        if args.csv:
            _write(args.csv, text)
        else:
            sys.stdout.write(text)
    if args.check:
        problems = check_table(table)
        for p in problems:
            print(p, file=sys.stderr)
        if problems:
            raise ToleranceError(f"table {args.id}: {len(problems)} mismatches")
        print(f"table {args.id}: all {len(table.rows)} rows match", file=sys.stderr)
    return 0


def cmd_rect(args) -> int:
    spec = TorusMapSpec(args.M, args.N)
    R = Rectangle(args.i, args.j, args.m, args.n)
    words = rectangle_to_words(spec, R)
    h = HoleSpec.build(SubshiftSpec.full(spec.q), words)
    spectral = escape_rate_spectral(h, args.max_dim)
    comb = escape_rate_combinatorial(spec.q, h.hole_words)
    out = _Output(args)
    out.add("rectangle", R.label())
    out.add("words", [w.format() for w in words])
    out.add("measure", str(R.measure(spec)))
    tau, _ = _quiet_tau(h)
    out.add("tau_min", tau)
    out.add("rho_spectral", spectral.rho)
    out.add("rho_comb", comb.rho)
    out.add("F", comb.details["F"])
    diff = 0.0 if math.isinf(spectral.rho) and math.isinf(comb.rho) else abs(spectral.rho - comb.rho)
    out.emit()
    if not diff <= AGREEMENT_TOL:
        raise MethodDisagreementError(spectral.rho, comb.rho, AGREEMENT_TOL)
    return 0


def cmd_construct(args) -> int:
    reserved = tuple(int(s) for s in _split(args.reserved)) if args.reserved else None
    p = ConstructionParams(args.q, args.m, args.variant, args.ell, args.r, reserved)
    S = construct_property_P(p)
    ok = verify_property_P(S)
    out = _Output(args)
    out.add("words", [w.format() for w in S])
    out.add("cardinality", len(S))
    out.add("property_P", ok)
    out.add("max_m_by_n", [max_m_bound(p.q, n, p.ell, p.r) if p.ell < p.q else None for n in range(max(1, p.r), 10)])
    out.emit()
    if not ok:
        raise ToleranceError("constructed set fails property (P)")
    return 0


def cmd_simulate(args) -> int:
    ambient = _ambient(args)
    h = _hole(args, ambient)
    curve = simulate_survival(h, args.samples, args.steps, args.seed, args.threads)
    text = curve.to_csv()
    fit = None
    try:
        fit = fit_escape_rate(curve)
    except UserInputError as exc:
        if len(h.hole_words):
            print(f"note: {exc}; use more samples", file=sys.stderr)
    spectral = escape_rate_spectral(h, args.max_dim).rho
    if args.json:
        print(json.dumps(_jsonable({
            "survivors": curve.survivors.tolist(),
            "samples": curve.samples,
            "seed": curve.seed,
            "rho_fit": None if fit is None else fit.rho,
            "rho_fit_stderr": None if fit is None else fit.stderr,
            "rho_spectral": spectral,
        }), indent=2, sort_keys=True))
    elif args.csv:
        _write(args.csv, text)
    else:
        sys.stdout.write(text)
    if fit is not None and not args.json:
        print(f"rho_fit: {fit.rho:.{args.precision}f} +- {fit.stderr:.{args.precision}f}", file=sys.stderr)
        print(f"rho_spectral: {spectral:.{args.precision}f}", file=sys.stderr)
    if args.svg:
        _write(args.svg, survival_svg(
            curve.fraction,
            fit_slope=None if fit is None else fit.rho,
            fit_intercept=0.0 if fit is None else fit.intercept,
            spectral_rho=spectral,
            title=f"hole {','.join(w.format() for w in h.given)}",
        ))
    return 0


def cmd_entropy(args) -> int:
    ambient = _ambient(args)
    T = higher_block_matrix(ambient, None, args.max_dim)
    out = _Output(args)
    if args.method in ("spectral", "both"):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            h = topological_entropy(T)
        out.add("entropy_spectral", h)
        out.add("lambda", math.exp(h) if h > -math.inf else 0.0)
        if caught:
            out.add("note", "reducible presentation; entropy is ln of the spectral radius")
    if args.method in ("comb", "both"):
        words = ambient.forbidden
        if not words.is_reduced():
            raise UserInputError("combinatorial entropy needs a reduced forbidden set")
        out.add("entropy_comb", combinatorial_entropy(ambient.q, words))
    out.emit()
    return 0


def _parse_rows(text: str) -> TransitionMatrix:
    try:
        rows = [[int(x) for x in r.replace(",", " ").split()] for r in text.split(";") if r.strip()]
    except ValueError as exc:
        raise UserInputError(f"bad matrix rows {text!r}") from exc
    return TransitionMatrix(rows)


def cmd_perron(args) -> int:
    if args.matrix:
        T = TransitionMatrix.from_text(_read(args.matrix))
    elif args.rows:
        T = _parse_rows(args.rows)
    else:
        T = higher_block_matrix(_ambient(args), None, args.max_dim)
    data = perron(T)
    out = _Output(args)
    out.add("lambda", data.lam)
    out.add("entropy", math.log(data.lam) if data.lam > 0 else -math.inf)
    out.add("reducible", data.reducible)
    out.add("u", data.u.tolist())
    out.add("v", data.v.tolist())
    out.emit()
    return 0


def _globals(parser: argparse.ArgumentParser, suppress: bool) -> None:
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--json", action="store_true", default=d(False), help="emit JSON")
    parser.add_argument("--csv", metavar="PATH", default=d(None), help="also write CSV to PATH")
    parser.add_argument("--precision", type=int, default=d(6), help="decimals in text output")
    parser.add_argument("--max-dim", type=int, default=d(DEFAULT_MAX_DIM), help="cap on transition matrix dimension")


def _shift_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--q", type=int, help="number of symbols (full shift unless --forbid)")
    p.add_argument("--forbid", help="ambient forbidden words, comma separated")
    p.add_argument("--shift", metavar="FILE", help="ambient shift file (word list or dim= matrix)")


def _hole_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--hole", help="hole words, comma separated")
    p.add_argument("--hole-file", metavar="FILE", help="hole words file")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="escaperate", description="Escape rates of open subshifts of finite type.")
    _globals(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("escape", help="escape rate into a hole")
    _shift_args(p)
    _hole_args(p)
    p.add_argument("--method", choices=("spectral", "comb", "both"), default="spectral")
    p.set_defaults(func=cmd_escape)

    p = sub.add_parser("table", help="recompute a published table")
    p.add_argument("id", choices=TABLE_IDS)
    p.add_argument("--check", action="store_true", help="compare with the embedded expected values")
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("rect", help="rectangle hole for T(x,y) = (Mx, Ny) on the torus")
    for name in ("M", "N", "m", "n", "i", "j"):
        p.add_argument(f"--{name}", type=int, required=True)
    p.set_defaults(func=cmd_rect)

    p = sub.add_parser("construct", help="word sets with trivial correlations")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--variant", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--r", type=int, default=1)
    p.add_argument("--reserved", help="reserved symbols, comma separated")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("simulate", help="Monte Carlo survival curve")
    _shift_args(p)
    _hole_args(p)
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--steps", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--svg", metavar="PATH", help="write a log-scale plot")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("entropy", help="topological entropy of a subshift")
    _shift_args(p)
    p.add_argument("--method", choices=("spectral", "comb", "both"), default="spectral")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("perron", help="Perron eigendata of a 0/1 matrix")
    _shift_args(p)
    p.add_argument("--matrix", metavar="FILE", help="matrix file in dim= format")
    p.add_argument("--rows", help='rows like "1,1;1,0"')
    p.set_defaults(func=cmd_perron)

    for sp in sub.choices.values():
        _globals(sp, suppress=True)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ToleranceError, SingularMatrixError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except UserInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
