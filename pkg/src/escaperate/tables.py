"""Recompute the published tables and compare them with the embedded expected values.

Expected values live in ``data/table<id>.csv`` as the printed strings, so the
comparison can use the printed precision of each entry.
"""

from __future__ import annotations

import csv
import io
import warnings
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from importlib import resources
from typing import Any

import numpy as np

from .algebra import RationalFunction, rational_matrix_inverse_sum
from .constructions import max_m_bound
from .errors import UserInputError
from .escape import HoleSpec, NoPeriodicPointWarning, escape_rate_spectral, hole_measure, minimal_period
from .shift import DEFAULT_MAX_DIM, ProductSpec, SubshiftSpec, TransitionMatrix, tensor_product
from .spectral import ParryMeasure
from .torus import Rectangle, TorusMapSpec, rectangle_to_words
from .words import Word, WordSet, correlation_matrix

TABLE_IDS = ("1", "2", "2a", "3", "4", "5", "5b", "6", "7")

GOLDEN = TransitionMatrix([[1, 1], [1, 0]])
FULL2 = TransitionMatrix([[1, 1], [1, 1]])


@dataclass
class Table:
    id: str
    columns: list[str]
    rows: list[dict[str, Any]]

    def to_csv(self, precision: int = 6) -> str:
        out = io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(self.columns)
        for row in self.rows:
            w.writerow([_fmt(row[c], precision) for c in self.columns])
        return out.getvalue()

    def to_json(self) -> dict[str, Any]:
        return {
            "table": self.id,
            "columns": self.columns,
            "rows": [{c: _jsonable(r[c]) for c in self.columns} for r in self.rows],
        }


def _fmt(x: Any, precision: int) -> str:
    if isinstance(x, float):
        return f"{x:.{precision}f}"
    if isinstance(x, RationalFunction):
        return x.format()
    return str(x)


def _jsonable(x: Any) -> Any:
    if isinstance(x, (RationalFunction, Fraction)):
        return x.format() if isinstance(x, RationalFunction) else str(x)
    if isinstance(x, np.generic):
        return x.item()
    return x


def load_expected(table_id: str) -> list[dict[str, str]]:
    if table_id not in TABLE_IDS:
        raise UserInputError(f"unknown table id {table_id!r}; choose from {', '.join(TABLE_IDS)}")
    text = resources.files("escaperate").joinpath(f"data/table{table_id}.csv").read_text()
    body = [line for line in text.splitlines() if line and not line.startswith("#")]
    return list(csv.DictReader(body))


def printed_tolerance(printed: str) -> float:
    """Half a unit in the last printed place plus two units of slack for rounding style."""
    exp = Decimal(printed).as_tuple().exponent
    d = -exp if exp < 0 else 0
    return 2.5 * 10.0 ** (-d)


def golden_mean_squared() -> SubshiftSpec:
    return SubshiftSpec.from_matrix(tensor_product(ProductSpec((GOLDEN, GOLDEN))))


def doubling_squared_times_golden() -> SubshiftSpec:
    return SubshiftSpec.from_matrix(tensor_product(ProductSpec((FULL2, FULL2, GOLDEN))))


def _tau_min(h: HoleSpec) -> int:
    # a hole may contain no periodic point of period <= n; the tables report n then
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", NoPeriodicPointWarning)
        return minimal_period(h)


def _rectangle_table(table_id: str, max_dim: int) -> Table:
    spec = TorusMapSpec(3, 2)
    full = SubshiftSpec.full(spec.q)
    rows = []
    for e in load_expected(table_id):
        R = Rectangle(int(e["i"]), int(e["j"]), int(e["m"]), int(e["n"]))
        words = rectangle_to_words(spec, R)
        h = HoleSpec.build(full, words)
        res = escape_rate_spectral(h, max_dim)
        rows.append({
            "hole": R.label(),
            "words": ",".join(w.format() for w in words),
            "tau_min": _tau_min(h),
            "rho": res.rho,
            "dim": res.details["dim"],
        })
    return Table(table_id, ["hole", "words", "tau_min", "rho"], rows)


def _table3() -> Table:
    rows = []
    for n in range(1, 10):
        row: dict[str, Any] = {"n": n}
        for ell in range(1, 5):
            row[f"l{ell}"] = max_m_bound(6, n, ell)
        rows.append(row)
    return Table("3", ["n", "l1", "l2", "l3", "l4"], rows)


def _subshift_table(table_id: str, ambient: SubshiftSpec, max_dim: int) -> Table:
    pm = ParryMeasure(ambient)
    rows = []
    for e in load_expected(table_id):
        for name in e["holes"].split():
            h = HoleSpec.build(ambient, WordSet([Word.parse(name, ambient.q)], ambient.q))
            rows.append({
                "hole": name,
                "measure": hole_measure(h, pm),
                "rho": escape_rate_spectral(h, max_dim).rho,
                "tau_min": _tau_min(h),
            })
    return Table(table_id, ["hole", "measure", "rho", "tau_min"], rows)


def _correlation_table(table_id: str, forbidden: str, max_dim: int) -> Table:
    ambient = SubshiftSpec.from_strings(3, [forbidden])
    f = Word.parse(forbidden, 3)
    pm = ParryMeasure(ambient)
    rows = []
    for e in load_expected(table_id):
        for name in e["holes"].split():
            w = Word.parse(name, 3)
            h = HoleSpec.build(ambient, WordSet([w], 3))
            a = rational_matrix_inverse_sum(correlation_matrix(WordSet([f, w], 3)))
            rows.append({
                "hole": name,
                "measure": hole_measure(h, pm),
                "a": a,
                "a3": a(3),
                "rho": escape_rate_spectral(h, max_dim).rho,
            })
    return Table(table_id, ["hole", "measure", "a", "a3", "rho"], rows)


def compute_table(table_id: str, max_dim: int = DEFAULT_MAX_DIM) -> Table:
    if table_id in ("1", "2", "2a"):
        return _rectangle_table(table_id, max_dim)
    if table_id == "3":
        return _table3()
    if table_id == "4" or table_id == "5":
        return _subshift_table(table_id, golden_mean_squared(), max_dim)
    if table_id == "5b":
        return _subshift_table(table_id, doubling_squared_times_golden(), max_dim)
    if table_id == "6":
        return _correlation_table(table_id, "00", max_dim)
    if table_id == "7":
        return _correlation_table(table_id, "02", max_dim)
    raise UserInputError(f"unknown table id {table_id!r}; choose from {', '.join(TABLE_IDS)}")


def _expected_by_hole(table_id: str) -> dict[str, dict[str, str]]:
    out = {}
    for e in load_expected(table_id):
        if "holes" in e:
            for name in e["holes"].split():
                out[name] = e
        elif "i" in e:
            out[Rectangle(int(e["i"]), int(e["j"]), int(e["m"]), int(e["n"])).label()] = e
        else:
            out[e["n"]] = e
    return out


def _compare(column: str, computed: Any, printed: str) -> str | None:
    if isinstance(computed, float):
        tol = printed_tolerance(printed)
        if abs(computed - float(printed)) > tol:
            return f"{column}: computed {computed:.8g}, expected {printed} (tolerance {tol:g})"
        return None
    if isinstance(computed, RationalFunction):
        ok = computed == RationalFunction.parse(printed)
    elif isinstance(computed, Fraction):
        ok = computed == Fraction(printed)
    elif isinstance(computed, int):
        ok = computed == int(printed)
    else:
        ok = str(computed) == printed
    return None if ok else f"{column}: computed {_fmt(computed, 8)}, expected {printed}"


def check_table(table: Table) -> list[str]:
    """Mismatches against the embedded expected values; empty when everything agrees."""
    expected = _expected_by_hole(table.id)
    problems = []
    seen = set()
    for row in table.rows:
        key = str(row.get("hole", row.get("n")))
        e = expected.get(key)
        if e is None:
            problems.append(f"{key}: no expected row")
            continue
        seen.add(key)
        for col in table.columns:
            if col in ("hole", "n"):
                continue
            printed = e.get(col)
            if printed is None:
                continue
            msg = _compare(col, row[col], printed)
            if msg:
                problems.append(f"table {table.id}, {key}: {msg}")
    for key in expected:
        if key not in seen:
            problems.append(f"table {table.id}: expected row {key} was not computed")
    return problems
