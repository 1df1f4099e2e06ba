"""Chart documents: the JSON file format read and written by the command line.

Layout (indices are 1-based)::

    {
      "schema_version": 1,
      "dimension": 2,
      "coordinates": ["t1", "t2"],
      "unit_index": 1,                      # or "unit": ["1", "0"]
      "structure": {"1,1,1": "1", ..., "2,2,1": "t2"},
      "euler": {"components": ["t1", "2/3 * t2"], "weight": "1"},   # optional
      "metric": [["0", "1"], ["1", "0"]]                            # optional
    }

``structure["i,j,k"]`` is the coefficient of d/dt_k in d/dt_i * d/dt_j and
all n^3 keys must be present.  Polynomial strings use the grammar of
:func:`fmanifolds.poly.parse_poly`.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .chart import Chart, ChartError, EulerCandidate, PolyVectorField
from .metrics import MetricError, MetricField
from .poly import ExactPoly, PolyParseError
from .report import SCHEMA_VERSION

__all__ = ["DocumentError", "ChartDocument", "parse_chart", "load_chart", "dump_chart"]


class DocumentError(ValueError):
    pass


@dataclass
class ChartDocument:
    chart: Chart
    euler: EulerCandidate | None = None
    metric: MetricField | None = None

    def to_dict(self) -> dict:
        C = self.chart
        n = C.n
        out = {
            "schema_version": SCHEMA_VERSION,
            "dimension": n,
            "coordinates": list(C.coords),
        }
        idx = C.unit_index
        if idx is not None:
            out["unit_index"] = idx + 1
        else:
            out["unit"] = C.unit.strings()
        out["structure"] = {
            f"{i + 1},{j + 1},{k + 1}": str(C.structure[i][j][k])
            for i, j, k in itertools.product(range(n), repeat=3)
        }
        if self.euler is not None:
            out["euler"] = {"components": self.euler.field.strings(), "weight": str(Fraction(self.euler.weight))}
        if self.metric is not None:
            out["metric"] = self.metric.strings()
        return out

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _poly(text, coords, where: str) -> ExactPoly:
    if isinstance(text, bool) or not isinstance(text, (str, int)):
        raise DocumentError(f"{where}: expected a polynomial string, got {text!r}")
    try:
        return ExactPoly.parse(str(text), coords)
    except PolyParseError as exc:
        raise DocumentError(f"{where}: {exc}") from None


def parse_chart(data) -> ChartDocument:
    """Build a document from parsed JSON (dict) or JSON text."""
    if isinstance(data, (str, bytes)):
        try:
            data = json.loads(data)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise DocumentError("chart document must be a JSON object")
    version = data.get("schema_version")
    if version != SCHEMA_VERSION:
        raise DocumentError(f"schema_version: expected {SCHEMA_VERSION}, got {version!r}")
    coords = data.get("coordinates")
    if not isinstance(coords, list) or not all(isinstance(c, str) and c for c in coords):
        raise DocumentError("coordinates: expected a list of names")
    n = data.get("dimension")
    if n != len(coords):
        raise DocumentError(f"dimension: {n!r} does not match {len(coords)} coordinate names")
    coords = tuple(coords)

    structure = data.get("structure")
    if not isinstance(structure, dict):
        raise DocumentError("structure: expected an object keyed 'i,j,k'")
    expected = {f"{i},{j},{k}" for i, j, k in itertools.product(range(1, n + 1), repeat=3)}
    extra = sorted(set(structure) - expected)
    if extra:
        raise DocumentError(f"structure: unexpected key {extra[0]!r}")
    S = [[[None] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        key = f"{i + 1},{j + 1},{k + 1}"
        if key not in structure:
            raise DocumentError(f"structure: missing entry {key!r}")
        S[i][j][k] = _poly(structure[key], coords, f"structure[{key!r}]")

    if "unit_index" in data and "unit" in data:
        raise DocumentError("give either unit_index or unit, not both")
    if "unit_index" in data:
        u = data["unit_index"]
        if isinstance(u, bool) or not isinstance(u, int) or not 1 <= u <= n:
            raise DocumentError(f"unit_index: expected an integer in 1..{n}, got {u!r}")
        unit = u - 1
    elif "unit" in data:
        comps = data["unit"]
        if not isinstance(comps, list) or len(comps) != n:
            raise DocumentError(f"unit: expected {n} polynomial strings")
        unit = PolyVectorField(coords, [_poly(c, coords, f"unit[{i}]") for i, c in enumerate(comps)])
    else:
        raise DocumentError("missing unit_index")
    try:
        C = Chart(coords, S, unit)
    except ChartError as exc:
        raise DocumentError(str(exc)) from None

    euler = None
    if data.get("euler") is not None:
        ed = data["euler"]
        comps = ed.get("components") if isinstance(ed, dict) else None
        if not isinstance(comps, list) or len(comps) != n:
            raise DocumentError(f"euler.components: expected {n} polynomial strings")
        try:
            weight = Fraction(str(ed.get("weight", "1")))
        except (ValueError, ZeroDivisionError):
            raise DocumentError(f"euler.weight: not a rational number: {ed.get('weight')!r}") from None
        field = PolyVectorField(coords, [_poly(c, coords, f"euler.components[{i}]") for i, c in enumerate(comps)])
        euler = EulerCandidate(field, weight)

    metric = None
    if data.get("metric") is not None:
        rows = data["metric"]
        if not isinstance(rows, list) or len(rows) != n or any(not isinstance(r, list) or len(r) != n for r in rows):
            raise DocumentError(f"metric: expected an {n} x {n} array of polynomial strings")
        g = [[_poly(v, coords, f"metric[{i}][{j}]") for j, v in enumerate(r)] for i, r in enumerate(rows)]
        try:
            metric = MetricField(coords, g)
        except MetricError as exc:
            raise DocumentError(f"metric: {exc}") from None
    return ChartDocument(C, euler, metric)


def load_chart(path) -> ChartDocument:
    p = Path(path)
    if not p.is_file():
        raise DocumentError(f"{path}: no such file")
    try:
        text = p.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise DocumentError(f"{path}: {exc}") from None
    try:
        return parse_chart(text)
    except DocumentError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def dump_chart(chart: Chart, euler=None, metric=None) -> str:
    return ChartDocument(chart, euler, metric).dumps()
