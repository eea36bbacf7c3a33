"""Parameter sweeps over expression templates and the figure presets."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass

import numpy as np

from .compute import compute
from .errors import InvalidParameter, NcError
from .measure import NcResult
from .quadrature import DEFAULT_TOL

PLACEHOLDER = "{}"
CSV_HEADER = ("param", "value", "wehrl", "reference_entropy", "branch")


@dataclass(frozen=True)
class SweepSpec:
    template: str
    start: float
    stop: float
    count: int
    dim: int | None = None
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        found = self.template.count(PLACEHOLDER)
        if found != 1:
            raise InvalidParameter(f"template must contain the placeholder {{}} exactly once, found {found}")
        if int(self.count) != self.count or self.count < 2:
            raise InvalidParameter(f"sweep needs count >= 2, got {self.count}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise InvalidParameter(f"sweep needs start < stop, got [{self.start}, {self.stop}]")

    def values(self) -> np.ndarray:
        return np.linspace(self.start, self.stop, int(self.count))


@dataclass(frozen=True)
class SweepRow:
    param: float
    result: NcResult | None = None
    error: dict | None = None


def substitute(template: str, value: float) -> str:
    """Integral values are written as integers so they also fit uint slots."""
    value = float(value)
    text = str(int(value)) if value.is_integer() else repr(value)
    return template.replace(PLACEHOLDER, text, 1)


def run_sweep(spec: SweepSpec) -> list[SweepRow]:
    """Evaluate every grid point in parameter order; failures become rows."""
    rows = []
    for value in spec.values():
        try:
            result = compute(substitute(spec.template, value), spec.dim, spec.tol)
            rows.append(SweepRow(float(value), result))
        except NcError as err:
            rows.append(SweepRow(float(value), error=err.to_dict()))
    return rows


def _g(x) -> str:
    return "" if x is None else format(float(x), ".9g")


def rows_to_csv(rows: list[SweepRow]) -> str:
    with_errors = any(r.error is not None for r in rows)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER + (("error",) if with_errors else ()))
    for row in rows:
        res = row.result
        line = [_g(row.param)]
        if res is None:
            line += ["", "", "", ""]
        else:
            line += [_g(res.value), _g(res.wehrl), _g(res.reference_entropy), res.branch]
        if with_errors:
            line.append("" if row.error is None else f"{row.error['kind']}: {row.error['message']}")
        writer.writerow(line)
    return buf.getvalue()


def rows_to_json(rows: list[SweepRow]) -> str:
    out = []
    for row in rows:
        item = {"param": row.param}
        if row.result is not None:
            res = row.result
            item.update(value=res.value, wehrl=res.wehrl, reference_entropy=res.reference_entropy, branch=res.branch)
        else:
            item["error"] = row.error
        out.append(item)
    return json.dumps(out, indent=2, sort_keys=True) + "\n"


# --------------------------------------------------------------------------
# figure presets: the plotted ranges live here and nowhere else

@dataclass(frozen=True)
class FigurePreset:
    title: str
    template: str  # "{}" is the swept axis, "{s}" the series value
    axis: str
    start: float
    stop: float
    count: int
    series_name: str = ""
    series: tuple = ()


FIGURES = {
    "1a": FigurePreset("number states", "fock({})", "m", 0, 10, 11),
    "1b": FigurePreset("squeezed vacuum", "S({}) vac", "r", 0.0, 1.2, 25),
    "2a": FigurePreset("photon-added coherent", "A^{s} coh({},0)", "R", 0.0, 3.0, 31, "m", (1, 2, 3, 4, 5)),
    "2b": FigurePreset("cat states", "cat{s}({})", "R", 0.0, 2.0, 21, "parity", ("+", "-")),
    "3a": FigurePreset("photon-added squeezed vacuum", "A^{s} S({}) vac", "r", 0.0, 1.0, 21, "m", (1, 2, 3, 4, 5)),
    "3b": FigurePreset("squeezed number", "S({}) fock({s})", "r", 0.0, 1.0, 21, "m", (1, 2, 3, 4, 5)),
    "4a": FigurePreset("photon-added thermal", "A^{} thermal({s})", "m", 1, 10, 10, "nbar", (0.5, 1, 2)),
    "4b": FigurePreset("squeezed thermal", "S({}) thermal({s})", "r", 0.0, 1.0, 21, "nbar", (1, 2, 3, 4, 5)),
}

_PARITY_LABEL = {"+": "even", "-": "odd"}


def figure_series(fig_id: str, dim: int | None = None, tol: float = DEFAULT_TOL):
    """Yield (label, SweepSpec) for every curve of a preset."""
    if fig_id not in FIGURES:
        raise InvalidParameter(f"unknown figure {fig_id!r}; choose from {', '.join(FIGURES)}")
    preset = FIGURES[fig_id]
    for value in preset.series or (None,):
        if value is None:
            template, label = preset.template, f"fig{fig_id}"
        else:
            template = preset.template.replace("{s}", str(value))
            tag = _PARITY_LABEL.get(value, value)
            label = f"fig{fig_id}_{preset.series_name}{tag}" if preset.series_name != "parity" else f"fig{fig_id}_{tag}"
        yield label, SweepSpec(template, preset.start, preset.stop, preset.count, dim, tol)
