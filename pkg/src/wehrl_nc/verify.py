"""Self-checks of N_w against closed forms and its structural properties.

Each check returns pass/fail plus a one-line detail; construction or
quadrature errors inside a check count as a failure and are reported, never
raised.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from . import states as fk
from .compute import compute
from .dsl import evaluate
from .errors import NcError
from .measure import (
    closed_form_fock,
    closed_form_pats,
    closed_form_squeezed,
    closed_form_squeezed_thermal,
    nc,
)
from .quadrature import DEFAULT_TOL, rule_for

ORACLE_TOL = 1e-4
INVARIANCE_TOL = 2e-6
COINCIDENCE_TOL = 1e-6
PARITY_MERGE_GAP = 0.02
PAC_SPREAD_RATIO = 0.2
PATS_NBAR_TOL = 1e-4

ORACLE_R = (0.0, 0.25, 0.5, 0.75, 1.0)
ORACLE_NBAR = (0.5, 1.0, 2.0, 3.0)
FIG3_R = tuple(round(0.1 * k, 1) for k in range(11))
PAC_R = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0)


@dataclass(frozen=True)
class Settings:
    dim: int | None = None
    tol: float = DEFAULT_TOL

    def value(self, expression: str) -> float:
        return compute(expression, self.dim, self.tol).value

    def state(self, expression: str):
        return evaluate(expression, self.dim)

    def nc_of(self, state) -> float:
        return nc(state, rule_for(state, self.tol)).value


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _worst(pairs) -> tuple[float, str]:
    """Largest |got - want| over (label, got, want) triples."""
    worst, where = -1.0, ""
    for label, got, want in pairs:
        err = abs(got - want)
        if err > worst:
            worst, where = err, label
    return worst, where


def check_oracle_fock(s: Settings):
    err, where = _worst((f"m={m}", s.value(f"fock({m})"), closed_form_fock(m)) for m in range(6))
    return err < ORACLE_TOL, f"max error {err:.2e} at {where}"


def check_oracle_squeezed(s: Settings):
    err, where = _worst((f"r={r}", s.value(f"S({r}) vac"), closed_form_squeezed(r)) for r in ORACLE_R)
    return err < ORACLE_TOL, f"max error {err:.2e} at {where}"


def check_oracle_pats(s: Settings):
    err, where = _worst((f"m={m}", s.value(f"A^{m} thermal(1)"), closed_form_pats(m)) for m in range(1, 6))
    return err < ORACLE_TOL, f"max error {err:.2e} at {where}"


def check_oracle_squeezed_thermal(s: Settings):
    err, where = _worst(
        (f"nbar={n}, r={r}", s.value(f"S({r}) thermal({n})"), closed_form_squeezed_thermal(n, r))
        for n in ORACLE_NBAR
        for r in ORACLE_R
    )
    return err < ORACLE_TOL, f"max error {err:.2e} at {where}"


_DISPLACEMENTS = ("0.5,0", "1,1", "-2,0", "0.3,-1.6")
_DISPLACED = ("fock(1)", "fock(2)", "S(0.5) vac", "S(0.5) thermal(1)")


def check_displacement_invariance(s: Settings):
    err, where = _worst(
        (f"D({b}) {base}", s.value(f"D({b}) {base}"), s.value(base)) for base in _DISPLACED for b in _DISPLACEMENTS
    )
    return err <= INVARIANCE_TOL, f"max change {err:.2e} at {where}"


def check_rotation_invariance(s: Settings):
    pairs = []
    for base in ("D(1,0.5) S(0.5) vac", "cat+(1.2)", "A D(1,0) S(0.4) thermal(0.5)"):
        state = s.state(base)
        ref = s.nc_of(state)
        for phi in (0.3, 1.1, 2 * math.pi / 7):
            pairs.append((f"phi={phi:.3g} on {base}", s.nc_of(fk.rotate(state, phi)), ref))
    err, where = _worst(pairs)
    return err <= INVARIANCE_TOL, f"max change {err:.2e} at {where}"


def check_squeezed_coherent_independence(s: Settings):
    values = [
        s.value(f"D({a}) S(0.8,{theta}) vac")
        for theta in (0.0, 1.0, 2.5)
        for a in ("0,0", "1,0", "1,1", "-0.5,1.5")
    ]
    spread = max(values) - min(values)
    return spread <= INVARIANCE_TOL, f"spread over theta and alpha {spread:.2e}"


def check_cat_parity_order(s: Settings):
    gaps = {R: s.value(f"cat-({R})") - s.value(f"cat+({R})") for R in (0.3, 0.5, 0.8)}
    smallest = min(gaps.values())
    return smallest > 0, "odd - even: " + ", ".join(f"R={R}: {g:.4f}" for R, g in gaps.items())


def check_cat_parity_merge(s: Settings):
    gap = abs(s.value("cat-(1.5)") - s.value("cat+(1.5)"))
    return gap < PARITY_MERGE_GAP, f"|odd - even| at R=1.5 is {gap:.4f} (limit {PARITY_MERGE_GAP})"


def check_pas_sns_coincidence(s: Settings):
    err, where = _worst((f"r={r}", s.value(f"A S({r}) vac"), s.value(f"S({r}) fock(1)")) for r in (0.2, 0.6, 1.0))
    return err <= COINCIDENCE_TOL, f"max difference {err:.2e} at {where}"


def _strictly_increasing(xs) -> bool:
    return all(b > a for a, b in zip(xs, xs[1:]))


def check_sns_monotone(s: Settings):
    table = {m: [s.value(f"S({r}) fock({m})") for r in FIG3_R] for m in range(1, 6)}
    in_r = all(_strictly_increasing(table[m]) for m in table)
    in_m = all(_strictly_increasing([table[m][i] for m in table]) for i in range(len(FIG3_R)))
    return in_r and in_m, f"increasing in r: {in_r}, increasing in m: {in_m}"


def check_pas_non_monotone(s: Settings):
    interior = FIG3_R[1:-1]
    failing = []
    for m in range(2, 6):
        vals = [s.value(f"A^{m} S({r}) vac") for r in interior]
        if not any(vals[i] > vals[j] for i in range(len(vals)) for j in range(i + 1, len(vals))):
            failing.append(m)
    return not failing, "all of m=2..5 dip in r" if not failing else f"monotone for m={failing}"


def check_pats_nbar_independence(s: Settings):
    spreads = {}
    for m in range(1, 6):
        vals = [s.value(f"A^{m} thermal({n})") for n in (0.5, 1, 2)]
        spreads[m] = max(vals) - min(vals)
    worst = max(spreads, key=spreads.get)
    return spreads[worst] <= PATS_NBAR_TOL, f"max spread over nbar {spreads[worst]:.2e} at m={worst}"


def check_squeezed_thermal_positive(s: Settings):
    lowest, where = math.inf, ""
    for n in (0.5, 1, 2, 5):
        for r in (0.05, 0.25, 1.0):
            v = s.value(f"S({r}) thermal({n})")
            if v < lowest:
                lowest, where = v, f"nbar={n}, r={r}"
    return lowest > s.tol, f"smallest value {lowest:.3e} at {where}"


def check_pac_limits(s: Settings):
    table = {m: [s.value(f"A^{m} coh({R},0)") for R in PAC_R] for m in range(1, 6)}
    limit_err = max(abs(s.value(f"A^{m} coh(0.001,0)") - closed_form_fock(m)) for m in table)
    decreasing = all(_strictly_increasing(table[m][::-1]) for m in table)
    spread0 = max(v[0] for v in table.values()) - min(v[0] for v in table.values())
    spread3 = max(v[-1] for v in table.values()) - min(v[-1] for v in table.values())
    ratio = spread3 / spread0
    ok = limit_err < ORACLE_TOL and decreasing and ratio < PAC_SPREAD_RATIO
    return ok, f"R->0 error {limit_err:.2e}, decreasing in R: {decreasing}, spread ratio {ratio:.3f}"


CHECKS: dict[str, Callable[[Settings], tuple[bool, str]]] = {
    "oracle-fock": check_oracle_fock,
    "oracle-squeezed-vacuum": check_oracle_squeezed,
    "oracle-photon-added-thermal": check_oracle_pats,
    "oracle-squeezed-thermal": check_oracle_squeezed_thermal,
    "displacement-invariance": check_displacement_invariance,
    "rotation-invariance": check_rotation_invariance,
    "squeezed-coherent-independence": check_squeezed_coherent_independence,
    "cat-parity-order": check_cat_parity_order,
    "cat-parity-merge": check_cat_parity_merge,
    "pas-sns-coincidence": check_pas_sns_coincidence,
    "sns-monotone": check_sns_monotone,
    "pas-non-monotone": check_pas_non_monotone,
    "pats-nbar-independence": check_pats_nbar_independence,
    "squeezed-thermal-positive": check_squeezed_thermal_positive,
    "pac-limits": check_pac_limits,
}


def run_check(name: str, settings: Settings) -> CheckResult:
    try:
        passed, detail = CHECKS[name](settings)
    except NcError as err:
        return CheckResult(name, False, f"{err.kind}: {err}")
    return CheckResult(name, bool(passed), detail)


def run_verify(dim: int | None = None, tol: float = DEFAULT_TOL, names=None) -> list[CheckResult]:
    settings = Settings(dim, tol)
    return [run_check(name, settings) for name in (names or CHECKS)]


def format_table(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<{width}}  {r.detail}" for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
