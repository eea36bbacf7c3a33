"""Expression in, NcResult out, with a per-process memo.

Sweeps, figure presets and the verification suite revisit the same states,
so results are cached on the expression tree (spans do not take part in
equality) plus settings.  Failures are not cached.
"""

from __future__ import annotations

from functools import lru_cache

from .dsl import StateExpr, evaluate, parse
from .measure import DEFAULT_PURITY_TOL, NcResult, nc
from .quadrature import DEFAULT_TOL, rule_for


@lru_cache(maxsize=512)
def _cached(expr: StateExpr, dim: int | None, tol: float, purity_tol: float) -> NcResult:
    state = evaluate(expr, dim)
    return nc(state, rule_for(state, tol), purity_tol)


def compute(
    expression: str | bytes | StateExpr,
    dim: int | None = None,
    tol: float = DEFAULT_TOL,
    purity_tol: float = DEFAULT_PURITY_TOL,
) -> NcResult:
    """N_w of the state written as ``expression``.

    ``dim=None`` picks the truncation automatically.  Errors (parse,
    construction, quadrature) propagate as NcError subclasses; those raised
    while building the state carry the source span of the failing node.
    """
    expr = expression if not isinstance(expression, (str, bytes)) else parse(expression)
    return _cached(expr, None if dim is None else int(dim), float(tol), float(purity_tol))


def clear_cache():
    _cached.cache_clear()
