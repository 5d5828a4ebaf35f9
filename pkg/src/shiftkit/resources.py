"""Closed-form evaluation counts and shot budgets for the derivative recipes.

Budgets are model values: they assume a constant single-shot variance
sigma^2 and are returned as reals (callers round as they see fit).
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import InputError, MissingField, Unsupported
from .rules import ShiftRule

QUANTITIES = ("E", "grad_k", "grad", "diag2_k", "diag2", "mixed_km", "hessian",
              "grad_and_diag2", "grad_and_hessian")
STRATEGIES = ("decomposition", "gen_equidistant", "gen_arbitrary")
MIXED_RULES = ("diagonal_rule", "second_diagonal", "repeated_rule")
METRIC_QUANTITIES = ("diag_k", "offdiag_km", "full")
METRIC_METHODS = ("shift_equidistant", "shift_arbitrary", "lcu", "covariance")


def _vec(v, name):
    if v is None:
        return None
    a = np.asarray(v, dtype=int).reshape(-1)
    if np.any(a < 1):
        raise InputError(f"all entries of {name} must be at least 1")
    return a


@dataclass(frozen=True)
class ResourceQuery:
    """Inputs for the count and budget formulas.

    ``Pbar`` holds the number of commuting groups per generator and
    ``Pbar_pairs`` (n x n) the group counts of the products G_k G_m; both are
    only needed by the covariance metric counts.
    """

    R_vec: Sequence[int] | None = None
    P_vec: Sequence[int] | None = None
    n: int | None = None
    sigma: float = 1.0
    epsilon: float = 1.0
    Q_vec: Sequence[int] | None = None
    Pbar: Sequence[int] | None = None
    Pbar_pairs: np.ndarray | None = None

    def __post_init__(self):
        for name in ("R_vec", "P_vec", "Q_vec", "Pbar"):
            object.__setattr__(self, name, _vec(getattr(self, name), name))
        if self.sigma <= 0 or self.epsilon <= 0:
            raise InputError("sigma and epsilon must be positive")
        sizes = {len(v) for v in (self.R_vec, self.P_vec, self.Q_vec, self.Pbar) if v is not None}
        if self.n is None and sizes:
            object.__setattr__(self, "n", sizes.pop() if len(sizes) == 1 else None)
        if self.n is not None and any(s != self.n for s in sizes):
            raise InputError("vector lengths disagree with n")
        if self.n is not None and self.n < 1:
            raise InputError("n must be at least 1")

    def need(self, name: str):
        val = getattr(self, name)
        if val is None:
            raise MissingField(f"resource query needs field '{name}'")
        return val


def _index(vec, k, name):
    if k is None:
        raise MissingField(f"quantity needs parameter index '{name}'")
    if not 0 <= k < len(vec):
        raise InputError(f"index {name}={k} outside 0..{len(vec) - 1}")
    return int(vec[k])


def _pair_sum(vec) -> int:
    """sum_{k<m} v_k v_m."""
    return int((vec.sum() ** 2 - (vec ** 2).sum()) // 2)


def _decomposition(q: ResourceQuery, quantity, k, m):
    P = q.need("P_vec")
    p1, p2 = int(P.sum()), int((P ** 2).sum())
    if quantity == "grad_k":
        return 2 * _index(P, k, "k")
    if quantity == "grad":
        return 2 * p1
    if quantity == "diag2_k":
        pk = _index(P, k, "k")
        return 2 * pk ** 2 - pk + 1
    if quantity == "diag2":
        return 2 * p2 - p1 + 1
    if quantity == "mixed_km":
        return 4 * _index(P, k, "k") * _index(P, m, "m")
    if quantity == "hessian":
        return 2 * p1 ** 2 - p1 + 1
    if quantity == "grad_and_diag2":
        return 2 * p2 + 1
    if quantity == "grad_and_hessian":
        return 2 * p1 ** 2 + 1
    raise InputError(f"unknown quantity {quantity!r}")


def _pair_cost(rk, rm, equidistant, mixed_rule):
    """Extra evaluations for H_km once E(x0) and the diagonal are known."""
    if mixed_rule == "repeated_rule":
        return 4 * rk * rm
    if equidistant:
        single = 2 * (rk + rm) - 1
    else:
        single = 2 * (2 * rk * rm + rk + rm - 2)
    return single if mixed_rule == "diagonal_rule" else 2 * single


def _general(q: ResourceQuery, quantity, k, m, equidistant, mixed_rule):
    R = q.need("R_vec")
    n = len(R)
    r1 = int(R.sum())
    if quantity == "grad_k":
        return 2 * _index(R, k, "k")
    if quantity == "grad":
        return 2 * r1
    if quantity == "diag2_k":
        return 2 * _index(R, k, "k") + (0 if equidistant else 1)
    if quantity == "diag2":
        return 2 * r1 - n + 1 if equidistant else 2 * r1 + 1
    if quantity == "grad_and_diag2":
        return 2 * r1 + 1
    if quantity == "mixed_km":
        return _pair_cost(_index(R, k, "k"), _index(R, m, "m"), equidistant, mixed_rule)
    pairs = sum(_pair_cost(int(R[a]), int(R[b]), equidistant, mixed_rule)
                for a in range(n) for b in range(a + 1, n))
    if quantity == "hessian":
        return (2 * r1 - n + 1 if equidistant else 2 * r1 + 1) + pairs
    if quantity == "grad_and_hessian":
        return 2 * r1 + 1 + pairs
    raise InputError(f"unknown quantity {quantity!r}")


def neval(q: ResourceQuery, quantity: str, strategy: str, k: int | None = None,
          m: int | None = None, mixed_rule: str = "diagonal_rule") -> int:
    """Number of distinct circuit evaluations.

    ``mixed_rule`` selects how off-diagonal Hessian entries are obtained by
    the general rules (``diagonal_rule`` gives the standard table; the other
    two are the exact counts of the alternative strategies). ``mixed_km``
    counts the evaluations added on top of E(x0) and the two diagonal entries.

    Raises:
        MissingField: if the formula needs a field absent from ``q``.
    """
    if quantity not in QUANTITIES:
        raise InputError(f"unknown quantity {quantity!r}")
    if strategy not in STRATEGIES:
        raise InputError(f"unknown strategy {strategy!r}")
    if mixed_rule not in MIXED_RULES:
        raise InputError(f"unknown mixed rule {mixed_rule!r}")
    if quantity == "E":
        return 1
    if strategy == "decomposition":
        return _decomposition(q, quantity, k, m)
    return _general(q, quantity, k, m, strategy == "gen_equidistant", mixed_rule)


def shot_budget_univariate(q: ResourceQuery, order: int, strategy: str) -> float:
    """Optimal-allocation shot budget for one first or second derivative.

    The frequency count (or decomposition size) is the first entry of
    ``R_vec`` (``P_vec`` for the decomposition strategy).
    """
    if order not in (1, 2):
        raise InputError("order must be 1 or 2")
    vec = q.need("P_vec") if strategy == "decomposition" else q.need("R_vec")
    size = float(vec[0])
    return q.sigma ** 2 * size ** (2 * order) / q.epsilon ** 2


def _frobenius_budget(q, vec) -> float:
    return q.sigma ** 2 / (2 * q.epsilon ** 2) * (
        (np.sqrt(2) - 1) * float((vec ** 2).sum()) + float(vec.sum()) ** 2) ** 2


def hessian_shot_budgets(q: ResourceQuery) -> tuple[float, float, float]:
    """(N_diag, N_genPS, N_decomp) for a Hessian of Frobenius precision epsilon."""
    R = q.need("R_vec")
    P = q.need("P_vec")
    n = len(R)
    n_diag = q.sigma ** 2 / (2 * q.epsilon ** 2) * (
        (np.sqrt(n + 1) + n - 2) * float((R ** 2).sum()) + float(R.sum()) ** 2) ** 2
    return float(n_diag), float(_frobenius_budget(q, R)), float(_frobenius_budget(q, P))


def coeff_norm(rule: ShiftRule) -> float:
    """|center| + sum of |coefficients|."""
    total = abs(rule.center) if rule.center is not None else 0.0
    return float(total + sum(abs(c) for _, c in rule.terms))


def metric_neval(q: ResourceQuery, quantity: str, method: str, k: int | None = None,
                 m: int | None = None) -> int:
    """Distinct circuits for metric tensor entries.

    Raises:
        MissingField: if a needed field is absent.
        Unsupported: for the full tensor via covariances (block-diagonal only).
    """
    if quantity not in METRIC_QUANTITIES:
        raise InputError(f"unknown metric quantity {quantity!r}")
    if method.startswith("shift"):
        R = q.need("R_vec")
        n = len(R)
        r1, r2 = int(R.sum()), int((R ** 2).sum())
        eq = method == "shift_equidistant"
        if method not in ("shift_equidistant", "shift_arbitrary"):
            raise InputError(f"unknown metric method {method!r}")
        if quantity == "diag_k":
            rk = _index(R, k, "k")
            return 2 * rk - 1 if eq else 2 * rk
        if quantity == "offdiag_km":
            return _pair_cost(_index(R, k, "k"), _index(R, m, "m"), eq, "diagonal_rule")
        if eq:
            return 2 * n * r1 - (n * n + n) // 2
        return 2 * (r1 ** 2 - r2 + n * (r1 - n + 1))
    if method == "lcu":
        if quantity == "diag_k":
            return _index(q.need("Q_vec"), k, "k")
        P = q.need("P_vec")
        if quantity == "offdiag_km":
            return _index(P, k, "k") * _index(P, m, "m")
        return _pair_sum(P) + int(q.need("Q_vec").sum())
    if method == "covariance":
        if quantity == "full":
            raise Unsupported("covariances only give the block-diagonal of the metric")
        if quantity == "diag_k":
            return _index(q.need("Pbar"), k, "k")
        pairs = np.asarray(q.need("Pbar_pairs"), dtype=int)
        if k is None or m is None:
            raise MissingField("quantity needs parameter indices 'k' and 'm'")
        return int(pairs[k, m])
    raise InputError(f"unknown metric method {method!r}")


def resource_table(q: ResourceQuery, mixed_rule: str = "diagonal_rule",
                   k: int = 0, m: int = 1) -> list[dict]:
    """Rows of (strategy, quantity, count); missing inputs give an empty count."""
    rows = []
    for strategy in STRATEGIES:
        for quantity in QUANTITIES:
            try:
                val = neval(q, quantity, strategy, k=k, m=m, mixed_rule=mixed_rule)
            except (MissingField, InputError):
                val = ""
            rows.append({"strategy": strategy, "quantity": quantity, "evaluations": val})
    return rows


def resource_table_csv(q: ResourceQuery, **kw) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=["strategy", "quantity", "evaluations"], lineterminator="\n")
    w.writeheader()
    w.writerows(resource_table(q, **kw))
    return buf.getvalue()
