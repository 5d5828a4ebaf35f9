"""Parameter-shift rules: equidistant closed forms, arbitrary spectra, stochastic."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .circuit import Circuit, Observable, ParamGate
from .errors import IllConditioned, IndexOutOfRange, InvalidR, MissingFTerm, ShiftCountMismatch
from .linalg import condition_number, hermitian_eig, solve_linear
from .spectrum import Spectrum, generator_spectrum

MAX_CONDITION = 1e10


@dataclass(frozen=True)
class ShiftRule:
    """f^(order)(x0) ~ center*f(x0) + sum_mu coeff_mu f(x0 + shift_mu)."""

    order: int
    terms: tuple[tuple[float, float], ...]
    center: float | None = None

    @property
    def shifts(self) -> np.ndarray:
        return np.array([s for s, _ in self.terms])

    @property
    def coeffs(self) -> np.ndarray:
        return np.array([c for _, c in self.terms])

    @property
    def n_evaluations(self) -> int:
        return len(self.terms) + (self.center is not None)

    def scaled(self, scale: float) -> "ShiftRule":
        """Rule for f(x) = g(scale*x) given the rule for g."""
        terms = tuple((s / scale, c * scale ** self.order) for s, c in self.terms)
        center = None if self.center is None else self.center * scale ** self.order
        return ShiftRule(self.order, terms, center)

    def to_dict(self) -> dict:
        return {"order": self.order, "center": self.center,
                "terms": [[s, c] for s, c in self.terms]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "ShiftRule":
        return cls(int(d["order"]), tuple((float(s), float(c)) for s, c in d["terms"]),
                   None if d.get("center") is None else float(d["center"]))


def _check_R(R):
    if int(R) != R or R < 1:
        raise InvalidR(f"R must be a positive integer, got {R}")


def first_order_rule(R: int, symmetric: bool = False) -> ShiftRule:
    """First derivative rule for integer frequencies 1..R (2R terms).

    With ``symmetric=True`` the shifts beyond pi are folded into (-pi, 0) by
    periodicity, giving exact +-x pairs with opposite coefficients.
    """
    _check_R(R)
    if symmetric:
        nu = np.arange(1, R + 1)
        x = (2 * nu - 1) * np.pi / (2 * R)
        y = (-1.0) ** (nu - 1) / (4 * R * np.sin(x / 2) ** 2)
        terms = []
        for xv, yv in zip(x.tolist(), y.tolist()):
            terms += [(xv, yv), (-xv, -yv)]
        return ShiftRule(1, tuple(terms))
    mu = np.arange(1, 2 * R + 1)
    x = (2 * mu - 1) * np.pi / (2 * R)
    y = (-1.0) ** (mu - 1) / (4 * R * np.sin(x / 2) ** 2)
    return ShiftRule(1, tuple(zip(x.tolist(), y.tolist())))


def second_order_rule(R: int, symmetric: bool = False) -> ShiftRule:
    """Second derivative rule for integer frequencies 1..R (2R-1 terms + center).

    ``symmetric=True`` folds shifts beyond pi into (-pi, 0) as +-x pairs.
    """
    _check_R(R)
    center = -(2 * R ** 2 + 1) / 6
    if symmetric:
        terms = []
        for nu in range(1, R):
            xv = nu * np.pi / R
            yv = (-1.0) ** (nu - 1) / (2 * np.sin(xv / 2) ** 2)
            terms += [(xv, yv), (-xv, yv)]
        terms.append((np.pi, (-1.0) ** (R - 1) / 2))
        return ShiftRule(2, tuple(terms), center)
    mu = np.arange(1, 2 * R)
    x = mu * np.pi / R
    y = (-1.0) ** (mu - 1) / (2 * np.sin(x / 2) ** 2)
    return ShiftRule(2, tuple(zip(x.tolist(), y.tolist())), center)


def default_shifts(freqs) -> np.ndarray:
    """(2mu-1)*pi/(2*max frequency), mu = 1..R."""
    f = np.asarray(freqs, dtype=float)
    return (2 * np.arange(1, f.size + 1) - 1) * np.pi / (2 * f.max())


def arbitrary_rule(freqs, order: int, shifts: Sequence[float] | None = None) -> ShiftRule:
    """Shift rule for arbitrary positive frequencies.

    Uses symmetric pairs +-x_mu, so order 1 needs R shifts (2R evaluations)
    and order 2 needs R shifts plus the center (2R+1 evaluations).

    Raises:
        ShiftCountMismatch: if ``shifts`` does not have R entries.
        IllConditioned: when the interpolation system is badly conditioned.
    """
    f = np.asarray(freqs, dtype=float).reshape(-1)
    if order not in (1, 2):
        raise ValueError("order must be 1 or 2")
    if f.size == 0:
        return ShiftRule(order, (), 0.0 if order == 2 else None)
    x = default_shifts(f) if shifts is None else np.asarray(shifts, dtype=float).reshape(-1)
    if x.size != f.size:
        raise ShiftCountMismatch(f"need {f.size} shifts for {f.size} frequencies, got {x.size}")
    ph = np.outer(x, f)
    if order == 1:
        # (E(x)-E(-x))/2 = S b and E'(0) = f.b
        mat = np.sin(ph)
        target = f
    else:
        # (E(x)+E(-x))/2 - E(0) = C a and E''(0) = -f^2.a
        mat = np.cos(ph) - 1
        target = -f ** 2
    cond = condition_number(mat)
    if not np.isfinite(cond) or cond > MAX_CONDITION:
        raise IllConditioned(f"shift system condition {cond:.3e}; choose different shifts")
    z = solve_linear(mat.T, target)
    terms = []
    for xm, zm in zip(x, z):
        if order == 1:
            terms += [(float(xm), float(zm / 2)), (float(-xm), float(-zm / 2))]
        else:
            terms += [(float(xm), float(zm / 2)), (float(-xm), float(zm / 2))]
    center = None if order == 1 else float(-np.sum(z))
    return ShiftRule(order, tuple(terms), center)


def rule_for(spec: Spectrum, order: int, symmetric: bool = True) -> ShiftRule:
    """Closed-form rule for equidistant spectra, solved rule otherwise."""
    if spec.r_count == 0:
        return ShiftRule(order, (), 0.0 if order == 2 else None)
    if spec.equidistant:
        R = spec.r_count
        base = first_order_rule(R, symmetric) if order == 1 else second_order_rule(R, symmetric)
        return base.scaled(spec.scale)
    return arbitrary_rule(spec.frequencies, order)


def apply_rule(rule: ShiftRule, e: Callable[[float], float], x0: float = 0.0,
               e0: float | None = None) -> float:
    """center*E(x0) + sum_mu coeff_mu E(x0 + shift_mu)."""
    total = 0.0
    if rule.center is not None and rule.center != 0.0:
        total += rule.center * (e(x0) if e0 is None else e0)
    for s, c in rule.terms:
        total += c * e(x0 + s)
    return float(total)


# --- stochastic rule ---

@dataclass(frozen=True)
class GaussLegendre:
    nodes: int = 64


@dataclass(frozen=True)
class MonteCarlo:
    samples: int
    seed: int


@dataclass(frozen=True)
class StochasticResult:
    value: float
    stderr: float
    evaluations: int


def _exp_herm(h: np.ndarray, s: float) -> np.ndarray:
    dec = hermitian_eig(h)
    v = dec.eigenvectors
    return (v * np.exp(1j * s * dec.eigenvalues)) @ v.conj().T


def stochastic_derivative(c: Circuit, k: int, params, obs: Observable,
                          integration: GaussLegendre | MonteCarlo) -> StochasticResult:
    """Derivative with respect to parameter ``k`` when it drives exp(i(xG+F)) gates.

    Each such gate is split at a fraction t of its full exponent, the rule for
    the pure generator is applied in between, and t is integrated out either
    with Gauss-Legendre quadrature or by seeded Monte Carlo sampling. Gates
    without F that share the parameter contribute through the plain rule.

    Raises:
        MissingFTerm: when no gate driven by ``k`` carries an F term.
    """
    p = c.check_params(params)
    if not 0 <= k < c.n_params:
        raise IndexOutOfRange(f"parameter index {k} outside 0..{c.n_params - 1}")
    idx = c.gates_for(k)
    if not any(c.gates[i].stochastic for i in idx):
        raise MissingFTerm(f"parameter {k} has no gate with an F term; use the plain rule")

    def cost(replace):
        return obs.expval(c.run(p, replace=replace))

    total = 0.0
    var = 0.0
    n_eval = 0
    for i in idx:
        g: ParamGate = c.gates[i]
        spec = generator_spectrum(g.generator, prefactor=g.prefactor)
        rule = rule_for(spec, 1)
        a = g.prefactor * g.generator.matrix()
        shift_u = [_exp_herm(a, s) for s in rule.shifts]
        if not g.stochastic:
            vals = [cost({i: u @ _exp_herm(a, p[k])}) for u in shift_u]
            total += float(np.dot(rule.coeffs, vals))
            n_eval += len(vals)
            continue
        h = g.exponent(p[k])
        dec = hermitian_eig(h)
        v, lam = dec.eigenvectors, dec.eigenvalues

        def split(t, v=v, lam=lam):
            return (v * np.exp(1j * t * lam)) @ v.conj().T

        def integrand(t):
            outer, inner = split(t), split(1 - t)
            return float(np.dot(rule.coeffs, [cost({i: outer @ u @ inner}) for u in shift_u]))

        if isinstance(integration, GaussLegendre):
            xs, ws = np.polynomial.legendre.leggauss(integration.nodes)
            ts, ws = (xs + 1) / 2, ws / 2
            total += float(sum(w * integrand(t) for t, w in zip(ts, ws)))
            n_eval += len(ts) * len(shift_u)
        else:
            rng = np.random.Generator(np.random.Philox(integration.seed))
            ts = rng.random(integration.samples)
            samples = np.array([integrand(t) for t in ts])
            total += float(samples.mean())
            var += float(samples.var(ddof=1) / samples.size) if samples.size > 1 else 0.0
            n_eval += len(ts) * len(shift_u)
    return StochasticResult(total, float(np.sqrt(var)), n_eval)
