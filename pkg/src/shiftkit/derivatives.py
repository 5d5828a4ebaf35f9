"""Gradients, Hessians and the Fubini-Study metric via shift rules.

All evaluations of one request go through a single memoising cost wrapper,
so shared points (notably the unshifted cost) are evaluated once and the
reported ``evaluations_used`` is the number of distinct circuits.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .circuit import CachedCost, Circuit, Generator, Observable, ParamGate, PauliTerm, cost_function
from .errors import InputError, NoncommutingBlock
from .reconstruction import full_reconstruct_equidistant, trigpoly_derivative
from .rules import ShiftRule, rule_for
from .spectrum import Spectrum, circuit_spectra, equidistant_spectrum, spectrum_from_frequencies

HESSIAN_STRATEGIES = ("diagonal_rule", "second_diagonal", "repeated_rule")


@dataclass
class DerivativeReport:
    value: np.ndarray
    evaluations_used: int
    strategy: str
    extras: dict = field(default_factory=dict)


def simultaneous_frequency_count(R_k: int, R_m: int, equidistant: bool) -> int:
    """Frequencies of E(x0 + x(v_k + v_m)) after rescaling both axes."""
    if R_k < 1 or R_m < 1:
        raise InputError("frequency counts must be at least 1")
    if equidistant:
        return R_k + R_m
    return 2 * R_k * R_m + R_k + R_m - 2


def pair_spectrum(sk: Spectrum, sm: Spectrum) -> tuple[float, float, Spectrum]:
    """Axis weights (alpha, beta) and the spectrum along alpha*v_k + beta*v_m.

    The weights normalise both smallest frequencies to 1 (the spacing, for
    equidistant spectra), which makes frequencies coincide where possible.
    """
    alpha = 1.0 / (sk.scale if sk.equidistant else sk.frequencies[0])
    beta = 1.0 / (sm.scale if sm.equidistant else sm.frequencies[0])
    fk = np.asarray(sk.frequencies) * alpha
    fm = np.asarray(sm.frequencies) * beta
    if sk.equidistant and sm.equidistant:
        fk, fm = np.rint(fk), np.rint(fm)
    combos = np.concatenate([fk, fm, (fk[:, None] + fm[None, :]).ravel(),
                             np.abs(fk[:, None] - fm[None, :]).ravel()])
    spec = spectrum_from_frequencies(combos[combos > 1e-9])
    bound = simultaneous_frequency_count(sk.r_count, sm.r_count, sk.equidistant and sm.equidistant)
    assert spec.r_count <= bound
    return alpha, beta, spec


class DerivativeEngine:
    """Shift-rule derivatives of a black-box cost around ``x0``.

    Args:
        cost: multivariate cost (wrapped in ``CachedCost`` if needed).
        x0: expansion point.
        spectra: one ``Spectrum`` per parameter.
        center: known value of the cost at ``x0`` (not evaluated then).
        joint: the gradient will be requested alongside second derivatives;
            axis data is then shared between first and second order.
        pair_joint: reuse first-order points for second derivatives when all
            spectra have a single frequency (used by the decomposition route).
    """

    def __init__(self, cost, x0, spectra: Sequence[Spectrum], center: float | None = None,
                 joint: bool = False, pair_joint: bool = False):
        self.cost = cost if isinstance(cost, CachedCost) else CachedCost(cost)
        self.x0 = np.asarray(x0, dtype=float) + 0.0
        self.spectra = list(spectra)
        if len(self.spectra) != self.x0.size:
            raise InputError("need exactly one spectrum per parameter")
        self.n = self.x0.size
        self._center = center
        self.joint = joint
        self.pair_joint = pair_joint
        self._first: dict[int, float] = {}
        self._second: dict[int, float] = {}

    @property
    def evaluations(self) -> int:
        return self.cost.evaluations

    def center(self) -> float:
        if self._center is None:
            self._center = self.cost(self.x0)
        return self._center

    def _unit(self, k: int) -> np.ndarray:
        v = np.zeros(self.n)
        v[k] = 1.0
        return v

    def _line(self, direction: np.ndarray) -> Callable[[float], float]:
        return lambda y: self.center() if y == 0 else self.cost(self.x0 + y * direction)

    def _apply(self, rule: ShiftRule, direction: np.ndarray) -> float:
        line = self._line(direction)
        total = 0.0
        if rule.center:
            total += rule.center * self.center()
        for s, c in rule.terms:
            total += c * line(s)
        return float(total)

    def _axis_joint(self, k: int):
        spec = self.spectra[k]
        line = self._line(self._unit(k))
        if spec.equidistant and not self.pair_joint:
            poly = full_reconstruct_equidistant(line, spec.r_count, spec.scale, e0=self.center())
            self._first[k] = trigpoly_derivative(poly, 1, 0.0)
            self._second[k] = trigpoly_derivative(poly, 2, 0.0)
        elif self.pair_joint and spec.r_count == 1:
            w = spec.frequencies[0]
            s = (np.pi / 2) / w
            ep, em = line(s), line(-s)
            self._first[k] = w / 2 * (ep - em)
            self._second[k] = w ** 2 * ((ep + em) / 2 - self.center())
        else:
            self._first[k] = self._apply(rule_for(spec, 1), self._unit(k))
            self._second[k] = self._apply(rule_for(spec, 2), self._unit(k))

    def first(self, k: int) -> float:
        if k not in self._first:
            if self.spectra[k].r_count == 0:
                self._first[k] = 0.0
            elif self.joint:
                self._axis_joint(k)
            else:
                self._first[k] = self._apply(rule_for(self.spectra[k], 1), self._unit(k))
        return self._first[k]

    def second(self, k: int) -> float:
        if k not in self._second:
            if self.spectra[k].r_count == 0:
                self._second[k] = 0.0
            elif self.joint:
                self._axis_joint(k)
            else:
                self._second[k] = self._apply(rule_for(self.spectra[k], 2), self._unit(k))
        return self._second[k]

    def mixed(self, k: int, m: int, strategy: str = "diagonal_rule") -> float:
        """Off-diagonal Hessian entry H_km, k != m."""
        sk, sm = self.spectra[k], self.spectra[m]
        if sk.r_count == 0 or sm.r_count == 0:
            return 0.0
        vk, vm = self._unit(k), self._unit(m)
        if strategy == "repeated_rule":
            rk, rm = rule_for(sk, 1), rule_for(sm, 1)
            total = 0.0
            for s, cs in rk.terms:
                for t, ct in rm.terms:
                    total += cs * ct * self.cost(self.x0 + s * vk + t * vm)
            return float(total)
        alpha, beta, spec = pair_spectrum(sk, sm)
        rule = rule_for(spec, 2)
        plus = self._apply(rule, alpha * vk + beta * vm)
        if strategy == "diagonal_rule":
            hkk, hmm = self.second(k), self.second(m)
            return float((plus - alpha ** 2 * hkk - beta ** 2 * hmm) / (2 * alpha * beta))
        if strategy == "second_diagonal":
            minus = self._apply(rule, alpha * vk - beta * vm)
            return float((plus - minus) / (4 * alpha * beta))
        raise InputError(f"unknown Hessian strategy {strategy!r}")

    # --- collections ---

    def gradient(self) -> np.ndarray:
        return np.array([self.first(k) for k in range(self.n)])

    def hessian_diagonal(self) -> np.ndarray:
        return np.array([self.second(k) for k in range(self.n)])

    def hessian(self, strategy: str = "diagonal_rule") -> np.ndarray:
        h = np.diag(self.hessian_diagonal())
        for k in range(self.n):
            for m in range(k + 1, self.n):
                h[k, m] = h[m, k] = self.mixed(k, m, strategy)
        return h


# --- decomposition into single-word rotations ---

@dataclass
class Decomposition:
    """Circuit with every parametrized gate split into one gate per Pauli word."""

    circuit: Circuit
    owner: list[int]          # elementary parameter -> original parameter
    spectra: list[Spectrum]

    def expand(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return x[self.owner]

    def sizes(self, n: int) -> list[int]:
        return [self.owner.count(k) for k in range(n)]


def decompose(c: Circuit) -> Decomposition:
    """Split commuting Pauli-sum gates into single-word rotations.

    Identity words only contribute a global phase and are dropped.
    """
    gates = []
    owner: list[int] = []
    spectra: list[Spectrum] = []
    for i, g in enumerate(c.gates):
        if not isinstance(g, ParamGate):
            gates.append(g)
            continue
        if g.stochastic or g.generator.terms is None or not g.generator.is_commuting_sum:
            raise InputError(f"gate {i} is not a sum of commuting Pauli words")
        for t in g.generator.terms:
            if set(t.word) == {"I"} or t.coeff == 0:
                continue
            theta = g.prefactor * t.coeff
            gates.append(ParamGate(len(owner), theta, Generator([PauliTerm(1.0, t.word)])))
            owner.append(g.param)
            spectra.append(equidistant_spectrum(1, 2 * abs(theta)))
    return Decomposition(Circuit(c.n_qubits, gates, len(owner)), owner, spectra)


def _decomposed(c: Circuit, obs: Observable, params, want_grad: bool, hess: str):
    dec = decompose(c)
    n = c.n_params
    eng = DerivativeEngine(cost_function(dec.circuit, obs), dec.expand(params), dec.spectra,
                           joint=want_grad and hess != "none", pair_joint=True)
    groups = [[j for j, o in enumerate(dec.owner) if o == k] for k in range(n)]
    grad = None
    if want_grad:
        grad = np.array([sum(eng.first(j) for j in grp) for grp in groups])
    h = None
    if hess != "none":
        h = np.zeros((n, n))
        for k in range(n):
            h[k, k] = sum(eng.second(j) for j in groups[k])
            h[k, k] += 2 * sum(eng.mixed(a, b, "repeated_rule")
                               for ia, a in enumerate(groups[k]) for b in groups[k][ia + 1:])
        if hess == "full":
            for k in range(n):
                for m in range(k + 1, n):
                    h[k, m] = h[m, k] = sum(eng.mixed(a, b, "repeated_rule")
                                            for a in groups[k] for b in groups[m])
    return grad, h, eng.evaluations


# --- circuit-level API ---

def _spectra(c: Circuit, spectra):
    return circuit_spectra(c) if spectra is None else list(spectra)


def _engine(c, params, obs, spectra, joint=False):
    p = c.check_params(params)
    return DerivativeEngine(cost_function(c, obs), p, _spectra(c, spectra), joint=joint)


def gradient(c: Circuit, params, obs: Observable, spectra=None,
             method: str = "shift") -> DerivativeReport:
    """Gradient by the general shift rule (or by gate decomposition)."""
    if method == "decomposition":
        g, _, ev = _decomposed(c, obs, params, True, "none")
        return DerivativeReport(g, ev, "decomposition")
    eng = _engine(c, params, obs, spectra)
    return DerivativeReport(eng.gradient(), eng.evaluations, "shift")


def hessian_diagonal(c: Circuit, params, obs: Observable, spectra=None,
                     method: str = "shift") -> DerivativeReport:
    if method == "decomposition":
        _, h, ev = _decomposed(c, obs, params, False, "diagonal")
        return DerivativeReport(np.diag(h), ev, "decomposition")
    eng = _engine(c, params, obs, spectra)
    return DerivativeReport(eng.hessian_diagonal(), eng.evaluations, "shift")


def hessian(c: Circuit, params, obs: Observable, strategy: str = "diagonal_rule",
            spectra=None) -> DerivativeReport:
    """Full Hessian.

    Args:
        strategy: ``diagonal_rule`` (default), ``second_diagonal``,
            ``repeated_rule`` or ``decomposition``.
    """
    if strategy == "decomposition":
        _, h, ev = _decomposed(c, obs, params, False, "full")
        return DerivativeReport(h, ev, strategy)
    if strategy not in HESSIAN_STRATEGIES:
        raise InputError(f"unknown Hessian strategy {strategy!r}")
    eng = _engine(c, params, obs, spectra)
    return DerivativeReport(eng.hessian(strategy), eng.evaluations, strategy)


def gradient_and_hessian_diagonal(c: Circuit, params, obs: Observable, spectra=None,
                                  method: str = "shift") -> DerivativeReport:
    """Gradient and Hessian diagonal sharing evaluations; value has shape (2, n)."""
    if method == "decomposition":
        g, h, ev = _decomposed(c, obs, params, True, "diagonal")
        return DerivativeReport(np.vstack([g, np.diag(h)]), ev, "decomposition")
    eng = _engine(c, params, obs, spectra, joint=True)
    val = np.vstack([eng.gradient(), eng.hessian_diagonal()])
    return DerivativeReport(val, eng.evaluations, "shift")


def gradient_and_hessian(c: Circuit, params, obs: Observable, strategy: str = "diagonal_rule",
                         spectra=None) -> DerivativeReport:
    """Gradient and full Hessian; value is the Hessian, gradient in extras."""
    if strategy == "decomposition":
        g, h, ev = _decomposed(c, obs, params, True, "full")
        return DerivativeReport(h, ev, strategy, {"gradient": g})
    eng = _engine(c, params, obs, spectra, joint=True)
    g = eng.gradient()
    h = eng.hessian(strategy)
    return DerivativeReport(h, eng.evaluations, strategy, {"gradient": g})


# --- metric tensor ---

def overlap_cost(c: Circuit, params) -> Callable[[np.ndarray], float]:
    """f(x) = -|<psi(x)|psi(x0)>|^2 / 2 for a fixed reference point x0."""
    x0 = c.check_params(params).copy()
    ref = c.run(x0)

    def f(x):
        if np.array_equal(x, x0):
            return -0.5
        return -0.5 * abs(np.vdot(c.run(x), ref)) ** 2
    return f


def commuting_blocks(c: Circuit) -> list[tuple[int, int, list[int]]]:
    """Runs of adjacent, mutually commuting parametrized gates.

    Returns (first gate index, stop index, parameters) for each run whose
    parameters drive no gate outside the run.
    """
    from .spectrum import _mutually_commute

    runs = []
    i = 0
    gates = c.gates
    while i < len(gates):
        if not isinstance(gates[i], ParamGate) or gates[i].stochastic:
            i += 1
            continue
        j = i + 1
        while (j < len(gates) and isinstance(gates[j], ParamGate) and not gates[j].stochastic
               and _mutually_commute(gates[i:j + 1])):
            j += 1
        runs.append((i, j))
        i = j
    out = []
    for start, stop in runs:
        params = sorted({gates[g].param for g in range(start, stop)})
        inside = set(range(start, stop))
        if all(set(c.gates_for(k)) <= inside for k in params):
            out.append((start, stop, params))
    return out


def covariance_block(c: Circuit, params, indices: Sequence[int]) -> np.ndarray:
    """Generator covariance <A_k A_m> - <A_k><A_m> for one commuting block.

    Raises:
        NoncommutingBlock: if the parameters do not all belong to one block.
    """
    p = c.check_params(params)
    idx = list(indices)
    for start, stop, block in commuting_blocks(c):
        if set(idx) <= set(block):
            break
    else:
        raise NoncommutingBlock(f"parameters {idx} do not form a commuting block")
    psi = c.run(p, stop=start)
    vecs = []
    for k in idx:
        phi = np.zeros_like(psi)
        for gi in range(start, stop):
            g = c.gates[gi]
            if g.param == k:
                phi = phi + g.prefactor * g.generator.apply(psi)
        vecs.append(phi)
    means = np.array([np.vdot(psi, v).real for v in vecs])
    second = np.array([[np.vdot(a, b).real for b in vecs] for a in vecs])
    return second - np.outer(means, means)


def metric_tensor(c: Circuit, params, method: str = "overlap_hessian",
                  strategy: str = "diagonal_rule", spectra=None) -> DerivativeReport:
    """Fubini-Study metric.

    ``overlap_hessian`` differentiates f(x) = -|<psi(x)|psi(x0)>|^2/2 twice
    with the Hessian machinery, using f(x0) = -1/2 without evaluating it.
    ``covariance_block`` fills the commuting blocks from generator covariances
    and leaves all other entries as NaN; evaluations count one state per block.
    """
    p = c.check_params(params)
    n = c.n_params
    if method == "overlap_hessian":
        eng = DerivativeEngine(overlap_cost(c, p), p, _spectra(c, spectra), center=-0.5)
        return DerivativeReport(eng.hessian(strategy), eng.evaluations, method)
    if method == "covariance_block":
        out = np.full((n, n), np.nan)
        blocks = commuting_blocks(c)
        for _, _, block in blocks:
            cov = covariance_block(c, p, block)
            out[np.ix_(block, block)] = cov
        return DerivativeReport(out, len(blocks), method, {"blocks": [b for _, _, b in blocks]})
    raise InputError(f"unknown metric method {method!r}")


# --- output ---

def matrix_to_csv(value) -> str:
    """Row-major CSV with 17 significant digits (vectors become one row)."""
    arr = np.atleast_2d(np.asarray(value, dtype=float))
    return "".join(",".join(f"{v:.17g}" for v in row) + "\n" for row in arr)


def report_to_dict(report: DerivativeReport) -> dict:
    def plain(v):
        if isinstance(v, np.ndarray):
            return [plain(x) for x in v.tolist()] if v.ndim else plain(v.item())
        if isinstance(v, list):
            return [plain(x) for x in v]
        if isinstance(v, float) and not np.isfinite(v):
            return None
        return v

    out = {"value": plain(np.asarray(report.value, dtype=float)),
           "evaluations_used": int(report.evaluations_used), "strategy": report.strategy}
    for key, val in report.extras.items():
        out[key] = plain(np.asarray(val, dtype=float)) if isinstance(val, np.ndarray) else plain(val)
    return out
