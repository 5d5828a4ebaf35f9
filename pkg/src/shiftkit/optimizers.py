"""Rotosolve coordinate descent and quantum analytic descent (QAD) models."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .circuit import CachedCost, Circuit, Observable, cost_function
from .derivatives import DerivativeEngine
from .errors import InputError, NonConvergence, Unsupported, VariantRequiresSingleFrequency
from .reconstruction import TrigPoly, full_reconstruct_equidistant, reconstruct_nonuniform
from .spectrum import Spectrum, circuit_spectra

QAD_VARIANTS = ("original", "extended", "interpolation")


# --- univariate minimisation ---

@dataclass(frozen=True)
class MinimizerConfig:
    grid_per_frequency: int = 100
    xtol: float = 1e-10


def minimize_trigpoly(poly: TrigPoly, window: tuple[float, float],
                      cfg: MinimizerConfig = MinimizerConfig()) -> tuple[float, float]:
    """Global minimiser of ``poly`` on ``window``: dense grid, then golden section.

    Returns (argmin, min value).
    """
    lo, hi = window
    n_grid = max(16, cfg.grid_per_frequency * max(1, len(poly.frequencies)))
    grid = np.linspace(lo, hi, n_grid, endpoint=False)
    vals = poly(grid)
    i = int(np.argmin(vals))
    step = grid[1] - grid[0]
    a, b, c = grid[i] - step, grid[i], grid[i] + step
    best_x, best_v = float(grid[i]), float(vals[i])
    if poly(a) > best_v and poly(c) > best_v:
        res = minimize_scalar(lambda t: float(poly(t)), bracket=(a, b, c), method="golden",
                              options={"xtol": cfg.xtol})
        if res.fun <= best_v:
            best_x, best_v = float(res.x), float(res.fun)
    return best_x, best_v


@dataclass
class OptTrace:
    """One row per coordinate step: (params, cost, evaluations_used)."""

    iterations: list[tuple[np.ndarray, float, int]] = field(default_factory=list)

    @property
    def final_params(self) -> np.ndarray:
        return self.iterations[-1][0]

    @property
    def costs(self) -> np.ndarray:
        return np.array([c for _, c, _ in self.iterations])

    @property
    def total_evaluations(self) -> int:
        return sum(e for _, _, e in self.iterations)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "cost", "cumulative_evaluations"])
        total = 0
        for i, (_, cost, ev) in enumerate(self.iterations):
            total += ev
            w.writerow([i, repr(float(cost)), total])
        return buf.getvalue()


def reconstruct_axis(cost: Callable, x: np.ndarray, k: int, spec: Spectrum) -> TrigPoly:
    """Univariate reconstruction of ``cost`` along axis ``k`` through ``x``."""
    v = np.zeros_like(x)
    v[k] = 1.0
    line = lambda t: cost(x + t * v)
    if spec.equidistant:
        return full_reconstruct_equidistant(line, spec.r_count, spec.scale)
    return reconstruct_nonuniform(line, spec.frequencies)


def rotosolve_cost_step(cost: Callable, x, k: int, spec: Spectrum,
                        cfg: MinimizerConfig = MinimizerConfig()) -> tuple[float, float, int]:
    """Minimise along axis ``k``; returns (new value of x_k, cost, evaluations).

    The current value is kept unless the reconstruction promises a strictly
    lower cost, so steps never increase the cost.
    """
    x = np.asarray(x, dtype=float)
    if spec.r_count == 0:
        return float(x[k]), float(cost(x)), 1
    counted = CachedCost(cost)
    poly = reconstruct_axis(counted, x, k, spec)
    half = np.pi / (spec.scale if spec.equidistant else spec.frequencies[0])
    t, val = minimize_trigpoly(poly, (-half, half), cfg)
    current = float(poly(0.0))
    if val >= current:
        t, val = 0.0, current
    return float(x[k] + t), float(val), counted.evaluations


def rotosolve_step(c: Circuit, params, k: int, obs: Observable,
                   cfg: MinimizerConfig = MinimizerConfig(),
                   spectrum: Spectrum | None = None) -> tuple[float, int]:
    """(new value of parameter k, evaluations used) for one Rotosolve step."""
    from .spectrum import param_spectrum

    p = c.check_params(params)
    spec = param_spectrum(c, k) if spectrum is None else spectrum
    new, _, ev = rotosolve_cost_step(cost_function(c, obs), p, k, spec, cfg)
    return new, ev


def rotosolve_cost(cost: Callable, x0, spectra: Sequence[Spectrum], epochs: int,
                   cfg: MinimizerConfig = MinimizerConfig()) -> OptTrace:
    if epochs < 1:
        raise InputError("epochs must be at least 1")
    x = np.asarray(x0, dtype=float).copy()
    trace = OptTrace()
    for _ in range(epochs):
        for k, spec in enumerate(spectra):
            x[k], val, ev = rotosolve_cost_step(cost, x, k, spec, cfg)
            trace.iterations.append((x.copy(), val, ev))
    return trace


def rotosolve(c: Circuit, params0, obs: Observable, epochs: int,
              cfg: MinimizerConfig = MinimizerConfig(), spectra=None) -> OptTrace:
    """Sequential exact minimisation over each parameter, ``epochs`` sweeps."""
    p = c.check_params(params0)
    spectra = circuit_spectra(c) if spectra is None else spectra
    return rotosolve_cost(cost_function(c, obs), p, spectra, epochs, cfg)


# --- QAD models ---

@dataclass
class QADModel:
    """Local trigonometric model around ``x0``.

    The original and extended variants are stored as coefficient arrays and
    evaluated in the per-axis basis cos^2(w x/2), cos(w x/2) sin(w x/2),
    sin^2(w x/2), which equals A(x) times powers of tan(w x/2) without
    dividing by the cosine.
    """

    variant: str
    x0: np.ndarray
    scales: np.ndarray
    E_A: float
    E_B: np.ndarray | None = None
    E_C: np.ndarray | None = None
    E_D: np.ndarray | None = None
    E_F: np.ndarray | None = None
    E_G: np.ndarray | None = None
    R: np.ndarray | None = None
    axis_values: list[np.ndarray] | None = None
    plane_values: dict[tuple[int, int], np.ndarray] | None = None
    evaluations_used: int = 0

    @property
    def n(self) -> int:
        return self.x0.size

    def terms(self) -> list[tuple[float, dict[int, int]]]:
        """(coefficient, {axis: basis index}) for the tangent-basis variants."""
        n = self.n
        out = [(self.E_A, {})]
        for k in range(n):
            out.append((2 * self.E_B[k], {k: 1}))
            out.append((2 * self.E_C[k], {k: 2}))
        for k in range(n):
            for m in range(k + 1, n):
                out.append((4 * self.E_D[k, m], {k: 1, m: 1}))
        if self.variant == "extended":
            for k in range(n):
                for m in range(n):
                    if k != m:
                        out.append((4 * self.E_F[k, m], {k: 1, m: 2}))
            for k in range(n):
                for m in range(k + 1, n):
                    out.append((4 * self.E_G[k, m], {k: 2, m: 2}))
        return out

    def to_dict(self) -> dict:
        d = {"variant": self.variant, "x0": self.x0.tolist(), "scales": self.scales.tolist(),
             "E_A": self.E_A, "evaluations_used": self.evaluations_used}
        for name in ("E_B", "E_C", "E_D", "E_F", "E_G", "R"):
            val = getattr(self, name)
            if val is not None:
                d[name] = np.asarray(val).tolist()
        if self.axis_values is not None:
            d["axis_values"] = [v.tolist() for v in self.axis_values]
            d["plane_values"] = {f"{k},{m}": v.tolist() for (k, m), v in self.plane_values.items()}
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "QADModel":
        arr = lambda key: None if key not in d else np.asarray(d[key], dtype=float)
        m = cls(d["variant"], arr("x0"), arr("scales"), float(d["E_A"]), arr("E_B"), arr("E_C"),
                arr("E_D"), arr("E_F"), arr("E_G"), None, None, None, int(d.get("evaluations_used", 0)))
        if "R" in d:
            m.R = np.asarray(d["R"], dtype=int)
        if "axis_values" in d:
            m.axis_values = [np.asarray(v, dtype=float) for v in d["axis_values"]]
            m.plane_values = {tuple(int(i) for i in key.split(",")): np.asarray(v, dtype=float)
                              for key, v in d["plane_values"].items()}
        return m


def _check_single(spectra):
    for k, s in enumerate(spectra):
        if s.r_count != 1:
            raise VariantRequiresSingleFrequency(
                f"parameter {k} has {s.r_count} frequencies; this variant needs exactly one")
    return np.array([s.frequencies[0] for s in spectra])


def interpolation_nodes(R: int) -> np.ndarray:
    """2*pi*mu/(2R+1) for mu = 1..2R."""
    return 2 * np.pi * np.arange(1, 2 * R + 1) / (2 * R + 1)


def qad_build_cost(cost: Callable, x0, spectra: Sequence[Spectrum], variant: str) -> QADModel:
    """Build a QAD model of an arbitrary cost with the given spectra."""
    if variant not in QAD_VARIANTS:
        raise InputError(f"unknown QAD variant {variant!r}")
    x0 = np.asarray(x0, dtype=float) + 0.0
    n = x0.size
    counted = CachedCost(cost)
    if variant == "original":
        w = _check_single(spectra)
        eng = DerivativeEngine(counted, x0, spectra, joint=True)
        grad = eng.gradient()
        hess = eng.hessian("diagonal_rule")
        e_a = eng.center()
        return QADModel("original", x0, w, e_a, grad / w, np.diag(hess) / w ** 2 + e_a / 2,
                        np.triu(hess / np.outer(w, w), 1), evaluations_used=counted.evaluations)
    if variant == "extended":
        w = _check_single(spectra)
        shifts = np.pi / (2 * w)
        e_a = counted(x0)
        e_b, e_c = np.zeros(n), np.zeros(n)
        e_d, e_f, e_g = np.zeros((n, n)), np.zeros((n, n)), np.zeros((n, n))
        eye = np.eye(n)
        for k in range(n):
            plus, minus = counted(x0 + shifts[k] * eye[k]), counted(x0 - shifts[k] * eye[k])
            e_b[k] = (plus - minus) / 2
            e_c[k] = (plus + minus - e_a) / 2
        for k in range(n):
            for m in range(k + 1, n):
                s = sk = sm = skm = 0.0
                for sgn_k in (1, -1):
                    for sgn_m in (1, -1):
                        val = counted(x0 + sgn_k * shifts[k] * eye[k] + sgn_m * shifts[m] * eye[m])
                        s += val
                        sk += sgn_k * val
                        sm += sgn_m * val
                        skm += sgn_k * sgn_m * val
                e_d[k, m] = skm / 4
                e_f[k, m] = (sk - 2 * e_b[k]) / 4
                e_f[m, k] = (sm - 2 * e_b[m]) / 4
                e_g[k, m] = (s - e_a - 2 * e_c[k] - 2 * e_c[m]) / 4
        return QADModel("extended", x0, w, e_a, e_b, e_c, e_d, e_f, e_g,
                        evaluations_used=counted.evaluations)
    # full trigonometric interpolation on coordinate axes and planes
    if not all(s.equidistant and s.r_count >= 1 for s in spectra):
        raise Unsupported("the interpolation model needs equidistant spectra")
    w = np.array([s.scale for s in spectra])
    R = np.array([s.r_count for s in spectra])
    e0 = counted(x0)
    eye = np.eye(n)
    nodes = [interpolation_nodes(int(r)) / wk for r, wk in zip(R, w)]
    axis = [np.array([counted(x0 + t * eye[k]) - e0 for t in nodes[k]]) for k in range(n)]
    planes = {}
    for k in range(n):
        for m in range(k + 1, n):
            grid = np.array([[counted(x0 + a * eye[k] + b * eye[m]) for b in nodes[m]]
                             for a in nodes[k]])
            planes[(k, m)] = grid - axis[k][:, None] - axis[m][None, :] - e0
    return QADModel("interpolation", x0, w, e0, R=R, axis_values=axis, plane_values=planes,
                    evaluations_used=counted.evaluations)


def qad_build(c: Circuit, x0, obs: Observable, variant: str, spectra=None) -> QADModel:
    """QAD model of the circuit cost around ``x0``.

    Evaluations: original (3n^2+n)/2+1, extended 2n^2+1, interpolation
    2(|R|_1^2 - |R|_2^2 + |R|_1) + 1.
    """
    p = c.check_params(x0)
    spectra = circuit_spectra(c) if spectra is None else spectra
    return qad_build_cost(cost_function(c, obs), p, spectra, variant)


def _tangent_basis(model: QADModel, x):
    half = model.scales * (np.asarray(x, dtype=float) - model.x0) / 2
    c, s = np.cos(half), np.sin(half)
    basis = np.stack([c * c, c * s, s * s])
    # d/dx of each basis function, including the chain-rule factor w/2
    dbasis = np.stack([-2 * c * s, c * c - s * s, 2 * c * s]) * (model.scales / 2)
    return basis, dbasis


def _dirichlet_sum(R: int, u: np.ndarray, deriv: bool = False) -> np.ndarray:
    ell = np.arange(1, R + 1)
    ph = np.multiply.outer(u, ell)
    if deriv:
        return -2 * (np.sin(ph) @ ell) / (2 * R + 1)
    return (1 + 2 * np.cos(ph).sum(axis=-1)) / (2 * R + 1)


def _interp_kernels(model: QADModel, x, deriv: bool):
    dx = np.asarray(x, dtype=float) - model.x0
    vals, ders = [], []
    for k in range(model.n):
        R = int(model.R[k])
        u = model.scales[k] * dx[k] - interpolation_nodes(R)
        vals.append(_dirichlet_sum(R, u))
        ders.append(_dirichlet_sum(R, u, True) * model.scales[k] if deriv else None)
    return vals, ders


def qad_eval(model: QADModel, x) -> float:
    """Model value at the absolute parameter vector ``x``."""
    if model.variant == "interpolation":
        kern, _ = _interp_kernels(model, x, False)
        val = model.E_A + sum(float(model.axis_values[k] @ kern[k]) for k in range(model.n))
        for (k, m), grid in model.plane_values.items():
            val += float(kern[k] @ grid @ kern[m])
        return float(val)
    basis, _ = _tangent_basis(model, x)
    n = model.n
    total = 0.0
    for coeff, exps in model.terms():
        prod = coeff
        for k in range(n):
            prod *= basis[exps.get(k, 0), k]
        total += prod
    return float(total)


def qad_gradient(model: QADModel, x) -> np.ndarray:
    """Analytic gradient of the model at ``x``."""
    n = model.n
    grad = np.zeros(n)
    if model.variant == "interpolation":
        kern, dkern = _interp_kernels(model, x, True)
        for k in range(n):
            grad[k] += float(model.axis_values[k] @ dkern[k])
        for (k, m), grid in model.plane_values.items():
            grad[k] += float(dkern[k] @ grid @ kern[m])
            grad[m] += float(kern[k] @ grid @ dkern[m])
        return grad
    basis, dbasis = _tangent_basis(model, x)
    for coeff, exps in model.terms():
        idx = [exps.get(k, 0) for k in range(n)]
        vals = basis[idx, np.arange(n)]
        for j in range(n):
            others = np.prod(np.delete(vals, j))
            grad[j] += coeff * others * dbasis[idx[j], j]
    return grad


@dataclass(frozen=True)
class InnerConfig:
    max_steps: int = 1000
    gradient_tol: float = 1e-10
    raise_on_cap: bool = False


@dataclass
class QADMinimum:
    x: np.ndarray
    value: float
    converged: bool
    steps: int


def qad_minimize(model: QADModel, cfg: InnerConfig = InnerConfig()) -> QADMinimum:
    """Box-constrained quasi-Newton descent on the model inside x0 +- pi/w.

    Raises:
        NonConvergence: only when ``cfg.raise_on_cap`` is set and the step cap
            is reached; otherwise the best point is returned with
            ``converged=False``.
    """
    bounds = list(zip(model.x0 - np.pi / model.scales, model.x0 + np.pi / model.scales))
    res = minimize(lambda x: qad_eval(model, x), model.x0.copy(), jac=lambda x: qad_gradient(model, x),
                   method="L-BFGS-B", bounds=bounds,
                   options={"maxiter": cfg.max_steps, "gtol": cfg.gradient_tol, "ftol": 1e-15})
    x = np.asarray(res.x, dtype=float)
    converged = bool(res.success)
    if not converged and cfg.raise_on_cap:
        raise NonConvergence(f"inner loop did not converge in {cfg.max_steps} steps: {res.message}")
    return QADMinimum(x, qad_eval(model, x), converged, int(res.nit))
