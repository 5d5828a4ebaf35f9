"""Exact trigonometric interpolation of univariate cost restrictions.

Equidistant spectra {w, 2w, ..., Rw} are handled with closed-form interpolation
kernels after rescaling the argument by w; arbitrary spectra go through a
linear solve on a user-chosen (or default) set of shifts.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import (
    IllConditioned,
    IndexOutOfRange,
    InvalidKind,
    InvalidR,
    ReconstructionMismatch,
    ShiftCountMismatch,
)
from .linalg import condition_number, solve_linear

Evaluator = Callable[[float], float]

SINGULARITY_TOL = 1e-8
MAX_CONDITION = 1e10


@dataclass(frozen=True)
class TrigPoly:
    """a0 + sum_l a_l cos(w_l x) + b_l sin(w_l x)."""

    a0: float
    frequencies: tuple[float, ...]
    a: tuple[float, ...]
    b: tuple[float, ...]

    def __post_init__(self):
        if not len(self.frequencies) == len(self.a) == len(self.b):
            raise ValueError("frequencies, a and b must have equal length")

    @classmethod
    def build(cls, a0, freqs, a, b) -> "TrigPoly":
        return cls(float(a0), tuple(float(f) for f in freqs),
                   tuple(float(v) for v in a), tuple(float(v) for v in b))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        f = np.asarray(self.frequencies)
        ph = np.multiply.outer(x, f)
        return self.a0 + np.cos(ph) @ np.asarray(self.a) + np.sin(ph) @ np.asarray(self.b)

    def complex_coefficients(self) -> np.ndarray:
        """c_l = (a_l - i b_l) / 2."""
        return (np.asarray(self.a) - 1j * np.asarray(self.b)) / 2

    def to_dict(self) -> dict:
        return {"a0": self.a0, "freqs": list(self.frequencies), "a": list(self.a), "b": list(self.b)}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "TrigPoly":
        return cls.build(d["a0"], d["freqs"], d["a"], d["b"])


def trigpoly_derivative(p: TrigPoly, order: int, x: float) -> float:
    """Analytic derivative of the given order at ``x``."""
    if order < 0:
        raise ValueError("derivative order must be non-negative")
    f = np.asarray(p.frequencies)
    ph = f * x + order * np.pi / 2
    val = np.sum(f ** order * (np.asarray(p.a) * np.cos(ph) + np.asarray(p.b) * np.sin(ph)))
    if order == 0:
        val += p.a0
    return float(val)


# --- kernels ---

def _dirichlet(R: int, x: float) -> float:
    s = np.sin(x / 2)
    if abs(s) < SINGULARITY_TOL:
        return 1.0
    return float(np.sin((2 * R + 1) * x / 2) / ((2 * R + 1) * s))


def _modified(R: int, x: float) -> float:
    s = np.sin(x / 2)
    if abs(s) < SINGULARITY_TOL:
        return 1.0
    return float(np.sin(R * x) * np.cos(x / 2) / (2 * R * s))


def full_nodes(R: int) -> np.ndarray:
    """2*pi*mu/(2R+1) for mu = -R..R."""
    return 2 * np.pi * np.arange(-R, R + 1) / (2 * R + 1)


def odd_nodes(R: int) -> np.ndarray:
    """(2mu-1)*pi/(2R) for mu = 1..R."""
    return (2 * np.arange(1, R + 1) - 1) * np.pi / (2 * R)


def even_nodes(R: int) -> np.ndarray:
    """mu*pi/R for mu = 0..R."""
    return np.arange(0, R + 1) * np.pi / R


def kernel(kind: str, R: int, mu: int, x: float, nodes: Sequence[float] | None = None) -> float:
    """Interpolation kernels.

    kind:
        ``dirichlet``: D(x - x_mu) on the nodes 2*pi*mu/(2R+1), mu in -R..R.
        ``modified``: sin(Rx) / (2R tan(x/2)) shifted by ``mu*pi/R``.
        ``odd_mu``: D*(x - x_mu) - D*(x + x_mu), x_mu = (2mu-1)pi/(2R), mu in 1..R.
        ``even_mu``: even combinations on x_mu = mu*pi/R, mu in 0..R.
        ``nonequidistant_mu``: product kernel on ``nodes`` (default
            2*pi*mu/(2R+1), mu in 1..2R) vanishing at 0 and all other nodes.
    """
    if R < 1:
        raise InvalidR("R must be at least 1")
    if kind == "dirichlet":
        if not -R <= mu <= R:
            raise IndexOutOfRange(f"mu={mu} outside -{R}..{R}")
        return _dirichlet(R, x - 2 * np.pi * mu / (2 * R + 1))
    if kind == "modified":
        return _modified(R, x - mu * np.pi / R)
    if kind == "odd_mu":
        if not 1 <= mu <= R:
            raise IndexOutOfRange(f"mu={mu} outside 1..{R}")
        xm = (2 * mu - 1) * np.pi / (2 * R)
        return _modified(R, x - xm) - _modified(R, x + xm)
    if kind == "even_mu":
        if not 0 <= mu <= R:
            raise IndexOutOfRange(f"mu={mu} outside 0..{R}")
        if mu == 0:
            return _modified(R, x)
        if mu == R:
            return _modified(R, x - np.pi)
        xm = mu * np.pi / R
        return _modified(R, x - xm) + _modified(R, x + xm)
    if kind == "nonequidistant_mu":
        pts = (2 * np.pi * np.arange(1, 2 * R + 1) / (2 * R + 1)
               if nodes is None else np.asarray(nodes, dtype=float))
        if not 1 <= mu <= len(pts):
            raise IndexOutOfRange(f"mu={mu} outside 1..{len(pts)}")
        return _nonequidistant(pts, mu - 1, x)
    raise InvalidKind(f"unknown kernel kind {kind!r}")


def _nonequidistant(nodes: np.ndarray, j: int, x: float) -> float:
    xm = nodes[j]
    val = np.sin(x / 2) / np.sin(xm / 2)
    for i, xi in enumerate(nodes):
        if i != j:
            val *= np.sin((x - xi) / 2) / np.sin((xm - xi) / 2)
    return float(val)


# --- equidistant reconstructions ---

def _check_R(R: int):
    if int(R) != R or R < 1:
        raise InvalidR(f"R must be a positive integer, got {R}")


def full_reconstruct_equidistant(e: Evaluator, R: int, scale: float = 1.0,
                                 e0: float | None = None, verify: bool = False) -> TrigPoly:
    """Reconstruct E from its values on 2R+1 equidistant nodes.

    Args:
        e: univariate evaluator.
        R: number of frequencies; the spectrum is assumed to be scale*{1..R}.
        scale: frequency spacing.
        e0: known value E(0); skips that evaluation when given.
        verify: probe 20 extra points and raise ``ReconstructionMismatch`` if
            any deviates by more than 1e-6.

    Returns:
        TrigPoly with frequencies scale*{1..R}.
    """
    _check_R(R)
    nodes = full_nodes(R)
    vals = np.array([e0 if (x == 0 and e0 is not None) else e(x / scale) for x in nodes])
    ell = np.arange(1, R + 1)
    ph = np.outer(ell, nodes)
    n = 2 * R + 1
    p = TrigPoly.build(vals.sum() / n, scale * ell, 2 / n * np.cos(ph) @ vals, 2 / n * np.sin(ph) @ vals)
    if verify:
        _verify(p, e, np.pi / scale)
    return p


def _verify(p: TrigPoly, e: Evaluator, half_period: float, n_probe: int = 20):
    rng = np.random.default_rng(12345)
    for x in rng.uniform(-half_period, half_period, n_probe):
        if abs(p(x) - e(x)) > 1e-6:
            raise ReconstructionMismatch(
                f"reconstruction deviates by {abs(p(x) - e(x)):.3e} at x={x:.6f}; "
                "the frequency count is probably too small")


def reconstruct_odd(e: Evaluator, R: int, scale: float = 1.0) -> np.ndarray:
    """Sine coefficients b_l from 2R evaluations at +-(2mu-1)pi/(2R)."""
    _check_R(R)
    nodes = odd_nodes(R)
    odd = np.array([(e(x / scale) - e(-x / scale)) / 2 for x in nodes])
    ell = np.arange(1, R + 1)
    w = np.where(ell < R, 2.0 / R, 1.0 / R)
    return w * (np.sin(np.outer(ell, nodes)) @ odd)


def reconstruct_even(e: Evaluator, R: int, scale: float = 1.0,
                     e0: float | None = None) -> tuple[float, np.ndarray]:
    """(a0, a_l) from E(0), E(pi) and pairs at +-mu*pi/R, 0 < mu < R."""
    _check_R(R)
    nodes = even_nodes(R)
    vals = []
    for mu, x in enumerate(nodes):
        if mu == 0:
            vals.append(e(0.0) if e0 is None else e0)
        elif mu == R:
            vals.append(e(np.pi / scale))
        else:
            vals.append((e(x / scale) + e(-x / scale)) / 2)
    vals = np.array(vals)
    wmu = np.ones(R + 1)
    wmu[0] = wmu[-1] = 0.5
    ell = np.arange(1, R + 1)
    w = np.where(ell < R, 2.0 / R, 1.0 / R)
    a0 = float(wmu @ vals / R)
    a = w * (np.cos(np.outer(ell, nodes)) @ (wmu * vals))
    return a0, a


def reconstruct_odd_even(e: Evaluator, R: int, scale: float = 1.0) -> TrigPoly:
    b = reconstruct_odd(e, R, scale)
    a0, a = reconstruct_even(e, R, scale)
    return TrigPoly.build(a0, scale * np.arange(1, R + 1), a, b)


# --- arbitrary spectra ---

def default_nonuniform_shifts(freqs) -> np.ndarray:
    """Equidistant nodes in (-pi, pi) stretched by R / max frequency."""
    f = np.asarray(freqs, dtype=float)
    R = len(f)
    return full_nodes(R) * R / f.max()


def reconstruct_nonuniform(e: Evaluator, freqs, shifts=None, e0: float | None = None) -> TrigPoly:
    """Recover a0, a_l, b_l for arbitrary frequencies by a linear solve.

    Raises:
        ShiftCountMismatch: unless there are exactly 2R+1 shifts.
        Singular: for repeated shifts or otherwise rank-deficient designs.
        IllConditioned: when the design matrix condition exceeds 1e10.
    """
    f = np.asarray(freqs, dtype=float).reshape(-1)
    if f.size == 0:
        val = e(0.0) if e0 is None else e0
        return TrigPoly.build(val, [], [], [])
    x = default_nonuniform_shifts(f) if shifts is None else np.asarray(shifts, dtype=float)
    if x.size != 2 * f.size + 1:
        raise ShiftCountMismatch(f"need {2 * f.size + 1} shifts for {f.size} frequencies, got {x.size}")
    ph = np.outer(x, f)
    design = np.hstack([np.ones((x.size, 1)), np.cos(ph), np.sin(ph)])
    vals = np.array([e0 if (xi == 0 and e0 is not None) else e(xi) for xi in x])
    cond = condition_number(design)
    if np.isfinite(cond) and cond > MAX_CONDITION:
        raise IllConditioned(f"design matrix condition {cond:.3e}; choose better spread shifts")
    coef = solve_linear(design, vals).real
    R = f.size
    return TrigPoly.build(coef[0], f, coef[1:R + 1], coef[R + 1:])
