"""Frequency content of a cost function with respect to each parameter."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .circuit import Circuit, Generator, ParamGate
from .errors import EmptySpectrum, IndexOutOfRange, StochasticOnly, UnusedParameter

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues, unique positive differences and equidistance metadata.

    ``exact`` is False when the frequencies are a guaranteed superset rather
    than the exact difference set (parameters shared by non-adjacent gates).
    """

    eigenvalues: tuple[float, ...]
    frequencies: tuple[float, ...]
    equidistant: bool
    scale: float
    exact: bool = True

    @property
    def r_count(self) -> int:
        return len(self.frequencies)

    R = r_count

    @property
    def max_frequency(self) -> float:
        return self.frequencies[-1] if self.frequencies else 0.0

    def integer_frequencies(self) -> np.ndarray:
        return np.arange(1, self.r_count + 1)


def merge_close(values, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Sort and merge values whose gap is within tol*max(1,|v|)."""
    vals = np.sort(np.asarray(values, dtype=float).reshape(-1))
    out: list[float] = []
    for v in vals:
        if out and abs(v - out[-1]) <= tol * max(1.0, abs(out[-1])):
            continue
        out.append(float(v))
    return np.array(out)


def positive_differences(eigenvalues, tol: float = DEFAULT_TOL) -> np.ndarray:
    ev = merge_close(eigenvalues, tol)
    diffs = (ev[None, :] - ev[:, None])[np.triu_indices(len(ev), 1)]
    diffs = diffs[diffs > tol * np.maximum(1.0, np.abs(ev).max(initial=0.0))]
    return merge_close(diffs, tol)


def detect_equidistant(freqs, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    """Check whether ``freqs`` equals {w, 2w, ..., Rw}; return (flag, w).

    The returned scale is 1 when the frequencies are not equidistant.
    """
    f = np.asarray(freqs, dtype=float).reshape(-1)
    if f.size == 0:
        raise EmptySpectrum("no frequencies to classify")
    f = np.sort(f)
    # least-squares spacing over all multiples is more accurate than f[0]
    ell = np.arange(1, f.size + 1)
    w = float(np.dot(ell, f) / np.dot(ell, ell))
    ok = bool(np.all(np.abs(f - ell * w) <= tol * np.maximum(1.0, np.abs(f))))
    return (ok, w) if ok else (False, 1.0)


def spectrum_from_frequencies(freqs, eigenvalues=(), tol: float = DEFAULT_TOL,
                              exact: bool = True) -> Spectrum:
    f = merge_close(freqs, tol)
    f = f[f > 0]
    if f.size == 0:
        return Spectrum(tuple(float(e) for e in eigenvalues), (), True, 1.0, exact)
    eq, w = detect_equidistant(f, tol)
    if eq:
        f = w * np.arange(1, f.size + 1)
    return Spectrum(tuple(float(e) for e in eigenvalues), tuple(float(x) for x in f), eq, w, exact)


def equidistant_spectrum(R: int, scale: float = 1.0) -> Spectrum:
    """Spectrum {scale, 2*scale, ..., R*scale} without eigenvalue data."""
    return Spectrum((), tuple(float(scale * ell) for ell in range(1, R + 1)), True, float(scale))


def generator_spectrum(g: Generator | np.ndarray, tol: float = DEFAULT_TOL,
                       prefactor: float = 1.0) -> Spectrum:
    """Spectrum of ``prefactor * g``; differences merge within tol*max(1,|d|)."""
    if isinstance(g, Generator):
        ev = g.eigenvalues()
    else:
        from .linalg import hermitian_eigvals
        ev = hermitian_eigvals(g)
    ev = np.sort(prefactor * np.asarray(ev))
    uniq = merge_close(ev, tol)
    return spectrum_from_frequencies(positive_differences(uniq, tol), uniq, tol)


def _all_differences(eigenvalues, tol):
    ev = merge_close(eigenvalues, tol)
    return merge_close((ev[None, :] - ev[:, None]).reshape(-1), tol)


def param_spectrum(c: Circuit, k: int, tol: float = DEFAULT_TOL) -> Spectrum:
    """Spectrum governing the restriction of the cost to parameter ``k``.

    Gates sharing ``k`` that are adjacent and mutually commuting are merged
    into one generator. Otherwise the frequencies are bounded by the sum set
    of the per-gate difference sets, which is returned with ``exact=False``.
    """
    if not 0 <= k < c.n_params:
        raise IndexOutOfRange(f"parameter index {k} outside 0..{c.n_params - 1}")
    idx = c.gates_for(k)
    if not idx:
        raise UnusedParameter(f"parameter {k} drives no gate")
    gates: list[ParamGate] = [c.gates[i] for i in idx]
    if any(g.stochastic for g in gates):
        raise StochasticOnly(f"parameter {k} drives a gate with an extra F term")
    if len(gates) == 1:
        return generator_spectrum(gates[0].generator, tol, gates[0].prefactor)
    adjacent = idx == list(range(idx[0], idx[-1] + 1))
    if adjacent and _mutually_commute(gates):
        if all(g.generator.terms is not None for g in gates):
            from .circuit import PauliTerm
            merged = Generator([PauliTerm(g.prefactor * t.coeff, t.word)
                                for g in gates for t in g.generator.terms])
            return generator_spectrum(merged, tol)
        total = sum(g.prefactor * g.generator.matrix() for g in gates)
        return generator_spectrum(total, tol)
    sums = np.array([0.0])
    for g in gates:
        d = _all_differences(g.prefactor * g.generator.eigenvalues(), tol)
        sums = merge_close((sums[:, None] + d[None, :]).reshape(-1), tol)
    return spectrum_from_frequencies(sums[sums > tol], (), tol, exact=False)


def _mutually_commute(gates: list[ParamGate]) -> bool:
    from .circuit import words_commute
    for i, a in enumerate(gates):
        for b in gates[i + 1:]:
            if a.generator.terms is not None and b.generator.terms is not None:
                if all(words_commute(s.word, t.word)
                       for s in a.generator.terms for t in b.generator.terms):
                    continue
            ma, mb = a.generator.matrix(), b.generator.matrix()
            if np.max(np.abs(ma @ mb - mb @ ma)) > 1e-10:
                return False
    return True


def circuit_spectra(c: Circuit, tol: float = DEFAULT_TOL) -> list[Spectrum]:
    return [param_spectrum(c, k, tol) for k in range(c.n_params)]
