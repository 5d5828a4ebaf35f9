"""Dense complex linear algebra primitives."""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import IllConditionedWarning, NonHermitian, NonSquare, Singular

HERMITIAN_TOL = 1e-10
SINGULAR_TOL = 1e-12
CONDITION_WARN = 1e10


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and orthonormal eigenvectors (as columns)."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


def _as_square(m) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {m.shape}")
    return m


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = np.asarray(m)
    if m.size == 0:
        return True
    return float(np.max(np.abs(m - m.conj().T))) <= tol


def check_hermitian(m, tol: float = HERMITIAN_TOL) -> np.ndarray:
    m = _as_square(m)
    if not is_hermitian(m, tol):
        dev = float(np.max(np.abs(m - m.conj().T)))
        raise NonHermitian(f"matrix deviates from its adjoint by {dev:.3e}")
    return m


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # make the first non-negligible entry of every column real positive
    out = vecs.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        a = col[idx]
        if abs(a) > 0:
            out[:, j] = col * (abs(a) / a)
    return out


def hermitian_eig(m) -> EigenDecomposition:
    """Eigendecomposition of a Hermitian matrix with ascending eigenvalues.

    Eigenvector phases are normalised so that the first non-negligible
    component of each column is real and positive.

    Raises:
        NonSquare: if ``m`` is not square.
        NonHermitian: if ``m`` differs from its adjoint by more than 1e-10.
    """
    m = check_hermitian(m)
    herm = 0.5 * (m + m.conj().T)
    vals, vecs = np.linalg.eigh(herm)
    return EigenDecomposition(vals.astype(float), _fix_phases(vecs))


def hermitian_eigvals(m) -> np.ndarray:
    m = check_hermitian(m)
    return np.linalg.eigvalsh(0.5 * (m + m.conj().T))


def expm_i(theta: float, m) -> np.ndarray:
    """Return exp(i*theta*m) for Hermitian ``m``."""
    dec = hermitian_eig(m)
    v = dec.eigenvectors
    return (v * np.exp(1j * theta * dec.eigenvalues)) @ v.conj().T


def solve_linear(a, b) -> np.ndarray:
    """Solve ``a @ x = b`` for square ``a``.

    Raises:
        Singular: when the smallest singular value is below 1e-12 relative
            to the largest.

    Emits ``IllConditionedWarning`` above condition number 1e10.
    """
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NonSquare(f"expected a square matrix, got shape {a.shape}")
    b = np.asarray(b)
    sv = np.linalg.svd(a, compute_uv=False)
    if sv.size == 0 or sv[0] == 0 or sv[-1] / sv[0] < SINGULAR_TOL:
        raise Singular("linear system is rank deficient")
    cond = sv[0] / sv[-1]
    if cond > CONDITION_WARN:
        warnings.warn(f"condition number {cond:.3e} exceeds {CONDITION_WARN:.0e}",
                      IllConditionedWarning, stacklevel=2)
    return np.linalg.solve(a, b)


def condition_number(a) -> float:
    sv = np.linalg.svd(np.asarray(a), compute_uv=False)
    if sv.size == 0 or sv[-1] == 0:
        return float("inf")
    return float(sv[0] / sv[-1])
