"""Parametrized circuits, observables and a dense statevector simulator.

A parametrized gate acts as ``exp(i * prefactor * x * G)`` or, when an extra
term ``F`` is attached, as ``exp(i * (prefactor * x * G + F))``. Qubit 0 is the
leftmost letter of a Pauli word and the most significant bit of a basis index.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import (
    CircuitFormatError,
    DimensionMismatch,
    IndexOutOfRange,
    NonHermitian,
)
from .linalg import hermitian_eig, is_hermitian

_PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

_S2 = 1 / np.sqrt(2)
NAMED_GATES = {
    "I": np.eye(2, dtype=complex),
    "X": _PAULI["X"],
    "Y": _PAULI["Y"],
    "Z": _PAULI["Z"],
    "H": np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    "S": np.diag([1, 1j]).astype(complex),
    "SDG": np.diag([1, -1j]).astype(complex),
    "T": np.diag([1, np.exp(1j * np.pi / 4)]),
    "SX": 0.5 * np.array([[1 + 1j, 1 - 1j], [1 - 1j, 1 + 1j]]),
    "CNOT": np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex),
    "CZ": np.diag([1, 1, 1, -1]).astype(complex),
    "SWAP": np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex),
}


# --- Pauli words ---

def word_matrix(word: str) -> np.ndarray:
    """Dense matrix of a Pauli word (Kronecker product, qubit 0 first)."""
    out = np.ones((1, 1), dtype=complex)
    for ch in word:
        out = np.kron(out, _PAULI[ch])
    return out


def words_commute(a: str, b: str) -> bool:
    clashes = sum(1 for p, q in zip(a, b) if p != "I" and q != "I" and p != q)
    return clashes % 2 == 0


@dataclass(frozen=True)
class _WordAction:
    xmask: int
    phase: complex
    signs: np.ndarray  # (-1)^popcount(b & zmask) for every basis index b

    def apply(self, state: np.ndarray) -> np.ndarray:
        idx = np.arange(state.shape[0]) ^ self.xmask
        return self.phase * (self.signs * state)[idx]


def _word_action(word: str) -> _WordAction:
    n = len(word)
    xmask = zmask = 0
    ny = 0
    for q, ch in enumerate(word):
        bit = 1 << (n - 1 - q)
        if ch in "XY":
            xmask |= bit
        if ch in "ZY":
            zmask |= bit
        if ch == "Y":
            ny += 1
    basis = np.arange(1 << n)
    parity = np.zeros(1 << n, dtype=np.int64)
    z = basis & zmask
    while np.any(z):
        parity ^= z & 1
        z = z >> 1
    signs = 1.0 - 2.0 * parity
    return _WordAction(xmask, 1j ** ny, signs)


# --- operators ---

@dataclass(frozen=True)
class PauliTerm:
    coeff: float
    word: str

    def __post_init__(self):
        if not self.word or any(ch not in _PAULI for ch in self.word):
            raise CircuitFormatError(f"invalid Pauli word {self.word!r}")
        if not np.isfinite(self.coeff):
            raise CircuitFormatError(f"non-finite coefficient for word {self.word!r}")


class Generator:
    """A Hermitian operator given as a Pauli sum or as a dense matrix."""

    def __init__(self, terms: Sequence[PauliTerm] | None = None, dense=None):
        if (terms is None) == (dense is None):
            raise CircuitFormatError("generator needs exactly one of terms or dense")
        if terms is not None:
            terms = tuple(terms)
            if not terms:
                raise CircuitFormatError("generator Pauli sum is empty")
            widths = {len(t.word) for t in terms}
            if len(widths) != 1:
                raise CircuitFormatError("Pauli words of unequal length in one generator")
            self.terms: tuple[PauliTerm, ...] | None = terms
            self._dense = None
        else:
            d = np.array(dense, dtype=complex)
            if d.ndim != 2 or d.shape[0] != d.shape[1]:
                raise CircuitFormatError(f"dense generator must be square, got {d.shape}")
            if not is_hermitian(d, 1e-12):
                raise NonHermitian("dense generator is not Hermitian")
            self.terms = None
            self._dense = d
        self._lock = threading.Lock()

    @classmethod
    def from_pauli(cls, spec: Iterable[tuple[float, str]]) -> "Generator":
        return cls([PauliTerm(float(c), w) for c, w in spec])

    @property
    def dim(self) -> int:
        if self.terms is not None:
            return 1 << len(self.terms[0].word)
        return self._dense.shape[0]

    @property
    def n_qubits(self) -> int:
        return int(self.dim).bit_length() - 1

    @cached_property
    def is_commuting_sum(self) -> bool:
        if self.terms is None:
            return False
        ws = [t.word for t in self.terms]
        return all(words_commute(a, b) for i, a in enumerate(ws) for b in ws[i + 1:])

    def matrix(self) -> np.ndarray:
        """Dense matrix, built on first use and cached."""
        if self._dense is None:
            with self._lock:
                if self._dense is None:
                    d = np.zeros((self.dim, self.dim), dtype=complex)
                    for t in self.terms:
                        d += t.coeff * word_matrix(t.word)
                    self._dense = d
        return self._dense

    @cached_property
    def eig(self):
        return hermitian_eig(self.matrix())

    @cached_property
    def _actions(self) -> list[tuple[float, _WordAction | None]]:
        out = []
        for t in self.terms:
            if set(t.word) == {"I"}:
                out.append((t.coeff, None))
            else:
                out.append((t.coeff, _word_action(t.word)))
        return out

    def eigenvalues(self) -> np.ndarray:
        """Sorted eigenvalues; uses a diagonal shortcut for suitable Pauli sums."""
        diag = self._diagonal_in_product_basis()
        if diag is not None:
            return np.sort(diag)
        return np.array(self.eig.eigenvalues)

    def _diagonal_in_product_basis(self) -> np.ndarray | None:
        # Commuting words that use one letter type per qubit are simultaneously
        # diagonal in a product basis; read off the spectrum from Z-substitutes.
        if self.terms is None:
            return None
        n = len(self.terms[0].word)
        letters = [set() for _ in range(n)]
        for t in self.terms:
            for q, ch in enumerate(t.word):
                if ch != "I":
                    letters[q].add(ch)
        if any(len(s) > 1 for s in letters):
            return None
        diag = np.zeros(1 << n)
        for t in self.terms:
            zword = "".join("I" if ch == "I" else "Z" for ch in t.word)
            diag += t.coeff * _word_action(zword).signs
        return diag

    def apply_exp(self, theta: float, state: np.ndarray) -> np.ndarray:
        """Return exp(i*theta*G) @ state."""
        if self.terms is not None and self.is_commuting_sum:
            out = state
            for coeff, act in self._actions:
                ang = theta * coeff
                if act is None:
                    out = np.exp(1j * ang) * out
                else:
                    out = np.cos(ang) * out + 1j * np.sin(ang) * act.apply(out)
            return out
        dec = self.eig
        v = dec.eigenvectors
        return v @ (np.exp(1j * theta * dec.eigenvalues) * (v.conj().T @ state))

    def apply(self, state: np.ndarray) -> np.ndarray:
        """Return G @ state."""
        if self.terms is not None:
            out = np.zeros_like(state)
            for coeff, act in self._actions:
                out = out + coeff * (state if act is None else act.apply(state))
            return out
        return self._dense @ state

    def to_json(self):
        if self.terms is not None:
            return [{"coeff": t.coeff, "word": t.word} for t in self.terms]
        return {"dense": {"re": self._dense.real.tolist(), "im": self._dense.imag.tolist()}}

    def __repr__(self) -> str:
        if self.terms is not None:
            return "Generator(" + " + ".join(f"{t.coeff}*{t.word}" for t in self.terms) + ")"
        return f"Generator(dense {self.dim}x{self.dim})"


class Observable(Generator):
    """Measured Hermitian operator."""

    def expval(self, state: np.ndarray) -> float:
        val = np.vdot(state, self.apply(state))
        return float(val.real)


@dataclass
class ParamGate:
    param: int
    prefactor: float
    generator: Generator
    f_term: Generator | None = None

    def __post_init__(self):
        if self.prefactor == 0 or not np.isfinite(self.prefactor):
            raise CircuitFormatError("prefactor must be finite and nonzero")
        if self.param < 0:
            raise CircuitFormatError("param index must be non-negative")

    @property
    def stochastic(self) -> bool:
        return self.f_term is not None

    def exponent(self, x: float) -> np.ndarray:
        """Dense Hermitian exponent prefactor*x*G (+ F)."""
        h = self.prefactor * x * self.generator.matrix()
        if self.f_term is not None:
            h = h + self.f_term.matrix()
        return h

    def apply(self, x: float, state: np.ndarray) -> np.ndarray:
        if self.f_term is None:
            return self.generator.apply_exp(self.prefactor * x, state)
        dec = hermitian_eig(self.exponent(x))
        v = dec.eigenvectors
        return v @ (np.exp(1j * dec.eigenvalues) * (v.conj().T @ state))


@dataclass
class FixedGate:
    matrix: np.ndarray
    qubits: tuple[int, ...]
    name: str | None = None

    def __post_init__(self):
        self.matrix = np.asarray(self.matrix, dtype=complex)
        self.qubits = tuple(int(q) for q in self.qubits)
        k = len(self.qubits)
        if self.matrix.shape != (1 << k, 1 << k):
            raise CircuitFormatError(
                f"fixed gate matrix of shape {self.matrix.shape} does not match {k} qubit(s)")
        if len(set(self.qubits)) != k:
            raise CircuitFormatError("fixed gate acts on repeated qubits")
        if not np.allclose(self.matrix.conj().T @ self.matrix, np.eye(1 << k), atol=1e-10):
            raise CircuitFormatError("fixed gate matrix is not unitary")

    @classmethod
    def named(cls, name: str, *qubits: int) -> "FixedGate":
        key = name.upper()
        if key not in NAMED_GATES:
            raise CircuitFormatError(f"unknown fixed gate name {name!r}")
        return cls(NAMED_GATES[key], tuple(qubits), key)

    def apply(self, state: np.ndarray, n_qubits: int) -> np.ndarray:
        return apply_local(state, self.matrix, self.qubits, n_qubits)


def apply_local(state: np.ndarray, mat: np.ndarray, qubits: Sequence[int], n: int) -> np.ndarray:
    k = len(qubits)
    if k == n and tuple(qubits) == tuple(range(n)):
        return mat @ state
    psi = state.reshape((2,) * n)
    gate = mat.reshape((2,) * (2 * k))
    psi = np.tensordot(gate, psi, axes=(list(range(k, 2 * k)), list(qubits)))
    psi = np.moveaxis(psi, list(range(k)), list(qubits))
    return psi.reshape(-1)


Gate = ParamGate | FixedGate


@dataclass
class Circuit:
    """Ordered gate list acting on ``n_qubits`` qubits initialised to |0...0>."""

    n_qubits: int
    gates: list = field(default_factory=list)
    n_params: int | None = None

    def __post_init__(self):
        if self.n_qubits < 1:
            raise CircuitFormatError("n_qubits must be positive")
        used = [g.param for g in self.gates if isinstance(g, ParamGate)]
        top = max(used) + 1 if used else 0
        if self.n_params is None:
            self.n_params = top
        elif top > self.n_params:
            raise CircuitFormatError("a gate references a parameter beyond n_params")
        dim = 1 << self.n_qubits
        for i, g in enumerate(self.gates):
            if isinstance(g, ParamGate):
                ops = [g.generator] + ([g.f_term] if g.f_term is not None else [])
                if any(op.dim != dim for op in ops):
                    raise DimensionMismatch(f"gate {i} does not act on {self.n_qubits} qubits")
            elif isinstance(g, FixedGate):
                if any(q < 0 or q >= self.n_qubits for q in g.qubits):
                    raise DimensionMismatch(f"gate {i} targets a qubit outside the register")
            else:
                raise CircuitFormatError(f"gate {i} has unknown type {type(g).__name__}")

    @property
    def dim(self) -> int:
        return 1 << self.n_qubits

    def gates_for(self, k: int) -> list[int]:
        return [i for i, g in enumerate(self.gates) if isinstance(g, ParamGate) and g.param == k]

    def check_params(self, params) -> np.ndarray:
        p = np.asarray(params, dtype=float).reshape(-1)
        if p.shape[0] != self.n_params:
            raise DimensionMismatch(f"expected {self.n_params} parameters, got {p.shape[0]}")
        return p

    def run(self, params, start: int = 0, stop: int | None = None,
            state: np.ndarray | None = None, replace: dict | None = None) -> np.ndarray:
        """Apply gates ``start:stop``; ``replace`` maps gate index -> full unitary."""
        p = self.check_params(params)
        if state is None:
            state = np.zeros(self.dim, dtype=complex)
            state[0] = 1.0
        stop = len(self.gates) if stop is None else stop
        for i in range(start, stop):
            g = self.gates[i]
            if replace and i in replace:
                state = replace[i] @ state
            elif isinstance(g, ParamGate):
                state = g.apply(p[g.param], state)
            else:
                state = g.apply(state, self.n_qubits)
        return state

    # --- serialisation ---

    def to_dict(self, observable: Observable | None = None) -> dict:
        gates = []
        for g in self.gates:
            if isinstance(g, ParamGate):
                d = {"type": "param", "param": g.param, "prefactor": g.prefactor,
                     "generator": g.generator.to_json()}
                if g.f_term is not None:
                    d["f_term"] = g.f_term.to_json()
            else:
                d = {"type": "fixed", "qubits": list(g.qubits)}
                if g.name is not None:
                    d["name"] = g.name
                else:
                    d["matrix"] = {"re": g.matrix.real.tolist(), "im": g.matrix.imag.tolist()}
            gates.append(d)
        out = {"n_qubits": self.n_qubits, "n_params": self.n_params, "gates": gates}
        if observable is not None:
            out["observable"] = observable.to_json()
        return out


# --- file format ---

def _require(d: dict, key: str, where: str):
    if not isinstance(d, dict) or key not in d:
        raise CircuitFormatError(f"missing field '{where}{key}'")
    return d[key]


def _parse_operator(spec, where: str, cls=Generator):
    try:
        if isinstance(spec, dict) and "dense" in spec:
            dense = spec["dense"]
            mat = np.array(dense["re"], dtype=float) + 1j * np.array(dense["im"], dtype=float)
            return cls(dense=mat)
        if not isinstance(spec, list):
            raise CircuitFormatError(f"field '{where}' must be a list of Pauli terms")
        terms = []
        for j, t in enumerate(spec):
            c = _require(t, "coeff", f"{where}[{j}].")
            w = _require(t, "word", f"{where}[{j}].")
            if not isinstance(w, str) or isinstance(c, bool) or not isinstance(c, (int, float)):
                raise CircuitFormatError(f"bad term in field '{where}[{j}]'")
            terms.append(PauliTerm(float(c), w))
        return cls(terms)
    except CircuitFormatError as exc:
        if where in str(exc):
            raise
        raise CircuitFormatError(f"field '{where}': {exc}") from None
    except (KeyError, TypeError, ValueError) as exc:
        raise CircuitFormatError(f"field '{where}': {exc}") from None


def circuit_from_dict(d: dict) -> tuple[Circuit, Observable | None]:
    n = _require(d, "n_qubits", "")
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise CircuitFormatError("field 'n_qubits' must be a positive integer")
    raw = _require(d, "gates", "")
    if not isinstance(raw, list):
        raise CircuitFormatError("field 'gates' must be a list")
    gates = []
    for i, g in enumerate(raw):
        kind = _require(g, "type", f"gates[{i}].")
        if kind == "param":
            k = _require(g, "param", f"gates[{i}].")
            if not isinstance(k, int) or isinstance(k, bool) or k < 0:
                raise CircuitFormatError(f"field 'gates[{i}].param' must be a non-negative integer")
            pref = g.get("prefactor", 1.0)
            if isinstance(pref, bool) or not isinstance(pref, (int, float)):
                raise CircuitFormatError(f"field 'gates[{i}].prefactor' must be a number")
            gen = _parse_operator(_require(g, "generator", f"gates[{i}]."), f"gates[{i}].generator")
            f = g.get("f_term")
            fterm = None if f is None else _parse_operator(f, f"gates[{i}].f_term")
            try:
                gates.append(ParamGate(k, float(pref), gen, fterm))
            except CircuitFormatError as exc:
                raise CircuitFormatError(f"field 'gates[{i}]': {exc}") from None
        elif kind == "fixed":
            qubits = g.get("qubits")
            try:
                if "name" in g:
                    if qubits is None:
                        raise CircuitFormatError("missing qubits")
                    gates.append(FixedGate.named(g["name"], *qubits))
                elif "matrix" in g:
                    m = g["matrix"]
                    mat = np.array(m["re"], dtype=float) + 1j * np.array(m["im"], dtype=float)
                    if qubits is None:
                        qubits = list(range(n))
                    gates.append(FixedGate(mat, tuple(qubits)))
                else:
                    raise CircuitFormatError("needs 'name' or 'matrix'")
            except (CircuitFormatError, KeyError, TypeError, ValueError) as exc:
                raise CircuitFormatError(f"field 'gates[{i}]': {exc}") from None
        else:
            raise CircuitFormatError(f"field 'gates[{i}].type' must be 'param' or 'fixed'")
    n_params = d.get("n_params")
    try:
        circ = Circuit(n, gates, n_params)
    except DimensionMismatch as exc:
        raise CircuitFormatError(str(exc)) from None
    obs = None
    if "observable" in d:
        obs = _parse_operator(d["observable"], "observable", Observable)
        if obs.dim != circ.dim:
            raise CircuitFormatError("field 'observable' has the wrong number of qubits")
    return circ, obs


def load_circuit(path) -> tuple[Circuit, Observable | None]:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CircuitFormatError(f"invalid JSON in {path}: {exc}") from None
    return circuit_from_dict(data)


def dump_circuit(circ: Circuit, obs: Observable | None = None) -> str:
    return json.dumps(circ.to_dict(obs), indent=1)


# --- evaluation ---

def simulate(c: Circuit, params) -> np.ndarray:
    """Statevector after running the circuit on |0...0>."""
    return c.run(params)


def expectation(c: Circuit, params, obs: Observable) -> float:
    return obs.expval(c.run(params))


def overlap_sq(c: Circuit, params_a, params_b) -> float:
    """|<psi(a)|psi(b)>|^2."""
    a = c.run(params_a)
    b = c.run(params_b)
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


class UnivariateEvaluator:
    """x -> f(base + x * direction), counting every call."""

    def __init__(self, fn: Callable[[np.ndarray], float], base, direction):
        self._fn = fn
        self.base = np.asarray(base, dtype=float)
        self.direction = np.asarray(direction, dtype=float)
        self._lock = threading.Lock()
        self.calls = 0

    def __call__(self, x: float) -> float:
        with self._lock:
            self.calls += 1
        return self._fn(self.base + x * self.direction)


def restrict(c: Circuit, params, k: int, obs: Observable) -> UnivariateEvaluator:
    """Univariate restriction of the cost to parameter ``k`` around ``params``."""
    p = c.check_params(params)
    if not 0 <= k < c.n_params:
        raise IndexOutOfRange(f"parameter index {k} outside 0..{c.n_params - 1}")
    v = np.zeros(c.n_params)
    v[k] = 1.0
    return UnivariateEvaluator(lambda x: expectation(c, x, obs), p, v)


class CachedCost:
    """Memoising multivariate cost; ``evaluations`` counts distinct points.

    Points are keyed by their exact float64 bytes, so only bit-identical
    parameter vectors share an evaluation.
    """

    def __init__(self, fn: Callable[[np.ndarray], float]):
        self._fn = fn
        self._cache: dict[bytes, float] = {}
        self._lock = threading.Lock()

    def __call__(self, x) -> float:
        x = np.asarray(x, dtype=float) + 0.0  # folds -0.0 into 0.0
        key = x.tobytes()
        val = self._cache.get(key)
        if val is None:
            val = float(self._fn(x))
            with self._lock:
                self._cache.setdefault(key, val)
        return val

    @property
    def evaluations(self) -> int:
        return len(self._cache)

    def points(self) -> list[np.ndarray]:
        return [np.frombuffer(k) for k in self._cache]


def cost_function(c: Circuit, obs: Observable) -> Callable[[np.ndarray], float]:
    return lambda x: expectation(c, x, obs)
