from __future__ import annotations

import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.stats import unitary_group

sys.path.insert(0, str(Path(__file__).parent))

from shiftkit.circuit import Circuit, FixedGate, Generator, Observable, ParamGate  # noqa: E402

LETTERS = "XYZ"


def random_observable(n: int, rng, n_terms: int = 3) -> Observable:
    terms = []
    for _ in range(n_terms):
        w = "".join(rng.choice(list("IXYZ"), size=n))
        if set(w) == {"I"}:
            w = "Z" + w[1:]
        terms.append((float(rng.normal()), w))
    return Observable.from_pauli(terms)


def frequency_gate(n: int, k: int, R: int, rng) -> ParamGate:
    """Gate whose parameter has integer frequencies 1..R.

    Sum of R single-qubit Paulis (random letters) on distinct qubits, with
    coefficient 1/2 each, so eigenvalues are spaced by one.
    """
    qubits = rng.choice(n, size=R, replace=False)
    terms = []
    for q in qubits:
        w = ["I"] * n
        w[q] = rng.choice(list(LETTERS))
        terms.append((0.5, "".join(w)))
    return ParamGate(int(k), 1.0, Generator.from_pauli(terms))


def random_fixed_layer(n: int, rng) -> list[FixedGate]:
    gates = [FixedGate(unitary_group.rvs(2, random_state=rng), (q,)) for q in range(n)]
    for q in range(n - 1):
        gates.append(FixedGate.named("CNOT", q, q + 1))
    return gates


def random_circuit(rng, n_qubits=None, n_params=None, R=None):
    """Random circuit with one frequency gate per parameter and R_k in 1..3."""
    n = n_qubits or int(rng.integers(3, 5))
    p = n_params or int(rng.integers(2, 5))
    if R is None:
        R = [int(rng.integers(1, min(3, n) + 1)) for _ in range(p)]
    gates = random_fixed_layer(n, rng)
    for k in rng.permutation(p):
        gates.append(frequency_gate(n, k, R[k], rng))
        gates += random_fixed_layer(n, rng)
    return Circuit(n, gates, p), random_observable(n, rng), list(R)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
