"""Built-in invariant checks run by ``shiftkit selfcheck``."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuit import Circuit, FixedGate, Generator, Observable, ParamGate, cost_function
from .derivatives import gradient, hessian
from .reconstruction import full_nodes, kernel
from .resources import coeff_norm
from .rules import ShiftRule, first_order_rule, second_order_rule


@dataclass(frozen=True)
class Check:
    name: str
    tolerance: float
    error: float

    @property
    def ok(self) -> bool:
        return bool(np.isfinite(self.error)) and self.error <= self.tolerance


def fixture_circuit() -> tuple[Circuit, Observable, np.ndarray]:
    """Two qubits, three parameters with frequency counts 1, 2 and 1."""
    gates = [
        FixedGate.named("H", 1),
        ParamGate(0, 0.5, Generator.from_pauli([(1.0, "YI")])),
        FixedGate.named("H", 0),
        ParamGate(1, 0.5, Generator.from_pauli([(1.0, "ZI"), (1.0, "IZ")])),
        FixedGate.named("H", 1),
        FixedGate.named("CNOT", 0, 1),
        ParamGate(2, 0.5, Generator.from_pauli([(1.0, "YY")])),
        FixedGate.named("S", 1),
    ]
    obs = Observable.from_pauli([(1.0, "ZZ"), (0.4, "XI"), (-0.3, "IY")])
    return Circuit(2, gates, 3), obs, np.array([0.37, -1.1, 0.8])


def _fd_gradient(f, x, h=1e-5):
    eye = np.eye(x.size)
    return np.array([(f(x + h * e) - f(x - h * e)) / (2 * h) for e in eye])


def _fd_hessian(f, x, h=1e-3):
    n = x.size
    eye = np.eye(n) * h
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(n):
            out[i, j] = (f(x + eye[i] + eye[j]) - f(x + eye[i] - eye[j])
                         - f(x - eye[i] + eye[j]) + f(x - eye[i] - eye[j])) / (4 * h * h)
    return out


def _load_rules(path) -> list[tuple[int, ShiftRule, ShiftRule]]:
    data = json.loads(Path(path).read_text())
    return [(int(e["R"]), ShiftRule.from_dict(e["first"]), ShiftRule.from_dict(e["second"])) for e in data]


def run_selfcheck(rules_path=None) -> list[Check]:
    checks = []
    if rules_path is None:
        rules = [(R, first_order_rule(R), second_order_rule(R)) for R in range(1, 17)]
    else:
        rules = _load_rules(rules_path)
    err1 = max(abs(coeff_norm(r1) - R) for R, r1, _ in rules)
    err2 = max(abs(coeff_norm(r2) - R ** 2) for R, _, r2 in rules)
    checks.append(Check("norm_identity_first_order", 1e-11, err1))
    checks.append(Check("norm_identity_second_order", 1e-11, err2))

    cot = 0.0
    for R in range(1, 17):
        mu = np.arange(1, R + 1)
        cot = max(cot, abs(np.sum(1 / np.tan((2 * mu - 1) * np.pi / (4 * R)) ** 2) - (2 * R * R - R)))
    checks.append(Check("cotangent_sum_identity", 1e-9, cot))

    delta = 0.0
    for R in range(1, 9):
        nodes = full_nodes(R)
        for i, mu in enumerate(range(-R, R + 1)):
            vals = np.array([kernel("dirichlet", R, mu, x) for x in nodes])
            delta = max(delta, float(np.abs(vals - np.eye(nodes.size)[i]).max()))
    checks.append(Check("dirichlet_kernel_delta", 1e-12, delta))

    c, obs, x = fixture_circuit()
    f = cost_function(c, obs)
    g = gradient(c, x, obs).value
    checks.append(Check("fixture_gradient_vs_fd", 1e-6, float(np.abs(g - _fd_gradient(f, x)).max())))
    fd_h = _fd_hessian(f, x)
    for strategy in ("diagonal_rule", "second_diagonal", "repeated_rule"):
        h = hessian(c, x, obs, strategy).value
        checks.append(Check(f"fixture_hessian_{strategy}_vs_fd", 1e-4, float(np.abs(h - fd_h).max())))
    return checks
