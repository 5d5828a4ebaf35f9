"""MaxCut graphs, QAOA circuits, analytic frequency bounds and evaluation counts."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .circuit import Circuit, FixedGate, Generator, Observable, ParamGate, PauliTerm
from .errors import EmptyGraph, InputError, InvalidGraph
from .spectrum import Spectrum, equidistant_spectrum, positive_differences, spectrum_from_frequencies

GRAPH_KINDS = ("general", "complete", "k_regular", "random_edges")


@dataclass(frozen=True)
class Graph:
    """Unweighted simple graph on vertices 0..N-1.

    ``degree`` is required for (and only meaningful with) ``kind="k_regular"``.
    """

    n_vertices: int
    edges: tuple[tuple[int, int], ...]
    kind: str = "general"
    degree: int | None = None

    def __post_init__(self):
        if self.n_vertices < 1:
            raise InvalidGraph("a graph needs at least one vertex")
        if self.kind not in GRAPH_KINDS:
            raise InvalidGraph(f"unknown graph kind {self.kind!r}")
        clean = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if a == b:
                raise InvalidGraph(f"self-loop at vertex {a}")
            if not (0 <= a < self.n_vertices and 0 <= b < self.n_vertices):
                raise InvalidGraph(f"edge ({a}, {b}) has an endpoint outside 0..{self.n_vertices - 1}")
            clean.add((min(a, b), max(a, b)))
        object.__setattr__(self, "edges", tuple(sorted(clean)))
        if self.kind == "k_regular":
            K = self.degree
            if K is None or (self.n_vertices * K) % 2:
                raise InvalidGraph("k_regular graphs need a degree K with N*K even")
            if np.any(self.degrees() != K):
                raise InvalidGraph(f"not every vertex has degree {K}")
        if self.kind == "complete" and self.n_edges != self.n_vertices * (self.n_vertices - 1) // 2:
            raise InvalidGraph("graph declared complete is missing edges")

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_vertices, dtype=int)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def classify(self) -> tuple[str, int | None]:
        """Most specific structure: complete, K-regular or general."""
        N = self.n_vertices
        if N > 1 and self.n_edges == N * (N - 1) // 2:
            return "complete", N - 1
        deg = self.degrees()
        if self.n_edges and np.all(deg == deg[0]):
            return "k_regular", int(deg[0])
        return "general", None

    # --- constructors ---

    @classmethod
    def complete(cls, n: int) -> "Graph":
        return cls(n, tuple((a, b) for a in range(n) for b in range(a + 1, n)), "complete")

    @classmethod
    def cycle(cls, n: int) -> "Graph":
        if n < 3:
            raise InvalidGraph("a cycle needs at least 3 vertices")
        return cls(n, tuple((i, (i + 1) % n) for i in range(n)), "k_regular", 2)

    @classmethod
    def random_regular(cls, n: int, degree: int, seed: int) -> "Graph":
        import networkx as nx

        if degree >= n or (n * degree) % 2:
            raise InvalidGraph(f"no {degree}-regular graph on {n} vertices")
        g = nx.random_regular_graph(degree, n, seed=seed)
        return cls(n, tuple(g.edges()), "k_regular", degree)

    @classmethod
    def random_edges(cls, n: int, m: int, seed: int) -> "Graph":
        """M distinct edges drawn uniformly; duplicates are resampled."""
        if m > n * (n - 1) // 2:
            raise InvalidGraph(f"at most {n * (n - 1) // 2} edges fit on {n} vertices")
        rng = np.random.default_rng(seed)
        edges: set[tuple[int, int]] = set()
        while len(edges) < m:
            a, b = rng.choice(n, size=2, replace=False)
            edges.add((int(min(a, b)), int(max(a, b))))
        return cls(n, tuple(edges), "random_edges")

    # --- edge list files ---

    def to_edge_list(self) -> str:
        return "\n".join([str(self.n_vertices)] + [f"{a} {b}" for a, b in self.edges]) + "\n"

    @classmethod
    def from_edge_list(cls, text: str, kind: str | None = None) -> "Graph":
        lines = [ln.split("#")[0].strip() for ln in text.splitlines()]
        lines = [ln for ln in lines if ln]
        if not lines:
            raise InvalidGraph("empty graph file")
        try:
            n = int(lines[0])
            edges = [tuple(int(t) for t in ln.split()) for ln in lines[1:]]
        except ValueError as exc:
            raise InvalidGraph(f"malformed graph file: {exc}") from None
        for i, e in enumerate(edges):
            if len(e) != 2:
                raise InvalidGraph(f"line {i + 2}: expected 'a b'")
        g = cls(n, tuple(edges))
        if kind is None:
            kind, deg = g.classify()
            return cls(n, g.edges, kind, deg if kind == "k_regular" else None)
        return cls(n, g.edges, kind, g.classify()[1] if kind == "k_regular" else None)


def load_graph(path) -> Graph:
    return Graph.from_edge_list(Path(path).read_text())


# --- Hamiltonians and circuits ---

def _zz(n: int, a: int, b: int) -> str:
    w = ["I"] * n
    w[a] = w[b] = "Z"
    return "".join(w)


def maxcut_terms(g: Graph) -> list[PauliTerm]:
    """sum over edges of (I - Z_a Z_b)/2 as Pauli terms."""
    if g.n_edges == 0:
        raise EmptyGraph("MaxCut needs at least one edge")
    n = g.n_vertices
    return [PauliTerm(0.5 * g.n_edges, "I" * n)] + [PauliTerm(-0.5, _zz(n, a, b)) for a, b in g.edges]


def maxcut_hamiltonian(g: Graph) -> Observable:
    return Observable(maxcut_terms(g))


def mixer_generator(n: int) -> Generator:
    return Generator([PauliTerm(1.0, "I" * k + "X" + "I" * (n - k - 1)) for k in range(n)])


def qaoa_circuit(g: Graph, p: int, decompose: bool = False) -> Circuit:
    """Hadamard layer followed by p blocks exp(-i x H_M) exp(-i x H_P).

    Parameter 2j drives the j-th problem layer and 2j+1 the j-th mixer. With
    ``decompose=True`` every layer is built from one gate per Pauli word.
    """
    if p < 1:
        raise InputError("QAOA needs at least one layer")
    n = g.n_vertices
    gates: list = [FixedGate.named("H", q) for q in range(n)]
    terms = maxcut_terms(g)
    mixer = mixer_generator(n)
    for j in range(p):
        if decompose:
            gates += [ParamGate(2 * j, -1.0, Generator([t])) for t in terms[1:]]
            gates += [ParamGate(2 * j + 1, -1.0, Generator([t])) for t in mixer.terms]
        else:
            gates.append(ParamGate(2 * j, -1.0, Generator(terms)))
            gates.append(ParamGate(2 * j + 1, -1.0, mixer))
    return Circuit(n, gates, 2 * p)


# --- exact cut values ---

def cut_values(g: Graph) -> np.ndarray:
    """Cut size of every bit string (qubit 0 = most significant bit).

    This is the diagonal of the MaxCut Hamiltonian.
    """
    n = g.n_vertices
    if n > 24:
        raise InputError("exhaustive enumeration is limited to 24 vertices")
    b = np.arange(1 << n, dtype=np.int64)
    cuts = np.zeros(1 << n, dtype=np.int64)
    for a, c in g.edges:
        cuts += ((b >> (n - 1 - a)) ^ (b >> (n - 1 - c))) & 1
    return cuts


def maxcut_value(g: Graph) -> int:
    return int(cut_values(g).max())


def true_problem_spectrum(g: Graph) -> Spectrum:
    """Exact frequencies of the problem layer (differences of distinct cut sizes)."""
    vals = np.unique(cut_values(g)).astype(float)
    return spectrum_from_frequencies(positive_differences(vals), vals)


# --- bounds and counts ---

@dataclass(frozen=True)
class FrequencyBound:
    phi: int
    even: bool
    kind: str

    @property
    def r_max(self) -> int:
        return self.phi // 2 if self.even else self.phi


def frequency_bound(g: Graph) -> FrequencyBound:
    kind, deg = g.classify() if g.kind in ("general", "random_edges") else (g.kind, g.degree)
    N, M = g.n_vertices, g.n_edges
    if kind == "complete":
        return FrequencyBound(N * N // 4, False, "complete")
    if kind == "k_regular":
        if deg % 2 == 0:
            return FrequencyBound(deg // 2 * N, True, "k_regular")
        return FrequencyBound(deg * N // 2, False, "k_regular")
    return FrequencyBound(M, False, "general")


def analytic_bound(g: Graph) -> int:
    """Upper bound phi on the MaxCut value from the graph structure."""
    return frequency_bound(g).phi


def bound_spectra(g: Graph, n_params: int) -> list[Spectrum]:
    """Spectra implied by the analytic bound, alternating problem and mixer."""
    b = frequency_bound(g)
    problem = equidistant_spectrum(b.r_max, 2.0) if b.even else equidistant_spectrum(b.phi, 1.0)
    mixer = equidistant_spectrum(g.n_vertices, 2.0)
    return [problem if k % 2 == 0 else mixer for k in range(n_params)]


def qaoa_eval_counts(g: Graph, n: int, quantity: str, strategy: str) -> int:
    """Distinct circuits for the gradient (or gradient and Hessian) of QAOA.

    ``strategy`` is ``decomposition`` or ``gen_shift``; the Hessian counts use
    the exact closed forms behind the asymptotic table entries.
    """
    from .resources import ResourceQuery, neval

    if n < 2 or n % 2:
        raise InputError("QAOA parameter counts are even and positive")
    if quantity not in ("grad", "grad_and_hessian"):
        raise InputError(f"unknown quantity {quantity!r}")
    if strategy == "decomposition":
        sizes = [g.n_edges if k % 2 == 0 else g.n_vertices for k in range(n)]
        return neval(ResourceQuery(P_vec=sizes), quantity, "decomposition")
    if strategy == "gen_shift":
        b = frequency_bound(g)
        sizes = [b.r_max if k % 2 == 0 else g.n_vertices for k in range(n)]
        return neval(ResourceQuery(R_vec=sizes), quantity, "gen_equidistant")
    raise InputError(f"unknown strategy {strategy!r}")
