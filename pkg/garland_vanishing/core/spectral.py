"""
Vertex links of 2-complexes as weighted graphs, their spectral gaps and
the per-link vanishing criterion C < √2 / κ₂.
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import networkx as nx
import numpy as np
import scipy.linalg
import scipy.optimize

from .complex_core import LinkComplex, Simplex, SimplicialComplex, link
from .constants import (
    BOUNDARY_TOL,
    EIGEN_RESIDUAL_TOL,
    EIGEN_ZERO_TOL,
    MAX_BRUTEFORCE_VERTICES,
    VERDICT_FAIL,
    VERDICT_HYPOTHESIS_FAILED,
    VERDICT_PASS,
)
from .errors import (
    DisconnectedLink,
    EmptyLink,
    IsolatedVertex,
    SpectralError,
    SpectralResidual,
    TooLarge,
)
from .group_action import Group, orbit_data
from .representations import Representation

logger = logging.getLogger(__name__)

VectorNorm = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True, eq=False)
class LinkGraph:
    """
    Weighted graph with vertex weights ω(v) and edge weights ω(e).

    On the link of a vertex τ the weights are the localized ones,
    ω_τ(v) = ω(τ,v) and ω_τ(e) = ω(τ*e).
    """

    vertices: tuple[int, ...]
    vertex_weights: np.ndarray
    edges: tuple[tuple[int, int], ...]
    edge_weights: np.ndarray
    labels: tuple[str, ...] = ()
    base: Simplex = ()
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_link(cls, lk: LinkComplex) -> "LinkGraph":
        cx = lk.complex
        if cx.dimension > 1:
            raise SpectralError(f"link of dimension {cx.dimension} is not a graph")
        vertices = tuple(s[0] for s in cx.simplexes(0))
        edges = cx.simplexes(1)
        return cls(
            vertices=vertices,
            vertex_weights=np.array([cx.weight((v,)) for v in vertices], dtype=float),
            edges=tuple(edges),
            edge_weights=np.array([cx.weight(e) for e in edges], dtype=float),
            labels=tuple(cx.labels[v] for v in vertices),
            base=lk.base,
        )

    @classmethod
    def from_edges(
        cls,
        edges: Sequence[tuple[int, int]],
        weights: Sequence[float] | None = None,
        vertex_count: int | None = None,
    ) -> "LinkGraph":
        """Graph on 0..m−1 with coherent vertex weights ω(v) = Σ_{e∋v} ω(e)."""
        edges = tuple(tuple(sorted(e)) for e in edges)
        w = np.ones(len(edges)) if weights is None else np.asarray(weights, dtype=float)
        if vertex_count is None:
            vertex_count = 1 + max((v for e in edges for v in e), default=-1)
        vertex_weights = np.zeros(vertex_count)
        for (u, v), we in zip(edges, w):
            vertex_weights[u] += we
            vertex_weights[v] += we
        return cls(
            vertices=tuple(range(vertex_count)),
            vertex_weights=vertex_weights,
            edges=edges,
            edge_weights=w,
            labels=tuple(str(v) for v in range(vertex_count)),
        )

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def position(self) -> dict[int, int]:
        if "position" not in self._cache:
            self._cache["position"] = {v: i for i, v in enumerate(self.vertices)}
        return self._cache["position"]

    @property
    def graph(self) -> nx.Graph:
        if "graph" not in self._cache:
            g = nx.Graph()
            g.add_nodes_from(self.vertices)
            for (u, v), w in zip(self.edges, self.edge_weights):
                g.add_edge(u, v, weight=float(w))
            self._cache["graph"] = g
        return self._cache["graph"]

    @property
    def is_connected(self) -> bool:
        return self.size > 0 and nx.is_connected(self.graph)

    @property
    def component_count(self) -> int:
        return nx.number_connected_components(self.graph)

    def adjacency(self) -> np.ndarray:
        pos = self.position
        a = np.zeros((self.size, self.size))
        for (u, v), w in zip(self.edges, self.edge_weights):
            a[pos[u], pos[v]] += w
            a[pos[v], pos[u]] += w
        return a

    def coherence_residual(self) -> float:
        """max_v |ω(v) − Σ_{e∋v} ω(e)|."""
        return float(np.abs(self.vertex_weights - self.adjacency().sum(axis=1)).max(initial=0.0))

    def weighted_mean(self, f: np.ndarray) -> np.ndarray:
        return self.vertex_weights @ f / self.vertex_weights.sum()


def link_graph(complex_: SimplicialComplex, vertex: int) -> LinkGraph:
    return LinkGraph.from_link(link(complex_, (vertex,)))


# --------------------------------------------------------------
# Laplacian and spectral gap
# --------------------------------------------------------------
def link_laplacian(graph: LinkGraph) -> np.ndarray:
    """Symmetrized I − D^{-1/2} A D^{-1/2}, similar to Δ₊ = I − D⁻¹A."""
    if graph.size == 0:
        raise EmptyLink("link has no vertices")
    if (graph.vertex_weights <= 0).any():
        raise IsolatedVertex("link vertex with zero weight")
    scale = 1.0 / np.sqrt(graph.vertex_weights)
    return np.eye(graph.size) - scale[:, None] * graph.adjacency() * scale[None, :]


def laplacian_spectrum(graph: LinkGraph) -> tuple[np.ndarray, np.ndarray]:
    """Ascending eigenvalues and eigenvectors of the symmetrized Laplacian."""
    lap = link_laplacian(graph)
    evals, evecs = scipy.linalg.eigh(lap)
    residual = np.abs(lap @ evecs - evecs * evals).max(initial=0.0)
    if residual > EIGEN_RESIDUAL_TOL * max(1.0, float(np.abs(lap).max())):
        raise SpectralResidual(f"eigensolver residual {residual:.3e}")
    return evals, evecs


def lambda1(graph: LinkGraph, zero_tol: float = EIGEN_ZERO_TOL) -> float:
    """Smallest positive eigenvalue of Δ₊ on a connected link."""
    evals, _ = laplacian_spectrum(graph)
    zeros = int(np.sum(evals <= zero_tol))
    if zeros > 1 or not graph.is_connected:
        raise DisconnectedLink(
            f"{graph.component_count} components, zero eigenvalue multiplicity {zeros}"
        )
    positive = evals[evals > zero_tol]
    if positive.size == 0:
        raise EmptyLink("link has no positive eigenvalue")
    return float(positive[0])


def kappa2(graph: LinkGraph, zero_tol: float = EIGEN_ZERO_TOL) -> float:
    return lambda1(graph, zero_tol) ** -0.5


# --------------------------------------------------------------
# Poincaré inequality
# --------------------------------------------------------------
def _row_norms(values: np.ndarray, norm: VectorNorm | None) -> np.ndarray:
    return np.linalg.norm(values, axis=-1) if norm is None else np.asarray(norm(values))


def poincare_ratio(
    graph: LinkGraph,
    f: np.ndarray,
    p: float = 2.0,
    norm: VectorNorm | None = None,
) -> float:
    """
    ‖f − Mf‖_(0,p) / ‖d f‖_(1,p) for a vertex function ``f`` of shape (m,) or (m, d).

    Returns 0 when both sides vanish.
    """
    f = np.asarray(f, dtype=float)
    if f.ndim == 1:
        f = f[:, None]
    pos = graph.position
    centered = f - graph.weighted_mean(f)
    num = np.sum(_row_norms(centered, norm) ** p * graph.vertex_weights)
    if graph.edges:
        u = [pos[a] for a, _ in graph.edges]
        v = [pos[b] for _, b in graph.edges]
        den = np.sum(_row_norms(f[u] - f[v], norm) ** p * graph.edge_weights)
    else:
        den = 0.0
    if den <= 1e-300:
        if num <= 1e-300:
            return 0.0
        raise DisconnectedLink("non-constant function with vanishing differential")
    return float((num / den) ** (1.0 / p))


def poincare_witness(graph: LinkGraph) -> tuple[np.ndarray, float]:
    """Eigenvector of λ₁ pulled back through D^{-1/2}; its ratio is exactly κ₂."""
    evals, evecs = laplacian_spectrum(graph)
    index = int(np.argmax(evals > EIGEN_ZERO_TOL))
    f = evecs[:, index] / np.sqrt(graph.vertex_weights)
    return f, poincare_ratio(graph, f)


def kappa_p_bruteforce(
    graph: LinkGraph,
    p: float = 2.0,
    resolution: int = 200,
    norm: VectorNorm | None = None,
    dim: int = 1,
    rng: np.random.Generator | None = None,
    polish: int = 5,
) -> float:
    """
    Estimate the optimal p-Poincaré constant by random search followed by
    local maximization of the ratio from the best starting points.

    Only meant as a cross-check on tiny links.
    """
    if graph.size > MAX_BRUTEFORCE_VERTICES:
        raise TooLarge(f"{graph.size} vertices, at most {MAX_BRUTEFORCE_VERTICES}")
    if graph.size < 2:
        raise EmptyLink("need at least two vertices")
    if not graph.is_connected:
        raise DisconnectedLink("Poincaré constant is infinite on a disconnected link")
    rng = rng if rng is not None else np.random.default_rng(0)
    shape = (graph.size, dim)

    def objective(x: np.ndarray) -> float:
        return -poincare_ratio(graph, x.reshape(shape), p, norm)

    starts = rng.standard_normal((resolution,) + shape)
    scored = sorted(starts, key=lambda s: objective(s.ravel()))
    best = -objective(scored[0].ravel())
    for start in scored[:polish]:
        result = scipy.optimize.minimize(
            objective,
            start.ravel(),
            method="Nelder-Mead",
            options={"xatol": 1e-10, "fatol": 1e-12, "maxiter": 20000},
        )
        best = max(best, -float(result.fun))
    logger.debug("brute-force κ_%s on %d vertices: %.6g", p, graph.size, best)
    return best


# --------------------------------------------------------------
# Criterion
# --------------------------------------------------------------
@dataclass
class LinkSpectrum:
    vertex: str
    orbit_size: int
    vertex_count: int
    edge_count: int
    connected: bool
    lambda1: float | None
    kappa2: float | None
    threshold: float | None
    eigenvalues: list[float]
    orbit_spread: float = 0.0

    def to_dict(self) -> dict:
        return {
            "vertex": self.vertex,
            "orbit_size": self.orbit_size,
            "vertex_count": self.vertex_count,
            "edge_count": self.edge_count,
            "connected": self.connected,
            "lambda1": self.lambda1,
            "kappa2": self.kappa2,
            "threshold": self.threshold,
            "eigenvalues": self.eigenvalues,
            "orbit_spread": self.orbit_spread,
        }


@dataclass
class SpectralReport:
    links: list[LinkSpectrum]
    bound: float
    kappa2_max: float | None
    threshold: float | None
    verdict: str
    notes: list[str] = field(default_factory=list)

    @property
    def slack(self) -> float | None:
        return None if self.threshold is None else self.threshold - self.bound

    @property
    def passed(self) -> bool:
        return self.verdict == VERDICT_PASS

    def to_dict(self) -> dict:
        return {
            "links": [lk.to_dict() for lk in self.links],
            "bound": self.bound,
            "kappa2_max": self.kappa2_max,
            "threshold": self.threshold,
            "slack": self.slack,
            "verdict": self.verdict,
            "notes": list(self.notes),
        }


def _link_spectrum(graph: LinkGraph, label: str, orbit_size: int, zero_tol: float):
    evals, _ = laplacian_spectrum(graph)
    connected = graph.is_connected and int(np.sum(evals <= zero_tol)) == 1
    lam = float(evals[evals > zero_tol][0]) if connected and graph.size > 1 else None
    kappa = lam**-0.5 if lam else None
    return LinkSpectrum(
        vertex=label,
        orbit_size=orbit_size,
        vertex_count=graph.size,
        edge_count=len(graph.edges),
        connected=connected and lam is not None,
        lambda1=lam,
        kappa2=kappa,
        threshold=math.sqrt(2) / kappa if kappa else None,
        eigenvalues=[float(x) for x in evals],
    )


def evaluate_criterion(
    complex_: SimplicialComplex,
    group: Group,
    representation: Representation,
    zero_tol: float = EIGEN_ZERO_TOL,
) -> SpectralReport:
    """
    Evaluate C < √2/κ₂ over all vertex links, one eigensolve per vertex orbit.

    The verdict is strict: a bound within BOUNDARY_TOL of the threshold fails.
    """
    bound = representation.bound
    notes: list[str] = []
    if complex_.dimension != 2:
        notes.append(f"criterion needs a 2-dimensional complex, got n={complex_.dimension}")
        return SpectralReport([], bound, None, None, VERDICT_HYPOTHESIS_FAILED, notes)

    orbits = orbit_data(complex_, group, 0)
    links = []
    for rep, members in zip(orbits.representatives, orbits.orbits):
        (v,) = rep
        spec = _link_spectrum(link_graph(complex_, v), complex_.labels[v], len(members), zero_tol)
        if spec.lambda1 is not None:
            for (w,) in members[1:]:
                other = link_graph(complex_, w)
                if other.is_connected:
                    spec.orbit_spread = max(
                        spec.orbit_spread, abs(lambda1(other, zero_tol) - spec.lambda1)
                    )
            if spec.orbit_spread > 1e-10:
                notes.append(
                    f"links in the orbit of {spec.vertex} differ by {spec.orbit_spread:.3e}"
                )
        logger.debug("link of %s: λ₁=%s, κ₂=%s", spec.vertex, spec.lambda1, spec.kappa2)
        links.append(spec)

    disconnected = [lk.vertex for lk in links if not lk.connected]
    if disconnected:
        notes.append(f"disconnected links at vertices {disconnected}")
        return SpectralReport(links, bound, None, None, VERDICT_HYPOTHESIS_FAILED, notes)

    kappa_max = max(lk.kappa2 for lk in links)
    threshold = math.sqrt(2) / kappa_max
    if bound < threshold - BOUNDARY_TOL:
        verdict = VERDICT_PASS
    else:
        verdict = VERDICT_FAIL
        if abs(bound - threshold) <= BOUNDARY_TOL:
            notes.append("boundary case: C equals √2/κ₂_max")
            logger.warning("boundary case C=%.12g threshold=%.12g", bound, threshold)
    return SpectralReport(links, bound, kappa_max, threshold, verdict, notes)
