"""
Finite weighted simplicial complexes.

Vertices are string ids mapped to dense integer indices at build time.
Unordered simplexes are sorted index tuples, ordered simplexes are
arbitrary index tuples. Link complexes keep the index space of their
ambient complex so group elements act on them unchanged.
"""

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import (
    DuplicateVertexInSimplex,
    IndexOutOfRange,
    JoinNotASimplex,
    LinkEmpty,
    MixedDimension,
    NotASimplex,
    NotDisjoint,
    NotPure,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

Simplex = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    dimension: int
    # global label table, shared with every link of this complex
    labels: tuple[str, ...]
    vertices: tuple[int, ...]
    top_simplexes: tuple[Simplex, ...]
    faces_by_dim: tuple[tuple[Simplex, ...], ...]
    weights: Mapping[Simplex, int]
    weights_overridden: bool = False
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def vertex_ids(self) -> tuple[str, ...]:
        return tuple(self.labels[v] for v in self.vertices)

    def index_of(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise NotASimplex(f"unknown vertex {label!r}") from None

    def simplex_from_labels(self, labels: Iterable[str]) -> Simplex:
        return tuple(self.index_of(lbl) for lbl in labels)

    def format_simplex(self, simplex: Simplex) -> str:
        return "(" + ",".join(self.labels[v] for v in simplex) + ")"

    def simplexes(self, k: int) -> tuple[Simplex, ...]:
        """Unordered k-simplexes X(k), sorted."""
        if k < 0 or k > self.dimension:
            return ()
        return self.faces_by_dim[k]

    def contains(self, simplex: Sequence[int]) -> bool:
        return tuple(sorted(simplex)) in self.weights and len(set(simplex)) == len(
            simplex
        )

    def weight(self, simplex: Sequence[int]) -> int:
        key = tuple(sorted(simplex))
        try:
            return self.weights[key]
        except KeyError:
            raise NotASimplex(f"{self.format_simplex(tuple(simplex))} is not a simplex") from None

    def iter_ordered(self, k: int) -> Iterator[Simplex]:
        """Generate Σ(k): every ordering of every member of X(k)."""
        for s in self.simplexes(k):
            for perm in itertools.permutations(range(k + 1)):
                yield tuple(s[i] for i in perm)

    def ordered(self, k: int) -> tuple[Simplex, ...]:
        key = ("ordered", k)
        if key not in self._cache:
            self._cache[key] = tuple(self.iter_ordered(k))
        return self._cache[key]

    def ordered_index(self, k: int) -> dict[Simplex, int]:
        key = ("ordered_index", k)
        if key not in self._cache:
            self._cache[key] = {s: i for i, s in enumerate(self.ordered(k))}
        return self._cache[key]

    def cofaces(self, simplex: Sequence[int]) -> tuple[Simplex, ...]:
        """Unordered simplexes of one degree higher containing ``simplex``."""
        key = ("cofaces", len(simplex) - 1)
        if key not in self._cache:
            table: dict[Simplex, list[Simplex]] = {}
            for s in self.simplexes(len(simplex)):
                for i in range(len(s)):
                    table.setdefault(s[:i] + s[i + 1 :], []).append(s)
            self._cache[key] = {k: tuple(v) for k, v in table.items()}
        return self._cache[key].get(tuple(sorted(simplex)), ())


@dataclass(frozen=True, eq=False)
class LinkComplex:
    base: Simplex
    complex: SimplicialComplex
    ambient: SimplicialComplex

    @property
    def degree(self) -> int:
        return len(self.base) - 1

    def localized_weight(self, simplex: Sequence[int]) -> int:
        return self.ambient.weight(tuple(self.base) + tuple(simplex))


def _assemble(
    labels: tuple[str, ...],
    tops: Iterable[Simplex],
    dimension: int,
    weight_overrides: Mapping[Simplex, int] | None = None,
) -> SimplicialComplex:
    top_set = sorted({tuple(sorted(t)) for t in tops})
    counts: Counter = Counter()
    for top in top_set:
        for size in range(1, dimension + 2):
            counts.update(itertools.combinations(top, size))
    faces = tuple(
        tuple(sorted(s for s in counts if len(s) == k + 1))
        for k in range(dimension + 1)
    )
    weights = dict(counts)
    overridden = False
    if weight_overrides:
        for simplex, value in weight_overrides.items():
            key = tuple(sorted(simplex))
            if key not in weights:
                raise NotASimplex(f"weight override for non-simplex {key}")
            weights[key] = int(value)
        overridden = True
    vertices = tuple(s[0] for s in faces[0]) if faces else ()
    return SimplicialComplex(
        dimension=dimension,
        labels=labels,
        vertices=vertices,
        top_simplexes=tuple(top_set),
        faces_by_dim=faces,
        weights=weights,
        weights_overridden=overridden,
    )


def build_complex(
    top_simplexes: Iterable[Iterable[str]],
    vertices: Sequence[str] | None = None,
    weight_overrides: Mapping[tuple[str, ...], int] | None = None,
) -> SimplicialComplex:
    """
    Build a pure complex from its top simplexes.

    Args:
        top_simplexes: vertex-id collections, all of size n+1 ≥ 2.
        vertices: optional declared vertex order; every declared vertex must be
            covered by a top simplex.
        weight_overrides: optional hand-set weights replacing the tabulated ω.

    Returns:
        SimplicialComplex with faces and weights tabulated.
    """
    tops = [list(t) for t in top_simplexes]
    if not tops:
        raise MixedDimension("at least one top simplex is required")
    sizes = {len(t) for t in tops}
    if len(sizes) != 1:
        raise MixedDimension(f"top simplexes of sizes {sorted(sizes)}")
    size = sizes.pop()
    if size < 2:
        raise MixedDimension("top simplexes must have at least two vertices")
    for t in tops:
        if len(set(t)) != len(t):
            raise DuplicateVertexInSimplex(f"repeated vertex in {t}")

    used = sorted({v for t in tops for v in t})
    if vertices is None:
        labels = tuple(used)
    else:
        labels = tuple(vertices)
        if len(set(labels)) != len(labels):
            raise DuplicateVertexInSimplex("vertex list contains duplicates")
        missing = [v for v in used if v not in set(labels)]
        if missing:
            raise UnknownVertex(f"undeclared vertices {missing}")
        isolated = [v for v in labels if v not in set(used)]
        if isolated:
            raise NotPure(f"vertices {isolated} lie in no top simplex")

    index = {v: i for i, v in enumerate(labels)}
    overrides = None
    if weight_overrides:
        unknown = sorted({v for s in weight_overrides for v in s if v not in index})
        if unknown:
            raise UnknownVertex(f"weight overrides name undeclared vertices {unknown}")
        overrides = {tuple(index[v] for v in s): w for s, w in weight_overrides.items()}
    complex_ = _assemble(
        labels,
        (tuple(index[v] for v in t) for t in tops),
        size - 1,
        overrides,
    )
    logger.debug(
        "built complex: n=%d, f-vector=%s",
        complex_.dimension,
        [len(f) for f in complex_.faces_by_dim],
    )
    return complex_


def face(simplex: Simplex, i: int) -> tuple[Simplex, int]:
    """Return the i-th face σ_i and its sign (−1)^i."""
    if not 0 <= i < len(simplex):
        raise IndexOutOfRange(f"face index {i} outside 0..{len(simplex) - 1}")
    return simplex[:i] + simplex[i + 1 :], (-1) ** i


def join(
    base: Simplex, other: Simplex, complex_: SimplicialComplex | None = None
) -> Simplex:
    """Juxtapose ``base`` and ``other`` (base first)."""
    if set(base) & set(other):
        raise NotDisjoint(f"{base} and {other} share vertices")
    joined = tuple(base) + tuple(other)
    if complex_ is not None and not complex_.contains(joined):
        raise JoinNotASimplex(f"{complex_.format_simplex(joined)} is not a simplex")
    return joined


def link(complex_: SimplicialComplex, base: Simplex) -> LinkComplex:
    if not complex_.contains(base):
        raise NotASimplex(f"{base} is not a simplex")
    degree = len(base) - 1
    if degree >= complex_.dimension:
        raise LinkEmpty(f"link of a top simplex {complex_.format_simplex(base)}")
    base_set = set(base)
    tops = [
        tuple(v for v in top if v not in base_set)
        for top in complex_.top_simplexes
        if base_set.issubset(top)
    ]
    if not tops:
        raise LinkEmpty(f"{complex_.format_simplex(base)} lies in no top simplex")
    inner = _assemble(complex_.labels, tops, complex_.dimension - degree - 1)
    if complex_.weights_overridden:
        # localized weights ω_τ(σ) = ω(τ*σ) follow the ambient overrides
        localized = {s: complex_.weight(tuple(base) + s) for s in inner.weights}
        inner = _assemble(complex_.labels, tops, inner.dimension, localized)
    return LinkComplex(base=tuple(base), complex=inner, ambient=complex_)


def weight_identity_residual(complex_: SimplicialComplex, k: int) -> int:
    """
    Largest |Σ_{σ⊃τ} ω(σ) − (n−k)(k+2)! ω(τ)| over τ ∈ Σ(k).

    The left-hand sum is invariant under reordering τ, and every coface
    contributes (k+2)! equal-weight orderings.
    """
    if not 0 <= k < complex_.dimension:
        raise IndexOutOfRange(f"k={k} outside 0..{complex_.dimension - 1}")
    n = complex_.dimension
    factor = math.factorial(k + 2)
    worst = 0
    for tau in complex_.simplexes(k):
        lhs = factor * sum(complex_.weight(s) for s in complex_.cofaces(tau))
        rhs = (n - k) * factor * complex_.weight(tau)
        worst = max(worst, abs(lhs - rhs))
    return worst


def check_weight_identity(complex_: SimplicialComplex, k: int) -> bool:
    return weight_identity_residual(complex_, k) == 0
