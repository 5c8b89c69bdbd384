"""
Finite groups of simplicial automorphisms acting on vertex indices.

Elements are stored as permutation tuples ``p`` with ``p[v]`` the image of
vertex ``v``. The product ``g*h`` acts by ``h`` first, then ``g``.
"""

import logging
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations, permutations
from typing import Callable, Mapping, Sequence

import numpy as np
from sympy.combinatorics import Permutation as SympyPermutation

from .complex_core import Simplex, SimplicialComplex
from .constants import DEFAULT_GROUP_CAP, SWITCHING_TOL
from .errors import (
    CapExceeded,
    IndexOutOfRange,
    InvalidAction,
    NotABijection,
    NotInvariant,
    UnknownVertex,
)

logger = logging.getLogger(__name__)

Permutation = tuple[int, ...]


@dataclass(frozen=True, eq=False)
class Group:
    degree: int
    elements: tuple[Permutation, ...]
    # element index of every input generator, in input order
    generators: tuple[int, ...] = ()
    # (parent element, generator position) for the BFS tree; identity has (-1, -1)
    parents: tuple[tuple[int, int], ...] = ()
    _index: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._index.update({p: i for i, p in enumerate(self.elements)})

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, perm: Sequence[int]) -> int:
        return self._index[tuple(perm)]

    def product(self, i: int, j: int) -> int:
        g, h = self.elements[i], self.elements[j]
        return self._index[tuple(g[v] for v in h)]

    def inverse(self, i: int) -> int:
        g = self.elements[i]
        inv = [0] * len(g)
        for v, image in enumerate(g):
            inv[image] = v
        return self._index[tuple(inv)]

    def act(self, i: int, simplex: Sequence[int]) -> Simplex:
        g = self.elements[i]
        return tuple(g[v] for v in simplex)

    def subgroup(self, indices: Sequence[int]) -> "Group":
        """The subgroup on the given element indices (identity must be included)."""
        chosen = sorted(set(indices))
        if not chosen or chosen[0] != 0:
            raise InvalidAction("subgroup must contain the identity")
        return Group(degree=self.degree, elements=tuple(self.elements[i] for i in chosen))


def permutation_sign(perm: Sequence[int]) -> int:
    return SympyPermutation(list(perm)).signature()


def permutation_from_mapping(labels: Sequence[str], mapping: Mapping[str, str]) -> Permutation:
    """Vertex permutation from a (possibly partial) label map; unmapped vertices are fixed."""
    index = {lbl: i for i, lbl in enumerate(labels)}
    unknown = [v for pair in mapping.items() for v in pair if v not in index]
    if unknown:
        raise UnknownVertex(f"generator references undeclared vertices {sorted(set(unknown))}")
    images = list(range(len(labels)))
    for src, dst in mapping.items():
        images[index[src]] = index[dst]
    if len(set(images)) != len(images):
        raise NotABijection(f"generator {dict(mapping)} is not a bijection")
    return tuple(images)


def close_group(
    generators: Sequence[Sequence[int]],
    degree: int,
    cap: int = DEFAULT_GROUP_CAP,
) -> Group:
    """
    Breadth-first closure of the permutation group generated by ``generators``.

    Element order is deterministic: identity first, then BFS discovery order
    over the generators in input order.
    """
    if cap < 1:
        raise CapExceeded("closure cap must be at least 1")
    gens = []
    for gen in generators:
        perm = tuple(int(v) for v in gen)
        if len(perm) != degree or sorted(perm) != list(range(degree)):
            raise NotABijection(f"{perm} is not a bijection of {degree} points")
        gens.append(perm)

    identity = tuple(range(degree))
    elements = [identity]
    parents = [(-1, -1)]
    seen = {identity: 0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        current = elements[x]
        for pos, gen in enumerate(gens):
            y = tuple(gen[v] for v in current)
            if y in seen:
                continue
            if len(elements) >= cap:
                raise CapExceeded(f"group closure exceeds cap {cap}")
            seen[y] = len(elements)
            elements.append(y)
            parents.append((x, pos))
            queue.append(seen[y])

    group = Group(
        degree=degree,
        elements=tuple(elements),
        generators=tuple(seen[g] for g in gens),
        parents=tuple(parents),
    )
    logger.debug("closed group of order %d from %d generators", group.order, len(gens))
    return group


def trivial_group(degree: int) -> Group:
    return close_group([], degree)


# --------------------------------------------------------------
# Action checks
# --------------------------------------------------------------
@dataclass
class ActionReport:
    valid: bool
    violations: list[str]


def verify_action(complex_: SimplicialComplex, group: Group) -> ActionReport:
    violations = []
    for i, g in enumerate(group.elements):
        for k in range(complex_.dimension + 1):
            for s in complex_.simplexes(k):
                image = tuple(sorted(g[v] for v in s))
                if image not in complex_.weights:
                    violations.append(
                        f"element {i} maps {complex_.format_simplex(s)} "
                        f"to non-simplex {complex_.format_simplex(image)}"
                    )
                elif complex_.weights[image] != complex_.weights[s]:
                    violations.append(
                        f"element {i} changes weight of {complex_.format_simplex(s)}"
                    )
    return ActionReport(valid=not violations, violations=violations)


# --------------------------------------------------------------
# Orbits and stabilizers
# --------------------------------------------------------------
@dataclass(frozen=True)
class OrbitData:
    degree: int
    representatives: tuple[Simplex, ...]
    orbits: tuple[tuple[Simplex, ...], ...]
    # ordered simplex -> position of its orbit
    orbit_of: Mapping[Simplex, int]
    # ordered simplex -> element h with h·rep = simplex
    transporter: Mapping[Simplex, int]
    # pointwise (ordered) stabilizer Γ_σ of each representative
    stabilizers: tuple[tuple[int, ...], ...]
    unordered_representatives: tuple[Simplex, ...]
    unordered_orbits: tuple[tuple[Simplex, ...], ...]
    # setwise stabilizer of each unordered representative with the induced sign
    setwise_stabilizers: tuple[tuple[tuple[int, int], ...], ...]


def pointwise_stabilizer(group: Group, simplex: Sequence[int]) -> tuple[int, ...]:
    simplex = tuple(simplex)
    return tuple(i for i in range(group.order) if group.act(i, simplex) == simplex)


def setwise_stabilizer(group: Group, simplex: Sequence[int]) -> tuple[tuple[int, int], ...]:
    """Elements fixing the vertex set, paired with the sign of the induced reordering."""
    simplex = tuple(simplex)
    position = {v: i for i, v in enumerate(simplex)}
    out = []
    for i in range(group.order):
        image = group.act(i, simplex)
        if set(image) == set(simplex):
            out.append((i, permutation_sign([position[v] for v in image])))
    return tuple(out)


def _check_image(complex_: SimplicialComplex, source: Simplex, image: Simplex) -> None:
    if not complex_.contains(image):
        raise InvalidAction(
            f"{complex_.format_simplex(source)} is mapped to non-simplex "
            f"{complex_.format_simplex(image)}"
        )
    if complex_.weight(image) != complex_.weight(source):
        raise InvalidAction(f"weight of {complex_.format_simplex(source)} is not preserved")


def orbit_data(
    complex_: SimplicialComplex,
    group: Group,
    k: int,
    rng: np.random.Generator | None = None,
) -> OrbitData:
    """
    Orbit partition of Σ(k) and X(k).

    Representatives are lexicographic minima unless ``rng`` is given, in which
    case a random member of each orbit is chosen (used to check that norms do
    not depend on the choice).
    """
    orbits, reps, orbit_of, transporter, stabs = [], [], {}, {}, []
    for sigma in complex_.ordered(k):
        if sigma in orbit_of:
            continue
        images = [group.act(i, sigma) for i in range(group.order)]
        for image in images:
            _check_image(complex_, sigma, image)
        members = sorted(set(images))
        rep = members[int(rng.integers(len(members)))] if rng is not None else members[0]
        to_rep = group.inverse(images.index(rep))
        slot = len(reps)
        for i, image in enumerate(images):
            if image not in orbit_of:
                orbit_of[image] = slot
                transporter[image] = group.product(i, to_rep)
        reps.append(rep)
        orbits.append(tuple(members))
        stabs.append(pointwise_stabilizer(group, rep))

    order = sorted(range(len(reps)), key=lambda i: reps[i])
    renumber = {old: new for new, old in enumerate(order)}
    orbit_of = {s: renumber[o] for s, o in orbit_of.items()}

    u_reps, u_orbits, u_stabs, u_seen = [], [], [], set()
    for s in complex_.simplexes(k):
        if s in u_seen:
            continue
        members = sorted({tuple(sorted(group.act(i, s))) for i in range(group.order)})
        u_seen.update(members)
        u_reps.append(members[0])
        u_orbits.append(tuple(members))
        u_stabs.append(setwise_stabilizer(group, members[0]))

    data = OrbitData(
        degree=k,
        representatives=tuple(reps[i] for i in order),
        orbits=tuple(orbits[i] for i in order),
        orbit_of=orbit_of,
        transporter=transporter,
        stabilizers=tuple(stabs[i] for i in order),
        unordered_representatives=tuple(u_reps),
        unordered_orbits=tuple(u_orbits),
        setwise_stabilizers=tuple(u_stabs),
    )
    logger.debug(
        "degree %d: %d ordered orbits, %d unordered orbits",
        k,
        len(data.representatives),
        len(data.unordered_representatives),
    )
    return data


# --------------------------------------------------------------
# Switching sums
# --------------------------------------------------------------
PairFunction = Callable[[Simplex, Simplex], float]


def _ordered_subfaces(sigma: Simplex, l: int):
    for subset in combinations(sigma, l + 1):
        yield from permutations(subset)


def _ordered_supersets(complex_: SimplicialComplex, tau: Simplex, k: int):
    base = set(tau)
    for s in complex_.simplexes(k):
        if base.issubset(s):
            yield from permutations(s)


def switching_sums(
    complex_: SimplicialComplex,
    group: Group,
    l: int,
    k: int,
    f: PairFunction,
) -> tuple[float, float]:
    """Both sides of the switching identity: (sum over Σ(k,Γ), sum over Σ(l,Γ))."""
    high = orbit_data(complex_, group, k)
    low = orbit_data(complex_, group, l)
    lhs = sum(
        sum(f(tau, sigma) for tau in _ordered_subfaces(sigma, l)) / len(stab)
        for sigma, stab in zip(high.representatives, high.stabilizers)
    )
    rhs = sum(
        sum(f(tau, sigma) for sigma in _ordered_supersets(complex_, tau, k)) / len(stab)
        for tau, stab in zip(low.representatives, low.stabilizers)
    )
    return float(lhs), float(rhs)


def check_switching_sums(
    complex_: SimplicialComplex,
    group: Group,
    l: int,
    k: int,
    f: PairFunction,
    rng: np.random.Generator | None = None,
    spot_checks: int = 20,
    tol: float = SWITCHING_TOL,
) -> bool:
    if not 0 <= l < k <= complex_.dimension:
        raise IndexOutOfRange(f"need 0 <= l < k <= n, got l={l}, k={k}")
    rng = rng if rng is not None else np.random.default_rng(0)
    sigmas = complex_.ordered(k)
    for _ in range(spot_checks):
        sigma = sigmas[int(rng.integers(len(sigmas)))]
        tau = sigma[: l + 1]
        g = int(rng.integers(group.order))
        if not np.isclose(f(group.act(g, tau), group.act(g, sigma)), f(tau, sigma)):
            raise NotInvariant(f"pair function is not invariant at {tau}, {sigma}")
    lhs, rhs = switching_sums(complex_, group, l, k, f)
    scale = max(abs(lhs), abs(rhs))
    return abs(lhs - rhs) <= tol * scale
